//! Topology self-adaptation: a forwarding node trades its semantically worst
//! contact for the closest peer it has learned about.

use crate::error::Result;
use crate::graph::{LinkUpdate, NodeId, OverlayNetwork};
use crate::semantic::distance;

/// One performed swap at `node`: the link to `dropped` was replaced by a link
/// to `added`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RewiringAction {
    pub node: NodeId,
    pub dropped: NodeId,
    pub added: NodeId,
}

/// Hook a guided search calls at each forwarding node.
pub trait AdaptationPolicy {
    /// May rewire `node`. `protected` is the tentative next hop and must
    /// survive.
    fn adapt(
        &self,
        net: &mut OverlayNetwork,
        node: NodeId,
        protected: Option<NodeId>,
    ) -> Result<Option<RewiringAction>>;
}

/// The worst-for-best swap used by the adaptive configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct SwapWorstForBest;

impl AdaptationPolicy for SwapWorstForBest {
    fn adapt(
        &self,
        net: &mut OverlayNetwork,
        node: NodeId,
        protected: Option<NodeId>,
    ) -> Result<Option<RewiringAction>> {
        adapt_node(net, node, protected)
    }
}

/// Neighbor farthest from `a`'s description; ties go to the highest id.
pub fn worst_neighbor(net: &OverlayNetwork, a: NodeId) -> Result<Option<NodeId>> {
    worst_neighbor_except(net, a, None)
}

fn worst_neighbor_except(
    net: &OverlayNetwork,
    a: NodeId,
    protected: Option<NodeId>,
) -> Result<Option<NodeId>> {
    let own = net.description(a)?;
    Ok(net
        .neighbors(a)?
        .iter()
        .filter(|&&v| Some(v) != protected)
        .map(|&v| (distance(&own, &net.nodes()[v.index()].description), v))
        .max()
        .map(|(_, v)| v))
}

/// Closest cached peer that `a` could link to right now; ties go to the lowest id.
pub fn best_candidate(net: &OverlayNetwork, a: NodeId) -> Result<Option<NodeId>> {
    let node = net.node(a)?;
    let cap = net.max_connections();
    Ok(node
        .cache
        .iter()
        .filter(|&(p, _)| {
            p != a && !node.neighbors.contains(&p) && net.degree(p).is_ok_and(|deg| deg < cap)
        })
        .map(|(p, d)| (distance(&node.description, d), p))
        .min()
        .map(|(_, p)| p))
}

/// Replaces `a`'s worst unprotected contact with its best cached candidate
/// when the candidate is strictly closer. All-or-nothing: on any refusal the
/// network is left untouched and `None` is returned.
pub fn adapt_node(
    net: &mut OverlayNetwork,
    a: NodeId,
    protected: Option<NodeId>,
) -> Result<Option<RewiringAction>> {
    let Some(worst) = worst_neighbor_except(net, a, protected)? else {
        return Ok(None);
    };
    let Some(candidate) = best_candidate(net, a)? else {
        return Ok(None);
    };
    if net.node_distance(a, candidate)? >= net.node_distance(a, worst)? {
        return Ok(None);
    }
    if net.remove_link(a, worst)? != LinkUpdate::Applied {
        return Ok(None);
    }
    if net.add_link(a, candidate)? != LinkUpdate::Applied {
        let restored = net.add_link(a, worst)?;
        debug_assert_eq!(restored, LinkUpdate::Applied);
        return Ok(None);
    }
    Ok(Some(RewiringAction {
        node: a,
        dropped: worst,
        added: candidate,
    }))
}
