//! The three search configurations: hop-limited flooding, guided greedy
//! forwarding, and guided forwarding with a rewiring policy at every hop.

use std::fmt;
use std::str::FromStr;

use crate::adaptation::{AdaptationPolicy, RewiringAction};
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeState, Observation, OverlayNetwork};
use crate::semantic::{distance, AllowableError, Distance, ResourceDescription};

/// Which search configuration a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SearchMode {
    /// Breadth-first flooding (`config1`).
    Flooding,
    /// Greedy guided forwarding with learning (`config2`).
    Guided,
    /// Guided forwarding plus topology adaptation (`config3`).
    Adaptive,
}

impl SearchMode {
    pub const ALL: [SearchMode; 3] = [
        SearchMode::Flooding,
        SearchMode::Guided,
        SearchMode::Adaptive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SearchMode::Flooding => "config1",
            SearchMode::Guided => "config2",
            SearchMode::Adaptive => "config3",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "config1" | "1" | "bfs" => Ok(SearchMode::Flooding),
            "config2" | "2" | "guided" => Ok(SearchMode::Guided),
            "config3" | "3" | "adaptive" => Ok(SearchMode::Adaptive),
            other => Err(Error::Usage {
                key: "configs".into(),
                reason: format!("unknown configuration `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRequest {
    pub originator: NodeId,
    pub target: ResourceDescription,
    pub allowable_error: AllowableError,
    pub hop_limit: u32,
}

impl SearchRequest {
    pub fn new(
        originator: NodeId,
        target: ResourceDescription,
        allowable_error: AllowableError,
        hop_limit: u32,
    ) -> Result<Self> {
        if hop_limit == 0 {
            return Err(Error::ZeroHopLimit);
        }
        Ok(Self {
            originator,
            target,
            allowable_error,
            hop_limit,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchOutcome {
    matched: Option<(NodeId, Distance)>,
    hops: u32,
    messages_sent: u64,
}

impl SearchOutcome {
    pub fn found(node: NodeId, achieved: Distance, hops: u32, messages_sent: u64) -> Self {
        Self {
            matched: Some((node, achieved)),
            hops,
            messages_sent,
        }
    }

    pub fn failed(hops: u32, messages_sent: u64) -> Self {
        Self {
            matched: None,
            hops,
            messages_sent,
        }
    }

    pub fn success(&self) -> bool {
        self.matched.is_some()
    }

    pub fn matched_node(&self) -> Option<NodeId> {
        self.matched.map(|m| m.0)
    }

    pub fn achieved_distance(&self) -> Option<Distance> {
        self.matched.map(|m| m.1)
    }

    pub fn hops(&self) -> u32 {
        self.hops
    }

    pub fn messages_sent(&self) -> u64 {
        self.messages_sent
    }
}

/// Hop-limited breadth-first flooding from the originator.
///
/// Succeeds at the first level holding a match; the lowest id at that level
/// is reported. The originator is never a candidate.
pub fn bfs_search(net: &OverlayNetwork, req: &SearchRequest) -> Result<SearchOutcome> {
    net.check(req.originator)?;
    let mut visited = vec![false; net.len()];
    visited[req.originator.index()] = true;
    let mut frontier = vec![req.originator];
    let mut next = Vec::new();
    let mut messages = 0u64;
    let mut reached = 0;

    for depth in 1..=req.hop_limit {
        next.clear();
        for &u in &frontier {
            for &v in &net.nodes()[u.index()].neighbors {
                if !visited[v.index()] {
                    visited[v.index()] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        messages += next.len() as u64;
        reached = depth;
        let best = next
            .iter()
            .map(|&v| {
                (
                    v,
                    distance(&req.target, &net.nodes()[v.index()].description),
                )
            })
            .filter(|&(_, d)| req.allowable_error.admits(d))
            .min_by_key(|&(v, _)| v);
        if let Some((v, d)) = best {
            return Ok(SearchOutcome::found(v, d, depth, messages));
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    Ok(SearchOutcome::failed(reached, messages))
}

/// Learning step: remember `peer` and its description in `node`'s cache.
pub fn record_observation(
    node: &mut NodeState,
    peer: NodeId,
    desc: ResourceDescription,
) -> Observation {
    node.cache.observe(peer, desc)
}

/// An outcome together with the route the message took and any rewiring it caused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRun {
    pub outcome: SearchOutcome,
    /// Originator first, then every node the message was forwarded to.
    /// Flooding runs record only the originator.
    pub path: Vec<NodeId>,
    pub rewirings: Vec<RewiringAction>,
}

enum Step {
    Match(NodeId, Distance),
    Forward(NodeId),
}

fn choose_next(
    net: &OverlayNetwork,
    at: NodeId,
    visited: &[bool],
    req: &SearchRequest,
) -> Option<Step> {
    let mut best: Option<(NodeId, Distance)> = None;
    for &v in &net.nodes()[at.index()].neighbors {
        if visited[v.index()] {
            continue;
        }
        let d = distance(&req.target, &net.nodes()[v.index()].description);
        // Neighbors iterate in ascending id order, so the first hit is the lowest id.
        if req.allowable_error.admits(d) {
            return Some(Step::Match(v, d));
        }
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((v, d));
        }
    }
    best.map(|(v, _)| Step::Forward(v))
}

fn learn(net: &mut OverlayNetwork, at: NodeId, originator: NodeId, previous: Option<NodeId>) {
    for peer in [Some(originator), previous].into_iter().flatten() {
        if peer != at {
            let desc = net.nodes()[peer.index()].description;
            let node = net.node_mut(at).expect("walk stays inside the network");
            record_observation(node, peer, desc);
        }
    }
}

/// Single-message greedy walk without backtracking.
///
/// At each node the message first updates the node's peer cache, then (when a
/// policy is supplied) lets the node rewire, then moves to a matching unvisited
/// neighbor if one exists, otherwise to the unvisited neighbor closest to the
/// target. Ties go to the lowest id.
pub fn guided_search(
    net: &mut OverlayNetwork,
    req: &SearchRequest,
    policy: Option<&dyn AdaptationPolicy>,
) -> Result<SearchRun> {
    net.check(req.originator)?;
    let mut visited = vec![false; net.len()];
    visited[req.originator.index()] = true;
    let mut path = vec![req.originator];
    let mut rewirings = Vec::new();
    let mut current = req.originator;
    let mut previous = None;
    let mut hops = 0u32;

    loop {
        learn(net, current, req.originator, previous);
        if hops >= req.hop_limit {
            break;
        }
        let mut step = choose_next(net, current, &visited, req);
        if let Some(policy) = policy {
            let protected = step.as_ref().map(|s| match *s {
                Step::Match(v, _) | Step::Forward(v) => v,
            });
            if let Some(action) = policy.adapt(net, current, protected)? {
                rewirings.push(action);
                step = choose_next(net, current, &visited, req);
            }
        }
        match step {
            None => break,
            Some(Step::Match(v, d)) => {
                hops += 1;
                path.push(v);
                learn(net, v, req.originator, Some(current));
                return Ok(SearchRun {
                    outcome: SearchOutcome::found(v, d, hops, hops as u64),
                    path,
                    rewirings,
                });
            }
            Some(Step::Forward(v)) => {
                hops += 1;
                visited[v.index()] = true;
                path.push(v);
                previous = Some(current);
                current = v;
            }
        }
    }
    Ok(SearchRun {
        outcome: SearchOutcome::failed(hops, hops as u64),
        path,
        rewirings,
    })
}

/// Dispatches a request to the engine for `mode`.
pub fn run_search(
    net: &mut OverlayNetwork,
    mode: SearchMode,
    req: &SearchRequest,
) -> Result<SearchRun> {
    match mode {
        SearchMode::Flooding => Ok(SearchRun {
            outcome: bfs_search(net, req)?,
            path: vec![req.originator],
            rewirings: Vec::new(),
        }),
        SearchMode::Guided => guided_search(net, req, None),
        SearchMode::Adaptive => guided_search(net, req, Some(&crate::adaptation::SwapWorstForBest)),
    }
}
