//! The overlay network: a symmetric, bounded-degree graph of peers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::semantic::{distance, random_description, Distance, ResourceDescription};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bounded memory of peers a node has heard about through search traffic.
///
/// When full, the entry farthest from the owner's description is evicted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeerCache {
    owner: NodeId,
    owner_description: ResourceDescription,
    capacity: usize,
    entries: BTreeMap<NodeId, ResourceDescription>,
}

/// Result of offering an observation to a [`PeerCache`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Inserted,
    Refreshed,
    /// Inserted after evicting the given incumbent.
    Replaced(NodeId),
    /// The offered peer was the farthest candidate and was not kept.
    Discarded,
    /// The peer is the cache owner.
    RejectedSelf,
}

impl PeerCache {
    pub fn new(owner: NodeId, owner_description: ResourceDescription, capacity: usize) -> Self {
        Self {
            owner,
            owner_description,
            capacity,
            entries: BTreeMap::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, peer: NodeId) -> Option<&ResourceDescription> {
        self.entries.get(&peer)
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &ResourceDescription)> {
        self.entries.iter().map(|(id, d)| (*id, d))
    }

    pub fn observe(&mut self, peer: NodeId, desc: ResourceDescription) -> Observation {
        if peer == self.owner {
            return Observation::RejectedSelf;
        }
        if let Some(slot) = self.entries.get_mut(&peer) {
            *slot = desc;
            return Observation::Refreshed;
        }
        if self.entries.len() < self.capacity {
            self.entries.insert(peer, desc);
            return Observation::Inserted;
        }
        if self.capacity == 0 {
            return Observation::Discarded;
        }
        // Farthest incumbent; among equals, the highest id.
        let (victim, victim_distance) = self
            .entries
            .iter()
            .map(|(id, d)| (*id, distance(&self.owner_description, d)))
            .max_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("cache is full and non-empty");
        if distance(&self.owner_description, &desc) <= victim_distance {
            self.entries.remove(&victim);
            self.entries.insert(peer, desc);
            Observation::Replaced(victim)
        } else {
            Observation::Discarded
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub id: NodeId,
    pub description: ResourceDescription,
    pub neighbors: BTreeSet<NodeId>,
    pub cache: PeerCache,
}

/// Outcome of a link mutation that was well-formed but possibly refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkUpdate {
    Applied,
    AlreadyLinked,
    AtCapacity,
    NotLinked,
    /// Removal would leave an endpoint with no neighbors.
    WouldIsolate,
}

impl LinkUpdate {
    pub fn is_applied(self) -> bool {
        self == LinkUpdate::Applied
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayNetwork {
    nodes: Vec<NodeState>,
    max_connections: usize,
}

impl OverlayNetwork {
    /// A network with the given descriptions and no links yet.
    pub fn with_descriptions(
        descriptions: Vec<ResourceDescription>,
        max_connections: usize,
    ) -> Result<Self> {
        if max_connections == 0 {
            return Err(Error::Configuration(
                "max_connections must be at least 1".into(),
            ));
        }
        let nodes = descriptions
            .into_iter()
            .enumerate()
            .map(|(i, description)| NodeState {
                id: NodeId(i),
                description,
                neighbors: BTreeSet::new(),
                cache: PeerCache::new(NodeId(i), description, 2 * max_connections),
            })
            .collect();
        Ok(Self {
            nodes,
            max_connections,
        })
    }

    /// Random topology: a random spanning tree under the degree cap, then `n`
    /// attempts at extra uniformly random links.
    pub fn generate<R: Rng + ?Sized>(
        n: usize,
        max_connections: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::Configuration(format!(
                "a network needs at least 2 nodes, got {n}"
            )));
        }
        if max_connections == 0 {
            return Err(Error::Configuration(
                "max_connections must be at least 1".into(),
            ));
        }
        if n > 2 && max_connections < 2 {
            return Err(Error::Configuration(format!(
                "{n} nodes cannot be connected with at most 1 link per node"
            )));
        }
        let descriptions = (0..n).map(|_| random_description(rng)).collect();
        let mut net = Self::with_descriptions(descriptions, max_connections)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut open = Vec::with_capacity(n);
        for k in 1..n {
            open.clear();
            open.extend(
                order[..k]
                    .iter()
                    .copied()
                    .filter(|&i| net.nodes[i].neighbors.len() < max_connections),
            );
            // The most recently attached node has degree 1, so `open` is never
            // empty once the cap is at least 2.
            let parent = *open.choose(rng).expect("an attachable node exists");
            net.link_unchecked(NodeId(order[k]), NodeId(parent));
        }

        for _ in 0..n {
            let a = NodeId(rng.gen_range(0..n));
            let b = NodeId(rng.gen_range(0..n));
            if a != b {
                net.add_link(a, b)?;
            }
        }
        Ok(net)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_connections(&self) -> usize {
        self.max_connections
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn check(&self, id: NodeId) -> Result<()> {
        if id.0 < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(id))
        }
    }

    pub fn node(&self, id: NodeId) -> Result<&NodeState> {
        self.nodes.get(id.0).ok_or(Error::UnknownNode(id))
    }

    pub fn node_mut(&mut self, id: NodeId) -> Result<&mut NodeState> {
        self.nodes.get_mut(id.0).ok_or(Error::UnknownNode(id))
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn neighbors(&self, id: NodeId) -> Result<&BTreeSet<NodeId>> {
        self.node(id).map(|n| &n.neighbors)
    }

    pub fn description(&self, id: NodeId) -> Result<ResourceDescription> {
        self.node(id).map(|n| n.description)
    }

    pub fn degree(&self, id: NodeId) -> Result<usize> {
        self.node(id).map(|n| n.neighbors.len())
    }

    pub fn has_link(&self, a: NodeId, b: NodeId) -> bool {
        self.nodes
            .get(a.0)
            .is_some_and(|n| n.neighbors.contains(&b))
    }

    /// Semantic distance between two nodes' descriptions.
    pub fn node_distance(&self, a: NodeId, b: NodeId) -> Result<Distance> {
        Ok(distance(&self.description(a)?, &self.description(b)?))
    }

    pub fn add_link(&mut self, a: NodeId, b: NodeId) -> Result<LinkUpdate> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        if self.has_link(a, b) {
            return Ok(LinkUpdate::AlreadyLinked);
        }
        if self.nodes[a.0].neighbors.len() >= self.max_connections
            || self.nodes[b.0].neighbors.len() >= self.max_connections
        {
            return Ok(LinkUpdate::AtCapacity);
        }
        self.link_unchecked(a, b);
        Ok(LinkUpdate::Applied)
    }

    /// Removes the link unless that would leave either endpoint isolated.
    pub fn remove_link(&mut self, a: NodeId, b: NodeId) -> Result<LinkUpdate> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        if !self.has_link(a, b) {
            return Ok(LinkUpdate::NotLinked);
        }
        if self.nodes[a.0].neighbors.len() < 2 || self.nodes[b.0].neighbors.len() < 2 {
            return Ok(LinkUpdate::WouldIsolate);
        }
        self.nodes[a.0].neighbors.remove(&b);
        self.nodes[b.0].neighbors.remove(&a);
        Ok(LinkUpdate::Applied)
    }

    fn link_unchecked(&mut self, a: NodeId, b: NodeId) {
        self.nodes[a.0].neighbors.insert(b);
        self.nodes[b.0].neighbors.insert(a);
    }

    /// Undirected links as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.iter().flat_map(|n| {
            n.neighbors
                .range(NodeId(n.id.0 + 1)..)
                .map(move |&m| (n.id, m))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.neighbors.len()).sum::<usize>() / 2
    }

    /// Mean semantic distance across all links; `None` for an edgeless graph.
    pub fn mean_link_distance(&self) -> Option<f64> {
        let (sum, count) = self.edges().fold((0u64, 0u64), |(s, c), (a, b)| {
            let d = distance(&self.nodes[a.0].description, &self.nodes[b.0].description);
            (s + d.value() as u64, c + 1)
        });
        (count > 0).then(|| sum as f64 / count as f64)
    }

    /// Every structural invariant violation, empty when the network is sound.
    pub fn audit(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for n in &self.nodes {
            if n.neighbors.contains(&n.id) {
                problems.push(format!("node {} links to itself", n.id));
            }
            let deg = n.neighbors.len();
            if deg == 0 || deg > self.max_connections {
                problems.push(format!(
                    "node {} has degree {deg}, outside [1, {}]",
                    n.id, self.max_connections
                ));
            }
            for m in &n.neighbors {
                match self.nodes.get(m.0) {
                    None => problems.push(format!("node {} links to unknown {m}", n.id)),
                    Some(other) if !other.neighbors.contains(&n.id) => {
                        problems.push(format!("link {}->{m} is not mirrored", n.id))
                    }
                    _ => {}
                }
            }
            if n.cache.len() > n.cache.capacity() {
                problems.push(format!("node {} cache over capacity", n.id));
            }
            if n.cache.get(n.id).is_some() {
                problems.push(format!("node {} caches itself", n.id));
            }
        }
        problems
    }

    /// True when every node can reach every other.
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for m in &self.nodes[i].neighbors {
                if !seen[m.0] {
                    seen[m.0] = true;
                    reached += 1;
                    stack.push(m.0);
                }
            }
        }
        reached == self.nodes.len()
    }
}
