//! Simulator of search over unstructured peer-to-peer overlays.
//!
//! Three configurations are compared on identical starting topologies:
//! breadth-first flooding, guided greedy forwarding by semantic distance, and
//! guided forwarding where each forwarding node rewires its worst contact.

pub mod adaptation;
pub mod cli;
pub mod csv;
pub mod dot;
mod error;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod search;
pub mod semantic;

pub use adaptation::{
    adapt_node, best_candidate, worst_neighbor, AdaptationPolicy, RewiringAction, SwapWorstForBest,
};
pub use dot::{export_dot, parse_dot};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentOutput, Invocation};
pub use graph::{LinkUpdate, NodeId, NodeState, OverlayNetwork, PeerCache};
pub use metrics::{CellKey, CellStats, MetricsReport, ReportRow};
pub use search::{
    bfs_search, guided_search, record_observation, run_search, SearchMode, SearchOutcome,
    SearchRequest, SearchRun,
};
pub use semantic::{
    distance, matches, random_description, similarity, AllowableError, Distance,
    ResourceDescription, Similarity,
};
