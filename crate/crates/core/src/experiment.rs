//! Experiment configuration and the replication sweep over configurations
//! and matching thresholds.

use std::path::PathBuf;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, OverlayNetwork};
use crate::metrics::{CellKey, MetricsReport};
use crate::search::{run_search, SearchMode, SearchRequest};
use crate::semantic::{random_description, AllowableError};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub num_nodes: usize,
    pub max_connections: usize,
    pub requests_per_node: usize,
    pub hop_limit: u32,
    pub error_levels: Vec<f64>,
    pub configs: Vec<SearchMode>,
    pub replications: usize,
    pub seed: u64,
    /// Size of the separate adaptive run used for topology snapshots.
    pub snapshot_nodes: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            num_nodes: 300,
            max_connections: 15,
            requests_per_node: 50,
            hop_limit: 10,
            error_levels: (0..=6).map(f64::from).collect(),
            configs: SearchMode::ALL.to_vec(),
            replications: 1,
            seed: 0,
            snapshot_nodes: Some(50),
        }
    }
}

/// Everything a command line or config file can set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Invocation {
    pub config: ExperimentConfig,
    pub out_csv: Option<PathBuf>,
    pub out_dot_prefix: Option<PathBuf>,
}

pub const KEYS: [&str; 11] = [
    "num-nodes",
    "max-connections",
    "requests-per-node",
    "hop-limit",
    "error-levels",
    "configs",
    "replications",
    "seed",
    "snapshot-nodes",
    "out-csv",
    "out-dot-prefix",
];

fn usage(key: &str, reason: impl Into<String>) -> Error {
    Error::Usage {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| usage(key, format!("`{value}` is not a valid number")))
}

fn positive(key: &str, value: &str) -> Result<usize> {
    match parse_num::<usize>(key, value)? {
        0 => Err(usage(key, "must be at least 1")),
        v => Ok(v),
    }
}

impl Invocation {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let cfg = &mut self.config;
        match key {
            "num-nodes" => cfg.num_nodes = positive(key, value)?,
            "max-connections" => cfg.max_connections = positive(key, value)?,
            "requests-per-node" => cfg.requests_per_node = positive(key, value)?,
            "hop-limit" => {
                cfg.hop_limit = parse_num(key, value)?;
                if cfg.hop_limit == 0 {
                    return Err(usage(key, "must be at least 1"));
                }
            }
            "error-levels" => {
                cfg.error_levels = value
                    .split(',')
                    .map(|v| parse_num::<f64>(key, v))
                    .collect::<Result<_>>()?
            }
            "configs" => {
                cfg.configs = value
                    .split(',')
                    .map(|v| {
                        v.parse::<SearchMode>().map_err(|_| {
                            usage(key, format!("unknown configuration `{}`", v.trim()))
                        })
                    })
                    .collect::<Result<_>>()?
            }
            "replications" => cfg.replications = positive(key, value)?,
            "seed" => cfg.seed = parse_num(key, value)?,
            "snapshot-nodes" => {
                cfg.snapshot_nodes = match value.trim() {
                    "none" | "0" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            "out-csv" => self.out_csv = Some(PathBuf::from(value.trim())),
            "out-dot-prefix" => self.out_dot_prefix = Some(PathBuf::from(value.trim())),
            other => return Err(usage(other, "unknown key")),
        }
        Ok(())
    }

    /// Applies a config file of `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                reason: format!("expected `key = value`, found `{line}`"),
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(usage("num-nodes", "a network needs at least 2 nodes"));
        }
        if self.max_connections == 0 || (self.num_nodes > 2 && self.max_connections < 2) {
            return Err(usage(
                "max-connections",
                "must be at least 2 for networks larger than 2 nodes",
            ));
        }
        if self.requests_per_node == 0 {
            return Err(usage("requests-per-node", "must be at least 1"));
        }
        if self.hop_limit == 0 {
            return Err(usage("hop-limit", "must be at least 1"));
        }
        if self.error_levels.is_empty() {
            return Err(usage("error-levels", "at least one level is required"));
        }
        for &e in &self.error_levels {
            AllowableError::new(e)
                .map_err(|_| usage("error-levels", format!("{e} is outside [0, 12]")))?;
        }
        if self.error_levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage("error-levels", "levels must be strictly ascending"));
        }
        if self.configs.is_empty() {
            return Err(usage("configs", "at least one configuration is required"));
        }
        let mut sorted = self.configs.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.configs.len() {
            return Err(usage("configs", "duplicate configuration"));
        }
        if self.replications == 0 {
            return Err(usage("replications", "must be at least 1"));
        }
        if let Some(n) = self.snapshot_nodes {
            if n < 2 {
                return Err(usage("snapshot-nodes", "a network needs at least 2 nodes"));
            }
            if n > 2 && self.max_connections < 2 {
                return Err(usage(
                    "snapshot-nodes",
                    "max-connections too small for this size",
                ));
            }
        }
        Ok(())
    }
}

/// Seed for replication `r`, independent of every other replication.
pub fn replication_seed(seed: u64, replication: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication as u64 + 1);
    rng.next_u64()
}

fn snapshot_seed(seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng.next_u64()
}

/// Runs the full request schedule for one cell on a fresh topology.
///
/// Every node originates `requests_per_node` requests; rounds interleave
/// originators so node 0's k-th request precedes node 1's k-th request.
/// Returns the final network and the number of swaps performed.
pub fn run_cell(
    cfg: &ExperimentConfig,
    num_nodes: usize,
    rep_seed: u64,
    mode: SearchMode,
    level: AllowableError,
    report: &mut MetricsReport,
) -> Result<(OverlayNetwork, OverlayNetwork)> {
    let mut topo_rng = ChaCha8Rng::seed_from_u64(rep_seed);
    let mut request_rng = ChaCha8Rng::seed_from_u64(rep_seed);
    request_rng.set_stream(1);

    let initial = OverlayNetwork::generate(num_nodes, cfg.max_connections, &mut topo_rng)?;
    let mut net = initial.clone();
    let key = CellKey::new(mode, level);
    let mut swaps = 0u64;
    for _round in 0..cfg.requests_per_node {
        for origin in 0..num_nodes {
            let target = random_description(&mut request_rng);
            let req = SearchRequest::new(NodeId(origin), target, level, cfg.hop_limit)?;
            let run = run_search(&mut net, mode, &req)?;
            swaps += run.rewirings.len() as u64;
            report.record_outcome(key, &run.outcome);
        }
    }
    report.record_swaps(key, swaps);
    Ok((initial, net))
}

/// One replication: every configured mode at every configured level.
pub fn run_replication(cfg: &ExperimentConfig, replication: usize) -> Result<MetricsReport> {
    let rep_seed = replication_seed(cfg.seed, replication);
    let mut report = MetricsReport::new();
    for &mode in &cfg.configs {
        for &e in &cfg.error_levels {
            let level = AllowableError::new(e)?;
            run_cell(cfg, cfg.num_nodes, rep_seed, mode, level, &mut report).map_err(|source| {
                Error::Run {
                    replication,
                    mode: mode.label(),
                    level: e,
                    source: Box::new(source),
                }
            })?;
        }
    }
    Ok(report)
}

/// Topology before and after an adaptive run.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub initial: OverlayNetwork,
    pub adapted: OverlayNetwork,
    pub swaps: u64,
}

/// Adaptive run on a small network for topology snapshots, at the lowest
/// configured error level.
pub fn run_snapshot(cfg: &ExperimentConfig, num_nodes: usize, seed: u64) -> Result<Snapshot> {
    let level = AllowableError::new(cfg.error_levels.first().copied().unwrap_or(0.0))?;
    let mut report = MetricsReport::new();
    let (initial, adapted) = run_cell(
        cfg,
        num_nodes,
        seed,
        SearchMode::Adaptive,
        level,
        &mut report,
    )?;
    let swaps = report.cells().map(|(_, c)| c.swaps).sum();
    Ok(Snapshot {
        initial,
        adapted,
        swaps,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub report: MetricsReport,
    pub snapshot: Option<Snapshot>,
}

/// Runs every replication (concurrently) and merges their reports in
/// replication order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let reports: Vec<MetricsReport> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| run_replication(cfg, r))
        .collect::<Result<_>>()?;
    let mut report = MetricsReport::new();
    for r in &reports {
        report.merge(r);
    }
    let snapshot = cfg
        .snapshot_nodes
        .map(|n| run_snapshot(cfg, n, snapshot_seed(cfg.seed)))
        .transpose()?;
    Ok(ExperimentOutput { report, snapshot })
}
