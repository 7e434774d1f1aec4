//! Command-line front end: flag parsing and output files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Parser;

use crate::csv::render_csv;
use crate::dot::export_dot;
use crate::error::Result;
use crate::experiment::{run_experiment, Invocation, Snapshot};
use crate::metrics::MetricsReport;

/// Flags mirror the config-file keys. Values are validated after merging so
/// that file and flag errors read the same.
#[derive(Debug, Parser)]
#[command(
    name = "overlay-sim",
    version,
    about = "Compare flooding, guided, and self-adapting search over a random P2P overlay"
)]
pub struct Args {
    /// Nodes in the overlay [default: 300]
    #[arg(long, value_name = "N")]
    pub num_nodes: Option<String>,
    /// Degree cap per node [default: 15]
    #[arg(long, value_name = "N")]
    pub max_connections: Option<String>,
    /// Requests originated by each node [default: 50]
    #[arg(long, value_name = "N")]
    pub requests_per_node: Option<String>,
    /// Hop budget per request [default: 10]
    #[arg(long, value_name = "N")]
    pub hop_limit: Option<String>,
    /// Ascending comma list of matching thresholds in [0, 12] [default: 0,1,2,3,4,5,6]
    #[arg(long, value_name = "LIST")]
    pub error_levels: Option<String>,
    /// Comma list drawn from config1, config2, config3 [default: all]
    #[arg(long, value_name = "LIST")]
    pub configs: Option<String>,
    /// Independent replications to average [default: 1]
    #[arg(long, value_name = "N")]
    pub replications: Option<String>,
    /// Master seed [default: 0]
    #[arg(long, value_name = "U64")]
    pub seed: Option<String>,
    /// Nodes in the snapshot run, or `none` [default: 50]
    #[arg(long, value_name = "N")]
    pub snapshot_nodes: Option<String>,
    /// Metrics CSV destination; stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out_csv: Option<String>,
    /// Writes <PREFIX>-initial.dot and <PREFIX>-adapted.dot
    #[arg(long, value_name = "PATH")]
    pub out_dot_prefix: Option<String>,
    /// File of `key = value` lines using the flag names as keys
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

impl Args {
    fn flag_values(&self) -> [(&'static str, Option<&String>); 11] {
        [
            ("num-nodes", self.num_nodes.as_ref()),
            ("max-connections", self.max_connections.as_ref()),
            ("requests-per-node", self.requests_per_node.as_ref()),
            ("hop-limit", self.hop_limit.as_ref()),
            ("error-levels", self.error_levels.as_ref()),
            ("configs", self.configs.as_ref()),
            ("replications", self.replications.as_ref()),
            ("seed", self.seed.as_ref()),
            ("snapshot-nodes", self.snapshot_nodes.as_ref()),
            ("out-csv", self.out_csv.as_ref()),
            ("out-dot-prefix", self.out_dot_prefix.as_ref()),
        ]
    }
}

/// Defaults, overridden by the file text, overridden by flags.
pub fn resolve(args: &Args, file_text: Option<&str>) -> Result<Invocation> {
    let mut inv = Invocation::default();
    if let Some(text) = file_text {
        inv.apply_file(text)?;
    }
    for (key, value) in args.flag_values() {
        if let Some(v) = value {
            inv.set(key, v)?;
        }
    }
    inv.config.validate()?;
    Ok(inv)
}

/// Parses command-line tokens (program name first), reading `--config` if given.
pub fn parse_config<I, T>(tokens: I) -> anyhow::Result<Invocation>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(tokens)?;
    let text = match &args.config {
        Some(path) => Some(
            fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?,
        ),
        None => None,
    };
    Ok(resolve(&args, text.as_deref())?)
}

pub fn emit_csv(report: &MetricsReport, path: &Path) -> anyhow::Result<()> {
    let rows = report.finalize()?;
    fs::write(path, render_csv(&rows)).with_context(|| format!("cannot write {}", path.display()))
}

pub fn snapshot_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let with = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    (with("-initial.dot"), with("-adapted.dot"))
}

pub fn write_snapshot(snapshot: &Snapshot, prefix: &Path) -> anyhow::Result<()> {
    let (initial, adapted) = snapshot_paths(prefix);
    fs::write(&initial, export_dot(&snapshot.initial))
        .with_context(|| format!("cannot write {}", initial.display()))?;
    fs::write(&adapted, export_dot(&snapshot.adapted))
        .with_context(|| format!("cannot write {}", adapted.display()))?;
    Ok(())
}

pub fn run(inv: &Invocation) -> anyhow::Result<()> {
    let output = run_experiment(&inv.config)?;
    match &inv.out_csv {
        Some(path) => emit_csv(&output.report, path)?,
        None => {
            let rows = output.report.finalize()?;
            std::io::stdout().write_all(render_csv(&rows).as_bytes())?;
        }
    }
    if let (Some(prefix), Some(snapshot)) = (&inv.out_dot_prefix, &output.snapshot) {
        write_snapshot(snapshot, prefix)?;
    }
    Ok(())
}
