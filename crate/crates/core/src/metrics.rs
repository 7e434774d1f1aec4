//! Aggregation of search outcomes into per-(configuration, threshold) cells.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::search::{SearchMode, SearchOutcome};
use crate::semantic::AllowableError;

#[derive(Debug, Clone, Copy)]
pub struct CellKey {
    pub mode: SearchMode,
    pub allowable_error: AllowableError,
}

impl CellKey {
    pub fn new(mode: SearchMode, allowable_error: AllowableError) -> Self {
        Self {
            mode,
            allowable_error,
        }
    }
}

impl PartialEq for CellKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CellKey {}

impl PartialOrd for CellKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CellKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mode.cmp(&other.mode).then_with(|| {
            self.allowable_error
                .value()
                .total_cmp(&other.allowable_error.value())
        })
    }
}

/// Running totals for one cell. Distance and hop sums only count successes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellStats {
    pub total: u64,
    pub successes: u64,
    pub sum_achieved_distance: u64,
    pub sum_success_hops: u64,
    pub swaps: u64,
}

impl CellStats {
    pub fn record(&mut self, outcome: &SearchOutcome) {
        self.total += 1;
        if let Some(d) = outcome.achieved_distance() {
            self.successes += 1;
            self.sum_achieved_distance += d.value() as u64;
            self.sum_success_hops += outcome.hops() as u64;
        }
    }

    pub fn merge(&mut self, other: &CellStats) {
        self.total += other.total;
        self.successes += other.successes;
        self.sum_achieved_distance += other.sum_achieved_distance;
        self.sum_success_hops += other.sum_success_hops;
        self.swaps += other.swaps;
    }

    /// Mean achieved distance over successful searches.
    pub fn mean_average_error(&self) -> Option<f64> {
        (self.successes > 0).then(|| self.sum_achieved_distance as f64 / self.successes as f64)
    }

    pub fn avg_success_hops(&self) -> Option<f64> {
        (self.successes > 0).then(|| self.sum_success_hops as f64 / self.successes as f64)
    }

    pub fn failure_ratio(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        (self.total - self.successes) as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricsReport {
    cells: BTreeMap<CellKey, CellStats>,
}

/// One finalized line of the report. `None` aggregates had no successes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub mode: SearchMode,
    pub allowable_error: f64,
    pub mean_average_error: Option<f64>,
    pub avg_success_hops: Option<f64>,
    pub failure_ratio: f64,
    pub swaps: u64,
    pub successes: u64,
    pub total: u64,
}

impl MetricsReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_outcome(&mut self, key: CellKey, outcome: &SearchOutcome) {
        self.cells.entry(key).or_default().record(outcome);
    }

    pub fn record_swaps(&mut self, key: CellKey, swaps: u64) {
        self.cells.entry(key).or_default().swaps += swaps;
    }

    pub fn cell(&self, key: &CellKey) -> Option<&CellStats> {
        self.cells.get(key)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellKey, &CellStats)> {
        self.cells.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell-wise sum; associative and commutative.
    pub fn merge(&mut self, other: &MetricsReport) {
        for (key, stats) in &other.cells {
            self.cells.entry(*key).or_default().merge(stats);
        }
    }

    /// One row per populated cell, sorted by configuration then threshold.
    pub fn finalize(&self) -> Result<Vec<ReportRow>> {
        if self.cells.values().all(|c| c.total == 0) {
            return Err(Error::EmptyReport);
        }
        Ok(self
            .cells
            .iter()
            .filter(|(_, c)| c.total > 0)
            .map(|(key, c)| ReportRow {
                mode: key.mode,
                allowable_error: key.allowable_error.value(),
                mean_average_error: c.mean_average_error(),
                avg_success_hops: c.avg_success_hops(),
                failure_ratio: c.failure_ratio(),
                swaps: c.swaps,
                successes: c.successes,
                total: c.total,
            })
            .collect())
    }
}
