//! Run reports: per-time-point weight and depth statistics.

use serde::Serialize;

use gapscope_core::shadows::{ExperimentOutput, ExperimentPlan};

/// Per-time-point statistics of the sampled circuits against the
/// deterministic Trotter reference.
#[derive(Debug, Clone, Serialize)]
pub struct TimePointReport {
    /// Time index, 1-based.
    pub s: usize,
    /// Nominal time of the point.
    pub t: f64,
    /// Trotter steps at this point.
    pub k_steps: usize,
    /// |Γ| shared by all samples at this point.
    pub gamma_abs: f64,
    /// Fraction of samples with negative Γ.
    pub negative_gamma_fraction: f64,
    /// Mean sampled circuit depth.
    pub mean_depth: f64,
    /// Largest sampled circuit depth.
    pub max_depth: usize,
    /// Mean retained gate count.
    pub mean_gate_count: f64,
    /// Depth of the reference Trotter circuit.
    pub trotter_depth: usize,
    /// Gate count of the reference Trotter circuit.
    pub trotter_gate_count: usize,
}

/// Whole-run report written next to the snapshot file.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// Evolution method.
    pub method: String,
    /// Master seed.
    pub seed: u64,
    /// Config digest.
    pub config_sha: String,
    /// True when the initial state touched a degenerate level.
    pub degenerate_initial: bool,
    /// Total snapshot records collected.
    pub total_records: usize,
    /// Wall-clock seconds of the collection stage.
    pub wall_seconds: f64,
    /// Mean sampled depth over all cells.
    pub mean_sampled_depth: f64,
    /// Largest sampled depth.
    pub max_sampled_depth: usize,
    /// Mean Trotter reference depth over time points.
    pub mean_trotter_depth: f64,
    /// mean_sampled_depth / mean_trotter_depth.
    pub depth_ratio: f64,
    /// Per-time-point details.
    pub per_time: Vec<TimePointReport>,
}

/// Assemble the report from a finished run.
pub fn build_report(
    plan: &ExperimentPlan,
    output: &ExperimentOutput,
    config_sha: &str,
    wall_seconds: f64,
) -> RunReport {
    let meta = output.set.meta();
    let n_t = plan.grid().n_t();
    let mut per_time = Vec::with_capacity(n_t);
    for s in 1..=n_t {
        let cells: Vec<_> = output.cells.iter().filter(|c| c.s == s).collect();
        let count = cells.len().max(1) as f64;
        let gamma_abs = cells.first().map(|c| c.gamma.abs()).unwrap_or(1.0);
        let negative = cells.iter().filter(|c| c.gamma < 0.0).count() as f64 / count;
        let mean_depth = cells.iter().map(|c| c.depth as f64).sum::<f64>() / count;
        let max_depth = cells.iter().map(|c| c.depth).max().unwrap_or(0);
        let mean_gate_count = cells.iter().map(|c| c.gate_count as f64).sum::<f64>() / count;
        let (trotter_depth, trotter_gate_count) = plan.trotter_reference(s);
        per_time.push(TimePointReport {
            s,
            t: plan.grid().time_at(s),
            k_steps: plan.grid().steps_at(s),
            gamma_abs,
            negative_gamma_fraction: negative,
            mean_depth,
            max_depth,
            mean_gate_count,
            trotter_depth,
            trotter_gate_count,
        });
    }
    let mean_sampled_depth =
        output.cells.iter().map(|c| c.depth as f64).sum::<f64>() / output.cells.len().max(1) as f64;
    let max_sampled_depth = output.cells.iter().map(|c| c.depth).max().unwrap_or(0);
    let mean_trotter_depth =
        per_time.iter().map(|p| p.trotter_depth as f64).sum::<f64>() / per_time.len().max(1) as f64;
    RunReport {
        method: meta.method.as_str().into(),
        seed: meta.seed,
        config_sha: config_sha.into(),
        degenerate_initial: meta.degenerate_initial,
        total_records: output.set.records().len(),
        wall_seconds,
        mean_sampled_depth,
        max_sampled_depth,
        mean_trotter_depth,
        depth_ratio: if mean_trotter_depth > 0.0 {
            mean_sampled_depth / mean_trotter_depth
        } else {
            1.0
        },
        per_time,
    }
}
