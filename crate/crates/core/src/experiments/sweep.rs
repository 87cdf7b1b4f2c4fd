use log::warn;
use rayon::prelude::*;

use super::perturbation::PerturbationSpec;
use super::probe::{run_stability_probe, ProbeError, RunRecord};
use crate::dynamics::SolverConfig;
use crate::error::{FieldError, Result};
use crate::spectral::GridSpec;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "FIRSTSHELL_THREADS";

/// `requested` capped by `FIRSTSHELL_THREADS` when set; at least 1.
pub fn effective_workers(requested: usize) -> usize {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok());
    let n = match cap {
        Some(c) if c > 0 => requested.min(c),
        _ => requested,
    };
    n.max(1)
}

#[derive(Debug)]
pub struct SweepEntry {
    pub epsilon: f64,
    pub outcome: std::result::Result<RunRecord, SweepFailure>,
}

#[derive(Debug)]
pub struct SweepFailure {
    pub message: String,
    pub partial: Option<Box<RunRecord>>,
}

#[derive(Debug)]
pub struct SweepResult {
    pub theta: f64,
    /// Ordered by increasing epsilon.
    pub entries: Vec<SweepEntry>,
}

impl SweepResult {
    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    /// Whether `sup_distance` is non-decreasing in epsilon over successful runs.
    /// Observational only.
    pub fn monotone_in_epsilon(&self) -> bool {
        let d: Vec<f64> = self.records().map(|r| r.sup_distance).collect();
        d.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.outcome.is_err()).count()
    }
}

/// Runs one probe per epsilon with a shared perturbation shape.
pub fn sweep_epsilon(
    theta: f64,
    epsilons: &[f64],
    template: &PerturbationSpec,
    solver: &SolverConfig,
    grid: GridSpec,
    workers: usize,
) -> Result<SweepResult> {
    if epsilons.len() < 3 {
        return Err(FieldError::InvalidArgument(format!(
            "a sweep needs at least 3 epsilons, got {}",
            epsilons.len()
        )));
    }
    let mut sorted = epsilons.to_vec();
    if sorted.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(FieldError::InvalidArgument("epsilons must be positive".into()));
    }
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(FieldError::InvalidArgument("epsilons must be distinct".into()));
    }
    solver.validate()?;

    let run = |&epsilon: &f64| {
        let outcome = match run_stability_probe(theta, &template.with_epsilon(epsilon), solver, grid) {
            Ok(r) => Ok(r),
            Err(ProbeError::BlowUp { report, partial }) => {
                warn!("sweep run eps = {epsilon:e} blew up: {report}");
                Err(SweepFailure { message: report.to_string(), partial: Some(partial) })
            }
            Err(ProbeError::Invalid(e)) => Err(SweepFailure { message: e.to_string(), partial: None }),
        };
        SweepEntry { epsilon, outcome }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(effective_workers(workers))
        .build()
        .map_err(|e| FieldError::InvalidArgument(format!("thread pool: {e}")))?;
    // par_iter on a slice preserves order
    let entries = pool.install(|| sorted.par_iter().map(run).collect());
    Ok(SweepResult { theta, entries })
}
