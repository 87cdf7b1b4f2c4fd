//! Perturbation experiments around the first shell.
//!
//! A probe perturbs `cos θ cos x + sin θ cos y` by a field of L² size ε and
//! records the distance to the translate family `S^{cos θ, sin θ}` along the
//! trajectory. Sweeps repeat this over ε with a fixed perturbation shape and
//! fit `sup_t d(ω(t), S) ~ C ε^p` in log-log space.

mod analysis;
mod perturbation;
mod probe;
mod sweep;

pub use analysis::{
    fit_exponent, fit_power_law, inequality_chain_monitor, theorem_consistency, ChainReport, ChainRow,
    ConsistencyVerdict, ExponentFit, FitError, DEFAULT_EXPONENT_DELTA,
};
pub use perturbation::{make_perturbation, PerturbationKind, PerturbationSpec, DEFAULT_SPECTRAL_DECAY};
pub use probe::{run_stability_probe, sample_state, shell_state, Drifts, ProbeError, RunRecord, Sample};
pub use sweep::{effective_workers, sweep_epsilon, SweepEntry, SweepFailure, SweepResult, THREADS_ENV};
