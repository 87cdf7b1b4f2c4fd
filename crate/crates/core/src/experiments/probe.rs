use thiserror::Error;

use super::perturbation::{make_perturbation, PerturbationSpec};
use crate::dynamics::{integrate, BlowUp, IntegrateError, SolverConfig, TrajectoryObserver};
use crate::error::{FieldError, Result};
use crate::invariants::{cutoff_quartic_with, energy, enstrophy, CutoffSpec};
use crate::shell::{
    extract_shell_coordinates, p_star, perp_norm, project_shell, shell_distance, sqrt2_monitor,
    ShellCoordinates, UNIT_MODE_NORM_SQ,
};
use crate::spectral::{inverse_transform, GridSpec, SpectralField};

/// Diagnostics at one observed time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub energy: f64,
    pub enstrophy: f64,
    /// Modified Casimir `I(ω)`.
    pub casimir_i: f64,
    pub perp_norm: f64,
    pub shell_distance: f64,
    pub coords: ShellCoordinates,
    pub chi_active: bool,
    /// `I(Pω)`.
    pub casimir_i_shell: f64,
    /// `I(P*ω)`.
    pub casimir_i_pstar: f64,
}

/// Computes a [`Sample`] for a state against the target set `S^{α,β}`.
pub fn sample_state(t: f64, s: &SpectralField, alpha: f64, beta: f64) -> Result<Sample> {
    let cutoff = CutoffSpec::default();
    let e = energy(s)?;
    let real = inverse_transform(s);
    let full = cutoff_quartic_with(&real, e.sqrt(), &cutoff);
    let coords = extract_shell_coordinates(s);
    // P ω and P*ω share ‖u‖ = ‖ω‖ on the shell
    let shell_velocity = (UNIT_MODE_NORM_SQ * (coords.a * coords.a + coords.b * coords.b)).sqrt();
    let shell_real = inverse_transform(&project_shell(s));
    let on_shell = cutoff_quartic_with(&shell_real, shell_velocity, &cutoff);
    let pstar = cutoff_quartic_with(&p_star(&coords, s.grid()), shell_velocity, &cutoff);
    Ok(Sample {
        t,
        energy: e,
        enstrophy: enstrophy(s),
        casimir_i: full.value,
        perp_norm: perp_norm(s),
        shell_distance: shell_distance(s, alpha, beta),
        coords,
        chi_active: full.chi_active,
        casimir_i_shell: on_shell.value,
        casimir_i_pstar: pstar.value,
    })
}

/// Maximum relative change `|Q(t) − Q(0)| / |Q(0)|` (absolute when `Q(0) = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Drifts {
    pub energy: f64,
    pub enstrophy: f64,
    pub casimir_i: f64,
}

fn relative_drift(samples: &[Sample], q: impl Fn(&Sample) -> f64) -> f64 {
    let Some(first) = samples.first() else { return 0.0 };
    let q0 = q(first);
    let scale = if q0 == 0.0 { 1.0 } else { q0.abs() };
    samples.iter().fold(0.0f64, |m, s| m.max((q(s) - q0).abs() / scale))
}

/// One trajectory's diagnostics.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub horizon: f64,
    pub dt: f64,
    pub observer_stride: usize,
    pub n: usize,
    pub samples: Vec<Sample>,
    pub sup_distance: f64,
    pub drifts: Drifts,
    pub sqrt2_ratio: f64,
    /// True if the cutoff left its plateau at any sample.
    pub chi_active: bool,
    pub cfl_violations: usize,
    /// Last observed state (the last finite one after a blow-up).
    pub final_state: SpectralField,
    pub completed: bool,
}

impl RunRecord {
    fn assemble(
        theta: f64,
        epsilon: f64,
        solver: &SolverConfig,
        samples: Vec<Sample>,
        final_state: SpectralField,
        cfl_violations: usize,
        completed: bool,
    ) -> Self {
        let series: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.perp_norm)).collect();
        let sqrt2_ratio = sqrt2_monitor(&series).unwrap_or(0.0);
        Self {
            theta,
            alpha: theta.cos(),
            beta: theta.sin(),
            epsilon,
            horizon: solver.t_final,
            dt: solver.dt,
            observer_stride: solver.observer_stride,
            n: final_state.grid().n(),
            sup_distance: samples.iter().fold(0.0f64, |m, s| m.max(s.shell_distance)),
            drifts: Drifts {
                energy: relative_drift(&samples, |s| s.energy),
                enstrophy: relative_drift(&samples, |s| s.enstrophy),
                casimir_i: relative_drift(&samples, |s| s.casimir_i),
            },
            sqrt2_ratio,
            chi_active: samples.iter().any(|s| s.chi_active),
            samples,
            cfl_violations,
            final_state,
            completed,
        }
    }

    pub fn initial_distance(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.shell_distance)
    }
}

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Invalid(#[from] FieldError),
    #[error("{report}")]
    BlowUp { report: Box<BlowUp>, partial: Box<RunRecord> },
}

/// `cos θ cos x + sin θ cos y`.
pub fn shell_state(theta: f64, grid: GridSpec) -> SpectralField {
    ShellCoordinates::canonical(theta.cos().abs(), theta.sin().abs())
        .expect("finite amplitudes")
        .to_spectral(grid)
}

struct Recorder {
    alpha: f64,
    beta: f64,
    samples: Vec<Sample>,
    error: Option<FieldError>,
}

impl TrajectoryObserver for Recorder {
    fn observe(&mut self, t: f64, state: &SpectralField) {
        match sample_state(t, state, self.alpha, self.beta) {
            Ok(s) => self.samples.push(s),
            Err(e) => {
                self.error.get_or_insert(e);
            }
        }
    }
}

/// Perturbs the canonical shell state at angle `theta` and records the
/// distance to `S^{cos θ, sin θ}` along the trajectory.
pub fn run_stability_probe(
    theta: f64,
    pert: &PerturbationSpec,
    solver: &SolverConfig,
    grid: GridSpec,
) -> std::result::Result<RunRecord, ProbeError> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(FieldError::InvalidArgument(format!("theta {theta} outside [0, π/2]")).into());
    }
    solver.validate()?;
    let base = shell_state(theta, grid);
    let initial = if pert.epsilon == 0.0 {
        base
    } else {
        base.sum(&make_perturbation(pert, grid)?)?
    };
    let mut recorder = Recorder { alpha: theta.cos(), beta: theta.sin(), samples: Vec::new(), error: None };
    let outcome = integrate(&initial, solver, &mut recorder);
    if let Some(e) = recorder.error {
        return Err(e.into());
    }
    match outcome {
        Ok(run) => Ok(RunRecord::assemble(
            theta,
            pert.epsilon,
            solver,
            recorder.samples,
            run.state,
            run.cfl_violations,
            true,
        )),
        Err(IntegrateError::Invalid(e)) => Err(e.into()),
        Err(IntegrateError::BlowUp(report)) => {
            let partial = RunRecord::assemble(
                theta,
                pert.epsilon,
                solver,
                recorder.samples,
                report.last_good.clone(),
                0,
                false,
            );
            Err(ProbeError::BlowUp { report, partial: Box::new(partial) })
        }
    }
}
