//! Time integration of the vorticity equation `∂ₜω + u·∇ω = ν Δω`.
//!
//! The advection term is evaluated pseudo-spectrally with 2/3 truncation and
//! the state is advanced by classical RK4 with an exact integrating factor
//! `e^{−ν|k|²t}` for the viscous term.

use std::sync::Arc;

use log::warn;
use num_complex::Complex64;
use thiserror::Error;

use crate::error::{FieldError, Result};
use crate::spectral::{
    ensure_zero_mean, hermitian_clean, is_dealiased, dealias, l2_norm, plan, Fft2, GridSpec, SpectralField,
    VelocityField,
};

/// Returned by [`cfl_dt`] when the velocity vanishes.
pub const DEFAULT_DT_CAP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub nu: f64,
    #[serde(default = "default_cfl_safety")]
    pub cfl_safety: f64,
    #[serde(default = "default_observer_stride")]
    pub observer_stride: usize,
}

fn default_cfl_safety() -> f64 {
    0.5
}

fn default_observer_stride() -> usize {
    10
}

impl SolverConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self {
            dt,
            t_final,
            nu: 0.0,
            cfl_safety: default_cfl_safety(),
            observer_stride: default_observer_stride(),
        }
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.observer_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(FieldError::InvalidArgument(what.to_string()));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive and finite");
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad("t_final must be positive and finite");
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return bad("nu must be nonnegative");
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad("cfl_safety must lie in (0, 1]");
        }
        if self.observer_stride == 0 {
            return bad("observer_stride must be at least 1");
        }
        Ok(())
    }

    /// Number of steps, the last one possibly shortened.
    pub fn step_count(&self) -> usize {
        ((self.t_final / self.dt) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Receives the state every `observer_stride` steps, at `t = 0` and at `t_final`.
pub trait TrajectoryObserver {
    fn observe(&mut self, t: f64, state: &SpectralField);
}

impl<F: FnMut(f64, &SpectralField)> TrajectoryObserver for F {
    fn observe(&mut self, t: f64, state: &SpectralField) {
        self(t, state)
    }
}

/// Observer that discards everything.
pub struct NoObserver;

impl TrajectoryObserver for NoObserver {
    fn observe(&mut self, _t: f64, _state: &SpectralField) {}
}

/// Precomputed wavenumber tables and scratch space for one grid size.
pub struct SpectralSolver {
    grid: GridSpec,
    plan: Arc<Fft2>,
    k1: Vec<f64>,
    k2: Vec<f64>,
    k_sq: Vec<f64>,
    inv_k_sq: Vec<f64>,
    keep: Vec<bool>,
    buf_a: Vec<Complex64>,
    buf_b: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for SpectralSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralSolver").field("n", &self.grid.n()).finish()
    }
}

#[inline]
fn times_i(c: Complex64) -> Complex64 {
    Complex64::new(-c.im, c.re)
}

impl SpectralSolver {
    pub fn new(grid: GridSpec) -> Self {
        let len = grid.len();
        let cutoff = grid.dealias_cutoff();
        let mut k1 = Vec::with_capacity(len);
        let mut k2 = Vec::with_capacity(len);
        let mut k_sq = Vec::with_capacity(len);
        let mut inv_k_sq = Vec::with_capacity(len);
        let mut keep = Vec::with_capacity(len);
        for idx in 0..len {
            let (a, b) = grid.mode_at(idx);
            let sq = (a * a + b * b) as f64;
            k1.push(a as f64);
            k2.push(b as f64);
            k_sq.push(sq);
            inv_k_sq.push(if sq == 0.0 { 0.0 } else { 1.0 / sq });
            keep.push(a.abs().max(b.abs()) <= cutoff && !grid.is_nyquist(idx));
        }
        let plan = plan(grid.n());
        let scratch = vec![Complex64::default(); plan.scratch_len()];
        Self {
            grid,
            plan,
            k1,
            k2,
            k_sq,
            inv_k_sq,
            keep,
            buf_a: vec![Complex64::default(); len],
            buf_b: vec![Complex64::default(); len],
            scratch,
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// Writes `−dealias(FFT(u·∇ω))` into `out` and returns `max(|u₁|+|u₂|)`.
    fn advection_into(&mut self, w: &[Complex64], out: &mut [Complex64]) -> f64 {
        let len = self.grid.len();
        for idx in 0..len {
            let wk = w[idx];
            let psi = wk * self.inv_k_sq[idx];
            let u1 = times_i(psi * self.k2[idx]);
            let u2 = -times_i(psi * self.k1[idx]);
            let wx = times_i(wk * self.k1[idx]);
            let wy = times_i(wk * self.k2[idx]);
            // pairs of Hermitian spectra packed as real + i·imag
            self.buf_a[idx] = u1 + times_i(wx);
            self.buf_b[idx] = u2 + times_i(wy);
        }
        self.plan.inverse(&mut self.buf_a, &mut self.scratch);
        self.plan.inverse(&mut self.buf_b, &mut self.scratch);
        let mut max_speed = 0.0f64;
        for idx in 0..len {
            let (a, b) = (self.buf_a[idx], self.buf_b[idx]);
            max_speed = max_speed.max(a.re.abs() + b.re.abs());
            self.buf_a[idx] = Complex64::new(a.re * a.im + b.re * b.im, 0.0);
        }
        self.plan.forward(&mut self.buf_a, &mut self.scratch);
        hermitian_clean(self.grid, &mut self.buf_a, -1.0 / len as f64);
        for idx in 0..len {
            out[idx] = if self.keep[idx] { self.buf_a[idx] } else { Complex64::default() };
        }
        max_speed
    }

    /// Full tendency `−dealias(u·∇ω) − ν|k|²ω̂`.
    pub fn tendency(&mut self, s: &SpectralField, nu: f64) -> Result<SpectralField> {
        self.check(s)?;
        ensure_zero_mean(s)?;
        let mut out = vec![Complex64::default(); self.grid.len()];
        self.advection_into(s.coeffs(), &mut out);
        if nu != 0.0 {
            for ((o, w), ksq) in out.iter_mut().zip(s.coeffs()).zip(&self.k_sq) {
                *o -= w * (nu * ksq);
            }
        }
        Ok(SpectralField::from_raw(self.grid, out))
    }

    fn check(&self, s: &SpectralField) -> Result<()> {
        if s.grid() != self.grid {
            return Err(FieldError::GridMismatch(self.grid.n(), s.grid().n()));
        }
        Ok(())
    }

    /// One integrating-factor RK4 step. `dt` may be negative (backward in time).
    pub fn step(&mut self, s: &SpectralField, dt: f64, nu: f64) -> Result<StepOutcome> {
        self.check(s)?;
        if !(dt.is_finite() && dt != 0.0) {
            return Err(FieldError::InvalidArgument(format!("dt must be finite and nonzero, got {dt}")));
        }
        let len = self.grid.len();
        let w = s.coeffs();
        let viscous = nu != 0.0;
        let (full, half): (Vec<f64>, Vec<f64>) = if viscous {
            self.k_sq.iter().map(|k| ((-nu * k * dt).exp(), (-0.5 * nu * k * dt).exp())).unzip()
        } else {
            (Vec::new(), Vec::new())
        };
        let ef = |idx: usize| if viscous { full[idx] } else { 1.0 };
        let eh = |idx: usize| if viscous { half[idx] } else { 1.0 };

        let mut k1 = vec![Complex64::default(); len];
        let mut k2 = vec![Complex64::default(); len];
        let mut k3 = vec![Complex64::default(); len];
        let mut k4 = vec![Complex64::default(); len];
        let mut stage = vec![Complex64::default(); len];

        let max_speed = self.advection_into(w, &mut k1);
        for idx in 0..len {
            stage[idx] = (w[idx] + k1[idx] * (0.5 * dt)) * eh(idx);
        }
        self.advection_into(&stage, &mut k2);
        for idx in 0..len {
            stage[idx] = w[idx] * eh(idx) + k2[idx] * (0.5 * dt);
        }
        self.advection_into(&stage, &mut k3);
        for idx in 0..len {
            stage[idx] = w[idx] * ef(idx) + k3[idx] * (dt * eh(idx));
        }
        self.advection_into(&stage, &mut k4);
        let sixth = dt / 6.0;
        for idx in 0..len {
            stage[idx] = w[idx] * ef(idx)
                + (k1[idx] * ef(idx) + (k2[idx] + k3[idx]) * (2.0 * eh(idx)) + k4[idx]) * sixth;
        }
        Ok(StepOutcome { state: SpectralField::from_raw(self.grid, stage), max_speed })
    }
}

/// Result of one RK4 step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: SpectralField,
    /// `max(|u₁|+|u₂|)` of the state at the start of the step.
    pub max_speed: f64,
}

impl StepOutcome {
    /// Whether `|dt|` respected the CFL bound at the start of the step.
    pub fn cfl_ok(&self, dt: f64, safety: f64) -> bool {
        let h = self.state.grid().spacing();
        dt.abs() * self.max_speed <= safety * h
    }
}

/// `−dealias(u·∇ω) − ν|k|²ω̂`.
pub fn tendency(s: &SpectralField, nu: f64) -> Result<SpectralField> {
    SpectralSolver::new(s.grid()).tendency(s, nu)
}

/// One RK4 step with a fresh solver. Prefer [`SpectralSolver::step`] in loops.
pub fn step_rk4(s: &SpectralField, dt: f64, nu: f64) -> Result<StepOutcome> {
    SpectralSolver::new(s.grid()).step(s, dt, nu)
}

/// `safety · (2π/n) / max(|u₁|+|u₂|)`, or `cap` when the velocity vanishes.
pub fn cfl_dt(v: &VelocityField, safety: f64, cap: f64) -> f64 {
    let speed = v.max_speed_l1();
    if speed == 0.0 {
        return cap;
    }
    safety * v.grid().spacing() / speed
}

/// Blow-up report: the first state with a non-finite value or norm, and the
/// last good one.
#[derive(Debug, Clone, Error)]
#[error("non-finite state at t = {t} (step {step}); last finite state at t = {last_good_t}")]
pub struct BlowUp {
    pub t: f64,
    pub step: usize,
    pub last_good_t: f64,
    pub last_good: SpectralField,
}

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error(transparent)]
    Invalid(#[from] FieldError),
    #[error(transparent)]
    BlowUp(#[from] Box<BlowUp>),
}

/// Summary of a completed integration.
#[derive(Debug, Clone)]
pub struct Integration {
    pub state: SpectralField,
    pub steps: usize,
    /// Steps whose `dt` exceeded the CFL bound at their start.
    pub cfl_violations: usize,
    pub first_violation_t: Option<f64>,
    pub max_speed: f64,
}

/// Advances `s0` from `t = 0` to `cfg.t_final` with a fixed step.
pub fn integrate(
    s0: &SpectralField,
    cfg: &SolverConfig,
    obs: &mut dyn TrajectoryObserver,
) -> std::result::Result<Integration, IntegrateError> {
    cfg.validate()?;
    ensure_zero_mean(s0)?;
    let mut state = if is_dealiased(s0) {
        s0.clone()
    } else {
        warn!("initial state has modes beyond the 2/3 cutoff; truncating");
        dealias(s0)
    };
    let mut solver = SpectralSolver::new(state.grid());
    let steps = cfg.step_count();
    let mut t = 0.0;
    let mut cfl_violations = 0;
    let mut first_violation_t = None;
    let mut max_speed = 0.0f64;
    obs.observe(t, &state);
    for step in 1..=steps {
        let t_next = if step == steps { cfg.t_final } else { step as f64 * cfg.dt };
        let dt = t_next - t;
        let out = solver.step(&state, dt, cfg.nu)?;
        max_speed = max_speed.max(out.max_speed);
        if !out.cfl_ok(dt, cfg.cfl_safety) {
            if cfl_violations == 0 {
                warn!("CFL bound exceeded at t = {t}: dt = {dt}, max speed = {}", out.max_speed);
            }
            cfl_violations += 1;
            first_violation_t.get_or_insert(t);
        }
        // a finite state whose norm overflows is already lost
        if !out.state.is_finite() || !out.max_speed.is_finite() || !l2_norm(&out.state).is_finite() {
            return Err(Box::new(BlowUp { t: t_next, step, last_good_t: t, last_good: state }).into());
        }
        state = out.state;
        t = t_next;
        if step % cfg.observer_stride == 0 || step == steps {
            obs.observe(t, &state);
        }
    }
    Ok(Integration { state, steps, cfl_violations, first_violation_t, max_speed })
}
