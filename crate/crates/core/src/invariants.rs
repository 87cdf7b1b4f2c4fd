//! Conserved functionals of the 2D Euler flow.
//!
//! Energy and enstrophy come straight from the coefficients. Polynomial
//! Casimirs and the cutoff quartic `I(ω) = ∫ |ω|⁴ χ(ω / (10‖u‖))` are grid
//! quadratures. The quartic restricted to the canonical shell family
//! `cos θ cos x + sin θ cos y` has the closed form
//! `(3π²/2)(5/4 − cos 4θ / 4)`, provided here with its derivatives.

use std::f64::consts::PI;

use crate::error::{FieldError, Result};
use crate::shell;
use crate::spectral::{ensure_zero_mean, forward_transform, GridSpec, RealField, SpectralField};

/// `∫|u|² = 4π² Σ_{k≠0} |ω̂(k)|² / |k|²`.
pub fn energy(s: &SpectralField) -> Result<f64> {
    ensure_zero_mean(s)?;
    Ok(s.weighted_sum(|k1, k2| {
        let k2sq = (k1 * k1 + k2 * k2) as f64;
        if k2sq == 0.0 { 0.0 } else { 1.0 / k2sq }
    }))
}

/// `‖ω‖²_{L²}`.
pub fn enstrophy(s: &SpectralField) -> f64 {
    s.weighted_sum(|_, _| 1.0)
}

/// Both sides of `Σ (1 − 1/|k|²) |ω̂|² = ‖ω‖² − ‖u‖²`, plus `‖P⊥ω‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub perp_sq: f64,
}

impl GapIdentity {
    pub fn consistent(&self) -> bool {
        (self.lhs - self.rhs).abs() < 1e-10 * (1.0 + self.rhs.abs())
    }

    /// `½‖P⊥ω‖² ≤ lhs ≤ ‖P⊥ω‖²`, with a relative slack of `tol`.
    pub fn sandwich_holds(&self, tol: f64) -> bool {
        let slack = tol * (1.0 + self.perp_sq);
        0.5 * self.perp_sq <= self.lhs + slack && self.lhs <= self.perp_sq + slack
    }
}

pub fn spectral_gap_identity(s: &SpectralField) -> Result<GapIdentity> {
    let lhs = s.weighted_sum(|k1, k2| {
        let k2sq = (k1 * k1 + k2 * k2) as f64;
        if k2sq == 0.0 { 0.0 } else { 1.0 - 1.0 / k2sq }
    });
    let rhs = enstrophy(s) - energy(s)?;
    Ok(GapIdentity { lhs, rhs, perp_sq: shell::perp_norm(s).powi(2) })
}

/// Polynomial `f(w) = Σ cᵢ wⁱ` for the Casimir `∫ f(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirSpec {
    coeffs: Vec<f64>,
}

impl CasimirSpec {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(FieldError::InvalidArgument("non-finite Casimir coefficient".into()));
        }
        if coeffs.iter().skip(1).all(|&c| c == 0.0) {
            return Err(FieldError::InvalidArgument("Casimir polynomial must have degree >= 1".into()));
        }
        Ok(Self { coeffs })
    }

    /// `f(w) = w^d`.
    pub fn monomial(degree: usize) -> Self {
        assert!(degree >= 1);
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, w: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * w + c)
    }
}

pub fn casimir(field: &RealField, spec: &CasimirSpec) -> f64 {
    field.integrate(|w| spec.eval(w))
}

/// Smooth even plateau cutoff: 1 on `[0, inner]`, 0 beyond `outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub inner: f64,
    pub outer: f64,
    /// The cutoff argument is `ω / (velocity_scale_factor · ‖u‖_{L²})`.
    pub velocity_scale_factor: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        Self { inner: 1.0, outer: 2.0, velocity_scale_factor: 10.0 }
    }
}

impl CutoffSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.inner > 0.0 && self.inner < self.outer && self.velocity_scale_factor > 0.0) {
            return Err(FieldError::InvalidArgument(format!("invalid cutoff {self:?}")));
        }
        Ok(())
    }
}

fn smooth_step_kernel(t: f64) -> f64 {
    if t > 0.0 { (-1.0 / t).exp() } else { 0.0 }
}

/// `χ(s)`: equals `1 − h(|s| − inner)` on the transition band, where
/// `h(t) = g(t/w) / (g(t/w) + g(1 − t/w))`, `g(t) = e^{−1/t}` and
/// `w = outer − inner`.
pub fn chi(s: f64, spec: &CutoffSpec) -> f64 {
    let a = s.abs();
    if a <= spec.inner {
        return 1.0;
    }
    if a >= spec.outer {
        return 0.0;
    }
    let t = (a - spec.inner) / (spec.outer - spec.inner);
    let up = smooth_step_kernel(t);
    let down = smooth_step_kernel(1.0 - t);
    1.0 - up / (up + down)
}

/// Value of the cutoff quartic and whether the cutoff left its plateau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffQuartic {
    pub value: f64,
    /// Some sample satisfied `|ω| > inner · factor · ‖u‖`, so `χ < 1` there.
    pub chi_active: bool,
}

/// `∫ |ω|⁴ χ(ω / (factor · ‖u‖))` given a precomputed `‖u‖_{L²}`.
pub fn cutoff_quartic_with(field: &RealField, velocity_norm: f64, spec: &CutoffSpec) -> CutoffQuartic {
    if velocity_norm == 0.0 {
        return CutoffQuartic { value: 0.0, chi_active: false };
    }
    let scale = spec.velocity_scale_factor * velocity_norm;
    let threshold = spec.inner * scale;
    let chi_active = field.values().iter().any(|w| w.abs() > threshold);
    let value = if chi_active {
        field.integrate(|w| w.powi(4) * chi(w / scale, spec))
    } else {
        field.integrate(|w| w.powi(4))
    };
    CutoffQuartic { value, chi_active }
}

/// The modified Casimir `I(ω)` with the default cutoff. `I(0) = 0`.
pub fn modified_casimir(field: &RealField) -> CutoffQuartic {
    let velocity_norm = energy(&forward_transform(field)).map(f64::sqrt).unwrap_or(0.0);
    cutoff_quartic_with(field, velocity_norm, &CutoffSpec::default())
}

/// Closed form of `I(cos θ cos x + sin θ cos y)`: `(3π²/2)(5/4 − cos(4θ)/4)`.
pub fn quartic_profile(theta: f64) -> f64 {
    1.5 * PI * PI * (1.25 - 0.25 * (4.0 * theta).cos())
}

/// `d/dθ` of [`quartic_profile`]: `(3π²/2) sin 4θ`.
pub fn quartic_profile_prime(theta: f64) -> f64 {
    1.5 * PI * PI * (4.0 * theta).sin()
}

/// Second derivative: `6π² cos 4θ`.
pub fn quartic_profile_second(theta: f64) -> f64 {
    6.0 * PI * PI * (4.0 * theta).cos()
}

/// Rectangle-rule value of `∫ (cos θ cos x + sin θ cos y)⁴`; exact for `n ≥ 8`.
pub fn quartic_profile_quadrature(theta: f64, grid: &GridSpec) -> f64 {
    let n = grid.n();
    let (c, s) = (theta.cos(), theta.sin());
    let cos_table: Vec<f64> = (0..n).map(|i| grid.point(i, 0).0.cos()).collect();
    let mut sum = 0.0;
    for cy in &cos_table {
        for cx in &cos_table {
            sum += (c * cx + s * cy).powi(4);
        }
    }
    sum * grid.cell_area()
}

/// Quadrature grid of size `n ≥ 8` (below the solver's minimum).
pub fn quadrature_grid(n: usize) -> Result<GridSpec> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(FieldError::InvalidGrid(n));
    }
    Ok(GridSpec::quadrature(n))
}
