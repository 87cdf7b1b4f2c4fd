//! Geometry of the first Fourier shell `|k| = 1`.
//!
//! The shell component of a field is `a cos(x + μ) + b cos(y + λ)` with
//! `a, b ≥ 0`; signs are absorbed into the phases since a shift by `π`
//! flips a mode. Distances are L² distances of vorticity.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::error::{FieldError, Result};
use crate::spectral::{l2_norm, GridSpec, RealField, SpectralField};

/// `‖cos x‖²_{L²}`, the squared norm of one unit shell mode.
pub const UNIT_MODE_NORM_SQ: f64 = 2.0 * PI * PI;

/// Default angular tolerance for [`classify_extremal`].
pub const DEFAULT_EXTREMAL_TOL: f64 = 1e-9;

#[inline]
fn on_shell(k1: i64, k2: i64) -> bool {
    k1 * k1 + k2 * k2 == 1
}

/// Orthogonal projection onto the four `|k| = 1` modes.
pub fn project_shell(s: &SpectralField) -> SpectralField {
    s.filtered(on_shell)
}

/// The complement `(Id − P) ω`.
pub fn project_perp(s: &SpectralField) -> SpectralField {
    s.filtered(|k1, k2| !on_shell(k1, k2))
}

/// `‖P⊥ω‖_{L²}`.
pub fn perp_norm(s: &SpectralField) -> f64 {
    s.weighted_sum(|k1, k2| if on_shell(k1, k2) { 0.0 } else { 1.0 }).sqrt()
}

/// Amplitudes and phases of the shell component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellCoordinates {
    /// Amplitude of the x-mode, `2|ω̂(1,0)|`.
    pub a: f64,
    /// Amplitude of the y-mode, `2|ω̂(0,1)|`.
    pub b: f64,
    /// Phase of the x-mode in `[0, 2π)`.
    pub mu: f64,
    /// Phase of the y-mode in `[0, 2π)`.
    pub lambda: f64,
}

impl ShellCoordinates {
    /// Coordinates with zero phases; amplitudes must be nonnegative.
    pub fn canonical(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(FieldError::InvalidArgument(format!("amplitudes ({a}, {b}) must be finite and >= 0")));
        }
        Ok(Self { a, b, mu: 0.0, lambda: 0.0 })
    }

    /// `atan2(b, a)` in `[0, π/2]`.
    pub fn theta(&self) -> f64 {
        self.b.atan2(self.a)
    }

    /// `√(a² + b²)`.
    pub fn c(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Spectral representation of `a cos(x + μ) + b cos(y + λ)`.
    pub fn to_spectral(&self, grid: GridSpec) -> SpectralField {
        let x = Complex64::from_polar(0.5 * self.a, self.mu);
        let y = Complex64::from_polar(0.5 * self.b, self.lambda);
        SpectralField::from_modes(grid, &[(1, 0, x), (0, 1, y)]).expect("shell modes are resolvable")
    }
}

fn wrap_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    // rem_euclid may round up to exactly TAU
    if p >= TAU { 0.0 } else { p }
}

pub fn extract_shell_coordinates(s: &SpectralField) -> ShellCoordinates {
    let cx = s.coeff(1, 0);
    let cy = s.coeff(0, 1);
    let a = 2.0 * cx.norm();
    let b = 2.0 * cy.norm();
    let mu = if a == 0.0 { 0.0 } else { wrap_phase(cx.arg()) };
    let lambda = if b == 0.0 { 0.0 } else { wrap_phase(cy.arg()) };
    ShellCoordinates { a, b, mu, lambda }
}

/// Phase-stripped representative `a cos x + b cos y`.
pub fn p_star(coords: &ShellCoordinates, grid: GridSpec) -> RealField {
    let (a, b) = (coords.a, coords.b);
    let n = grid.n();
    let cos_table: Vec<f64> = (0..n).map(|i| grid.point(i, 0).0.cos()).collect();
    let mut values = Vec::with_capacity(grid.len());
    for cy in &cos_table {
        for cx in &cos_table {
            values.push(a * cx + b * cy);
        }
    }
    RealField::new(grid, values).expect("shell samples are finite with zero mean")
}

/// `min over translates g ∈ S^{α,β}` of `‖s − g‖_{L²}`.
///
/// Optimal phases align each target mode with the field's own mode, leaving
/// `‖P⊥s‖² + 2π²[(a − |α|)² + (b − |β|)²]`.
pub fn shell_distance(s: &SpectralField, alpha: f64, beta: f64) -> f64 {
    let coords = extract_shell_coordinates(s);
    let perp_sq = perp_norm(s).powi(2);
    let da = coords.a - alpha.abs();
    let db = coords.b - beta.abs();
    (perp_sq + UNIT_MODE_NORM_SQ * (da * da + db * db)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalTag {
    Extremal,
    NonExtremal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalClass {
    pub tag: ExtremalTag,
    /// Closest multiple of `π/4`.
    pub nearest: f64,
    pub gap: f64,
}

impl ExtremalClass {
    pub fn is_extremal(&self) -> bool {
        self.tag == ExtremalTag::Extremal
    }
}

/// Classifies `θ ∈ [0, π/2]` against the extremal lattice `{0, π/4, π/2}`.
pub fn classify_extremal(theta: f64, tol: f64) -> Result<ExtremalClass> {
    if !(0.0..=FRAC_PI_2).contains(&theta) || !(tol > 0.0) {
        return Err(FieldError::InvalidArgument(format!("theta {theta} or tol {tol} out of range")));
    }
    let k = (theta / FRAC_PI_4).round();
    let nearest = k * FRAC_PI_4;
    let gap = (theta - nearest).abs();
    let tag = if gap <= tol { ExtremalTag::Extremal } else { ExtremalTag::NonExtremal };
    Ok(ExtremalClass { tag, nearest, gap })
}

/// `max_t ‖P⊥ω(t)‖ / ‖P⊥ω(0)‖` over a `(t, perp)` series.
///
/// When the initial value is zero, returns 0 if the whole series is zero and
/// `+∞` otherwise.
pub fn sqrt2_monitor(series: &[(f64, f64)]) -> Result<f64> {
    let Some(&(_, first)) = series.first() else {
        return Err(FieldError::InvalidArgument("empty perp series".into()));
    };
    let max = series.iter().fold(0.0f64, |m, &(_, p)| m.max(p));
    if first == 0.0 {
        return Ok(if max == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(max / first)
}

/// `‖P ω‖` and `‖P⊥ω‖` via the full norm, for Pythagoras checks.
pub fn shell_split_norms(s: &SpectralField) -> (f64, f64, f64) {
    (l2_norm(&project_shell(s)), perp_norm(s), l2_norm(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{forward_transform, inverse_transform, translate};

    fn spectral(n: usize, f: impl Fn(f64, f64) -> f64) -> SpectralField {
        forward_transform(&RealField::from_fn(GridSpec::new(n).unwrap(), f).unwrap())
    }

    #[test]
    fn projection_examples() {
        let s = spectral(32, |x, y| x.cos() + (3.0 * y).cos());
        let expected = spectral(32, |x, _| x.cos());
        assert!(l2_norm(&project_shell(&s).difference(&expected).unwrap()) < 1e-14);
        let p = project_shell(&spectral(32, |x, _| (2.0 * x).cos()));
        assert!(l2_norm(&p) < 1e-15);
    }

    #[test]
    fn perp_norm_examples() {
        let unit = UNIT_MODE_NORM_SQ.sqrt();
        assert!((perp_norm(&spectral(32, |x, _| (2.0 * x).cos())) - unit).abs() < 1e-13);
        assert!(perp_norm(&spectral(32, |x, _| x.cos())) < 1e-15);
        let s = spectral(32, |x, _| x.cos() + 0.1 * (2.0 * x).cos());
        assert!((perp_norm(&s) - 0.1 * unit).abs() < 1e-14);
    }

    #[test]
    fn coordinates_examples() {
        let c = extract_shell_coordinates(&spectral(32, |x, y| (x + 0.3).cos() + 2.0 * (y - 0.7).cos()));
        assert!((c.a - 1.0).abs() < 1e-14 && (c.mu - 0.3).abs() < 1e-14);
        assert!((c.b - 2.0).abs() < 1e-14 && (c.lambda - (TAU - 0.7)).abs() < 1e-14);
        let c = extract_shell_coordinates(&spectral(32, |x, _| -x.cos()));
        assert!((c.a - 1.0).abs() < 1e-14 && (c.mu - PI).abs() < 1e-14);
        assert_eq!((c.b, c.lambda), (0.0, 0.0));
    }

    #[test]
    fn p_star_examples() {
        let g = GridSpec::new(32).unwrap();
        let f = p_star(&ShellCoordinates { a: 1.0, b: 0.0, mu: 0.9, lambda: 0.0 }, g);
        let expected = RealField::from_fn(g, |x, _| x.cos()).unwrap();
        for (a, b) in f.values().iter().zip(expected.values()) {
            assert!((a - b).abs() < 1e-15);
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let f = p_star(&ShellCoordinates { a: r, b: r, mu: 2.0, lambda: 5.0 }, g);
        let expected = RealField::from_fn(g, |x, y| (x.cos() + y.cos()) * r).unwrap();
        for (a, b) in f.values().iter().zip(expected.values()) {
            assert!((a - b).abs() < 1e-15);
        }
        // extraction inverts p_star on canonical coordinates
        let c = ShellCoordinates::canonical(0.4, 1.3).unwrap();
        let back = extract_shell_coordinates(&forward_transform(&p_star(&c, g)));
        assert!((back.a - 0.4).abs() < 1e-14 && (back.b - 1.3).abs() < 1e-14);
        assert!(back.mu.min(TAU - back.mu) < 1e-14 && back.lambda.min(TAU - back.lambda) < 1e-14);
    }

    #[test]
    fn distance_examples() {
        let unit = UNIT_MODE_NORM_SQ.sqrt();
        assert!(shell_distance(&spectral(32, |x, _| (x + 0.3).cos()), 1.0, 0.0) < 1e-14);
        let d = shell_distance(&spectral(32, |x, _| 0.9 * x.cos()), 1.0, 0.0);
        assert!((d - 0.1 * unit).abs() < 1e-13);
        let d = shell_distance(&spectral(32, |x, _| (2.0 * x).cos()), 1.0, 0.0);
        assert!((d - TAU).abs() < 1e-13);
        // sign of alpha is absorbed by the phase
        let s = spectral(32, |x, y| 0.3 * x.sin() + 0.5 * y.cos());
        assert_eq!(shell_distance(&s, -0.2, 0.1), shell_distance(&s, 0.2, -0.1));
    }

    #[test]
    fn distance_is_translation_invariant() {
        let s = spectral(32, |x, y| 0.8 * (x + 1.0).cos() + 0.2 * (y + 2.0).sin() + 0.3 * (x - 2.0 * y).cos());
        let d0 = shell_distance(&s, 0.5, 0.5);
        for shift in [(0.1, 0.2), (3.0, -1.0), (PI, PI)] {
            assert!((shell_distance(&translate(&s, shift), 0.5, 0.5) - d0).abs() < 1e-10);
        }
        // p_star is blind to translation too
        let c0 = extract_shell_coordinates(&s);
        let c1 = extract_shell_coordinates(&translate(&s, (0.7, 2.2)));
        let g = s.grid();
        let (f0, f1) = (p_star(&c0, g), p_star(&c1, g));
        for (a, b) in f0.values().iter().zip(f1.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let _ = inverse_transform(&s);
    }

    #[test]
    fn classification() {
        let tol = DEFAULT_EXTREMAL_TOL;
        assert!(classify_extremal(FRAC_PI_4, tol).unwrap().is_extremal());
        assert!(!classify_extremal(PI / 6.0, tol).unwrap().is_extremal());
        assert!(classify_extremal(0.0, tol).unwrap().is_extremal());
        assert!(classify_extremal(FRAC_PI_2, tol).unwrap().is_extremal());
        let c = classify_extremal(PI / 6.0, tol).unwrap();
        assert_eq!(c.nearest, FRAC_PI_4);
        assert!((c.gap - PI / 12.0).abs() < 1e-15);
        assert!(classify_extremal(2.0, tol).is_err());
    }

    #[test]
    fn sqrt2_monitor_cases() {
        assert_eq!(sqrt2_monitor(&[(0.0, 2.0), (1.0, 2.0), (2.0, 2.0)]).unwrap(), 1.0);
        let r = sqrt2_monitor(&[(0.0, 4.0), (1.0, 5.0), (2.0, 5.6)]).unwrap();
        assert!((r - 1.4).abs() < 1e-15);
        assert_eq!(sqrt2_monitor(&[(0.0, 0.0), (1.0, 0.0)]).unwrap(), 0.0);
        assert_eq!(sqrt2_monitor(&[(0.0, 0.0), (1.0, 1e-3)]).unwrap(), f64::INFINITY);
        assert!(sqrt2_monitor(&[]).is_err());
    }
}
