use num_complex::Complex64;

use super::fft;
use super::field::{SpectralField, VelocityField, VALIDATION_TOL};
use crate::error::{FieldError, Result};

/// Biot–Savart law: `u = ∇⊥ψ` with `Δψ = ω`, so that `∂₁u₂ − ∂₂u₁ = ω`.
///
/// In coefficients, `û₁ = i k₂ ω̂ / |k|²` and `û₂ = −i k₁ ω̂ / |k|²`.
pub fn velocity_from_vorticity(s: &SpectralField) -> Result<VelocityField> {
    ensure_zero_mean(s)?;
    let grid = s.grid();
    let mut packed = vec![Complex64::default(); grid.len()];
    for (idx, (&w, slot)) in s.coeffs().iter().zip(packed.iter_mut()).enumerate() {
        let (k1, k2) = grid.mode_at(idx);
        let k2sq = (k1 * k1 + k2 * k2) as f64;
        if k2sq == 0.0 {
            continue;
        }
        let psi = w / k2sq;
        let u1 = Complex64::i() * psi * k2 as f64;
        let u2 = -Complex64::i() * psi * k1 as f64;
        // both components are Hermitian: pack as u1 + i u2
        *slot = u1 + Complex64::i() * u2;
    }
    let mut scratch = Vec::new();
    fft::plan(grid.n()).inverse(&mut packed, &mut scratch);
    let (u1, u2) = packed.into_iter().map(|c| (c.re, c.im)).unzip();
    VelocityField::new(grid, u1, u2)
}

pub(crate) fn ensure_zero_mean(s: &SpectralField) -> Result<()> {
    let mean = s.coeffs()[0];
    if mean.norm() > VALIDATION_TOL * s.max_abs_coeff() {
        return Err(FieldError::NonZeroMean { mean: mean.re, max_abs: s.max_abs_coeff() });
    }
    Ok(())
}

/// `‖ω‖_{L²} = √(4π² Σ |ω̂(k)|²)`.
pub fn l2_norm(s: &SpectralField) -> f64 {
    s.weighted_sum(|_, _| 1.0).sqrt()
}

/// `∫ ω₁ ω₂` computed from coefficients.
pub fn inner_product(a: &SpectralField, b: &SpectralField) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(FieldError::GridMismatch(a.grid().n(), b.grid().n()));
    }
    let sum: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x * y.conj()).re).sum();
    Ok(4.0 * std::f64::consts::PI * std::f64::consts::PI * sum)
}

/// 2/3-rule truncation: zeroes every mode with `max(|k₁|,|k₂|) > n/3`.
pub fn dealias(s: &SpectralField) -> SpectralField {
    let cutoff = s.grid().dealias_cutoff();
    s.filtered(|k1, k2| k1.abs().max(k2.abs()) <= cutoff)
}

/// True when no mode beyond the 2/3 cutoff is populated.
pub fn is_dealiased(s: &SpectralField) -> bool {
    let grid = s.grid();
    let cutoff = grid.dealias_cutoff();
    s.coeffs().iter().enumerate().all(|(idx, c)| {
        let (k1, k2) = grid.mode_at(idx);
        k1.abs().max(k2.abs()) <= cutoff || c.norm() == 0.0
    })
}

/// The field `x ↦ ω(x + shift)`.
pub fn translate(s: &SpectralField, shift: (f64, f64)) -> SpectralField {
    let grid = s.grid();
    let coeffs = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let (k1, k2) = grid.mode_at(idx);
            c * Complex64::from_polar(1.0, k1 as f64 * shift.0 + k2 as f64 * shift.1)
        })
        .collect();
    SpectralField::from_raw(grid, coeffs)
}
