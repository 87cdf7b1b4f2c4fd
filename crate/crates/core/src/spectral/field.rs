use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft;
use super::grid::GridSpec;
use crate::error::{FieldError, Result};

/// Relative tolerance used when validating zero mean and Hermitian symmetry.
pub const VALIDATION_TOL: f64 = 1e-12;

/// Vorticity samples on the collocation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl RealField {
    /// Validates finiteness and zero mean.
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FieldError::WrongLength { expected: grid.len(), found: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(FieldError::NonFinite { index });
        }
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        if mean.abs() > VALIDATION_TOL * max_abs {
            return Err(FieldError::NonZeroMean { mean, max_abs });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at every grid node.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let n = grid.n();
        let values = (0..grid.len())
            .map(|idx| {
                let (x, y) = grid.point(idx % n, idx / n);
                f(x, y)
            })
            .collect();
        Self::new(grid, values)
    }

    pub(crate) fn from_raw(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Rectangle-rule integral of `f(ω)` over the torus.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values.iter().map(|&w| f(w)).sum::<f64>() * self.grid.cell_area()
    }
}

/// Fourier coefficients `ω̂(k)` with `ω(x) = Σ ω̂(k) e^{ik·x}`.
///
/// Invariants: Hermitian symmetry, zero mean, and empty Nyquist row/column.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// Validates the coefficient array. Nyquist modes are cleared rather than
    /// rejected; a non-Hermitian or nonzero-mean array is rejected.
    pub fn new(grid: GridSpec, mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(FieldError::WrongLength { expected: grid.len(), found: coeffs.len() });
        }
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(FieldError::NonFinite { index });
        }
        for (idx, c) in coeffs.iter_mut().enumerate() {
            if grid.is_nyquist(idx) {
                *c = Complex64::default();
            }
        }
        let max_abs = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let tol = VALIDATION_TOL * max_abs;
        if coeffs[0].norm() > tol {
            return Err(FieldError::NonZeroMean { mean: coeffs[0].re, max_abs });
        }
        let residual = coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| (c - coeffs[grid.conjugate_index(idx)].conj()).norm())
            .fold(0.0f64, f64::max);
        if residual > tol {
            return Err(FieldError::NotHermitian { residual });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, coeffs: vec![Complex64::default(); grid.len()] }
    }

    /// Builds a field from `(k1, k2, c)` entries; each entry sets `ω̂(k) = c`
    /// and `ω̂(-k) = conj(c)`. Later entries overwrite earlier ones.
    pub fn from_modes(grid: GridSpec, modes: &[(i64, i64, Complex64)]) -> Result<Self> {
        let half = (grid.n() / 2) as i64;
        let mut coeffs = vec![Complex64::default(); grid.len()];
        for &(k1, k2, c) in modes {
            if (k1, k2) == (0, 0) {
                return Err(FieldError::InvalidArgument("mode (0,0) carries the mean".into()));
            }
            if k1.abs() >= half || k2.abs() >= half {
                return Err(FieldError::InvalidArgument(format!(
                    "mode ({k1},{k2}) not resolvable on n={}",
                    grid.n()
                )));
            }
            coeffs[grid.mode_index(k1, k2)] = c;
            coeffs[grid.mode_index(-k1, -k2)] = c.conj();
        }
        Ok(Self { grid, coeffs })
    }

    pub(crate) fn from_raw(grid: GridSpec, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at wavenumber `(k1, k2)`.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.mode_index(k1, k2)]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(FieldError::GridMismatch(self.grid.n(), other.grid.n()));
        }
        Ok(())
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, other: &Self, scale: f64) -> Result<Self> {
        self.check_grid(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b * scale).collect();
        Ok(Self { grid: self.grid, coeffs })
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, 1.0)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, -1.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { grid: self.grid, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Keeps the coefficients for which `keep(k1, k2)` holds.
    pub fn filtered(&self, keep: impl Fn(i64, i64) -> bool) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let (k1, k2) = self.grid.mode_at(idx);
                if keep(k1, k2) { c } else { Complex64::default() }
            })
            .collect();
        Self { grid: self.grid, coeffs }
    }

    /// `4π² Σ w(k) |ω̂(k)|²` for a real weight.
    pub(crate) fn weighted_sum(&self, weight: impl Fn(i64, i64) -> f64) -> f64 {
        let sum: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let (k1, k2) = self.grid.mode_at(idx);
                weight(k1, k2) * c.norm_sqr()
            })
            .sum();
        4.0 * PI * PI * sum
    }
}

/// Velocity samples on the collocation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    grid: GridSpec,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl VelocityField {
    pub fn new(grid: GridSpec, u1: Vec<f64>, u2: Vec<f64>) -> Result<Self> {
        for u in [&u1, &u2] {
            if u.len() != grid.len() {
                return Err(FieldError::WrongLength { expected: grid.len(), found: u.len() });
            }
            if let Some(index) = u.iter().position(|v| !v.is_finite()) {
                return Err(FieldError::NonFinite { index });
            }
        }
        Ok(Self { grid, u1, u2 })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn u1(&self) -> &[f64] {
        &self.u1
    }

    pub fn u2(&self) -> &[f64] {
        &self.u2
    }

    pub fn max_abs(&self) -> f64 {
        self.u1.iter().chain(&self.u2).fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `max(|u₁| + |u₂|)` over the grid, the advective speed used for CFL.
    pub fn max_speed_l1(&self) -> f64 {
        self.u1.iter().zip(&self.u2).fold(0.0f64, |m, (a, b)| m.max(a.abs() + b.abs()))
    }

    /// Max-abs of the spectrally computed divergence `∂₁u₁ + ∂₂u₂`.
    pub fn divergence_max_abs(&self) -> f64 {
        let n = self.grid.n();
        let plan = fft::plan(n);
        let mut scratch = Vec::new();
        let mut data: Vec<Complex64> =
            self.u1.iter().zip(&self.u2).map(|(&a, &b)| Complex64::new(a, b)).collect();
        plan.forward(&mut data, &mut scratch);
        let norm = 1.0 / self.grid.len() as f64;
        let mut div = vec![Complex64::default(); self.grid.len()];
        for idx in 0..self.grid.len() {
            if self.grid.is_nyquist(idx) {
                continue;
            }
            // unpack the two real transforms from the packed one
            let z = data[idx] * norm;
            let zc = data[self.grid.conjugate_index(idx)].conj() * norm;
            let a = (z + zc) * 0.5;
            let b = (z - zc) * Complex64::new(0.0, -0.5);
            let (k1, k2) = self.grid.mode_at(idx);
            div[idx] = Complex64::i() * (a * k1 as f64 + b * k2 as f64);
        }
        plan.inverse(&mut div, &mut scratch);
        div.iter().fold(0.0f64, |m, c| m.max(c.re.abs()))
    }

    /// `∫ |u|²` by rectangle rule.
    pub fn quadrature_energy(&self) -> f64 {
        let sum: f64 = self.u1.iter().zip(&self.u2).map(|(a, b)| a * a + b * b).sum();
        sum * self.grid.cell_area()
    }
}

/// Spectral coefficients of a real field. The result is symmetrized to be
/// exactly Hermitian, with the mean and Nyquist modes cleared.
pub fn forward_transform(f: &RealField) -> SpectralField {
    let grid = f.grid();
    let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut scratch = Vec::new();
    fft::plan(grid.n()).forward(&mut data, &mut scratch);
    let mut coeffs = data;
    hermitian_clean(grid, &mut coeffs, 1.0 / grid.len() as f64);
    SpectralField::from_raw(grid, coeffs)
}

/// Real-space samples of a spectral field.
pub fn inverse_transform(s: &SpectralField) -> RealField {
    let grid = s.grid();
    let mut data = s.coeffs().to_vec();
    let mut scratch = Vec::new();
    fft::plan(grid.n()).inverse(&mut data, &mut scratch);
    RealField::from_raw(grid, data.into_iter().map(|c| c.re).collect())
}

/// Scales by `norm`, then replaces each coefficient by the Hermitian part
/// `(c(k) + conj(c(-k))) / 2`, clearing the mean and Nyquist modes.
pub(crate) fn hermitian_clean(grid: GridSpec, coeffs: &mut [Complex64], norm: f64) {
    for idx in 0..coeffs.len() {
        let cidx = grid.conjugate_index(idx);
        if cidx < idx {
            continue;
        }
        if idx == cidx || grid.is_nyquist(idx) {
            coeffs[idx] = Complex64::default();
            coeffs[cidx] = Complex64::default();
            continue;
        }
        let avg = (coeffs[idx] + coeffs[cidx].conj()) * (0.5 * norm);
        coeffs[idx] = avg;
        coeffs[cidx] = avg.conj();
    }
}
