use std::f64::consts::PI;

use crate::error::{FieldError, Result};

/// Uniform collocation grid on the periodic square `[0, 2π)²`.
///
/// Samples are stored row-major with the x-index fastest: value `(i, j)`
/// sits at `j * n + i` and corresponds to the point `(2πi/n, 2πj/n)`.
/// Spectral coefficients use the same layout, with FFT index `j` mapping
/// to wavenumber `j` for `j <= n/2` and `j - n` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    pub const MIN_N: usize = 16;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_N || !n.is_multiple_of(2) {
            return Err(FieldError::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    /// Grid without the size floor. Only used for quadrature of low-degree
    /// trigonometric polynomials, never for the solver.
    pub(crate) fn quadrature(n: usize) -> Self {
        debug_assert!(n >= 2 && n.is_multiple_of(2));
        Self { n }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Area of one collocation cell.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Signed wavenumber for FFT index `j`.
    #[inline]
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j <= n / 2 { j } else { j - n }
    }

    /// FFT index for a signed wavenumber; wraps modulo `n`.
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Flat index of the coefficient for wavenumber `(k1, k2)`.
    #[inline]
    pub fn mode_index(&self, k1: i64, k2: i64) -> usize {
        self.index_of(k2) * self.n + self.index_of(k1)
    }

    /// Flat index of `-k` given the flat index of `k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (i, j) = (idx % self.n, idx / self.n);
        ((self.n - j) % self.n) * self.n + (self.n - i) % self.n
    }

    /// Wavenumber pair stored at a flat index.
    #[inline]
    pub fn mode_at(&self, idx: usize) -> (i64, i64) {
        (self.wavenumber(idx % self.n), self.wavenumber(idx / self.n))
    }

    /// True for modes on the Nyquist row or column (`|k_i| = n/2`).
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = self.n / 2;
        idx % self.n == half || idx / self.n == half
    }

    /// Largest wavenumber kept by the 2/3 truncation.
    #[inline]
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Coordinates of the grid node at `(i, j)`.
    #[inline]
    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        let h = self.spacing();
        (i as f64 * h, j as f64 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small() {
        assert!(GridSpec::new(15).is_err());
        assert!(GridSpec::new(14).is_err());
        assert!(GridSpec::new(33).is_err());
        assert!(GridSpec::new(16).is_ok());
    }

    #[test]
    fn wavenumber_range() {
        let g = GridSpec::new(16).unwrap();
        let ks: Vec<i64> = (0..16).map(|j| g.wavenumber(j)).collect();
        assert_eq!(ks[0], 0);
        assert_eq!(ks[8], 8);
        assert_eq!(ks[9], -7);
        assert_eq!(ks[15], -1);
        for j in 0..16 {
            assert_eq!(g.index_of(g.wavenumber(j)), j);
        }
    }

    #[test]
    fn conjugate_index_is_involution() {
        let g = GridSpec::new(16).unwrap();
        for idx in 0..g.len() {
            let c = g.conjugate_index(idx);
            assert_eq!(g.conjugate_index(c), idx);
            let (k1, k2) = g.mode_at(idx);
            if !g.is_nyquist(idx) {
                assert_eq!(g.mode_at(c), (-k1, -k2));
            }
        }
    }
}
