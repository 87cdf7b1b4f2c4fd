use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{FieldError, Result};
use crate::spectral::{l2_norm, GridSpec, SpectralField};

/// Default exponent of the `|k|^{-decay}` envelope for smooth perturbations.
pub const DEFAULT_SPECTRAL_DECAY: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    /// Gaussian coefficients on every dealiased mode under a `|k|^{-decay}` envelope.
    RandomSmooth,
    /// `cos(k·x)` for one wavenumber.
    SingleMode([i64; 2]),
    /// Random combination of the four `|k| = 1` modes.
    ShellTangent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub kind: PerturbationKind,
    pub seed: u64,
    /// L² norm of the generated perturbation.
    pub epsilon: f64,
    pub spectral_decay: f64,
}

impl PerturbationSpec {
    pub fn random_smooth(seed: u64, epsilon: f64) -> Self {
        Self { kind: PerturbationKind::RandomSmooth, seed, epsilon, spectral_decay: DEFAULT_SPECTRAL_DECAY }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}

fn gaussian_pair(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Deterministic zero-mean perturbation with `‖·‖_{L²} = epsilon`.
pub fn make_perturbation(spec: &PerturbationSpec, grid: GridSpec) -> Result<SpectralField> {
    if !(spec.epsilon > 0.0 && spec.epsilon.is_finite()) {
        return Err(FieldError::InvalidArgument(format!("epsilon must be positive, got {}", spec.epsilon)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let cutoff = grid.dealias_cutoff();
    let shape = match spec.kind {
        PerturbationKind::RandomSmooth => {
            if !(spec.spectral_decay >= 0.0 && spec.spectral_decay.is_finite()) {
                return Err(FieldError::InvalidArgument("spectral_decay must be >= 0".into()));
            }
            let mut modes = Vec::new();
            // upper half-plane; the conjugate half follows from symmetry
            for k2 in 0..=cutoff {
                for k1 in -cutoff..=cutoff {
                    if k2 == 0 && k1 <= 0 {
                        continue;
                    }
                    let k = ((k1 * k1 + k2 * k2) as f64).sqrt();
                    modes.push((k1, k2, gaussian_pair(&mut rng) * k.powf(-spec.spectral_decay)));
                }
            }
            SpectralField::from_modes(grid, &modes)?
        }
        PerturbationKind::SingleMode([k1, k2]) => {
            if (k1, k2) == (0, 0) {
                return Err(FieldError::InvalidArgument("single_mode k = (0,0) is the mean".into()));
            }
            if k1.abs().max(k2.abs()) > cutoff {
                return Err(FieldError::InvalidArgument(format!(
                    "single_mode ({k1},{k2}) exceeds the dealiasing cutoff {cutoff}"
                )));
            }
            SpectralField::from_modes(grid, &[(k1, k2, Complex64::new(0.5, 0.0))])?
        }
        PerturbationKind::ShellTangent => {
            let modes: Vec<_> = [(1, 0), (0, 1)]
                .into_iter()
                .map(|(k1, k2)| (k1, k2, gaussian_pair(&mut rng)))
                .collect();
            SpectralField::from_modes(grid, &modes)?
        }
    };
    let norm = l2_norm(&shape);
    if norm == 0.0 {
        return Err(FieldError::InvalidArgument("perturbation shape vanished".into()));
    }
    Ok(shape.scaled(spec.epsilon / norm))
}
