//! Torus geometry, transforms and spectral calculus.
//!
//! Every field lives on a uniform `n × n` grid over `[0, 2π)²`. The Fourier
//! convention is `ω(x) = Σ_k ω̂(k) e^{ik·x}`, so Parseval reads
//! `‖ω‖²_{L²} = 4π² Σ_k |ω̂(k)|²`.

mod fft;
mod field;
mod grid;
mod ops;

pub use fft::{plan, Fft2};
pub use field::{forward_transform, inverse_transform, RealField, SpectralField, VelocityField, VALIDATION_TOL};
pub(crate) use field::hermitian_clean;
pub use grid::GridSpec;
pub use ops::{dealias, inner_product, is_dealiased, l2_norm, translate, velocity_from_vorticity};
pub(crate) use ops::ensure_zero_mean;
