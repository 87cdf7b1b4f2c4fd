//! Pseudo-spectral 2D Euler on the periodic square with diagnostics for the
//! stability of the first Fourier shell.
//!
//! Module map:
//! - [`spectral`]: grid, transforms, Biot–Savart velocity, dealiasing, norms
//! - [`dynamics`]: tendency, integrating-factor RK4, CFL, trajectory loop
//! - [`shell`]: projections onto the `|k| = 1` shell, coordinates, distances
//! - [`invariants`]: energy, enstrophy, Casimirs, the cutoff quartic
//! - [`experiments`]: perturbations, stability probes, ε-sweeps, exponent fits
//! - [`io`]: configuration, checkpoints, diagnostics CSV
//! - [`verify`]: the static self-test battery behind `firstshell verify`
//! - [`cli`]: the `simulate`, `sweep` and `verify` commands

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod invariants;
pub mod io;
pub mod shell;
pub mod spectral;
pub mod verify;
pub mod cli;

pub use error::{FieldError, Result};
