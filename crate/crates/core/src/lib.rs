//! Solver and verification harness for the nonlocal time-fractional
//! p-Laplacian reaction-diffusion equation
//!
//! ```text
//! D_t^α u = Δ_p u + μ u² (1 − k J∗u) − γ u,   u(x, 0) = u₀(x)
//! ```
//!
//! on a periodic box `[−L, L]^N` (N = 1, 2), together with the global-mass
//! variant `D_t^α u = Δ_p u^m + u² (1 − ∫u) − u`.
//!
//! The crate is organised by concern:
//!
//! - [`model`]: parameters, equilibrium roots, threshold and bound constants,
//!   pointwise reaction arithmetic.
//! - [`grid`]: the periodic domain and sampled fields.
//! - [`fractional`]: L1 discretisation of the Caputo derivative,
//!   Mittag-Leffler functions, linear fractional ODE solutions and the
//!   discrete inequality checkers.
//! - [`spatial`]: competition kernels, FFT convolution, the regularised
//!   p-Laplacian and local ball integrals.
//! - [`integrator`]: time stepping, run reports and the linear spectral
//!   reference solution.
//! - [`analysis`]: boundedness, decay, Allee and Lyapunov verdicts.
//! - [`io`]: run manifests, CSV series and binary snapshots.
//! - [`verify`]: the runnable property suites.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod error;
pub mod fractional;
pub mod grid;
pub mod integrator;
pub mod io;
pub mod model;
mod quadrature;
pub mod spatial;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{DomainSpec, Field};
pub use model::{AnalysisConstants, CouplingMode, EquilibriumRoots, ModelParameters};

/// Γ(x) for real x.
#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln|Γ(x)|.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}
