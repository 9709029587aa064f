//! Time stepping of the full model with the L1 Caputo discretisation.
//!
//! Each step solves
//!
//! ```text
//! scale·b₀·(uⁿ − uⁿ⁻¹) + scale·Σ_{j≥1} b_j (uⁿ⁻ʲ − uⁿ⁻ʲ⁻¹) = Δ_p(·) + R(uⁿ⁻¹)
//! ```
//!
//! In the explicit scheme everything on the right is evaluated at `uⁿ⁻¹`.
//! The lagged-implicit scheme freezes the face diffusivities at `uⁿ⁻¹`,
//! takes the diffusion and the linear loss term `−γu` at the new level, keeps
//! the nonlinear part of the reaction explicit, and solves the resulting
//! symmetric system by preconditioned conjugate gradients.

mod config;
mod reference;
mod report;
mod stepper;

pub use config::{Scheme, SolverConfig};
pub use reference::{linear_reference_for, linear_spectral_reference};
pub use report::{detect_blowup, BlowupStatus, RunReport, RunStatus, SeriesPoint, Snapshot};
pub use stepper::{run, step, Coupling, Integrator};
