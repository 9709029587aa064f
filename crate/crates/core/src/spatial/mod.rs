//! Spatial right-hand-side pieces on the periodic grid.

mod fft;
mod kernel;
mod operators;

pub(crate) use fft::Spectral;
pub use kernel::{convolve_kernel, discretize_kernel, KernelGrid, KernelShape};
pub use operators::{
    global_mass, gradient_faces, local_l2_ball, p_laplacian, p_laplacian_power, BallIntegrator, FaceGradients,
};
pub(crate) use operators::{divergence, face_coefficients, power_secants};
