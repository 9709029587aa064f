use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Spectral;
use crate::error::{Error, Result};
use crate::grid::{DomainSpec, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelShape {
    /// Indicator of the cube of half-width `2δ₀`.
    Box,
    /// Radial hat of radius `2δ₀`.
    Triangle,
    /// Radial gaussian with standard deviation `δ₀`, cut at `6δ₀`.
    Gaussian,
}

/// Normalised competition kernel `J` sampled on the grid, centred at the
/// origin, with its precomputed convolution transfer function.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    shape: KernelShape,
    delta0: f64,
    eta: f64,
    values: Field,
    integral: f64,
    core_min: f64,
    spectral: Spectral,
    transfer: Vec<Complex64>,
}

impl KernelGrid {
    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `J(x)` at every grid point `x`.
    pub fn values(&self) -> &Field {
        &self.values
    }

    pub fn domain(&self) -> &DomainSpec {
        self.values.domain()
    }

    /// `Σ J h^dim`.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// Smallest kernel value on grid points of the core cube `max_k |x_k| ≤ δ₀`.
    pub fn core_min(&self) -> f64 {
        self.core_min
    }

    /// Kernel value at displacement index `d` (per axis, in cells).
    pub fn at_offset(&self, d: [usize; 2]) -> f64 {
        let dom = self.domain();
        let n = dom.points();
        let half = n / 2;
        self.values.values()[dom.flatten((d[0] + half) % n, (d[1] + half) % n)]
    }
}

/// Length of `[x − h/2, x + h/2] ∩ [−r, r]` divided by `h`.
pub(crate) fn cell_overlap(x: f64, h: f64, r: f64) -> f64 {
    let lo = (x - 0.5 * h).max(-r);
    let hi = (x + 0.5 * h).min(r);
    ((hi - lo) / h).clamp(0.0, 1.0)
}

/// Samples, normalises and admits a kernel.
///
/// The box shape is integrated exactly over each cell so that its discrete
/// mass equals the continuum mass; the radial shapes are sampled pointwise.
pub fn discretize_kernel(shape: KernelShape, delta0: f64, eta: f64, domain: &DomainSpec) -> Result<KernelGrid> {
    let l = domain.half_width();
    if !(delta0 > 0.0 && delta0 < l / 4.0) {
        return Err(Error::invalid("delta0", format!("must lie in (0, L/4) = (0, {}), got {delta0}", l / 4.0)));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::invalid("eta", format!("must be nonnegative, got {eta}")));
    }
    let h = domain.spacing();
    let dim = domain.dim();
    let raw = Field::from_fn(*domain, |x| {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        match shape {
            KernelShape::Box => {
                let ox = cell_overlap(x[0], h, 2.0 * delta0);
                if dim == 1 {
                    ox
                } else {
                    ox * cell_overlap(x[1], h, 2.0 * delta0)
                }
            }
            KernelShape::Triangle => (1.0 - r / (2.0 * delta0)).max(0.0),
            KernelShape::Gaussian => {
                if r <= 6.0 * delta0 {
                    (-0.5 * (r / delta0).powi(2)).exp()
                } else {
                    0.0
                }
            }
        }
    });
    let cell = domain.cell_volume();
    let mass: f64 = raw.values().iter().sum::<f64>() * cell;
    let values = raw.map(|v| v / mass);
    let integral = values.values().iter().sum::<f64>() * cell;

    let tol = 1e-12 * h;
    let core_min = values
        .values()
        .iter()
        .enumerate()
        .filter(|(idx, _)| {
            let x = domain.position(*idx);
            x[0].abs().max(x[1].abs()) <= delta0 + tol
        })
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    if !(core_min > eta) {
        return Err(Error::KernelFloor { delta0, eta, min_value: core_min });
    }

    let spectral = Spectral::new(domain.points(), dim);
    let mut kernel = KernelGrid {
        shape,
        delta0,
        eta,
        values,
        integral,
        core_min,
        spectral: spectral.clone(),
        transfer: Vec::new(),
    };
    let stencil: Vec<f64> = (0..domain.len())
        .map(|idx| kernel.at_offset(domain.unflatten(idx)))
        .collect();
    kernel.transfer = spectral.transfer(&stencil, cell);
    Ok(kernel)
}

/// `(J∗u)(x_i) = Σ_j J(x_i − x_j) u_j h^dim` on the periodic grid.
pub fn convolve_kernel(u: &Field, kernel: &KernelGrid) -> Result<Field> {
    if u.domain() != kernel.domain() {
        return Err(Error::GridMismatch(format!(
            "field grid {:?} differs from kernel grid {:?}",
            u.domain(),
            kernel.domain()
        )));
    }
    let out = kernel.spectral.convolve(u.values(), &kernel.transfer);
    Ok(Field::from_raw(*u.domain(), out))
}
