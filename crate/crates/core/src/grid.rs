//! Periodic truncation of ℝ^N and fields sampled on it.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform periodic grid on `[−L, L]^dim` with `n` points per axis.
///
/// Grid point `i` on an axis sits at `x_i = −L + i·h` with `h = 2L/n`, so
/// the origin is the grid point `i = n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    half_width: f64,
    points: usize,
    dim: usize,
}

impl DomainSpec {
    pub fn new(half_width: f64, points: usize, dim: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid("half_width", format!("must be > 0, got {half_width}")));
        }
        if points < 8 || !points.is_multiple_of(2) {
            return Err(Error::invalid(
                "points",
                format!("must be an even integer >= 8, got {points}"),
            ));
        }
        if !(dim == 1 || dim == 2) {
            return Err(Error::invalid("dim", format!("must be 1 or 2, got {dim}")));
        }
        Ok(Self {
            half_width,
            points,
            dim,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// `h^dim`, the quadrature weight of one grid point.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of grid points, `n^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of grid index `i` along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Per-axis indices of a flat row-major index.
    pub fn unflatten(&self, idx: usize) -> [usize; 2] {
        match self.dim {
            1 => [idx, 0],
            _ => [idx / self.points, idx % self.points],
        }
    }

    pub fn flatten(&self, i: usize, j: usize) -> usize {
        match self.dim {
            1 => i,
            _ => i * self.points + j,
        }
    }

    /// Coordinates of a flat index; unused axes are zero.
    pub fn position(&self, idx: usize) -> [f64; 2] {
        let [i, j] = self.unflatten(idx);
        match self.dim {
            1 => [self.coord(i), 0.0],
            _ => [self.coord(i), self.coord(j)],
        }
    }

    /// Signed periodic displacement of index offset `d` (in cells), in `[−L, L)`.
    pub fn wrapped_offset(&self, d: usize) -> f64 {
        let n = self.points;
        let s = if d >= n / 2 { d as isize - n as isize } else { d as isize };
        s as f64 * self.spacing()
    }
}

/// Real-valued samples on a [`DomainSpec`], stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    domain: DomainSpec,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(domain: DomainSpec) -> Self {
        Self::constant(domain, 0.0)
    }

    pub fn constant(domain: DomainSpec, value: f64) -> Self {
        Self {
            domain,
            values: vec![value; domain.len()],
        }
    }

    /// Samples `f` at every grid point. `f` receives `[x, y]` (y = 0 in 1D).
    pub fn from_fn(domain: DomainSpec, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..domain.len()).map(|i| f(domain.position(i))).collect();
        Self { domain, values }
    }

    /// Wraps existing samples, checking length and finiteness.
    pub fn from_values(domain: DomainSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                domain.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("values", format!("entry {i} is not finite")));
        }
        Ok(Self { domain, values })
    }

    /// Wraps samples without the finiteness check; the integrator uses this so
    /// that a diverging state can still be reported.
    pub(crate) fn from_raw(domain: DomainSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), domain.len());
        Self { domain, values }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            domain: self.domain,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn ensure_same_grid(&self, other: &Field) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.domain, other.domain
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// max |u|; NaN entries propagate as NaN.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, &v| {
            if v.is_nan() || acc.is_nan() {
                f64::NAN
            } else {
                acc.max(v.abs())
            }
        })
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.domain.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.domain.cell_volume()).sqrt()
    }

    /// Largest pointwise |self − other|.
    pub fn max_abs_diff(&self, other: &Field) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
