use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse DFT plans for an `n^dim` periodic grid (row-major).
#[derive(Clone)]
pub(crate) struct Spectral {
    n: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).field("dim", &self.dim).finish()
    }
}

impl Spectral {
    pub(crate) fn new(n: usize, dim: usize) -> Self {
        let mut planner = FftPlanner::new();
        Spectral { n, dim, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    fn apply(&self, plan: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
        // `process` transforms every consecutive length-n chunk, i.e. all rows.
        plan.process(buf);
        if self.dim == 2 {
            transpose(buf, self.n);
            plan.process(buf);
            transpose(buf, self.n);
        }
    }

    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.apply(&self.forward, buf);
    }

    /// Unnormalised inverse transform.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.apply(&self.inverse, buf);
    }

    /// Transfer function for circular convolution with `stencil` (indexed by
    /// displacement), including the `1/n^dim` inverse normalisation and the
    /// quadrature weight `cell`.
    pub(crate) fn transfer(&self, stencil: &[f64], cell: f64) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = stencil.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        let norm = cell / buf.len() as f64;
        buf.iter_mut().for_each(|c| *c *= norm);
        buf
    }

    pub(crate) fn convolve(&self, u: &[f64], transfer: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf.iter_mut().zip(transfer).for_each(|(c, t)| *c *= t);
        self.inverse(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
