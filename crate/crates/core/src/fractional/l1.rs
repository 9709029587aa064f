use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{DomainSpec, Field};

/// Grid points per rayon task in the memory sum.
const MEMORY_CHUNK: usize = 1024;

/// L1 weights `b_j = (j+1)^{1-α} - j^{1-α}` and the prefactor
/// `dt^{-α} / Γ(2-α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Weights {
    alpha: f64,
    dt: f64,
    scale: f64,
    b: Vec<f64>,
}

impl L1Weights {
    /// Weight table for `n_steps` steps (`b_0 .. b_{n_steps-1}`).
    pub fn new(alpha: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        if n_steps == 0 {
            return Err(Error::invalid("n_steps", "must be at least 1"));
        }
        let scale = dt.powf(-alpha) / crate::gamma(2.0 - alpha);
        let mut w = L1Weights { alpha, dt, scale, b: Vec::with_capacity(n_steps) };
        w.ensure_len(n_steps);
        Ok(w)
    }

    /// Extends the table so that at least `n` weights are available.
    pub fn ensure_len(&mut self, n: usize) {
        let e = 1.0 - self.alpha;
        while self.b.len() < n {
            let j = self.b.len();
            let bj = if j == 0 {
                1.0
            } else {
                // (j+1)^e - j^e without cancellation.
                let jf = j as f64;
                jf.powf(e) * (e * (1.0 / jf).ln_1p()).exp_m1()
            };
            self.b.push(bj);
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

/// Past states `u^0 .. u^{n-1}` of a run.
#[derive(Debug, Clone)]
pub struct HistoryBuffer {
    domain: DomainSpec,
    dt: f64,
    states: Vec<Vec<f64>>,
}

impl HistoryBuffer {
    pub fn new(u0: &Field, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        Ok(HistoryBuffer { domain: *u0.domain(), dt, states: vec![u0.values().to_vec()] })
    }

    pub fn push(&mut self, u: &Field) -> Result<()> {
        if u.domain() != &self.domain {
            return Err(Error::GridMismatch(format!(
                "history holds {:?}, pushed field has {:?}",
                self.domain,
                u.domain()
            )));
        }
        self.states.push(u.values().to_vec());
        Ok(())
    }

    /// Number of stored states, i.e. the index of the next step.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn latest(&self) -> Field {
        Field::from_raw(self.domain, self.states[self.states.len() - 1].clone())
    }

    pub fn latest_values(&self) -> &[f64] {
        &self.states[self.states.len() - 1]
    }

    pub fn initial_values(&self) -> &[f64] {
        &self.states[0]
    }

    pub fn state(&self, i: usize) -> Option<Field> {
        self.states.get(i).map(|v| Field::from_raw(self.domain, v.clone()))
    }

    /// `Σ_{j=1}^{n-1} b_j (u^{n-j} - u^{n-j-1})` at every grid point, where
    /// `n = self.len()`. The per-point summation order is fixed (ascending `j`)
    /// regardless of how the grid is split across threads.
    pub fn memory_term(&self, weights: &L1Weights) -> Vec<f64> {
        let n = self.states.len();
        assert!(weights.len() >= n, "weight table shorter than history");
        let b = weights.b();
        let mut out = vec![0.0; self.domain.len()];
        if n < 2 {
            return out;
        }
        out.par_chunks_mut(MEMORY_CHUNK).enumerate().for_each(|(c, chunk)| {
            let start = c * MEMORY_CHUNK;
            for (j, &bj) in b.iter().enumerate().take(n).skip(1) {
                let newer = &self.states[n - j][start..start + chunk.len()];
                let older = &self.states[n - j - 1][start..start + chunk.len()];
                for ((o, &a), &z) in chunk.iter_mut().zip(newer).zip(older) {
                    *o += bj * (a - z);
                }
            }
        });
        out
    }
}

/// L1 approximation of the Caputo derivative at the step that would make
/// `candidate` the next state.
pub fn discrete_caputo(history: &HistoryBuffer, candidate: &Field, weights: &L1Weights) -> Result<Field> {
    if candidate.domain() != history.domain() {
        return Err(Error::GridMismatch("candidate field does not match history grid".into()));
    }
    let mem = history.memory_term(weights);
    let prev = history.latest_values();
    let s = weights.scale();
    let b0 = weights.b()[0];
    let values = candidate
        .values()
        .iter()
        .zip(prev)
        .zip(&mem)
        .map(|((&u, &p), &m)| s * (b0 * (u - p) + m))
        .collect();
    Ok(Field::from_raw(*candidate.domain(), values))
}
