use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Explicit,
    /// Diffusivity frozen at the previous level, linear solve for the new one.
    #[default]
    LaggedImplicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_final: f64,
    pub eps_reg: f64,
    pub blowup_threshold: f64,
    pub scheme: Scheme,
    /// Record norms every this many steps (the first and last step are
    /// always recorded).
    pub record_every: usize,
    /// Times at which full fields are kept; each is taken at the first step
    /// reaching it.
    pub snapshot_times: Vec<f64>,
    /// Adds half the initial right-hand side to the first step, which
    /// restores the L1 accuracy lost to the `t^α` start-up singularity of
    /// smooth-data solutions.
    pub start_correction: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            t_final: 1.0,
            eps_reg: 1e-6,
            blowup_threshold: 1e8,
            scheme: Scheme::LaggedImplicit,
            record_every: 1,
            snapshot_times: Vec::new(),
            start_correction: false,
        }
    }
}

impl SolverConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        SolverConfig { dt, t_final, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.dt < self.t_final) {
            return Err(Error::invalid("t_final", format!("must exceed dt = {}, got {}", self.dt, self.t_final)));
        }
        if !(self.eps_reg > 0.0) {
            return Err(Error::invalid("eps_reg", format!("must be positive, got {}", self.eps_reg)));
        }
        if !(self.blowup_threshold > 1.0) {
            return Err(Error::invalid(
                "blowup_threshold",
                format!("must exceed 1, got {}", self.blowup_threshold),
            ));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every", "must be at least 1"));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return Err(Error::invalid("snapshot_times", format!("times must be finite and >= 0, got {t}")));
        }
        Ok(())
    }

    /// Number of steps; the last step lands on or just past `t_final`.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt - 1e-9).ceil().max(1.0) as usize
    }
}
