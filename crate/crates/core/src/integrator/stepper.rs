use std::time::Instant;

use super::report::{detect_blowup, BlowupStatus, RunReport, RunStatus, SeriesPoint, Snapshot};
use super::{Scheme, SolverConfig};
use crate::error::{Error, Result};
use crate::fractional::{HistoryBuffer, L1Weights};
use crate::grid::{DomainSpec, Field};
use crate::model::{reaction, validate_numerics, CouplingMode, ModelParameters};
use crate::spatial::{
    convolve_kernel, divergence, face_coefficients, global_mass, p_laplacian_power, power_secants, KernelGrid,
};

const CG_TOL: f64 = 1e-10;
const NEGATIVITY_WARNING: f64 = -1e-8;

/// Source of the saturating factor in the reaction.
#[derive(Debug, Clone)]
pub enum Coupling {
    Kernel(KernelGrid),
    GlobalMass,
}

/// One run's stepping machinery: parameters, coupling and the weight table.
#[derive(Debug, Clone)]
pub struct Integrator {
    params: ModelParameters,
    coupling: Coupling,
    config: SolverConfig,
    domain: DomainSpec,
    weights: L1Weights,
}

impl Integrator {
    pub fn new(params: ModelParameters, coupling: Coupling, config: SolverConfig, domain: &DomainSpec) -> Result<Self> {
        if let Some(v) = validate_numerics(&params).into_iter().next() {
            return Err(Error::InvalidParameter { name: v.field, reason: v.message });
        }
        config.validate()?;
        if domain.dim() != params.dim {
            return Err(Error::invalid(
                "dim",
                format!("parameters say {} but the grid has dimension {}", params.dim, domain.dim()),
            ));
        }
        match (&coupling, params.coupling) {
            (Coupling::Kernel(k), CouplingMode::Kernel) => {
                if k.domain() != domain {
                    return Err(Error::GridMismatch("kernel grid differs from the run grid".into()));
                }
            }
            (Coupling::GlobalMass, CouplingMode::GlobalMass) => {}
            _ => return Err(Error::invalid("coupling", "coupling data does not match the coupling mode")),
        }
        let weights = L1Weights::new(params.alpha, config.dt, config.n_steps() + 1)?;
        Ok(Integrator { params, coupling, config, domain: *domain, weights })
    }

    pub fn params(&self) -> &ModelParameters {
        &self.params
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn weights(&self) -> &L1Weights {
        &self.weights
    }

    /// Reaction values and the lagged rate `q ≥ 0` of its saturating loss,
    /// `μ·u₊·(k·coupling − 1)₊`, so that the loss equals `−q·u` where `q > 0`.
    fn reaction_values(&self, w: &Field) -> Result<(Vec<f64>, Vec<f64>)> {
        let p = &self.params;
        let coupling: Vec<f64> = match &self.coupling {
            Coupling::Kernel(k) if p.mu != 0.0 && p.k != 0.0 => convolve_kernel(w, k)?.into_values(),
            Coupling::Kernel(_) => vec![0.0; w.len()],
            Coupling::GlobalMass => vec![global_mass(w); w.len()],
        };
        let (mu, k) = match p.coupling {
            CouplingMode::Kernel => (p.mu, p.k),
            CouplingMode::GlobalMass => (1.0, 1.0),
        };
        let react = w.values().iter().zip(&coupling).map(|(&u, &c)| reaction(u, c, p)).collect();
        let rate = w.values().iter().zip(&coupling).map(|(&u, &c)| mu * u.max(0.0) * (k * c - 1.0).max(0.0)).collect();
        Ok((react, rate))
    }

    /// Rate of the linear loss term `−g·u` in the reaction.
    fn linear_loss(&self) -> f64 {
        match self.params.coupling {
            CouplingMode::Kernel => self.params.gamma,
            CouplingMode::GlobalMass => 1.0,
        }
    }

    fn diffusion(&self, w: &Field) -> Field {
        p_laplacian_power(w, self.params.p, self.params.m, self.config.eps_reg)
    }

    /// Computes `uⁿ` from the states `u⁰ … uⁿ⁻¹` held in `history`.
    pub fn step(&mut self, history: &HistoryBuffer) -> Result<Field> {
        if history.domain() != &self.domain {
            return Err(Error::GridMismatch("history grid differs from the run grid".into()));
        }
        if history.dt() != self.config.dt {
            return Err(Error::invalid("dt", "history step differs from the solver step"));
        }
        let n = history.len();
        self.weights.ensure_len(n + 1);
        let w = history.latest();
        let s = self.weights.scale();
        let b0 = self.weights.b()[0];
        let memory = history.memory_term(&self.weights);
        let (react, rate) = self.reaction_values(&w)?;

        let correction: Option<Vec<f64>> = (self.config.start_correction && n == 1).then(|| {
            let d = self.diffusion(&w);
            d.values().iter().zip(&react).map(|(a, b)| 0.5 * (a + b)).collect()
        });
        let corr = |i: usize| correction.as_ref().map_or(0.0, |c| c[i]);

        let values = match self.config.scheme {
            Scheme::Explicit => {
                let d = self.diffusion(&w);
                (0..w.len())
                    .map(|i| {
                        w.values()[i] + (d.values()[i] + react[i] - s * memory[i] + corr(i)) / (s * b0)
                    })
                    .collect()
            }
            Scheme::LaggedImplicit => {
                // The linear loss `−g·u` and the saturating loss `−q·u` move to
                // the new level; the growth part of the reaction stays explicit.
                let g = self.linear_loss();
                let shift: Vec<f64> = rate.iter().map(|q| s * b0 + g + q).collect();
                let rhs: Vec<f64> = (0..w.len())
                    .map(|i| {
                        let u = w.values()[i];
                        s * b0 * u - s * memory[i] + react[i] + (g + rate[i]) * u + corr(i)
                    })
                    .collect();
                self.lagged_solve(&w, &shift, &rhs)?
            }
        };
        Ok(Field::from_raw(self.domain, values))
    }

    /// Solves `(diag(c) − div(κ S ∇·)) v = rhs` with coefficients frozen at `w`.
    fn lagged_solve(&self, w: &Field, c: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        let d = &self.domain;
        let p = &self.params;
        let powered = if p.m == 1.0 { w.clone() } else { w.map(|v| v.max(0.0).powf(p.m)) };
        let kappa = face_coefficients(d, powered.values(), p.p, self.config.eps_reg);
        let secants = power_secants(d, w.values(), p.m);
        let coeff: Vec<Vec<f64>> =
            kappa.iter().zip(&secants).map(|(k, s)| k.iter().zip(s).map(|(a, b)| a * b).collect()).collect();

        let h2 = d.spacing() * d.spacing();
        let n = d.points();
        let diag: Vec<f64> = (0..d.len())
            .map(|i| {
                let ij = d.unflatten(i);
                let mut acc = c[i];
                for (a, ca) in coeff.iter().enumerate() {
                    let mut back = ij;
                    back[a] = (back[a] + n - 1) % n;
                    acc += (ca[i] + ca[d.flatten(back[0], back[1])]) / h2;
                }
                acc
            })
            .collect();
        let apply = |v: &[f64]| -> Vec<f64> {
            divergence(d, &coeff, v).iter().zip(v).zip(c).map(|((lv, x), ci)| ci * x - lv).collect()
        };
        conjugate_gradient(apply, &diag, rhs, w.values().to_vec(), 10 * d.len())
    }

    pub fn run(&mut self, u0: &Field) -> Result<RunReport> {
        let started = Instant::now();
        if u0.domain() != &self.domain {
            return Err(Error::GridMismatch("initial field grid differs from the run grid".into()));
        }
        if !u0.is_finite() {
            return Err(Error::NonFinite { term: "initial data" });
        }
        // Sign-changing data (linear reference runs) is not expected to stay nonnegative.
        let nonneg_start = u0.min_value() >= 0.0;
        let cfg = self.config.clone();
        let n_steps = cfg.n_steps();
        self.weights.ensure_len(n_steps + 1);

        let mut history = HistoryBuffer::new(u0, cfg.dt)?;
        let mut series = vec![SeriesPoint::of(0.0, u0)];
        let mut pending: Vec<f64> = cfg.snapshot_times.clone();
        let mut snapshots = Vec::new();
        take_snapshots(&mut pending, &mut snapshots, 0.0, cfg.dt, u0);
        let mut warnings = Vec::new();
        let mut status = RunStatus::Completed;
        let mut last = u0.clone();
        let mut steps = 0;

        for n in 1..=n_steps {
            let u = self.step(&history)?;
            let t = n as f64 * cfg.dt;
            steps = n;
            match detect_blowup(&u, cfg.blowup_threshold) {
                BlowupStatus::Ok => {}
                kind => {
                    status = if kind == BlowupStatus::Blowup {
                        RunStatus::Blowup { t }
                    } else {
                        RunStatus::NonFinite { t }
                    };
                    log::info!("run stopped at t = {t}: {status:?}");
                    series.push(SeriesPoint::of(t, &u));
                    last = u;
                    break;
                }
            }
            if warnings.is_empty() && nonneg_start && u.min_value() < NEGATIVITY_WARNING {
                let msg = format!("negative values first seen at t = {t}: min = {:e}", u.min_value());
                log::warn!("{msg}");
                warnings.push(msg);
            }
            if n % cfg.record_every == 0 || n == n_steps {
                series.push(SeriesPoint::of(t, &u));
            }
            take_snapshots(&mut pending, &mut snapshots, t, cfg.dt, &u);
            history.push(&u)?;
            last = u;
        }

        Ok(RunReport {
            status,
            series,
            final_time: steps as f64 * cfg.dt,
            final_field: last,
            steps,
            snapshots,
            warnings,
            wall_time: started.elapsed(),
        })
    }
}

fn take_snapshots(pending: &mut Vec<f64>, out: &mut Vec<Snapshot>, t: f64, dt: f64, u: &Field) {
    pending.retain(|&ts| {
        if t >= ts - 1e-9 * dt {
            out.push(Snapshot { t, field: u.clone() });
            false
        } else {
            true
        }
    });
}

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// definite operator, to relative residual [`CG_TOL`].
fn conjugate_gradient(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    diag: &[f64],
    b: &[f64],
    mut x: Vec<f64>,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok(vec![0.0; b.len()]);
    }
    let ax = apply(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for iter in 0..=max_iter {
        let res = dot(&r, &r).sqrt();
        if !res.is_finite() {
            return Err(Error::NonFinite { term: "linear solve residual" });
        }
        if res <= CG_TOL * b_norm {
            return Ok(x);
        }
        if iter == max_iter {
            return Err(Error::SolverDiverged { iterations: iter, residual: res / b_norm });
        }
        let ap = apply(&p);
        let step = rz / dot(&p, &ap);
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += step * pi);
        r.iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= step * api);
        z.iter_mut().zip(r.iter().zip(diag)).for_each(|(zi, (ri, di))| *zi = ri / di);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    unreachable!("loop returns on its last iteration")
}

/// One step with a freshly built [`Integrator`].
pub fn step(history: &HistoryBuffer, params: &ModelParameters, coupling: &Coupling, config: &SolverConfig) -> Result<Field> {
    Integrator::new(*params, coupling.clone(), config.clone(), history.domain())?.step(history)
}

pub fn run(u0: &Field, params: &ModelParameters, coupling: &Coupling, config: &SolverConfig) -> Result<RunReport> {
    Integrator::new(*params, coupling.clone(), config.clone(), u0.domain())?.run(u0)
}
