use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracles::abm_blowup_time;
use crate::error::Result;
use crate::grid::{DomainSpec, Field};
use crate::integrator::{linear_reference_for, Coupling, Integrator, RunReport, RunStatus, SolverConfig};
use crate::model::{bound_k, k_star, AnalysisConstants, Bound, CouplingMode, ModelParameters};
use crate::spatial::{discretize_kernel, KernelGrid, KernelShape};

/// Box kernel with the floor set to 90% of its discrete core minimum.
fn box_kernel(delta0: f64, domain: &DomainSpec) -> Result<KernelGrid> {
    let probe = discretize_kernel(KernelShape::Box, delta0, 0.0, domain)?;
    discretize_kernel(KernelShape::Box, delta0, 0.9 * probe.core_min(), domain)
}

/// `μ = k = 1`, `γ = 3/16`, so that `a = 1/4` and `A = 3/4`.
pub fn allee_parameters(alpha: f64) -> ModelParameters {
    ModelParameters { alpha, p: 1.5, mu: 1.0, k: 1.0, gamma: 3.0 / 16.0, ..Default::default() }
}

/// Homogeneous run of the Allee configuration on a small 1D grid, where the
/// equation reduces to the scalar fractional ODE.
pub fn homogeneous_run(alpha: f64, u0: f64, t_final: f64, dt: f64, snapshot_times: &[f64]) -> Result<RunReport> {
    let domain = DomainSpec::new(4.0, 8, 1)?;
    let kernel = box_kernel(0.5, &domain)?;
    let config = SolverConfig { snapshot_times: snapshot_times.to_vec(), ..SolverConfig::new(dt, t_final) };
    Integrator::new(allee_parameters(alpha), Coupling::Kernel(kernel), config, &domain)?
        .run(&Field::constant(domain, u0))
}

/// Sup-norm error at `T = 1` of the linear problem `p = 2`, `μ = 0`,
/// `γ = 0.5`, `α = 0.5`, `u₀ = sin x` on `[−π, π]` with 64 points, against
/// the spectral Mittag-Leffler reference.
pub fn linear_oracle_error(dt: f64, start_correction: bool) -> Result<f64> {
    let domain = DomainSpec::new(PI, 64, 1)?;
    let params = ModelParameters { alpha: 0.5, p: 2.0, mu: 0.0, k: 0.0, gamma: 0.5, ..Default::default() };
    let config = SolverConfig { start_correction, ..SolverConfig::new(dt, 1.0) };
    let u0 = Field::from_fn(domain, |x| x[0].sin());
    let report = Integrator::new(params, Coupling::Kernel(box_kernel(0.5, &domain)?), config, &domain)?.run(&u0)?;
    let reference = linear_reference_for(&u0, &params, &[report.final_time])?;
    report.final_field.max_abs_diff(&reference[0])
}

#[derive(Debug, Clone)]
pub struct BoundedRun {
    pub report: RunReport,
    pub bound: Bound,
    pub k_star: f64,
    pub k: f64,
    pub eta: f64,
}

/// 2D run on `[−8, 8]²` with a box kernel (`δ₀ = 0.5`), `k = 1.5·k*`,
/// `μ = 1`, `γ = 0.1`, `p = 1.5`, `α = 0.5` and a unit Gaussian bump.
pub fn bounded_2d_run(points: usize, t_final: f64, dt: f64) -> Result<BoundedRun> {
    let domain = DomainSpec::new(8.0, points, 2)?;
    let kernel = box_kernel(0.5, &domain)?;
    let eta = kernel.eta();
    let consts = AnalysisConstants::new(eta, 0.5);
    let ks = k_star(2, 1.0, &consts)?;
    let params =
        ModelParameters { alpha: 0.5, p: 1.5, mu: 1.0, k: 1.5 * ks, gamma: 0.1, dim: 2, ..Default::default() };
    let u0 = Field::from_fn(domain, |x| (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
    let mut config = SolverConfig::new(dt, t_final);
    config.record_every = 10;
    let report = Integrator::new(params, Coupling::Kernel(kernel), config, &domain)?.run(&u0)?;
    let bound = bound_k(&params, &consts, u0.sup_norm(), t_final)?;
    Ok(BoundedRun { report, bound, k_star: ks, k: params.k, eta })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupComparison {
    pub run_time: Option<f64>,
    pub oracle_time: Option<f64>,
}

impl BlowupComparison {
    /// `|t_run − t_oracle| / t_oracle`, infinite if either run did not blow up.
    pub fn relative_gap(&self) -> f64 {
        match (self.run_time, self.oracle_time) {
            (Some(r), Some(o)) => (r - o).abs() / o,
            _ => f64::INFINITY,
        }
    }
}

/// Blow-up time of the homogeneous run `u₀ = 2`, `k = γ = 0` against the
/// predictor-corrector solution of `D^α y = y²`.
pub fn blowup_comparison(alpha: f64, domain: DomainSpec, dt: f64, oracle_dt: f64) -> Result<BlowupComparison> {
    let params =
        ModelParameters { alpha, p: 1.5, mu: 1.0, k: 0.0, gamma: 0.0, dim: domain.dim(), ..Default::default() };
    let config = SolverConfig { record_every: 10, ..SolverConfig::new(dt, 5.0) };
    let threshold = config.blowup_threshold;
    let kernel = box_kernel(0.5, &domain)?;
    let report = Integrator::new(params, Coupling::Kernel(kernel), config, &domain)?.run(&Field::constant(domain, 2.0))?;
    let run_time = match report.status {
        RunStatus::Blowup { t } | RunStatus::NonFinite { t } => Some(t),
        RunStatus::Completed => None,
    };
    let oracle_time = abm_blowup_time(alpha, 2.0, |y| y * y, oracle_dt, threshold, 5.0)?;
    Ok(BlowupComparison { run_time, oracle_time })
}

/// Global-mass run with uniform random initial data in `[0, 1)`.
pub fn global_mass_run(
    dim: usize,
    m: f64,
    p: f64,
    points: usize,
    t_final: f64,
    dt: f64,
    seed: u64,
) -> Result<RunReport> {
    let domain = DomainSpec::new(8.0, points, dim)?;
    let params = ModelParameters {
        alpha: 0.5,
        p,
        m,
        dim,
        coupling: CouplingMode::GlobalMass,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..domain.len()).map(|_| rng.gen::<f64>()).collect();
    let u0 = Field::from_values(domain, values)?;
    let config = SolverConfig { record_every: 10, ..SolverConfig::new(dt, t_final) };
    Integrator::new(params, Coupling::GlobalMass, config, &domain)?.run(&u0)
}
