//! Model parameters, derived constants and pointwise reaction arithmetic.

use serde::{Deserialize, Serialize};

use crate::{gamma, Error, Result};

/// How the saturating factor of the reaction is coupled to the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CouplingMode {
    /// `μ u² (1 − k J∗u) − γ u` with a competition kernel `J`.
    #[default]
    Kernel,
    /// `u² (1 − ∫u dx) − u`; μ = k = γ = 1 regardless of the stored values.
    GlobalMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParameters {
    /// Order of the Caputo derivative, in (0, 1).
    pub alpha: f64,
    /// Diffusion exponent, in (1, 2).
    pub p: f64,
    pub mu: f64,
    /// Competition strength. Zero is accepted so blow-up can be demonstrated.
    pub k: f64,
    pub gamma: f64,
    /// Exponent of the diffusing quantity `Δ_p u^m`.
    pub m: f64,
    pub dim: usize,
    pub coupling: CouplingMode,
}

impl Default for ModelParameters {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            p: 1.5,
            mu: 1.0,
            k: 1.0,
            gamma: 0.0,
            m: 1.0,
            dim: 1,
            coupling: CouplingMode::Kernel,
        }
    }
}

/// A violated parameter invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Returns every violated invariant; an empty list means the set is admissible.
pub fn validate_params(params: &ModelParameters) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |field: &'static str, message: String| out.push(Violation { field, message });

    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        bad("alpha", format!("must lie in (0, 1), got {}", params.alpha));
    }
    if !(params.p > 1.0 && params.p < 2.0) {
        bad("p", format!("must lie in (1, 2), got {}", params.p));
    }
    if !(params.mu > 0.0 && params.mu.is_finite()) {
        bad("mu", format!("must be > 0, got {}", params.mu));
    }
    if !(params.k >= 0.0 && params.k.is_finite()) {
        bad("k", format!("must be >= 0, got {}", params.k));
    }
    if !(params.gamma >= 0.0 && params.gamma.is_finite()) {
        bad("gamma", format!("must be >= 0, got {}", params.gamma));
    }
    let dim_ok = params.dim == 1 || params.dim == 2;
    if !dim_ok {
        bad("dim", format!("must be 1 or 2, got {}", params.dim));
    }
    match params.coupling {
        CouplingMode::Kernel => {
            if params.m != 1.0 {
                bad("m", format!("kernel coupling requires m = 1, got {}", params.m));
            }
        }
        CouplingMode::GlobalMass => {
            if dim_ok {
                let lower = 2.0 - 2.0 / params.dim as f64;
                if !(params.m > lower && params.m <= 3.0) {
                    bad(
                        "m",
                        format!(
                            "global-mass coupling requires {lower} < m <= 3 in dimension {}, got {}",
                            params.dim, params.m
                        ),
                    );
                }
            }
        }
    }
    out
}

/// The weaker ranges the integrator can handle. Unlike [`validate_params`]
/// this admits the linear limits `p = 2` and `μ = 0` used by reference runs.
pub fn validate_numerics(params: &ModelParameters) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |field: &'static str, message: String| out.push(Violation { field, message });
    if !(params.alpha > 0.0 && params.alpha < 1.0) {
        bad("alpha", format!("must lie in (0, 1), got {}", params.alpha));
    }
    if !(params.p > 1.0 && params.p <= 2.0) {
        bad("p", format!("must lie in (1, 2], got {}", params.p));
    }
    for (field, v) in [("mu", params.mu), ("k", params.k), ("gamma", params.gamma)] {
        if !(v >= 0.0 && v.is_finite()) {
            bad(field, format!("must be finite and >= 0, got {v}"));
        }
    }
    if params.dim != 1 && params.dim != 2 {
        bad("dim", format!("must be 1 or 2, got {}", params.dim));
    }
    match params.coupling {
        CouplingMode::Kernel if params.m != 1.0 => {
            bad("m", format!("kernel coupling requires m = 1, got {}", params.m));
        }
        CouplingMode::GlobalMass if !(params.m > 0.0 && params.m <= 3.0) => {
            bad("m", format!("must lie in (0, 3], got {}", params.m));
        }
        _ => {}
    }
    out
}

/// Constant solutions `0 < a ≤ A` of `μu²(1 − ku) − γu = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumRoots {
    /// Lower (Allee) root.
    pub a: f64,
    /// Upper (carrying) root.
    pub big_a: f64,
    /// False when `1 − 4kγ/μ < 0`; `a` and `big_a` then hold the real part `1/(2k)`.
    pub real: bool,
}

pub fn equilibrium_roots(mu: f64, k: f64, gamma: f64) -> Result<EquilibriumRoots> {
    if !(mu > 0.0) {
        return Err(Error::invalid("mu", "must be > 0"));
    }
    if !(k > 0.0) {
        return Err(Error::invalid("k", "must be > 0"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::invalid("gamma", "must be >= 0"));
    }
    let disc = 1.0 - 4.0 * k * gamma / mu;
    if disc < 0.0 {
        let mid = 0.5 / k;
        return Ok(EquilibriumRoots {
            a: mid,
            big_a: mid,
            real: false,
        });
    }
    let big_a = (1.0 + disc.sqrt()) / (2.0 * k);
    // a·A = γ/(μk); avoids cancellation in 1 − √disc for small γ.
    let a = gamma / (mu * k) / big_a;
    Ok(EquilibriumRoots { a, big_a, real: true })
}

/// User-supplied analysis constants and kernel geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConstants {
    /// Gagliardo–Nirenberg constant.
    pub c_gn: f64,
    /// Bound of the fractional solution operators.
    pub c4: f64,
    /// Kernel floor on B(0, δ₀).
    pub eta: f64,
    pub delta0: f64,
    /// Radius of the balls used by the local functionals.
    pub delta: f64,
    /// Embedding constants.
    pub c1: f64,
    pub c2: f64,
}

impl AnalysisConstants {
    /// Unit embedding constants and δ = δ₀/2.
    pub fn new(eta: f64, delta0: f64) -> Self {
        Self {
            c_gn: 1.0,
            c4: 1.0,
            eta,
            delta0,
            delta: 0.5 * delta0,
            c1: 1.0,
            c2: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c_gn", self.c_gn),
            ("c4", self.c4),
            ("eta", self.eta),
            ("delta0", self.delta0),
            ("delta", self.delta),
            ("c1", self.c1),
            ("c2", self.c2),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if self.delta > 0.5 * self.delta0 * (1.0 + 1e-12) {
            return Err(Error::invalid(
                "delta",
                format!("must be <= delta0/2 = {}, got {}", 0.5 * self.delta0, self.delta),
            ));
        }
        Ok(())
    }
}

/// Competition threshold: 0 in one dimension, `(μ C_GN² + 1)/η` in two.
pub fn k_star(dim: usize, mu: f64, consts: &AnalysisConstants) -> Result<f64> {
    match dim {
        1 => Ok(0.0),
        2 => {
            consts.validate()?;
            Ok((mu * consts.c_gn * consts.c_gn + 1.0) / consts.eta)
        }
        _ => Err(Error::invalid("dim", format!("must be 1 or 2, got {dim}"))),
    }
}

/// Pointwise reaction `μ u²(1 − k·coupling) − γ u`.
///
/// `coupling` is `(J∗u)(x)` in kernel mode and `∫u dx` in global-mass mode,
/// where μ = k = γ = 1. The quadratic factor uses `max(u, 0)²`.
#[inline]
pub fn reaction(u: f64, coupling: f64, params: &ModelParameters) -> f64 {
    let up = u.max(0.0);
    match params.coupling {
        CouplingMode::Kernel => params.mu * up * up * (1.0 - params.k * coupling) - params.gamma * u,
        CouplingMode::GlobalMass => up * up * (1.0 - coupling) - u,
    }
}

/// Decay rate `γ − μ·sup u`; positive values put a run in the decay regime.
pub fn sigma(gamma: f64, mu: f64, sup_u: f64) -> f64 {
    gamma - mu * sup_u
}

/// Smallness threshold on ‖u‖∞ for the decay regime. The default reading is
/// `γ/μ`; a user-supplied `tau` selects `τ/μ` instead.
pub fn smallness_threshold(params: &ModelParameters, tau: Option<f64>) -> f64 {
    tau.unwrap_or(params.gamma) / params.mu
}

/// `T^α / (α Γ(α))`, the Riemann–Liouville integral of 1 over `[0, T]`.
pub fn fractional_integral_of_unity(alpha: f64, t: f64) -> f64 {
    t.powf(alpha) / (alpha * gamma(alpha))
}

/// Result of a bound formula whose base may leave its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    /// The bracketed base raised to a negative or fractional power was `base <= 0`.
    Undefined { base: f64 },
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Bound::Finite(v) => Some(v),
            Bound::Undefined { .. } => None,
        }
    }
}

fn finite(term: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { term })
    }
}

/// Global L∞ bound `K = C₄‖u₀‖ + μ C₄ M² T^α/α` on `[0, T]`.
///
/// `M²` is the Bernoulli-type bound on the local L² mass of `u` over a ball of
/// radius δ:
///
/// ```text
/// N = 1:  M² = [ (2δ‖u₀‖²)^{1−p}   + (Q₁ + 2γ − 2C₂)      T^α/(αΓ(α)) ]^{1/(1−p)}
/// N = 2:  M² = [ ((2δ)²‖u₀‖²)^{1−p} + (2μC_GN⁴ + 2γ − 2C₂) T^α/(αΓ(α)) ]^{1/(1−p)}
/// Q₁ = 2μ ((μ^{1/3} C_GN^{4/3} + 1)⁶ (ηk)^{−5} + C_GN^{10})
/// ```
pub fn bound_k(
    params: &ModelParameters,
    consts: &AnalysisConstants,
    u0_sup: f64,
    t_final: f64,
) -> Result<Bound> {
    consts.validate()?;
    if !(t_final > 0.0) {
        return Err(Error::invalid("t_final", "must be > 0"));
    }
    if !(u0_sup >= 0.0) {
        return Err(Error::invalid("u0_sup", "must be >= 0"));
    }
    let ModelParameters {
        alpha, p, mu, k, gamma, ..
    } = *params;
    let delta = consts.delta;
    let time_factor = finite("T^α/(αΓ(α))", fractional_integral_of_unity(alpha, t_final))?;

    let (initial_mass, growth) = match params.dim {
        1 => {
            let q1 = 2.0
                * mu
                * ((mu.cbrt() * consts.c_gn.powf(4.0 / 3.0) + 1.0).powi(6)
                    * (consts.eta * k).powi(-5)
                    + consts.c_gn.powi(10));
            let q1 = finite("Q1", q1)?;
            (2.0 * delta * u0_sup * u0_sup, q1 + 2.0 * gamma - 2.0 * consts.c2)
        }
        2 => (
            (2.0 * delta).powi(2) * u0_sup * u0_sup,
            2.0 * mu * consts.c_gn.powi(4) + 2.0 * gamma - 2.0 * consts.c2,
        ),
        d => return Err(Error::invalid("dim", format!("must be 1 or 2, got {d}"))),
    };

    let m_squared = if initial_mass == 0.0 {
        // (0)^{1−p} = +∞ drives the bracket to +∞ and M² to 0.
        0.0
    } else {
        let first = finite("initial mass term", initial_mass.powf(1.0 - p))?;
        let base = finite("Bernoulli bracket", first + growth * time_factor)?;
        if base <= 0.0 {
            return Ok(Bound::Undefined { base });
        }
        finite("M^2", base.powf(1.0 / (1.0 - p)))?
    };
    let k_bound = consts.c4 * u0_sup + mu * consts.c4 * m_squared * t_final.powf(alpha) / alpha;
    Ok(Bound::Finite(finite("K", k_bound)?))
}
