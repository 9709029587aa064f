use serde::{Deserialize, Serialize};

use super::functionals::h_value;
use crate::error::Result;
use crate::fractional::mittag_leffler;
use crate::integrator::{RunReport, Snapshot};
use crate::model::{Bound, EquilibriumRoots};
use crate::spatial::BallIntegrator;

/// Relative slack on the Mittag-Leffler decay envelope.
const ENVELOPE_SLACK: f64 = 0.05;
/// Relative slack on the non-increase of `max_x H`.
const LYAPUNOV_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A hypothesis of the check does not hold, so nothing is concluded.
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessReport {
    pub verdict: Verdict,
    /// `max_t ‖u‖∞ / K`.
    pub max_ratio: f64,
}

/// Passes iff every recorded sup-norm is at most `K`.
pub fn boundedness_check(run: &RunReport, k: &Bound) -> BoundednessReport {
    let Some(k) = k.value() else {
        return BoundednessReport { verdict: Verdict::Undecided, max_ratio: f64::NAN };
    };
    if run.blew_up() {
        return BoundednessReport { verdict: Verdict::Fail, max_ratio: f64::INFINITY };
    }
    let max_ratio = run.max_sup_norm() / k;
    let verdict = if run.max_sup_norm() <= k { Verdict::Pass } else { Verdict::Fail };
    BoundednessReport { verdict, max_ratio }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport {
    pub verdict: Verdict,
    /// Largest `‖u(t)‖∞ / (‖u₀‖∞ E_α(−σt^α))` over recorded times.
    pub worst_ratio: f64,
    /// First recorded time at which the envelope (with slack) was exceeded.
    pub first_violation: Option<f64>,
    /// Whether the series also stays below `‖u₀‖∞ exp(−σ^{1/α} t)`.
    pub exponential_envelope_holds: bool,
}

/// Compares recorded sup-norms against `‖u₀‖∞ E_α(−σ t^α)` with 5% slack.
pub fn decay_envelope_check(run: &RunReport, sigma: f64, alpha: f64) -> Result<DecayReport> {
    if !(sigma > 0.0) {
        return Ok(DecayReport {
            verdict: Verdict::Undecided,
            worst_ratio: f64::NAN,
            first_violation: None,
            exponential_envelope_holds: false,
        });
    }
    if run.blew_up() {
        return Ok(DecayReport {
            verdict: Verdict::Fail,
            worst_ratio: f64::INFINITY,
            first_violation: Some(run.final_time),
            exponential_envelope_holds: false,
        });
    }
    let sup0 = run.series.first().map_or(0.0, |p| p.sup_norm);
    let rate = sigma.powf(1.0 / alpha);
    let mut worst_ratio: f64 = 0.0;
    let mut first_violation = None;
    let mut exponential_envelope_holds = true;
    for p in &run.series {
        let env = sup0 * mittag_leffler(alpha, 1.0, -sigma * p.t.powf(alpha))?;
        if env > 0.0 {
            worst_ratio = worst_ratio.max(p.sup_norm / env);
        } else if p.sup_norm > 0.0 {
            worst_ratio = f64::INFINITY;
        }
        if p.sup_norm > env * (1.0 + ENVELOPE_SLACK) && first_violation.is_none() {
            first_violation = Some(p.t);
        }
        if p.sup_norm > sup0 * (-rate * p.t).exp() {
            exponential_envelope_holds = false;
        }
    }
    let verdict = if first_violation.is_none() { Verdict::Pass } else { Verdict::Fail };
    Ok(DecayReport { verdict, worst_ratio, first_violation, exponential_envelope_holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlleeVerdict {
    Extinction,
    Persistence,
    Blowup,
    Undecided,
}

/// Absolute tolerances for the Allee classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlleeBands {
    /// Terminal sup-norm below this counts as extinction.
    pub tol_ext: f64,
    /// Terminal sup-norm within this of `A` counts as persistence.
    pub tol_per: f64,
}

impl AlleeBands {
    /// 2% of `a` and 5% of `A`.
    pub fn for_roots(roots: &EquilibriumRoots) -> Self {
        AlleeBands { tol_ext: 0.02 * roots.a, tol_per: 0.05 * roots.big_a }
    }
}

pub fn allee_classify(run: &RunReport, roots: &EquilibriumRoots, bands: &AlleeBands) -> AlleeVerdict {
    if run.blew_up() {
        return AlleeVerdict::Blowup;
    }
    let terminal = run.terminal_sup_norm();
    if terminal < bands.tol_ext {
        AlleeVerdict::Extinction
    } else if (terminal - roots.big_a).abs() <= bands.tol_per {
        AlleeVerdict::Persistence
    } else {
        AlleeVerdict::Undecided
    }
}

/// `max_x H` and `max_x D` at the monitored times.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LyapunovSeries {
    pub times: Vec<f64>,
    pub h_max: Vec<f64>,
    pub d_max: Vec<f64>,
}

impl LyapunovSeries {
    /// Pass iff no later `max_x H` exceeds the first by more than the slack;
    /// returns the first offending time on failure.
    pub fn verdict(&self) -> (Verdict, Option<f64>) {
        let Some(&h0) = self.h_max.first() else {
            return (Verdict::Pass, None);
        };
        let limit = h0 * (1.0 + LYAPUNOV_SLACK) + f64::MIN_POSITIVE;
        match self.h_max.iter().position(|&h| h > limit) {
            Some(i) => (Verdict::Fail, Some(self.times[i])),
            None => (Verdict::Pass, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovReport {
    pub series: LyapunovSeries,
    pub verdict: Verdict,
    /// Failure time, or the time at which `sup u ≥ a` made the check undecided.
    pub at: Option<f64>,
}

/// Tracks `max_x H` and `max_x D` over the given field snapshots.
pub fn lyapunov_monitor(
    snapshots: &[Snapshot],
    roots: &EquilibriumRoots,
    mu: f64,
    k: f64,
    delta: f64,
) -> Result<LyapunovReport> {
    let mut series = LyapunovSeries::default();
    let Some(first) = snapshots.first() else {
        return Ok(LyapunovReport { series, verdict: Verdict::Pass, at: None });
    };
    let ball = BallIntegrator::new(first.field.domain(), delta)?;
    let coeff = 0.5 * (roots.big_a - roots.a) * mu * k;
    for snap in snapshots {
        if !roots.real || !(snap.field.max_value() < roots.a) {
            return Ok(LyapunovReport { series, verdict: Verdict::Undecided, at: Some(snap.t) });
        }
        let hv: Vec<f64> = snap.field.values().iter().map(|&u| h_value(u, roots)).collect();
        let sq: Vec<f64> = snap.field.values().iter().map(|&u| u * u).collect();
        let h = ball.integrate_values(&hv);
        let d = ball.integrate_values(&sq);
        series.times.push(snap.t);
        series.h_max.push(h.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        series.d_max.push(coeff * d.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
    let (verdict, at) = series.verdict();
    Ok(LyapunovReport { series, verdict, at })
}
