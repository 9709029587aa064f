//! Discrete checks of the fractional inequalities used in the energy
//! estimates, evaluated with the L1 operator.
//!
//! The L1 value at step `n` can be written `scale·Σ_i c_i (w_n − w_i)` with
//! nonnegative `c_i`, so convexity of `w ↦ w²/2` and `w ↦ w^q/q` carries the
//! continuous inequalities over to the discrete ones exactly; the checks only
//! have to allow for rounding.

use crate::error::{Error, Result};
use crate::model::{fractional_integral_of_unity, Bound};

use super::L1Weights;

/// Result of [`gronwall_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallOutcome {
    pub pass: bool,
    /// `bound − max y`; negative on failure.
    pub margin: f64,
    pub bound: f64,
}

/// Both sides of a discrete inequality `lhs ≥ rhs` at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepComparison {
    pub step: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub steps: Vec<StepComparison>,
}

impl InequalityReport {
    pub fn pass(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn first_failure(&self) -> Option<&StepComparison> {
        self.steps.iter().find(|s| !s.holds)
    }
}

/// L1 Caputo values of a uniformly sampled series at steps `1..len`.
pub fn l1_caputo_series(values: &[f64], weights: &L1Weights) -> Vec<f64> {
    l1_with_magnitude(values, weights).into_iter().map(|(v, _)| v).collect()
}

/// L1 values together with the sum of absolute contributions, which bounds
/// the rounding error.
fn l1_with_magnitude(values: &[f64], weights: &L1Weights) -> Vec<(f64, f64)> {
    let b = weights.b();
    assert!(b.len() + 1 >= values.len(), "weight table shorter than series");
    let s = weights.scale();
    (1..values.len())
        .map(|n| {
            let mut acc = 0.0;
            let mut mag = 0.0;
            for j in 0..n {
                let t = b[j] * (values[n - j] - values[n - j - 1]);
                acc += t;
                mag += t.abs();
            }
            (s * acc, s * mag)
        })
        .collect()
}

fn weights_for(len: usize, alpha: f64, dt: f64) -> Result<L1Weights> {
    L1Weights::new(alpha, dt, len.max(2))
}

fn compare(lhs: &[(f64, f64)], rhs: &[(f64, f64)], lhs_factor: &[f64], rhs_factor: f64) -> InequalityReport {
    let steps = lhs
        .iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (&(dl, ml), &(dr, mr)))| {
            let f = lhs_factor[i];
            let l = f * dl;
            let r = rhs_factor * dr;
            let slack = 64.0 * f64::EPSILON * (f.abs() * ml + rhs_factor * mr);
            StepComparison { step: i + 1, lhs: l, rhs: r, holds: l - r >= -slack }
        })
        .collect();
    InequalityReport { steps }
}

/// `v_n (D v)_n ≥ ½ (D v²)_n` at every step.
pub fn alikhanov_check(v: &[f64], alpha: f64, dt: f64) -> Result<InequalityReport> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { term: "series" });
    }
    let w = weights_for(v.len(), alpha, dt)?;
    let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
    Ok(compare(&l1_with_magnitude(v, &w), &l1_with_magnitude(&sq, &w), &v[1..], 0.5))
}

/// `u_n^{q−1} (D u)_n ≥ (1/q) (D u^q)_n` at every step, for nonnegative data
/// and integer `q ≥ 2`.
pub fn power_inequality_check(u: &[f64], q: u32, alpha: f64, dt: f64) -> Result<InequalityReport> {
    if q < 2 {
        return Err(Error::invalid("n_exp", format!("must be at least 2, got {q}")));
    }
    if let Some(bad) = u.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::invalid("u_series", format!("samples must be finite and nonnegative, found {bad}")));
    }
    let w = weights_for(u.len(), alpha, dt)?;
    let qi = q as i32;
    let pow: Vec<f64> = u.iter().map(|x| x.powi(qi)).collect();
    let factor: Vec<f64> = u[1..].iter().map(|x| x.powi(qi - 1)).collect();
    Ok(compare(&l1_with_magnitude(u, &w), &l1_with_magnitude(&pow, &w), &factor, 1.0 / q as f64))
}

/// Checks `max y ≤ y(0) + b T^α / (α Γ(α))` for a nonnegative series.
pub fn gronwall_bound_check(y: &[f64], c1: f64, b: f64, alpha: f64, t_final: f64) -> Result<GronwallOutcome> {
    if y.is_empty() {
        return Err(Error::invalid("y_series", "must be nonempty"));
    }
    if let Some(bad) = y.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::invalid("y_series", format!("samples must be finite and nonnegative, found {bad}")));
    }
    if !(c1 >= 0.0) || !(b >= 0.0) {
        return Err(Error::invalid("c1/b", "coefficients must be nonnegative"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) || !(t_final >= 0.0) {
        return Err(Error::invalid("alpha/T", "need alpha in (0, 1] and T >= 0"));
    }
    let bound = y[0] + b * fractional_integral_of_unity(alpha, t_final);
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(GronwallOutcome { pass: max <= bound, margin: bound - max, bound })
}

/// `[y0^{1−k} + (C + C1(k−1)) T^α/(αΓ(α))]^{1/(1−k)}`, or
/// [`Bound::Undefined`] when the bracket is negative.
pub fn bernoulli_decay_bound(y0: f64, k_exp: f64, c: f64, c1: f64, alpha: f64, t_final: f64) -> Result<Bound> {
    if !(k_exp > 0.0 && k_exp < 1.0) {
        return Err(Error::invalid("k_exp", format!("must lie in (0, 1), got {k_exp}")));
    }
    if !(c1 > 0.0) {
        return Err(Error::invalid("C1", format!("must be positive, got {c1}")));
    }
    if !(y0 > 0.0) {
        return Err(Error::invalid("y0", format!("must be positive, got {y0}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) || !(t_final >= 0.0) {
        return Err(Error::invalid("alpha/T", "need alpha in (0, 1] and T >= 0"));
    }
    let e = 1.0 - k_exp;
    let base = y0.powf(e) + (c + c1 * (k_exp - 1.0)) * fractional_integral_of_unity(alpha, t_final);
    if base < 0.0 {
        return Ok(Bound::Undefined { base });
    }
    let v = base.powf(1.0 / e);
    if !v.is_finite() {
        return Err(Error::NonFinite { term: "Bernoulli bracket" });
    }
    Ok(Bound::Finite(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractional::linear_fode_solution;

    #[test]
    fn alikhanov_trivial_and_linear() {
        let r = alikhanov_check(&[1.3; 50], 0.5, 0.01).unwrap();
        assert!(r.pass());
        assert!(r.steps.iter().all(|s| s.lhs == 0.0 && s.rhs == 0.0));
        let lin: Vec<f64> = (0..=100).map(|n| n as f64 * 0.01).collect();
        assert!(alikhanov_check(&lin, 0.5, 0.01).unwrap().pass());
    }

    #[test]
    fn power_inequality_cases() {
        let lin: Vec<f64> = (0..=100).map(|n| n as f64 * 0.01).collect();
        assert!(power_inequality_check(&lin, 3, 0.5, 0.01).unwrap().pass());
        assert!(power_inequality_check(&[0.7; 20], 4, 0.3, 0.1).unwrap().pass());
        assert!(power_inequality_check(&[0.1, -0.2], 2, 0.5, 0.1).is_err());
        assert!(power_inequality_check(&lin, 1, 0.5, 0.1).is_err());
    }

    #[test]
    fn power_two_matches_alikhanov() {
        let v: Vec<f64> = (0..60).map(|n| 1.0 + (n as f64 * 0.37).sin()).collect();
        let a = alikhanov_check(&v, 0.4, 0.05).unwrap();
        let p = power_inequality_check(&v, 2, 0.4, 0.05).unwrap();
        assert_eq!(a.steps.iter().map(|s| s.holds).collect::<Vec<_>>(), p.steps.iter().map(|s| s.holds).collect::<Vec<_>>());
    }

    #[test]
    fn gronwall_cases() {
        assert!(gronwall_bound_check(&[0.4; 10], 1.0, 0.5, 0.5, 1.0).unwrap().pass);
        let dt = 0.01;
        let y: Vec<f64> = (0..=200)
            .map(|n| linear_fode_solution(-1.0, 0.5, 0.2, 0.5, n as f64 * dt).unwrap())
            .collect();
        assert!(gronwall_bound_check(&y, 1.0, 0.5, 0.5, 2.0).unwrap().pass);
        let mut bad = vec![0.1; 10];
        bad[6] = 0.1 + 0.5 * fractional_integral_of_unity(0.5, 1.0) + 1e-9;
        let out = gronwall_bound_check(&bad, 1.0, 0.5, 0.5, 1.0).unwrap();
        assert!(!out.pass && out.margin < 0.0);
        assert!(gronwall_bound_check(&[0.1, -0.1], 1.0, 0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn bernoulli_cases() {
        let at_zero = bernoulli_decay_bound(2.0, 0.5, 1.0, 1.0, 0.5, 0.0).unwrap().value().unwrap();
        assert!((at_zero - 2.0).abs() < 1e-15);
        // Reference: (1 + 1.5/(0.5 √π))² to 20 digits.
        let v = bernoulli_decay_bound(1.0, 0.5, 2.0, 1.0, 0.5, 1.0).unwrap().value().unwrap();
        assert!((v - 7.249_926_476_940_653_765_5).abs() < 1e-13);
        let small_k = bernoulli_decay_bound(1.5, 1e-9, 2.0, 1.0, 0.5, 1.0).unwrap().value().unwrap();
        let limit = 1.5 + fractional_integral_of_unity(0.5, 1.0);
        assert!((small_k - limit).abs() < 1e-7);
        assert!(matches!(
            bernoulli_decay_bound(0.1, 0.5, 0.0, 5.0, 0.5, 1.0).unwrap(),
            Bound::Undefined { .. }
        ));
    }
}
