use crate::error::{Error, Result};
use crate::grid::Field;
use crate::model::EquilibriumRoots;
use crate::spatial::BallIntegrator;

/// `h(u) = A ln(1 − u/A) − a ln(1 − u/a)`, defined for `u < a`.
pub fn h_value(u: f64, roots: &EquilibriumRoots) -> f64 {
    let (a, big) = (roots.a, roots.big_a);
    big * (-u / big).ln_1p() - a * (-u / a).ln_1p()
}

/// `h′(u) = (A − a) u / ((A − u)(a − u))`.
pub fn h_prime(u: f64, roots: &EquilibriumRoots) -> f64 {
    let (a, big) = (roots.a, roots.big_a);
    (big - a) * u / ((big - u) * (a - u))
}

/// `h″(u) = (A − a)(aA − u²) / ((A − u)²(a − u)²)`.
pub fn h_second(u: f64, roots: &EquilibriumRoots) -> f64 {
    let (a, big) = (roots.a, roots.big_a);
    (big - a) * (a * big - u * u) / ((big - u).powi(2) * (a - u).powi(2))
}

fn require_below_a(u: &Field, roots: &EquilibriumRoots) -> Result<()> {
    if !roots.real {
        return Err(Error::Hypothesis("equilibrium roots are complex; h is undefined".into()));
    }
    let top = u.max_value();
    if !(top < roots.a) {
        return Err(Error::Hypothesis(format!("sup u = {top} is not below a = {}", roots.a)));
    }
    Ok(())
}

/// `H(x) = ∫_{B(x,δ)} h(u(y)) dy`.
pub fn h_functional(u: &Field, roots: &EquilibriumRoots, delta: f64) -> Result<Field> {
    require_below_a(u, roots)?;
    BallIntegrator::new(u.domain(), delta)?.integrate(&u.map(|v| h_value(v, roots)))
}

/// `D(x) = ½ (A − a) μ k ∫_{B(x,δ)} u² dy`.
pub fn d_functional(u: &Field, roots: &EquilibriumRoots, mu: f64, k: f64, delta: f64) -> Result<Field> {
    let c = 0.5 * (roots.big_a - roots.a) * mu * k;
    Ok(BallIntegrator::new(u.domain(), delta)?.integrate_squared(u)?.map(|v| c * v))
}

/// Largest `δ = δ₀/2^j` satisfying
/// `−(A−a)²/(A²a) + (A−a) K⁴ μ k (2δ)² / (2 (A−K)² (a−K)²) ≤ 0`,
/// where `K = sup u < a`.
pub fn admissible_delta(roots: &EquilibriumRoots, mu: f64, k: f64, sup_u: f64, delta0: f64) -> Result<f64> {
    let (a, big) = (roots.a, roots.big_a);
    if !roots.real || !(sup_u >= 0.0 && sup_u < a) {
        return Err(Error::Hypothesis(format!("need real roots and 0 <= sup u < a = {a}, got sup u = {sup_u}")));
    }
    if !(delta0 > 0.0) {
        return Err(Error::invalid("delta0", format!("must be positive, got {delta0}")));
    }
    let lhs = |delta: f64| {
        -(big - a).powi(2) / (big * big * a)
            + (big - a) * sup_u.powi(4) * mu * k * (2.0 * delta).powi(2)
                / (2.0 * (big - sup_u).powi(2) * (a - sup_u).powi(2))
    };
    let mut delta = 0.5 * delta0;
    for _ in 0..200 {
        if lhs(delta) <= 0.0 {
            return Ok(delta);
        }
        delta *= 0.5;
    }
    Err(Error::Hypothesis("no admissible ball radius found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainSpec;
    use crate::model::equilibrium_roots;

    fn roots() -> EquilibriumRoots {
        equilibrium_roots(1.0, 1.0, 3.0 / 16.0).unwrap()
    }

    #[test]
    fn h_shape() {
        let r = roots();
        assert_eq!(h_value(0.0, &r), 0.0);
        for i in 1..100 {
            let u = r.a * i as f64 / 100.0;
            assert!(h_value(u, &r) > 0.0);
        }
        // h(c) = ½(1/a − 1/A)c² + O(c³).
        let c = 1e-4;
        let quad = 0.5 * (1.0 / r.a - 1.0 / r.big_a) * c * c;
        assert!((h_value(c, &r) / quad - 1.0).abs() < 1e-3);
    }

    #[test]
    fn derivatives_match_differences() {
        let r = roots();
        for i in 0..=90 {
            let u = 0.9 * r.a * i as f64 / 90.0;
            let e = 1e-6;
            let fd = (h_value(u + e, &r) - h_value(u - e, &r)) / (2.0 * e);
            let an = h_prime(u, &r);
            assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3), "u={u}: {fd} vs {an}");
            let e2 = 1e-4;
            let fd2 = (h_value(u + e2, &r) - 2.0 * h_value(u, &r) + h_value(u - e2, &r)) / (e2 * e2);
            let an2 = h_second(u, &r);
            assert!((fd2 - an2).abs() <= 1e-4 * an2.abs(), "u={u}: {fd2} vs {an2}");
        }
    }

    #[test]
    fn functional_examples() {
        let r = roots();
        let d = DomainSpec::new(4.0, 32, 2).unwrap();
        let delta = 0.25;
        let zero = h_functional(&Field::zeros(d), &r, delta).unwrap();
        assert!(zero.values().iter().all(|v| v.abs() < 1e-15));
        let c = 0.1;
        let hc = h_functional(&Field::constant(d, c), &r, delta).unwrap();
        let expected = (2.0 * delta).powi(2) * h_value(c, &r);
        assert!(hc.values().iter().all(|&v| (v - expected).abs() < 1e-14));
        assert!(matches!(h_functional(&Field::constant(d, 0.3), &r, delta), Err(Error::Hypothesis(_))));

        let dc = d_functional(&Field::constant(d, c), &r, 1.0, 1.0, delta).unwrap();
        let expected_d = 0.5 * (r.big_a - r.a) * (2.0 * delta).powi(2) * c * c;
        assert!(dc.values().iter().all(|&v| (v - expected_d).abs() < 1e-15));
        let u = Field::from_fn(d, |x| 0.1 * (-(x[0] * x[0] + x[1] * x[1])).exp());
        let d1 = d_functional(&u, &r, 1.0, 1.0, delta).unwrap();
        let d2 = d_functional(&u.map(|v| 2.0 * v), &r, 1.0, 1.0, delta).unwrap();
        for (a, b) in d1.values().iter().zip(d2.values()) {
            assert!((b - 4.0 * a).abs() <= 1e-14 * b.abs().max(1e-12));
        }
    }

    #[test]
    fn quadratic_regime_ratio() {
        let r = roots();
        let d = DomainSpec::new(4.0, 32, 1).unwrap();
        let u = Field::from_fn(d, |x| 1e-5 * (1.0 + 0.5 * x[0].cos()));
        let h = h_functional(&u, &r, 0.3).unwrap();
        let l2 = crate::spatial::local_l2_ball(&u, 0.3).unwrap();
        let target = 0.5 * (r.big_a - r.a) / (r.a * r.big_a);
        for (a, b) in h.values().iter().zip(l2.values()) {
            assert!((a / b / target - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn delta_search() {
        let r = roots();
        let small = admissible_delta(&r, 1.0, 1.0, 0.01, 0.5).unwrap();
        assert_eq!(small, 0.25);
        let near = admissible_delta(&r, 1.0, 1.0, 0.2499, 0.5).unwrap();
        assert!(near < 0.25);
        assert!(admissible_delta(&r, 1.0, 1.0, 0.3, 0.5).is_err());
    }
}
