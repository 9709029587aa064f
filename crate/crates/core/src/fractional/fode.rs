use crate::error::{Error, Result};

use super::mittag_leffler;

/// Exact solution of `D^α y = λy + c`, `y(0) = y0`:
/// `y(t) = y0 E_{α,1}(λt^α) + c t^α E_{α,α+1}(λt^α)`.
pub fn linear_fode_solution(lambda: f64, c: f64, y0: f64, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", format!("must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(y0);
    }
    let ta = t.powf(alpha);
    let z = lambda * ta;
    let mut y = y0 * mittag_leffler(alpha, 1.0, z)?;
    if c != 0.0 {
        y += c * ta * mittag_leffler(alpha, alpha + 1.0, z)?;
    }
    Ok(y)
}

/// Mild solution of `D^α y = λy + f(t)` at `t_n = n·dt`, with `f` held at
/// `forcing[j]` on `[t_j, t_{j+1})`.
///
/// The kernel `(t−s)^{α−1} E_{α,α}(λ(t−s)^α)` integrates exactly to
/// `G(τ) = τ^α E_{α,α+1}(λτ^α)`, so each subinterval contributes
/// `f_j [G(t_n − t_j) − G(t_n − t_{j+1})]`. The output has the same length as
/// `forcing`; the last forcing sample is not used.
pub fn duhamel_mode(lambda: f64, y0: f64, forcing: &[f64], alpha: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    let n = forcing.len();
    let mut g = Vec::with_capacity(n);
    let mut free = Vec::with_capacity(n);
    for m in 0..n {
        let tau = m as f64 * dt;
        if m == 0 {
            g.push(0.0);
            free.push(1.0);
            continue;
        }
        let ta = tau.powf(alpha);
        g.push(ta * mittag_leffler(alpha, alpha + 1.0, lambda * ta)?);
        free.push(mittag_leffler(alpha, 1.0, lambda * ta)?);
    }
    let out = (0..n)
        .map(|i| {
            let forced: f64 = (0..i).map(|j| forcing[j] * (g[i - j] - g[i - j - 1])).sum();
            free[i] * y0 + forced
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        assert_eq!(linear_fode_solution(0.0, 0.0, 3.0, 0.5, 2.0).unwrap(), 3.0);
        let v = linear_fode_solution(-1.0, 0.0, 2.0, 1.0, 1.5).unwrap();
        assert!((v - 2.0 * (-1.5f64).exp()).abs() < 1e-14);
        // The approach to the steady state 1 is algebraic: y = 1 − E_{1/2}(−√t).
        let at_100 = linear_fode_solution(-1.0, 1.0, 0.0, 0.5, 100.0).unwrap();
        let e = mittag_leffler(0.5, 1.0, -10.0).unwrap();
        assert!((at_100 - (1.0 - e)).abs() < 1e-13);
        let late = linear_fode_solution(-1.0, 1.0, 0.0, 0.5, 1e4).unwrap();
        assert!((late - 1.0).abs() < 0.02, "{late}");
        assert!(linear_fode_solution(-1.0, 0.0, 1.0, 0.5, -1.0).is_err());
    }

    #[test]
    fn homogeneous_duhamel_matches_closed_form() {
        let dt = 0.05;
        let y = duhamel_mode(-2.0, 1.5, &[0.0; 41], 0.6, dt).unwrap();
        for (n, &v) in y.iter().enumerate() {
            let e = linear_fode_solution(-2.0, 0.0, 1.5, 0.6, n as f64 * dt).unwrap();
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn plain_integration() {
        let y = duhamel_mode(0.0, 0.0, &[1.0; 11], 1.0, 0.1).unwrap();
        for (n, &v) in y.iter().enumerate() {
            assert!((v - n as f64 * 0.1).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_forcing_is_exact() {
        let dt = 0.02;
        let y = duhamel_mode(-1.0, 0.0, &[1.0; 51], 0.5, dt).unwrap();
        for (n, &v) in y.iter().enumerate() {
            let e = linear_fode_solution(-1.0, 1.0, 0.0, 0.5, n as f64 * dt).unwrap();
            assert!((v - e).abs() < 1e-12, "n={n}: {v} vs {e}");
        }
    }

    #[test]
    fn rejects_bad_step() {
        assert!(duhamel_mode(-1.0, 0.0, &[1.0; 3], 0.5, 0.0).is_err());
    }
}
