//! Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ z^j / Γ(αj + β)`
//! for real `z`.
//!
//! Routes:
//! * `z > 0`: the power series, whose terms are all positive.
//! * `α = 1`, `z < 0`: the confluent form `e^z · M(β−1, β, −z) / Γ(β)`.
//! * small `|z|^{1/α}`: Taylor series with compensated summation.
//! * otherwise: the Hankel contour representation collapsed onto the
//!   positive real axis, integrated adaptively, plus the residues of the
//!   poles that lie inside the contour when `α > 1`.
//!
//! The alternating Taylor series loses all precision for large negative
//! arguments once `α` is small (terms reach `|z|^{j}/Γ(αj+β) ~ e^{|z|^{1/α}}`),
//! so it is confined to `|z|^{1/α} ≤ 2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::integrate_pieces;

/// Beyond this `z^{1/α}` the function exceeds `e^{700}`.
const OVERFLOW_EXPONENT: f64 = 700.0;
/// Taylor series threshold on `|z|^{1/α}` for negative arguments.
const SERIES_RADIUS: f64 = 2.0;
/// Truncation point of the real-axis integral; `e^{-60}` is below `1e-26`.
const INTEGRAL_CUTOFF: f64 = 60.0;
const INTEGRAL_TOL: f64 = 1e-15;

pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 2], got {alpha}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
    }
    if !z.is_finite() {
        return Err(Error::invalid("z", format!("must be finite, got {z}")));
    }
    if z == 0.0 {
        return Ok(rgamma(beta));
    }
    if z > 0.0 {
        if z.powf(1.0 / alpha) > OVERFLOW_EXPONENT {
            return Err(Error::MittagLefflerOverflow { alpha, beta, z });
        }
        return Ok(series(alpha, beta, z));
    }
    if alpha == 1.0 {
        return Ok(exponential_family(beta, -z));
    }
    if (-z).powf(1.0 / alpha) <= SERIES_RADIUS {
        return Ok(series(alpha, beta, z));
    }
    Ok(contour(alpha, beta, z))
}

/// `1/Γ(x)`, zero at the poles.
fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / crate::gamma(x)
    }
}

fn term(alpha: f64, beta: f64, z: f64, j: usize) -> f64 {
    let arg = alpha * j as f64 + beta;
    if arg < 170.0 && (j as f64) * z.abs().ln() < 700.0 {
        z.powi(j as i32) / crate::gamma(arg)
    } else {
        let mag = (j as f64 * z.abs().ln() - crate::ln_gamma(arg)).exp();
        if z < 0.0 && j % 2 == 1 {
            -mag
        } else {
            mag
        }
    }
}

fn series(alpha: f64, beta: f64, z: f64) -> f64 {
    // Terms peak near j ≈ |z|^{1/α}/α; stop well past the peak once they are
    // negligible.
    let peak = (z.abs().powf(1.0 / alpha) / alpha).ceil() as usize;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut j = 0usize;
    loop {
        let t = term(alpha, beta, z, j);
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if j > peak && t.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        j += 1;
        if j > 100_000 {
            break;
        }
    }
    sum
}

/// `E_{1,β}(−x)` for `x > 0`.
fn exponential_family(beta: f64, x: f64) -> f64 {
    if beta == 1.0 {
        return (-x).exp();
    }
    if x > OVERFLOW_EXPONENT {
        // Algebraic tail: −Σ_{k≥1} (−x)^{−k} / Γ(β−k); the exponential part
        // is below f64 resolution.
        let mut sum = 0.0;
        let mut zk = 1.0;
        for k in 1..30 {
            zk /= -x;
            sum -= zk * rgamma(beta - k as f64);
        }
        return sum;
    }
    // Kummer: M(β−1, β, x) = Σ (β−1)/(β−1+k) x^k/k!.
    let a = beta - 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut pow = 1.0;
    let mut k = 1usize;
    loop {
        pow *= x / k as f64;
        let t = a / (a + k as f64) * pow;
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if k as f64 > x && t.abs() <= 1e-18 * sum.abs() {
            break;
        }
        k += 1;
    }
    (-x).exp() * sum * rgamma(beta)
}

/// Integral route for `z < 0`, `α ≠ 1`.
fn contour(alpha: f64, beta: f64, z: f64) -> f64 {
    if beta >= alpha + 0.75 {
        // E_{α,β}(z) = (E_{α,β−α}(z) − 1/Γ(β−α)) / z. The real-axis integrand
        // needs β < α + 1; the margin keeps its r^{α−β} singularity mild.
        return (contour(alpha, beta - alpha, z) - rgamma(beta - alpha)) / z;
    }
    let pi = std::f64::consts::PI;
    let (s_beta, s_ab) = ((pi * beta).sin(), (pi * (alpha - beta)).sin());
    let (s_a, c_a) = (pi * alpha).sin_cos();
    let kernel = move |r: f64| -> f64 {
        let ra = r.powf(alpha);
        let num = ra * s_beta + z * s_ab;
        // |r^α − z e^{iπα}|², factored so the near-pole minimum keeps its digits.
        let den = (ra - z * c_a).powi(2) + (z * s_a).powi(2);
        (-r).exp() * num / den
    };
    let rho = (-z).powf(1.0 / alpha);
    let g = alpha - beta + 1.0;
    // Past the cutoff e^{-r} makes the integrand negligible, including any
    // near-pole peak at r = ρ.
    let mut marks = vec![0.0, 1.0, 10.0, 30.0, INTEGRAL_CUTOFF];
    if rho < INTEGRAL_CUTOFF {
        marks.push(rho);
    }
    marks.sort_by(|a, b| a.total_cmp(b));
    marks.dedup();
    let integral = if g < 1.0 {
        // r^{α−β} dr = dv/g under r = v^{1/g}.
        let vmarks: Vec<f64> = marks.iter().map(|&r| r.powf(g)).collect();
        integrate_pieces(
            |v: f64| {
                if v <= 0.0 {
                    return 0.0;
                }
                let r = v.powf(1.0 / g);
                kernel(r) / g
            },
            &vmarks,
            INTEGRAL_TOL,
        )
    } else {
        integrate_pieces(|r: f64| r.powf(alpha - beta) * kernel(r), &marks, INTEGRAL_TOL)
    };
    let mut value = integral / pi;
    if alpha > 1.0 {
        // Poles s = ρ e^{±iπ/α} of the Laplace-domain integrand.
        let s = Complex64::from_polar(rho, pi / alpha);
        let res = s.exp() * s.powf(1.0 - beta);
        value += 2.0 / alpha * res.re;
    }
    value
}
