use crate::error::{Error, Result};
use crate::gamma;

/// Adams–Bashforth–Moulton predictor-corrector for the scalar problem
/// `D^α y = f(y)`, `y(0) = y0`. Returns the first grid time at which `y`
/// exceeds `threshold` (or stops being finite), or `None` if that does not
/// happen by `t_max`.
pub fn abm_blowup_time(
    alpha: f64,
    y0: f64,
    f: impl Fn(f64) -> f64,
    dt: f64,
    threshold: f64,
    t_max: f64,
) -> Result<Option<f64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if !(dt > 0.0 && t_max > dt) {
        return Err(Error::invalid("dt", "must be positive and below t_max"));
    }
    let n_max = (t_max / dt).ceil() as usize;
    let pred_scale = dt.powf(alpha) / gamma(alpha + 1.0);
    let corr_scale = dt.powf(alpha) / gamma(alpha + 2.0);
    // (k+1)^α − k^α and (k)^{α+1} for the predictor and corrector weights.
    let pw: Vec<f64> = (0..=n_max + 2).map(|k| (k as f64).powf(alpha)).collect();
    let pw1: Vec<f64> = (0..=n_max + 2).map(|k| (k as f64).powf(alpha + 1.0)).collect();
    let mut fy = vec![f(y0)];
    for n in 0..n_max {
        let mut pred = 0.0;
        for (j, fj) in fy.iter().enumerate() {
            pred += (pw[n + 1 - j] - pw[n - j]) * fj;
        }
        let yp = y0 + pred_scale * pred;
        let mut corr = (pw1[n] - (n as f64 - alpha) * pw[n + 1]) * fy[0];
        for (j, fj) in fy.iter().enumerate().skip(1) {
            let k = n - j;
            corr += (pw1[k + 2] + pw1[k] - 2.0 * pw1[k + 1]) * fj;
        }
        let y = y0 + corr_scale * (f(yp) + corr);
        let t = (n + 1) as f64 * dt;
        if !y.is_finite() || y > threshold {
            return Ok(Some(t));
        }
        fy.push(f(y));
    }
    Ok(None)
}

/// Explicit L1 solution of the scalar problem `D^α y = f(y)` on `n_steps`
/// uniform steps. Returns `y⁰ … y^{n_steps}`.
pub fn scalar_l1_solve(alpha: f64, dt: f64, n_steps: usize, y0: f64, f: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let w = crate::fractional::L1Weights::new(alpha, dt, n_steps + 1)?;
    let b = w.b();
    let s = w.scale();
    let mut y = Vec::with_capacity(n_steps + 1);
    let mut diffs: Vec<f64> = Vec::with_capacity(n_steps);
    y.push(y0);
    for n in 1..=n_steps {
        let mem: f64 = (1..n).map(|j| b[j] * diffs[n - 1 - j]).sum();
        let prev = y[n - 1];
        let next = prev + (f(prev) - s * mem) / (s * b[0]);
        diffs.push(next - prev);
        y.push(next);
    }
    Ok(y)
}

/// Least-squares slope of `log error` against `log dt`.
pub fn fitted_order(dts: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
