use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractional::mittag_leffler;
use crate::grid::Field;
use crate::model::ModelParameters;
use crate::spatial::Spectral;

/// Exact-in-time solution of the semi-discrete problem `D^α u = Δ_h u − γu`,
/// mode by mode: `û_κ(t) = E_α((λ_κ − γ) t^α) û_κ(0)` with `λ_κ` the symbol of
/// the standard Laplacian stencil.
pub fn linear_spectral_reference(u0: &Field, gamma: f64, alpha: f64, times: &[f64]) -> Result<Vec<Field>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::invalid("gamma", format!("must be finite and >= 0, got {gamma}")));
    }
    let d = *u0.domain();
    let n = d.points();
    let h = d.spacing();
    let axis_symbol: Vec<f64> =
        (0..n).map(|k| -(2.0 * (std::f64::consts::PI * k as f64 / n as f64).sin() / h).powi(2)).collect();
    let rates: Vec<f64> = (0..d.len())
        .map(|idx| {
            let [i, j] = d.unflatten(idx);
            let lam = if d.dim() == 1 { axis_symbol[i] } else { axis_symbol[i] + axis_symbol[j] };
            lam - gamma
        })
        .collect();

    let spectral = Spectral::new(n, d.dim());
    let mut coeffs: Vec<Complex64> = u0.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    spectral.forward(&mut coeffs);
    let norm = 1.0 / d.len() as f64;

    times
        .iter()
        .map(|&t| {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::invalid("times", format!("must be finite and >= 0, got {t}")));
            }
            let ta = t.powf(alpha);
            let mut cache: HashMap<u64, f64> = HashMap::new();
            let mut buf = Vec::with_capacity(coeffs.len());
            for (c, &r) in coeffs.iter().zip(&rates) {
                let factor = match cache.get(&r.to_bits()) {
                    Some(&f) => f,
                    None => {
                        let f = if t == 0.0 { 1.0 } else { mittag_leffler(alpha, 1.0, r * ta)? };
                        cache.insert(r.to_bits(), f);
                        f
                    }
                };
                buf.push(c * factor * norm);
            }
            spectral.inverse(&mut buf);
            Ok(Field::from_raw(d, buf.into_iter().map(|c| c.re).collect()))
        })
        .collect()
}

/// [`linear_spectral_reference`] for a parameter set, which must be linear
/// (`p = 2`, `μ = 0`).
pub fn linear_reference_for(u0: &Field, params: &ModelParameters, times: &[f64]) -> Result<Vec<Field>> {
    if params.p != 2.0 || params.mu != 0.0 {
        return Err(Error::invalid(
            "params",
            format!("the spectral reference needs p = 2 and mu = 0, got p = {}, mu = {}", params.p, params.mu),
        ));
    }
    linear_spectral_reference(u0, params.gamma, params.alpha, times)
}
