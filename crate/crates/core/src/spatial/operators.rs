use num_complex::Complex64;

use super::kernel::cell_overlap;
use super::Spectral;
use crate::error::{Error, Result};
use crate::grid::{DomainSpec, Field};

/// Below this the secant of `s ↦ s^m` (m < 1) is evaluated at the floor.
const POWER_FLOOR: f64 = 1e-6;

/// Index of the periodic neighbour of `idx` one cell along `axis`.
fn step(d: &DomainSpec, idx: usize, axis: usize, forward: bool) -> usize {
    let n = d.points();
    let mut ij = d.unflatten(idx);
    ij[axis] = if forward { (ij[axis] + 1) % n } else { (ij[axis] + n - 1) % n };
    d.flatten(ij[0], ij[1])
}

/// Forward differences `(u_{i+e_a} − u_i)/h`; entry `idx` of axis `a`
/// belongs to the face between `idx` and its `+e_a` neighbour.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceGradients {
    domain: DomainSpec,
    axes: Vec<Vec<f64>>,
}

impl FaceGradients {
    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn axis(&self, a: usize) -> &[f64] {
        &self.axes[a]
    }
}

pub fn gradient_faces(u: &Field) -> FaceGradients {
    let d = *u.domain();
    FaceGradients { domain: d, axes: forward_differences(&d, u.values()) }
}

fn forward_differences(d: &DomainSpec, v: &[f64]) -> Vec<Vec<f64>> {
    let h = d.spacing();
    (0..d.dim())
        .map(|a| (0..d.len()).map(|i| (v[step(d, i, a, true)] - v[i]) / h).collect())
        .collect()
}

/// Regularised diffusivity `(|∇w|² + ε²)^{(p−2)/2}` on every face. In 2D the
/// transverse component is the mean of the centred differences in the two
/// cells sharing the face.
pub(crate) fn face_coefficients(d: &DomainSpec, w: &[f64], p: f64, eps: f64) -> Vec<Vec<f64>> {
    if p == 2.0 {
        return vec![vec![1.0; d.len()]; d.dim()];
    }
    let h = d.spacing();
    let grads = forward_differences(d, w);
    let e = 0.5 * (p - 2.0);
    (0..d.dim())
        .map(|a| {
            (0..d.len())
                .map(|i| {
                    let g = grads[a][i];
                    let mut t2 = 0.0;
                    if d.dim() == 2 {
                        let b = 1 - a;
                        let j = step(d, i, a, true);
                        let t = (w[step(d, i, b, true)] - w[step(d, i, b, false)] + w[step(d, j, b, true)]
                            - w[step(d, j, b, false)])
                            / (4.0 * h);
                        t2 = t * t;
                    }
                    (g * g + t2 + eps * eps).powf(e)
                })
                .collect()
        })
        .collect()
}

/// Face secants of `s ↦ s₊^m`: `(P(w_{i+e}) − P(w_i)) / (w_{i+e} − w_i)`.
/// With these, `div(κ S ∇w) = div(κ ∇P(w))` exactly.
pub(crate) fn power_secants(d: &DomainSpec, w: &[f64], m: f64) -> Vec<Vec<f64>> {
    if m == 1.0 {
        return vec![vec![1.0; d.len()]; d.dim()];
    }
    let pw = |s: f64| s.max(0.0).powf(m);
    (0..d.dim())
        .map(|a| {
            (0..d.len())
                .map(|i| {
                    let (x, y) = (w[i], w[step(d, i, a, true)]);
                    if x != y {
                        (pw(y) - pw(x)) / (y - x)
                    } else if x <= 0.0 && m >= 1.0 {
                        0.0
                    } else {
                        m * x.max(POWER_FLOOR).powf(m - 1.0)
                    }
                })
                .collect()
        })
        .collect()
}

/// `Σ_a (F_a[i] − F_a[i − e_a]) / h` with fluxes `F_a = κ_a (v_{i+e_a} − v_i)/h`.
pub(crate) fn divergence(d: &DomainSpec, kappa: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let h = d.spacing();
    let fluxes: Vec<Vec<f64>> = (0..d.dim())
        .map(|a| (0..d.len()).map(|i| kappa[a][i] * (v[step(d, i, a, true)] - v[i]) / h).collect())
        .collect();
    (0..d.len())
        .map(|i| (0..d.dim()).map(|a| fluxes[a][i] - fluxes[a][step(d, i, a, false)]).sum::<f64>() / h)
        .collect()
}

/// Regularised p-Laplacian `div((|∇u|² + ε²)^{(p−2)/2} ∇u)` in flux form.
pub fn p_laplacian(u: &Field, p: f64, eps_reg: f64) -> Field {
    assert!(p > 1.0 && p <= 2.0, "p must lie in (1, 2], got {p}");
    assert!(eps_reg > 0.0, "eps_reg must be positive");
    let d = *u.domain();
    let kappa = face_coefficients(&d, u.values(), p, eps_reg);
    Field::from_raw(d, divergence(&d, &kappa, u.values()))
}

/// `Δ_p (u₊^m)`; the clamp applies only inside the power, and `m = 1` is the
/// plain operator on `u`.
pub fn p_laplacian_power(u: &Field, p: f64, m: f64, eps_reg: f64) -> Field {
    if m == 1.0 {
        return p_laplacian(u, p, eps_reg);
    }
    p_laplacian(&u.map(|v| v.max(0.0).powf(m)), p, eps_reg)
}

/// `Σ u h^dim`, summed in index order.
pub fn global_mass(u: &Field) -> f64 {
    u.values().iter().fold(0.0, |acc, &v| acc + v) * u.domain().cell_volume()
}

/// Integrals over the periodic cube `B(x, δ) = x + [−δ, δ]^dim`, with
/// partially covered cells weighted by their covered fraction.
#[derive(Debug, Clone)]
pub struct BallIntegrator {
    domain: DomainSpec,
    delta: f64,
    spectral: Spectral,
    transfer: Vec<Complex64>,
}

impl BallIntegrator {
    pub fn new(domain: &DomainSpec, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= domain.half_width() / 2.0) {
            return Err(Error::invalid(
                "delta",
                format!("ball radius must lie in (0, L/2] = (0, {}], got {delta}", domain.half_width() / 2.0),
            ));
        }
        let spectral = Spectral::new(domain.points(), domain.dim());
        let mut ball = BallIntegrator { domain: *domain, delta, spectral, transfer: Vec::new() };
        let stencil: Vec<f64> = (0..domain.len()).map(|i| ball.weight(domain.unflatten(i))).collect();
        ball.transfer = ball.spectral.transfer(&stencil, domain.cell_volume());
        Ok(ball)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Covered fraction of the cell at displacement index `d`.
    pub fn weight(&self, d: [usize; 2]) -> f64 {
        let h = self.domain.spacing();
        let w0 = cell_overlap(self.domain.wrapped_offset(d[0]), h, self.delta);
        if self.domain.dim() == 1 {
            w0
        } else {
            w0 * cell_overlap(self.domain.wrapped_offset(d[1]), h, self.delta)
        }
    }

    /// `∫_{B(x,δ)} f` at every grid point for samples `f`.
    pub fn integrate_values(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.domain.len(), "sample count does not match grid");
        self.spectral.convolve(f, &self.transfer)
    }

    pub fn integrate(&self, f: &Field) -> Result<Field> {
        if f.domain() != &self.domain {
            return Err(Error::GridMismatch("field does not match ball integrator grid".into()));
        }
        Ok(Field::from_raw(self.domain, self.integrate_values(f.values())))
    }

    /// `∫_{B(x,δ)} u²`.
    pub fn integrate_squared(&self, u: &Field) -> Result<Field> {
        self.integrate(&u.map(|v| v * v))
    }
}

/// `∫_{B(x,δ)} u² dy` at every grid point.
pub fn local_l2_ball(u: &Field, delta: f64) -> Result<Field> {
    BallIntegrator::new(u.domain(), delta)?.integrate_squared(u)
}
