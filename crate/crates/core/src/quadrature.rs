//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate, Kronrod–Gauss difference, and the Kronrod estimate of
/// `∫|f|` used as the roundoff scale.
fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let dx = h * XGK[i];
        let (fl, fr) = (f(c - dx), f(c + dx));
        kronrod += WGK[i] * (fl + fr);
        abs += WGK[i] * (fl.abs() + fr.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (fl + fr);
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs(), abs * h.abs())
}

/// Maximum number of panels per interval.
const PANEL_LIMIT: usize = 2000;

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then(other.lo.total_cmp(&self.lo))
    }
}

fn panel(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Panel {
    let (value, err, abs) = kronrod15(f, lo, hi);
    // A NaN estimate is treated as unresolvable so it gets split first.
    let err = if err.is_nan() { f64::INFINITY } else { err };
    Panel { lo, hi, value, err, abs }
}

/// ∫_a^b f with absolute tolerance `tol`. The panel with the largest
/// Kronrod–Gauss difference is bisected until the summed difference is below
/// `tol` or the roundoff level of `∫|f|`, or the panel limit is reached.
pub(crate) fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mut heap = BinaryHeap::new();
    heap.push(panel(&f, a, b));
    loop {
        let err: f64 = heap.iter().map(|p| p.err).sum();
        let abs: f64 = heap.iter().map(|p| p.abs).sum();
        if err <= tol.max(1e3 * f64::EPSILON * abs) || heap.len() >= PANEL_LIMIT {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // Cannot bisect further; keep the estimate and stop.
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        heap.push(panel(&f, worst.lo, mid));
        heap.push(panel(&f, mid, worst.hi));
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    let mut total = 0.0;
    let mut comp = 0.0;
    for p in panels {
        let y = p.value - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    total
}

/// Sum of [`integrate`] over consecutive breakpoints.
pub(crate) fn integrate_pieces(f: impl Fn(f64) -> f64, points: &[f64], tol: f64) -> f64 {
    let pieces = points.len().saturating_sub(1).max(1) as f64;
    points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| integrate(&f, w[0], w[1], tol / pieces))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14);
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn resolves_sharp_peak() {
        let eps: f64 = 1e-4;
        let v = integrate(|x| eps / (x * x + eps * eps), -1.0, 1.0, 1e-12);
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((v - exact).abs() < 1e-10, "{v} vs {exact}");
    }
}
