//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fracplap::analysis::{
    allee_classify, boundedness_check, decay_envelope_check, lyapunov_monitor, AlleeBands, AlleeVerdict, Verdict,
};
use fracplap::fractional::{discrete_caputo, mittag_leffler, HistoryBuffer, L1Weights};
use fracplap::integrator::{run, Coupling, RunReport, SolverConfig};
use fracplap::io::{series_csv, snapshot_bytes};
use fracplap::model::{equilibrium_roots, sigma};
use fracplap::spatial::{convolve_kernel, discretize_kernel, p_laplacian, KernelGrid, KernelShape};
use fracplap::verify::{
    blowup_comparison, bounded_2d_run, fitted_order, global_mass_run, homogeneous_run, inequality_sweep,
    linear_oracle_error,
};
use fracplap::{gamma, DomainSpec, Field, ModelParameters, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn caputo_order() -> Result<Outcome> {
    let d = DomainSpec::new(1.0, 8, 1)?;
    let l1_at_one = |u: &dyn Fn(f64) -> f64, alpha: f64, n: usize| -> Result<f64> {
        let dt = 1.0 / n as f64;
        let w = L1Weights::new(alpha, dt, n + 1)?;
        let mut h = HistoryBuffer::new(&Field::constant(d, u(0.0)), dt)?;
        for i in 1..n {
            h.push(&Field::constant(d, u(i as f64 * dt)))?;
        }
        Ok(discrete_caputo(&h, &Field::constant(d, u(1.0)), &w)?.values()[0])
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.3, 0.5, 0.8] {
        let exact = 2.0 / gamma(3.0 - alpha);
        let ns = [40, 80, 160, 320];
        let mut errs = Vec::new();
        for n in ns {
            errs.push((l1_at_one(&|t| t * t, alpha, n)? - exact).abs());
        }
        let dts: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
        let order = fitted_order(&dts, &errs);
        let lin = (l1_at_one(&|t| t, alpha, 40)? - 1.0 / gamma(2.0 - alpha)).abs();
        pass &= (order - (2.0 - alpha)).abs() <= 0.15 && lin <= 1e-12;
        parts.push(format!("a={alpha}: order {order:.3}, linear error {lin:.1e}"));
    }
    outcome(pass, parts.join("; "))
}

fn mittag_leffler_values() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in 0..=2500 {
        let z = -20.0 + 0.01 * i as f64;
        worst = worst.max((mittag_leffler(1.0, 1.0, z)? - z.exp()).abs());
    }
    // e·erfc(−1), from a 30-digit evaluation.
    let half = mittag_leffler(0.5, 1.0, 1.0)?;
    let half_err = (half - 5.008_980_080_762_283).abs();
    let zeros: Vec<f64> = [0.2, 0.5, 0.9].iter().map(|&a| mittag_leffler(a, 1.0, 0.0)).collect::<Result<_>>()?;
    let pass = worst <= 1e-12 && half_err <= 1e-9 && zeros.iter().all(|&v| v == 1.0);
    outcome(pass, format!("exp error {worst:.1e}, E_0.5(1) error {half_err:.1e}, E(0) = {zeros:?}"))
}

fn linear_oracle() -> Result<Outcome> {
    let started = Instant::now();
    let e1 = linear_oracle_error(1e-3, true)?;
    let elapsed = started.elapsed().as_secs_f64();
    let e2 = linear_oracle_error(5e-4, true)?;
    let order = (e1 / e2).log2();
    outcome(
        e1 <= 1e-3 && order >= 1.3 && elapsed < 60.0,
        format!("error {e1:.3e} at dt=1e-3, {e2:.3e} at dt=5e-4, order {order:.3}, runtime {elapsed:.1}s"),
    )
}

struct AlleeRuns {
    runs: Vec<(f64, f64, RunReport)>,
}

fn snapshot_times() -> Vec<f64> {
    (0..=20).map(|i| 10.0 * i as f64).collect()
}

fn allee_runs() -> Result<AlleeRuns> {
    let mut runs = Vec::new();
    for alpha in [0.5, 0.8] {
        for u0 in [0.2, 0.5] {
            runs.push((alpha, u0, homogeneous_run(alpha, u0, 200.0, 0.01, &snapshot_times())?));
        }
    }
    Ok(AlleeRuns { runs })
}

fn allee_dichotomy(runs: &AlleeRuns) -> Result<Outcome> {
    let roots = equilibrium_roots(1.0, 1.0, 3.0 / 16.0)?;
    let bands = AlleeBands::for_roots(&roots);
    let mut pass = (roots.a - 0.25).abs() < 1e-15 && (roots.big_a - 0.75).abs() < 1e-15;
    let mut parts = Vec::new();
    for (alpha, u0, run) in &runs.runs {
        let verdict = allee_classify(run, &roots, &bands);
        let terminal = run.terminal_sup_norm();
        let ok = if *u0 < roots.a {
            verdict == AlleeVerdict::Extinction
        } else {
            verdict == AlleeVerdict::Persistence && (terminal - 0.75).abs() <= 0.05 * 0.75
        };
        pass &= ok;
        parts.push(format!("a={alpha} u0={u0}: {verdict:?} ({terminal:.4})"));
    }
    outcome(pass, parts.join("; "))
}

fn decay_envelope() -> Result<Outcome> {
    let d = DomainSpec::new(8.0, 64, 1)?;
    let kernel = discretize_kernel(KernelShape::Box, 0.5, 0.0, &d)?;
    let u0 = Field::from_fn(d, |x| 0.5 * (-x[0] * x[0] / 2.0).exp());
    let mut pass = true;
    let mut parts = Vec::new();
    for alpha in [0.5, 0.8] {
        let params = ModelParameters { alpha, mu: 0.01, k: 1.0, gamma: 1.0, ..Default::default() };
        let report = run(&u0, &params, &Coupling::Kernel(kernel.clone()), &SolverConfig::new(0.01, 10.0))?;
        let s = sigma(params.gamma, params.mu, u0.sup_norm());
        let rep = decay_envelope_check(&report, s, alpha)?;
        pass &= rep.verdict == Verdict::Pass;
        parts.push(format!("a={alpha}: sigma {s}, worst ratio {:.4}", rep.worst_ratio));
    }
    outcome(pass, parts.join("; "))
}

fn boundedness_and_blowup() -> Result<Outcome> {
    let b = bounded_2d_run(64, 10.0, 0.01)?;
    let rep = boundedness_check(&b.report, &b.bound);
    let bounded = b.k > b.k_star && rep.verdict == Verdict::Pass && !b.report.blew_up();
    let d = DomainSpec::new(8.0, 64, 2)?;
    let c = blowup_comparison(0.5, d, 1e-4, 1e-5)?;
    let gap = c.relative_gap();
    outcome(
        bounded && gap <= 0.1,
        format!(
            "k={:.3} > k*={:.3}, max sup {:.4} vs K {:?}; blow-up at {:?} vs oracle {:?} (gap {:.3})",
            b.k,
            b.k_star,
            b.report.max_sup_norm(),
            b.bound.value(),
            c.run_time,
            c.oracle_time,
            gap
        ),
    )
}

fn global_mass_mode() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (dim, m) in [(2, 2.5), (1, 1.5), (1, 3.0)] {
        let r = global_mass_run(dim, m, 1.8, 64, 50.0, 0.05, 7)?;
        let sup = r.max_sup_norm();
        pass &= !r.blew_up() && sup.is_finite() && (r.final_time - 50.0).abs() < 1e-9;
        parts.push(format!("dim={dim} m={m}: {:?}, max sup {sup:.4}", r.status));
    }
    outcome(pass, parts.join("; "))
}

fn discrete_inequalities() -> Result<Outcome> {
    let checks = inequality_sweep(1000, &[0.3, 0.5, 0.8], 8);
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    outcome(failed.is_empty(), format!("{} sweeps, failing: {failed:?}", checks.len()))
}

fn direct_convolution(u: &Field, k: &KernelGrid) -> Vec<f64> {
    let d = u.domain();
    let n = d.points();
    (0..d.len())
        .map(|i| {
            let [i0, i1] = d.unflatten(i);
            let s: f64 = (0..d.len())
                .map(|j| {
                    let [j0, j1] = d.unflatten(j);
                    k.at_offset([(i0 + n - j0) % n, (i1 + n - j1) % n]) * u.values()[j]
                })
                .sum();
            s * d.cell_volume()
        })
        .collect()
}

fn operator_identities() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut sum_worst: f64 = 0.0;
    let mut p2_worst: f64 = 0.0;
    for i in 0..100 {
        let d = DomainSpec::new(4.0, 32, 1 + i % 2)?;
        let u = Field::from_values(d, (0..d.len()).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
        let lap = p_laplacian(&u, rng.gen_range(1.05..2.0), 1e-6);
        let total: f64 = lap.values().iter().sum();
        let scale: f64 = lap.values().iter().map(|v| v.abs()).sum();
        sum_worst = sum_worst.max(total.abs() / scale);

        let lap2 = p_laplacian(&u, 2.0, 1e-6);
        let n = d.points();
        let h2 = d.spacing().powi(2);
        let v = u.values();
        for idx in 0..d.len() {
            let [a, b] = d.unflatten(idx);
            let mut s = v[d.flatten((a + 1) % n, b)] + v[d.flatten((a + n - 1) % n, b)] - 2.0 * v[idx];
            if d.dim() == 2 {
                s += v[d.flatten(a, (b + 1) % n)] + v[d.flatten(a, (b + n - 1) % n)] - 2.0 * v[idx];
            }
            p2_worst = p2_worst.max((lap2.values()[idx] - s / h2).abs() / (s.abs() / h2).max(1.0));
        }
    }
    let mut conv_worst: f64 = 0.0;
    for (dim, shape) in [(1, KernelShape::Gaussian), (2, KernelShape::Box), (2, KernelShape::Triangle)] {
        let d = DomainSpec::new(8.0, 64, dim)?;
        let k = discretize_kernel(shape, 0.5, 0.0, &d)?;
        let u = Field::from_values(d, (0..d.len()).map(|_| rng.gen::<f64>()).collect())?;
        let fast = convolve_kernel(&u, &k)?;
        let slow = direct_convolution(&u, &k);
        for (a, b) in fast.values().iter().zip(&slow) {
            conv_worst = conv_worst.max((a - b).abs());
        }
    }
    outcome(
        sum_worst <= 1e-12 && p2_worst <= 1e-12 && conv_worst <= 1e-10,
        format!("grid sum {sum_worst:.1e}, p=2 reduction {p2_worst:.1e}, convolution {conv_worst:.1e}"),
    )
}

fn lyapunov(runs: &AlleeRuns) -> Result<Outcome> {
    let roots = equilibrium_roots(1.0, 1.0, 3.0 / 16.0)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for (alpha, _, run) in runs.runs.iter().filter(|(_, u0, _)| *u0 < roots.a) {
        let rep = lyapunov_monitor(&run.snapshots, &roots, 1.0, 1.0, 0.25)?;
        pass &= rep.verdict == Verdict::Pass && rep.series.times.len() == snapshot_times().len();
        let h = &rep.series.h_max;
        parts.push(format!(
            "a={alpha}: {:?} over {} snapshots, max H {:.3e} -> {:.3e}",
            rep.verdict,
            h.len(),
            h.first().copied().unwrap_or(f64::NAN),
            h.last().copied().unwrap_or(f64::NAN)
        ));
    }
    outcome(pass, parts.join("; "))
}

fn determinism(runs: &AlleeRuns) -> Result<Outcome> {
    let mut identical = true;
    for (alpha, u0, first) in &runs.runs {
        let again = homogeneous_run(*alpha, *u0, 200.0, 0.01, &snapshot_times())?;
        identical &= series_csv(&first.series).as_bytes() == series_csv(&again.series).as_bytes();
        identical &= snapshot_bytes(&first.final_field) == snapshot_bytes(&again.final_field);
        identical &= first
            .snapshots
            .iter()
            .zip(&again.snapshots)
            .all(|(a, b)| snapshot_bytes(&a.field) == snapshot_bytes(&b.field));
    }
    outcome(identical, format!("{} runs repeated, outputs byte-identical: {identical}", runs.runs.len()))
}

fn report(label: &str, result: Result<Outcome>, failures: &mut usize) {
    let (pass, detail) = match result {
        Ok(o) => (o.pass, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if !pass {
        *failures += 1;
    }
    println!("{} {label}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let mut failures = 0;
    report("1 caputo order", caputo_order(), &mut failures);
    report("2 mittag-leffler", mittag_leffler_values(), &mut failures);
    report("3 linear oracle", linear_oracle(), &mut failures);
    let runs = allee_runs();
    match &runs {
        Ok(runs) => report("4 allee dichotomy", allee_dichotomy(runs), &mut failures),
        Err(e) => report("4 allee dichotomy", Err(fracplap::Error::Hypothesis(e.to_string())), &mut failures),
    }
    report("5 decay envelope", decay_envelope(), &mut failures);
    report("6 boundedness and blow-up", boundedness_and_blowup(), &mut failures);
    report("7 global-mass mode", global_mass_mode(), &mut failures);
    report("8 discrete inequalities", discrete_inequalities(), &mut failures);
    report("9 operator identities", operator_identities(), &mut failures);
    match &runs {
        Ok(runs) => {
            report("10 lyapunov monotonicity", lyapunov(runs), &mut failures);
            report("11 determinism", determinism(runs), &mut failures);
        }
        Err(e) => {
            let msg = e.to_string();
            report("10 lyapunov monotonicity", Err(fracplap::Error::Hypothesis(msg.clone())), &mut failures);
            report("11 determinism", Err(fracplap::Error::Hypothesis(msg)), &mut failures);
        }
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
