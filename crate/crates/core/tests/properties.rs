use proptest::prelude::*;

use fracplap::analysis::{allee_classify, d_functional, h_value, AlleeBands};
use fracplap::fractional::{
    alikhanov_check, discrete_caputo, duhamel_mode, mittag_leffler, HistoryBuffer, L1Weights,
};
use fracplap::integrator::{RunReport, RunStatus, SeriesPoint};
use fracplap::io::{parse_config, read_snapshot, simulate, write_snapshot, InitialCondition, RunManifest};
use fracplap::model::{equilibrium_roots, k_star, reaction};
use fracplap::spatial::{convolve_kernel, discretize_kernel, p_laplacian, KernelShape};
use fracplap::verify::{fitted_order, linear_oracle_error};
use fracplap::{gamma, AnalysisConstants, DomainSpec, Field, ModelParameters};

fn real_roots_params() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.1f64..10.0, 0.1f64..10.0, 0.0f64..0.999).prop_map(|(mu, k, frac)| (mu, k, frac * mu / (4.0 * k)))
}

fn field_strategy(dim: usize, n: usize) -> impl Strategy<Value = Field> {
    let d = DomainSpec::new(3.0, n, dim).unwrap();
    prop::collection::vec(-2.0f64..2.0, d.len()).prop_map(move |v| Field::from_values(d, v).unwrap())
}

fn shape_strategy() -> impl Strategy<Value = KernelShape> {
    prop_oneof![Just(KernelShape::Box), Just(KernelShape::Triangle), Just(KernelShape::Gaussian)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_solve_the_equilibrium_equation((mu, k, gamma) in real_roots_params()) {
        let r = equilibrium_roots(mu, k, gamma).unwrap();
        prop_assert!(r.real);
        for u in [r.a, r.big_a] {
            let residual = mu * u * u * (1.0 - k * u) - gamma * u;
            let scale = (mu * u * u).max(gamma * u).max(f64::MIN_POSITIVE);
            prop_assert!(residual.abs() <= 1e-12 * scale, "residual {residual} at {u}");
        }
        let mid = 0.5 / k;
        prop_assert!(r.a <= mid * (1.0 + 1e-12) && mid <= r.big_a * (1.0 + 1e-12));
    }

    #[test]
    fn reaction_sign_between_roots((mu, k, frac) in (0.1f64..10.0, 0.1f64..10.0, 0.05f64..0.95)) {
        let gamma = frac * mu / (4.0 * k);
        let r = equilibrium_roots(mu, k, gamma).unwrap();
        let p = ModelParameters { mu, k, gamma, ..Default::default() };
        for i in 1..1000 {
            let s = i as f64 / 1000.0;
            let below = s * r.a;
            prop_assert!(reaction(below, below, &p) < 0.0, "u = {below}");
            let between = r.a + s * (r.big_a - r.a);
            prop_assert!(reaction(between, between, &p) > 0.0, "u = {between}");
        }
    }

    #[test]
    fn k_star_monotone(mu in 0.0f64..10.0, dmu in 0.01f64..5.0, eta in 0.05f64..5.0, deta in 0.01f64..5.0) {
        let at = |mu: f64, eta: f64| k_star(2, mu, &AnalysisConstants::new(eta, 1.0)).unwrap();
        prop_assert!(at(mu + dmu, eta) > at(mu, eta));
        prop_assert!(at(mu, eta + deta) < at(mu, eta));
    }

    #[test]
    fn l1_exact_on_affine_data(
        a in -5.0f64..5.0, b in -5.0f64..5.0, alpha in 0.05f64..0.95, dt in 1e-3f64..0.5, n in 1usize..60,
    ) {
        let d = DomainSpec::new(1.0, 8, 1).unwrap();
        let u = |t: f64| a + b * t;
        let w = L1Weights::new(alpha, dt, n + 1).unwrap();
        let mut h = HistoryBuffer::new(&Field::constant(d, u(0.0)), dt).unwrap();
        for i in 1..n {
            h.push(&Field::constant(d, u(i as f64 * dt))).unwrap();
        }
        let got = discrete_caputo(&h, &Field::constant(d, u(n as f64 * dt)), &w).unwrap().values()[0];
        let t = n as f64 * dt;
        let exact = b * t.powf(1.0 - alpha) / gamma(2.0 - alpha);
        prop_assert!((got - exact).abs() <= 1e-13 * exact.abs().max(1.0), "{got} vs {exact}");
    }

    #[test]
    fn alikhanov_on_random_sequences(
        v in prop::collection::vec(-3.0f64..3.0, 2..60), alpha in 0.05f64..0.95, dt in 1e-3f64..1.0,
    ) {
        prop_assert!(alikhanov_check(&v, alpha, dt).unwrap().pass());
    }

    #[test]
    fn p_laplacian_conserves_mass(u in field_strategy(2, 16), p in 1.01f64..=2.0, eps in 1e-8f64..1e-2) {
        let lap = p_laplacian(&u, p, eps);
        let sum: f64 = lap.values().iter().sum();
        let scale: f64 = lap.values().iter().map(|v| v.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
        prop_assert!(sum.abs() <= 1e-12 * scale);
    }

    #[test]
    fn p_two_ignores_regularisation(u in field_strategy(1, 32), eps in 1e-10f64..1.0) {
        prop_assert_eq!(p_laplacian(&u, 2.0, eps), p_laplacian(&u, 2.0, 1e-6));
    }

    #[test]
    fn p_laplacian_preserves_evenness(half in prop::collection::vec(-1.0f64..1.0, 9), p in 1.1f64..2.0) {
        let d = DomainSpec::new(2.0, 16, 1).unwrap();
        let n = 16;
        let values = (0..n).map(|i| half[(i as isize - 8).unsigned_abs()]).collect();
        let u = Field::from_values(d, values).unwrap();
        let lap = p_laplacian(&u, p, 1e-6);
        for i in 1..8 {
            let (l, r) = (lap.values()[8 - i], lap.values()[8 + i]);
            prop_assert!((l - r).abs() <= 1e-12 * l.abs().max(1.0), "{l} vs {r}");
        }
    }

    #[test]
    fn kernel_admissibility(shape in shape_strategy(), delta0 in 0.3f64..1.5, dim in 1usize..=2) {
        let d = DomainSpec::new(8.0, 64, dim).unwrap();
        let probe = discretize_kernel(shape, delta0, 0.0, &d).unwrap();
        let eta = 0.5 * probe.core_min();
        let k = discretize_kernel(shape, delta0, eta, &d).unwrap();
        prop_assert!(k.values().values().iter().all(|&v| v >= 0.0));
        prop_assert!((k.integral() - 1.0).abs() <= 1e-12);
        for idx in 0..d.len() {
            let x = d.position(idx);
            if x[0].abs() <= delta0 && x[1].abs() <= delta0 {
                prop_assert!(k.values().values()[idx] > eta);
            }
        }
        prop_assert!(discretize_kernel(shape, delta0, probe.core_min(), &d).is_err());
    }

    #[test]
    fn d_functional_is_quadratic(u in field_strategy(1, 32), scale in -4.0f64..4.0) {
        let roots = equilibrium_roots(1.0, 1.0, 3.0 / 16.0).unwrap();
        let base = d_functional(&u, &roots, 1.0, 1.0, 0.5).unwrap();
        let scaled = d_functional(&u.map(|v| scale * v), &roots, 1.0, 1.0, 0.5).unwrap();
        for (a, b) in base.values().iter().zip(scaled.values()) {
            prop_assert!((b - scale * scale * a).abs() <= 1e-12 * (scale * scale * a).abs().max(1e-300));
        }
    }

    #[test]
    fn h_positive_below_a(s in 0.001f64..0.999) {
        let roots = equilibrium_roots(1.0, 1.0, 3.0 / 16.0).unwrap();
        prop_assert!(h_value(s * roots.a, &roots) > 0.0);
    }

    #[test]
    fn allee_verdict_survives_refinement(
        sups in prop::collection::vec(0.0f64..1.0, 2..30), extra in prop::collection::vec(0.0f64..1.0, 1..30),
    ) {
        let roots = equilibrium_roots(1.0, 1.0, 3.0 / 16.0).unwrap();
        let bands = AlleeBands::for_roots(&roots);
        let report = |s: &[f64]| {
            let d = DomainSpec::new(1.0, 8, 1).unwrap();
            RunReport {
                status: RunStatus::Completed,
                series: s
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| SeriesPoint { t: i as f64, sup_norm: v, l2_norm: 0.0, l1_norm: 0.0, min_value: 0.0 })
                    .collect(),
                final_field: Field::zeros(d),
                final_time: (s.len() - 1) as f64,
                steps: s.len(),
                snapshots: Vec::new(),
                warnings: Vec::new(),
                wall_time: Default::default(),
            }
        };
        // Extra samples are interleaved before the terminal record.
        let mut refined = sups[..sups.len() - 1].to_vec();
        refined.extend(&extra);
        refined.push(*sups.last().unwrap());
        prop_assert_eq!(allee_classify(&report(&sups), &roots, &bands), allee_classify(&report(&refined), &roots, &bands));
    }

    #[test]
    fn snapshot_round_trip(u in field_strategy(2, 8)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.fplp");
        write_snapshot(&path, &u).unwrap();
        let back = read_snapshot(&path).unwrap();
        prop_assert!(back.values().iter().zip(u.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert_eq!(back.domain(), u.domain());
    }
}

fn manifest_strategy() -> impl Strategy<Value = RunManifest> {
    let initial = prop_oneof![
        (-1.0f64..1.0).prop_map(|value| InitialCondition::Constant { value }),
        (-2.0f64..2.0, 0.1f64..3.0, 0.0f64..2.0)
            .prop_map(|(c, width, height)| InitialCondition::GaussianBump { center: [c, -c], width, height }),
        (0.0f64..2.0, prop::option::of(any::<u64>()))
            .prop_map(|(amplitude, seed)| InitialCondition::Random { amplitude, seed }),
    ];
    (0.01f64..0.99, 1.01f64..=2.0, 0.0f64..5.0, 0.0f64..5.0, 0.0f64..2.0, 1usize..=2, 1e-4f64..1e-2, initial, any::<u64>())
        .prop_map(|(alpha, p, mu, k, gamma, dim, dt, initial, seed)| {
            let text = format!(
                r#"{{"model": {{"alpha": {alpha}, "p": {p}, "mu": {mu}, "k": {k}, "gamma": {gamma}, "dim": {dim}}},
                    "domain": {{"half_width": 8, "points": 32}}, "solver": {{"dt": {dt}, "t_final": 1.0}}}}"#
            );
            let mut m = parse_config(&text).unwrap();
            m.initial = initial;
            m.seed = seed;
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn manifest_round_trip(m in manifest_strategy()) {
        let back = parse_config(&m.to_json()).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.hash(), m.hash());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn mittag_leffler_completely_monotone_surrogate(alpha in 0.05f64..0.999) {
        let mut prev = f64::INFINITY;
        for i in 0..=5000 {
            let x = 0.01 * i as f64;
            let v = mittag_leffler(alpha, 1.0, -x).unwrap();
            prop_assert!(v > 0.0 && v < prev || (i == 0 && v == 1.0), "alpha {alpha} x {x}: {v} after {prev}");
            prev = v;
        }
    }
}

#[test]
fn roots_monotone_in_gamma() {
    let (mu, k) = (1.3, 0.7);
    let gmax = mu / (4.0 * k);
    let mut prev = equilibrium_roots(mu, k, 0.0).unwrap();
    for i in 1..100 {
        let r = equilibrium_roots(mu, k, gmax * i as f64 / 100.0).unwrap();
        assert!(r.a >= prev.a && r.big_a <= prev.big_a);
        prev = r;
    }
}

/// `D^α y = λy + t` has the solution `y₀E_α(λt^α) + t^{α+1}E_{α,α+2}(λt^α)`.
#[test]
fn duhamel_converges_for_linear_forcing() {
    let (lambda, alpha, y0) = (-0.8, 0.6, 0.5);
    let exact = {
        let ta = 1.0f64.powf(alpha);
        y0 * mittag_leffler(alpha, 1.0, lambda * ta).unwrap() + mittag_leffler(alpha, alpha + 2.0, lambda * ta).unwrap()
    };
    let dts: [f64; 4] = [1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0, 1.0 / 400.0];
    let errs: Vec<f64> = dts
        .iter()
        .map(|&dt| {
            let n = (1.0 / dt).round() as usize;
            let forcing: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
            (duhamel_mode(lambda, y0, &forcing, alpha, dt).unwrap()[n] - exact).abs()
        })
        .collect();
    let order = fitted_order(&dts, &errs);
    assert!(order >= 0.9, "order {order}, errors {errs:?}");
}

#[test]
fn duhamel_matches_closed_form_for_constant_forcing() {
    let (lambda, c, y0, alpha, dt) = (-1.0, 1.0, 0.0, 0.5, 0.01);
    let y = duhamel_mode(lambda, y0, &vec![c; 201], alpha, dt).unwrap();
    for (i, v) in y.iter().enumerate().step_by(20) {
        let exact = fracplap::fractional::linear_fode_solution(lambda, c, y0, alpha, i as f64 * dt).unwrap();
        assert!((v - exact).abs() <= 1e-12, "t = {}: {v} vs {exact}", i as f64 * dt);
    }
}

#[test]
fn convolution_matches_direct_sum_on_random_fields() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for trial in 0..50 {
        let dim = 1 + trial % 2;
        let n = if dim == 1 { 64 } else { 16 };
        let d = DomainSpec::new(4.0, n, dim).unwrap();
        let shape = [KernelShape::Box, KernelShape::Triangle, KernelShape::Gaussian][trial % 3];
        let k = discretize_kernel(shape, 0.5, 0.0, &d).unwrap();
        let u = Field::from_values(d, (0..d.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let fast = convolve_kernel(&u, &k).unwrap();
        for i in 0..d.len() {
            let [i0, i1] = d.unflatten(i);
            let direct: f64 = (0..d.len())
                .map(|j| {
                    let [j0, j1] = d.unflatten(j);
                    k.at_offset([(i0 + n - j0) % n, (i1 + n - j1) % n]) * u.values()[j]
                })
                .sum::<f64>()
                * d.cell_volume();
            assert!((fast.values()[i] - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        }
    }
}

#[test]
fn linear_run_converges_to_spectral_reference() {
    let dts = [1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0];
    let errs: Vec<f64> = dts.iter().map(|&dt| linear_oracle_error(dt, true).unwrap()).collect();
    let order = fitted_order(&dts, &errs);
    assert!(order >= 2.0 - 0.5 - 0.2, "order {order}, errors {errs:?}");
}

#[test]
fn simulate_is_byte_deterministic() {
    let text = r#"{
        "model": {"alpha": 0.6, "p": 1.5, "mu": 1, "k": 1, "gamma": 0.1, "dim": 2},
        "domain": {"half_width": 6, "points": 16},
        "solver": {"dt": 0.02, "t_final": 1.0, "snapshot_times": [0.5]},
        "initial": {"type": "random", "amplitude": 0.8},
        "seed": 42
    }"#;
    let m = parse_config(text).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    simulate(&m, Some(a.path())).unwrap();
    simulate(&m, Some(b.path())).unwrap();
    for name in ["series.csv", "final.fplp", "snapshot_000.fplp"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs");
    }
}
