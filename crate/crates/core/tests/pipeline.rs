use proptest::prelude::*;

use biproximal::estimators::{bi_tsls_direction, estimate, iv_comparator, ols_comparator};
use biproximal::experiments::{run_study, StudyPlan, Sweep};
use biproximal::inference::{bootstrap_pair, bootstrap_sensitivity};
use biproximal::model::{reduced_form_from_structural, sensitivity_adjust};
use biproximal::simulation::{draw_exogenous, generate, generate_violation, iterate_equilibrium};
use biproximal::{
    BasisSpec, BootstrapConfig, Direction, Method, NoiseScenario, ScenarioConfig,
    StructuralParams,
};

#[test]
fn bi_tsls_close_to_truth_where_comparators_are_not() {
    let sample = generate(&ScenarioConfig::paper_defaults(20_000, 99)).unwrap();
    let b = BasisSpec::ProductInteraction;
    let xy = bi_tsls_direction(&sample.data, &b, Direction::XToY).unwrap().estimate;
    let yx = bi_tsls_direction(&sample.data, &b, Direction::YToX).unwrap().estimate;
    assert!((xy - 0.5).abs() < 0.1, "{xy}");
    assert!((yx + 0.5).abs() < 0.05, "{yx}");
    let (ols_xy, _) = ols_comparator(&sample.data).unwrap();
    let (iv_xy, iv_yx) = iv_comparator(&sample.data).unwrap();
    assert!((ols_xy.estimate - 0.5).abs() > 0.1, "{}", ols_xy.estimate);
    assert!((iv_xy.estimate - 0.5).abs() > 0.1 || (iv_yx.estimate + 0.5).abs() > 0.1);
}

#[test]
fn iv_is_unbiased_without_confounding() {
    let mut cfg = ScenarioConfig::paper_defaults(20_000, 5);
    cfg.structural = cfg.structural.with_confounding(0.0, 0.0);
    let sample = generate(&cfg).unwrap();
    let (xy, yx) = iv_comparator(&sample.data).unwrap();
    assert!((xy.estimate - 0.5).abs() < 0.03, "{}", xy.estimate);
    assert!((yx.estimate + 0.5).abs() < 0.03, "{}", yx.estimate);
}

#[test]
fn sensitivity_adjustment_recovers_truth_on_violation_data() {
    let mut cfg = ScenarioConfig::paper_defaults(20_000, 31);
    cfg.structural = cfg.structural.with_sensitivity(0.4, -0.3);
    let sample = generate_violation(&cfg).unwrap();
    let b = BasisSpec::ProductInteraction;
    let s_xy = bi_tsls_direction(&sample.data, &b, Direction::XToY).unwrap().estimate;
    let s_yx = bi_tsls_direction(&sample.data, &b, Direction::YToX).unwrap().estimate;
    // unadjusted ratios converge to the violated-model ratios
    let rf = reduced_form_from_structural(&cfg.structural).unwrap();
    assert!((s_xy - rf.mu_z / rf.theta_z).abs() < 0.1);
    let (bxy, byx) = sensitivity_adjust(s_xy, s_yx, 0.4, -0.3).unwrap();
    assert!((bxy - 0.5).abs() < 0.1, "{bxy}");
    assert!((byx + 0.5).abs() < 0.05, "{byx}");
}

#[test]
fn zero_sensitivity_bootstrap_matches_plain_bootstrap() {
    let sample = generate(&ScenarioConfig::paper_defaults(800, 4)).unwrap();
    let b = BasisSpec::ProductInteraction;
    let cfg = BootstrapConfig {
        replicates: 30,
        seed: 17,
        retain_replicates: true,
        ..Default::default()
    };
    let plain = bootstrap_pair(
        &sample.data,
        |d| {
            Ok((
                bi_tsls_direction(d, &b, Direction::XToY)?.estimate,
                bi_tsls_direction(d, &b, Direction::YToX)?.estimate,
            ))
        },
        &cfg,
    )
    .unwrap();
    let adjusted = bootstrap_sensitivity(&sample.data, &b, &b, 0.0, 0.0, &cfg).unwrap();
    assert_eq!(plain, adjusted);
}

#[test]
fn estimate_dispatch_agrees_with_direct_calls() {
    let sample = generate(&ScenarioConfig::paper_defaults(600, 8)).unwrap();
    let b = BasisSpec::ProductInteraction;
    for d in Direction::BOTH {
        assert_eq!(
            estimate(&sample.data, Method::BiTsls, d, &b).unwrap(),
            bi_tsls_direction(&sample.data, &b, d).unwrap()
        );
    }
    let (ols_xy, ols_yx) = ols_comparator(&sample.data).unwrap();
    assert_eq!(estimate(&sample.data, Method::Ols, Direction::XToY, &b).unwrap(), ols_xy);
    assert_eq!(estimate(&sample.data, Method::Ols, Direction::YToX, &b).unwrap(), ols_yx);
}

#[test]
fn study_cells_follow_shared_samples() {
    let plan = StudyPlan {
        replications: 3,
        sample_sizes: vec![400],
        scenarios: vec![NoiseScenario::BUniform],
        master_seed: 12,
        ..Default::default()
    };
    let cells = run_study(&plan).unwrap();
    // recompute replicate 1 by hand
    let seed = biproximal::experiments::sample_seed(12, NoiseScenario::BUniform, 400, 1);
    let mut cfg = ScenarioConfig::paper_defaults(400, seed);
    cfg.noise_scenario = NoiseScenario::BUniform;
    let sample = generate(&cfg).unwrap();
    let b = BasisSpec::ProductInteraction;
    for c in &cells {
        let expected = estimate(&sample.data, c.key.method, c.key.direction, &b).unwrap().estimate;
        let pos = c.replicates.iter().position(|&r| r == 1).unwrap();
        assert_eq!(c.estimates[pos], expected, "{}", c.key);
    }

    let grid = StudyPlan {
        sweep: Sweep::SensitivityGrid {
            r_w: vec![0.2],
            r_z: vec![-0.1],
        },
        methods: vec![Method::BiTsls],
        ..plan
    };
    let cells = run_study(&grid).unwrap();
    let mut vcfg = cfg.clone();
    vcfg.structural = vcfg.structural.with_sensitivity(0.2, -0.1);
    let vs = generate_violation(&vcfg).unwrap();
    let s_xy = bi_tsls_direction(&vs.data, &b, Direction::XToY).unwrap().estimate;
    let s_yx = bi_tsls_direction(&vs.data, &b, Direction::YToX).unwrap().estimate;
    let (bxy, _) = sensitivity_adjust(s_xy, s_yx, 0.2, -0.1).unwrap();
    let xy = cells.iter().find(|c| c.key.direction == Direction::XToY).unwrap();
    assert_eq!(xy.estimates[1], bxy);
}

fn structural() -> impl Strategy<Value = StructuralParams> {
    (
        -0.9f64..0.9,
        -0.9f64..0.9,
        0.3f64..2.0,
        0.3f64..2.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
        -0.5f64..0.5,
        -0.5f64..0.5,
    )
        .prop_map(|(bxy, byx, az, gw, au, gu, rw, rz)| {
            let mut s = StructuralParams::paper_defaults()
                .with_effects(bxy, byx)
                .with_confounding(au, gu)
                .with_sensitivity(rw, rz);
            s.alpha_z = az;
            s.gamma_w = gw;
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_rows_sit_on_the_equilibrium(s in structural(), seed in any::<u64>(), scenario in 0usize..3) {
        let mut cfg = ScenarioConfig::paper_defaults(200, seed);
        cfg.structural = s;
        cfg.noise_scenario = NoiseScenario::ALL[scenario];
        let sample = generate_violation(&cfg).unwrap();
        prop_assert!(sample.equilibrium_gap < 1e-10);
        let rf = reduced_form_from_structural(&cfg.structural).unwrap();
        let exo = draw_exogenous(&cfg);
        for i in (0..200).step_by(17) {
            let (px, py) = rf.predict(exo.z[i], exo.w[i], &[exo.v[0][i]], exo.u[i]);
            let (nx, ny) = cfg.structural.reduced_errors(exo.eps_x[i], exo.eps_y[i]);
            prop_assert!((sample.data.x()[i] - px - nx).abs() < 1e-9);
            prop_assert!((sample.data.y()[i] - py - ny).abs() < 1e-9);
        }
    }

    #[test]
    fn iteration_from_any_start_reaches_the_same_point(seed in any::<u64>(), x0 in -50.0f64..50.0, y0 in -50.0f64..50.0) {
        let cfg = ScenarioConfig::paper_defaults(50, seed);
        let exo = draw_exogenous(&cfg);
        let a = iterate_equilibrium(&cfg.structural, &exo, 5000, (0.0, 0.0)).unwrap();
        let b = iterate_equilibrium(&cfg.structural, &exo, 5000, (x0, y0)).unwrap();
        prop_assert!(b.gap < 1e-10);
        for (p, q) in a.x.iter().zip(&b.x) {
            prop_assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn n_prefix_stability(seed in any::<u64>(), n in 1usize..60, extra in 1usize..60) {
        let small = generate(&ScenarioConfig::paper_defaults(n, seed)).unwrap();
        let big = generate(&ScenarioConfig::paper_defaults(n + extra, seed)).unwrap();
        prop_assert_eq!(small.data.y(), &big.data.y()[..n]);
        prop_assert_eq!(small.data.z(), &big.data.z()[..n]);
        prop_assert_eq!(&small.u[..], &big.u[..n]);
    }

    #[test]
    fn bi_tsls_equivariant_under_rescaling(seed in 0u64..1000, a in 0.2f64..5.0, c in -3.0f64..3.0) {
        let sample = generate(&ScenarioConfig::paper_defaults(400, seed)).unwrap();
        let b = BasisSpec::ProductInteraction;
        let base = bi_tsls_direction(&sample.data, &b, Direction::XToY).unwrap().estimate;
        // Y -> aY + c scales the x -> y effect by a
        let scaled = sample.data.map_y(|y| a * y + c).unwrap();
        let got = bi_tsls_direction(&scaled, &b, Direction::XToY).unwrap().estimate;
        prop_assert!((got - a * base).abs() < 1e-7 * (1.0 + (a * base).abs()));
    }
}
