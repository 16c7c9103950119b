use robust_dea::fixtures;
use robust_dea::models::{ModelKind, PerturbationMask};
use robust_dea::perturbation::{derive_seed, is_efficient, level_grid, sample_neighborhood};
use robust_dea::ranking::{rank_all, RankConfig};
use robust_dea::{empirical_radius, retention_test, Execution, LabConfig, SamplingScheme};

fn exact_deltas() -> Vec<f64> {
    let h = fixtures::hospitals();
    rank_all(&h, ModelKind::CcrRobustExact, PerturbationMask::ALL, &RankConfig::default())
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap().delta_star)
        .collect()
}

#[test]
fn classification_survives_inside_half_the_robust_delta() {
    let h = fixtures::hospitals();
    for (i, d) in exact_deltas().into_iter().enumerate() {
        let level = (d.abs() / 2.0 - 1e-3).max(0.0);
        let report = retention_test(&h, i, level, 1000, 7 + i as u64, &LabConfig::default()).unwrap();
        assert!(report.violations.is_empty(), "{} flipped at {level}: {:?}", report.dmu_id, report.violations);
    }
}

#[test]
fn inefficient_unit_stays_inefficient_inside_its_margin() {
    let h = fixtures::hospitals();
    let e = h.index_of("E").unwrap();
    let report = retention_test(&h, e, 0.055, 1000, 1, &LabConfig::default()).unwrap();
    assert!(!report.nominal_efficient);
    assert_eq!(report.retained, 1000);
}

#[test]
fn violations_replay_from_their_seeds() {
    let h = fixtures::hospitals();
    let b = h.index_of("B").unwrap();
    let report = retention_test(&h, b, 0.15, 500, 11, &LabConfig::default()).unwrap();
    assert!(report.nominal_efficient);
    assert!(!report.violations.is_empty());
    assert_eq!(report.retained + report.violations.len(), 500);
    for &seed in report.violations.iter().take(5) {
        let sample = sample_neighborhood(&h, b, 0.15, PerturbationMask::ALL, seed).unwrap();
        assert!(!is_efficient(&sample.scenario, b).unwrap());
    }
    let seeds: Vec<u64> = (0..500).map(|t| derive_seed(11, t)).collect();
    assert!(report.violations.iter().all(|v| seeds.contains(v)));
}

#[test]
fn hospital_a_radius_under_vertex_sampling() {
    let h = fixtures::hospitals();
    let lab = LabConfig::with_scheme(SamplingScheme::Vertices);
    let levels = level_grid(0.005, 0.12);
    for seed in 1..=3 {
        let radius = empirical_radius(&h, 0, 1000, &levels, seed, &lab).unwrap();
        assert!((0.080..=0.090).contains(&radius), "seed {seed}: {radius}");
    }
}

#[test]
fn barely_efficient_units_have_tiny_radii() {
    let h = fixtures::hospitals();
    let lab = LabConfig::with_scheme(SamplingScheme::Vertices);
    let levels = level_grid(0.005, 0.05);
    let d = h.index_of("D").unwrap();
    let radius = empirical_radius(&h, d, 500, &levels, 2, &lab).unwrap();
    assert!(radius <= 0.01, "{radius}");
}

#[test]
fn estimated_radius_never_undershoots_for_efficient_units() {
    let h = fixtures::hospitals();
    let step = 0.005;
    let lab = LabConfig::with_scheme(SamplingScheme::Vertices);
    for (i, d) in exact_deltas().into_iter().enumerate() {
        if d < 0.0 {
            continue;
        }
        let radius = empirical_radius(&h, i, 300, &level_grid(step, 0.12), 5, &lab).unwrap();
        assert!(radius >= d / 2.0 - step - 1e-12, "{}: {radius} below {}", h.dmu(i).id, d / 2.0);
    }
}

#[test]
fn reports_do_not_depend_on_execution_mode() {
    let h = fixtures::hospitals();
    for scheme in [SamplingScheme::Uniform, SamplingScheme::Vertices] {
        let seq = LabConfig { scheme, execution: Execution::Sequential, ..LabConfig::default() };
        let par = LabConfig { scheme, execution: Execution::Parallel, ..LabConfig::default() };
        let a = retention_test(&h, 1, 0.06, 300, 99, &seq).unwrap();
        let b = retention_test(&h, 1, 0.06, 300, 99, &par).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn fixed_groups_are_never_touched() {
    let h = fixtures::hospitals();
    let s = sample_neighborhood(&h, 3, 0.2, PerturbationMask::INPUTS_FIXED, 8).unwrap().scenario;
    assert_eq!(s.dmu(3).inputs, h.dmu(3).inputs);
    assert_ne!(s.dmu(3).outputs, h.dmu(3).outputs);
    assert_eq!(s.dmu(0).inputs, h.dmu(0).inputs);
    assert_ne!(s.dmu(0).outputs, h.dmu(0).outputs);

    let mask = PerturbationMask { vary_peer_inputs: false, ..PerturbationMask::ALL };
    let s = sample_neighborhood(&h, 3, 0.2, mask, 8).unwrap().scenario;
    assert_ne!(s.dmu(3).inputs, h.dmu(3).inputs);
    assert_eq!(s.dmu(0).inputs, h.dmu(0).inputs);
}
