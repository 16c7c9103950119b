//! Monte-Carlo check of the robustness radius.
//!
//! Scenarios are drawn from the relative box around the nominal data
//! (`|x' - x| <= delta·x` for every datum in a varying group) and the test
//! DMU is re-classified on each one. Two schemes are available: uniform over
//! the box, and uniform over its vertices (every datum at one of its two
//! endpoints). Uniform draws almost never reach the worst-case corner, so
//! radius estimates should use vertex sampling. Every trial draws from its own
//! generator, seeded from `(seed, trial)`, so a report does not depend on how
//! trials are scheduled and any violation can be replayed from its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{DeaError, Result};
use crate::exec::{map_indexed, Execution};
use crate::fractional::meets_normalization;
use crate::models::{build_efficiency_system, Dataset, DmuRecord, PerturbationMask};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingScheme {
    #[default]
    Uniform,
    Vertices,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabConfig {
    pub mask: PerturbationMask,
    pub scheme: SamplingScheme,
    pub execution: Execution,
}

impl LabConfig {
    pub fn with_scheme(scheme: SamplingScheme) -> Self {
        Self {
            scheme,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSample {
    pub scenario: Dataset,
    pub delta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetentionReport {
    pub dmu_id: String,
    pub delta: f64,
    /// Classification on the nominal data; "retained" means a scenario agrees.
    pub nominal_efficient: bool,
    pub trials: usize,
    pub retained: usize,
    /// Seeds of the scenarios that flipped, in trial order.
    pub violations: Vec<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under master `seed` (the `index`-th splitmix64 output).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(index.wrapping_add(1))))
}

/// Uniform draw from the relative `delta`-box around `dataset`, perturbing
/// only the groups `mask` lets vary. `test` decides which row is the test DMU.
pub fn sample_neighborhood(
    dataset: &Dataset,
    test: usize,
    delta: f64,
    mask: PerturbationMask,
    seed: u64,
) -> Result<PerturbationSample> {
    sample_with_scheme(dataset, test, delta, mask, SamplingScheme::Uniform, seed)
}

pub fn sample_with_scheme(
    dataset: &Dataset,
    test: usize,
    delta: f64,
    mask: PerturbationMask,
    scheme: SamplingScheme,
    seed: u64,
) -> Result<PerturbationSample> {
    dataset.check_index(test)?;
    if !(0.0..1.0).contains(&delta) {
        return Err(DeaError::InvalidInput(format!(
            "perturbation level {delta} must lie in [0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |value: f64, vary: bool| {
        let u: f64 = match scheme {
            SamplingScheme::Uniform => rng.random_range(-1.0..=1.0),
            SamplingScheme::Vertices => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        if vary {
            value * (1.0 + delta * u)
        } else {
            value
        }
    };
    let dmus = dataset
        .dmus()
        .iter()
        .enumerate()
        .map(|(i, dmu)| {
            let (vary_in, vary_out) = if i == test {
                (mask.vary_test_inputs, mask.vary_test_outputs)
            } else {
                (mask.vary_peer_inputs, mask.vary_peer_outputs)
            };
            let inputs = dmu.inputs.iter().map(|&x| draw(x, vary_in)).collect();
            let outputs = dmu.outputs.iter().map(|&y| draw(y, vary_out)).collect();
            DmuRecord::new(dmu.id.clone(), inputs, outputs)
        })
        .collect();
    Ok(PerturbationSample {
        scenario: Dataset::new(dmus)?,
        delta,
        seed,
    })
}

/// Efficiency of `test` against all other DMUs (feasibility of the
/// normalized efficiency system with the test row excluded).
pub fn is_efficient(dataset: &Dataset, test: usize) -> Result<bool> {
    meets_normalization(&build_efficiency_system(dataset, test)?)
}

pub fn retention_test(
    dataset: &Dataset,
    test: usize,
    delta: f64,
    trials: usize,
    seed: u64,
    config: &LabConfig,
) -> Result<RetentionReport> {
    if trials == 0 {
        return Err(DeaError::InvalidInput("retention test needs at least one trial".into()));
    }
    config.mask.validate()?;
    let nominal = is_efficient(dataset, test)?;
    let outcomes = map_indexed(config.execution, trials, |t| -> Result<Option<u64>> {
        let trial_seed = derive_seed(seed, t as u64);
        let sample = sample_with_scheme(dataset, test, delta, config.mask, config.scheme, trial_seed)?;
        let efficient = is_efficient(&sample.scenario, test).map_err(|e| {
            DeaError::Inconsistency(format!("scenario seed {trial_seed}: {e}"))
        })?;
        Ok((efficient != nominal).then_some(trial_seed))
    });
    let mut violations = Vec::new();
    for outcome in outcomes {
        if let Some(s) = outcome? {
            violations.push(s);
        }
    }
    Ok(RetentionReport {
        dmu_id: dataset.dmu(test).id.clone(),
        delta,
        nominal_efficient: nominal,
        trials,
        retained: trials - violations.len(),
        violations,
    })
}

/// Largest level of the ascending grid `levels` up to which every level
/// retained the nominal classification in all trials; 0 when the first
/// level already flips.
///
/// A level is only rejected once some scenario actually flips, so a finite
/// sample can overshoot the true radius but never undershoot it (up to the
/// grid step). Vertex sampling keeps the overshoot small.
pub fn empirical_radius(
    dataset: &Dataset,
    test: usize,
    trials_per_level: usize,
    levels: &[f64],
    seed: u64,
    config: &LabConfig,
) -> Result<f64> {
    if levels.windows(2).any(|w| w[0] >= w[1]) || levels.iter().any(|l| !(0.0..1.0).contains(l)) {
        return Err(DeaError::InvalidInput(
            "levels must be strictly ascending within [0, 1)".into(),
        ));
    }
    let mut radius = 0.0;
    for (k, &level) in levels.iter().enumerate() {
        let report = retention_test(
            dataset,
            test,
            level,
            trials_per_level,
            derive_seed(seed ^ 0x5_EED1_E7E1_u64, k as u64),
            config,
        )?;
        if report.retained < report.trials {
            break;
        }
        radius = level;
    }
    Ok(radius)
}

/// `0, step, 2·step, …` up to and including `max` (within round-off).
pub fn level_grid(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * step).filter(|l| *l < 1.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn zero_delta_reproduces_data() {
        let h = fixtures::hospitals();
        let s = sample_neighborhood(&h, 0, 0.0, PerturbationMask::ALL, 11).unwrap();
        assert_eq!(s.scenario, h);
    }

    #[test]
    fn samples_stay_in_box_and_are_deterministic() {
        let h = fixtures::hospitals();
        let a = sample_neighborhood(&h, 3, 0.05, PerturbationMask::ALL, 99).unwrap();
        let b = sample_neighborhood(&h, 3, 0.05, PerturbationMask::ALL, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_neighborhood(&h, 3, 0.05, PerturbationMask::ALL, 100).unwrap();
        assert_ne!(a, c);
        for (p, n) in a.scenario.dmus().iter().zip(h.dmus()) {
            for (x, x0) in p.inputs.iter().zip(&n.inputs).chain(p.outputs.iter().zip(&n.outputs)) {
                assert!((x - x0).abs() <= 0.05 * x0 + 1e-12);
            }
        }
    }

    #[test]
    fn fixed_groups_are_untouched() {
        let h = fixtures::hospitals();
        let s = sample_neighborhood(&h, 2, 0.3, PerturbationMask::INPUTS_FIXED, 5).unwrap();
        for (p, n) in s.scenario.dmus().iter().zip(h.dmus()) {
            assert_eq!(p.inputs, n.inputs);
            assert_ne!(p.outputs, n.outputs);
        }
        let only_test = PerturbationMask {
            vary_test_inputs: true,
            vary_test_outputs: false,
            vary_peer_inputs: false,
            vary_peer_outputs: false,
        };
        let s = sample_neighborhood(&h, 2, 0.3, only_test, 5).unwrap();
        for (i, (p, n)) in s.scenario.dmus().iter().zip(h.dmus()).enumerate() {
            assert_eq!(p.outputs, n.outputs);
            assert_eq!(p.inputs == n.inputs, i != 2);
        }
    }

    #[test]
    fn vertex_samples_sit_on_the_box_corners() {
        let h = fixtures::hospitals();
        let s = sample_with_scheme(&h, 0, 0.1, PerturbationMask::ALL, SamplingScheme::Vertices, 4).unwrap();
        for (p, n) in s.scenario.dmus().iter().zip(h.dmus()) {
            for (x, x0) in p.inputs.iter().zip(&n.inputs).chain(p.outputs.iter().zip(&n.outputs)) {
                let rel = (x - x0).abs() / x0;
                assert!((rel - 0.1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_out_of_range_delta() {
        let h = fixtures::hospitals();
        assert!(sample_neighborhood(&h, 0, 1.0, PerturbationMask::ALL, 1).is_err());
        assert!(sample_neighborhood(&h, 0, -0.1, PerturbationMask::ALL, 1).is_err());
    }

    #[test]
    fn borderline_dmu_loses_efficiency() {
        let abc = fixtures::unit_input_triple();
        let report = retention_test(&abc, 1, 0.01, 1000, 3, &LabConfig::default()).unwrap();
        assert!(report.nominal_efficient);
        assert!(!report.violations.is_empty());
        assert_eq!(report.retained + report.violations.len(), report.trials);
        // a recorded violation replays
        let replay = sample_neighborhood(&abc, 1, 0.01, PerturbationMask::ALL, report.violations[0]).unwrap();
        assert!(!is_efficient(&replay.scenario, 1).unwrap());

        let levels = level_grid(0.005, 0.05);
        let radius = empirical_radius(&abc, 1, 200, &levels, 8, &LabConfig::default()).unwrap();
        assert_eq!(radius, 0.0);
    }

    #[test]
    fn reports_are_reproducible_across_execution_modes() {
        let abc = fixtures::unit_input_triple();
        for scheme in [SamplingScheme::Uniform, SamplingScheme::Vertices] {
            let seq = LabConfig {
                scheme,
                execution: Execution::Sequential,
                ..LabConfig::default()
            };
            let par = LabConfig {
                execution: Execution::Parallel,
                ..seq
            };
            let a = retention_test(&abc, 1, 0.02, 300, 17, &seq).unwrap();
            let b = retention_test(&abc, 1, 0.02, 300, 17, &par).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn level_grid_spacing() {
        let g = level_grid(0.005, 0.02);
        assert_eq!(g.len(), 5);
        assert!((g[4] - 0.02).abs() < 1e-12);
        assert!(empirical_radius(
            &fixtures::hospitals(),
            0,
            10,
            &[0.1, 0.05],
            1,
            &LabConfig::default()
        )
        .is_err());
    }
}
