//! Randomized checks of the structural properties of the rankings.
//!
//! Each suite runs over generated datasets and counts violations. The same
//! runner backs the `verify` subcommand and the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exec::{map_indexed, Execution};
use crate::fractional::{exact_feasible, BisectionConfig};
use crate::models::{Dataset, DmuRecord, ModelKind, PerturbationMask};
use crate::perturbation::{derive_seed, is_efficient};
use crate::ranking::{classical_score, rank_one, RankConfig, CLASSIFICATION_TOL};

/// Tolerance for order, chain and invariance comparisons.
pub const PROPERTY_TOL: f64 = 1e-7;

pub const SUITES: [&str; 8] = [
    "solves",
    "range",
    "classification",
    "order-ccr",
    "order-bcc-lp",
    "inequality-chain",
    "units-invariance",
    "bisection-monotone",
];

const MAX_EXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// First few violations, for diagnosis.
    pub examples: Vec<String>,
}

impl PropertyReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            violations: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    fn merge(&mut self, other: PropertyReport) {
        self.checked += other.checked;
        self.violations += other.violations;
        for e in other.examples {
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(e);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Dataset `index` of the family generated from `seed`: 2 to 12 DMUs, 1 to 4
/// inputs and outputs, entries uniform in [1, 100].
pub fn random_dataset(seed: u64, index: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, index));
    let m = rng.random_range(2..=12);
    let n1 = rng.random_range(1..=4);
    let n2 = rng.random_range(1..=4);
    let dmus = (0..m)
        .map(|i| {
            let inputs = (0..n1).map(|_| rng.random_range(1.0..=100.0)).collect();
            let outputs = (0..n2).map(|_| rng.random_range(1.0..=100.0)).collect();
            DmuRecord::new(format!("D{i}"), inputs, outputs)
        })
        .collect();
    Dataset::new(dmus).expect("generated data is positive")
}

struct Scores {
    ccr_in: f64,
    ccr_ex: f64,
    lp: f64,
    exact: f64,
    exact_efficient: bool,
    bcc_in: f64,
    bcc_ex: f64,
    bcc_lp: f64,
    bcc_exact: f64,
    bcc_exact_efficient: bool,
}

fn r_of(ds: &Dataset, test: usize, model: ModelKind, cfg: &RankConfig) -> Result<f64> {
    rank_one(ds, test, model, PerturbationMask::ALL, cfg).map(|res| res.r)
}

fn scores(ds: &Dataset, test: usize, cfg: &RankConfig) -> Result<Scores> {
    let exact = rank_one(ds, test, ModelKind::CcrRobustExact, PerturbationMask::ALL, cfg)?;
    let bcc_exact = rank_one(ds, test, ModelKind::BccRobustExact, PerturbationMask::ALL, cfg)?;
    Ok(Scores {
        ccr_in: classical_score(ds, test, false, true)?,
        ccr_ex: classical_score(ds, test, false, false)?,
        lp: r_of(ds, test, ModelKind::CcrRobustLp, cfg)?,
        exact: exact.r,
        exact_efficient: exact.efficient,
        bcc_in: classical_score(ds, test, true, true)?,
        bcc_ex: classical_score(ds, test, true, false)?,
        bcc_lp: r_of(ds, test, ModelKind::BccRobustLp, cfg)?,
        bcc_exact: bcc_exact.r,
        bcc_exact_efficient: bcc_exact.efficient,
    })
}

fn in_range(r: f64, lo: f64, hi: f64) -> bool {
    r >= lo - 1e-9 && r <= hi + 1e-9
}

/// Strictly ordered by `key` beyond tolerance, yet reversed by `r`.
fn order_breaks(key: &[f64], r: &[f64]) -> Option<(usize, usize)> {
    for i in 0..key.len() {
        for j in 0..key.len() {
            let ahead = if key[j].is_infinite() {
                false
            } else {
                key[i] > key[j] + PROPERTY_TOL
            };
            if ahead && r[i] < r[j] - PROPERTY_TOL {
                return Some((i, j));
            }
        }
    }
    None
}

fn check_dataset(ds: &Dataset, label: &str, seed: u64, cfg: &RankConfig) -> Vec<PropertyReport> {
    let mut reports: Vec<PropertyReport> = SUITES.iter().map(|n| PropertyReport::new(n)).collect();
    let [solves, range, classification, order_ccr, order_bcc, chain, units, monotone] = &mut reports[..] else {
        unreachable!()
    };

    let all: Vec<Result<Scores>> = (0..ds.len()).map(|i| scores(ds, i, cfg)).collect();
    let mut table = Vec::with_capacity(ds.len());
    for (i, s) in all.into_iter().enumerate() {
        let ok = s.is_ok();
        solves.check(ok, || format!("{label}/{}: {}", ds.dmu(i).id, s.as_ref().err().unwrap()));
        match s {
            Ok(s) => table.push(s),
            Err(_) => return reports,
        }
    }

    for (i, s) in table.iter().enumerate() {
        let id = &ds.dmu(i).id;
        range.check(
            in_range(s.lp, 0.0, 2.0)
                && in_range(s.exact, -1.0, 3.0)
                && in_range(s.bcc_lp, 0.0, 2.0)
                && in_range(s.bcc_exact, -1.0, 3.0),
            || format!("{label}/{id}: lp {} exact {} bcc-lp {} bcc-exact {}", s.lp, s.exact, s.bcc_lp, s.bcc_exact),
        );

        let eff = |r: f64| r >= 1.0 - CLASSIFICATION_TOL;
        let ccr_eff = s.ccr_in >= 1.0 - CLASSIFICATION_TOL;
        let bcc_eff = s.bcc_in >= 1.0 - CLASSIFICATION_TOL;
        classification.check(
            eff(s.lp) == ccr_eff
                && eff(s.exact) == ccr_eff
                && s.exact_efficient == ccr_eff
                && eff(s.bcc_lp) == bcc_eff
                && s.bcc_exact_efficient == bcc_eff,
            || {
                format!(
                    "{label}/{id}: ccr {} lp {} exact {} | bcc {} bcc-lp {} bcc-exact {}",
                    s.ccr_in, s.lp, s.exact, s.bcc_in, s.bcc_lp, s.bcc_exact
                )
            },
        );

        // Efficient units: classical term clamped to 1 (interpretation, since
        // the self-excluded score can exceed 1).
        let classical = s.ccr_ex.min(1.0);
        let ok = if eff(s.lp) {
            classical <= s.lp + PROPERTY_TOL && s.lp <= s.exact + PROPERTY_TOL
        } else {
            let base = s.exact <= s.lp + PROPERTY_TOL && classical <= s.lp + PROPERTY_TOL;
            let tail = s.exact < 3.0 - 2.0 * 2f64.sqrt() || classical <= s.exact + PROPERTY_TOL;
            base && tail
        };
        chain.check(ok, || {
            format!("{label}/{id}: classical {classical} lp {} exact {}", s.lp, s.exact)
        });
    }

    let key: Vec<f64> = table.iter().map(|s| s.ccr_ex).collect();
    for (name, r) in [
        ("lp", table.iter().map(|s| s.lp).collect::<Vec<_>>()),
        ("exact", table.iter().map(|s| s.exact).collect()),
    ] {
        let broken = order_breaks(&key, &r);
        order_ccr.check(broken.is_none(), || {
            let (i, j) = broken.unwrap();
            format!("{label}: {name} reverses {} over {}", ds.dmu(j).id, ds.dmu(i).id)
        });
    }
    let key: Vec<f64> = table.iter().map(|s| s.bcc_ex).collect();
    let r: Vec<f64> = table.iter().map(|s| s.bcc_lp).collect();
    let broken = order_breaks(&key, &r);
    order_bcc.check(broken.is_none(), || {
        let (i, j) = broken.unwrap();
        format!("{label}: bcc-lp reverses {} over {}", ds.dmu(j).id, ds.dmu(i).id)
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor = 10f64.powf(rng.random_range(-2.0..=2.0));
    let scale_input = rng.random::<bool>();
    let scaled = if scale_input {
        let col = rng.random_range(0..ds.input_dim());
        ds.with_scaled_input(col, factor)
    } else {
        let col = rng.random_range(0..ds.output_dim());
        ds.with_scaled_output(col, factor)
    };
    match scaled {
        Ok(scaled) => {
            for (i, s) in table.iter().enumerate() {
                let id = &ds.dmu(i).id;
                let again = (|| -> Result<[f64; 3]> {
                    Ok([
                        r_of(&scaled, i, ModelKind::CcrRobustLp, cfg)?,
                        r_of(&scaled, i, ModelKind::CcrRobustExact, cfg)?,
                        r_of(&scaled, i, ModelKind::BccRobustLp, cfg)?,
                    ])
                })();
                let ok = matches!(again, Ok(a) if (a[0] - s.lp).abs() <= PROPERTY_TOL
                    && (a[1] - s.exact).abs() <= PROPERTY_TOL
                    && (a[2] - s.bcc_lp).abs() <= PROPERTY_TOL);
                units.check(ok, || {
                    format!("{label}/{id}: scale {factor:e} gave {again:?} vs [{}, {}, {}]", s.lp, s.exact, s.bcc_lp)
                });
            }
        }
        Err(e) => units.check(false, || format!("{label}: scaling failed: {e}")),
    }

    let grid: Vec<f64> = (0..10).map(|k| -0.9 + 0.2 * k as f64).collect();
    for (i, s) in table.iter().enumerate() {
        let id = &ds.dmu(i).id;
        for (model, classically_efficient) in [
            (ModelKind::CcrRobustExact, s.ccr_in >= 1.0 - CLASSIFICATION_TOL),
            (ModelKind::BccRobustExact, s.bcc_in >= 1.0 - CLASSIFICATION_TOL),
        ] {
            let outcome = (|| -> Result<bool> {
                let ordered = crate::fractional::verify_monotone(ds, i, PerturbationMask::ALL, model, &grid)?;
                let at_zero = exact_feasible(ds, i, PerturbationMask::ALL, model, 0.0)?;
                let agrees = if model.is_bcc() {
                    at_zero == classically_efficient
                } else {
                    at_zero == classically_efficient && at_zero == is_efficient(ds, i)?
                };
                Ok(ordered && agrees)
            })();
            monotone.check(matches!(outcome, Ok(true)), || format!("{label}/{id}: {model} {outcome:?}"));
        }
    }

    reports
}

/// Runs every suite over `datasets` generated datasets.
pub fn run_property_suites(datasets: usize, seed: u64, execution: Execution) -> Vec<PropertyReport> {
    let cfg = RankConfig {
        bisection: BisectionConfig::default(),
        include_self_classical: true,
        execution: Execution::Sequential,
    };
    let per_dataset = map_indexed(execution, datasets, |k| {
        let ds = random_dataset(seed, k as u64);
        check_dataset(&ds, &format!("dataset {k}"), derive_seed(seed ^ 0xA11_5CA1E, k as u64), &cfg)
    });
    let mut totals: Vec<PropertyReport> = SUITES.iter().map(|n| PropertyReport::new(n)).collect();
    for reports in per_dataset {
        for (total, report) in totals.iter_mut().zip(reports) {
            total.merge(report);
        }
    }
    totals
}
