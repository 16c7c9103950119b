//! Per-DMU ranking `r = 1 + delta_star`, batch ranking, interval ranges and
//! report ordering.

use serde::Serialize;

use crate::error::{DeaError, Result};
use crate::exec::{map_indexed, Execution};
use crate::fractional::{exact_feasible, solve_exact_delta, BisectionConfig};
use crate::lp::{solve, LinearProgram, LpStatus};
use crate::models::{
    build_bcc_classical, build_bcc_robust_lp, build_ccr_classical, build_robust_lp, scale_factor, Dataset,
    DmuRecord, ModelKind, PerturbationMask,
};

/// A DMU is efficient when `delta_star >= -CLASSIFICATION_TOL`.
pub const CLASSIFICATION_TOL: f64 = 1e-7;

/// Rankings closer than this are treated as ties when ordering reports.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankConfig {
    pub bisection: BisectionConfig,
    pub include_self_classical: bool,
    pub execution: Execution,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self {
            bisection: BisectionConfig::default(),
            include_self_classical: true,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingResult {
    pub dmu_id: String,
    pub model: ModelKind,
    pub delta_star: f64,
    pub r: f64,
    pub classical_score: f64,
    pub efficient: bool,
    pub mask: PerturbationMask,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmuFailure {
    pub dmu_id: String,
    pub error: DeaError,
}

/// Optimum of a program that must be feasible and bounded.
pub(crate) fn optimum(lp: &LinearProgram, what: &str) -> Result<f64> {
    let solution = solve(lp)?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.objective_value.unwrap_or_default()),
        status => Err(DeaError::Inconsistency(format!("{what} reported {status:?}"))),
    }
}

/// Classical CCR or BCC score. Without the test row the score can exceed 1,
/// and an unbounded program is reported as `+inf`.
pub fn classical_score(dataset: &Dataset, test: usize, bcc: bool, include_self: bool) -> Result<f64> {
    let lp = if bcc {
        build_bcc_classical(dataset, test, include_self)?
    } else {
        build_ccr_classical(dataset, test, include_self)?
    };
    let solution = solve(&lp)?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.objective_value.unwrap_or_default()),
        LpStatus::Unbounded => Ok(f64::INFINITY),
        LpStatus::Infeasible => Err(DeaError::Inconsistency(
            "classical program is infeasible (u = v = 0 is always feasible)".into(),
        )),
    }
}

pub fn rank_one(
    dataset: &Dataset,
    test: usize,
    model: ModelKind,
    mask: PerturbationMask,
    config: &RankConfig,
) -> Result<RankingResult> {
    dataset.check_index(test)?;
    mask.validate()?;
    if model.is_bcc() && !model.is_classical() && !mask.is_all_vary() {
        return Err(DeaError::InvalidInput(
            "the BCC robust models support only the all-varying mask".into(),
        ));
    }
    let classical = classical_score(dataset, test, model.is_bcc(), config.include_self_classical)?;
    let delta_star = match model {
        ModelKind::CcrClassical | ModelKind::BccClassical => classical - 1.0,
        ModelKind::CcrRobustLp => {
            let opt = optimum(&build_robust_lp(dataset, test, mask)?, "robust LP")?;
            // partial masks can push the linearized value below -1, where
            // the unit is inefficient under every admissible perturbation
            let opt = if mask.is_all_vary() { opt } else { opt.max(-1.0) };
            scale_factor(model, mask) * opt
        }
        ModelKind::BccRobustLp => optimum(&build_bcc_robust_lp(dataset, test)?, "robust BCC LP")?,
        ModelKind::CcrRobustExact | ModelKind::BccRobustExact => {
            solve_exact_delta(dataset, test, mask, model, &config.bisection)?
        }
    };
    let r = 1.0 + delta_star;
    let (lo, hi) = if model.is_robust_lp() && mask.is_all_vary() {
        (0.0, 2.0)
    } else {
        (-1.0, 3.0)
    };
    if !model.is_classical() && !(r >= lo - 1e-9 && r <= hi + 1e-9) {
        return Err(DeaError::Inconsistency(format!(
            "ranking {r} of '{}' outside [{lo}, {hi}]",
            dataset.dmu(test).id
        )));
    }
    // the exact supremum can be 0 without being attained, so exact models
    // are classified by the system at delta = 0 itself
    let efficient = if model.is_exact() {
        exact_feasible(dataset, test, mask, model, 0.0)?
    } else {
        delta_star >= -CLASSIFICATION_TOL
    };
    Ok(RankingResult {
        dmu_id: dataset.dmu(test).id.clone(),
        model,
        delta_star,
        r,
        classical_score: classical,
        efficient,
        mask,
    })
}

/// One outcome per DMU in dataset order. Fails only when every DMU fails.
pub fn rank_all(
    dataset: &Dataset,
    model: ModelKind,
    mask: PerturbationMask,
    config: &RankConfig,
) -> Result<Vec<std::result::Result<RankingResult, DmuFailure>>> {
    let outcomes = map_indexed(config.execution, dataset.len(), |i| {
        rank_one(dataset, i, model, mask, config).map_err(|error| DmuFailure {
            dmu_id: dataset.dmu(i).id.clone(),
            error,
        })
    });
    if let Some(Err(first)) = outcomes.first() {
        if outcomes.iter().all(|o| o.is_err()) {
            return Err(first.error.clone());
        }
    }
    Ok(outcomes)
}

/// Ids sorted by `r` descending; rankings within [`TIE_TOL`] keep dataset order.
pub fn sorted_order(results: &[RankingResult]) -> Result<Vec<String>> {
    if let Some(first) = results.first() {
        if results.iter().any(|r| r.model != first.model) {
            return Err(DeaError::InvalidInput(
                "cannot order results from different models".into(),
            ));
        }
    }
    let key = |r: f64| (r / TIE_TOL).round() as i64;
    let mut order: Vec<&RankingResult> = results.iter().collect();
    order.sort_by_key(|res| std::cmp::Reverse(key(res.r)));
    Ok(order.into_iter().map(|r| r.dmu_id.clone()).collect())
}

/// Elementwise bounds on every datum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalDataset {
    lower: Dataset,
    upper: Dataset,
}

impl IntervalDataset {
    pub fn new(lower: Dataset, upper: Dataset) -> Result<Self> {
        if lower.len() != upper.len()
            || lower.input_dim() != upper.input_dim()
            || lower.output_dim() != upper.output_dim()
        {
            return Err(DeaError::InvalidInput(
                "interval bounds have different shapes".into(),
            ));
        }
        for (lo, hi) in lower.dmus().iter().zip(upper.dmus()) {
            if lo.id != hi.id {
                return Err(DeaError::InvalidInput(format!(
                    "interval bounds disagree on DMU id ('{}' vs '{}')",
                    lo.id, hi.id
                )));
            }
            let crossed = lo
                .inputs
                .iter()
                .zip(&hi.inputs)
                .chain(lo.outputs.iter().zip(&hi.outputs))
                .any(|(a, b)| a > b);
            if crossed {
                return Err(DeaError::InvalidInput(format!(
                    "DMU '{}' has a lower bound above its upper bound",
                    lo.id
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Degenerate intervals around a point dataset.
    pub fn from_point(dataset: Dataset) -> Self {
        Self {
            lower: dataset.clone(),
            upper: dataset,
        }
    }

    pub fn lower(&self) -> &Dataset {
        &self.lower
    }

    pub fn upper(&self) -> &Dataset {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.lower.index_of(id)
    }

    /// Most favourable realization for `test`: its inputs low and outputs
    /// high, every peer's inputs high and outputs low.
    pub fn best_case(&self, test: usize) -> Result<Dataset> {
        self.instantiate(test, true)
    }

    /// Least favourable realization for `test`.
    pub fn worst_case(&self, test: usize) -> Result<Dataset> {
        self.instantiate(test, false)
    }

    fn instantiate(&self, test: usize, favourable: bool) -> Result<Dataset> {
        self.lower.check_index(test)?;
        let dmus = self
            .lower
            .dmus()
            .iter()
            .zip(self.upper.dmus())
            .enumerate()
            .map(|(i, (lo, hi))| {
                // test and peers take opposite corners
                let good_for_owner = (i == test) == favourable;
                let (inputs, outputs) = if good_for_owner {
                    (&lo.inputs, &hi.outputs)
                } else {
                    (&hi.inputs, &lo.outputs)
                };
                DmuRecord::new(lo.id.clone(), inputs.clone(), outputs.clone())
            })
            .collect();
        Dataset::new(dmus)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyRange {
    pub dmu_id: String,
    pub r_lower: f64,
    pub r_upper: f64,
    pub always_efficient: bool,
    pub never_efficient: bool,
}

pub fn rank_interval(
    interval: &IntervalDataset,
    test: usize,
    model: ModelKind,
    mask: PerturbationMask,
    config: &RankConfig,
) -> Result<EfficiencyRange> {
    let best = rank_one(&interval.best_case(test)?, test, model, mask, config)?;
    let worst = rank_one(&interval.worst_case(test)?, test, model, mask, config)?;
    Ok(EfficiencyRange {
        dmu_id: best.dmu_id,
        r_lower: worst.r,
        r_upper: best.r,
        always_efficient: worst.efficient,
        never_efficient: !best.efficient,
    })
}

pub fn rank_interval_all(
    interval: &IntervalDataset,
    model: ModelKind,
    mask: PerturbationMask,
    config: &RankConfig,
) -> Result<Vec<std::result::Result<EfficiencyRange, DmuFailure>>> {
    let outcomes = map_indexed(config.execution, interval.len(), |i| {
        rank_interval(interval, i, model, mask, config).map_err(|error| DmuFailure {
            dmu_id: interval.lower().dmu(i).id.clone(),
            error,
        })
    });
    if let Some(Err(first)) = outcomes.first() {
        if outcomes.iter().all(|o| o.is_err()) {
            return Err(first.error.clone());
        }
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ok_results(outcomes: Vec<std::result::Result<RankingResult, DmuFailure>>) -> Vec<RankingResult> {
        outcomes.into_iter().map(|o| o.unwrap()).collect()
    }

    #[test]
    fn rank_one_examples() {
        let cfg = RankConfig::default();
        let h = fixtures::hospitals();
        let b = rank_one(&h, 1, ModelKind::CcrRobustLp, PerturbationMask::ALL, &cfg).unwrap();
        assert!((b.r - 1.0843).abs() < 5e-5);
        assert!(b.efficient);
        assert_eq!(b.r, 1.0 + b.delta_star);
        let i = rank_one(&h, 8, ModelKind::CcrRobustExact, PerturbationMask::ALL, &cfg).unwrap();
        assert!((i.r - 0.9798).abs() < 5e-5);
        assert!(!i.efficient);
        let t = fixtures::single_input_output();
        let g = rank_one(&t, 6, ModelKind::BccRobustLp, PerturbationMask::ALL, &cfg).unwrap();
        assert!((g.r - 2.0 / 3.0).abs() < 1e-9);
        assert!((g.classical_score - 0.5).abs() < 1e-9);
    }

    #[test]
    fn single_dmu_reaches_top_of_range() {
        let one = Dataset::new(vec![DmuRecord::new("solo", vec![3.0, 1.0], vec![2.0])]).unwrap();
        let res = rank_one(&one, 0, ModelKind::CcrRobustLp, PerturbationMask::ALL, &RankConfig::default()).unwrap();
        assert!((res.r - 2.0).abs() < 1e-9);
    }

    #[test]
    fn batch_keeps_order_and_values() {
        let abc = fixtures::unit_input_triple();
        let cfg = RankConfig::default();
        let res = ok_results(rank_all(&abc, ModelKind::CcrRobustLp, PerturbationMask::ALL, &cfg).unwrap());
        let ids: Vec<_> = res.iter().map(|r| r.dmu_id.as_str()).collect();
        assert_eq!(ids, ["A", "B", "C"]);
        let expect = [8.0 / 7.0, 1.0, 8.0 / 7.0];
        for (r, e) in res.iter().zip(expect) {
            assert!((r.r - e).abs() < 1e-9);
        }
        let seq = RankConfig {
            execution: Execution::Sequential,
            ..cfg
        };
        let again = ok_results(rank_all(&abc, ModelKind::CcrRobustLp, PerturbationMask::ALL, &seq).unwrap());
        assert_eq!(res, again);
    }

    #[test]
    fn bcc_robust_rejects_partial_mask() {
        let t = fixtures::single_input_output();
        let cfg = RankConfig::default();
        assert!(rank_one(&t, 0, ModelKind::BccRobustLp, PerturbationMask::INPUTS_FIXED, &cfg).is_err());
        let all = rank_all(&t, ModelKind::BccRobustLp, PerturbationMask::INPUTS_FIXED, &cfg);
        assert!(all.is_err());
    }

    #[test]
    fn sorted_order_breaks_ties_by_position() {
        let t = fixtures::single_input_output();
        let res = ok_results(
            rank_all(&t, ModelKind::BccRobustLp, PerturbationMask::ALL, &RankConfig::default()).unwrap(),
        );
        assert_eq!(sorted_order(&res).unwrap(), ["E", "C", "B", "A", "D", "H", "G", "F"]);

        let mut mixed = res.clone();
        mixed[0].model = ModelKind::CcrRobustLp;
        assert!(sorted_order(&mixed).is_err());
        assert!(sorted_order(&[]).unwrap().is_empty());
    }

    #[test]
    fn point_interval_collapses() {
        let h = fixtures::hospitals();
        let iv = IntervalDataset::from_point(h.clone());
        let range = rank_interval(&iv, 0, ModelKind::CcrRobustLp, PerturbationMask::ALL, &RankConfig::default())
            .unwrap();
        assert_eq!(range.r_lower, range.r_upper);
        assert!((range.r_lower - 1.1696).abs() < 5e-5);
        assert!(range.always_efficient && !range.never_efficient);
    }

    #[test]
    fn interval_examples() {
        let iv = fixtures::interval_outputs();
        let cfg = RankConfig::default();
        let a = rank_interval(&iv, 0, ModelKind::CcrRobustLp, PerturbationMask::ALL, &cfg).unwrap();
        assert!((a.r_lower - 1.0169).abs() < 5e-4 && (a.r_upper - 1.1148).abs() < 5e-4);
        let e = rank_interval(&iv, 4, ModelKind::CcrRobustLp, PerturbationMask::ALL, &cfg).unwrap();
        assert!((e.r_lower - 0.9819).abs() < 5e-4 && (e.r_upper - 1.1292).abs() < 5e-4);
        assert!(!e.always_efficient && !e.never_efficient);
    }

    #[test]
    fn interval_validation() {
        let h = fixtures::hospitals();
        let t = fixtures::single_input_output();
        assert!(IntervalDataset::new(h.clone(), t).is_err());
        let shifted = h.with_scaled_input(0, 0.5).unwrap();
        assert!(IntervalDataset::new(h, shifted).is_err());
    }
}
