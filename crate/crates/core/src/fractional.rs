//! Exact robust models solved by bisection on the robustness level.
//!
//! For a fixed `delta` the exact CCR and BCC robust models are plain linear
//! feasibility systems, and feasibility is monotone in `delta` (the feasible
//! set only shrinks as `delta` grows). The supremum of feasible `delta` is
//! therefore located by bisection with an LP feasibility oracle.
//!
//! The oracle does not stop at phase one. Near the supremum the phase-one
//! residual is far below any usable tolerance, so it maximizes the
//! normalization row over the remaining constraints instead and compares the
//! optimum with 1. That margin moves continuously with `delta`.

use serde::{Deserialize, Serialize};

use crate::error::{DeaError, Result};
use crate::lp::{solve, ConstraintSystem, LinearProgram, LpStatus, Relation, Sense};
use crate::models::{build_bcc_robust_feasibility, build_robust_feasibility, Dataset, ModelKind, PerturbationMask};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub lower_bracket: f64,
    pub upper_bracket: f64,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 100,
            lower_bracket: -1.0,
            upper_bracket: 1.0,
        }
    }
}

impl BisectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(DeaError::InvalidInput(format!(
                "bisection tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if !(self.lower_bracket < self.upper_bracket)
            || self.lower_bracket < -1.0
            || self.upper_bracket > 1.0
        {
            return Err(DeaError::InvalidInput(format!(
                "bisection bracket [{}, {}] must be increasing and inside [-1, 1]",
                self.lower_bracket, self.upper_bracket
            )));
        }
        let needed = ((self.upper_bracket - self.lower_bracket) / self.tolerance).log2().ceil();
        if (self.max_iterations as f64) < needed {
            return Err(DeaError::InvalidInput(format!(
                "max_iterations {} cannot reach tolerance {} (needs {needed})",
                self.max_iterations, self.tolerance
            )));
        }
        Ok(())
    }
}

/// Final bracket of a bisection run, in the unscaled `delta` of the
/// feasibility system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub feasible: f64,
    pub infeasible: f64,
    pub iterations: usize,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.feasible + self.infeasible)
    }

    /// Reported robustness level: twice the located supremum.
    pub fn delta_star(&self) -> f64 {
        2.0 * self.midpoint()
    }
}

/// A normalization row `a·w >= 1` counts as met when its best value reaches
/// `1 - MARGIN_TOL`.
pub const MARGIN_TOL: f64 = 1e-10;

/// Largest value of the leading `>= 1` row of `system` over the remaining
/// constraints (`+inf` when unbounded). The system is feasible iff this is at
/// least 1.
pub fn normalization_margin(system: &ConstraintSystem) -> Result<f64> {
    let Some((head, rest)) = system.constraints.split_first() else {
        return Err(DeaError::InvalidInput("empty constraint system".into()));
    };
    if head.relation != Relation::Ge || head.rhs != 1.0 {
        return Err(DeaError::InvalidInput(
            "the first constraint must be a '>= 1' normalization row".into(),
        ));
    }
    let lp = LinearProgram {
        sense: Sense::Maximize,
        objective: head.coeffs.clone(),
        constraints: rest.to_vec(),
        lower_bounds: system.lower_bounds.clone(),
        upper_bounds: system.upper_bounds.clone(),
    };
    let solution = solve(&lp)?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.objective_value.unwrap_or_default()),
        LpStatus::Unbounded => Ok(f64::INFINITY),
        LpStatus::Infeasible => Err(DeaError::Inconsistency(
            "zero weights violate the homogeneous constraints".into(),
        )),
    }
}

pub fn meets_normalization(system: &ConstraintSystem) -> Result<bool> {
    Ok(normalization_margin(system)? >= 1.0 - MARGIN_TOL)
}

/// Feasibility of the exact robust system of `model` at a fixed `delta`.
pub fn exact_feasible(
    dataset: &Dataset,
    test: usize,
    mask: PerturbationMask,
    model: ModelKind,
    delta: f64,
) -> Result<bool> {
    let system = match model {
        ModelKind::CcrRobustExact => build_robust_feasibility(dataset, test, mask, delta)?,
        ModelKind::BccRobustExact => {
            if !mask.is_all_vary() {
                return Err(DeaError::InvalidInput(
                    "the BCC robust models support only the all-varying mask".into(),
                ));
            }
            build_bcc_robust_feasibility(dataset, test, delta)?
        }
        other => {
            return Err(DeaError::InvalidInput(format!(
                "model '{other}' has no exact robust form"
            )))
        }
    };
    meets_normalization(&system)
}

pub fn bisect_exact_delta(
    dataset: &Dataset,
    test: usize,
    mask: PerturbationMask,
    model: ModelKind,
    config: &BisectionConfig,
) -> Result<Bracket> {
    config.validate()?;
    dataset.check_index(test)?;
    let feasible_at = |delta: f64| exact_feasible(dataset, test, mask, model, delta);

    let (mut lo, mut hi) = (config.lower_bracket, config.upper_bracket);
    if !feasible_at(lo)? {
        if !mask.is_all_vary() && lo == -1.0 {
            // with some groups fixed, even the largest admissible move may
            // not reach efficiency
            return Ok(Bracket {
                feasible: lo,
                infeasible: lo,
                iterations: 0,
            });
        }
        return Err(DeaError::Inconsistency(format!(
            "robust system for '{}' is infeasible at the lower bracket {lo}",
            dataset.dmu(test).id
        )));
    }
    if feasible_at(hi)? {
        if !mask.is_all_vary() && hi == 1.0 {
            // likewise, some fixed groups can keep a unit efficient under
            // every admissible move
            return Ok(Bracket {
                feasible: hi,
                infeasible: hi,
                iterations: 0,
            });
        }
        return Err(DeaError::Inconsistency(format!(
            "robust system for '{}' is feasible at the upper bracket {hi}",
            dataset.dmu(test).id
        )));
    }
    let mut iterations = 0;
    while hi - lo > config.tolerance && iterations < config.max_iterations {
        let mid = 0.5 * (lo + hi);
        if feasible_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let bracket = Bracket {
        feasible: lo,
        infeasible: hi,
        iterations,
    };
    let reported = bracket.delta_star();
    if !(-2.0..=2.0).contains(&reported) {
        return Err(DeaError::Inconsistency(format!(
            "exact ranking {} left [-1, 3]",
            1.0 + reported
        )));
    }
    Ok(bracket)
}

/// Reported `delta_star` of an exact model: twice the supremum of feasible
/// `delta`, located to within `config.tolerance`.
pub fn solve_exact_delta(
    dataset: &Dataset,
    test: usize,
    mask: PerturbationMask,
    model: ModelKind,
    config: &BisectionConfig,
) -> Result<f64> {
    bisect_exact_delta(dataset, test, mask, model, config).map(|b| b.delta_star())
}

/// True iff feasibility over the ascending `grid` reads true…true, false…false.
pub fn verify_monotone(
    dataset: &Dataset,
    test: usize,
    mask: PerturbationMask,
    model: ModelKind,
    grid: &[f64],
) -> Result<bool> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(DeaError::InvalidInput("monotonicity grid must be ascending".into()));
    }
    let mut seen_infeasible = false;
    for &delta in grid {
        let feasible = exact_feasible(dataset, test, mask, model, delta)?;
        if feasible && seen_infeasible {
            return Ok(false);
        }
        seen_infeasible |= !feasible;
    }
    Ok(true)
}
