//! DEA data types and the LP / feasibility-system builders for every model.
//!
//! All builders use the same column layout: output weights `u` first
//! (`output_dim` columns), then input weights `v` (`input_dim` columns), then
//! model-specific extras in this order: the BCC intercept `v0` (free), the
//! robustness level `delta`.
//!
//! Robust builders always drop the test DMU from its own peer set. Classical
//! builders take an `include_self` switch; with the test row present the
//! optimum is capped at 1, without it the result is a super-efficiency score.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DeaError, Result};
use crate::lp::{Constraint, ConstraintSystem, LinearProgram, Sense};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmuRecord {
    pub id: String,
    pub inputs: Vec<f64>,
    pub outputs: Vec<f64>,
}

impl DmuRecord {
    pub fn new(id: impl Into<String>, inputs: Vec<f64>, outputs: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            inputs,
            outputs,
        }
    }
}

/// Validated input/output table. Row order is significant: it is the
/// tie-break order in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    dmus: Vec<DmuRecord>,
    input_dim: usize,
    output_dim: usize,
}

impl Dataset {
    pub fn new(dmus: Vec<DmuRecord>) -> Result<Self> {
        let first = dmus
            .first()
            .ok_or_else(|| DeaError::InvalidInput("dataset has no DMUs".into()))?;
        let input_dim = first.inputs.len();
        let output_dim = first.outputs.len();
        if input_dim == 0 || output_dim == 0 {
            return Err(DeaError::InvalidInput(
                "at least one input and one output column are required".into(),
            ));
        }
        let mut seen = HashSet::new();
        for dmu in &dmus {
            if !seen.insert(dmu.id.as_str()) {
                return Err(DeaError::InvalidInput(format!("duplicate DMU id '{}'", dmu.id)));
            }
            if dmu.inputs.len() != input_dim || dmu.outputs.len() != output_dim {
                return Err(DeaError::InvalidInput(format!(
                    "DMU '{}' has {} inputs / {} outputs, expected {input_dim} / {output_dim}",
                    dmu.id,
                    dmu.inputs.len(),
                    dmu.outputs.len()
                )));
            }
            if let Some(bad) = dmu
                .inputs
                .iter()
                .chain(&dmu.outputs)
                .find(|v| !v.is_finite() || **v < 0.0)
            {
                return Err(DeaError::InvalidInput(format!(
                    "DMU '{}' has invalid value {bad}; data must be finite and nonnegative",
                    dmu.id
                )));
            }
            if dmu.inputs.iter().all(|v| *v == 0.0) {
                return Err(DeaError::DegenerateDmu {
                    id: dmu.id.clone(),
                    reason: "all inputs are zero".into(),
                });
            }
            if dmu.outputs.iter().all(|v| *v == 0.0) {
                return Err(DeaError::DegenerateDmu {
                    id: dmu.id.clone(),
                    reason: "all outputs are zero".into(),
                });
            }
        }
        Ok(Self {
            dmus,
            input_dim,
            output_dim,
        })
    }

    pub fn len(&self) -> usize {
        self.dmus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dmus.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn dmus(&self) -> &[DmuRecord] {
        &self.dmus
    }

    pub fn dmu(&self, index: usize) -> &DmuRecord {
        &self.dmus[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.dmus.iter().position(|d| d.id == id)
    }

    pub fn into_dmus(self) -> Vec<DmuRecord> {
        self.dmus
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(DeaError::IndexOutOfRange {
                index,
                count: self.len(),
            })
        }
    }

    /// Copy with one input column multiplied by `factor` (a change of units).
    pub fn with_scaled_input(&self, column: usize, factor: f64) -> Result<Self> {
        let mut dmus = self.dmus.clone();
        for d in &mut dmus {
            d.inputs[column] *= factor;
        }
        Self::new(dmus)
    }

    pub fn with_scaled_output(&self, column: usize, factor: f64) -> Result<Self> {
        let mut dmus = self.dmus.clone();
        for d in &mut dmus {
            d.outputs[column] *= factor;
        }
        Self::new(dmus)
    }

    fn peers(&self, test: usize) -> impl Iterator<Item = &DmuRecord> {
        self.dmus
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != test)
            .map(|(_, d)| d)
    }

    fn peer_set(&self, test: usize, include_self: bool) -> impl Iterator<Item = &DmuRecord> {
        self.dmus
            .iter()
            .enumerate()
            .filter(move |(i, _)| include_self || *i != test)
            .map(|(_, d)| d)
    }
}

/// Which data groups may vary in the robust models. "Test" is the DMU being
/// ranked, "peer" every other DMU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerturbationMask {
    pub vary_test_inputs: bool,
    pub vary_test_outputs: bool,
    pub vary_peer_inputs: bool,
    pub vary_peer_outputs: bool,
}

impl Default for PerturbationMask {
    fn default() -> Self {
        Self::ALL
    }
}

impl PerturbationMask {
    pub const ALL: Self = Self {
        vary_test_inputs: true,
        vary_test_outputs: true,
        vary_peer_inputs: true,
        vary_peer_outputs: true,
    };

    /// Inputs of every DMU held fixed; only outputs vary.
    pub const INPUTS_FIXED: Self = Self {
        vary_test_inputs: false,
        vary_test_outputs: true,
        vary_peer_inputs: false,
        vary_peer_outputs: true,
    };

    pub fn is_all_vary(&self) -> bool {
        *self == Self::ALL
    }

    pub fn is_empty(&self) -> bool {
        !(self.vary_test_inputs || self.vary_test_outputs || self.vary_peer_inputs || self.vary_peer_outputs)
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            Err(DeaError::InvalidInput(
                "perturbation mask fixes every data group".into(),
            ))
        } else {
            Ok(())
        }
    }

    /// Linearization steps landing on the test-output row: one each from the
    /// test outputs and (through the `u` substitution) the peer inputs.
    pub fn output_steps(&self) -> u32 {
        self.vary_test_outputs as u32 + self.vary_peer_inputs as u32
    }

    /// Linearization steps landing on the test-input row.
    pub fn input_steps(&self) -> u32 {
        self.vary_test_inputs as u32 + self.vary_peer_outputs as u32
    }
}

impl fmt::Display for PerturbationMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_all_vary() {
            return f.write_str("all");
        }
        let names = [
            (self.vary_test_inputs, "inputs"),
            (self.vary_test_outputs, "outputs"),
            (self.vary_peer_inputs, "peers-inputs"),
            (self.vary_peer_outputs, "peers-outputs"),
        ];
        let varying: Vec<&str> = names.iter().filter(|(on, _)| *on).map(|(_, n)| *n).collect();
        write!(f, "{}", varying.join("+"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    CcrClassical,
    CcrRobustLp,
    CcrRobustExact,
    BccClassical,
    BccRobustLp,
    BccRobustExact,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::CcrClassical,
        ModelKind::CcrRobustLp,
        ModelKind::CcrRobustExact,
        ModelKind::BccClassical,
        ModelKind::BccRobustLp,
        ModelKind::BccRobustExact,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::CcrClassical => "ccr",
            ModelKind::CcrRobustLp => "robust-lp",
            ModelKind::CcrRobustExact => "robust-exact",
            ModelKind::BccClassical => "bcc",
            ModelKind::BccRobustLp => "bcc-robust-lp",
            ModelKind::BccRobustExact => "bcc-robust-exact",
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, ModelKind::CcrClassical | ModelKind::BccClassical)
    }

    pub fn is_robust_lp(&self) -> bool {
        matches!(self, ModelKind::CcrRobustLp | ModelKind::BccRobustLp)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ModelKind::CcrRobustExact | ModelKind::BccRobustExact)
    }

    pub fn is_bcc(&self) -> bool {
        matches!(
            self,
            ModelKind::BccClassical | ModelKind::BccRobustLp | ModelKind::BccRobustExact
        )
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = DeaError;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| DeaError::InvalidInput(format!("unknown model '{s}'")))
    }
}

impl Serialize for ModelKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Factor between the optimum of a robust model's program and the reported
/// `delta_star`.
///
/// The all-vary LP is already in the rescaled form, so its optimum is
/// reported as is. Partial-mask LPs and both exact models report double.
pub fn scale_factor(model: ModelKind, mask: PerturbationMask) -> f64 {
    match model {
        ModelKind::CcrRobustLp | ModelKind::BccRobustLp if mask.is_all_vary() => 1.0,
        ModelKind::CcrClassical | ModelKind::BccClassical => 1.0,
        _ => 2.0,
    }
}

fn weights_row(output_weights: &[f64], input_weights: &[f64], extra: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(output_weights.len() + input_weights.len() + extra);
    row.extend_from_slice(output_weights);
    row.extend_from_slice(input_weights);
    row.resize(row.len() + extra, 0.0);
    row
}

fn scaled(values: &[f64], factor: f64) -> Vec<f64> {
    values.iter().map(|v| v * factor).collect()
}

fn zeros(n: usize) -> Vec<f64> {
    vec![0.0; n]
}

fn check_delta(delta: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(DeaError::DeltaOutOfRange(delta))
    }
}

/// `max y0·u  s.t.  x0·v <= 1,  Y u - X v <= 0,  u, v >= 0`.
pub fn build_ccr_classical(dataset: &Dataset, test: usize, include_self: bool) -> Result<LinearProgram> {
    dataset.check_index(test)?;
    let (n1, n2) = (dataset.input_dim(), dataset.output_dim());
    let dmu = dataset.dmu(test);
    let mut lp = LinearProgram::new(Sense::Maximize, weights_row(&dmu.outputs, &zeros(n1), 0));
    lp.push(Constraint::le(weights_row(&zeros(n2), &dmu.inputs, 0), 1.0));
    for peer in dataset.peer_set(test, include_self) {
        lp.push(Constraint::le(weights_row(&peer.outputs, &scaled(&peer.inputs, -1.0), 0), 0.0));
    }
    Ok(lp)
}

/// Linearized robust program over `(u, v, delta)`, maximizing `delta`.
///
/// With every group varying this is
/// `y0·u >= 1 + δ,  x0·v <= 1 - δ,  Y u - X v <= 0`.
/// With a partial mask the row coefficients of `δ` count the linearization
/// steps that land on each row (see [`PerturbationMask::output_steps`]), `δ`
/// is capped at 1 and the optimum is reported doubled.
pub fn build_robust_lp(dataset: &Dataset, test: usize, mask: PerturbationMask) -> Result<LinearProgram> {
    dataset.check_index(test)?;
    mask.validate()?;
    let (n1, n2) = (dataset.input_dim(), dataset.output_dim());
    let (out_steps, in_steps) = if mask.is_all_vary() {
        (1.0, 1.0)
    } else {
        (mask.output_steps() as f64, mask.input_steps() as f64)
    };
    let delta = n1 + n2;
    let dmu = dataset.dmu(test);

    let mut objective = zeros(n1 + n2 + 1);
    objective[delta] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    let upper = if mask.is_all_vary() { f64::INFINITY } else { 1.0 };
    lp.set_bounds(delta, f64::NEG_INFINITY, upper);

    let mut row = weights_row(&dmu.outputs, &zeros(n1), 1);
    row[delta] = -out_steps;
    lp.push(Constraint::ge(row, 1.0));
    let mut row = weights_row(&zeros(n2), &dmu.inputs, 1);
    row[delta] = in_steps;
    lp.push(Constraint::le(row, 1.0));
    for peer in dataset.peers(test) {
        lp.push(Constraint::le(weights_row(&peer.outputs, &scaled(&peer.inputs, -1.0), 1), 0.0));
    }
    Ok(lp)
}

/// The exact robust system at a fixed `delta` over `(u, v) >= 0`:
/// `(1-δ) y0·u >= 1,  (1+δ) x0·v <= 1,  (1+δ) Y u - (1-δ) X v <= 0`,
/// where each factor is present only for groups the mask lets vary.
pub fn build_robust_feasibility(
    dataset: &Dataset,
    test: usize,
    mask: PerturbationMask,
    delta: f64,
) -> Result<ConstraintSystem> {
    dataset.check_index(test)?;
    mask.validate()?;
    check_delta(delta)?;
    let (n1, n2) = (dataset.input_dim(), dataset.output_dim());
    let factor = |vary: bool, sign: f64| if vary { 1.0 + sign * delta } else { 1.0 };
    let test_out = factor(mask.vary_test_outputs, -1.0);
    let test_in = factor(mask.vary_test_inputs, 1.0);
    let peer_out = factor(mask.vary_peer_outputs, 1.0);
    let peer_in = factor(mask.vary_peer_inputs, -1.0);
    let dmu = dataset.dmu(test);

    let mut system = ConstraintSystem::nonnegative(n1 + n2);
    system.push(Constraint::ge(weights_row(&scaled(&dmu.outputs, test_out), &zeros(n1), 0), 1.0));
    system.push(Constraint::le(weights_row(&zeros(n2), &scaled(&dmu.inputs, test_in), 0), 1.0));
    for peer in dataset.peers(test) {
        system.push(Constraint::le(
            weights_row(&scaled(&peer.outputs, peer_out), &scaled(&peer.inputs, -peer_in), 0),
            0.0,
        ));
    }
    Ok(system)
}

/// `y0·u >= 1, x0·v <= 1, Y u - X v <= 0` with the test DMU excluded from
/// the peers: feasible iff the test DMU is efficient.
pub fn build_efficiency_system(dataset: &Dataset, test: usize) -> Result<ConstraintSystem> {
    build_robust_feasibility(dataset, test, PerturbationMask::ALL, 0.0)
}

/// `max y0·u - v0  s.t.  x0·v <= 1,  Y u - X v - v0 <= 0`, `v0` free.
pub fn build_bcc_classical(dataset: &Dataset, test: usize, include_self: bool) -> Result<LinearProgram> {
    dataset.check_index(test)?;
    let (n1, n2) = (dataset.input_dim(), dataset.output_dim());
    let v0 = n1 + n2;
    let dmu = dataset.dmu(test);
    let mut objective = weights_row(&dmu.outputs, &zeros(n1), 1);
    objective[v0] = -1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    lp.set_bounds(v0, f64::NEG_INFINITY, f64::INFINITY);
    lp.push(Constraint::le(weights_row(&zeros(n2), &dmu.inputs, 1), 1.0));
    for peer in dataset.peer_set(test, include_self) {
        let mut row = weights_row(&peer.outputs, &scaled(&peer.inputs, -1.0), 1);
        row[v0] = -1.0;
        lp.push(Constraint::le(row, 0.0));
    }
    Ok(lp)
}

/// `max δ  s.t.  y0·u - v0 >= 1 + δ,  x0·v <= 1 - δ,  Y u - X v - v0 <= 0`
/// over `(u, v, v0, δ)` with `v0` and `δ` free.
pub fn build_bcc_robust_lp(dataset: &Dataset, test: usize) -> Result<LinearProgram> {
    dataset.check_index(test)?;
    let (n1, n2) = (dataset.input_dim(), dataset.output_dim());
    let (v0, delta) = (n1 + n2, n1 + n2 + 1);
    let dmu = dataset.dmu(test);

    let mut objective = zeros(n1 + n2 + 2);
    objective[delta] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    lp.set_bounds(v0, f64::NEG_INFINITY, f64::INFINITY);
    lp.set_bounds(delta, f64::NEG_INFINITY, f64::INFINITY);

    let mut row = weights_row(&dmu.outputs, &zeros(n1), 2);
    row[v0] = -1.0;
    row[delta] = -1.0;
    lp.push(Constraint::ge(row, 1.0));
    let mut row = weights_row(&zeros(n2), &dmu.inputs, 2);
    row[delta] = 1.0;
    lp.push(Constraint::le(row, 1.0));
    for peer in dataset.peers(test) {
        let mut row = weights_row(&peer.outputs, &scaled(&peer.inputs, -1.0), 2);
        row[v0] = -1.0;
        lp.push(Constraint::le(row, 0.0));
    }
    Ok(lp)
}

/// Exact robust BCC system at fixed `delta` over `(u, v, v0)`:
/// `(1-δ) y0·u - v0 >= 1,  (1+δ) x0·v <= 1,  (1+δ) Y u - (1-δ) X v - v0 <= 0`.
pub fn build_bcc_robust_feasibility(dataset: &Dataset, test: usize, delta: f64) -> Result<ConstraintSystem> {
    dataset.check_index(test)?;
    check_delta(delta)?;
    let (n1, n2) = (dataset.input_dim(), dataset.output_dim());
    let v0 = n1 + n2;
    let dmu = dataset.dmu(test);

    let mut system = ConstraintSystem::nonnegative(n1 + n2 + 1);
    system.lower_bounds[v0] = f64::NEG_INFINITY;
    let mut row = weights_row(&scaled(&dmu.outputs, 1.0 - delta), &zeros(n1), 1);
    row[v0] = -1.0;
    system.push(Constraint::ge(row, 1.0));
    system.push(Constraint::le(weights_row(&zeros(n2), &scaled(&dmu.inputs, 1.0 + delta), 1), 1.0));
    for peer in dataset.peers(test) {
        let mut row = weights_row(&scaled(&peer.outputs, 1.0 + delta), &scaled(&peer.inputs, -(1.0 - delta)), 1);
        row[v0] = -1.0;
        system.push(Constraint::le(row, 0.0));
    }
    Ok(system)
}
