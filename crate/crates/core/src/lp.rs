//! Dense two-phase primal simplex.
//!
//! Every model in this crate is a small dense LP (a few dozen rows, a handful
//! of weight variables), so the solver works on a full tableau. Variables with
//! arbitrary bounds are mapped onto nonnegative columns before solving:
//!
//! * finite lower bound `l`: `x = l + s`, plus a row `s <= u - l` when `u` is finite;
//! * `-inf` lower bound with finite upper `u`: `x = u - s`;
//! * free: `x = s⁺ - s⁻`.
//!
//! Rows are then equilibrated (row max-abs, then column max-abs) and solved.
//! Dantzig pricing is used until `2·(m+n)` consecutive degenerate pivots are
//! seen, after which Bland's rule takes over for the rest of the phase.

use thiserror::Error;

/// Primal feasibility tolerance, relative to the scaled right-hand side.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Reduced-cost tolerance.
pub const OPTIMALITY_TOL: f64 = 1e-9;
/// Entries at or below this magnitude never become pivots.
pub const PIVOT_TOL: f64 = 1e-10;
/// A direction with no blocking row is reported as unbounded only when its
/// reduced cost is below `-RAY_TOL`.
pub const RAY_TOL: f64 = 1e-7;

/// Residual bound used when checking a returned solution against the
/// unscaled problem. Looser than `FEASIBILITY_TOL` because unscaling
/// multiplies round-off by the column scale factors.
const VERIFY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
    #[error("variable {index}: lower bound {lower} exceeds upper bound {upper}")]
    InvalidBounds { index: usize, lower: f64, upper: f64 },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    fn magnitude(&self, x: &[f64]) -> f64 {
        1.0 + self.rhs.abs()
            + self
                .coeffs
                .iter()
                .zip(x)
                .map(|(a, v)| (a * v).abs())
                .sum::<f64>()
    }
}

/// A system of linear constraints over bounded variables, without objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl ConstraintSystem {
    /// `num_vars` variables, all bounded to `[0, +inf)`.
    pub fn nonnegative(num_vars: usize) -> Self {
        Self {
            constraints: Vec::new(),
            lower_bounds: vec![0.0; num_vars],
            upper_bounds: vec![f64::INFINITY; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower_bounds.len()
    }

    pub fn push(&mut self, constraint: Constraint) {
        self.constraints.push(constraint);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl LinearProgram {
    /// New program with every variable bounded to `[0, +inf)`.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![0.0; n],
            upper_bounds: vec![f64::INFINITY; n],
        }
    }

    /// Zero-objective program over the given system.
    pub fn feasibility(system: &ConstraintSystem) -> Self {
        Self {
            sense: Sense::Minimize,
            objective: vec![0.0; system.num_vars()],
            constraints: system.constraints.clone(),
            lower_bounds: system.lower_bounds.clone(),
            upper_bounds: system.upper_bounds.clone(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, constraint: Constraint) {
        self.constraints.push(constraint);
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower_bounds[var] = lower;
        self.upper_bounds[var] = upper;
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower_bounds.len() != n || self.upper_bounds.len() != n {
            return Err(LpError::DimensionMismatch(format!(
                "{} objective coefficients but {} lower / {} upper bounds",
                n,
                self.lower_bounds.len(),
                self.upper_bounds.len()
            )));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(LpError::DimensionMismatch(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    row.coeffs.len()
                )));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(LpError::NonFinite(format!("constraint {i}")));
            }
        }
        for (index, (&lower, &upper)) in self.lower_bounds.iter().zip(&self.upper_bounds).enumerate() {
            if lower.is_nan() || upper.is_nan() || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
                return Err(LpError::NonFinite(format!("bounds of variable {index}")));
            }
            if lower > upper {
                return Err(LpError::InvalidBounds {
                    index,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }

    /// Largest constraint or bound violation of `x`, relative to row magnitude.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(x) / c.magnitude(x));
        let bounds = x
            .iter()
            .zip(self.lower_bounds.iter().zip(&self.upper_bounds))
            .map(|(&v, (&lo, &hi))| {
                let below = if lo.is_finite() { (lo - v).max(0.0) } else { 0.0 };
                let above = if hi.is_finite() { (v - hi).max(0.0) } else { 0.0 };
                below.max(above) / (1.0 + v.abs())
            });
        rows.chain(bounds).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective_value: Option<f64>,
    pub variable_values: Option<Vec<f64>>,
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        Self {
            status,
            objective_value: None,
            variable_values: None,
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let standard = StandardForm::build(lp);
    let outcome = Tableau::run(&standard)?;
    let iterations = outcome.iterations;
    let status = outcome.status;
    let Some(scaled) = outcome.point else {
        return Ok(LpSolution::without_point(status, iterations));
    };

    let mut x = standard.recover(&scaled);
    for (v, (&lo, &hi)) in x.iter_mut().zip(lp.lower_bounds.iter().zip(&lp.upper_bounds)) {
        // snap round-off back inside the box
        if *v < lo {
            *v = lo;
        }
        if *v > hi {
            *v = hi;
        }
    }
    let worst = lp.max_violation(&x);
    if !(worst <= VERIFY_TOL) {
        return Err(LpError::NumericFailure(format!(
            "returned point violates constraints by {worst:e}"
        )));
    }
    Ok(LpSolution {
        status,
        objective_value: Some(lp.evaluate(&x)),
        variable_values: Some(x),
        iterations,
    })
}

/// True iff the system admits a point; equivalent to `solve` with a zero
/// objective returning `Optimal`.
pub fn is_feasible(system: &ConstraintSystem) -> Result<bool, LpError> {
    let lp = LinearProgram::feasibility(system);
    lp.validate()?;
    let standard = StandardForm::build(&lp);
    let outcome = Tableau::run(&standard)?;
    Ok(outcome.status == LpStatus::Optimal)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Shifted { col: usize, offset: f64 },
    Mirrored { col: usize, offset: f64 },
    Split { pos: usize, neg: usize },
}

/// `min cost·s  s.t.  rows, s >= 0` with every rhs nonnegative, equilibrated.
struct StandardForm {
    rows: Vec<Vec<f64>>,
    relations: Vec<Relation>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    col_scale: Vec<f64>,
    maps: Vec<VarMap>,
    /// Rows that reduced to `0 rel b` with the relation violated.
    trivially_infeasible: bool,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut maps = Vec::with_capacity(lp.num_vars());
        let mut ncols = 0;
        let mut bound_rows: Vec<(usize, f64)> = Vec::new();
        for (&lo, &hi) in lp.lower_bounds.iter().zip(&lp.upper_bounds) {
            if lo.is_finite() {
                maps.push(VarMap::Shifted {
                    col: ncols,
                    offset: lo,
                });
                if hi.is_finite() {
                    bound_rows.push((ncols, hi - lo));
                }
                ncols += 1;
            } else if hi.is_finite() {
                maps.push(VarMap::Mirrored {
                    col: ncols,
                    offset: hi,
                });
                ncols += 1;
            } else {
                maps.push(VarMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }

        let sign = match lp.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; ncols];
        for (c, map) in lp.objective.iter().zip(&maps) {
            match *map {
                VarMap::Shifted { col, .. } => cost[col] += sign * c,
                VarMap::Mirrored { col, .. } => cost[col] -= sign * c,
                VarMap::Split { pos, neg } => {
                    cost[pos] += sign * c;
                    cost[neg] -= sign * c;
                }
            }
        }

        let mut rows = Vec::new();
        let mut relations = Vec::new();
        let mut rhs = Vec::new();
        let mut trivially_infeasible = false;
        let mut push_row = |mut row: Vec<f64>, mut rel: Relation, mut b: f64| {
            let max = row.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
            if max == 0.0 {
                let ok = match rel {
                    Relation::Le => b >= -FEASIBILITY_TOL,
                    Relation::Ge => b <= FEASIBILITY_TOL,
                    Relation::Eq => b.abs() <= FEASIBILITY_TOL,
                };
                trivially_infeasible |= !ok;
                return;
            }
            for a in row.iter_mut() {
                *a /= max;
            }
            b /= max;
            if b < 0.0 {
                for a in row.iter_mut() {
                    *a = -*a;
                }
                b = -b;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push(row);
            relations.push(rel);
            rhs.push(b);
        };

        for c in &lp.constraints {
            let mut row = vec![0.0; ncols];
            let mut b = c.rhs;
            for (a, map) in c.coeffs.iter().zip(&maps) {
                match *map {
                    VarMap::Shifted { col, offset } => {
                        row[col] += a;
                        b -= a * offset;
                    }
                    VarMap::Mirrored { col, offset } => {
                        row[col] -= a;
                        b -= a * offset;
                    }
                    VarMap::Split { pos, neg } => {
                        row[pos] += a;
                        row[neg] -= a;
                    }
                }
            }
            push_row(row, c.relation, b);
        }
        for (col, width) in bound_rows {
            let mut row = vec![0.0; ncols];
            row[col] = 1.0;
            push_row(row, Relation::Le, width);
        }

        let mut col_scale = vec![1.0; ncols];
        for (j, scale) in col_scale.iter_mut().enumerate() {
            let max = rows.iter().fold(0.0_f64, |m, r| m.max(r[j].abs()));
            if max > 0.0 {
                *scale = 1.0 / max;
            }
        }
        for row in rows.iter_mut() {
            for (a, s) in row.iter_mut().zip(&col_scale) {
                *a *= s;
            }
        }
        for (c, s) in cost.iter_mut().zip(&col_scale) {
            *c *= s;
        }

        Self {
            rows,
            relations,
            rhs,
            cost,
            col_scale,
            maps,
            trivially_infeasible,
        }
    }

    fn ncols(&self) -> usize {
        self.cost.len()
    }

    fn recover(&self, scaled: &[f64]) -> Vec<f64> {
        let s = |j: usize| scaled[j] * self.col_scale[j];
        self.maps
            .iter()
            .map(|map| match *map {
                VarMap::Shifted { col, offset } => offset + s(col),
                VarMap::Mirrored { col, offset } => offset - s(col),
                VarMap::Split { pos, neg } => s(pos) - s(neg),
            })
            .collect()
    }
}

struct Outcome {
    status: LpStatus,
    point: Option<Vec<f64>>,
    iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Row-major, `width` entries per row, rhs in the last column.
    data: Vec<f64>,
    width: usize,
    nrows: usize,
    kinds: Vec<ColumnKind>,
    basis: Vec<usize>,
    /// Reduced costs, with `-objective` in the last slot.
    reduced: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    rhs_scale: f64,
}

impl Tableau {
    fn run(form: &StandardForm) -> Result<Outcome, LpError> {
        if form.trivially_infeasible {
            return Ok(Outcome {
                status: LpStatus::Infeasible,
                point: None,
                iterations: 0,
            });
        }
        let mut t = Self::initial(form);
        t.phase_one()?;
        let infeasibility = -t.reduced[t.width - 1];
        if infeasibility > FEASIBILITY_TOL * t.rhs_scale {
            return Ok(Outcome {
                status: LpStatus::Infeasible,
                point: None,
                iterations: t.iterations,
            });
        }
        t.drive_out_artificials();
        t.load_cost(&form.cost);
        let end = t.optimize()?;
        let status = match end {
            PhaseEnd::Optimal => LpStatus::Optimal,
            PhaseEnd::Unbounded => LpStatus::Unbounded,
        };
        let point = (status == LpStatus::Optimal).then(|| t.primal(form.ncols()));
        Ok(Outcome {
            status,
            point,
            iterations: t.iterations,
        })
    }

    fn initial(form: &StandardForm) -> Self {
        let n = form.ncols();
        let m = form.rows.len();
        let mut kinds = vec![ColumnKind::Structural; n];
        let mut slack_of = vec![None; m];
        let mut art_of = vec![None; m];
        for (i, rel) in form.relations.iter().enumerate() {
            match rel {
                Relation::Le | Relation::Ge => {
                    slack_of[i] = Some(kinds.len());
                    kinds.push(ColumnKind::Slack);
                }
                Relation::Eq => {}
            }
        }
        for (i, rel) in form.relations.iter().enumerate() {
            if *rel != Relation::Le {
                art_of[i] = Some(kinds.len());
                kinds.push(ColumnKind::Artificial);
            }
        }
        let width = kinds.len() + 1;
        let mut data = vec![0.0; m * width];
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            let row = &mut data[i * width..(i + 1) * width];
            row[..n].copy_from_slice(&form.rows[i]);
            row[width - 1] = form.rhs[i];
            match form.relations[i] {
                Relation::Le => {
                    let s = slack_of[i].unwrap();
                    row[s] = 1.0;
                    basis.push(s);
                }
                Relation::Ge => {
                    row[slack_of[i].unwrap()] = -1.0;
                    let a = art_of[i].unwrap();
                    row[a] = 1.0;
                    basis.push(a);
                }
                Relation::Eq => {
                    let a = art_of[i].unwrap();
                    row[a] = 1.0;
                    basis.push(a);
                }
            }
        }
        let rhs_scale = 1.0 + form.rhs.iter().fold(0.0_f64, |m, b| m.max(*b));
        let max_iterations = 50 * (m + width) + 1000;
        Self {
            data,
            width,
            nrows: m,
            kinds,
            basis,
            reduced: vec![0.0; width],
            iterations: 0,
            max_iterations,
            rhs_scale,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.width - 1]
    }

    fn phase_one(&mut self) -> Result<(), LpError> {
        let mut reduced = vec![0.0; self.width];
        for (j, kind) in self.kinds.iter().enumerate() {
            if *kind == ColumnKind::Artificial {
                reduced[j] = 1.0;
            }
        }
        for i in 0..self.nrows {
            if self.kinds[self.basis[i]] == ColumnKind::Artificial {
                let row = &self.data[i * self.width..(i + 1) * self.width];
                for (r, a) in reduced.iter_mut().zip(row) {
                    *r -= a;
                }
            }
        }
        self.reduced = reduced;
        match self.optimize()? {
            PhaseEnd::Optimal => Ok(()),
            PhaseEnd::Unbounded => Err(LpError::NumericFailure(
                "phase one reported an unbounded ray".into(),
            )),
        }
    }

    /// Pivots zero-level artificials out of the basis; rows with no usable
    /// pivot are linearly dependent and are dropped.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.nrows {
            if self.kinds[self.basis[i]] != ColumnKind::Artificial {
                i += 1;
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.width - 1 {
                if self.kinds[j] == ColumnKind::Artificial {
                    continue;
                }
                let a = self.at(i, j).abs();
                if a > PIVOT_TOL && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => {
                    self.data[i * self.width + self.width - 1] = 0.0;
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.data.drain(i * self.width..(i + 1) * self.width);
                    self.basis.remove(i);
                    self.nrows -= 1;
                }
            }
        }
    }

    fn load_cost(&mut self, cost: &[f64]) {
        let mut reduced = vec![0.0; self.width];
        reduced[..cost.len()].copy_from_slice(cost);
        for i in 0..self.nrows {
            let cb = reduced_cost_of(cost, self.basis[i]);
            if cb != 0.0 {
                let row = &self.data[i * self.width..(i + 1) * self.width];
                for (r, a) in reduced.iter_mut().zip(row) {
                    *r -= cb * a;
                }
            }
        }
        self.reduced = reduced;
    }

    fn optimize(&mut self) -> Result<PhaseEnd, LpError> {
        let m = self.nrows;
        let degenerate_limit = 2 * (m + self.width - 1);
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            let Some(enter) = self.entering(bland) else {
                return Ok(PhaseEnd::Optimal);
            };
            let Some(leave) = self.leaving(enter) else {
                if self.reduced[enter] > -RAY_TOL {
                    // rounding noise on a zero-cost direction, not a ray
                    self.reduced[enter] = 0.0;
                    continue;
                }
                return Ok(PhaseEnd::Unbounded);
            };
            if self.iterations >= self.max_iterations {
                return Err(LpError::NumericFailure(format!(
                    "iteration limit {} reached",
                    self.max_iterations
                )));
            }
            let step = self.rhs(leave) / self.at(leave, enter);
            if step <= FEASIBILITY_TOL {
                degenerate_run += 1;
                if degenerate_run > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(leave, enter);
            self.iterations += 1;
            if !self.reduced[self.width - 1].is_finite() {
                return Err(LpError::NumericFailure("non-finite objective".into()));
            }
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.width - 1 {
            if self.kinds[j] == ColumnKind::Artificial && self.basis.iter().all(|&b| b != j) {
                // artificials never re-enter once they leave
                continue;
            }
            let d = self.reduced[j];
            if d < -OPTIMALITY_TOL {
                if bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn leaving(&self, enter: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.nrows {
            let a = self.at(i, enter);
            if a > PIVOT_TOL {
                let ratio = self.rhs(i).max(0.0) / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((k, r)) => {
                        if ratio < r - 1e-12 * (1.0 + r)
                            || (ratio <= r + 1e-12 * (1.0 + r) && self.basis[i] < self.basis[k])
                        {
                            Some((i, ratio))
                        } else {
                            Some((k, r))
                        }
                    }
                };
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col);
        {
            let r = &mut self.data[row * w..(row + 1) * w];
            for a in r.iter_mut() {
                *a /= p;
            }
            r[col] = 1.0;
        }
        let pivot_row: Vec<f64> = self.data[row * w..(row + 1) * w].to_vec();
        for i in 0..self.nrows {
            if i == row {
                continue;
            }
            let f = self.data[i * w + col];
            if f != 0.0 {
                let r = &mut self.data[i * w..(i + 1) * w];
                for (a, pr) in r.iter_mut().zip(&pivot_row) {
                    *a -= f * pr;
                }
                r[col] = 0.0;
            }
        }
        let f = self.reduced[col];
        if f != 0.0 {
            for (a, pr) in self.reduced.iter_mut().zip(&pivot_row) {
                *a -= f * pr;
            }
            self.reduced[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn primal(&self, ncols: usize) -> Vec<f64> {
        let mut x = vec![0.0; ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < ncols {
                x[b] = self.rhs(i).max(0.0);
            }
        }
        x
    }
}

fn reduced_cost_of(cost: &[f64], col: usize) -> f64 {
    cost.get(col).copied().unwrap_or(0.0)
}
