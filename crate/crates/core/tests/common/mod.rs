#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust_dea::lp::{solve, Constraint, LinearProgram, LpStatus, Relation, Sense};

/// Random LP with 1 to 6 boxed variables and 1 to 6 mixed constraints. Most
/// right-hand sides are set around a random interior point so the instance
/// is feasible; the rest are arbitrary.
pub fn random_bounded_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let n = rng.random_range(1..=6);
    let m = rng.random_range(1..=6);
    let sense = if rng.random::<bool>() { Sense::Maximize } else { Sense::Minimize };
    let objective = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let mut lp = LinearProgram::new(sense, objective);
    let mut anchor = Vec::with_capacity(n);
    for j in 0..n {
        let lo: f64 = rng.random_range(-3.0..1.0);
        let hi = lo + rng.random_range(0.5..4.0);
        lp.set_bounds(j, lo, hi);
        anchor.push(rng.random_range(lo..hi));
    }
    let mut equalities = 0;
    for _ in 0..m {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let at: f64 = coeffs.iter().zip(&anchor).map(|(a, x)| a * x).sum();
        let pick: f64 = rng.random();
        let relation = if pick < 0.15 && equalities + 1 < n {
            equalities += 1;
            Relation::Eq
        } else if pick < 0.55 {
            Relation::Ge
        } else {
            Relation::Le
        };
        let rhs = if rng.random::<f64>() < 0.85 {
            match relation {
                Relation::Eq => at,
                Relation::Le => at + rng.random_range(0.0..3.0),
                Relation::Ge => at - rng.random_range(0.0..3.0),
            }
        } else {
            rng.random_range(-10.0..10.0)
        };
        lp.push(Constraint::new(coeffs, relation, rhs));
    }
    lp
}

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &k| a[i][col].abs().total_cmp(&a[k][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..n {
            if n - i < k - acc.len() {
                break;
            }
            acc.push(i);
            go(i + 1, n, k, acc, f);
            acc.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Best objective over all feasible vertices, `None` if there is none. The
/// feasible set is a polytope, so a nonempty one always has a vertex.
pub fn brute_force_optimum(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let mut fixed: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut optional: Vec<(Vec<f64>, f64)> = Vec::new();
    for c in &lp.constraints {
        let plane = (c.coeffs.clone(), c.rhs);
        if c.relation == Relation::Eq {
            fixed.push(plane);
        } else {
            optional.push(plane);
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        optional.push((e.clone(), lp.lower_bounds[j]));
        optional.push((e, lp.upper_bounds[j]));
    }
    if fixed.len() > n {
        return None;
    }
    let feasible = |x: &[f64]| {
        lp.constraints.iter().all(|c| c.violation(x) <= 1e-9 * (1.0 + c.rhs.abs()))
            && x.iter()
                .zip(lp.lower_bounds.iter().zip(&lp.upper_bounds))
                .all(|(v, (lo, hi))| *v >= lo - 1e-9 && *v <= hi + 1e-9)
    };
    let mut best: Option<f64> = None;
    combinations(optional.len(), n - fixed.len(), &mut |pick| {
        let planes: Vec<&(Vec<f64>, f64)> = fixed.iter().chain(pick.iter().map(|&i| &optional[i])).collect();
        let a = planes.iter().map(|p| p.0.clone()).collect();
        let b = planes.iter().map(|p| p.1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let v = lp.evaluate(&x);
                best = Some(match (best, lp.sense) {
                    (None, _) => v,
                    (Some(b), Sense::Maximize) => b.max(v),
                    (Some(b), Sense::Minimize) => b.min(v),
                });
            }
        }
    });
    best
}

pub struct OracleRun {
    pub instances: usize,
    pub optimal: usize,
    pub infeasible: usize,
    pub max_error: f64,
    pub mismatches: Vec<String>,
}

/// Solves `count` random bounded LPs and compares each against vertex
/// enumeration with absolute tolerance `tol`.
pub fn run_lp_oracle(count: usize, seed: u64, tol: f64) -> OracleRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = OracleRun {
        instances: count,
        optimal: 0,
        infeasible: 0,
        max_error: 0.0,
        mismatches: Vec::new(),
    };
    for k in 0..count {
        let lp = random_bounded_lp(&mut rng);
        let expected = brute_force_optimum(&lp);
        let got = solve(&lp);
        match (&got, expected) {
            (Ok(s), Some(v)) if s.status == LpStatus::Optimal => {
                run.optimal += 1;
                let err = (s.objective_value.unwrap() - v).abs();
                run.max_error = run.max_error.max(err);
                if err > tol {
                    run.mismatches.push(format!("#{k}: solver {:?} vs vertices {v}", s.objective_value));
                }
            }
            (Ok(s), None) if s.status == LpStatus::Infeasible => run.infeasible += 1,
            _ => run.mismatches.push(format!("#{k}: solver {got:?} vs vertices {expected:?}")),
        }
    }
    run
}
