//! Two-phase dense-tableau primal simplex with Bland's rule.
//!
//! Bland's rule (lowest-index entering column, lowest-index basic variable
//! among ratio-test ties) makes cycling impossible and the solve path fully
//! deterministic, so every instance has one canonical reported optimum.

use alloc::vec;
use alloc::vec::Vec;

use super::{dot, variable_assignment, SolverConfig, SolverResult};
use crate::instance::{Direction, LpInstance, Sense};

const EPS: f64 = 1e-9;

pub(crate) enum LpOutcome {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Solves a pure LP. Integrality flags, if any, are ignored here; callers
/// route integer instances through branch-and-bound.
pub fn solve_lp(lp: &LpInstance, config: &SolverConfig) -> SolverResult {
    match optimize(lp, config) {
        LpOutcome::Optimal(x) => SolverResult::optimal(dot(&lp.c, &x), variable_assignment(&x)),
        LpOutcome::Infeasible => SolverResult::infeasible(),
        LpOutcome::Unbounded => SolverResult::unbounded(),
        LpOutcome::IterationLimit => SolverResult::error(alloc::format!(
            "simplex iteration limit ({}) reached",
            config.max_simplex_iterations
        )),
    }
}

/// Core LP optimizer, shared with branch-and-bound.
pub(crate) fn optimize(lp: &LpInstance, config: &SolverConfig) -> LpOutcome {
    let n = lp.num_vars();
    let lows: Vec<f64> = (0..n).map(|j| lp.lower(j)).collect();

    // Shift to y = x - l >= 0 and collect every row over y, including
    // explicit rows for finite upper bounds.
    let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::new();
    for (i, row) in lp.a.iter().enumerate() {
        let shift: f64 = dot(row, &lows);
        rows.push((row.clone(), lp.senses[i], lp.b[i] - shift));
    }
    for j in 0..n {
        let u = lp.upper(j);
        if u.is_finite() {
            let mut unit = vec![0.0; n];
            unit[j] = 1.0;
            rows.push((unit, Sense::Le, u - lows[j]));
        }
    }

    // Standard form: nonnegative right-hand sides, slack columns for <=,
    // surplus columns for >=, artificial columns where a starting basis is
    // needed (>= and = rows).
    let m = rows.len();
    for (coeffs, sense, rhs) in rows.iter_mut() {
        if *rhs < 0.0 {
            for a in coeffs.iter_mut() {
                *a = -*a;
            }
            *rhs = -*rhs;
            *sense = match *sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }
    let n_slack = rows
        .iter()
        .filter(|(_, s, _)| matches!(s, Sense::Le | Sense::Ge))
        .count();
    let n_artificial = rows
        .iter()
        .filter(|(_, s, _)| matches!(s, Sense::Ge | Sense::Eq))
        .count();
    let cols = n + n_slack + n_artificial;

    // Tableau rows followed by the objective row; last column is the rhs.
    let mut t = vec![vec![0.0; cols + 1]; m + 1];
    let mut basis = vec![0usize; m];
    let mut artificial_start = n + n_slack;
    let mut slack_at = n;
    for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
        t[i][..n].copy_from_slice(coeffs);
        t[i][cols] = *rhs;
        match sense {
            Sense::Le => {
                t[i][slack_at] = 1.0;
                basis[i] = slack_at;
                slack_at += 1;
            }
            Sense::Ge => {
                t[i][slack_at] = -1.0;
                slack_at += 1;
                t[i][artificial_start] = 1.0;
                basis[i] = artificial_start;
                artificial_start += 1;
            }
            Sense::Eq => {
                t[i][artificial_start] = 1.0;
                basis[i] = artificial_start;
                artificial_start += 1;
            }
        }
    }

    let first_artificial = n + n_slack;
    if n_artificial > 0 {
        // Phase 1: minimize the sum of artificials.
        for j in first_artificial..cols {
            t[m][j] = 1.0;
        }
        price_out_basis(&mut t, &basis, cols, m);
        match run_simplex(&mut t, &mut basis, cols, m, cols, config.max_simplex_iterations) {
            SimplexStep::Optimal => {}
            SimplexStep::Unbounded => return LpOutcome::IterationLimit,
            SimplexStep::Limit => return LpOutcome::IterationLimit,
        }
        let phase1 = -t[m][cols];
        if phase1 > config.feasibility_tolerance {
            return LpOutcome::Infeasible;
        }
        // Kick artificials still sitting in the basis onto a structural
        // column when possible; rows where none exists are redundant and
        // keep a zero-valued artificial that phase 2 never re-enters.
        for i in 0..m {
            if basis[i] >= first_artificial {
                if let Some(c) = (0..first_artificial).find(|&c| t[i][c].abs() > EPS) {
                    pivot(&mut t, &mut basis, i, c, cols, m);
                }
            }
        }
    }

    // Phase 2: the real objective, as a minimization, over the shifted y.
    for cell in t[m].iter_mut() {
        *cell = 0.0;
    }
    for j in 0..n {
        t[m][j] = match lp.objective {
            Direction::Minimize => lp.c[j],
            Direction::Maximize => -lp.c[j],
        };
    }
    price_out_basis(&mut t, &basis, cols, m);
    match run_simplex(
        &mut t,
        &mut basis,
        cols,
        m,
        first_artificial,
        config.max_simplex_iterations,
    ) {
        SimplexStep::Optimal => {}
        SimplexStep::Unbounded => return LpOutcome::Unbounded,
        SimplexStep::Limit => return LpOutcome::IterationLimit,
    }

    let mut x = lows;
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] += t[i][cols];
        }
    }
    LpOutcome::Optimal(x)
}

/// Makes the reduced costs of basic columns zero in the objective row.
fn price_out_basis(t: &mut [Vec<f64>], basis: &[usize], cols: usize, m: usize) {
    for (i, &bv) in basis.iter().enumerate() {
        let factor = t[m][bv];
        if factor != 0.0 {
            for j in 0..=cols {
                t[m][j] -= factor * t[i][j];
            }
        }
    }
}

enum SimplexStep {
    Optimal,
    Unbounded,
    Limit,
}

/// Runs pivots until optimal; only columns below `enterable` may enter
/// (phase 2 passes the artificial boundary here).
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cols: usize,
    m: usize,
    enterable: usize,
    max_iterations: usize,
) -> SimplexStep {
    for _ in 0..max_iterations {
        let Some(enter) = (0..enterable).find(|&j| t[m][j] < -EPS) else {
            return SimplexStep::Optimal;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > EPS {
                let ratio = t[i][cols] / t[i][enter];
                let replace = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best_ratio - EPS
                            || (ratio < best_ratio + EPS && basis[i] < basis[l])
                    }
                };
                if replace {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return SimplexStep::Unbounded;
        };
        pivot(t, basis, leave, enter, cols, m);
    }
    SimplexStep::Limit
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize, cols: usize, m: usize) {
    let inv = 1.0 / t[row][col];
    for j in 0..=cols {
        t[row][j] *= inv;
    }
    for i in 0..=m {
        if i != row && t[i][col] != 0.0 {
            let factor = t[i][col];
            for j in 0..=cols {
                t[i][j] -= factor * t[row][j];
            }
        }
    }
    basis[row] = col;
}
