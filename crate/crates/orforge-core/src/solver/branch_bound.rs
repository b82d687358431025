//! Depth-first branch-and-bound over LP relaxations for IP and MILP.
//!
//! Branching picks the most fractional integer variable (lowest index on
//! ties) and explores the floor child first, so the search order and the
//! reported optimum are canonical.

use alloc::vec;
use alloc::vec::Vec;

use super::simplex::{optimize, LpOutcome};
use super::{dot, variable_assignment, SolverConfig, SolverResult, INTEGRALITY_TOLERANCE};
use crate::instance::{Direction, LpInstance};
use crate::num;

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Solves an instance with at least one integrality flag set.
pub fn solve_milp(lp: &LpInstance, config: &SolverConfig) -> SolverResult {
    let n = lp.num_vars();
    let root = Node {
        lower: (0..n).map(|j| lp.lower(j)).collect(),
        upper: (0..n).map(|j| lp.upper(j)).collect(),
    };
    let mut stack = vec![root];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut nodes = 0usize;

    while let Some(node) = stack.pop() {
        nodes += 1;
        if nodes > config.max_bnb_nodes {
            return SolverResult::error(alloc::format!(
                "branch-and-bound node limit ({}) reached",
                config.max_bnb_nodes
            ));
        }
        let relaxation = LpInstance {
            objective: lp.objective,
            c: lp.c.clone(),
            a: lp.a.clone(),
            senses: lp.senses.clone(),
            b: lp.b.clone(),
            lower_bounds: node.lower.clone(),
            upper_bounds: node.upper.clone(),
            integrality: vec![],
        };
        let x = match optimize(&relaxation, config) {
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => {
                // Only the root can be unbounded; children merely tighten
                // bounds on an already-bounded relaxation.
                let mut result = SolverResult::unbounded();
                result.message = Some("LP relaxation is unbounded".into());
                return result;
            }
            LpOutcome::IterationLimit => {
                return SolverResult::error(alloc::format!(
                    "simplex iteration limit ({}) reached inside branch-and-bound",
                    config.max_simplex_iterations
                ))
            }
            LpOutcome::Optimal(x) => x,
        };
        let bound = dot(&lp.c, &x);
        if let Some((incumbent, _)) = &best {
            let no_better = match lp.objective {
                Direction::Maximize => bound <= incumbent + 1e-9,
                Direction::Minimize => bound >= incumbent - 1e-9,
            };
            if no_better {
                continue;
            }
        }

        let mut branch: Option<(usize, f64)> = None;
        for j in 0..n {
            if lp.is_integer(j) {
                let frac = (x[j] - num::round(x[j])).abs();
                if frac > INTEGRALITY_TOLERANCE {
                    match branch {
                        Some((_, best_frac)) if frac <= best_frac => {}
                        _ => branch = Some((j, frac)),
                    }
                }
            }
        }

        match branch {
            None => {
                // Integer-feasible: snap the integer coordinates and score
                // the point from the original data.
                let mut point = x;
                for (j, value) in point.iter_mut().enumerate() {
                    if lp.is_integer(j) {
                        *value = num::round(*value);
                    }
                }
                let objective = dot(&lp.c, &point);
                let improves = match &best {
                    None => true,
                    Some((incumbent, _)) => match lp.objective {
                        Direction::Maximize => objective > *incumbent,
                        Direction::Minimize => objective < *incumbent,
                    },
                };
                if improves {
                    best = Some((objective, point));
                }
            }
            Some((j, _)) => {
                let mut ceil_child = Node {
                    lower: node.lower.clone(),
                    upper: node.upper.clone(),
                };
                ceil_child.lower[j] = num::ceil(x[j]);
                let mut floor_child = node;
                floor_child.upper[j] = num::floor(x[j]);
                if ceil_child.lower[j] <= ceil_child.upper[j] {
                    stack.push(ceil_child);
                }
                if floor_child.lower[j] <= floor_child.upper[j] {
                    stack.push(floor_child);
                }
            }
        }
    }

    match best {
        Some((objective, x)) => SolverResult::optimal(objective, variable_assignment(&x)),
        None => SolverResult::infeasible(),
    }
}
