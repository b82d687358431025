//! Hungarian method (potentials with shortest augmenting paths, O(n^3)).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{SolverConfig, SolverResult};
use crate::instance::{AssignmentInstance, Direction};

/// Finds the perfect agent-task matching with minimal (or maximal) total
/// cost. Maximization runs the minimizer on `max_entry - cost` and rescores
/// the matching against the original matrix.
pub fn solve_assignment(ap: &AssignmentInstance, _config: &SolverConfig) -> SolverResult {
    let n = ap.n;
    let weights: Vec<Vec<f64>> = match ap.objective {
        Direction::Minimize => ap.cost.clone(),
        Direction::Maximize => {
            let top = ap
                .cost
                .iter()
                .flatten()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            ap.cost
                .iter()
                .map(|row| row.iter().map(|&c| top - c).collect())
                .collect()
        }
    };

    // 1-indexed potentials; column 0 is the virtual unmatched column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut slack_from = vec![0usize; n + 1];
        let mut visited = vec![false; n + 1];
        loop {
            visited[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if visited[j] {
                    continue;
                }
                let reduced = weights[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    slack_from[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if visited[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        while j0 != 0 {
            let j1 = slack_from[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
        }
    }

    let mut task_of_agent = vec![0usize; n];
    for j in 1..=n {
        task_of_agent[matched_row[j] - 1] = j - 1;
    }
    let objective: f64 = (0..n).map(|i| ap.cost[i][task_of_agent[i]]).sum();
    let assignment: BTreeMap<String, f64> = task_of_agent
        .iter()
        .enumerate()
        .map(|(i, &j)| (format!("agent_{i}"), j as f64))
        .collect();
    SolverResult::optimal(objective, assignment)
}
