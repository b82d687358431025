//! Exact TSP by Held-Karp dynamic programming over visited-city bitmasks.
//!
//! Runs in O(n^2 * 2^n), so the solver refuses instances above the
//! configured city cap instead of silently taking forever.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;

use super::{SolverConfig, SolverResult};
use crate::instance::TspInstance;

/// Finds the shortest round trip starting and ending at city 0.
pub fn solve_tsp(tsp: &TspInstance, config: &SolverConfig) -> SolverResult {
    let n = tsp.n;
    if n > config.tsp_city_cap {
        return SolverResult::error(format!(
            "instance has {n} cities; exact solver is capped at {}",
            config.tsp_city_cap
        ));
    }

    // Cities 1..n become DP indices 0..m-1; city 0 is the fixed start.
    let m = n - 1;
    let full = 1usize << m;
    let mut cost = vec![f64::INFINITY; full * m];
    let mut parent = vec![usize::MAX; full * m];
    for j in 0..m {
        cost[(1 << j) * m + j] = tsp.dist[0][j + 1];
    }
    for mask in 1..full {
        for last in 0..m {
            if mask & (1 << last) == 0 {
                continue;
            }
            let from = cost[mask * m + last];
            if !from.is_finite() {
                continue;
            }
            for next in 0..m {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let candidate = from + tsp.dist[last + 1][next + 1];
                let slot = (mask | (1 << next)) * m + next;
                if candidate < cost[slot] {
                    cost[slot] = candidate;
                    parent[slot] = last;
                }
            }
        }
    }

    let mut best_last = 0;
    let mut best = f64::INFINITY;
    for last in 0..m {
        let tour_len = cost[(full - 1) * m + last] + tsp.dist[last + 1][0];
        if tour_len < best {
            best = tour_len;
            best_last = last;
        }
    }

    let mut order = vec![0usize; n];
    let mut mask = full - 1;
    let mut last = best_last;
    for pos in (1..n).rev() {
        order[pos] = last + 1;
        let prev = parent[mask * m + last];
        mask &= !(1 << last);
        if prev == usize::MAX {
            break;
        }
        last = prev;
    }

    let objective: f64 = (0..n).map(|w| tsp.dist[order[w]][order[(w + 1) % n]]).sum();
    let assignment: BTreeMap<String, f64> = order
        .iter()
        .enumerate()
        .map(|(pos, &city)| (format!("stop_{pos}"), city as f64))
        .collect();
    SolverResult::optimal(objective, assignment)
}
