//! Maximum flow by Edmonds-Karp (BFS augmenting paths), which terminates in
//! O(V * E) augmentations regardless of capacity values.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{SolverConfig, SolverResult};
use crate::instance::MaxFlowInstance;

/// Maximizes total flow from source to sink. Parallel arcs stay distinct;
/// the assignment reports per-arc flow keyed by arc index.
pub fn solve_max_flow(mf: &MaxFlowInstance, config: &SolverConfig) -> SolverResult {
    // Residual edge pairs: slot 2i is arc i forward, slot 2i+1 its reverse.
    let mut residual: Vec<f64> = Vec::with_capacity(mf.arcs.len() * 2);
    let mut head: Vec<usize> = Vec::with_capacity(mf.arcs.len() * 2);
    let mut adjacency = vec![Vec::new(); mf.node_count];
    for (i, arc) in mf.arcs.iter().enumerate() {
        residual.push(arc.capacity);
        head.push(arc.to);
        adjacency[arc.from].push(2 * i);
        residual.push(0.0);
        head.push(arc.from);
        adjacency[arc.to].push(2 * i + 1);
    }

    for _ in 0..config.max_flow_augmentations {
        // Shortest augmenting path in edge count.
        let mut incoming = vec![usize::MAX; mf.node_count];
        incoming[mf.source] = usize::MAX - 1;
        let mut queue = VecDeque::from([mf.source]);
        'bfs: while let Some(v) = queue.pop_front() {
            for &e in &adjacency[v] {
                let w = head[e];
                if residual[e] > 0.0 && incoming[w] == usize::MAX {
                    incoming[w] = e;
                    if w == mf.sink {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if incoming[mf.sink] == usize::MAX {
            break;
        }

        let mut bottleneck = f64::INFINITY;
        let mut v = mf.sink;
        while v != mf.source {
            let e = incoming[v];
            bottleneck = bottleneck.min(residual[e]);
            v = head[e ^ 1];
        }
        let mut v = mf.sink;
        while v != mf.source {
            let e = incoming[v];
            residual[e] -= bottleneck;
            residual[e ^ 1] += bottleneck;
            v = head[e ^ 1];
        }
    }

    let flows: Vec<f64> = mf
        .arcs
        .iter()
        .enumerate()
        .map(|(i, arc)| arc.capacity - residual[2 * i])
        .collect();
    let objective: f64 = mf
        .arcs
        .iter()
        .zip(&flows)
        .map(|(arc, &f)| {
            if arc.from == mf.source {
                f
            } else if arc.to == mf.source {
                -f
            } else {
                0.0
            }
        })
        .sum();
    let assignment: BTreeMap<String, f64> = flows
        .iter()
        .enumerate()
        .map(|(i, &f)| (format!("arc_{i}"), f))
        .collect();
    SolverResult::optimal(objective, assignment)
}
