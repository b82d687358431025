//! Minimum cost flow by successive shortest paths with Johnson potentials:
//! one Bellman-Ford pass establishes potentials (and rejects negative-cost
//! cycles, where this method would be unsound), then Dijkstra on reduced
//! costs augments along cheapest source-sink paths until supply is routed.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{SolverConfig, SolverResult};
use crate::instance::MinCostFlowInstance;

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Reversed so the max-heap pops the smallest distance; equal
        // distances pop the smallest node for a deterministic order.
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("distances are never NaN")
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Routes all supplies to all demands at minimum total cost.
pub fn solve_min_cost_flow(mcf: &MinCostFlowInstance, config: &SolverConfig) -> SolverResult {
    let n = mcf.node_count;
    let source = n;
    let sink = n + 1;
    let node_count = n + 2;

    // Residual edge pairs: slot 2i forward, 2i+1 reverse. Input arcs come
    // first, then one super-source or super-sink arc per nonzero supply.
    let mut residual: Vec<f64> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut tail: Vec<usize> = Vec::new();
    let mut head: Vec<usize> = Vec::new();
    let mut adjacency = vec![Vec::new(); node_count];
    let push_edge = |from: usize,
                         to: usize,
                         capacity: f64,
                         unit_cost: f64,
                         residual: &mut Vec<f64>,
                         cost: &mut Vec<f64>,
                         tail: &mut Vec<usize>,
                         head: &mut Vec<usize>,
                         adjacency: &mut Vec<Vec<usize>>| {
        adjacency[from].push(residual.len());
        residual.push(capacity);
        cost.push(unit_cost);
        tail.push(from);
        head.push(to);
        adjacency[to].push(residual.len());
        residual.push(0.0);
        cost.push(-unit_cost);
        tail.push(to);
        head.push(from);
    };
    for arc in &mcf.arcs {
        push_edge(
            arc.from,
            arc.to,
            arc.capacity,
            arc.unit_cost,
            &mut residual,
            &mut cost,
            &mut tail,
            &mut head,
            &mut adjacency,
        );
    }
    let mut total_supply = 0.0;
    for (v, &supply) in mcf.supplies.iter().enumerate() {
        if supply > 0.0 {
            total_supply += supply;
            push_edge(
                source,
                v,
                supply,
                0.0,
                &mut residual,
                &mut cost,
                &mut tail,
                &mut head,
                &mut adjacency,
            );
        } else if supply < 0.0 {
            push_edge(
                v,
                sink,
                -supply,
                0.0,
                &mut residual,
                &mut cost,
                &mut tail,
                &mut head,
                &mut adjacency,
            );
        }
    }

    // Bellman-Ford from a virtual all-zeros start: yields valid potentials
    // for every node and flags negative-cost cycles anywhere in the network.
    let mut potential = vec![0.0; node_count];
    let mut settled = false;
    for _ in 0..node_count {
        let mut changed = false;
        for e in 0..residual.len() {
            if residual[e] > 0.0 && potential[tail[e]] + cost[e] < potential[head[e]] - 1e-12 {
                potential[head[e]] = potential[tail[e]] + cost[e];
                changed = true;
            }
        }
        if !changed {
            settled = true;
            break;
        }
    }
    if !settled {
        return SolverResult::error("network contains a negative-cost cycle");
    }

    let mut shipped = 0.0;
    let mut augmentations = 0usize;
    loop {
        augmentations += 1;
        if augmentations > config.max_mcf_augmentations {
            return SolverResult::error(format!(
                "augmentation limit ({}) reached",
                config.max_mcf_augmentations
            ));
        }
        let mut dist = vec![f64::INFINITY; node_count];
        let mut incoming = vec![usize::MAX; node_count];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapEntry { dist: d, node: v }) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &e in &adjacency[v] {
                if residual[e] <= 0.0 {
                    continue;
                }
                let w = head[e];
                let next = d + cost[e] + potential[v] - potential[w];
                if next < dist[w] {
                    dist[w] = next;
                    incoming[w] = e;
                    heap.push(HeapEntry { dist: next, node: w });
                }
            }
        }
        if !dist[sink].is_finite() {
            break;
        }
        for v in 0..node_count {
            potential[v] += dist[v].min(dist[sink]);
        }

        let mut bottleneck = f64::INFINITY;
        let mut v = sink;
        while v != source {
            let e = incoming[v];
            bottleneck = bottleneck.min(residual[e]);
            v = tail[e];
        }
        let mut v = sink;
        while v != source {
            let e = incoming[v];
            residual[e] -= bottleneck;
            residual[e ^ 1] += bottleneck;
            v = tail[e];
        }
        shipped += bottleneck;
    }

    if total_supply - shipped > config.feasibility_tolerance {
        return SolverResult::infeasible();
    }

    let flows: Vec<f64> = mcf
        .arcs
        .iter()
        .enumerate()
        .map(|(i, arc)| arc.capacity - residual[2 * i])
        .collect();
    let objective: f64 = mcf
        .arcs
        .iter()
        .zip(&flows)
        .map(|(arc, &f)| arc.unit_cost * f)
        .sum();
    let assignment: BTreeMap<String, f64> = flows
        .iter()
        .enumerate()
        .map(|(i, &f)| (format!("arc_{i}"), f))
        .collect();
    SolverResult::optimal(objective, assignment)
}
