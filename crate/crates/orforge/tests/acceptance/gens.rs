//! Random instance generators for the oracle-equivalence suites.
//!
//! Values are integral wherever a criterion demands exact objective
//! equality (integer sums are exact in f64 regardless of order), and
//! two-decimal elsewhere. Sizes and signs deliberately stress corners the
//! production sampler avoids: one-agent assignments, empty arc sets,
//! negative costs, equality rows, and infeasible networks.

use orforge_core::instance::{
    AssignmentInstance, Direction, FlowArc, LpInstance, MaxFlowInstance, McfArc,
    MinCostFlowInstance, Sense, TspInstance,
};
use orforge_core::rng::RngStream;
use rand::Rng;

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn direction(rng: &mut RngStream) -> Direction {
    if rng.gen_bool(0.5) {
        Direction::Maximize
    } else {
        Direction::Minimize
    }
}

pub fn random_assignment(rng: &mut RngStream) -> AssignmentInstance {
    let n = rng.gen_range(1..=7);
    let cost = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-20..=20) as f64).collect())
        .collect();
    AssignmentInstance {
        n,
        cost,
        objective: direction(rng),
    }
}

pub fn random_tsp(rng: &mut RngStream) -> TspInstance {
    let n = rng.gen_range(2..=9);
    let symmetric = rng.gen_bool(0.5);
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                dist[i][j] = rng.gen_range(1..=30) as f64;
            }
        }
    }
    if symmetric {
        for i in 0..n {
            for j in 0..i {
                dist[j][i] = dist[i][j];
            }
        }
    }
    TspInstance { n, dist, symmetric }
}

pub fn random_max_flow(rng: &mut RngStream) -> MaxFlowInstance {
    let node_count = rng.gen_range(2..=8);
    let source = rng.gen_range(0..node_count);
    let sink = (source + rng.gen_range(1..node_count)) % node_count;
    let mut arcs = Vec::new();
    for from in 0..node_count {
        for to in 0..node_count {
            if from != to && rng.gen_bool(0.45) {
                arcs.push(FlowArc {
                    from,
                    to,
                    capacity: rng.gen_range(0..=15) as f64,
                });
            }
        }
    }
    MaxFlowInstance {
        node_count,
        arcs,
        source,
        sink,
    }
}

fn random_sense(rng: &mut RngStream) -> Sense {
    match rng.gen_range(0..10) {
        0 => Sense::Eq,
        1..=5 => Sense::Le,
        _ => Sense::Ge,
    }
}

/// An LP whose variables all have finite bounds, so vertex enumeration is
/// complete. Roughly half the draws are infeasible or tightly constrained.
pub fn random_boxed_lp(rng: &mut RngStream) -> LpInstance {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=6);
    let lower_bounds: Vec<f64> = (0..n).map(|_| round2(rng.gen_range(-5.0..=0.0))).collect();
    let upper_bounds: Vec<f64> = lower_bounds
        .iter()
        .map(|lo| round2(lo + rng.gen_range(0.5..=10.0)))
        .collect();
    LpInstance {
        objective: direction(rng),
        c: (0..n).map(|_| round2(rng.gen_range(-10.0..=10.0))).collect(),
        a: (0..m)
            .map(|_| (0..n).map(|_| round2(rng.gen_range(-5.0..=5.0))).collect())
            .collect(),
        senses: (0..m).map(|_| random_sense(rng)).collect(),
        b: (0..m).map(|_| round2(rng.gen_range(-10.0..=15.0))).collect(),
        lower_bounds,
        upper_bounds,
        integrality: vec![],
    }
}

/// A genuinely mixed bounded MILP: at least one integral and one continuous
/// variable, integer bounds within [-10, 10].
pub fn random_bounded_milp(rng: &mut RngStream) -> LpInstance {
    let n = rng.gen_range(2..=4);
    let mut integrality = vec![true, false];
    while integrality.len() < n {
        integrality.push(rng.gen_bool(0.5));
    }
    for i in (1..integrality.len()).rev() {
        integrality.swap(i, rng.gen_range(0..=i));
    }
    let lower_bounds: Vec<f64> = (0..n).map(|_| rng.gen_range(-10..=0) as f64).collect();
    let upper_bounds: Vec<f64> = lower_bounds
        .iter()
        .map(|lo| lo + rng.gen_range(1..=10) as f64)
        .collect();
    let m = rng.gen_range(1..=4);
    LpInstance {
        objective: direction(rng),
        c: (0..n).map(|_| round2(rng.gen_range(-10.0..=10.0))).collect(),
        a: (0..m)
            .map(|_| (0..n).map(|_| round2(rng.gen_range(-5.0..=5.0))).collect())
            .collect(),
        senses: (0..m).map(|_| random_sense(rng)).collect(),
        b: (0..m).map(|_| round2(rng.gen_range(-10.0..=20.0))).collect(),
        lower_bounds,
        upper_bounds,
        integrality,
    }
}

/// A balanced min-cost-flow network. DAG-shaped draws may carry negative
/// costs (no cycles can exist); general draws keep costs nonnegative so the
/// network never contains a negative-cost cycle. Half the draws ship one
/// source-sink pair, half scatter supplies across all nodes.
pub fn random_mcf(rng: &mut RngStream) -> MinCostFlowInstance {
    let node_count = rng.gen_range(2..=8);
    let dag = rng.gen_bool(0.4);
    let mut arcs = Vec::new();
    for from in 0..node_count {
        for to in 0..node_count {
            if from == to || (dag && to <= from) {
                continue;
            }
            if rng.gen_bool(0.5) {
                let low_cost = if dag { -5 } else { 0 };
                arcs.push(McfArc {
                    from,
                    to,
                    capacity: rng.gen_range(0..=12) as f64,
                    unit_cost: rng.gen_range(low_cost..=12) as f64,
                });
            }
        }
    }
    let mut supplies = vec![0.0; node_count];
    if rng.gen_bool(0.5) {
        let source = rng.gen_range(0..node_count);
        let sink = (source + rng.gen_range(1..node_count)) % node_count;
        let amount = rng.gen_range(1..=8) as f64;
        supplies[source] = amount;
        supplies[sink] = -amount;
    } else {
        for s in supplies.iter_mut().take(node_count - 1) {
            *s = rng.gen_range(-6..=6) as f64;
        }
        let total: f64 = supplies.iter().sum();
        supplies[node_count - 1] = -total;
    }
    MinCostFlowInstance {
        node_count,
        arcs,
        supplies,
    }
}
