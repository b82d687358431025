//! Random instance synthesis: draws problem parameters from configured
//! ranges, tags each instance with an industry context, an objective
//! flavor, and a render format, and keeps only instances the exact solvers
//! certify as optimal.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::distributions::{Bernoulli, Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{
    validate_instance, AssignmentInstance, Direction, FlowArc, LpInstance, MaxFlowInstance,
    McfArc, MinCostFlowInstance, ProblemInstance, ProblemType, Sense, TspInstance,
};
use crate::render::RenderFormat;
use crate::rng::{derive_stream, RngStream};
use crate::solver::{solve, SolverConfig, SolverResult};

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRange {
    pub min: usize,
    pub max: usize,
}

impl SizeRange {
    fn draw(&self, rng: &mut RngStream) -> usize {
        rng.gen_range(self.min..=self.max)
    }
}

/// Inclusive value range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
}

impl ValueRange {
    /// Uniform draw rounded to two decimals.
    fn draw_cents(&self, rng: &mut RngStream) -> f64 {
        let x: f64 = rng.gen_range(self.min..=self.max);
        crate::num::round(x * 100.0) / 100.0
    }

    /// Uniform integer draw over the enclosed whole numbers.
    fn draw_int(&self, rng: &mut RngStream) -> f64 {
        let lo = crate::num::ceil(self.min) as i64;
        let hi = crate::num::floor(self.max) as i64;
        rng.gen_range(lo..=hi.max(lo)) as f64
    }

    fn draw(&self, rng: &mut RngStream) -> f64 {
        rng.gen_range(self.min..=self.max)
    }
}

fn range(min: f64, max: f64) -> ValueRange {
    ValueRange { min, max }
}

/// One industry label and the problem types it plausibly hosts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextEntry {
    pub label: String,
    pub types: Vec<ProblemType>,
}

fn context(label: &str, types: &[ProblemType]) -> ContextEntry {
    ContextEntry {
        label: String::from(label),
        types: types.to_vec(),
    }
}

/// All sampling knobs: size and coefficient ranges per family, the context
/// catalog, draw weights, and the resampling budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub lp_vars: SizeRange,
    pub lp_rows: SizeRange,
    pub tsp_cities: SizeRange,
    pub flow_nodes: SizeRange,
    pub ap_agents: SizeRange,
    pub arc_density: ValueRange,
    /// Objective coefficients for the LP family.
    pub cost_range: ValueRange,
    /// Constraint matrix entries (positive unit consumption rates).
    pub usage_range: ValueRange,
    /// Right-hand sides of `<=` rows and network arc capacities.
    pub capacity_range: ValueRange,
    /// Right-hand sides of `>=` rows.
    pub demand_range: ValueRange,
    /// Finite variable upper bounds.
    pub bound_range: ValueRange,
    pub distance_range: ValueRange,
    pub unit_cost_range: ValueRange,
    pub supply_range: ValueRange,
    /// Probability that a variable gets a finite upper bound.
    pub finite_bound_weight: f64,
    /// Probability that a drawn objective maximizes, for families where
    /// both directions make sense.
    pub maximize_weight: f64,
    /// Probability that a TSP distance matrix is symmetric.
    pub symmetric_weight: f64,
    /// Draw weights for free-text, matrix, and tabular rendering.
    pub render_format_weights: [f64; 3],
    pub contexts: Vec<ContextEntry>,
    pub max_resample_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        use ProblemType::*;
        SamplerConfig {
            lp_vars: SizeRange { min: 2, max: 8 },
            lp_rows: SizeRange { min: 2, max: 6 },
            tsp_cities: SizeRange { min: 5, max: 12 },
            flow_nodes: SizeRange { min: 4, max: 10 },
            ap_agents: SizeRange { min: 3, max: 8 },
            arc_density: range(0.3, 0.6),
            cost_range: range(1.0, 50.0),
            usage_range: range(0.1, 10.0),
            capacity_range: range(20.0, 100.0),
            demand_range: range(1.0, 20.0),
            bound_range: range(5.0, 50.0),
            distance_range: range(1.0, 99.0),
            unit_cost_range: range(1.0, 20.0),
            supply_range: range(10.0, 40.0),
            finite_bound_weight: 0.5,
            maximize_weight: 0.5,
            symmetric_weight: 0.8,
            render_format_weights: [1.0, 1.0, 1.0],
            contexts: vec![
                context("agriculture", &[Lp, Ip, Milp]),
                context("manufacturing", &[Lp, Ip, Milp, Ap]),
                context("finance", &[Lp, Milp]),
                context("logistics", &[Lp, Tsp, Mf, Mcf]),
                context("delivery services", &[Tsp, Mcf]),
                context("energy", &[Milp, Mf, Mcf]),
                context("telecommunications", &[Mf, Mcf]),
                context("workforce scheduling", &[Ip, Ap]),
                context("healthcare", &[Lp, Ip, Ap]),
                context("retail", &[Lp, Ip, Mcf]),
            ],
            max_resample_attempts: 50,
        }
    }
}

impl SamplerConfig {
    /// Labels applicable to one problem type, in catalog order.
    pub fn contexts_for(&self, problem_type: ProblemType) -> Vec<&str> {
        self.contexts
            .iter()
            .filter(|c| c.types.contains(&problem_type))
            .map(|c| c.label.as_str())
            .collect()
    }

    /// Complaints about ranges or weights that make sampling impossible.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let sizes = [
            ("lp_vars", self.lp_vars),
            ("lp_rows", self.lp_rows),
            ("tsp_cities", self.tsp_cities),
            ("flow_nodes", self.flow_nodes),
            ("ap_agents", self.ap_agents),
        ];
        for (name, r) in sizes {
            if r.min > r.max || r.min == 0 {
                out.push(format!("{name} range [{}, {}] is empty", r.min, r.max));
            }
        }
        let values = [
            ("arc_density", self.arc_density),
            ("cost_range", self.cost_range),
            ("usage_range", self.usage_range),
            ("capacity_range", self.capacity_range),
            ("demand_range", self.demand_range),
            ("bound_range", self.bound_range),
            ("distance_range", self.distance_range),
            ("unit_cost_range", self.unit_cost_range),
            ("supply_range", self.supply_range),
        ];
        for (name, r) in values {
            if !(r.min <= r.max) || !r.min.is_finite() || !r.max.is_finite() {
                out.push(format!("{name} range [{}, {}] is empty", r.min, r.max));
            }
        }
        if self.render_format_weights.iter().any(|&w| !(w > 0.0)) {
            out.push(String::from("render format weights must be positive"));
        }
        for p in [
            ("finite_bound_weight", self.finite_bound_weight),
            ("maximize_weight", self.maximize_weight),
            ("symmetric_weight", self.symmetric_weight),
        ] {
            if !(0.0..=1.0).contains(&p.1) {
                out.push(format!("{} must lie in [0, 1]", p.0));
            }
        }
        if self.max_resample_attempts == 0 {
            out.push(String::from("max_resample_attempts must be at least 1"));
        }
        for pt in ProblemType::ALL {
            if self.contexts_for(pt).is_empty() {
                out.push(format!("no context is applicable to {}", pt.name()));
            }
        }
        out
    }
}

/// A validated instance plus everything the prompt builders need.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyInfo {
    pub problem_type: ProblemType,
    pub instance: ProblemInstance,
    pub context: String,
    pub objective_flavor: String,
    pub render_format: RenderFormat,
    pub ground_truth: SolverResult,
}

/// Sampling gave up: every attempt produced an instance the solver
/// rejected (infeasible, unbounded, or degenerate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleError {
    pub problem_type: ProblemType,
    pub attempts: usize,
    /// Batch position of the failing item, when sampling a batch.
    pub batch_index: Option<usize>,
}

impl core::fmt::Display for SampleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "no feasible {} instance after {} attempts",
            self.problem_type.name(),
            self.attempts
        )?;
        if let Some(i) = self.batch_index {
            write!(f, " (batch item {i})")?;
        }
        Ok(())
    }
}

impl core::error::Error for SampleError {}

fn flavor(problem_type: ProblemType, direction: Direction) -> &'static str {
    match (problem_type, direction) {
        (ProblemType::Lp | ProblemType::Ip | ProblemType::Milp, Direction::Maximize) => {
            "profit maximization"
        }
        (ProblemType::Lp | ProblemType::Ip | ProblemType::Milp, Direction::Minimize) => {
            "cost minimization"
        }
        (ProblemType::Tsp, _) => "route length minimization",
        (ProblemType::Mf, _) => "throughput maximization",
        (ProblemType::Ap, Direction::Maximize) => "productivity maximization",
        (ProblemType::Ap, Direction::Minimize) => "cost minimization",
        (ProblemType::Mcf, _) => "shipping cost minimization",
    }
}

fn draw_direction(config: &SamplerConfig, rng: &mut RngStream) -> Direction {
    if Bernoulli::new(config.maximize_weight)
        .expect("validated weight")
        .sample(rng)
    {
        Direction::Maximize
    } else {
        Direction::Minimize
    }
}

fn draw_lp(
    config: &SamplerConfig,
    rng: &mut RngStream,
    problem_type: ProblemType,
) -> (ProblemInstance, Direction) {
    let n = config.lp_vars.draw(rng);
    let m = config.lp_rows.draw(rng);
    let objective = draw_direction(config, rng);
    let c: Vec<f64> = (0..n).map(|_| config.cost_range.draw_cents(rng)).collect();
    let a: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| config.usage_range.draw_cents(rng).max(0.01))
                .collect()
        })
        .collect();
    // The first row is always a capacity row, which keeps the feasible
    // region bounded; equality rows are reserved for the continuous family
    // where fractional activity can always meet them.
    let mut senses = vec![Sense::Le];
    for _ in 1..m {
        let weights: &[f64] = if problem_type == ProblemType::Lp {
            &[0.75, 0.15, 0.10]
        } else {
            &[0.8, 0.2, 0.0]
        };
        let pick = WeightedIndex::new(weights).expect("static weights").sample(rng);
        senses.push([Sense::Le, Sense::Ge, Sense::Eq][pick]);
    }
    let b: Vec<f64> = senses
        .iter()
        .map(|s| match s {
            Sense::Le => config.capacity_range.draw_cents(rng),
            Sense::Ge => config.demand_range.draw_cents(rng),
            Sense::Eq => config.demand_range.draw_cents(rng),
        })
        .collect();
    let lower_bounds = vec![0.0; n];
    let finite = Bernoulli::new(config.finite_bound_weight).expect("validated weight");
    let upper_bounds: Vec<f64> = (0..n)
        .map(|_| {
            if finite.sample(rng) {
                config.bound_range.draw_cents(rng)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let integrality = match problem_type {
        ProblemType::Lp => vec![false; n],
        ProblemType::Ip => vec![true; n],
        _ => loop {
            let flags: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            if flags.iter().any(|&f| f) && flags.iter().any(|&f| !f) {
                break flags;
            }
        },
    };
    let lp = LpInstance {
        objective,
        c,
        a,
        senses,
        b,
        lower_bounds,
        upper_bounds,
        integrality,
    };
    let instance = match problem_type {
        ProblemType::Lp => ProblemInstance::Lp(lp),
        ProblemType::Ip => ProblemInstance::Ip(lp),
        _ => ProblemInstance::Milp(lp),
    };
    (instance, objective)
}

fn draw_tsp(config: &SamplerConfig, rng: &mut RngStream) -> ProblemInstance {
    let n = config.tsp_cities.draw(rng);
    let symmetric = Bernoulli::new(config.symmetric_weight)
        .expect("validated weight")
        .sample(rng);
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if symmetric && j < i {
                dist[i][j] = dist[j][i];
            } else {
                dist[i][j] = config.distance_range.draw_int(rng);
            }
        }
    }
    ProblemInstance::Tsp(TspInstance { n, dist, symmetric })
}

/// A random source-to-sink path through a shuffled subset of the interior
/// nodes, guaranteeing that positive flow exists.
fn draw_path(n: usize, rng: &mut RngStream) -> Vec<(usize, usize)> {
    let mut interior: Vec<usize> = (1..n - 1).collect();
    interior.shuffle(rng);
    let hops = rng.gen_range(1..=interior.len().max(1).min(3));
    let mut nodes = vec![0];
    nodes.extend(interior.into_iter().take(hops));
    nodes.push(n - 1);
    nodes.windows(2).map(|w| (w[0], w[1])).collect()
}

fn draw_max_flow(config: &SamplerConfig, rng: &mut RngStream) -> ProblemInstance {
    let n = config.flow_nodes.draw(rng);
    let density = config.arc_density.draw(rng);
    let mut pairs: Vec<(usize, usize)> = draw_path(n, rng);
    for from in 0..n {
        for to in 0..n {
            let backward_into_source = to == 0 || from == n - 1;
            if from == to || backward_into_source || pairs.contains(&(from, to)) {
                continue;
            }
            if rng.gen_bool(density) {
                pairs.push((from, to));
            }
        }
    }
    let arcs = pairs
        .into_iter()
        .map(|(from, to)| FlowArc {
            from,
            to,
            capacity: config.capacity_range.draw_int(rng),
        })
        .collect();
    ProblemInstance::Mf(MaxFlowInstance {
        node_count: n,
        arcs,
        source: 0,
        sink: n - 1,
    })
}

fn draw_assignment(config: &SamplerConfig, rng: &mut RngStream) -> (ProblemInstance, Direction) {
    let n = config.ap_agents.draw(rng);
    let objective = draw_direction(config, rng);
    let cost = (0..n)
        .map(|_| (0..n).map(|_| config.cost_range.draw_int(rng)).collect())
        .collect();
    (
        ProblemInstance::Ap(AssignmentInstance { n, cost, objective }),
        objective,
    )
}

/// Splits an integer total into `parts` positive integer pieces.
fn split_total(total: i64, parts: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut out = Vec::with_capacity(parts);
    let mut remaining = total;
    for i in 0..parts {
        let left = (parts - 1 - i) as i64;
        let piece = if left == 0 {
            remaining
        } else {
            rng.gen_range(1..=remaining - left)
        };
        out.push(piece as f64);
        remaining -= piece;
    }
    out
}

fn draw_min_cost_flow(config: &SamplerConfig, rng: &mut RngStream) -> ProblemInstance {
    let n = config.flow_nodes.draw(rng);
    let density = config.arc_density.draw(rng);
    let mut roles: Vec<usize> = (0..n).collect();
    roles.shuffle(rng);
    let supply_count = rng.gen_range(1..=2usize);
    let demand_count = rng.gen_range(1..=2usize);
    let suppliers = &roles[..supply_count];
    let consumers = &roles[supply_count..supply_count + demand_count];
    let total = config.supply_range.draw_int(rng) as i64;
    let mut supplies = vec![0.0; n];
    for (node, amount) in suppliers.iter().zip(split_total(total, supply_count, rng)) {
        supplies[*node] = amount;
    }
    for (node, amount) in consumers.iter().zip(split_total(total, demand_count, rng)) {
        supplies[*node] = -amount;
    }
    // Direct supplier-to-consumer arcs keep most draws feasible; density
    // arcs add alternative routes.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for &s in suppliers {
        for &d in consumers {
            pairs.push((s, d));
        }
    }
    for from in 0..n {
        for to in 0..n {
            if from == to || pairs.contains(&(from, to)) {
                continue;
            }
            if rng.gen_bool(density) {
                pairs.push((from, to));
            }
        }
    }
    let arcs = pairs
        .into_iter()
        .map(|(from, to)| McfArc {
            from,
            to,
            capacity: config.capacity_range.draw_int(rng),
            unit_cost: config.unit_cost_range.draw_int(rng),
        })
        .collect();
    ProblemInstance::Mcf(MinCostFlowInstance {
        node_count: n,
        arcs,
        supplies,
    })
}

/// Draws one instance of the requested type, solving each candidate and
/// resampling until the solver reports an optimum.
pub fn sample_key_info(
    problem_type: ProblemType,
    config: &SamplerConfig,
    rng: &mut RngStream,
) -> Result<KeyInfo, SampleError> {
    let solver_config = SolverConfig::default();
    for _ in 0..config.max_resample_attempts {
        let (instance, direction) = match problem_type {
            ProblemType::Lp | ProblemType::Ip | ProblemType::Milp => {
                draw_lp(config, rng, problem_type)
            }
            ProblemType::Tsp => (draw_tsp(config, rng), Direction::Minimize),
            ProblemType::Mf => (draw_max_flow(config, rng), Direction::Maximize),
            ProblemType::Ap => draw_assignment(config, rng),
            ProblemType::Mcf => (draw_min_cost_flow(config, rng), Direction::Minimize),
        };
        if !validate_instance(&instance).is_empty() {
            continue;
        }
        let ground_truth = solve(&instance, &solver_config);
        if !ground_truth.is_optimal() {
            continue;
        }
        // A zero optimum makes a degenerate question: the best plan is to
        // do nothing, ship nothing, or route no flow. Redraw it.
        if ground_truth.objective == Some(0.0) {
            continue;
        }
        let labels = config.contexts_for(problem_type);
        let context = String::from(labels[rng.gen_range(0..labels.len())]);
        let formats = [
            RenderFormat::FreeText,
            RenderFormat::Matrix,
            RenderFormat::Tabular,
        ];
        let pick = WeightedIndex::new(config.render_format_weights)
            .expect("validated weights")
            .sample(rng);
        return Ok(KeyInfo {
            problem_type,
            instance,
            context,
            objective_flavor: String::from(flavor(problem_type, direction)),
            render_format: formats[pick],
            ground_truth,
        });
    }
    Err(SampleError {
        problem_type,
        attempts: config.max_resample_attempts,
        batch_index: None,
    })
}

/// Samples `count` instances; item `i` draws from the stream derived for
/// index `i`, so the batch is order-stable and reproducible.
pub fn sample_batch(
    problem_type: ProblemType,
    count: usize,
    config: &SamplerConfig,
    master_seed: u64,
) -> Result<Vec<KeyInfo>, SampleError> {
    (0..count)
        .map(|i| {
            let mut rng = derive_stream(master_seed, i as u64);
            sample_key_info(problem_type, config, &mut rng).map_err(|mut e| {
                e.batch_index = Some(i);
                e
            })
        })
        .collect()
}
