//! Problem instances for the seven supported optimization families and
//! structural validation over them.
//!
//! LP, IP, and MILP share [`LpInstance`]; the integrality flags decide the
//! family (all false, all true, mixed). Instance files serialize as
//! `{"type": "<name>", "data": {...}}` and encode unbounded upper bounds as
//! the string `"infinity"`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// Objective direction, serialized as `"max"` / `"min"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "max")]
    Maximize,
    #[serde(rename = "min")]
    Minimize,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Maximize => "max",
            Direction::Minimize => "min",
        }
    }

    /// The verb form used in rendered text.
    pub fn verb(self) -> &'static str {
        match self {
            Direction::Maximize => "maximize",
            Direction::Minimize => "minimize",
        }
    }
}

/// Constraint row sense, serialized as `"<="` / `">="` / `"="`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Sense {
    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

/// The seven problem families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProblemType {
    #[serde(rename = "LP")]
    Lp,
    #[serde(rename = "IP")]
    Ip,
    #[serde(rename = "MILP")]
    Milp,
    #[serde(rename = "TSP")]
    Tsp,
    #[serde(rename = "MF")]
    Mf,
    #[serde(rename = "AP")]
    Ap,
    #[serde(rename = "MCF")]
    Mcf,
}

impl ProblemType {
    pub const ALL: [ProblemType; 7] = [
        ProblemType::Lp,
        ProblemType::Ip,
        ProblemType::Milp,
        ProblemType::Tsp,
        ProblemType::Mf,
        ProblemType::Ap,
        ProblemType::Mcf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemType::Lp => "LP",
            ProblemType::Ip => "IP",
            ProblemType::Milp => "MILP",
            ProblemType::Tsp => "TSP",
            ProblemType::Mf => "MF",
            ProblemType::Ap => "AP",
            ProblemType::Mcf => "MCF",
        }
    }

    /// Long form used in prose.
    pub fn description(self) -> &'static str {
        match self {
            ProblemType::Lp => "linear program",
            ProblemType::Ip => "integer program",
            ProblemType::Milp => "mixed-integer linear program",
            ProblemType::Tsp => "traveling salesman problem",
            ProblemType::Mf => "maximum flow problem",
            ProblemType::Ap => "assignment problem",
            ProblemType::Mcf => "minimum cost flow problem",
        }
    }
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown problem type {s:?}"))
    }
}

/// Shared instance form for LP, IP, and MILP.
///
/// `lower_bounds`, `upper_bounds`, and `integrality` may be empty, meaning
/// all zeros, all unbounded, and all continuous respectively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpInstance {
    pub objective: Direction,
    pub c: Vec<f64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lower_bounds: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "bound_array")]
    pub upper_bounds: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub integrality: Vec<bool>,
}

impl LpInstance {
    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    /// Effective lower bound of variable `j` (0 when unspecified).
    pub fn lower(&self, j: usize) -> f64 {
        self.lower_bounds.get(j).copied().unwrap_or(0.0)
    }

    /// Effective upper bound of variable `j` (+inf when unspecified).
    pub fn upper(&self, j: usize) -> f64 {
        self.upper_bounds.get(j).copied().unwrap_or(f64::INFINITY)
    }

    pub fn is_integer(&self, j: usize) -> bool {
        self.integrality.get(j).copied().unwrap_or(false)
    }

    /// Which of LP / IP / MILP the integrality flags describe.
    pub fn family(&self) -> ProblemType {
        let n_int = self.integrality.iter().filter(|&&f| f).count();
        if n_int == 0 {
            ProblemType::Lp
        } else if n_int == self.num_vars() {
            ProblemType::Ip
        } else {
            ProblemType::Milp
        }
    }
}

/// Serialize/deserialize an f64 array where +inf appears as `"infinity"`.
mod bound_array {
    use alloc::string::String;
    use alloc::vec::Vec;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Num(f64),
        Word(String),
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for &x in v {
            if x == f64::INFINITY {
                seq.serialize_element("infinity")?;
            } else {
                seq.serialize_element(&x)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        entries
            .into_iter()
            .map(|e| match e {
                Entry::Num(x) => Ok(x),
                Entry::Word(w) if w == "infinity" => Ok(f64::INFINITY),
                Entry::Word(w) => Err(D::Error::custom(alloc::format!(
                    "bound entry {w:?} is neither a number nor \"infinity\""
                ))),
            })
            .collect()
    }
}

/// Traveling salesman instance over a full distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    pub n: usize,
    pub dist: Vec<Vec<f64>>,
    pub symmetric: bool,
}

/// One capacitated arc of a flow network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
}

/// Maximum flow instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxFlowInstance {
    pub node_count: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
}

/// Assignment instance: `cost[i][j]` is the cost (or gain) of giving task
/// `j` to agent `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentInstance {
    pub n: usize,
    pub cost: Vec<Vec<f64>>,
    pub objective: Direction,
}

/// One arc of a min-cost-flow network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McfArc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
    pub unit_cost: f64,
}

/// Minimum cost flow instance. `supplies[i] > 0` is a source, `< 0` a sink;
/// the vector must sum to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinCostFlowInstance {
    pub node_count: usize,
    pub arcs: Vec<McfArc>,
    pub supplies: Vec<f64>,
}

/// Tagged union over the seven families; this is the instance file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data")]
pub enum ProblemInstance {
    #[serde(rename = "LP")]
    Lp(LpInstance),
    #[serde(rename = "IP")]
    Ip(LpInstance),
    #[serde(rename = "MILP")]
    Milp(LpInstance),
    #[serde(rename = "TSP")]
    Tsp(TspInstance),
    #[serde(rename = "MF")]
    Mf(MaxFlowInstance),
    #[serde(rename = "AP")]
    Ap(AssignmentInstance),
    #[serde(rename = "MCF")]
    Mcf(MinCostFlowInstance),
}

impl ProblemInstance {
    pub fn problem_type(&self) -> ProblemType {
        match self {
            ProblemInstance::Lp(_) => ProblemType::Lp,
            ProblemInstance::Ip(_) => ProblemType::Ip,
            ProblemInstance::Milp(_) => ProblemType::Milp,
            ProblemInstance::Tsp(_) => ProblemType::Tsp,
            ProblemInstance::Mf(_) => ProblemType::Mf,
            ProblemInstance::Ap(_) => ProblemType::Ap,
            ProblemInstance::Mcf(_) => ProblemType::Mcf,
        }
    }

    pub fn as_lp(&self) -> Option<&LpInstance> {
        match self {
            ProblemInstance::Lp(lp) | ProblemInstance::Ip(lp) | ProblemInstance::Milp(lp) => {
                Some(lp)
            }
            _ => None,
        }
    }
}

fn check_finite(out: &mut Vec<String>, what: &str, values: &[f64]) {
    for (i, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            out.push(format!("{what}[{i}] = {x} is not finite"));
        }
    }
}

fn validate_lp_family(lp: &LpInstance, expected: ProblemType, out: &mut Vec<String>) {
    let n = lp.num_vars();
    let m = lp.num_rows();
    if n == 0 {
        out.push("instance has no variables".into());
    }
    if m == 0 {
        out.push("instance has no constraint rows".into());
    }
    check_finite(out, "c", &lp.c);
    check_finite(out, "b", &lp.b);
    if lp.a.len() != m {
        out.push(format!("A has {} rows but b has {m} entries", lp.a.len()));
    }
    if lp.senses.len() != m {
        out.push(format!(
            "senses has {} entries but b has {m}",
            lp.senses.len()
        ));
    }
    for (i, row) in lp.a.iter().enumerate() {
        if row.len() != n {
            out.push(format!("A row {i} has {} entries but c has {n}", row.len()));
        }
        check_finite(out, "A row", row);
    }
    if !lp.lower_bounds.is_empty() && lp.lower_bounds.len() != n {
        out.push(format!(
            "lower_bounds has {} entries but c has {n}",
            lp.lower_bounds.len()
        ));
    }
    if !lp.upper_bounds.is_empty() && lp.upper_bounds.len() != n {
        out.push(format!(
            "upper_bounds has {} entries but c has {n}",
            lp.upper_bounds.len()
        ));
    }
    check_finite(out, "lower_bounds", &lp.lower_bounds);
    for (j, &u) in lp.upper_bounds.iter().enumerate() {
        if u.is_nan() || u == f64::NEG_INFINITY {
            out.push(format!("upper_bounds[{j}] = {u} is invalid"));
        }
    }
    for j in 0..n {
        if lp.lower(j) > lp.upper(j) {
            out.push(format!(
                "lower_bounds[{j}] = {} exceeds upper_bounds[{j}] = {}",
                lp.lower(j),
                lp.upper(j)
            ));
        }
    }
    if !lp.integrality.is_empty() && lp.integrality.len() != n {
        out.push(format!(
            "integrality has {} entries but c has {n}",
            lp.integrality.len()
        ));
    }
    if lp.integrality.len() == n || lp.integrality.is_empty() {
        let family = lp.family();
        if family != expected {
            out.push(format!(
                "integrality flags describe an {} instance but the type tag says {}",
                family.name(),
                expected.name()
            ));
        }
    }
}

fn validate_square(out: &mut Vec<String>, what: &str, n: usize, matrix: &[Vec<f64>]) {
    if matrix.len() != n {
        out.push(format!("{what} has {} rows but n = {n}", matrix.len()));
        return;
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            out.push(format!("{what} row {i} has {} entries but n = {n}", row.len()));
        }
        check_finite(out, what, row);
    }
}

/// Checks structural and value constraints; an empty result means valid.
pub fn validate_instance(instance: &ProblemInstance) -> Vec<String> {
    let mut out = Vec::new();
    match instance {
        ProblemInstance::Lp(lp) => validate_lp_family(lp, ProblemType::Lp, &mut out),
        ProblemInstance::Ip(lp) => validate_lp_family(lp, ProblemType::Ip, &mut out),
        ProblemInstance::Milp(lp) => validate_lp_family(lp, ProblemType::Milp, &mut out),
        ProblemInstance::Tsp(tsp) => {
            if tsp.n < 2 {
                out.push(format!("n = {} but a tour needs at least 2 cities", tsp.n));
            }
            validate_square(&mut out, "dist", tsp.n, &tsp.dist);
            if tsp.dist.len() == tsp.n && tsp.dist.iter().all(|r| r.len() == tsp.n) {
                for i in 0..tsp.n {
                    if tsp.dist[i][i] != 0.0 {
                        out.push(format!(
                            "dist[{i}][{i}] = {} (diagonal must be 0)",
                            tsp.dist[i][i]
                        ));
                    }
                    for j in 0..tsp.n {
                        if tsp.dist[i][j] < 0.0 {
                            out.push(format!("dist[{i}][{j}] = {} is negative", tsp.dist[i][j]));
                        }
                        if tsp.symmetric && j > i && tsp.dist[i][j] != tsp.dist[j][i] {
                            out.push(format!(
                                "symmetric instance but dist[{i}][{j}] = {} != dist[{j}][{i}] = {}",
                                tsp.dist[i][j], tsp.dist[j][i]
                            ));
                        }
                    }
                }
            }
        }
        ProblemInstance::Mf(mf) => {
            if mf.node_count < 2 {
                out.push(format!("node_count = {} but need at least 2", mf.node_count));
            }
            if mf.source >= mf.node_count {
                out.push(format!(
                    "source = {} out of range for {} nodes",
                    mf.source, mf.node_count
                ));
            }
            if mf.sink >= mf.node_count {
                out.push(format!(
                    "sink = {} out of range for {} nodes",
                    mf.sink, mf.node_count
                ));
            }
            if mf.source == mf.sink {
                out.push("source and sink are the same node".into());
            }
            for (i, arc) in mf.arcs.iter().enumerate() {
                if arc.from >= mf.node_count || arc.to >= mf.node_count {
                    out.push(format!(
                        "arc {i} ({} -> {}) references a node out of range for {} nodes",
                        arc.from, arc.to, mf.node_count
                    ));
                }
                if arc.from == arc.to {
                    out.push(format!("arc {i} is a self-loop on node {}", arc.from));
                }
                if !(arc.capacity >= 0.0) || !arc.capacity.is_finite() {
                    out.push(format!("arc {i} capacity {} is invalid", arc.capacity));
                }
            }
        }
        ProblemInstance::Ap(ap) => {
            if ap.n == 0 {
                out.push("n = 0 but need at least 1 agent".into());
            }
            validate_square(&mut out, "cost", ap.n, &ap.cost);
        }
        ProblemInstance::Mcf(mcf) => {
            if mcf.node_count < 2 {
                out.push(format!("node_count = {} but need at least 2", mcf.node_count));
            }
            if mcf.supplies.len() != mcf.node_count {
                out.push(format!(
                    "supplies has {} entries but node_count = {}",
                    mcf.supplies.len(),
                    mcf.node_count
                ));
            }
            check_finite(&mut out, "supplies", &mcf.supplies);
            let total: f64 = mcf.supplies.iter().sum();
            if total.abs() > 1e-9 {
                out.push(format!("supplies sum to {total} (must sum to 0)"));
            }
            for (i, arc) in mcf.arcs.iter().enumerate() {
                if arc.from >= mcf.node_count || arc.to >= mcf.node_count {
                    out.push(format!(
                        "arc {i} ({} -> {}) references a node out of range for {} nodes",
                        arc.from, arc.to, mcf.node_count
                    ));
                }
                if arc.from == arc.to {
                    out.push(format!("arc {i} is a self-loop on node {}", arc.from));
                }
                if !(arc.capacity >= 0.0) || !arc.capacity.is_finite() {
                    out.push(format!("arc {i} capacity {} is invalid", arc.capacity));
                }
                if !arc.unit_cost.is_finite() {
                    out.push(format!("arc {i} unit_cost {} is not finite", arc.unit_cost));
                }
            }
        }
    }
    out
}
