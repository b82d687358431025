//! Exact solvers for the seven problem families, all deterministic: the
//! same instance always yields the same status, objective, and assignment.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::instance::{validate_instance, ProblemInstance};

mod assignment;
mod branch_bound;
mod max_flow;
mod min_cost_flow;
mod simplex;
mod tsp;

pub use simplex::solve_lp;
pub use branch_bound::solve_milp;
pub use tsp::solve_tsp;
pub use max_flow::solve_max_flow;
pub use assignment::solve_assignment;
pub use min_cost_flow::solve_min_cost_flow;

/// A value counts as integral when within this distance of an integer.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

/// Tolerance for comparing an objective against a reference value:
/// absolute for small magnitudes, relative for large ones.
pub fn objective_tolerance(reference: f64) -> f64 {
    let rel = 1e-6 * reference.abs();
    if rel > 1e-6 {
        rel
    } else {
        1e-6
    }
}

/// Caps and tolerances shared by all solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub feasibility_tolerance: f64,
    pub max_simplex_iterations: usize,
    pub max_bnb_nodes: usize,
    pub tsp_city_cap: usize,
    pub max_flow_augmentations: usize,
    pub max_mcf_augmentations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feasibility_tolerance: 1e-6,
            max_simplex_iterations: 10_000,
            max_bnb_nodes: 100_000,
            tsp_city_cap: 12,
            max_flow_augmentations: 100_000,
            max_mcf_augmentations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Error,
}

/// Outcome of a solve. `objective` and `assignment` are present exactly when
/// the status is `Optimal`; `message` is present exactly when it is `Error`
/// or carries extra context on `Unbounded`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub status: SolverStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SolverResult {
    pub fn optimal(objective: f64, assignment: BTreeMap<String, f64>) -> Self {
        SolverResult {
            status: SolverStatus::Optimal,
            objective: Some(objective),
            assignment: Some(assignment),
            message: None,
        }
    }

    pub fn infeasible() -> Self {
        SolverResult {
            status: SolverStatus::Infeasible,
            objective: None,
            assignment: None,
            message: None,
        }
    }

    pub fn unbounded() -> Self {
        SolverResult {
            status: SolverStatus::Unbounded,
            objective: None,
            assignment: None,
            message: None,
        }
    }

    pub fn error(message: impl Into<String>) -> Self {
        SolverResult {
            status: SolverStatus::Error,
            objective: None,
            assignment: None,
            message: Some(message.into()),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolverStatus::Optimal
    }
}

pub(crate) fn dot(c: &[f64], x: &[f64]) -> f64 {
    c.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Names LP-family variables `x1..xn` in an assignment map.
pub(crate) fn variable_assignment(x: &[f64]) -> BTreeMap<String, f64> {
    x.iter()
        .enumerate()
        .map(|(j, &v)| (format!("x{}", j + 1), v))
        .collect()
}

/// Validates, then routes to the family solver. LP / IP / MILP are told
/// apart by their integrality flags (validation has already checked the
/// flags agree with the type tag).
pub fn solve(instance: &ProblemInstance, config: &SolverConfig) -> SolverResult {
    let violations = validate_instance(instance);
    if !violations.is_empty() {
        return SolverResult::error(format!("invalid instance: {}", violations.join("; ")));
    }
    match instance {
        ProblemInstance::Lp(lp) => solve_lp(lp, config),
        ProblemInstance::Ip(lp) | ProblemInstance::Milp(lp) => solve_milp(lp, config),
        ProblemInstance::Tsp(tsp) => solve_tsp(tsp, config),
        ProblemInstance::Mf(mf) => solve_max_flow(mf, config),
        ProblemInstance::Ap(ap) => solve_assignment(ap, config),
        ProblemInstance::Mcf(mcf) => solve_min_cost_flow(mcf, config),
    }
}
