//! Tool schemas for the seven solver APIs: parameter names, value-shape
//! descriptors, and required flags, in the order used for canonical call
//! serialization and for the API documentation shown to text generators.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::instance::ProblemType;

/// Value shape a call argument must have for a given parameter slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// The string "max" or "min".
    Direction,
    /// A scalar number that must be integral within 1e-9.
    Integer,
    /// A flat array of numbers.
    NumberVector,
    /// A flat array of numbers where the string "infinity" is also allowed.
    BoundVector,
    /// An array of constraint senses, each "<=", ">=", or "=".
    SenseVector,
    /// A flat array of booleans.
    BoolVector,
    /// An array of equal-length numeric rows.
    NumberMatrix,
    /// An array of [from, to, capacity] triples with integral endpoints.
    ArcTriples,
    /// An array of [from, to, capacity, unit_cost] quadruples.
    ArcQuads,
}

impl ParamKind {
    /// Human-readable shape description used in rendered API docs.
    pub fn descriptor(&self) -> &'static str {
        match self {
            ParamKind::Direction => "string, \"max\" or \"min\"",
            ParamKind::Integer => "integer",
            ParamKind::NumberVector => "array of numbers",
            ParamKind::BoundVector => "array of numbers or \"infinity\"",
            ParamKind::SenseVector => "array of \"<=\", \">=\", or \"=\"",
            ParamKind::BoolVector => "array of booleans",
            ParamKind::NumberMatrix => "array of numeric rows",
            ParamKind::ArcTriples => "array of [from, to, capacity] triples",
            ParamKind::ArcQuads => "array of [from, to, capacity, unit_cost] quadruples",
        }
    }

    fn from_descriptor(text: &str) -> Option<Self> {
        [
            ParamKind::Direction,
            ParamKind::Integer,
            ParamKind::NumberVector,
            ParamKind::BoundVector,
            ParamKind::SenseVector,
            ParamKind::BoolVector,
            ParamKind::NumberMatrix,
            ParamKind::ArcTriples,
            ParamKind::ArcQuads,
        ]
        .into_iter()
        .find(|kind| kind.descriptor() == text)
    }
}

impl Serialize for ParamKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.descriptor())
    }
}

impl<'de> Deserialize<'de> for ParamKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        ParamKind::from_descriptor(&text)
            .ok_or_else(|| D::Error::custom(format_args!("unknown parameter type {text:?}")))
    }
}

/// One named parameter slot of a tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ParamKind,
    pub required: bool,
    pub description: String,
}

fn param(name: &str, kind: ParamKind, required: bool, description: &str) -> ParamSpec {
    ParamSpec {
        name: String::from(name),
        kind,
        required,
        description: String::from(description),
    }
}

/// A callable tool: its name, a one-line description, and its parameters
/// in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolSchema {
    pub name: String,
    pub description: String,
    pub parameters: Vec<ParamSpec>,
}

impl ToolSchema {
    pub fn param(&self, name: &str) -> Option<&ParamSpec> {
        self.parameters.iter().find(|p| p.name == name)
    }
}

/// Tool name for each problem type.
pub fn tool_name(problem_type: ProblemType) -> &'static str {
    match problem_type {
        ProblemType::Lp => "solve_lp",
        ProblemType::Ip => "solve_ip",
        ProblemType::Milp => "solve_milp",
        ProblemType::Tsp => "solve_tsp",
        ProblemType::Mf => "solve_max_flow",
        ProblemType::Ap => "solve_assignment",
        ProblemType::Mcf => "solve_min_cost_flow",
    }
}

/// The fixed set of seven tool schemas, one per problem type.
#[derive(Debug, Clone, PartialEq)]
pub struct ToolRegistry {
    tools: Vec<ToolSchema>,
}

fn lp_family_params(integrality: Option<&str>) -> Vec<ParamSpec> {
    let mut params = vec![
        param(
            "objective",
            ParamKind::Direction,
            true,
            "optimization direction",
        ),
        param(
            "c",
            ParamKind::NumberVector,
            true,
            "objective coefficients, one per variable",
        ),
        param(
            "A",
            ParamKind::NumberMatrix,
            true,
            "constraint coefficients, one row per constraint",
        ),
        param(
            "senses",
            ParamKind::SenseVector,
            true,
            "constraint sense for each row",
        ),
        param(
            "b",
            ParamKind::NumberVector,
            true,
            "right-hand side for each row",
        ),
    ];
    if let Some(description) = integrality {
        params.push(param("integrality", ParamKind::BoolVector, true, description));
    }
    params.push(param(
        "lower_bounds",
        ParamKind::NumberVector,
        false,
        "per-variable lower bounds; defaults to 0",
    ));
    params.push(param(
        "upper_bounds",
        ParamKind::BoundVector,
        false,
        "per-variable upper bounds, \"infinity\" for none; defaults to \"infinity\"",
    ));
    params
}

impl ToolRegistry {
    /// Builds the registry of the seven solver tools.
    pub fn builtin() -> Self {
        let tools = vec![
            ToolSchema {
                name: String::from("solve_lp"),
                description: String::from(
                    "Solve a linear program: optimize c.x subject to Ax (<=, >=, =) b \
                     with variable bounds; all variables are continuous.",
                ),
                parameters: lp_family_params(None),
            },
            ToolSchema {
                name: String::from("solve_ip"),
                description: String::from(
                    "Solve a pure integer linear program: like solve_lp, but every \
                     variable must take an integer value.",
                ),
                parameters: lp_family_params(None),
            },
            ToolSchema {
                name: String::from("solve_milp"),
                description: String::from(
                    "Solve a mixed-integer linear program: like solve_lp, with a \
                     per-variable flag selecting which variables must be integer.",
                ),
                parameters: lp_family_params(Some(
                    "true for each variable that must take an integer value",
                )),
            },
            ToolSchema {
                name: String::from("solve_tsp"),
                description: String::from(
                    "Solve a traveling salesman problem exactly: find the cheapest \
                     round trip that visits every city once and returns to the start.",
                ),
                parameters: vec![param(
                    "dist",
                    ParamKind::NumberMatrix,
                    true,
                    "square matrix of travel costs; entry [i][j] is the cost of the leg from city i to city j",
                )],
            },
            ToolSchema {
                name: String::from("solve_max_flow"),
                description: String::from(
                    "Compute the maximum flow from a source node to a sink node over \
                     capacitated directed arcs.",
                ),
                parameters: vec![
                    param(
                        "node_count",
                        ParamKind::Integer,
                        true,
                        "number of nodes, numbered from 0",
                    ),
                    param(
                        "arcs",
                        ParamKind::ArcTriples,
                        true,
                        "directed arcs as [from, to, capacity] triples",
                    ),
                    param("source", ParamKind::Integer, true, "source node index"),
                    param("sink", ParamKind::Integer, true, "sink node index"),
                ],
            },
            ToolSchema {
                name: String::from("solve_assignment"),
                description: String::from(
                    "Solve an assignment problem: match n agents to n tasks one-to-one \
                     at optimal total cost.",
                ),
                parameters: vec![
                    param(
                        "objective",
                        ParamKind::Direction,
                        true,
                        "optimization direction",
                    ),
                    param(
                        "cost",
                        ParamKind::NumberMatrix,
                        true,
                        "square matrix; entry [i][j] is the cost of assigning agent i to task j",
                    ),
                ],
            },
            ToolSchema {
                name: String::from("solve_min_cost_flow"),
                description: String::from(
                    "Route all supplies to all demands over capacitated directed arcs \
                     at minimum total shipping cost.",
                ),
                parameters: vec![
                    param(
                        "node_count",
                        ParamKind::Integer,
                        true,
                        "number of nodes, numbered from 0",
                    ),
                    param(
                        "arcs",
                        ParamKind::ArcQuads,
                        true,
                        "directed arcs as [from, to, capacity, unit_cost] quadruples",
                    ),
                    param(
                        "supplies",
                        ParamKind::NumberVector,
                        true,
                        "net supply per node; positive ships out, negative receives, and the entries must sum to zero",
                    ),
                ],
            },
        ];
        ToolRegistry { tools }
    }

    /// A registry over an explicit tool list.
    #[cfg(test)]
    pub(crate) fn from_tools(tools: Vec<ToolSchema>) -> Self {
        ToolRegistry { tools }
    }

    pub fn get(&self, name: &str) -> Option<&ToolSchema> {
        self.tools.iter().find(|t| t.name == name)
    }

    pub fn for_type(&self, problem_type: ProblemType) -> &ToolSchema {
        self.get(tool_name(problem_type))
            .expect("registry covers every problem type")
    }

    pub fn tools(&self) -> &[ToolSchema] {
        &self.tools
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tools.iter().map(|t| t.name.as_str())
    }

    /// Exports the registry as a JSON array of schemas.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.tools).expect("schemas serialize")
    }
}
