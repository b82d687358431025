//! Execution-based filtering and dialogue formatting.
//!
//! A generated answer survives only if its embedded call, executed against
//! the solvers, reproduces the instance's ground-truth objective; every
//! drop carries a reason. Survivors are cast into three-message dialogue
//! records whose system text lists the correct tool among three distractors.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::instance::ProblemType;
use crate::render::RenderFormat;
use crate::sampler::KeyInfo;
use crate::schema::{ToolRegistry, ToolSchema};
use crate::solver::{objective_tolerance, SolverConfig};
use crate::toolcall::{dispatch, extract_call, ExtractError};

/// Why a pair was kept or dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterReason {
    /// The answer's call executed to the ground-truth objective.
    Match,
    /// The call executed to an optimum, but a different one.
    ObjectiveMismatch,
    /// The call was rejected by the schema check or failed to solve to
    /// optimality.
    CallExecutionError,
    /// The answer contains no registered tool call.
    NoCallFound,
    /// A call was present but its text does not parse.
    ParseError,
    /// The generation service itself failed; no answer text exists.
    GenerationError,
}

impl FilterReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterReason::Match => "match",
            FilterReason::ObjectiveMismatch => "objective_mismatch",
            FilterReason::CallExecutionError => "call_execution_error",
            FilterReason::NoCallFound => "no_call_found",
            FilterReason::ParseError => "parse_error",
            FilterReason::GenerationError => "generation_error",
        }
    }

    pub const ALL: [FilterReason; 6] = [
        FilterReason::Match,
        FilterReason::ObjectiveMismatch,
        FilterReason::CallExecutionError,
        FilterReason::NoCallFound,
        FilterReason::ParseError,
        FilterReason::GenerationError,
    ];
}

impl core::fmt::Display for FilterReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The filter's decision on one problem-answer pair. `kept` holds exactly
/// when `reason` is [`FilterReason::Match`]; the constructors keep it that
/// way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub kept: bool,
    pub reason: FilterReason,
    pub generated_objective: Option<f64>,
}

impl FilterVerdict {
    pub fn kept(objective: f64) -> Self {
        FilterVerdict {
            kept: true,
            reason: FilterReason::Match,
            generated_objective: Some(objective),
        }
    }

    pub fn dropped(reason: FilterReason, generated_objective: Option<f64>) -> Self {
        assert!(
            reason != FilterReason::Match,
            "a dropped pair cannot carry the match reason"
        );
        FilterVerdict {
            kept: false,
            reason,
            generated_objective,
        }
    }
}

/// Executes the answer's embedded call and compares its objective against
/// the instance's ground truth.
pub fn filter_pair(
    info: &KeyInfo,
    generated_answer: &str,
    registry: &ToolRegistry,
    config: &SolverConfig,
) -> FilterVerdict {
    let truth = match info.ground_truth.objective {
        Some(truth) => truth,
        // The sampler only emits optimally solved instances; a missing
        // objective means the record is unusable, not that the answer is.
        None => return FilterVerdict::dropped(FilterReason::GenerationError, None),
    };
    let call = match extract_call(generated_answer, registry) {
        Ok(call) => call,
        Err(ExtractError::NoCall) => {
            return FilterVerdict::dropped(FilterReason::NoCallFound, None)
        }
        Err(ExtractError::Malformed(_)) => {
            return FilterVerdict::dropped(FilterReason::ParseError, None)
        }
    };
    match dispatch(&call, registry, config).objective {
        Some(objective) if (objective - truth).abs() <= objective_tolerance(truth) => {
            FilterVerdict::kept(objective)
        }
        Some(objective) => {
            FilterVerdict::dropped(FilterReason::ObjectiveMismatch, Some(objective))
        }
        None => FilterVerdict::dropped(FilterReason::CallExecutionError, None),
    }
}

/// The registry cannot seat one correct tool and three distractors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DialogueError {
    RegistryTooSmall { available: usize },
}

impl core::fmt::Display for DialogueError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DialogueError::RegistryTooSmall { available } => write!(
                f,
                "distractor selection needs at least 4 registered tools, found {available}"
            ),
        }
    }
}

impl core::error::Error for DialogueError {}

/// Draws three schemas other than `correct`, uniformly without replacement.
pub fn select_distractors(
    correct: &ToolSchema,
    registry: &ToolRegistry,
    rng: &mut impl Rng,
) -> Result<Vec<ToolSchema>, DialogueError> {
    let others: Vec<&ToolSchema> = registry
        .tools()
        .iter()
        .filter(|tool| tool.name != correct.name)
        .collect();
    if others.len() < 3 {
        return Err(DialogueError::RegistryTooSmall {
            available: registry.tools().len(),
        });
    }
    Ok(others
        .choose_multiple(rng, 3)
        .map(|tool| (*tool).clone())
        .collect())
}

/// Everything about a record that is not message text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialogueMeta {
    pub problem_type: ProblemType,
    pub context: String,
    pub render_format: RenderFormat,
    pub seed_index: u64,
    pub ground_truth_objective: f64,
}

/// One training dialogue: a tool-listing system message, the problem
/// statement as the user message, and the reasoned answer (ending in its
/// call) as the assistant message.
///
/// Serializes as `{"messages":[{"role":...,"content":...},...],"meta":{...}}`
/// with the roles fixed to system, user, assistant in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct DialogueRecord {
    pub system: String,
    pub user: String,
    pub assistant: String,
    pub meta: DialogueMeta,
}

impl DialogueRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("dialogue records serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

#[derive(Serialize)]
struct WireMessageRef<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct WireRecordRef<'a> {
    messages: [WireMessageRef<'a>; 3],
    meta: &'a DialogueMeta,
}

#[derive(Deserialize)]
struct WireMessage {
    role: String,
    content: String,
}

#[derive(Deserialize)]
struct WireRecord {
    messages: Vec<WireMessage>,
    meta: DialogueMeta,
}

impl Serialize for DialogueRecord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WireRecordRef {
            messages: [
                WireMessageRef {
                    role: "system",
                    content: &self.system,
                },
                WireMessageRef {
                    role: "user",
                    content: &self.user,
                },
                WireMessageRef {
                    role: "assistant",
                    content: &self.assistant,
                },
            ],
            meta: &self.meta,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DialogueRecord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireRecord::deserialize(deserializer)?;
        let roles: Vec<&str> = wire.messages.iter().map(|m| m.role.as_str()).collect();
        if roles != ["system", "user", "assistant"] {
            return Err(serde::de::Error::custom(format!(
                "expected roles [system, user, assistant], found {roles:?}"
            )));
        }
        let mut contents = wire.messages.into_iter().map(|m| m.content);
        Ok(DialogueRecord {
            system: contents.next().unwrap(),
            user: contents.next().unwrap(),
            assistant: contents.next().unwrap(),
            meta: wire.meta,
        })
    }
}

/// Instruction text that precedes the tool list in every system message.
pub const SYSTEM_PREAMBLE: &str = "You are an operations research assistant. Read the problem, \
reason step by step, then finish your reply with exactly one call to the one listed tool that \
fits the problem, written as name(param=value, ...) on its own line. Tools:";

/// Assembles the three messages for a kept pair. The system text is the
/// fixed preamble followed by a JSON array holding the correct tool's
/// schema and three distractors in shuffled order.
pub fn format_dialogue(
    info: &KeyInfo,
    statement: &str,
    answer: &str,
    registry: &ToolRegistry,
    seed_index: u64,
    rng: &mut impl Rng,
) -> Result<DialogueRecord, DialogueError> {
    let correct = registry.for_type(info.problem_type);
    let mut tools = select_distractors(correct, registry, rng)?;
    tools.push(correct.clone());
    tools.shuffle(rng);
    let listing = serde_json::to_string_pretty(&tools).expect("schemas serialize");
    Ok(DialogueRecord {
        system: format!("{SYSTEM_PREAMBLE}\n{listing}"),
        user: statement.to_string(),
        assistant: answer.to_string(),
        meta: DialogueMeta {
            problem_type: info.problem_type,
            context: info.context.clone(),
            render_format: info.render_format,
            seed_index,
            ground_truth_objective: info
                .ground_truth
                .objective
                .expect("formatted pairs passed the filter"),
        },
    })
}
