//! Text-generation contract and the offline mock.
//!
//! Dataset synthesis needs one external capability: turning a prompt into
//! prose, once to narrate a problem statement and once to write a reasoned
//! answer. [`TextGenerator`] captures that capability; [`MockGenerator`]
//! implements it deterministically so the whole pipeline runs offline. The
//! mock also carries a corruption knob that, with a configured probability,
//! perturbs one numeric argument of the answer's call so the execution
//! filter downstream has real mistakes to catch.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::num;
use crate::schema::ToolRegistry;
use crate::solver::{objective_tolerance, SolverConfig, SolverResult};
use crate::toolcall::{dispatch, extract_call, serialize_call, value_string, ToolCall, Value};

/// How a generation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinishReason {
    Complete,
    Length,
    Error,
}

/// Token counts for one exchange, as reported by the provider or estimated
/// by whitespace splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenUsage {
    pub prompt_tokens: u64,
    pub output_tokens: u64,
}

/// One generation request.
#[derive(Debug, Clone, PartialEq)]
pub struct GenRequest {
    pub prompt: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
    /// Opaque correlation id echoed through logs and batch bookkeeping.
    pub request_tag: String,
}

impl GenRequest {
    pub fn new(prompt: impl Into<String>, request_tag: impl Into<String>) -> Self {
        GenRequest {
            prompt: prompt.into(),
            temperature: 0.7,
            max_output_tokens: 4096,
            request_tag: request_tag.into(),
        }
    }

    /// The prompt must be nonempty, the temperature within [0, 2], and the
    /// token budget positive.
    pub fn validate(&self) -> Result<(), String> {
        if self.prompt.is_empty() {
            return Err("the prompt is empty".to_string());
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(format!("temperature {} is outside [0, 2]", self.temperature));
        }
        if self.max_output_tokens == 0 {
            return Err("max_output_tokens must be positive".to_string());
        }
        Ok(())
    }
}

/// One generation outcome. `text` is nonempty unless `finish_reason` is
/// `Error`, in which case `error` carries the diagnostic instead.
#[derive(Debug, Clone, PartialEq)]
pub struct GenResponse {
    pub text: String,
    pub finish_reason: FinishReason,
    pub usage: GenUsage,
    pub error: Option<String>,
}

impl GenResponse {
    pub fn failure(message: impl Into<String>) -> Self {
        GenResponse {
            text: String::new(),
            finish_reason: FinishReason::Error,
            usage: GenUsage::default(),
            error: Some(message.into()),
        }
    }

    pub fn is_error(&self) -> bool {
        self.finish_reason == FinishReason::Error
    }
}

/// Anything that can turn a prompt into text: the HTTP client in the
/// companion crate, the offline mock below, or a test double.
pub trait TextGenerator: Send + Sync {
    fn generate(&self, request: &GenRequest) -> GenResponse;
}

/// Identifies answer prompts; present in the answer template's API section.
const ANSWER_PROMPT_MARKER: &str = "Available API:";
/// Identifies problem prompts and opens their key-information block.
const PROBLEM_PROMPT_MARKER: &str = "Key information:";
/// Closes the key-information block in the stock problem template.
const PROBLEM_PROMPT_TAIL: &str = "\n\nReply with the problem statement only.";

/// Deterministic stand-in for the generation service.
///
/// Problem prompts are answered with a short narrative wrapped around the
/// prompt's key-information block (which carries the reference call).
/// Answer prompts are answered with step-by-step reasoning that ends in the
/// reference call found in the prompt. With `corruption_probability` > 0,
/// that fraction of answers instead ends in a call with one numeric
/// argument perturbed until the solved outcome actually changes, so the
/// execution filter downstream drops exactly the corrupted share. All
/// randomness is keyed on the prompt text and the mock's seed: equal
/// prompts yield byte-equal responses.
#[derive(Debug, Clone)]
pub struct MockGenerator {
    registry: ToolRegistry,
    solver: SolverConfig,
    corruption_probability: f64,
    seed: u64,
}

impl MockGenerator {
    /// `corruption_probability` must lie in [0, 1].
    pub fn new(corruption_probability: f64, seed: u64) -> Self {
        assert!(
            (0.0..=1.0).contains(&corruption_probability),
            "corruption probability {corruption_probability} is outside [0, 1]"
        );
        MockGenerator {
            registry: ToolRegistry::builtin(),
            solver: SolverConfig::default(),
            corruption_probability,
            seed,
        }
    }

    /// A mock that always answers with the exact reference call.
    pub fn faithful() -> Self {
        MockGenerator::new(0.0, 0)
    }

    fn corruption_rng(&self, prompt: &str) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(b"orforge.mock.v1");
        hasher.update(self.seed.to_le_bytes());
        hasher.update(prompt.as_bytes());
        ChaCha8Rng::from_seed(hasher.finalize().into())
    }

    fn problem_text(&self, prompt: &str) -> Result<String, String> {
        let (head, rest) = prompt
            .split_once(PROBLEM_PROMPT_MARKER)
            .expect("caller checked the marker");
        let mut block = rest.trim_start_matches('\n');
        if let Some(idx) = block.rfind(PROBLEM_PROMPT_TAIL) {
            block = &block[..idx];
        }
        let block = block.trim_end();
        if block.is_empty() {
            return Err("the key-information block is empty".to_string());
        }
        let industry = head
            .split_once("problem set in the ")
            .and_then(|(_, tail)| tail.split_once(" industry."))
            .map(|(name, _)| name);
        let opening = match industry {
            Some(name) => format!("Here is a planning exercise from the {name} industry."),
            None => "Here is a planning exercise.".to_string(),
        };
        Ok(format!(
            "{opening} The team has gathered the figures below and needs the best \
             achievable outcome before committing the plan.\n\n{block}\n\nEvery figure \
             above is exact. Use the numbers as stated, without rounding or rescaling, \
             and report the optimal value of the objective."
        ))
    }

    fn answer_text(&self, prompt: &str) -> Result<String, String> {
        let reference = extract_call(prompt, &self.registry)
            .map_err(|e| format!("the prompt carries no usable reference call: {e}"))?;
        let mut emitted = reference.clone();
        if self.corruption_probability > 0.0 {
            let mut rng = self.corruption_rng(prompt);
            if rng.gen_bool(self.corruption_probability) {
                if let Some(corrupted) =
                    corrupt_call(&reference, &self.registry, &self.solver, &mut rng)
                {
                    emitted = corrupted;
                }
            }
        }
        let call_text = serialize_call(&emitted, &self.registry)
            .map_err(|e| format!("the reference call does not serialize: {e}"))?;
        Ok(format!("{}\n{call_text}", reasoning_text(&reference)))
    }
}

impl TextGenerator for MockGenerator {
    fn generate(&self, request: &GenRequest) -> GenResponse {
        if let Err(why) = request.validate() {
            return GenResponse::failure(why);
        }
        let built = if request.prompt.contains(ANSWER_PROMPT_MARKER) {
            self.answer_text(&request.prompt)
        } else if request.prompt.contains(PROBLEM_PROMPT_MARKER) {
            self.problem_text(&request.prompt)
        } else {
            Err("the prompt matches neither the problem nor the answer template".to_string())
        };
        let text = match built {
            Ok(text) => text,
            Err(why) => return GenResponse::failure(why),
        };
        let (text, finish_reason) = clip_tokens(text, request.max_output_tokens as usize);
        GenResponse {
            usage: GenUsage {
                prompt_tokens: token_count(&request.prompt) as u64,
                output_tokens: token_count(&text) as u64,
            },
            text,
            finish_reason,
            error: None,
        }
    }
}

fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Cuts `text` after `max` whitespace-separated tokens, preserving the
/// original spelling of everything kept.
fn clip_tokens(text: String, max: usize) -> (String, FinishReason) {
    let mut tokens = 0usize;
    let mut in_token = false;
    for (offset, ch) in text.char_indices() {
        if ch.is_whitespace() {
            in_token = false;
        } else if !in_token {
            in_token = true;
            tokens += 1;
            if tokens > max {
                let mut clipped = text;
                clipped.truncate(offset);
                clipped.truncate(clipped.trim_end().len());
                return (clipped, FinishReason::Length);
            }
        }
    }
    (text, FinishReason::Complete)
}

fn reasoning_text(call: &ToolCall) -> String {
    let (family, goal) = match call.name.as_str() {
        "solve_lp" => (
            "a linear program",
            "the best mix of continuous activity levels",
        ),
        "solve_ip" => ("an integer program", "the best whole-unit activity levels"),
        "solve_milp" => (
            "a mixed-integer program",
            "the best mix of whole-unit and continuous activity levels",
        ),
        "solve_tsp" => (
            "a traveling salesman problem",
            "the shortest round trip visiting every city exactly once",
        ),
        "solve_max_flow" => (
            "a maximum flow problem",
            "the largest volume that can move from the source to the sink",
        ),
        "solve_assignment" => (
            "an assignment problem",
            "the best one-to-one pairing of agents and tasks",
        ),
        "solve_min_cost_flow" => (
            "a minimum cost flow problem",
            "the cheapest shipping plan that satisfies every supply and demand",
        ),
        _ => ("an optimization problem", "the best feasible decision"),
    };
    let mut out = format!(
        "The statement describes {family}: the goal is {goal}.\n\n\
         Step 1: match the story to the API. The {} tool solves exactly this shape of \
         problem, so the work is transcription, not arithmetic.\n\n\
         Step 2: collect the figures. ",
        call.name
    );
    for (key, value) in &call.args {
        out.push_str(&format!("The {key} argument is {}. ", value_string(value)));
    }
    out.push_str("\n\nStep 3: check the shapes. ");
    out.push_str(&shape_sentence(call));
    out.push_str(
        " Every number comes straight from the statement; nothing was rounded, rescaled, \
         or left out, and the objective direction is the one the problem asks for.\n\n\
         Step 4: submit the call. The solver returns the exact optimum together with the \
         supporting decision values, so no further arithmetic is needed here. Re-reading \
         the statement confirms every limit and every figure, so the call below is final.\n",
    );
    out
}

fn array_len(call: &ToolCall, name: &str) -> Option<usize> {
    call.arg(name)?.as_array().map(<[Value]>::len)
}

fn shape_sentence(call: &ToolCall) -> String {
    match call.name.as_str() {
        "solve_lp" | "solve_ip" | "solve_milp" => {
            match (array_len(call, "c"), array_len(call, "A")) {
                (Some(n), Some(m)) => format!(
                    "There are {n} decision variables and {m} constraint rows, and each \
                     row carries one coefficient per variable, one sense, and one limit."
                ),
                _ => fallback_shape(),
            }
        }
        "solve_tsp" => match array_len(call, "dist") {
            Some(n) => format!("The distance matrix is {n} by {n} with a zero diagonal."),
            None => fallback_shape(),
        },
        "solve_max_flow" => match array_len(call, "arcs") {
            Some(k) => format!(
                "The network lists {k} arcs as from-to-capacity triples, and the source \
                 and sink are valid node indices."
            ),
            None => fallback_shape(),
        },
        "solve_assignment" => match array_len(call, "costs") {
            Some(n) => format!("The cost matrix is square with {n} rows."),
            None => fallback_shape(),
        },
        "solve_min_cost_flow" => match (array_len(call, "arcs"), array_len(call, "supplies")) {
            (Some(k), Some(n)) => format!(
                "The network lists {k} arcs as from-to-capacity-cost rows and one supply \
                 figure for each of the {n} nodes."
            ),
            _ => fallback_shape(),
        },
        _ => fallback_shape(),
    }
}

fn fallback_shape() -> String {
    "The argument shapes match the tool documentation.".to_string()
}

/// A location of one number inside a call: argument index plus the index
/// path into nested arrays.
type SlotPath = (usize, Vec<usize>);

fn numeric_slots(call: &ToolCall) -> Vec<SlotPath> {
    fn walk(value: &Value, arg: usize, path: &mut Vec<usize>, out: &mut Vec<SlotPath>) {
        match value {
            Value::Number(_) => out.push((arg, path.clone())),
            Value::Array(items) => {
                for (j, item) in items.iter().enumerate() {
                    path.push(j);
                    walk(item, arg, path, out);
                    path.pop();
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    for (i, (_, value)) in call.args.iter().enumerate() {
        walk(value, i, &mut Vec::new(), &mut out);
    }
    out
}

fn slot_mut<'a>(value: &'a mut Value, path: &[usize]) -> Option<&'a mut f64> {
    match (value, path.split_first()) {
        (Value::Number(x), None) => Some(x),
        (Value::Array(items), Some((&j, rest))) => slot_mut(items.get_mut(j)?, rest),
        _ => None,
    }
}

fn perturb(value: f64, rng: &mut ChaCha8Rng) -> f64 {
    let moved = if value.abs() < 0.5 {
        let shift = rng.gen_range(0.5..3.0);
        value + if rng.gen_bool(0.5) { shift } else { -shift }
    } else if rng.gen_bool(0.5) {
        value * rng.gen_range(1.1..1.6)
    } else {
        value * rng.gen_range(0.5..0.9)
    };
    if value != num::round(value) {
        return moved;
    }
    let snapped = num::round(moved);
    if snapped != value {
        snapped
    } else {
        value + if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
    }
}

/// Rewrites one numeric argument so that dispatching the call produces a
/// different outcome than the original: a shifted objective, or a failure.
/// Every slot is visited in a shuffled order with several perturbation draws
/// each, so a corruption request only fails on calls where no single number
/// matters, which real instances do not produce.
fn corrupt_call(
    reference: &ToolCall,
    registry: &ToolRegistry,
    solver: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Option<ToolCall> {
    let mut slots = numeric_slots(reference);
    if slots.is_empty() {
        return None;
    }
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.gen_range(0..=i));
    }
    let baseline = dispatch(reference, registry, solver);
    for (arg, path) in &slots {
        for _ in 0..8 {
            let mut candidate = reference.clone();
            let slot = slot_mut(&mut candidate.args[*arg].1, path)?;
            let old = *slot;
            let new = perturb(old, rng);
            if new == old {
                continue;
            }
            *slot = new;
            if outcome_changed(&baseline, &dispatch(&candidate, registry, solver)) {
                return Some(candidate);
            }
        }
    }
    None
}

/// True when the two results would not be interchangeable downstream. The
/// objective margin is far outside the filter's comparison tolerance, so a
/// "changed" outcome is reliably caught.
fn outcome_changed(baseline: &SolverResult, candidate: &SolverResult) -> bool {
    match (baseline.objective, candidate.objective) {
        (Some(a), Some(b)) => (a - b).abs() > 1000.0 * objective_tolerance(a),
        (a, b) => baseline.status != candidate.status || a.is_some() != b.is_some(),
    }
}
