//! Turns instances into text three ways (prose, matrix layout, tables) and
//! builds the two generation prompts. Rendering is lossless: the numerals
//! in the text are exactly the instance's parameters, which
//! [`rendered_params`] and [`extract_numerals`] make checkable. Entities
//! are lettered (activity A, city B) so no stray numerals sneak in.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::instance::{Direction, LpInstance, ProblemInstance, Sense};
use crate::num::format_number;
use crate::sampler::KeyInfo;
use crate::schema::{ToolRegistry, ToolSchema};
use crate::toolcall::{call_for_instance, serialize_call};

/// Problem-generation prompt skeleton; placeholders `{context}` and
/// `{key_information}`.
pub const PROBLEM_TEMPLATE: &str = include_str!("../templates/problem_prompt.txt");

/// Answer-generation prompt skeleton; placeholders `{api_doc}` and
/// `{statement}`. The same template shapes inference-time inputs.
pub const ANSWER_TEMPLATE: &str = include_str!("../templates/answer_prompt.txt");

/// The three expression-diversity formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RenderFormat {
    #[serde(rename = "free_text")]
    FreeText,
    #[serde(rename = "matrix")]
    Matrix,
    #[serde(rename = "tabular")]
    Tabular,
}

impl RenderFormat {
    pub const ALL: [RenderFormat; 3] = [
        RenderFormat::FreeText,
        RenderFormat::Matrix,
        RenderFormat::Tabular,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RenderFormat::FreeText => "free_text",
            RenderFormat::Matrix => "matrix",
            RenderFormat::Tabular => "tabular",
        }
    }
}

fn letter(i: usize) -> char {
    assert!(i < 26, "lettered entities cap at 26");
    (b'A' + i as u8) as char
}

fn letters(count: usize) -> Vec<String> {
    (0..count).map(|i| String::from(letter(i))).collect()
}

fn join_and(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [only] => only.clone(),
        [head @ .., last] => format!("{} and {last}", head.join(", ")),
    }
}

fn n(x: f64) -> String {
    format_number(x)
}

fn bracketed(xs: &[f64]) -> String {
    let inner: Vec<String> = xs.iter().map(|&x| n(x)).collect();
    format!("[{}]", inner.join(", "))
}

/// One line describing non-default variable bounds, or None when every
/// variable has the default range.
fn bounds_line(lp: &LpInstance) -> Option<String> {
    let mut parts = Vec::new();
    for j in 0..lp.num_vars() {
        let lower = lp.lower(j);
        let upper = lp.upper(j);
        let label = letter(j);
        match (lower != 0.0, upper.is_finite()) {
            (true, true) => parts.push(format!("{} <= {label} <= {}", n(lower), n(upper))),
            (true, false) => parts.push(format!("{} <= {label}", n(lower))),
            (false, true) => parts.push(format!("{label} <= {}", n(upper))),
            (false, false) => {}
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(format!("bounds: {}", parts.join(", ")))
    }
}

fn integrality_line(lp: &LpInstance) -> Option<String> {
    let integral: Vec<String> = (0..lp.num_vars())
        .filter(|&j| lp.is_integer(j))
        .map(|j| String::from(letter(j)))
        .collect();
    if integral.is_empty() {
        None
    } else if integral.len() == lp.num_vars() {
        Some(String::from("All activities must be whole units."))
    } else {
        let noun = if integral.len() == 1 {
            "activity"
        } else {
            "activities"
        };
        Some(format!(
            "Only whole units are possible for {noun} {}.",
            join_and(&integral)
        ))
    }
}

fn lp_free_text(lp: &LpInstance) -> String {
    let names = letters(lp.num_vars());
    let gain = match lp.objective {
        Direction::Maximize => "yields",
        Direction::Minimize => "costs",
    };
    let mut out = format!("The activities are {}.", join_and(&names));
    let per_unit: Vec<String> = (0..lp.num_vars())
        .map(|j| format!("activity {} {gain} {} per unit", names[j], n(lp.c[j])))
        .collect();
    out.push_str(&format!(" Per-unit outcomes: {}.", join_and(&per_unit)));
    for (i, row) in lp.a.iter().enumerate() {
        let uses: Vec<String> = (0..lp.num_vars())
            .map(|j| format!("{} from each unit of {}", n(row[j]), names[j]))
            .collect();
        let rule = match lp.senses[i] {
            Sense::Le => format!("at most {} units are available", n(lp.b[i])),
            Sense::Ge => format!("at least {} units are required", n(lp.b[i])),
            Sense::Eq => format!("exactly {} units must be used", n(lp.b[i])),
        };
        out.push_str(&format!(
            " Resource {} takes {}; {rule}.",
            letter(i),
            join_and(&uses)
        ));
    }
    if let Some(bounds) = bounds_line(lp) {
        out.push_str(&format!(" Activity levels satisfy {bounds}."));
    }
    if let Some(flags) = integrality_line(lp) {
        out.push(' ');
        out.push_str(&flags);
    }
    out
}

fn lp_matrix(lp: &LpInstance) -> String {
    let mut out = format!("{} c . x\nc = {}\n", lp.objective.verb(), bracketed(&lp.c));
    out.push_str("rows (coefficients, sense, limit):\n");
    for (i, row) in lp.a.iter().enumerate() {
        out.push_str(&format!(
            "{} {} {}\n",
            bracketed(row),
            lp.senses[i].as_str(),
            n(lp.b[i])
        ));
    }
    out.push_str("variables x are listed in activity order A, B, ...\n");
    if let Some(bounds) = bounds_line(lp) {
        out.push_str(&bounds);
        out.push('\n');
    }
    if let Some(flags) = integrality_line(lp) {
        out.push_str(&flags);
        out.push('\n');
    }
    out
}

fn lp_tabular(lp: &LpInstance) -> String {
    let names = letters(lp.num_vars());
    let mut out = format!("| quantity | {} | rule |\n", names.join(" | "));
    let objective_word = lp.objective.verb();
    let per_unit: Vec<String> = lp.c.iter().map(|&x| n(x)).collect();
    out.push_str(&format!(
        "| outcome per unit | {} | {objective_word} |\n",
        per_unit.join(" | ")
    ));
    for (i, row) in lp.a.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&x| n(x)).collect();
        out.push_str(&format!(
            "| resource {} per unit | {} | {} {} |\n",
            letter(i),
            cells.join(" | "),
            lp.senses[i].as_str(),
            n(lp.b[i])
        ));
    }
    if let Some(bounds) = bounds_line(lp) {
        out.push_str(&bounds);
        out.push('\n');
    }
    if let Some(flags) = integrality_line(lp) {
        out.push_str(&flags);
        out.push('\n');
    }
    out
}

/// The (row, column) pairs a TSP rendering spells out: the upper triangle
/// when distances are symmetric, every off-diagonal entry otherwise.
fn tsp_pairs(n_cities: usize, symmetric: bool) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n_cities {
        for j in 0..n_cities {
            if i == j || (symmetric && j < i) {
                continue;
            }
            pairs.push((i, j));
        }
    }
    pairs
}

fn tsp_free_text(tsp: &crate::instance::TspInstance) -> String {
    let names = letters(tsp.n);
    let mut out = format!("The cities are {}.", join_and(&names));
    if tsp.symmetric {
        out.push_str(" Travel costs are the same in both directions.");
    } else {
        out.push_str(" Travel costs depend on direction.");
    }
    let legs: Vec<String> = tsp_pairs(tsp.n, tsp.symmetric)
        .into_iter()
        .map(|(i, j)| format!("{} to {} is {}", names[i], names[j], n(tsp.dist[i][j])))
        .collect();
    out.push_str(&format!(" Leg costs: {}.", legs.join(", ")));
    out.push_str(" A tour must visit every city exactly once and return to its starting city.");
    out
}

fn tsp_matrix(tsp: &crate::instance::TspInstance) -> String {
    let names = letters(tsp.n);
    let mut out = format!(
        "cities in order: {}\ncost matrix rows ('-' marks the zero diagonal{}):\n",
        names.join(", "),
        if tsp.symmetric {
            "; symmetric, lower triangle omitted"
        } else {
            ""
        }
    );
    for i in 0..tsp.n {
        let cells: Vec<String> = (0..tsp.n)
            .map(|j| {
                if i == j {
                    String::from("-")
                } else if tsp.symmetric && j < i {
                    String::from(".")
                } else {
                    n(tsp.dist[i][j])
                }
            })
            .collect();
        out.push_str(&format!("{}: [{}]\n", names[i], cells.join(", ")));
    }
    out
}

fn tsp_tabular(tsp: &crate::instance::TspInstance) -> String {
    let names = letters(tsp.n);
    let mut out = format!("| from/to | {} |\n", names.join(" | "));
    for i in 0..tsp.n {
        let cells: Vec<String> = (0..tsp.n)
            .map(|j| {
                if i == j {
                    String::from("-")
                } else if tsp.symmetric && j < i {
                    String::from(".")
                } else {
                    n(tsp.dist[i][j])
                }
            })
            .collect();
        out.push_str(&format!("| {} | {} |\n", names[i], cells.join(" | ")));
    }
    if tsp.symmetric {
        out.push_str("('-' is the zero diagonal; '.' mirrors the value across the diagonal.)\n");
    } else {
        out.push_str("('-' is the zero diagonal.)\n");
    }
    out
}

fn mf_free_text(mf: &crate::instance::MaxFlowInstance) -> String {
    let names = letters(mf.node_count);
    let mut out = format!(
        "The network nodes are {}. Node {} is the source and node {} is the sink.",
        join_and(&names),
        names[mf.source],
        names[mf.sink]
    );
    let links: Vec<String> = mf
        .arcs
        .iter()
        .map(|arc| {
            format!(
                "{} to {} carries up to {}",
                names[arc.from],
                names[arc.to],
                n(arc.capacity)
            )
        })
        .collect();
    out.push_str(&format!(" Link capacities: {}.", join_and(&links)));
    out
}

fn mf_matrix(mf: &crate::instance::MaxFlowInstance) -> String {
    let names = letters(mf.node_count);
    let arcs: Vec<String> = mf
        .arcs
        .iter()
        .map(|arc| format!("{} -> {}: {}", names[arc.from], names[arc.to], n(arc.capacity)))
        .collect();
    format!(
        "nodes: {}\nsource: {}\nsink: {}\narc capacities: [{}]\n",
        names.join(", "),
        names[mf.source],
        names[mf.sink],
        arcs.join(", ")
    )
}

fn mf_tabular(mf: &crate::instance::MaxFlowInstance) -> String {
    let names = letters(mf.node_count);
    let mut out = String::from("| from | to | capacity |\n");
    for arc in &mf.arcs {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            names[arc.from],
            names[arc.to],
            n(arc.capacity)
        ));
    }
    out.push_str(&format!(
        "source: {}; sink: {}\n",
        names[mf.source], names[mf.sink]
    ));
    out
}

fn ap_free_text(ap: &crate::instance::AssignmentInstance) -> String {
    let agents = letters(ap.n);
    let verb = match ap.objective {
        Direction::Maximize => "yields",
        Direction::Minimize => "costs",
    };
    let mut out = format!(
        "The agents are {} and there are as many tasks, also labeled {}.",
        join_and(&agents),
        join_and(&agents)
    );
    for (i, row) in ap.cost.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, &x)| format!("{} on task {}", n(x), agents[j]))
            .collect();
        out.push_str(&format!(" Agent {} {verb} {}.", agents[i], join_and(&cells)));
    }
    out.push_str(" Each agent takes exactly one task and each task exactly one agent.");
    out
}

fn ap_matrix(ap: &crate::instance::AssignmentInstance) -> String {
    let agents = letters(ap.n);
    let mut out = format!(
        "{} total assignment value\nrows are agents {}, columns are tasks in the same order\nvalue matrix:\n",
        ap.objective.verb(),
        join_and(&agents)
    );
    for row in &ap.cost {
        out.push_str(&bracketed(row));
        out.push('\n');
    }
    out
}

fn ap_tabular(ap: &crate::instance::AssignmentInstance) -> String {
    let agents = letters(ap.n);
    let mut out = format!("| agent/task | {} |\n", agents.join(" | "));
    for (i, row) in ap.cost.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&x| n(x)).collect();
        out.push_str(&format!("| {} | {} |\n", agents[i], cells.join(" | ")));
    }
    out.push_str(&format!("{} the total assignment value.\n", ap.objective.verb()));
    out
}

fn mcf_supply_phrases(mcf: &crate::instance::MinCostFlowInstance, names: &[String]) -> Vec<String> {
    let mut phrases = Vec::new();
    for (v, &s) in mcf.supplies.iter().enumerate() {
        if s > 0.0 {
            phrases.push(format!("node {} provides {}", names[v], n(s)));
        } else if s < 0.0 {
            phrases.push(format!("node {} requires {}", names[v], n(-s)));
        }
    }
    phrases
}

fn mcf_free_text(mcf: &crate::instance::MinCostFlowInstance) -> String {
    let names = letters(mcf.node_count);
    let mut out = format!("The network nodes are {}.", join_and(&names));
    out.push_str(&format!(
        " Supplies and demands: {}.",
        join_and(&mcf_supply_phrases(mcf, &names))
    ));
    let links: Vec<String> = mcf
        .arcs
        .iter()
        .map(|arc| {
            format!(
                "{} to {} carries up to {} at {} per unit",
                names[arc.from],
                names[arc.to],
                n(arc.capacity),
                n(arc.unit_cost)
            )
        })
        .collect();
    out.push_str(&format!(" Shipping links: {}.", join_and(&links)));
    out.push_str(" All demand must be met without exceeding any link capacity.");
    out
}

fn mcf_matrix(mcf: &crate::instance::MinCostFlowInstance) -> String {
    let names = letters(mcf.node_count);
    let arcs: Vec<String> = mcf
        .arcs
        .iter()
        .map(|arc| {
            format!(
                "{} -> {}: cap {}, cost {}",
                names[arc.from],
                names[arc.to],
                n(arc.capacity),
                n(arc.unit_cost)
            )
        })
        .collect();
    format!(
        "nodes: {}\nbalance: {}\narcs: [{}]\n",
        names.join(", "),
        join_and(&mcf_supply_phrases(mcf, &names)),
        arcs.join("; ")
    )
}

fn mcf_tabular(mcf: &crate::instance::MinCostFlowInstance) -> String {
    let names = letters(mcf.node_count);
    let mut out = String::from("| from | to | capacity | cost per unit |\n");
    for arc in &mcf.arcs {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            names[arc.from],
            names[arc.to],
            n(arc.capacity),
            n(arc.unit_cost)
        ));
    }
    out.push_str(&format!(
        "{}.\n",
        join_and(&mcf_supply_phrases(mcf, &names))
    ));
    out
}

/// Renders an instance in one of the three formats.
pub fn render_instance(instance: &ProblemInstance, format: RenderFormat) -> String {
    match (instance, format) {
        (ProblemInstance::Lp(lp), RenderFormat::FreeText)
        | (ProblemInstance::Ip(lp), RenderFormat::FreeText)
        | (ProblemInstance::Milp(lp), RenderFormat::FreeText) => lp_free_text(lp),
        (ProblemInstance::Lp(lp), RenderFormat::Matrix)
        | (ProblemInstance::Ip(lp), RenderFormat::Matrix)
        | (ProblemInstance::Milp(lp), RenderFormat::Matrix) => lp_matrix(lp),
        (ProblemInstance::Lp(lp), RenderFormat::Tabular)
        | (ProblemInstance::Ip(lp), RenderFormat::Tabular)
        | (ProblemInstance::Milp(lp), RenderFormat::Tabular) => lp_tabular(lp),
        (ProblemInstance::Tsp(tsp), RenderFormat::FreeText) => tsp_free_text(tsp),
        (ProblemInstance::Tsp(tsp), RenderFormat::Matrix) => tsp_matrix(tsp),
        (ProblemInstance::Tsp(tsp), RenderFormat::Tabular) => tsp_tabular(tsp),
        (ProblemInstance::Mf(mf), RenderFormat::FreeText) => mf_free_text(mf),
        (ProblemInstance::Mf(mf), RenderFormat::Matrix) => mf_matrix(mf),
        (ProblemInstance::Mf(mf), RenderFormat::Tabular) => mf_tabular(mf),
        (ProblemInstance::Ap(ap), RenderFormat::FreeText) => ap_free_text(ap),
        (ProblemInstance::Ap(ap), RenderFormat::Matrix) => ap_matrix(ap),
        (ProblemInstance::Ap(ap), RenderFormat::Tabular) => ap_tabular(ap),
        (ProblemInstance::Mcf(mcf), RenderFormat::FreeText) => mcf_free_text(mcf),
        (ProblemInstance::Mcf(mcf), RenderFormat::Matrix) => mcf_matrix(mcf),
        (ProblemInstance::Mcf(mcf), RenderFormat::Tabular) => mcf_tabular(mcf),
    }
}

/// Renders the instance in the record's chosen format, with the objective
/// flavor spelled out.
pub fn render_key_info(info: &KeyInfo) -> String {
    let mut out = render_instance(&info.instance, info.render_format);
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out.push_str(&format!("The objective is {}.", info.objective_flavor));
    out
}

/// The numerals a rendering of this instance must contain: the multiset of
/// its parameters, formatted minimally and sorted.
pub fn rendered_params(instance: &ProblemInstance) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    match instance {
        ProblemInstance::Lp(lp) | ProblemInstance::Ip(lp) | ProblemInstance::Milp(lp) => {
            out.extend(lp.c.iter().map(|&x| n(x)));
            out.extend(lp.a.iter().flatten().map(|&x| n(x)));
            out.extend(lp.b.iter().map(|&x| n(x)));
            out.extend(lp.lower_bounds.iter().filter(|&&l| l != 0.0).map(|&x| n(x)));
            out.extend(
                lp.upper_bounds
                    .iter()
                    .filter(|u| u.is_finite())
                    .map(|&x| n(x)),
            );
        }
        ProblemInstance::Tsp(tsp) => {
            out.extend(
                tsp_pairs(tsp.n, tsp.symmetric)
                    .into_iter()
                    .map(|(i, j)| n(tsp.dist[i][j])),
            );
        }
        ProblemInstance::Mf(mf) => {
            out.extend(mf.arcs.iter().map(|arc| n(arc.capacity)));
        }
        ProblemInstance::Ap(ap) => {
            out.extend(ap.cost.iter().flatten().map(|&x| n(x)));
        }
        ProblemInstance::Mcf(mcf) => {
            out.extend(mcf.arcs.iter().map(|arc| n(arc.capacity)));
            out.extend(mcf.arcs.iter().map(|arc| n(arc.unit_cost)));
            out.extend(
                mcf.supplies
                    .iter()
                    .filter(|&&s| s != 0.0)
                    .map(|&s| n(s.abs())),
            );
        }
    }
    out.sort();
    out
}

/// Pulls every standalone numeral out of a text, normalized to minimal
/// form and sorted. Digits glued to letters, underscores, or dots do not
/// count; a directly attached leading minus sign does.
pub fn extract_numerals(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let blocks = |b: u8| b.is_ascii_alphanumeric() || b == b'_' || b == b'.';
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if !bytes[i].is_ascii_digit() {
            i += 1;
            continue;
        }
        let mut start = i;
        if i > 0 && bytes[i - 1] == b'-' && (i < 2 || !(blocks(bytes[i - 2]) || bytes[i - 2] == b'-'))
        {
            start = i - 1;
        }
        let lead = if start > 0 { Some(bytes[start - 1]) } else { None };
        let mut end = i;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end + 1 < bytes.len() && bytes[end] == b'.' && bytes[end + 1].is_ascii_digit() {
            end += 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
        if !matches!(lead, Some(b) if blocks(b)) {
            if let Ok(x) = text[start..end].parse::<f64>() {
                out.push(n(x));
            }
        }
        i = end;
    }
    out.sort();
    out
}

/// Renders one tool's documentation block: signature, description, and a
/// line per parameter.
pub fn render_api_doc(schema: &ToolSchema) -> String {
    let signature: Vec<String> = schema
        .parameters
        .iter()
        .map(|p| {
            if p.required {
                p.name.clone()
            } else {
                format!("{}?", p.name)
            }
        })
        .collect();
    let mut out = format!("{}({})\n  {}\n", schema.name, signature.join(", "), schema.description);
    for p in &schema.parameters {
        let need = if p.required { "required" } else { "optional" };
        out.push_str(&format!(
            "  - {} ({}; {need}): {}\n",
            p.name,
            p.kind.descriptor(),
            p.description
        ));
    }
    out
}

/// Introduces the machine-readable call at the end of every
/// key-information block.
pub const REFERENCE_CALL_LABEL: &str =
    "Reference call (consumed by validation tooling; never mention or copy it in the story):";

/// Fills the problem-generation template with a record's context and
/// rendered key information. The key-information block ends with the exact
/// tool call for the instance under [`REFERENCE_CALL_LABEL`], so downstream
/// tooling (in particular the offline mock generator) can recover the
/// instance from the prompt alone; the label tells the writer to keep it
/// out of the narrative.
pub fn build_problem_prompt(info: &KeyInfo) -> String {
    build_problem_prompt_with(PROBLEM_TEMPLATE, info)
}

/// Same, against a caller-supplied template.
pub fn build_problem_prompt_with(template: &str, info: &KeyInfo) -> String {
    let call = call_for_instance(&info.instance);
    let call_text = serialize_call(&call, &ToolRegistry::builtin())
        .expect("instances always map onto built-in tools");
    let block = format!(
        "{}\n\n{REFERENCE_CALL_LABEL}\n{call_text}",
        render_key_info(info)
    );
    template
        .replace("{context}", &info.context)
        .replace("{key_information}", &block)
}

/// Fills the answer-generation template with API documentation and a
/// problem statement.
pub fn build_answer_prompt(tool_doc: &str, statement: &str) -> String {
    build_answer_prompt_with(ANSWER_TEMPLATE, tool_doc, statement)
}

/// Same, against a caller-supplied template.
pub fn build_answer_prompt_with(template: &str, tool_doc: &str, statement: &str) -> String {
    template
        .replace("{api_doc}", tool_doc)
        .replace("{statement}", statement)
}
