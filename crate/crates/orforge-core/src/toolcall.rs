//! The call-string wire format shared with generated data and model output:
//! parsing, extraction from surrounding prose, canonical serialization, and
//! dispatch to the solvers.
//!
//! Grammar (EBNF):
//!
//! ```text
//! call       = identifier ws "(" ws [ argument { ws "," ws argument } ] ws ")" ;
//! argument   = identifier ws "=" ws value ;
//! identifier = ( letter | "_" ) { letter | digit | "_" } ;
//! value      = number | string | boolean | array ;
//! array      = "[" ws [ value { ws "," ws value } ] ws "]" ;
//! boolean    = "true" | "false" ;
//! number     = [ "-" ] digit { digit } [ "." digit { digit } ]
//!              [ ( "e" | "E" ) [ "+" | "-" ] digit { digit } ] ;
//! string     = '"' { character | escape } '"' ;
//! escape     = "\" ( '"' | "\" | "/" | "b" | "f" | "n" | "r" | "t"
//!                  | "u" hex hex hex hex ) ;
//! ws         = { " " | tab | newline | carriage-return } ;
//! ```
//!
//! Canonical form (what [`serialize_call`] emits): arguments in schema
//! order, a single space after every comma, minimal number formatting.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{
    AssignmentInstance, Direction, FlowArc, LpInstance, MaxFlowInstance, McfArc,
    MinCostFlowInstance, ProblemInstance, Sense, TspInstance,
};
use crate::num;
use crate::schema::{ParamKind, ToolRegistry, ToolSchema};
use crate::solver::{solve, SolverConfig, SolverResult};

/// Largest node count / node index accepted by dispatch. Guards the flow
/// solvers against absurd allocations driven by a single scalar argument.
pub const MAX_NODE_COUNT: usize = 100_000;

/// Deepest array nesting the parser accepts. Guards against stack overflow
/// on adversarial input; real calls nest at most two levels.
const MAX_ARRAY_DEPTH: usize = 64;

/// Slack allowed when a number fills an integer-typed slot.
const INTEGER_SLACK: f64 = 1e-9;

/// One argument value: a JSON-style literal.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Str(String),
    Bool(bool),
    Array(Vec<Value>),
}

impl Value {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&[Value]> {
        match self {
            Value::Array(items) => Some(items),
            _ => None,
        }
    }
}

/// A parsed call: tool name plus arguments in their written order.
#[derive(Debug, Clone, PartialEq)]
pub struct ToolCall {
    pub name: String,
    pub args: Vec<(String, Value)>,
}

impl ToolCall {
    pub fn arg(&self, name: &str) -> Option<&Value> {
        self.args
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v)
    }
}

/// A syntax error: where it happened and what was expected there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

impl core::error::Error for ParseError {}

/// Why no call could be pulled out of a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtractError {
    /// No registered tool name followed by `(` occurs in the message.
    NoCall,
    /// A call was found but its text does not parse.
    Malformed(ParseError),
}

impl core::fmt::Display for ExtractError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtractError::NoCall => write!(f, "no call present"),
            ExtractError::Malformed(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ExtractError {}

/// Why a call could not be serialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallError {
    UnknownTool(String),
    UnknownParam { tool: String, param: String },
}

impl core::fmt::Display for CallError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CallError::UnknownTool(name) => write!(f, "unknown tool {name}"),
            CallError::UnknownParam { tool, param } => {
                write!(f, "parameter {param} is not part of {tool}")
            }
        }
    }
}

impl core::error::Error for CallError {}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, start: usize) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: start,
            depth: 0,
        }
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(self.pos, what))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<&'a str, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b) if b == b'_' || b.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.error(start, what)),
        }
        while matches!(self.peek(), Some(b) if b == b'_' || b.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        Ok(&self.text[start..self.pos])
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some(b'"') => self.string().map(Value::Str),
            Some(b'[') => self.array(),
            Some(b't') | Some(b'f') => self.boolean(),
            Some(b) if b == b'-' || b.is_ascii_digit() => self.number().map(Value::Number),
            _ => Err(self.error(self.pos, "expected value")),
        }
    }

    fn boolean(&mut self) -> Result<Value, ParseError> {
        let start = self.pos;
        let rest = &self.bytes[self.pos..];
        let (flag, len) = if rest.starts_with(b"true") {
            (true, 4)
        } else if rest.starts_with(b"false") {
            (false, 5)
        } else {
            return Err(self.error(start, "expected value"));
        };
        self.pos += len;
        if matches!(self.peek(), Some(b) if b == b'_' || b.is_ascii_alphanumeric()) {
            return Err(self.error(start, "expected value"));
        }
        Ok(Value::Bool(flag))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let mut digits = 0;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
            digits += 1;
        }
        if digits == 0 {
            return Err(self.error(start, "expected value"));
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            digits = 0;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
                digits += 1;
            }
            if digits == 0 {
                return Err(self.error(self.pos, "expected digit after decimal point"));
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            digits = 0;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
                digits += 1;
            }
            if digits == 0 {
                return Err(self.error(self.pos, "expected exponent digits"));
            }
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error(start, "malformed number"))
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let mut out = String::new();
        let mut segment = self.pos;
        loop {
            match self.peek() {
                None => return Err(self.error(open, "unterminated string")),
                Some(b'"') => {
                    out.push_str(&self.text[segment..self.pos]);
                    self.pos += 1;
                    return Ok(out);
                }
                Some(b'\\') => {
                    out.push_str(&self.text[segment..self.pos]);
                    self.pos += 1;
                    let escape_at = self.pos;
                    match self.peek() {
                        None => return Err(self.error(open, "unterminated string")),
                        Some(b'"') => out.push('"'),
                        Some(b'\\') => out.push('\\'),
                        Some(b'/') => out.push('/'),
                        Some(b'b') => out.push('\u{0008}'),
                        Some(b'f') => out.push('\u{000C}'),
                        Some(b'n') => out.push('\n'),
                        Some(b'r') => out.push('\r'),
                        Some(b't') => out.push('\t'),
                        Some(b'u') => {
                            self.pos += 1;
                            let hex_end = self.pos + 4;
                            let code = self
                                .bytes
                                .get(self.pos..hex_end)
                                .and_then(|h| core::str::from_utf8(h).ok())
                                .and_then(|h| u32::from_str_radix(h, 16).ok())
                                .and_then(char::from_u32)
                                .ok_or_else(|| {
                                    self.error(escape_at, "invalid unicode escape")
                                })?;
                            out.push(code);
                            self.pos = hex_end - 1;
                        }
                        Some(_) => return Err(self.error(escape_at, "unsupported escape")),
                    }
                    self.pos += 1;
                    segment = self.pos;
                }
                Some(_) => self.pos += 1,
            }
        }
    }

    fn array(&mut self) -> Result<Value, ParseError> {
        let open = self.pos;
        if self.depth >= MAX_ARRAY_DEPTH {
            return Err(self.error(open, "array nesting too deep"));
        }
        self.depth += 1;
        self.pos += 1;
        self.skip_ws();
        let mut items = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            self.depth -= 1;
            return Ok(Value::Array(items));
        }
        loop {
            items.push(self.value()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    self.skip_ws();
                }
                Some(b']') => {
                    self.pos += 1;
                    self.depth -= 1;
                    return Ok(Value::Array(items));
                }
                None => return Err(self.error(open, "unterminated array")),
                Some(_) => return Err(self.error(self.pos, "expected ',' or ']'")),
            }
        }
    }
}

fn parse_call_prefix(text: &str, start: usize) -> Result<(ToolCall, usize), ParseError> {
    let mut p = Parser::new(text, start);
    p.skip_ws();
    let name = p.identifier("expected tool name")?;
    p.skip_ws();
    p.expect(b'(', "expected '('")?;
    p.skip_ws();
    let mut args: Vec<(String, Value)> = Vec::new();
    if p.peek() == Some(b')') {
        p.pos += 1;
        return Ok((
            ToolCall {
                name: name.into(),
                args,
            },
            p.pos,
        ));
    }
    loop {
        let key_at = p.pos;
        let key = p.identifier("expected parameter name")?;
        if args.iter().any(|(k, _)| k == key) {
            return Err(p.error(key_at, format!("duplicate parameter {key}")));
        }
        p.skip_ws();
        p.expect(b'=', "expected '='")?;
        p.skip_ws();
        let value = p.value()?;
        args.push((key.into(), value));
        p.skip_ws();
        match p.peek() {
            Some(b',') => {
                p.pos += 1;
                p.skip_ws();
            }
            Some(b')') => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.error(p.pos, "expected ',' or ')'")),
        }
    }
    Ok((
        ToolCall {
            name: name.into(),
            args,
        },
        p.pos,
    ))
}

/// Parses a complete call string; trailing content after the call is an
/// error. Performs no schema validation.
pub fn parse_call(text: &str) -> Result<ToolCall, ParseError> {
    let (call, end) = parse_call_prefix(text, 0)?;
    let bytes = text.as_bytes();
    let mut pos = end;
    while matches!(bytes.get(pos), Some(b) if b.is_ascii_whitespace()) {
        pos += 1;
    }
    if pos < bytes.len() {
        return Err(ParseError {
            offset: pos,
            message: String::from("unexpected text after call"),
        });
    }
    Ok(call)
}

/// Finds the last registered tool name followed by `(` in a message and
/// parses the call starting there. Error offsets are message-relative.
pub fn extract_call(message: &str, registry: &ToolRegistry) -> Result<ToolCall, ExtractError> {
    let bytes = message.as_bytes();
    let mut best: Option<usize> = None;
    for name in registry.names() {
        for (at, _) in message.match_indices(name) {
            if at > 0 {
                let prev = bytes[at - 1];
                if prev == b'_' || prev.is_ascii_alphanumeric() {
                    continue;
                }
            }
            let mut after = at + name.len();
            if matches!(bytes.get(after), Some(&b) if b == b'_' || b.is_ascii_alphanumeric()) {
                continue;
            }
            while matches!(bytes.get(after), Some(b) if b.is_ascii_whitespace()) {
                after += 1;
            }
            if bytes.get(after) != Some(&b'(') {
                continue;
            }
            best = Some(best.map_or(at, |b| b.max(at)));
        }
    }
    let Some(at) = best else {
        return Err(ExtractError::NoCall);
    };
    parse_call_prefix(message, at)
        .map(|(call, _)| call)
        .map_err(ExtractError::Malformed)
}

/// The canonical text of one argument value, as it appears in a serialized
/// call.
pub(crate) fn value_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value);
    out
}

fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Number(x) => out.push_str(&num::format_number(*x)),
        Value::Bool(true) => out.push_str("true"),
        Value::Bool(false) => out.push_str("false"),
        Value::Str(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    '\t' => out.push_str("\\t"),
                    c if (c as u32) < 0x20 => {
                        out.push_str(&format!("\\u{:04x}", c as u32));
                    }
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item);
            }
            out.push(']');
        }
    }
}

/// Writes the canonical form of a call: arguments in schema order, one
/// space after each comma, minimal number formatting.
pub fn serialize_call(call: &ToolCall, registry: &ToolRegistry) -> Result<String, CallError> {
    let schema = registry
        .get(&call.name)
        .ok_or_else(|| CallError::UnknownTool(call.name.clone()))?;
    for (key, _) in &call.args {
        if schema.param(key).is_none() {
            return Err(CallError::UnknownParam {
                tool: call.name.clone(),
                param: key.clone(),
            });
        }
    }
    let mut out = call.name.clone();
    out.push('(');
    let mut first = true;
    for spec in &schema.parameters {
        if let Some(value) = call.arg(&spec.name) {
            if !first {
                out.push_str(", ");
            }
            first = false;
            out.push_str(&spec.name);
            out.push('=');
            write_value(&mut out, value);
        }
    }
    out.push(')');
    Ok(out)
}

fn is_integral(x: f64) -> bool {
    x.is_finite() && (x - num::round(x)).abs() <= INTEGER_SLACK
}

fn all_items(value: &Value, pred: impl Fn(&Value) -> bool) -> bool {
    value.as_array().is_some_and(|items| items.iter().all(pred))
}

fn is_arc_row(value: &Value, len: usize) -> bool {
    value.as_array().is_some_and(|row| {
        row.len() == len
            && row[..2]
                .iter()
                .all(|v| v.as_number().is_some_and(is_integral))
            && row[2..]
                .iter()
                .all(|v| matches!(v, Value::Number(_)))
    })
}

fn value_matches(kind: ParamKind, value: &Value) -> bool {
    match kind {
        ParamKind::Direction => matches!(value, Value::Str(s) if s == "max" || s == "min"),
        ParamKind::Integer => value.as_number().is_some_and(is_integral),
        ParamKind::NumberVector => all_items(value, |v| matches!(v, Value::Number(_))),
        ParamKind::BoundVector => all_items(value, |v| {
            matches!(v, Value::Number(_)) || v.as_str() == Some("infinity")
        }),
        ParamKind::SenseVector => all_items(value, |v| {
            matches!(v.as_str(), Some("<=") | Some(">=") | Some("="))
        }),
        ParamKind::BoolVector => all_items(value, |v| matches!(v, Value::Bool(_))),
        ParamKind::NumberMatrix => {
            all_items(value, |row| all_items(row, |v| matches!(v, Value::Number(_))))
        }
        ParamKind::ArcTriples => all_items(value, |row| is_arc_row(row, 3)),
        ParamKind::ArcQuads => all_items(value, |row| is_arc_row(row, 4)),
    }
}

fn check_args<'s>(call: &ToolCall, registry: &'s ToolRegistry) -> Result<&'s ToolSchema, String> {
    let schema = registry
        .get(&call.name)
        .ok_or_else(|| format!("unknown tool {}", call.name))?;
    for (i, (key, _)) in call.args.iter().enumerate() {
        if call.args[..i].iter().any(|(k, _)| k == key) {
            return Err(format!("duplicate parameter {key}"));
        }
        if schema.param(key).is_none() {
            return Err(format!("unexpected parameter {key}"));
        }
    }
    for spec in &schema.parameters {
        match call.arg(&spec.name) {
            None if spec.required => return Err(format!("missing parameter {}", spec.name)),
            Some(value) if !value_matches(spec.kind, value) => {
                return Err(format!(
                    "parameter {} expects {}",
                    spec.name,
                    spec.kind.descriptor()
                ));
            }
            _ => {}
        }
    }
    Ok(schema)
}

fn number_vec(value: &Value) -> Vec<f64> {
    value
        .as_array()
        .expect("shape-checked array")
        .iter()
        .map(|v| v.as_number().expect("shape-checked number"))
        .collect()
}

fn number_matrix(value: &Value) -> Vec<Vec<f64>> {
    value
        .as_array()
        .expect("shape-checked matrix")
        .iter()
        .map(number_vec)
        .collect()
}

fn node_index(x: f64, what: &str) -> Result<usize, String> {
    if x < 0.0 {
        return Err(format!("{what} must be nonnegative, got {x}"));
    }
    if x > MAX_NODE_COUNT as f64 {
        return Err(format!(
            "{what} exceeds the supported maximum ({MAX_NODE_COUNT}), got {x}"
        ));
    }
    Ok(num::round(x) as usize)
}

enum LpFlags {
    AllContinuous,
    AllInteger,
    FromArg,
}

fn lp_family(call: &ToolCall, flags: LpFlags) -> Result<LpInstance, String> {
    let objective = match call.arg("objective").and_then(Value::as_str) {
        Some("max") => Direction::Maximize,
        _ => Direction::Minimize,
    };
    let c = number_vec(call.arg("c").expect("required"));
    let a = number_matrix(call.arg("A").expect("required"));
    let senses = call
        .arg("senses")
        .and_then(Value::as_array)
        .expect("required")
        .iter()
        .map(|v| match v.as_str() {
            Some("<=") => Sense::Le,
            Some(">=") => Sense::Ge,
            _ => Sense::Eq,
        })
        .collect();
    let b = number_vec(call.arg("b").expect("required"));
    let n = c.len();
    let lower_bounds = match call.arg("lower_bounds") {
        Some(v) => number_vec(v),
        None => vec![0.0; n],
    };
    let upper_bounds = match call.arg("upper_bounds") {
        Some(v) => v
            .as_array()
            .expect("shape-checked array")
            .iter()
            .map(|item| match item {
                Value::Number(x) => *x,
                _ => f64::INFINITY,
            })
            .collect(),
        None => vec![f64::INFINITY; n],
    };
    let integrality = match flags {
        LpFlags::AllContinuous => vec![false; n],
        LpFlags::AllInteger => vec![true; n],
        LpFlags::FromArg => call
            .arg("integrality")
            .and_then(Value::as_array)
            .expect("required")
            .iter()
            .map(|v| matches!(v, Value::Bool(true)))
            .collect(),
    };
    Ok(LpInstance {
        objective,
        c,
        a,
        senses,
        b,
        lower_bounds,
        upper_bounds,
        integrality,
    })
}

/// Converts a schema-checked call into the matching problem instance.
pub fn call_to_instance(
    call: &ToolCall,
    registry: &ToolRegistry,
) -> Result<ProblemInstance, String> {
    check_args(call, registry)?;
    match call.name.as_str() {
        "solve_lp" => lp_family(call, LpFlags::AllContinuous).map(ProblemInstance::Lp),
        "solve_ip" => lp_family(call, LpFlags::AllInteger).map(ProblemInstance::Ip),
        "solve_milp" => lp_family(call, LpFlags::FromArg).map(ProblemInstance::Milp),
        "solve_tsp" => {
            let dist = number_matrix(call.arg("dist").expect("required"));
            let n = dist.len();
            let square = dist.iter().all(|row| row.len() == n);
            let symmetric = square
                && (0..n).all(|i| (0..n).all(|j| dist[i][j] == dist[j][i]));
            Ok(ProblemInstance::Tsp(TspInstance { n, dist, symmetric }))
        }
        "solve_max_flow" => {
            let node_count = node_index(
                call.arg("node_count").and_then(Value::as_number).expect("required"),
                "parameter node_count",
            )?;
            let mut arcs = Vec::new();
            for (i, row) in call
                .arg("arcs")
                .and_then(Value::as_array)
                .expect("required")
                .iter()
                .enumerate()
            {
                let row = row.as_array().expect("shape-checked row");
                arcs.push(FlowArc {
                    from: node_index(row[0].as_number().unwrap(), &format!("arc {i} tail"))?,
                    to: node_index(row[1].as_number().unwrap(), &format!("arc {i} head"))?,
                    capacity: row[2].as_number().unwrap(),
                });
            }
            let source = node_index(
                call.arg("source").and_then(Value::as_number).expect("required"),
                "parameter source",
            )?;
            let sink = node_index(
                call.arg("sink").and_then(Value::as_number).expect("required"),
                "parameter sink",
            )?;
            Ok(ProblemInstance::Mf(MaxFlowInstance {
                node_count,
                arcs,
                source,
                sink,
            }))
        }
        "solve_assignment" => {
            let objective = match call.arg("objective").and_then(Value::as_str) {
                Some("max") => Direction::Maximize,
                _ => Direction::Minimize,
            };
            let cost = number_matrix(call.arg("cost").expect("required"));
            Ok(ProblemInstance::Ap(AssignmentInstance {
                n: cost.len(),
                cost,
                objective,
            }))
        }
        "solve_min_cost_flow" => {
            let node_count = node_index(
                call.arg("node_count").and_then(Value::as_number).expect("required"),
                "parameter node_count",
            )?;
            let mut arcs = Vec::new();
            for (i, row) in call
                .arg("arcs")
                .and_then(Value::as_array)
                .expect("required")
                .iter()
                .enumerate()
            {
                let row = row.as_array().expect("shape-checked row");
                arcs.push(McfArc {
                    from: node_index(row[0].as_number().unwrap(), &format!("arc {i} tail"))?,
                    to: node_index(row[1].as_number().unwrap(), &format!("arc {i} head"))?,
                    capacity: row[2].as_number().unwrap(),
                    unit_cost: row[3].as_number().unwrap(),
                });
            }
            let supplies = number_vec(call.arg("supplies").expect("required"));
            Ok(ProblemInstance::Mcf(MinCostFlowInstance {
                node_count,
                arcs,
                supplies,
            }))
        }
        other => Err(format!("unknown tool {other}")),
    }
}

/// Schema-checks a call, converts it, and runs the matching solver. Every
/// failure mode comes back as an error-status result, never a panic.
pub fn dispatch(call: &ToolCall, registry: &ToolRegistry, config: &SolverConfig) -> SolverResult {
    match call_to_instance(call, registry) {
        Ok(instance) => solve(&instance, config),
        Err(message) => SolverResult::error(message),
    }
}

fn numbers(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::Number(x)).collect())
}

fn rows(matrix: &[Vec<f64>]) -> Value {
    Value::Array(matrix.iter().map(|row| numbers(row)).collect())
}

/// Builds the ground-truth call that reproduces an instance through
/// [`call_to_instance`]. Default bounds are omitted so calls stay minimal.
pub fn call_for_instance(instance: &ProblemInstance) -> ToolCall {
    let name = crate::schema::tool_name(instance.problem_type()).to_string();
    let args = match instance {
        ProblemInstance::Lp(lp) | ProblemInstance::Ip(lp) | ProblemInstance::Milp(lp) => {
            let mut args = vec![
                (
                    "objective".to_string(),
                    Value::Str(lp.objective.as_str().into()),
                ),
                ("c".to_string(), numbers(&lp.c)),
                ("A".to_string(), rows(&lp.a)),
                (
                    "senses".to_string(),
                    Value::Array(
                        lp.senses
                            .iter()
                            .map(|s| Value::Str(s.as_str().into()))
                            .collect(),
                    ),
                ),
                ("b".to_string(), numbers(&lp.b)),
            ];
            if matches!(instance, ProblemInstance::Milp(_)) {
                args.push((
                    "integrality".to_string(),
                    Value::Array(
                        (0..lp.num_vars())
                            .map(|j| Value::Bool(lp.is_integer(j)))
                            .collect(),
                    ),
                ));
            }
            if lp.lower_bounds.iter().any(|&l| l != 0.0) {
                args.push(("lower_bounds".to_string(), numbers(&lp.lower_bounds)));
            }
            if lp.upper_bounds.iter().any(|u| u.is_finite()) {
                args.push((
                    "upper_bounds".to_string(),
                    Value::Array(
                        lp.upper_bounds
                            .iter()
                            .map(|&u| {
                                if u.is_finite() {
                                    Value::Number(u)
                                } else {
                                    Value::Str("infinity".into())
                                }
                            })
                            .collect(),
                    ),
                ));
            }
            args
        }
        ProblemInstance::Tsp(tsp) => vec![("dist".to_string(), rows(&tsp.dist))],
        ProblemInstance::Mf(mf) => vec![
            (
                "node_count".to_string(),
                Value::Number(mf.node_count as f64),
            ),
            (
                "arcs".to_string(),
                Value::Array(
                    mf.arcs
                        .iter()
                        .map(|arc| {
                            Value::Array(vec![
                                Value::Number(arc.from as f64),
                                Value::Number(arc.to as f64),
                                Value::Number(arc.capacity),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("source".to_string(), Value::Number(mf.source as f64)),
            ("sink".to_string(), Value::Number(mf.sink as f64)),
        ],
        ProblemInstance::Ap(ap) => vec![
            (
                "objective".to_string(),
                Value::Str(ap.objective.as_str().into()),
            ),
            ("cost".to_string(), rows(&ap.cost)),
        ],
        ProblemInstance::Mcf(mcf) => vec![
            (
                "node_count".to_string(),
                Value::Number(mcf.node_count as f64),
            ),
            (
                "arcs".to_string(),
                Value::Array(
                    mcf.arcs
                        .iter()
                        .map(|arc| {
                            Value::Array(vec![
                                Value::Number(arc.from as f64),
                                Value::Number(arc.to as f64),
                                Value::Number(arc.capacity),
                                Value::Number(arc.unit_cost),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("supplies".to_string(), numbers(&mcf.supplies)),
        ],
    };
    ToolCall { name, args }
}
