//! Dataset building: sample instances, prompt a generator for problem and
//! answer texts, filter against the solver, and write kept dialogues as
//! JSONL with a build manifest.
//!
//! Each type over-generates until its quota is met. Attempt `i` of type `t`
//! draws from stream `t << 32 | i`, and its dialogue shuffle from stream
//! `2^48 + (t << 32 | i)`, so every attempt is reproducible in isolation and
//! the kept set does not depend on batch sizes or thread timing.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use orforge_core::dialogue::{filter_pair, format_dialogue, FilterReason};
use orforge_core::eval::instance_id;
use orforge_core::gen::{GenRequest, TextGenerator};
use orforge_core::instance::{ProblemInstance, ProblemType};
use orforge_core::render::{build_answer_prompt, build_problem_prompt, render_api_doc};
use orforge_core::rng::derive_stream;
use orforge_core::sampler::{sample_key_info, KeyInfo};
use orforge_core::schema::{ToolRegistry, ToolSchema};
use orforge_core::solver::objective_tolerance;
use orforge_core::toolcall::{call_for_instance, dispatch, extract_call, serialize_call};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::batch::generate_batch;
use crate::config::PipelineConfig;
use crate::files::{visit_dialogue_records, write_ground_truth, JsonlWriter};

/// How many records of each type a build should keep.
pub type BuildPlan = BTreeMap<ProblemType, u64>;

/// Parses a plan like `LP=3502,IP=3501,TSP=50`.
pub fn parse_plan(text: &str) -> anyhow::Result<BuildPlan> {
    let mut plan = BuildPlan::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, count) = part
            .split_once('=')
            .with_context(|| format!("plan entry {part:?} is not NAME=COUNT"))?;
        let problem_type = parse_problem_type(name.trim())?;
        let count: u64 = count
            .trim()
            .parse()
            .with_context(|| format!("plan entry {part:?} has a bad count"))?;
        if plan.insert(problem_type, count).is_some() {
            anyhow::bail!("plan names {} twice", problem_type.name());
        }
    }
    if plan.is_empty() {
        anyhow::bail!("the plan is empty");
    }
    Ok(plan)
}

pub fn parse_problem_type(name: &str) -> anyhow::Result<ProblemType> {
    ProblemType::ALL
        .into_iter()
        .find(|t| t.name().eq_ignore_ascii_case(name))
        .with_context(|| {
            let known: Vec<&str> = ProblemType::ALL.iter().map(|t| t.name()).collect();
            format!("unknown problem type {name:?}; known: {}", known.join(", "))
        })
}

/// Stream index of attempt `i` for a type: a 2^32 stride per type keeps
/// attempt streams from ever colliding across types.
fn attempt_stream(problem_type: ProblemType, attempt: u64) -> u64 {
    let ordinal = ProblemType::ALL
        .iter()
        .position(|t| *t == problem_type)
        .expect("every type is listed") as u64;
    (ordinal << 32) | attempt
}

/// Offset into a disjoint stream space for dialogue shuffles, so they never
/// reuse instance-sampling streams.
const DIALOGUE_STREAM_BASE: u64 = 1 << 48;

/// Content hash of an instance: the digest of its canonical call text.
/// Builds use it to skip instances already present in another dataset.
pub fn instance_hash(instance: &ProblemInstance) -> String {
    let registry = ToolRegistry::builtin();
    let call = serialize_call(&call_for_instance(instance), &registry)
        .expect("canonical calls serialize");
    let digest = Sha256::digest(call.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// Kept/attempted counts and the drop histogram for one problem type.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TypeTally {
    pub requested: u64,
    pub kept: u64,
    pub attempts: u64,
    pub drops: BTreeMap<String, u64>,
}

/// The build record written next to every dataset: enough to reproduce the
/// build and to guard later builds against instance overlap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub master_seed: u64,
    pub config_hash: String,
    pub records: u64,
    pub per_type: BTreeMap<String, TypeTally>,
    pub drop_reasons: BTreeMap<String, u64>,
    pub overlap_skipped: u64,
    /// [`instance_hash`] of each kept record, in record order.
    pub instance_hashes: Vec<String>,
    /// False when the build aborted; `abort_reason` then says why.
    pub complete: bool,
    pub abort_reason: Option<String>,
}

#[derive(Debug)]
pub struct BuildOutcome {
    pub manifest: Manifest,
    pub dataset_path: PathBuf,
    pub manifest_path: PathBuf,
    pub truth_path: PathBuf,
}

/// Drop-tally key for instances the sampler itself gave up on.
const SAMPLING_ERROR: &str = "sampling_error";

struct WaveItem {
    attempt: u64,
    outcome: ItemOutcome,
}

enum ItemOutcome {
    SampleFailed(String),
    Overlap,
    GenerationFailed(String),
    Finished {
        info: Box<KeyInfo>,
        hash: String,
        statement: String,
        answer: String,
    },
}

/// An attempt partway through the wave: sampled but not yet answered.
enum Progress {
    Done(ItemOutcome),
    Statement(Box<KeyInfo>, String, String),
}

/// Samples and generates one wave of attempts. Generation runs as two
/// index-aligned batches (statements, then answers) so the in-flight bound
/// applies while results stay in attempt order.
fn run_wave(
    problem_type: ProblemType,
    attempts: &[u64],
    config: &PipelineConfig,
    master_seed: u64,
    client: &dyn TextGenerator,
    registry: &ToolRegistry,
    avoid: &BTreeSet<String>,
) -> Vec<WaveItem> {
    let tagged_request = |prompt: String, attempt: u64, stage: &str| {
        let mut request = GenRequest::new(
            prompt,
            format!("{}-{attempt}#{stage}", problem_type.name()),
        );
        request.temperature = config.generation.temperature;
        request.max_output_tokens = config.generation.max_output_tokens;
        request
    };

    let sampled: Vec<(u64, Progress)> = attempts
        .iter()
        .map(|&attempt| {
            let mut rng = derive_stream(master_seed, attempt_stream(problem_type, attempt));
            let progress = match sample_key_info(problem_type, &config.sampler, &mut rng) {
                Err(err) => Progress::Done(ItemOutcome::SampleFailed(err.to_string())),
                Ok(info) => {
                    let hash = instance_hash(&info.instance);
                    if avoid.contains(&hash) {
                        Progress::Done(ItemOutcome::Overlap)
                    } else {
                        Progress::Statement(Box::new(info), hash, String::new())
                    }
                }
            };
            (attempt, progress)
        })
        .collect();

    let statement_requests: Vec<GenRequest> = sampled
        .iter()
        .filter_map(|(attempt, progress)| match progress {
            Progress::Statement(info, _, _) => {
                Some(tagged_request(build_problem_prompt(info), *attempt, "problem"))
            }
            Progress::Done(_) => None,
        })
        .collect();
    let mut statements = generate_batch(
        client,
        &statement_requests,
        config.generation.max_in_flight,
    )
    .into_iter();

    let doc = render_api_doc(registry.for_type(problem_type));
    let mut answer_requests = Vec::new();
    let answered: Vec<(u64, Progress)> = sampled
        .into_iter()
        .map(|(attempt, progress)| {
            let progress = match progress {
                Progress::Done(outcome) => Progress::Done(outcome),
                Progress::Statement(info, hash, _) => {
                    let response = statements.next().expect("one response per request");
                    if response.is_error() {
                        let message = response.error.unwrap_or_else(|| "unknown".into());
                        Progress::Done(ItemOutcome::GenerationFailed(format!(
                            "problem stage: {message}"
                        )))
                    } else {
                        answer_requests.push(tagged_request(
                            build_answer_prompt(&doc, &response.text),
                            attempt,
                            "answer",
                        ));
                        Progress::Statement(info, hash, response.text)
                    }
                }
            };
            (attempt, progress)
        })
        .collect();
    let mut answers =
        generate_batch(client, &answer_requests, config.generation.max_in_flight).into_iter();

    answered
        .into_iter()
        .map(|(attempt, progress)| {
            let outcome = match progress {
                Progress::Done(outcome) => outcome,
                Progress::Statement(info, hash, statement) => {
                    let response = answers.next().expect("one response per request");
                    if response.is_error() {
                        let message = response.error.unwrap_or_else(|| "unknown".into());
                        ItemOutcome::GenerationFailed(format!("answer stage: {message}"))
                    } else {
                        ItemOutcome::Finished {
                            info,
                            hash,
                            statement,
                            answer: response.text,
                        }
                    }
                }
            };
            WaveItem { attempt, outcome }
        })
        .collect()
}

/// Builds a dataset under `out_dir`: `dataset.jsonl`, `truth.json`, and
/// `manifest.json`. `avoid` lists a previous build whose instances must not
/// reappear. On abort the partial dataset and manifest are still written,
/// with `complete = false`, and the error describes the cause.
pub fn build_dataset(
    plan: &BuildPlan,
    config: &PipelineConfig,
    master_seed: u64,
    client: &dyn TextGenerator,
    out_dir: &Path,
    avoid: Option<&Manifest>,
) -> anyhow::Result<BuildOutcome> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output dir {}", out_dir.display()))?;
    let dataset_path = out_dir.join("dataset.jsonl");
    let manifest_path = out_dir.join("manifest.json");
    let truth_path = out_dir.join("truth.json");
    let mut writer = JsonlWriter::create(&dataset_path)?;
    let registry = ToolRegistry::builtin();
    let avoid_hashes: BTreeSet<String> = avoid
        .map(|m| m.instance_hashes.iter().cloned().collect())
        .unwrap_or_default();
    let wave_size = (config.generation.max_in_flight.max(1) * 4).max(8) as u64;

    let mut manifest = Manifest {
        master_seed,
        config_hash: config.hash(),
        records: 0,
        per_type: BTreeMap::new(),
        drop_reasons: BTreeMap::new(),
        overlap_skipped: 0,
        instance_hashes: Vec::new(),
        complete: true,
        abort_reason: None,
    };
    let mut truth: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut abort: Option<String> = None;
    let mut consecutive_failures = 0u32;

    'types: for (&problem_type, &requested) in plan {
        let tally = manifest
            .per_type
            .entry(problem_type.name().to_owned())
            .or_default();
        tally.requested = requested;
        let budget = (requested as f64 * config.max_overgeneration_factor).ceil() as u64;
        let mut next_attempt = 0u64;
        while tally.kept < requested {
            if next_attempt >= budget {
                abort = Some(format!(
                    "attempt budget exhausted for {}: {} attempts kept {} of {} records",
                    problem_type.name(),
                    tally.attempts,
                    tally.kept,
                    requested
                ));
                break 'types;
            }
            let wave: Vec<u64> = (next_attempt..(next_attempt + wave_size).min(budget)).collect();
            next_attempt = *wave.last().unwrap() + 1;
            let items = run_wave(
                problem_type,
                &wave,
                config,
                master_seed,
                client,
                &registry,
                &avoid_hashes,
            );
            for item in items {
                if tally.kept == requested {
                    break;
                }
                tally.attempts += 1;
                match item.outcome {
                    ItemOutcome::Overlap => {
                        manifest.overlap_skipped += 1;
                    }
                    ItemOutcome::SampleFailed(message) => {
                        eprintln!(
                            "sampling {} attempt {} failed: {message}",
                            problem_type.name(),
                            item.attempt
                        );
                        *tally.drops.entry(SAMPLING_ERROR.into()).or_default() += 1;
                    }
                    ItemOutcome::GenerationFailed(message) => {
                        let key = FilterReason::GenerationError.as_str();
                        *tally.drops.entry(key.into()).or_default() += 1;
                        consecutive_failures += 1;
                        if consecutive_failures >= config.abort_after_consecutive_failures {
                            abort = Some(format!(
                                "generation failed {consecutive_failures} times in a row; \
                                 last failure: {message}"
                            ));
                            break 'types;
                        }
                    }
                    ItemOutcome::Finished {
                        info,
                        hash,
                        statement,
                        answer,
                    } => {
                        consecutive_failures = 0;
                        let verdict = filter_pair(&info, &answer, &registry, &config.solver);
                        if !verdict.kept {
                            let key = verdict.reason.as_str();
                            *tally.drops.entry(key.into()).or_default() += 1;
                            continue;
                        }
                        let stream = attempt_stream(problem_type, item.attempt);
                        let mut rng = derive_stream(master_seed, DIALOGUE_STREAM_BASE + stream);
                        let record = format_dialogue(
                            &info, &statement, &answer, &registry, stream, &mut rng,
                        )?;
                        let id = instance_id(problem_type, tally.kept);
                        truth.insert(id, vec![record.meta.ground_truth_objective]);
                        writer.write_record(&record)?;
                        manifest.instance_hashes.push(hash);
                        tally.kept += 1;
                    }
                }
            }
        }
    }

    manifest.records = writer.lines();
    for tally in manifest.per_type.values() {
        for (reason, count) in &tally.drops {
            *manifest.drop_reasons.entry(reason.clone()).or_default() += count;
        }
    }
    if let Some(reason) = abort {
        manifest.complete = false;
        manifest.abort_reason = Some(reason.clone());
        writer.finish()?;
        write_ground_truth(&truth_path, &truth)?;
        crate::files::write_json(&manifest_path, &manifest)?;
        anyhow::bail!("build aborted: {reason} (partial manifest written)");
    }
    writer.finish()?;
    write_ground_truth(&truth_path, &truth)?;
    crate::files::write_json(&manifest_path, &manifest)?;
    Ok(BuildOutcome {
        manifest,
        dataset_path,
        manifest_path,
        truth_path,
    })
}

/// One audit complaint, anchored to its JSONL line.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditFinding {
    pub line: u64,
    pub problem: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditSummary {
    pub records: u64,
    pub findings: Vec<AuditFinding>,
}

impl AuditSummary {
    pub fn clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Re-executes every record of a dataset file: the assistant message must
/// contain a dispatchable call whose objective matches the recorded ground
/// truth, and the system message must list four tools including the right
/// one. Streaming, so arbitrarily large files audit in constant memory.
pub fn audit_file(path: &Path, config: &PipelineConfig) -> anyhow::Result<AuditSummary> {
    let registry = ToolRegistry::builtin();
    let mut summary = AuditSummary::default();
    summary.records = visit_dialogue_records(path, |line, record| {
        let mut complain = |problem: String| {
            summary.findings.push(AuditFinding { line, problem });
        };
        let expected_tool = &registry.for_type(record.meta.problem_type).name;
        match record.system.split_once('\n') {
            Some((_, listing)) => match serde_json::from_str::<Vec<ToolSchema>>(listing) {
                Ok(tools) if tools.len() != 4 => {
                    complain(format!("system lists {} tools, not 4", tools.len()));
                }
                Ok(tools) if !tools.iter().any(|t| &t.name == expected_tool) => {
                    complain(format!("system listing is missing {expected_tool}"));
                }
                Ok(_) => {}
                Err(err) => complain(format!("system tool listing is not JSON: {err}")),
            },
            None => complain("system message has no tool listing".into()),
        }
        match extract_call(&record.assistant, &registry) {
            Err(err) => complain(format!("assistant call does not extract: {err}")),
            Ok(call) => {
                if call.name != *expected_tool {
                    complain(format!(
                        "assistant calls {}, expected {expected_tool}",
                        call.name
                    ));
                }
                let result = dispatch(&call, &registry, &config.solver);
                let truth = record.meta.ground_truth_objective;
                match result.objective {
                    Some(objective) if (objective - truth).abs() <= objective_tolerance(truth) => {
                    }
                    Some(objective) => complain(format!(
                        "dispatched objective {objective} is not the recorded {truth}"
                    )),
                    None => complain(format!(
                        "call does not solve to an optimum: {}",
                        result.message.as_deref().unwrap_or("no message")
                    )),
                }
            }
        }
        Ok(())
    })?;
    Ok(summary)
}
