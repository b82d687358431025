//! Execution-accuracy scoring and output-length statistics.
//!
//! A prediction is correct when its embedded call, executed against the
//! solvers, lands on any of the instance's acceptable objective values.
//! Ground truth maps instance ids to lists of acceptable values because
//! benchmarks sometimes record alternate optima; synthesized datasets carry
//! singleton lists.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dialogue::FilterReason;
use crate::instance::ProblemType;
use crate::schema::ToolRegistry;
use crate::solver::{objective_tolerance, SolverConfig};
use crate::toolcall::{dispatch, extract_call, serialize_call, ExtractError};

/// Scoring failures that make the inputs unusable, as opposed to
/// predictions that merely miss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    NoPredictions,
    UnknownId(String),
    NoOutputs,
    MismatchedIds,
}

impl core::fmt::Display for EvalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EvalError::NoPredictions => write!(f, "there are no predictions to score"),
            EvalError::UnknownId(id) => {
                write!(f, "prediction id {id} has no ground-truth entry")
            }
            EvalError::NoOutputs => write!(f, "there are no outputs to measure"),
            EvalError::MismatchedIds => {
                write!(f, "the two reports cover different instance ids")
            }
        }
    }
}

impl core::error::Error for EvalError {}

/// How output length is counted. No model tokenizer is in scope, so both
/// modes are approximations: whitespace-separated words, or a fixed number
/// of characters per token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenCounting {
    Whitespace,
    CharsPerToken(u32),
}

impl TokenCounting {
    pub fn count(self, text: &str) -> usize {
        match self {
            TokenCounting::Whitespace => text.split_whitespace().count(),
            TokenCounting::CharsPerToken(k) => {
                let k = k.max(1) as usize;
                text.chars().count().div_ceil(k)
            }
        }
    }
}

/// Mean, median, and 95th percentile (nearest rank) of per-output token
/// counts, plus the total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub mean: f64,
    pub median: f64,
    pub p95: f64,
    pub total: u64,
}

/// Measures every output under the chosen counting mode.
pub fn token_stats<S: AsRef<str>>(
    outputs: &[S],
    counting: TokenCounting,
) -> Result<TokenStats, EvalError> {
    if outputs.is_empty() {
        return Err(EvalError::NoOutputs);
    }
    let mut counts: Vec<usize> = outputs
        .iter()
        .map(|text| counting.count(text.as_ref()))
        .collect();
    counts.sort_unstable();
    let n = counts.len();
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    let median = if n % 2 == 1 {
        counts[n / 2] as f64
    } else {
        (counts[n / 2 - 1] + counts[n / 2]) as f64 / 2.0
    };
    let p95_rank = (95 * n).div_ceil(100).max(1);
    Ok(TokenStats {
        mean: total as f64 / n as f64,
        median,
        p95: counts[p95_rank - 1] as f64,
        total,
    })
}

/// The dataset-wide naming convention for instances: type name, a dash,
/// and a six-digit index.
pub fn instance_id(problem_type: ProblemType, index: u64) -> String {
    format!("{}-{index:06}", problem_type.name())
}

/// Turns a built dataset into scoring inputs: each record's assistant
/// message becomes a prediction, its meta objective the ground truth, and
/// its id follows [`instance_id`] with a per-type running index.
pub fn dataset_eval_inputs(
    records: &[crate::dialogue::DialogueRecord],
) -> (Vec<(String, String)>, BTreeMap<String, Vec<f64>>) {
    let mut counters: BTreeMap<ProblemType, u64> = BTreeMap::new();
    let mut predictions = Vec::with_capacity(records.len());
    let mut truth = BTreeMap::new();
    for record in records {
        let counter = counters.entry(record.meta.problem_type).or_insert(0);
        let id = instance_id(record.meta.problem_type, *counter);
        *counter += 1;
        predictions.push((id.clone(), record.assistant.clone()));
        truth.insert(id, alloc::vec![record.meta.ground_truth_objective]);
    }
    (predictions, truth)
}

/// The breakdown key an id files under: its type prefix when recognized,
/// `"other"` otherwise.
fn type_key(id: &str) -> &str {
    id.split_once('-')
        .and_then(|(prefix, _)| {
            ProblemType::ALL
                .iter()
                .find(|t| t.name() == prefix)
                .map(|t| t.name())
        })
        .unwrap_or("other")
}

/// How one prediction fared. `failure` is present exactly when the
/// prediction did not match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalVerdict {
    pub id: String,
    /// Canonical text of the extracted call, when one was found and its
    /// arguments belong to the tool.
    pub call: Option<String>,
    pub dispatched_objective: Option<f64>,
    pub failure: Option<FilterReason>,
    pub matched: bool,
}

/// Matched and total counts for one slice of the predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeAccuracy {
    pub matched: usize,
    pub total: usize,
    pub accuracy: f64,
}

/// The full scoring outcome: per-prediction verdicts in id order, overall
/// accuracy, a per-type breakdown, and output-length statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub verdicts: Vec<EvalVerdict>,
    pub accuracy: f64,
    pub breakdown: BTreeMap<String, TypeAccuracy>,
    pub token_stats: TokenStats,
}

/// Scores `(id, model output)` pairs against `id -> acceptable objective
/// values`. A prediction matches when its call executes to an optimum
/// within tolerance of any acceptable value; extraction, parse, and
/// execution failures are unmatched with their reason recorded.
pub fn score_predictions(
    predictions: &[(String, String)],
    ground_truth: &BTreeMap<String, Vec<f64>>,
    registry: &ToolRegistry,
    config: &SolverConfig,
) -> Result<EvalReport, EvalError> {
    if predictions.is_empty() {
        return Err(EvalError::NoPredictions);
    }
    let mut verdicts = Vec::with_capacity(predictions.len());
    for (id, output) in predictions {
        let acceptable = ground_truth
            .get(id)
            .ok_or_else(|| EvalError::UnknownId(id.clone()))?;
        verdicts.push(score_one(id, output, acceptable, registry, config));
    }
    verdicts.sort_by(|a, b| a.id.cmp(&b.id));
    let matched = verdicts.iter().filter(|v| v.matched).count();
    let mut breakdown: BTreeMap<String, TypeAccuracy> = BTreeMap::new();
    for verdict in &verdicts {
        let slot = breakdown
            .entry(type_key(&verdict.id).to_string())
            .or_insert(TypeAccuracy {
                matched: 0,
                total: 0,
                accuracy: 0.0,
            });
        slot.total += 1;
        slot.matched += usize::from(verdict.matched);
    }
    for slot in breakdown.values_mut() {
        slot.accuracy = slot.matched as f64 / slot.total as f64;
    }
    let outputs: Vec<&str> = predictions.iter().map(|(_, o)| o.as_str()).collect();
    Ok(EvalReport {
        accuracy: matched as f64 / verdicts.len() as f64,
        token_stats: token_stats(&outputs, TokenCounting::Whitespace)?,
        verdicts,
        breakdown,
    })
}

fn score_one(
    id: &str,
    output: &str,
    acceptable: &[f64],
    registry: &ToolRegistry,
    config: &SolverConfig,
) -> EvalVerdict {
    let miss = |call: Option<String>, objective: Option<f64>, failure: FilterReason| EvalVerdict {
        id: id.to_string(),
        call,
        dispatched_objective: objective,
        failure: Some(failure),
        matched: false,
    };
    let call = match extract_call(output, registry) {
        Ok(call) => call,
        Err(ExtractError::NoCall) => return miss(None, None, FilterReason::NoCallFound),
        Err(ExtractError::Malformed(_)) => return miss(None, None, FilterReason::ParseError),
    };
    let call_text = serialize_call(&call, registry).ok();
    match dispatch(&call, registry, config).objective {
        None => miss(call_text, None, FilterReason::CallExecutionError),
        Some(objective) => {
            let matched = acceptable
                .iter()
                .any(|&value| (objective - value).abs() <= objective_tolerance(value));
            if matched {
                EvalVerdict {
                    id: id.to_string(),
                    call: call_text,
                    dispatched_objective: Some(objective),
                    failure: None,
                    matched: true,
                }
            } else {
                miss(call_text, Some(objective), FilterReason::ObjectiveMismatch)
            }
        }
    }
}

/// Renders one report as a table: a row per problem type, an aggregate row,
/// and a token-statistics line.
pub fn render_report(report: &EvalReport) -> String {
    let mut out = String::from("| type | matched | total | accuracy |\n|---|---:|---:|---:|\n");
    for (name, slice) in &report.breakdown {
        out.push_str(&format!(
            "| {name} | {} | {} | {} |\n",
            slice.matched,
            slice.total,
            percent(slice.accuracy)
        ));
    }
    let total = report.verdicts.len();
    let matched = report.verdicts.iter().filter(|v| v.matched).count();
    out.push_str(&format!(
        "| all | {matched} | {total} | {} |\n",
        percent(report.accuracy)
    ));
    out.push_str(&format!(
        "output tokens: mean {:.1}, median {:.1}, p95 {:.1}, total {}\n",
        report.token_stats.mean,
        report.token_stats.median,
        report.token_stats.p95,
        report.token_stats.total
    ));
    out
}

fn percent(fraction: f64) -> String {
    format!("{:.1}%", fraction * 100.0)
}

fn signed_percent(delta: f64) -> String {
    format!("{:+.1}%", delta * 100.0)
}

/// Renders the two reports side by side: one row per problem type and an
/// aggregate row, with `delta` = first minus second. The reports must cover
/// the same instance ids.
pub fn compare_reports(a: &EvalReport, b: &EvalReport) -> Result<String, EvalError> {
    let ids_a: BTreeSet<&str> = a.verdicts.iter().map(|v| v.id.as_str()).collect();
    let ids_b: BTreeSet<&str> = b.verdicts.iter().map(|v| v.id.as_str()).collect();
    if ids_a != ids_b {
        return Err(EvalError::MismatchedIds);
    }
    let mut out = String::from("| type | first | second | delta |\n|---|---:|---:|---:|\n");
    let types: BTreeSet<&String> = a.breakdown.keys().chain(b.breakdown.keys()).collect();
    for name in types {
        let first = a.breakdown.get(name).map_or(0.0, |t| t.accuracy);
        let second = b.breakdown.get(name).map_or(0.0, |t| t.accuracy);
        out.push_str(&format!(
            "| {name} | {} | {} | {} |\n",
            percent(first),
            percent(second),
            signed_percent(first - second)
        ));
    }
    out.push_str(&format!(
        "| all | {} | {} | {} |\n",
        percent(a.accuracy),
        percent(b.accuracy),
        signed_percent(a.accuracy - b.accuracy)
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    use crate::gen::{GenRequest, MockGenerator, TextGenerator};
    use crate::render::{build_answer_prompt, build_problem_prompt, render_api_doc};
    use crate::rng::derive_stream;
    use crate::sampler::{sample_key_info, KeyInfo, SamplerConfig};

    fn sample(problem_type: ProblemType, seed: u64) -> KeyInfo {
        let config = SamplerConfig::default();
        let mut rng = derive_stream(seed, 0);
        sample_key_info(problem_type, &config, &mut rng).unwrap()
    }

    fn mock_answer(info: &KeyInfo) -> String {
        let mock = MockGenerator::faithful();
        let registry = ToolRegistry::builtin();
        let statement = mock
            .generate(&GenRequest::new(build_problem_prompt(info), "p"))
            .text;
        let doc = render_api_doc(registry.for_type(info.problem_type));
        mock.generate(&GenRequest::new(build_answer_prompt(&doc, &statement), "a"))
            .text
    }

    fn self_eval_inputs(
        problem_type: ProblemType,
        count: u64,
        seed_base: u64,
    ) -> (Vec<(String, String)>, BTreeMap<String, Vec<f64>>) {
        let mut predictions = Vec::new();
        let mut truth = BTreeMap::new();
        for i in 0..count {
            let info = sample(problem_type, seed_base + i);
            let id = instance_id(problem_type, i);
            truth.insert(id.clone(), vec![info.ground_truth.objective.unwrap()]);
            predictions.push((id, mock_answer(&info)));
        }
        (predictions, truth)
    }

    #[test]
    fn whitespace_counting_matches_the_hand_examples() {
        let stats = token_stats(&["a b c"], TokenCounting::Whitespace).unwrap();
        assert_eq!(stats.mean, 3.0);
        assert_eq!(stats.median, 3.0);
        assert_eq!(stats.p95, 3.0);
        assert_eq!(stats.total, 3);
        let ten = vec!["w"; 10].join(" ");
        let thirty = vec!["w"; 30].join(" ");
        let stats = token_stats(&[ten, thirty], TokenCounting::Whitespace).unwrap();
        assert_eq!(stats.mean, 20.0);
        assert_eq!(stats.median, 20.0);
        assert_eq!(stats.p95, 30.0);
        assert_eq!(stats.total, 40);
    }

    #[test]
    fn p95_uses_the_nearest_rank() {
        let outputs: Vec<String> = (1..=100).map(|n| vec!["w"; n].join(" ")).collect();
        let stats = token_stats(&outputs, TokenCounting::Whitespace).unwrap();
        assert_eq!(stats.p95, 95.0);
        assert_eq!(stats.median, 50.5);
    }

    #[test]
    fn chars_per_token_rounds_up() {
        let stats = token_stats(&["abcdefg"], TokenCounting::CharsPerToken(4)).unwrap();
        assert_eq!(stats.mean, 2.0);
    }

    #[test]
    fn empty_outputs_are_refused() {
        let none: [&str; 0] = [];
        assert_eq!(
            token_stats(&none, TokenCounting::Whitespace),
            Err(EvalError::NoOutputs)
        );
    }

    #[test]
    fn dataset_answers_score_a_perfect_accuracy() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        for (i, pt) in ProblemType::ALL.into_iter().enumerate() {
            let (predictions, truth) = self_eval_inputs(pt, 3, 3000 + 100 * i as u64);
            let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
            assert_eq!(report.accuracy, 1.0, "{pt:?}");
            assert!(report.verdicts.iter().all(|v| v.failure.is_none()));
        }
    }

    #[test]
    fn shuffling_predictions_across_instances_mostly_misses() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (mut predictions, truth) = self_eval_inputs(ProblemType::Lp, 40, 4000);
        let first_output = predictions[0].1.clone();
        for i in 0..39 {
            predictions[i].1 = predictions[i + 1].1.clone();
        }
        predictions[39].1 = first_output;
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        assert!(report.accuracy <= 0.25, "accuracy {}", report.accuracy);
        for verdict in report.verdicts.iter().filter(|v| !v.matched) {
            assert_eq!(verdict.failure, Some(FilterReason::ObjectiveMismatch));
        }
    }

    #[test]
    fn missing_and_broken_calls_record_their_reasons() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let truth: BTreeMap<String, Vec<f64>> = [
            ("LP-000000".to_string(), vec![12.0]),
            ("LP-000001".to_string(), vec![12.0]),
            ("LP-000002".to_string(), vec![12.0]),
        ]
        .into();
        let predictions = vec![
            ("LP-000000".to_string(), "the answer is 12".to_string()),
            (
                "LP-000001".to_string(),
                "solve_lp(objective=\"max\", c=[3,".to_string(),
            ),
            (
                "LP-000002".to_string(),
                "solve_lp(objective=\"max\", c=[3, 2], A=[[1, 1], [1, 3]], \
                 senses=[\"<=\", \"<=\"])"
                    .to_string(),
            ),
        ];
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        assert_eq!(report.accuracy, 0.0);
        assert_eq!(report.verdicts[0].failure, Some(FilterReason::NoCallFound));
        assert_eq!(report.verdicts[1].failure, Some(FilterReason::ParseError));
        assert_eq!(
            report.verdicts[2].failure,
            Some(FilterReason::CallExecutionError)
        );
        assert!(report.verdicts.iter().all(|v| !v.matched));
    }

    #[test]
    fn any_acceptable_value_counts_as_a_match() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let truth: BTreeMap<String, Vec<f64>> =
            [("LP-000000".to_string(), vec![99.0, 12.0])].into();
        let predictions = vec![(
            "LP-000000".to_string(),
            "solve_lp(objective=\"max\", c=[3, 2], A=[[1, 1], [1, 3]], \
             senses=[\"<=\", \"<=\"], b=[4, 6])"
                .to_string(),
        )];
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.verdicts[0].dispatched_objective, Some(12.0));
    }

    #[test]
    fn unknown_prediction_ids_are_a_hard_error() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let truth = BTreeMap::new();
        let predictions = vec![("TSP-000009".to_string(), "text".to_string())];
        assert_eq!(
            score_predictions(&predictions, &truth, &registry, &config),
            Err(EvalError::UnknownId("TSP-000009".to_string()))
        );
        assert_eq!(
            score_predictions(&[], &truth, &registry, &config),
            Err(EvalError::NoPredictions)
        );
    }

    #[test]
    fn verdicts_depend_only_on_the_embedded_call() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let call = "solve_lp(objective=\"max\", c=[3, 2], A=[[1, 1], [1, 3]], \
                    senses=[\"<=\", \"<=\"], b=[4, 6])";
        let truth: BTreeMap<String, Vec<f64>> = [
            ("LP-000000".to_string(), vec![12.0]),
            ("LP-000001".to_string(), vec![12.0]),
        ]
        .into();
        let predictions = vec![
            ("LP-000000".to_string(), format!("Short note.\n{call}")),
            (
                "LP-000001".to_string(),
                format!("A much longer deliberation full of asides.\n{call}\n"),
            ),
        ];
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        assert_eq!(report.verdicts[0].matched, report.verdicts[1].matched);
        assert_eq!(report.verdicts[0].call, report.verdicts[1].call);
        assert_eq!(
            report.verdicts[0].dispatched_objective,
            report.verdicts[1].dispatched_objective
        );
    }

    #[test]
    fn adding_a_matched_prediction_never_lowers_accuracy() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (mut predictions, mut truth) = self_eval_inputs(ProblemType::Ip, 5, 5000);
        predictions[0].1 = "no call here".to_string();
        let before = score_predictions(&predictions, &truth, &registry, &config)
            .unwrap()
            .accuracy;
        let extra = sample(ProblemType::Ip, 5900);
        let id = instance_id(ProblemType::Ip, 99);
        truth.insert(id.clone(), vec![extra.ground_truth.objective.unwrap()]);
        predictions.push((id, mock_answer(&extra)));
        let after = score_predictions(&predictions, &truth, &registry, &config)
            .unwrap()
            .accuracy;
        assert!(after >= before);
    }

    #[test]
    fn reports_round_trip_through_json() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (predictions, truth) = self_eval_inputs(ProblemType::Mf, 3, 6000);
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: EvalReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn a_report_compared_with_itself_is_all_zeros() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (predictions, truth) = self_eval_inputs(ProblemType::Ap, 4, 7000);
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        let table = compare_reports(&report, &report).unwrap();
        assert!(table.contains("| AP | 100.0% | 100.0% | +0.0% |"));
        assert!(table.contains("| all | 100.0% | 100.0% | +0.0% |"));
    }

    #[test]
    fn a_perfect_report_against_an_empty_one_shows_its_full_accuracy() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (predictions, truth) = self_eval_inputs(ProblemType::Tsp, 4, 8000);
        let perfect = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        let blank: Vec<(String, String)> = predictions
            .iter()
            .map(|(id, _)| (id.clone(), "nothing to see".to_string()))
            .collect();
        let empty = score_predictions(&blank, &truth, &registry, &config).unwrap();
        let table = compare_reports(&perfect, &empty).unwrap();
        assert!(table.contains("| all | 100.0% | 0.0% | +100.0% |"));
    }

    #[test]
    fn a_four_type_split_yields_four_rows_plus_aggregate() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let mut predictions = Vec::new();
        let mut truth = BTreeMap::new();
        for (i, pt) in [
            ProblemType::Tsp,
            ProblemType::Mf,
            ProblemType::Ap,
            ProblemType::Mcf,
        ]
        .into_iter()
        .enumerate()
        {
            let (p, t) = self_eval_inputs(pt, 2, 9000 + 100 * i as u64);
            predictions.extend(p);
            truth.extend(t);
        }
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        assert_eq!(report.breakdown.len(), 4);
        let table = compare_reports(&report, &report).unwrap();
        assert_eq!(table.lines().count(), 2 + 4 + 1);
    }

    #[test]
    fn reports_over_different_ids_cannot_be_compared() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (predictions, truth) = self_eval_inputs(ProblemType::Lp, 3, 9500);
        let full = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        let partial =
            score_predictions(&predictions[..2], &truth, &registry, &config).unwrap();
        assert_eq!(
            compare_reports(&full, &partial),
            Err(EvalError::MismatchedIds)
        );
    }

    #[test]
    fn dataset_eval_inputs_number_each_type_independently() {
        use crate::dialogue::format_dialogue;
        let registry = ToolRegistry::builtin();
        let mut records = Vec::new();
        for (i, pt) in [ProblemType::Lp, ProblemType::Tsp, ProblemType::Lp]
            .into_iter()
            .enumerate()
        {
            let info = sample(pt, 9700 + i as u64);
            let answer = mock_answer(&info);
            let mut rng = derive_stream(9700, 50 + i as u64);
            records.push(
                format_dialogue(&info, "statement", &answer, &registry, i as u64, &mut rng)
                    .unwrap(),
            );
        }
        let (predictions, truth) = dataset_eval_inputs(&records);
        let ids: Vec<&str> = predictions.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(ids, ["LP-000000", "TSP-000000", "LP-000001"]);
        assert_eq!(truth.len(), 3);
        assert_eq!(
            truth["TSP-000000"],
            vec![records[1].meta.ground_truth_objective]
        );
        let report =
            score_predictions(&predictions, &truth, &registry, &SolverConfig::default()).unwrap();
        assert_eq!(report.accuracy, 1.0);
    }

    #[test]
    fn the_report_table_has_a_row_per_type_and_an_aggregate() {
        let registry = ToolRegistry::builtin();
        let config = SolverConfig::default();
        let (mut predictions, mut truth) = self_eval_inputs(ProblemType::Ap, 2, 9800);
        let (more, extra) = self_eval_inputs(ProblemType::Mf, 1, 9810);
        predictions.extend(more);
        truth.extend(extra);
        predictions[0].1 = String::from("no call at all");
        let report = score_predictions(&predictions, &truth, &registry, &config).unwrap();
        let table = render_report(&report);
        assert!(table.contains("| AP | 1 | 2 | 50.0% |"), "{table}");
        assert!(table.contains("| MF | 1 | 1 | 100.0% |"), "{table}");
        assert!(table.contains("| all | 2 | 3 | 66.7% |"), "{table}");
        assert!(table.contains("output tokens: mean"), "{table}");
    }

    // The band is wide by design; the pinned point is that mock answers look
    // like real reasoning traces, not stubs and not essays.
    #[test]
    fn mock_answers_fall_inside_the_length_sanity_band() {
        let mut outputs = Vec::new();
        for (i, pt) in ProblemType::ALL.into_iter().enumerate() {
            for seed in 0..4 {
                let info = sample(pt, 9600 + 10 * i as u64 + seed);
                outputs.push(mock_answer(&info));
            }
        }
        let stats = token_stats(&outputs, TokenCounting::Whitespace).unwrap();
        assert!(
            (100.0..=800.0).contains(&stats.mean),
            "mean output length {} tokens",
            stats.mean
        );
    }
}
