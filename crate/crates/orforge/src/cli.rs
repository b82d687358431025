//! Command-line interface: `generate`, `solve`, `audit`, and `evaluate`.
//!
//! Exit codes: 0 on success, 1 when the data itself fails (solver errors,
//! audit findings, scoring failures, aborted builds), 2 for usage and
//! configuration mistakes.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use orforge_core::eval::{render_report, score_predictions};
use orforge_core::gen::{MockGenerator, TextGenerator};
use orforge_core::solver::solve;

use crate::client::{ChatClient, UreqTransport};
use crate::config::{load_config, resolve_api_key, PipelineConfig};
use crate::dataset::{
    audit_file, build_dataset, parse_plan, parse_problem_type, BuildPlan, Manifest,
};
use crate::files::{
    read_ground_truth, read_instance, read_json, read_predictions, write_json,
};

const EXIT_OK: i32 = 0;
const EXIT_DATA: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "orforge",
    version,
    about = "Solver-validated dataset pipeline for operations research dialogues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dataset: sample instances, generate dialogues, filter
    /// against the solvers, and write JSONL plus a manifest.
    Generate(GenerateArgs),
    /// Solve one instance file and print the result as JSON.
    Solve {
        /// Instance file ({"type": ..., "data": ...}).
        instance: PathBuf,
    },
    /// Re-execute every call of a dataset file and verify each recorded
    /// objective.
    Audit {
        /// Dataset JSONL file.
        dataset: PathBuf,
    },
    /// Score a predictions file against ground truth and print the
    /// accuracy table.
    Evaluate {
        /// Predictions JSONL ({"id": ..., "output": ...} per line).
        predictions: PathBuf,
        /// Ground-truth JSON (id to list of acceptable objectives).
        truth: PathBuf,
        /// Also write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// TOML config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Full plan as NAME=COUNT pairs, e.g. "LP=3502,IP=3501".
    #[arg(long, conflicts_with_all = ["problem_type", "count"])]
    plan: Option<String>,
    /// Single problem type to generate; requires --count.
    #[arg(long = "type", requires = "count")]
    problem_type: Option<String>,
    /// How many records of --type to keep; requires --type.
    #[arg(long, requires = "problem_type")]
    count: Option<u64>,
    /// Master seed; every record's streams derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the offline mock generator (the default).
    #[arg(long, conflicts_with = "live")]
    mock: bool,
    /// Call the configured HTTP generation service.
    #[arg(long)]
    live: bool,
    /// Output directory for dataset.jsonl, truth.json, and manifest.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override generation.max_in_flight from the config.
    #[arg(long)]
    jobs: Option<usize>,
    /// Manifest of a previous build whose instances must not reappear.
    #[arg(long)]
    avoid: Option<PathBuf>,
}

/// Parses argv and runs the selected command, returning the process exit
/// code instead of exiting so tests can call it directly.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve { instance } => cmd_solve(&instance),
        Command::Audit { dataset } => cmd_audit(&dataset),
        Command::Evaluate {
            predictions,
            truth,
            report,
        } => cmd_evaluate(&predictions, &truth, report.as_deref()),
    }
}

fn usage_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn data_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message:#}");
    EXIT_DATA
}

fn plan_from(args: &GenerateArgs) -> Result<BuildPlan, String> {
    match (&args.plan, &args.problem_type, args.count) {
        (Some(plan), None, None) => parse_plan(plan).map_err(|err| format!("{err:#}")),
        (None, Some(name), Some(count)) => {
            let problem_type = parse_problem_type(name).map_err(|err| format!("{err:#}"))?;
            Ok([(problem_type, count)].into_iter().collect())
        }
        _ => Err("specify either --plan or both --type and --count".into()),
    }
}

fn cmd_generate(args: GenerateArgs) -> i32 {
    let mut config = match &args.config {
        None => PipelineConfig::default(),
        Some(path) => match load_config(path) {
            Ok(config) => config,
            Err(err) => return usage_error(format!("{err:#}")),
        },
    };
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return usage_error("--jobs must be at least 1");
        }
        config.generation.max_in_flight = jobs;
    }
    let plan = match plan_from(&args) {
        Ok(plan) => plan,
        Err(message) => return usage_error(message),
    };
    let avoid: Option<Manifest> = match &args.avoid {
        None => None,
        Some(path) => match read_json(path) {
            Ok(manifest) => Some(manifest),
            Err(err) => return usage_error(format!("{err:#}")),
        },
    };

    let client: Box<dyn TextGenerator> = if args.live {
        let Some(api_key) = resolve_api_key(&config.generation) else {
            return usage_error(
                "live generation needs an API key; set GEN_API_KEY or generation.api_key",
            );
        };
        match ChatClient::new(&config.generation, api_key, UreqTransport::default()) {
            Ok(client) => Box::new(client),
            Err(err) => return usage_error(format!("{err:#}")),
        }
    } else {
        Box::new(MockGenerator::new(
            config.generation.mock_corruption_probability,
            config.generation.mock_seed,
        ))
    };

    match build_dataset(&plan, &config, args.seed, client.as_ref(), &args.out, avoid.as_ref()) {
        Err(err) => data_error(err),
        Ok(outcome) => {
            println!(
                "wrote {} records to {}",
                outcome.manifest.records,
                outcome.dataset_path.display()
            );
            for (name, tally) in &outcome.manifest.per_type {
                println!(
                    "  {name}: kept {} of {} attempts ({} requested)",
                    tally.kept, tally.attempts, tally.requested
                );
            }
            if !outcome.manifest.drop_reasons.is_empty() {
                println!("  drops: {:?}", outcome.manifest.drop_reasons);
            }
            if outcome.manifest.overlap_skipped > 0 {
                println!("  overlap skipped: {}", outcome.manifest.overlap_skipped);
            }
            println!("manifest: {}", outcome.manifest_path.display());
            EXIT_OK
        }
    }
}

fn cmd_solve(path: &Path) -> i32 {
    let instance = match read_instance(path) {
        Ok(instance) => instance,
        Err(err) => return data_error(err),
    };
    let problems = orforge_core::instance::validate_instance(&instance);
    if !problems.is_empty() {
        return data_error(format!(
            "invalid instance {}:\n  {}",
            path.display(),
            problems.join("\n  ")
        ));
    }
    let result = solve(&instance, &orforge_core::solver::SolverConfig::default());
    println!(
        "{}",
        serde_json::to_string_pretty(&result).expect("results serialize")
    );
    if result.is_optimal() {
        EXIT_OK
    } else {
        EXIT_DATA
    }
}

fn cmd_audit(path: &Path) -> i32 {
    let config = PipelineConfig::default();
    match audit_file(path, &config) {
        Err(err) => data_error(err),
        Ok(summary) => {
            if summary.clean() {
                println!("audit clean: {} records verified", summary.records);
                EXIT_OK
            } else {
                for finding in &summary.findings {
                    eprintln!("line {}: {}", finding.line, finding.problem);
                }
                eprintln!(
                    "audit failed: {} of {} records have problems",
                    summary.findings.len(),
                    summary.records
                );
                EXIT_DATA
            }
        }
    }
}

fn cmd_evaluate(predictions_path: &Path, truth_path: &Path, report_path: Option<&Path>) -> i32 {
    let predictions = match read_predictions(predictions_path) {
        Ok(predictions) => predictions,
        Err(err) => return data_error(err),
    };
    let truth = match read_ground_truth(truth_path) {
        Ok(truth) => truth,
        Err(err) => return data_error(err),
    };
    let registry = orforge_core::schema::ToolRegistry::builtin();
    let config = orforge_core::solver::SolverConfig::default();
    let report = match score_predictions(&predictions, &truth, &registry, &config) {
        Ok(report) => report,
        Err(err) => return data_error(err),
    };
    print!("{}", render_report(&report));
    if let Some(path) = report_path {
        if let Err(err) = write_json(path, &report) {
            return data_error(err);
        }
        println!("report: {}", path.display());
    }
    EXIT_OK
}
