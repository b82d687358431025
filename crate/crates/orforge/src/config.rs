//! Pipeline configuration: one TOML file covering the generation service,
//! the sampler, the solvers, and the dataset build loop.

use std::env;
use std::fs;
use std::path::Path;

use anyhow::Context;
use orforge_core::sampler::SamplerConfig;
use orforge_core::solver::SolverConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Retry policy for transient generation-service failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetryConfig {
    /// Total tries per request, including the first one.
    pub max_attempts: u32,
    /// Sleep before the first retry; doubles on each further retry.
    pub base_delay_ms: u64,
}

impl Default for RetryConfig {
    fn default() -> Self {
        RetryConfig {
            max_attempts: 3,
            base_delay_ms: 250,
        }
    }
}

/// Everything the text-generation client needs, plus the knobs of the
/// offline mock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationConfig {
    /// Chat-completions URL; required in live mode.
    pub endpoint: String,
    pub model_name: String,
    /// Fallback credential; the `GEN_API_KEY` environment variable wins.
    pub api_key: Option<String>,
    pub temperature: f64,
    pub max_output_tokens: u32,
    /// Concurrent requests in flight during batch generation.
    pub max_in_flight: usize,
    pub retry: RetryConfig,
    /// Probability that the mock corrupts one number of an answer call.
    pub mock_corruption_probability: f64,
    pub mock_seed: u64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            endpoint: String::new(),
            model_name: String::new(),
            api_key: None,
            temperature: 0.7,
            max_output_tokens: 4096,
            max_in_flight: 4,
            retry: RetryConfig::default(),
            mock_corruption_probability: 0.0,
            mock_seed: 0,
        }
    }
}

/// Root of the TOML config file; every section falls back to its default,
/// so an empty file is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub generation: GenerationConfig,
    pub sampler: SamplerConfig,
    pub solver: SolverConfig,
    /// Attempt budget per requested record: the build gives up on a type
    /// once attempts exceed `requested * max_overgeneration_factor`.
    pub max_overgeneration_factor: f64,
    /// Abort the build after this many generation failures in a row.
    pub abort_after_consecutive_failures: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            generation: GenerationConfig::default(),
            sampler: SamplerConfig::default(),
            solver: SolverConfig::default(),
            max_overgeneration_factor: 4.0,
            abort_after_consecutive_failures: 25,
        }
    }
}

impl PipelineConfig {
    /// Field-level sanity checks that TOML typing cannot express.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = self.sampler.validate();
        let g = &self.generation;
        if !(0.0..=2.0).contains(&g.temperature) {
            problems.push(format!(
                "generation.temperature must be in [0, 2], got {}",
                g.temperature
            ));
        }
        if g.max_output_tokens == 0 {
            problems.push("generation.max_output_tokens must be positive".into());
        }
        if g.max_in_flight == 0 {
            problems.push("generation.max_in_flight must be at least 1".into());
        }
        if g.retry.max_attempts == 0 {
            problems.push("generation.retry.max_attempts must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&g.mock_corruption_probability) {
            problems.push(format!(
                "generation.mock_corruption_probability must be in [0, 1], got {}",
                g.mock_corruption_probability
            ));
        }
        if self.max_overgeneration_factor < 1.0 {
            problems.push(format!(
                "max_overgeneration_factor must be at least 1, got {}",
                self.max_overgeneration_factor
            ));
        }
        if self.abort_after_consecutive_failures == 0 {
            problems.push("abort_after_consecutive_failures must be at least 1".into());
        }
        problems
    }

    /// Hex digest of the canonical JSON form, recorded in build manifests so
    /// a dataset can be traced back to the exact knob settings.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Reads, parses, and validates a config file. TOML errors keep their
/// line/column spans; validation problems are joined into one message.
pub fn load_config(path: &Path) -> anyhow::Result<PipelineConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let config: PipelineConfig = toml::from_str(&text)
        .with_context(|| format!("cannot parse config file {}", path.display()))?;
    let problems = config.validate();
    if !problems.is_empty() {
        anyhow::bail!(
            "invalid config file {}:\n  {}",
            path.display(),
            problems.join("\n  ")
        );
    }
    Ok(config)
}

/// The credential for live generation: the `GEN_API_KEY` environment
/// variable, falling back to `generation.api_key` from the config file.
pub fn resolve_api_key(config: &GenerationConfig) -> Option<String> {
    api_key_from(env::var("GEN_API_KEY").ok(), config.api_key.as_deref())
}

fn api_key_from(env_value: Option<String>, config_value: Option<&str>) -> Option<String> {
    env_value
        .filter(|key| !key.is_empty())
        .or_else(|| config_value.map(str::to_owned))
        .filter(|key| !key.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn an_empty_file_yields_the_default_config() {
        let config: PipelineConfig = toml::from_str("").unwrap();
        assert_eq!(config, PipelineConfig::default());
        assert!(config.validate().is_empty());
    }

    #[test]
    fn sections_override_only_their_own_fields() {
        let text = "\
[generation]
endpoint = \"https://example.test/v1/chat/completions\"
model_name = \"solver-tuner\"
temperature = 0.2

[generation.retry]
max_attempts = 5

[solver]
tsp_city_cap = 10
";
        let config: PipelineConfig = toml::from_str(text).unwrap();
        assert_eq!(config.generation.temperature, 0.2);
        assert_eq!(config.generation.max_output_tokens, 4096);
        assert_eq!(config.generation.retry.max_attempts, 5);
        assert_eq!(config.generation.retry.base_delay_ms, 250);
        assert_eq!(config.solver.tsp_city_cap, 10);
        assert_eq!(config.sampler, SamplerConfig::default());
    }

    #[test]
    fn unknown_fields_are_rejected_with_the_field_name() {
        let err = toml::from_str::<PipelineConfig>("max_overgen_factor = 2.0").unwrap_err();
        assert!(err.to_string().contains("max_overgen_factor"));
    }

    #[test]
    fn validation_reports_every_problem() {
        let mut config = PipelineConfig::default();
        config.generation.temperature = 3.0;
        config.generation.max_in_flight = 0;
        config.max_overgeneration_factor = 0.5;
        let problems = config.validate();
        assert_eq!(problems.len(), 3);
        assert!(problems[0].contains("temperature"));
        assert!(problems[1].contains("max_in_flight"));
        assert!(problems[2].contains("max_overgeneration_factor"));
    }

    #[test]
    fn the_hash_tracks_content_not_identity() {
        let a = PipelineConfig::default();
        let mut b = PipelineConfig::default();
        assert_eq!(a.hash(), b.hash());
        b.generation.mock_seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn the_environment_key_wins_over_the_config_key() {
        assert_eq!(
            api_key_from(Some("env-key".into()), Some("file-key")),
            Some("env-key".into())
        );
        assert_eq!(
            api_key_from(None, Some("file-key")),
            Some("file-key".into())
        );
        assert_eq!(api_key_from(Some(String::new()), None), None);
        assert_eq!(api_key_from(None, None), None);
    }

    #[test]
    fn load_config_names_the_missing_file() {
        let err = load_config(Path::new("/nonexistent/pipeline.toml")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/pipeline.toml"));
    }

    #[test]
    fn the_checked_in_example_config_loads() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config/example.toml");
        let config = load_config(&path).unwrap();
        assert_eq!(config.generation.max_in_flight, 4);
        assert_eq!(config.generation.retry.max_attempts, 3);
        assert_eq!(config.sampler.tsp_cities.max, 12);
        assert_eq!(config.solver.tsp_city_cap, 12);
    }
}
