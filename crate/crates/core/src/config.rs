//! Flat key-value configuration documents.
//!
//! One `key: value` pair per line, `#` comments, UTF-8. Every field has a
//! default, so the empty document is the baseline scenario: 994 engineers,
//! teams of 7, 15% cutoff, normal talent, random assignment, 100
//! replications.

use std::path::PathBuf;

use crate::error::{Result, SimError};
use crate::org::{AssignmentPolicy, Scenario};
use crate::talent::TalentShape;

pub const DEFAULT_MASTER_SEED: u64 = 42;
pub const DEFAULT_SIGMA_TEAM: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(SimError::ConfigValidation {
                field: "output_format".into(),
                message: format!("must be csv or json, got `{other}`"),
            }),
        }
    }
}

/// A scenario plus run plumbing: master seed, output destination and format.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: Scenario::default(),
            master_seed: DEFAULT_MASTER_SEED,
            output_path: None,
            output_format: OutputFormat::Csv,
        }
    }
}

fn parse_number<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| SimError::ConfigParse {
            line,
            message: format!("expected a number for `{key}`, got `{}`", value.trim()),
        })
}

/// Parses a configuration document, applying defaults for omitted keys and
/// validating the resulting scenario.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut policy_name: Option<String> = None;
    let mut sigma_team: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or_else(|| SimError::ConfigParse {
            line: line_no,
            message: format!("expected `key: value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(SimError::ConfigParse {
                line: line_no,
                message: format!("missing value for `{key}`"),
            });
        }
        match key {
            "base_headcount" => cfg.scenario.base_headcount = parse_number(value, line_no, key)?,
            "team_size" => cfg.scenario.team_size = parse_number(value, line_no, key)?,
            "cutoff" => cfg.scenario.cutoff = parse_number(value, line_no, key)?,
            "replications" => cfg.scenario.replications = parse_number(value, line_no, key)?,
            "shape" => cfg.scenario.shape = TalentShape::parse(value)?,
            "policy" => policy_name = Some(value.to_ascii_lowercase()),
            "sigma_team" => sigma_team = Some(parse_number(value, line_no, key)?),
            "master_seed" => cfg.master_seed = parse_number(value, line_no, key)?,
            "output_path" => cfg.output_path = Some(PathBuf::from(value)),
            "output_format" => cfg.output_format = OutputFormat::parse(value)?,
            other => {
                return Err(SimError::ConfigValidation {
                    field: other.to_string(),
                    message: format!("unknown key at line {line_no}"),
                });
            }
        }
    }

    cfg.scenario.policy = resolve_policy(policy_name.as_deref(), sigma_team)?;
    cfg.scenario.validate()?;
    Ok(cfg)
}

/// Combines the `policy` and `sigma_team` fields. `sigma_team` is only
/// meaningful under the biased policy; setting it alone is rejected rather
/// than silently switching policies.
pub fn resolve_policy(policy: Option<&str>, sigma_team: Option<f64>) -> Result<AssignmentPolicy> {
    match (policy, sigma_team) {
        (None | Some("random"), None) => Ok(AssignmentPolicy::Random),
        (None | Some("random"), Some(_)) => Err(SimError::ConfigValidation {
            field: "sigma_team".into(),
            message: "sigma_team requires `policy: biased`".into(),
        }),
        (Some("biased"), sigma) => Ok(AssignmentPolicy::Biased {
            sigma_team: sigma.unwrap_or(DEFAULT_SIGMA_TEAM),
        }),
        (Some(other), _) => Err(SimError::ConfigValidation {
            field: "policy".into(),
            message: format!("must be random or biased, got `{other}`"),
        }),
    }
}

/// Renders a config back to the flat key-value document form.
/// `parse_config(render_config(cfg))` reproduces `cfg` exactly.
pub fn render_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let s = &cfg.scenario;
    out.push_str(&format!("base_headcount: {}\n", s.base_headcount));
    out.push_str(&format!("team_size: {}\n", s.team_size));
    out.push_str(&format!("cutoff: {:?}\n", s.cutoff));
    match s.policy {
        AssignmentPolicy::Random => out.push_str("policy: random\n"),
        AssignmentPolicy::Biased { sigma_team } => {
            out.push_str("policy: biased\n");
            out.push_str(&format!("sigma_team: {sigma_team:?}\n"));
        }
    }
    out.push_str(&format!("shape: {}\n", s.shape.name()));
    out.push_str(&format!("replications: {}\n", s.replications));
    out.push_str(&format!("master_seed: {}\n", cfg.master_seed));
    if let Some(path) = &cfg.output_path {
        out.push_str(&format!("output_path: {}\n", path.display()));
    }
    out.push_str(&format!("output_format: {}\n", cfg.output_format.name()));
    out
}
