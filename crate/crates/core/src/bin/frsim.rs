//! frsim: forced-ranking simulation CLI.
//!
//! Subcommands: `run` (one scenario), `sweep` (team size / shape / cutoff
//! grids), `bias-curve` (error vs. clustering level), `oracle` (exhaustive
//! small-instance check). All randomness flows from `--seed`; there are no
//! implicit entropy sources, so identical invocations produce byte-identical
//! output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use forced_ranking_sim::config::{self, OutputFormat, RunConfig};
use forced_ranking_sim::harness::{self, SweepTable};
use forced_ranking_sim::org::AssignmentPolicy;
use forced_ranking_sim::report;
use forced_ranking_sim::talent::TalentShape;
use forced_ranking_sim::{oracle, Result, SimError};

#[derive(Parser)]
#[command(
    name = "frsim",
    version,
    about = "Deterministic Monte Carlo simulator for forced-ranking classification error"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single scenario and emit its summary.
    Run(ScenarioArgs),
    /// Run a sensitivity sweep over team_size, shape, or cutoff.
    Sweep(SweepArgs),
    /// Sweep the team-clustering level sigma_team from 0 to 1.
    BiasCurve(BiasCurveArgs),
    /// Exhaustively enumerate a tiny instance and emit exact expectations.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// Config file (flat `key: value` lines); flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of replications.
    #[arg(long)]
    reps: Option<usize>,
    /// Assignment policy: random | biased.
    #[arg(long)]
    policy: Option<String>,
    /// Team-mean spread in [0, 1]; requires the biased policy.
    #[arg(long = "sigma-team")]
    sigma_team: Option<f64>,
    /// Engineers per team.
    #[arg(long = "team-size")]
    team_size: Option<usize>,
    /// Tail fraction in (0, 0.5).
    #[arg(long)]
    cutoff: Option<f64>,
    /// Talent distribution: normal | lognormal | uniform.
    #[arg(long)]
    shape: Option<String>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Which parameter to sweep: team_size | shape | cutoff.
    #[arg(long)]
    param: String,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct BiasCurveArgs {
    /// Comma-separated sigma_team levels (default 0.0,0.1,...,1.0).
    #[arg(long)]
    levels: Option<String>,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Comma-separated distinct talents, at most 12
    /// (default -2.5,-1.5,-0.5,0.5,1.5,2.5).
    #[arg(long)]
    talents: Option<String>,
    /// Engineers per team (default 3; must divide the headcount).
    #[arg(long = "team-size")]
    team_size: Option<usize>,
    /// Tail fraction in (0, 0.5).
    #[arg(long)]
    cutoff: Option<f64>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

impl ScenarioArgs {
    /// Loads the config file (or defaults) and applies flag overrides;
    /// flags win.
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => config::parse_config(&std::fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(reps) = self.reps {
            cfg.scenario.replications = reps;
        }
        if let Some(size) = self.team_size {
            cfg.scenario.team_size = size;
        }
        if let Some(cutoff) = self.cutoff {
            cfg.scenario.cutoff = cutoff;
        }
        if let Some(shape) = &self.shape {
            cfg.scenario.shape = TalentShape::parse(shape)?;
        }
        if self.policy.is_some() || self.sigma_team.is_some() {
            let config_sigma = match cfg.scenario.policy {
                AssignmentPolicy::Biased { sigma_team } => Some(sigma_team),
                AssignmentPolicy::Random => None,
            };
            let policy_name = match (&self.policy, cfg.scenario.policy) {
                (Some(p), _) => Some(p.clone()),
                (None, AssignmentPolicy::Biased { .. }) => Some("biased".to_string()),
                (None, AssignmentPolicy::Random) => None,
            };
            // A --sigma-team flag always wins; the config file's sigma only
            // carries over when the policy is not being switched away from
            // biased by an explicit --policy flag.
            let sigma = match (&self.sigma_team, &self.policy) {
                (Some(s), _) => Some(*s),
                (None, Some(p)) if p != "biased" => None,
                (None, _) => config_sigma,
            };
            cfg.scenario.policy = config::resolve_policy(policy_name.as_deref(), sigma)?;
        }
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.output_path = Some(out.clone());
        }
        if let Some(format) = &self.format {
            cfg.output_format = OutputFormat::parse(format)?;
        }
        cfg.scenario.validate()?;
        Ok(cfg)
    }
}

fn parse_float_list(text: &str, field: &'static str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                SimError::invalid_scenario(field, format!("`{}` is not a number", s.trim()))
            })
        })
        .collect()
}

fn cmd_run(args: &ScenarioArgs) -> Result<()> {
    let cfg = args.resolve()?;
    let summary = harness::run_scenario(&cfg.scenario, cfg.master_seed)?;
    let doc = report::render_summary(&summary, cfg.output_format)?;
    report::write_document(cfg.output_path.as_deref(), &doc)
}

fn run_sweep(param: &str, cfg: &RunConfig) -> Result<SweepTable> {
    let template = &cfg.scenario;
    match param {
        "team_size" => harness::sweep_team_size(&[5, 6, 7, 8, 9], template, cfg.master_seed),
        "shape" => harness::sweep_distribution(&TalentShape::ALL, template, cfg.master_seed),
        "cutoff" => harness::sweep_cutoff(&[0.10, 0.15, 0.20], template, cfg.master_seed),
        other => Err(SimError::ConfigValidation {
            field: "param".into(),
            message: format!("must be team_size, shape, or cutoff, got `{other}`"),
        }),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = args.scenario.resolve()?;
    let table = run_sweep(&args.param, &cfg)?;
    let doc = report::render_sweep(&table, cfg.output_format)?;
    report::write_document(cfg.output_path.as_deref(), &doc)
}

fn cmd_bias_curve(args: &BiasCurveArgs) -> Result<()> {
    let cfg = args.scenario.resolve()?;
    let levels = match &args.levels {
        Some(text) => parse_float_list(text, "sigma_team")?,
        None => (0..=10).map(|i| i as f64 / 10.0).collect(),
    };
    let table = harness::bias_curve(&levels, &cfg.scenario, cfg.master_seed)?;
    let doc = report::render_sweep(&table, cfg.output_format)?;
    report::write_document(cfg.output_path.as_deref(), &doc)
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let talents = match &args.talents {
        Some(text) => parse_float_list(text, "talents")?,
        None => vec![-2.5, -1.5, -0.5, 0.5, 1.5, 2.5],
    };
    let team_size = args.team_size.unwrap_or(3);
    let cutoff = args.cutoff.unwrap_or(0.15);
    let format = match &args.format {
        Some(f) => OutputFormat::parse(f)?,
        None => OutputFormat::Csv,
    };
    let exp = oracle::exhaustive_oracle(&talents, team_size, cutoff)?;
    let doc = report::render_oracle(&exp, format)?;
    report::write_document(args.out.as_deref(), &doc)
}

fn exit_code_for(err: &SimError) -> u8 {
    match err {
        SimError::InvalidScenario { .. }
        | SimError::ConfigParse { .. }
        | SimError::ConfigValidation { .. } => 2,
        SimError::Io(_) => 3,
        SimError::OracleCapacity(_) => 4,
        SimError::Inconsistency(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::BiasCurve(args) => cmd_bias_curve(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("frsim: error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
