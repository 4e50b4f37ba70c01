//! Deterministic Monte Carlo simulator for classification error in
//! forced-ranking (stack-ranking) evaluation systems.
//!
//! The pipeline per replication: draw latent talents, partition engineers
//! into teams under an assignment policy, identify the global ground-truth
//! tails, apply per-team forced ranking, and score the decisions as a
//! confusion report. The harness runs seeded replications, aggregates means
//! with 95% confidence intervals, and drives parameter sweeps; a small
//! exhaustive oracle validates the engine on tiny instances.

pub mod config;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod org;
pub mod ranking;
pub mod report;
pub mod talent;

pub use config::{parse_config, render_config, OutputFormat, RunConfig};
pub use error::{Result, SimError};
pub use harness::{
    bias_curve, run_replication, run_scenario, sweep_cutoff, sweep_distribution, sweep_team_size,
    ReplicationResult, ScenarioSummary, SweepTable,
};
pub use oracle::{exhaustive_oracle, OracleExpectation};
pub use org::{
    build_biased_org, build_org, build_random_org, effective_headcount, sigma_within,
    AssignmentPolicy, Engineer, Organization, Scenario,
};
pub use ranking::{
    apply_forced_ranking, ground_truth, k_true, labels_per_team, score, ConfusionReport,
    ConfusionSide, Decisions, GroundTruth,
};
pub use talent::{sample_standardized, shape_raw_moments, Talent, TalentShape};
