//! Replication engine: seeded streams, mean/CI aggregation, and the
//! sensitivity sweeps.
//!
//! Every replication owns an independent ChaCha8 stream derived from
//! (master_seed, replication_index), so replications can run in any order or
//! in parallel and still produce bit-identical aggregates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::org::{build_org, AssignmentPolicy, Scenario};
use crate::ranking::{apply_forced_ranking, ground_truth, score, ConfusionReport};
use crate::talent::TalentShape;

/// One replication's confusion report, keyed by its index.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub replication_index: usize,
    pub report: ConfusionReport,
}

/// A sample mean with its 95% normal-approximation half-width,
/// 1.96 * sd / sqrt(R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCi {
    pub mean: f64,
    pub ci95_half_width: f64,
}

/// Aggregated metrics for one side (terminations or promotions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideSummary {
    pub labeled: usize,
    pub correct: MeanCi,
    pub false_positive: MeanCi,
    pub false_negative: MeanCi,
    pub error_rate: MeanCi,
}

/// Mean outcomes over all replications of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSummary {
    pub scenario: Scenario,
    pub master_seed: u64,
    pub replications: usize,
    pub terminations: SideSummary,
    pub promotions: SideSummary,
    /// Per-replication mean of the two side error rates.
    pub average_error_rate: MeanCi,
}

/// Which scenario field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    TeamSize,
    Shape,
    Cutoff,
    BiasLevel,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::TeamSize => "team_size",
            SweepParam::Shape => "shape",
            SweepParam::Cutoff => "cutoff",
            SweepParam::BiasLevel => "sigma_team",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub summary: ScenarioSummary,
}

/// Ordered rows of (swept value, summary).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub param: SweepParam,
    pub rows: Vec<SweepRow>,
}

/// Derives the independent stream for one replication. SplitMix64-mixes the
/// pair into a single seed, then expands it through ChaCha8. Pure integer
/// arithmetic, so the mapping is identical on every platform.
pub fn replication_stream(master_seed: u64, replication_index: u64) -> ChaCha8Rng {
    let mut z = master_seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(replication_index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Runs one end-to-end replication: build the organization, identify ground
/// truth, apply forced ranking, score.
pub fn run_replication(
    scenario: &Scenario,
    master_seed: u64,
    replication_index: usize,
) -> Result<ReplicationResult> {
    let mut rng = replication_stream(master_seed, replication_index as u64);
    let org = build_org(scenario, &mut rng)?;
    let truth = ground_truth(&org, scenario.cutoff, &mut rng)?;
    let decisions = apply_forced_ranking(&org, scenario.cutoff, &mut rng)?;
    let report = score(&decisions, &truth)?;
    Ok(ReplicationResult {
        replication_index,
        report,
    })
}

fn mean_ci(xs: &[f64]) -> MeanCi {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    MeanCi {
        mean,
        ci95_half_width: 1.96 * var.sqrt() / n.sqrt(),
    }
}

fn summarize_side(
    labeled: usize,
    reports: &[ReplicationResult],
    pick: impl Fn(&ConfusionReport) -> crate::ranking::ConfusionSide,
) -> SideSummary {
    let collect = |f: &dyn Fn(&crate::ranking::ConfusionSide) -> f64| -> Vec<f64> {
        reports.iter().map(|r| f(&pick(&r.report))).collect()
    };
    SideSummary {
        labeled,
        correct: mean_ci(&collect(&|s| s.correct as f64)),
        false_positive: mean_ci(&collect(&|s| s.false_positive as f64)),
        false_negative: mean_ci(&collect(&|s| s.false_negative as f64)),
        error_rate: mean_ci(&collect(&|s| s.error_rate)),
    }
}

/// Runs all replications of a scenario (in parallel) and aggregates
/// per-metric means and 95% confidence intervals. Results are keyed by
/// replication index, so the aggregate does not depend on execution order.
pub fn run_scenario(scenario: &Scenario, master_seed: u64) -> Result<ScenarioSummary> {
    scenario.validate()?;
    if scenario.replications < 2 {
        return Err(SimError::invalid_scenario(
            "replications",
            "replications must be at least 2 to form confidence intervals",
        ));
    }
    let results: Vec<ReplicationResult> = (0..scenario.replications)
        .into_par_iter()
        .map(|i| run_replication(scenario, master_seed, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(scenario, master_seed, &results))
}

/// Aggregates already-computed replications (index order).
pub fn summarize(
    scenario: &Scenario,
    master_seed: u64,
    results: &[ReplicationResult],
) -> ScenarioSummary {
    let labeled = scenario.labels_per_team() * scenario.team_count();
    let avg_errors: Vec<f64> = results
        .iter()
        .map(|r| (r.report.terminations.error_rate + r.report.promotions.error_rate) / 2.0)
        .collect();
    ScenarioSummary {
        scenario: *scenario,
        master_seed,
        replications: results.len(),
        terminations: summarize_side(labeled, results, |r| r.terminations),
        promotions: summarize_side(labeled, results, |r| r.promotions),
        average_error_rate: mean_ci(&avg_errors),
    }
}

fn require_strictly_increasing<T: PartialOrd + std::fmt::Debug>(
    values: &[T],
    field: &'static str,
) -> Result<()> {
    if values.is_empty() {
        return Err(SimError::invalid_scenario(field, "sweep values are empty"));
    }
    for pair in values.windows(2) {
        if pair[0] >= pair[1] {
            return Err(SimError::invalid_scenario(
                field,
                format!("sweep values must be strictly increasing, got {values:?}"),
            ));
        }
    }
    Ok(())
}

/// One summary per team size, re-deriving the effective headcount from the
/// template's base headcount.
pub fn sweep_team_size(
    sizes: &[usize],
    template: &Scenario,
    master_seed: u64,
) -> Result<SweepTable> {
    require_strictly_increasing(sizes, "team_size")?;
    if sizes.iter().any(|&s| !(5..=9).contains(&s)) {
        return Err(SimError::invalid_scenario(
            "team_size",
            "team-size sweep values must lie in 5..=9",
        ));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let scenario = Scenario {
            team_size: size,
            ..*template
        };
        rows.push(SweepRow {
            value: size.to_string(),
            summary: run_scenario(&scenario, master_seed)?,
        });
    }
    Ok(SweepTable {
        param: SweepParam::TeamSize,
        rows,
    })
}

/// One summary per talent distribution shape.
pub fn sweep_distribution(
    shapes: &[TalentShape],
    template: &Scenario,
    master_seed: u64,
) -> Result<SweepTable> {
    if shapes.is_empty() {
        return Err(SimError::invalid_scenario(
            "shape",
            "sweep values are empty",
        ));
    }
    for (i, s) in shapes.iter().enumerate() {
        if shapes[i + 1..].contains(s) {
            return Err(SimError::invalid_scenario(
                "shape",
                format!("duplicate shape {} in sweep", s.name()),
            ));
        }
    }
    let mut rows = Vec::with_capacity(shapes.len());
    for &shape in shapes {
        let scenario = Scenario { shape, ..*template };
        rows.push(SweepRow {
            value: shape.name().to_string(),
            summary: run_scenario(&scenario, master_seed)?,
        });
    }
    Ok(SweepTable {
        param: SweepParam::Shape,
        rows,
    })
}

/// One summary per cutoff fraction.
pub fn sweep_cutoff(cutoffs: &[f64], template: &Scenario, master_seed: u64) -> Result<SweepTable> {
    require_strictly_increasing(cutoffs, "cutoff")?;
    let mut rows = Vec::with_capacity(cutoffs.len());
    for &cutoff in cutoffs {
        let scenario = Scenario {
            cutoff,
            ..*template
        };
        rows.push(SweepRow {
            value: format!("{cutoff:?}"),
            summary: run_scenario(&scenario, master_seed)?,
        });
    }
    Ok(SweepTable {
        param: SweepParam::Cutoff,
        rows,
    })
}

/// One summary per bias level. The template's policy is replaced by
/// `Biased { sigma_team: level }` row by row; level 0 reproduces random
/// assignment in distribution.
pub fn bias_curve(levels: &[f64], template: &Scenario, master_seed: u64) -> Result<SweepTable> {
    require_strictly_increasing(levels, "sigma_team")?;
    if levels.iter().any(|&l| !(0.0..=1.0).contains(&l)) {
        return Err(SimError::invalid_scenario(
            "sigma_team",
            "bias levels must lie in [0, 1]",
        ));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let scenario = Scenario {
            policy: AssignmentPolicy::Biased { sigma_team: level },
            ..*template
        };
        rows.push(SweepRow {
            value: format!("{level:?}"),
            summary: run_scenario(&scenario, master_seed)?,
        });
    }
    Ok(SweepTable {
        param: SweepParam::BiasLevel,
        rows,
    })
}
