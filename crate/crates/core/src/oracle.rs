//! Exhaustive small-instance oracle.
//!
//! Enumerates every distinct partition of a tiny population into equal-size
//! teams, applies forced ranking and scoring to each, and returns exact
//! expected confusion metrics. All counting is integer arithmetic; the
//! expectations are exact rationals rendered as f64. The per-partition
//! labeling and scoring here is deliberately self-contained so the oracle
//! stays an independent check on the Monte Carlo engine.

use crate::error::{Result, SimError};
use crate::ranking;

const MAX_ORACLE_HEADCOUNT: usize = 12;
const MAX_PARTITIONS: u128 = 1_000_000;

/// Exact expected confusion metrics for one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSide {
    pub labeled: usize,
    pub correct: f64,
    pub false_positive: f64,
    pub false_negative: f64,
    pub error_rate: f64,
}

/// Output of the exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleExpectation {
    pub headcount: usize,
    pub team_size: usize,
    pub k_true: usize,
    pub partitions: u64,
    pub terminations: OracleSide,
    pub promotions: OracleSide,
}

/// Number of ways to split n items into unlabeled teams of size m:
/// n! / ((m!)^k * k!).
fn partition_count(n: usize, m: usize) -> u128 {
    // Product over teams of C(remaining - 1, m - 1), anchoring the lowest
    // remaining element in each team.
    let mut count: u128 = 1;
    let mut remaining = n;
    while remaining > 0 {
        count *= binomial(remaining - 1, m - 1);
        remaining -= m;
    }
    count
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

struct Accumulator {
    partitions: u64,
    term_correct: u64,
    term_fp: u64,
    promo_correct: u64,
    promo_fp: u64,
}

/// Exact expected confusion report over all equal-size team partitions of
/// `talents`. Talents must be distinct; headcount is capped at 12 and the
/// partition count at 10^6.
pub fn exhaustive_oracle(
    talents: &[f64],
    team_size: usize,
    cutoff: f64,
) -> Result<OracleExpectation> {
    let n = talents.len();
    if n > MAX_ORACLE_HEADCOUNT {
        return Err(SimError::OracleCapacity(format!(
            "headcount {n} exceeds the oracle cap of {MAX_ORACLE_HEADCOUNT}"
        )));
    }
    if team_size < 2 || n == 0 || !n.is_multiple_of(team_size) {
        return Err(SimError::invalid_scenario(
            "team_size",
            format!("headcount {n} is not a positive multiple of team_size {team_size}"),
        ));
    }
    for (i, a) in talents.iter().enumerate() {
        if !a.is_finite() {
            return Err(SimError::invalid_scenario(
                "talents",
                "talents must be finite",
            ));
        }
        if talents[i + 1..].contains(a) {
            return Err(SimError::invalid_scenario(
                "talents",
                "talents must be distinct",
            ));
        }
    }
    let k = ranking::k_true(n, cutoff)?;
    let labels = ranking::labels_per_team(team_size, cutoff)?;

    let total = partition_count(n, team_size);
    if total > MAX_PARTITIONS {
        return Err(SimError::OracleCapacity(format!(
            "{total} partitions exceed the oracle cap of {MAX_PARTITIONS}"
        )));
    }

    // Global tails by talent rank; distinct talents, so no tie handling.
    let mut by_talent: Vec<usize> = (0..n).collect();
    by_talent.sort_by(|&a, &b| talents[a].total_cmp(&talents[b]));
    let bottom = &by_talent[..k];
    let top = &by_talent[n - k..];
    let mut in_bottom = vec![false; n];
    let mut in_top = vec![false; n];
    for &id in bottom {
        in_bottom[id] = true;
    }
    for &id in top {
        in_top[id] = true;
    }

    let mut acc = Accumulator {
        partitions: 0,
        term_correct: 0,
        term_fp: 0,
        promo_correct: 0,
        promo_fp: 0,
    };
    let mut used = vec![false; n];
    let mut teams: Vec<Vec<usize>> = Vec::with_capacity(n / team_size);
    enumerate(
        talents, team_size, labels, &in_bottom, &in_top, &mut used, &mut teams, &mut acc,
    );
    debug_assert_eq!(acc.partitions as u128, total);

    let labeled = labels * (n / team_size);
    let p = acc.partitions as f64;
    let side = |correct_sum: u64, fp_sum: u64| OracleSide {
        labeled,
        correct: correct_sum as f64 / p,
        false_positive: fp_sum as f64 / p,
        false_negative: (acc.partitions * k as u64 - correct_sum) as f64 / p,
        error_rate: fp_sum as f64 / (acc.partitions * labeled as u64) as f64,
    };
    Ok(OracleExpectation {
        headcount: n,
        team_size,
        k_true: k,
        partitions: acc.partitions,
        terminations: side(acc.term_correct, acc.term_fp),
        promotions: side(acc.promo_correct, acc.promo_fp),
    })
}

/// Canonical partition enumeration: the lowest-indexed unused element
/// anchors the next team, and companions are chosen in increasing index
/// order, so each unlabeled partition is visited exactly once.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    talents: &[f64],
    team_size: usize,
    labels: usize,
    in_bottom: &[bool],
    in_top: &[bool],
    used: &mut Vec<bool>,
    teams: &mut Vec<Vec<usize>>,
    acc: &mut Accumulator,
) {
    let anchor = match used.iter().position(|&u| !u) {
        Some(i) => i,
        None => {
            tally(talents, labels, in_bottom, in_top, teams, acc);
            return;
        }
    };
    used[anchor] = true;
    let mut team = Vec::with_capacity(team_size);
    team.push(anchor);
    choose_companions(
        talents,
        team_size,
        labels,
        in_bottom,
        in_top,
        used,
        teams,
        acc,
        &mut team,
        anchor + 1,
    );
    used[anchor] = false;
}

#[allow(clippy::too_many_arguments)]
fn choose_companions(
    talents: &[f64],
    team_size: usize,
    labels: usize,
    in_bottom: &[bool],
    in_top: &[bool],
    used: &mut Vec<bool>,
    teams: &mut Vec<Vec<usize>>,
    acc: &mut Accumulator,
    team: &mut Vec<usize>,
    from: usize,
) {
    if team.len() == team_size {
        teams.push(team.clone());
        enumerate(
            talents, team_size, labels, in_bottom, in_top, used, teams, acc,
        );
        teams.pop();
        return;
    }
    for i in from..talents.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        team.push(i);
        choose_companions(
            talents,
            team_size,
            labels,
            in_bottom,
            in_top,
            used,
            teams,
            acc,
            team,
            i + 1,
        );
        team.pop();
        used[i] = false;
    }
}

fn tally(
    talents: &[f64],
    labels: usize,
    in_bottom: &[bool],
    in_top: &[bool],
    teams: &[Vec<usize>],
    acc: &mut Accumulator,
) {
    acc.partitions += 1;
    for team in teams {
        let mut members = team.clone();
        members.sort_by(|&a, &b| talents[a].total_cmp(&talents[b]));
        for &id in &members[..labels] {
            if in_bottom[id] {
                acc.term_correct += 1;
            } else {
                acc.term_fp += 1;
            }
        }
        for &id in &members[members.len() - labels..] {
            if in_top[id] {
                acc.promo_correct += 1;
            } else {
                acc.promo_fp += 1;
            }
        }
    }
}
