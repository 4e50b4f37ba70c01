//! Ground-truth identification, per-team forced-ranking labels, and
//! confusion scoring.
//!
//! Ground truth ranks the whole population by latent talent; forced ranking
//! only ever ranks within a team. Scoring compares the two id sets per side
//! (terminations against the global bottom tail, promotions against the
//! global top tail).

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Result, SimError};
use crate::org::Organization;

/// The global bottom-k and top-k talent sets that define correct decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub bottom_ids: BTreeSet<usize>,
    pub top_ids: BTreeSet<usize>,
    pub k_true: usize,
    pub headcount: usize,
}

/// The termination and promotion sets produced by forced ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decisions {
    pub terminate_ids: BTreeSet<usize>,
    pub promote_ids: BTreeSet<usize>,
    pub headcount: usize,
}

/// Per-side confusion counts and error rate.
///
/// Invariants: correct + false_positive = labeled,
/// correct + false_negative = k_true, error_rate = false_positive / labeled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionSide {
    pub correct: usize,
    pub false_positive: usize,
    pub false_negative: usize,
    pub labeled: usize,
    pub error_rate: f64,
}

/// Both sides of one replication's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfusionReport {
    pub terminations: ConfusionSide,
    pub promotions: ConfusionSide,
}

/// Number of engineers in each ground-truth tail: the count of order
/// statistics at or below the linearly interpolated cutoff quantile,
/// floor(cutoff * (headcount - 1)) + 1.
pub fn k_true(headcount: usize, cutoff: f64) -> Result<usize> {
    if headcount < 2 {
        return Err(SimError::invalid_scenario(
            "headcount",
            "headcount must be at least 2",
        ));
    }
    if !(cutoff > 0.0 && cutoff < 0.5) {
        return Err(SimError::invalid_scenario(
            "cutoff",
            "cutoff must lie in (0, 0.5)",
        ));
    }
    Ok((cutoff * (headcount - 1) as f64).floor() as usize + 1)
}

/// Per-team label quota for each side: max(1, round-half-up(team_size * cutoff)).
pub fn labels_per_team(team_size: usize, cutoff: f64) -> Result<usize> {
    if team_size < 2 {
        return Err(SimError::invalid_scenario(
            "team_size",
            "team_size must be at least 2",
        ));
    }
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(SimError::invalid_scenario(
            "cutoff",
            "cutoff must be positive",
        ));
    }
    let labels = ((team_size as f64 * cutoff + 0.5).floor() as usize).max(1);
    if 2 * labels > team_size {
        return Err(SimError::invalid_scenario(
            "cutoff",
            format!(
                "termination and promotion labels overlap: 2 x {labels} > team_size {team_size}"
            ),
        ));
    }
    Ok(labels)
}

/// Ids in ascending talent order. Exact ties are broken uniformly at random
/// by pairing every id with a fresh draw from `rng` and sorting on
/// (talent, draw): within a tied block the relative order is a uniform
/// permutation, so both tails of the order are uniform selections. With
/// distinct talents the draws have no effect on the result.
fn tie_broken_ascending<R: Rng + ?Sized>(
    ids: &[usize],
    org: &Organization,
    rng: &mut R,
) -> Vec<usize> {
    let mut keyed: Vec<(usize, u64)> = ids.iter().map(|&id| (id, rng.random::<u64>())).collect();
    keyed.sort_unstable_by(|&(ia, ka), &(ib, kb)| {
        org.talent_of(ia)
            .total_cmp(&org.talent_of(ib))
            .then(ka.cmp(&kb))
            .then(ia.cmp(&ib))
    });
    keyed.into_iter().map(|(id, _)| id).collect()
}

/// Ranks the whole organization by talent and returns the global bottom-k
/// and top-k id sets.
pub fn ground_truth<R: Rng + ?Sized>(
    org: &Organization,
    cutoff: f64,
    rng: &mut R,
) -> Result<GroundTruth> {
    let n = org.headcount();
    let k = k_true(n, cutoff)?;
    let ids: Vec<usize> = (0..n).collect();
    let order = tie_broken_ascending(&ids, org, rng);
    let bottom_ids: BTreeSet<usize> = order[..k].iter().copied().collect();
    let top_ids: BTreeSet<usize> = order[n - k..].iter().copied().collect();
    debug_assert!(bottom_ids.is_disjoint(&top_ids));
    Ok(GroundTruth {
        bottom_ids,
        top_ids,
        k_true: k,
        headcount: n,
    })
}

/// Applies forced ranking team by team: the lowest `labels_per_team` talents
/// of each team are terminated and the highest are promoted. No cross-team
/// information is used.
pub fn apply_forced_ranking<R: Rng + ?Sized>(
    org: &Organization,
    cutoff: f64,
    rng: &mut R,
) -> Result<Decisions> {
    let labels = labels_per_team(org.team_size(), cutoff)?;
    let mut terminate_ids = BTreeSet::new();
    let mut promote_ids = BTreeSet::new();
    for team in org.team_member_ids() {
        let order = tie_broken_ascending(&team, org, rng);
        terminate_ids.extend(&order[..labels]);
        promote_ids.extend(&order[order.len() - labels..]);
    }
    // Both tails come from one within-team order and 2*labels <= team_size,
    // so the sets cannot collide.
    debug_assert!(terminate_ids.is_disjoint(&promote_ids));
    Ok(Decisions {
        terminate_ids,
        promote_ids,
        headcount: org.headcount(),
    })
}

fn score_side(labeled_set: &BTreeSet<usize>, truth_set: &BTreeSet<usize>) -> Result<ConfusionSide> {
    let labeled = labeled_set.len();
    if labeled == 0 {
        return Err(SimError::Inconsistency(
            "no labeled engineers to score".into(),
        ));
    }
    let correct = labeled_set.intersection(truth_set).count();
    Ok(ConfusionSide {
        correct,
        false_positive: labeled - correct,
        false_negative: truth_set.len() - correct,
        labeled,
        error_rate: (labeled - correct) as f64 / labeled as f64,
    })
}

/// Scores decisions against ground truth, per side.
pub fn score(decisions: &Decisions, truth: &GroundTruth) -> Result<ConfusionReport> {
    if decisions.headcount != truth.headcount {
        return Err(SimError::Inconsistency(format!(
            "decisions cover {} engineers but ground truth covers {}",
            decisions.headcount, truth.headcount
        )));
    }
    if truth.bottom_ids.len() != truth.k_true || truth.top_ids.len() != truth.k_true {
        return Err(SimError::Inconsistency(
            "ground-truth tails do not match k_true".into(),
        ));
    }
    if !decisions.terminate_ids.is_disjoint(&decisions.promote_ids) {
        return Err(SimError::Inconsistency(
            "termination and promotion sets overlap".into(),
        ));
    }
    Ok(ConfusionReport {
        terminations: score_side(&decisions.terminate_ids, &truth.bottom_ids)?,
        promotions: score_side(&decisions.promote_ids, &truth.top_ids)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::org::{build_random_org, Scenario};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn org_single_team(talents: &[f64]) -> Organization {
        Organization::from_parts(talents, &vec![0; talents.len()], talents.len()).unwrap()
    }

    #[test]
    fn k_true_matches_reference_cutoffs() {
        assert_eq!(k_true(994, 0.15).unwrap(), 149);
        assert_eq!(k_true(994, 0.10).unwrap(), 100);
        assert_eq!(k_true(994, 0.20).unwrap(), 199);
        assert_eq!(k_true(990, 0.15).unwrap(), 149);
        assert_eq!(k_true(6, 0.15).unwrap(), 1);
        assert_eq!(k_true(8, 0.15).unwrap(), 2);
        assert!(k_true(994, 0.0).is_err());
        assert!(k_true(994, 0.5).is_err());
        assert!(k_true(1, 0.15).is_err());
    }

    #[test]
    fn labels_per_team_is_one_across_reference_grid() {
        for size in 5..=9 {
            assert_eq!(labels_per_team(size, 0.15).unwrap(), 1, "size {size}");
        }
        assert_eq!(labels_per_team(7, 0.10).unwrap(), 1);
        assert_eq!(labels_per_team(7, 0.20).unwrap(), 1);
        assert_eq!(labels_per_team(10, 0.15).unwrap(), 2);
        assert_eq!(labels_per_team(20, 0.15).unwrap(), 3);
        // Overlap is only reachable with an out-of-range cutoff.
        assert!(labels_per_team(3, 0.7).is_err());
    }

    #[test]
    fn ground_truth_splits_three_distinct_talents() {
        let org = Organization::from_parts(&[-2.0, 0.0, 2.0, 1.0], &[0, 0, 1, 1], 2).unwrap();
        let truth = ground_truth(&org, 0.25, &mut rng(1)).unwrap();
        assert_eq!(truth.k_true, 1);
        assert_eq!(truth.bottom_ids, [0].into());
        assert_eq!(truth.top_ids, [2].into());
    }

    #[test]
    fn ground_truth_tail_sizes_at_baseline() {
        let s = Scenario::default();
        let org = build_random_org(&s, &mut rng(2)).unwrap();
        let truth = ground_truth(&org, 0.15, &mut rng(3)).unwrap();
        assert_eq!(truth.bottom_ids.len(), 149);
        assert_eq!(truth.top_ids.len(), 149);
        assert!(truth.bottom_ids.is_disjoint(&truth.top_ids));
    }

    #[test]
    fn distinct_talents_ignore_the_tie_stream() {
        let s = Scenario::default();
        let org = build_random_org(&s, &mut rng(4)).unwrap();
        // Different tie-break streams, same outcome.
        let a = ground_truth(&org, 0.15, &mut rng(100)).unwrap();
        let b = ground_truth(&org, 0.15, &mut rng(200)).unwrap();
        assert_eq!(a, b);
        let a = apply_forced_ranking(&org, 0.15, &mut rng(100)).unwrap();
        let b = apply_forced_ranking(&org, 0.15, &mut rng(200)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn forced_ranking_labels_team_extremes() {
        let talents = [-1.2, 0.3, 0.5, 0.9, 1.1, 1.4, 2.0];
        let org = org_single_team(&talents);
        let d = apply_forced_ranking(&org, 0.15, &mut rng(5)).unwrap();
        assert_eq!(d.terminate_ids, [0].into());
        assert_eq!(d.promote_ids, [6].into());
    }

    #[test]
    fn single_team_equals_global_frame() {
        // One team of 20 at cutoff 0.15: labels 3 = k_true 3, so decisions
        // coincide with ground truth exactly.
        let talents: Vec<f64> = (0..20).map(|i| (i as f64) * 0.37 - 3.0).collect();
        let org = org_single_team(&talents);
        let truth = ground_truth(&org, 0.15, &mut rng(6)).unwrap();
        let d = apply_forced_ranking(&org, 0.15, &mut rng(7)).unwrap();
        assert_eq!(truth.k_true, 3);
        assert_eq!(d.terminate_ids, truth.bottom_ids);
        assert_eq!(d.promote_ids, truth.top_ids);
        let report = score(&d, &truth).unwrap();
        assert_eq!(report.terminations.error_rate, 0.0);
        assert_eq!(report.promotions.error_rate, 0.0);
    }

    #[test]
    fn all_equal_talents_pick_distinct_members_uniformly() {
        let org = org_single_team(&[0.5; 7]);
        let mut counts = [0usize; 7];
        let mut r = rng(8);
        let reps = 70_000;
        for _ in 0..reps {
            let d = apply_forced_ranking(&org, 0.15, &mut r).unwrap();
            assert_eq!(d.terminate_ids.len(), 1);
            assert_eq!(d.promote_ids.len(), 1);
            assert!(d.terminate_ids.is_disjoint(&d.promote_ids));
            counts[*d.terminate_ids.first().unwrap()] += 1;
        }
        // Each member should be terminated ~1/7 of the time; 4-sigma band.
        let expect = reps as f64 / 7.0;
        let sd = (reps as f64 * (1.0 / 7.0) * (6.0 / 7.0)).sqrt();
        for (id, &c) in counts.iter().enumerate() {
            assert!(
                (c as f64 - expect).abs() < 4.0 * sd,
                "member {id} terminated {c} times, expected ~{expect}"
            );
        }
    }

    #[test]
    fn six_engineers_always_score_one_false_positive() {
        // Exhaustive over all 10 partitions of 6 distinct talents into two
        // teams of 3, k_true = 1: the global minimum is always its team's
        // minimum (correct = 1, FN = 0) and the other team's minimum is
        // always a false positive, so every partition scores error 0.5.
        let talents = [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5];
        let mut partitions = 0;
        for b in 1..6 {
            for c in (b + 1)..6 {
                let mut team_of = [1usize; 6];
                team_of[0] = 0;
                team_of[b] = 0;
                team_of[c] = 0;
                let org = Organization::from_parts(&talents, &team_of, 3).unwrap();
                let truth = ground_truth(&org, 0.15, &mut rng(1)).unwrap();
                let d = apply_forced_ranking(&org, 0.15, &mut rng(2)).unwrap();
                let report = score(&d, &truth).unwrap();
                assert_eq!(report.terminations.false_positive, 1);
                assert_eq!(report.terminations.false_negative, 0);
                assert_eq!(report.terminations.correct, 1);
                assert_eq!(report.terminations.error_rate, 0.5);
                assert_eq!(report.promotions.error_rate, 0.5);
                partitions += 1;
            }
        }
        assert_eq!(partitions, 10);
    }

    #[test]
    fn score_counts_set_arithmetic() {
        let d = Decisions {
            terminate_ids: [1, 2].into(),
            promote_ids: [5, 6].into(),
            headcount: 8,
        };
        let truth = GroundTruth {
            bottom_ids: [2, 3].into(),
            top_ids: [5, 7].into(),
            k_true: 2,
            headcount: 8,
        };
        let report = score(&d, &truth).unwrap();
        assert_eq!(report.terminations.correct, 1);
        assert_eq!(report.terminations.false_positive, 1);
        assert_eq!(report.terminations.false_negative, 1);
        assert_eq!(report.terminations.error_rate, 0.5);
        assert_eq!(report.promotions.correct, 1);
        assert_eq!(report.promotions.error_rate, 0.5);
    }

    #[test]
    fn score_rejects_mismatched_universes() {
        let d = Decisions {
            terminate_ids: [0].into(),
            promote_ids: [1].into(),
            headcount: 6,
        };
        let truth = GroundTruth {
            bottom_ids: [0].into(),
            top_ids: [1].into(),
            k_true: 1,
            headcount: 994,
        };
        assert!(matches!(score(&d, &truth), Err(SimError::Inconsistency(_))));
    }

    #[test]
    fn accounting_identities_hold_per_replication() {
        let s = Scenario::default();
        for seed in 0..10 {
            let mut r = rng(300 + seed);
            let org = build_random_org(&s, &mut r).unwrap();
            let truth = ground_truth(&org, s.cutoff, &mut r).unwrap();
            let d = apply_forced_ranking(&org, s.cutoff, &mut r).unwrap();
            let rep = score(&d, &truth).unwrap();
            for side in [rep.terminations, rep.promotions] {
                assert_eq!(side.correct + side.false_positive, side.labeled);
                assert_eq!(side.correct + side.false_negative, truth.k_true);
                assert!((0.0..=1.0).contains(&side.error_rate));
            }
            assert_eq!(rep.terminations.labeled, 142);
        }
    }

    #[test]
    fn monotone_transform_leaves_outcomes_unchanged() {
        let s = Scenario::default();
        let org = build_random_org(&s, &mut rng(11)).unwrap();
        let talents: Vec<f64> = org.engineers().iter().map(|e| e.talent.value()).collect();
        let team_of: Vec<usize> = org.engineers().iter().map(|e| e.team_id).collect();
        let transformed: Vec<f64> = talents.iter().map(|&x| x.powi(3) + 2.0 * x).collect();
        let org2 = Organization::from_parts(&transformed, &team_of, s.team_size).unwrap();

        let t1 = ground_truth(&org, s.cutoff, &mut rng(50)).unwrap();
        let t2 = ground_truth(&org2, s.cutoff, &mut rng(51)).unwrap();
        assert_eq!(t1, t2);
        let d1 = apply_forced_ranking(&org, s.cutoff, &mut rng(52)).unwrap();
        let d2 = apply_forced_ranking(&org2, s.cutoff, &mut rng(53)).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn negating_talents_swaps_the_sides() {
        let s = Scenario::default();
        let org = build_random_org(&s, &mut rng(12)).unwrap();
        let talents: Vec<f64> = org.engineers().iter().map(|e| e.talent.value()).collect();
        let team_of: Vec<usize> = org.engineers().iter().map(|e| e.team_id).collect();
        let negated: Vec<f64> = talents.iter().map(|&x| -x).collect();
        let org_neg = Organization::from_parts(&negated, &team_of, s.team_size).unwrap();

        let t = ground_truth(&org, s.cutoff, &mut rng(60)).unwrap();
        let t_neg = ground_truth(&org_neg, s.cutoff, &mut rng(61)).unwrap();
        assert_eq!(t.bottom_ids, t_neg.top_ids);
        assert_eq!(t.top_ids, t_neg.bottom_ids);

        let d = apply_forced_ranking(&org, s.cutoff, &mut rng(62)).unwrap();
        let d_neg = apply_forced_ranking(&org_neg, s.cutoff, &mut rng(63)).unwrap();
        assert_eq!(d.terminate_ids, d_neg.promote_ids);
        assert_eq!(d.promote_ids, d_neg.terminate_ids);

        let r = score(&d, &t).unwrap();
        let r_neg = score(&d_neg, &t_neg).unwrap();
        assert_eq!(r.terminations, r_neg.promotions);
        assert_eq!(r.promotions, r_neg.terminations);
    }
}
