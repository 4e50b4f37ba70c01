//! Organization assembly: scenario validation, headcount sizing, team
//! partitioning, and the two assignment policies.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SimError};
use crate::ranking;
use crate::talent::{reshape_standard_normal, Talent, TalentShape};

/// How engineers are distributed across teams.
///
/// `Random` shuffles everyone uniformly. `Biased` clusters talent: each team
/// gets a mean drawn from N(0, sigma_team) and members scatter around it with
/// spread sqrt(1 - sigma_team^2), so the pooled talent variance stays 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AssignmentPolicy {
    Random,
    Biased { sigma_team: f64 },
}

impl AssignmentPolicy {
    pub fn name(self) -> &'static str {
        match self {
            AssignmentPolicy::Random => "random",
            AssignmentPolicy::Biased { .. } => "biased",
        }
    }
}

/// Full experiment configuration for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub base_headcount: usize,
    pub team_size: usize,
    pub cutoff: f64,
    pub policy: AssignmentPolicy,
    pub shape: TalentShape,
    pub replications: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            base_headcount: 994,
            team_size: 7,
            cutoff: 0.15,
            policy: AssignmentPolicy::Random,
            shape: TalentShape::Normal,
            replications: 100,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.team_size < 2 {
            return Err(SimError::invalid_scenario(
                "team_size",
                "team_size must be at least 2",
            ));
        }
        if self.base_headcount < self.team_size {
            return Err(SimError::invalid_scenario(
                "base_headcount",
                format!(
                    "base_headcount must be at least team_size ({})",
                    self.team_size
                ),
            ));
        }
        if !(self.cutoff > 0.0 && self.cutoff < 0.5) {
            return Err(SimError::invalid_scenario(
                "cutoff",
                "cutoff must lie in (0, 0.5)",
            ));
        }
        if let AssignmentPolicy::Biased { sigma_team } = self.policy {
            sigma_within(sigma_team)?;
        }
        if self.replications < 1 {
            return Err(SimError::invalid_scenario(
                "replications",
                "replications must be at least 1",
            ));
        }
        // Termination and promotion quotas must fit in one team.
        ranking::labels_per_team(self.team_size, self.cutoff)?;
        Ok(())
    }

    /// Effective headcount: base rounded down to a multiple of team_size.
    pub fn headcount(&self) -> usize {
        effective_headcount(self.base_headcount, self.team_size)
            .expect("scenario validated: team_size >= 2")
    }

    pub fn team_count(&self) -> usize {
        self.headcount() / self.team_size
    }

    pub fn labels_per_team(&self) -> usize {
        ranking::labels_per_team(self.team_size, self.cutoff)
            .expect("scenario validated: label quota fits team")
    }

    pub fn k_true(&self) -> usize {
        ranking::k_true(self.headcount(), self.cutoff).expect("scenario validated: cutoff in range")
    }
}

/// Largest multiple of `team_size` not exceeding `base_headcount`.
pub fn effective_headcount(base_headcount: usize, team_size: usize) -> Result<usize> {
    if team_size < 2 {
        return Err(SimError::invalid_scenario(
            "team_size",
            "team_size must be at least 2",
        ));
    }
    Ok(team_size * (base_headcount / team_size))
}

/// Within-team spread sqrt(1 - sigma_team^2), chosen so the pooled talent
/// variance stays 1 under the biased policy.
pub fn sigma_within(sigma_team: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&sigma_team) {
        return Err(SimError::invalid_scenario(
            "sigma_team",
            "sigma_team must lie in [0, 1]",
        ));
    }
    Ok((1.0 - sigma_team * sigma_team).max(0.0).sqrt())
}

/// One engineer: an id, a latent talent, and a team assignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Engineer {
    pub id: usize,
    pub talent: Talent,
    pub team_id: usize,
}

/// A realized population partitioned into equal-size teams.
///
/// Immutable after construction; `engineers` is indexed by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Organization {
    engineers: Vec<Engineer>,
    team_size: usize,
    team_count: usize,
}

impl Organization {
    /// Builds an organization from explicit talents and team assignments.
    /// Used by small-instance enumeration and tests.
    pub fn from_parts(talents: &[f64], team_of: &[usize], team_size: usize) -> Result<Self> {
        if talents.len() != team_of.len() || talents.is_empty() {
            return Err(SimError::Inconsistency(
                "talents and team assignments must be equal-length and non-empty".into(),
            ));
        }
        if team_size < 2 || !talents.len().is_multiple_of(team_size) {
            return Err(SimError::Inconsistency(format!(
                "headcount {} is not a positive multiple of team_size {team_size}",
                talents.len()
            )));
        }
        let team_count = talents.len() / team_size;
        let mut fill = vec![0usize; team_count];
        for &t in team_of {
            if t >= team_count {
                return Err(SimError::Inconsistency(format!("team id {t} out of range")));
            }
            fill[t] += 1;
        }
        if fill.iter().any(|&c| c != team_size) {
            return Err(SimError::Inconsistency(
                "every team must have exactly team_size members".into(),
            ));
        }
        let engineers = talents
            .iter()
            .zip(team_of)
            .enumerate()
            .map(|(id, (&v, &team_id))| Engineer {
                id,
                talent: Talent::new(v),
                team_id,
            })
            .collect();
        Ok(Organization {
            engineers,
            team_size,
            team_count,
        })
    }

    pub fn engineers(&self) -> &[Engineer] {
        &self.engineers
    }

    pub fn headcount(&self) -> usize {
        self.engineers.len()
    }

    pub fn team_size(&self) -> usize {
        self.team_size
    }

    pub fn team_count(&self) -> usize {
        self.team_count
    }

    pub fn talent_of(&self, id: usize) -> f64 {
        self.engineers[id].talent.value()
    }

    /// Member ids grouped by team, ascending id within each team.
    pub fn team_member_ids(&self) -> Vec<Vec<usize>> {
        let mut teams = vec![Vec::with_capacity(self.team_size); self.team_count];
        for e in &self.engineers {
            teams[e.team_id].push(e.id);
        }
        teams
    }
}

/// Random assignment: draw N talents, then partition ids into consecutive
/// blocks of a uniformly random permutation. Assignment is independent of
/// talent.
pub fn build_random_org<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<Organization> {
    scenario.validate()?;
    let n = scenario.headcount();
    let talents = crate::talent::sample_standardized(scenario.shape, n, rng);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut team_of = vec![0usize; n];
    for (pos, &id) in order.iter().enumerate() {
        team_of[id] = pos / scenario.team_size;
    }

    let engineers = talents
        .into_iter()
        .enumerate()
        .map(|(id, talent)| Engineer {
            id,
            talent,
            team_id: team_of[id],
        })
        .collect();
    Ok(Organization {
        engineers,
        team_size: scenario.team_size,
        team_count: n / scenario.team_size,
    })
}

/// Biased assignment: team means sigma_team * N(0,1), members at
/// mean + sigma_within * N(0,1), so the pooled latent is exactly N(0,1).
/// Non-normal shapes are produced by pushing that latent through the shape's
/// quantile map, which preserves every rank (global and within-team) while
/// giving the pooled talents exactly the standardized target distribution.
/// Teams are the clusters; there is no post-hoc shuffle.
pub fn build_biased_org<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<Organization> {
    scenario.validate()?;
    let sigma_team = match scenario.policy {
        AssignmentPolicy::Biased { sigma_team } => sigma_team,
        AssignmentPolicy::Random => {
            return Err(SimError::invalid_scenario(
                "policy",
                "build_biased_org requires the biased policy",
            ));
        }
    };
    let spread = sigma_within(sigma_team)?;
    let team_count = scenario.team_count();

    let means: Vec<f64> = (0..team_count)
        .map(|_| sigma_team * rng.sample::<f64, _>(StandardNormal))
        .collect();

    let mut engineers = Vec::with_capacity(scenario.headcount());
    for (team_id, &mean) in means.iter().enumerate() {
        for member in 0..scenario.team_size {
            let z: f64 = rng.sample(StandardNormal);
            let latent = mean + spread * z;
            engineers.push(Engineer {
                id: team_id * scenario.team_size + member,
                talent: Talent::new(reshape_standard_normal(scenario.shape, latent)),
                team_id,
            });
        }
    }
    Ok(Organization {
        engineers,
        team_size: scenario.team_size,
        team_count,
    })
}

/// Builds per the scenario's policy.
pub fn build_org<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<Organization> {
    match scenario.policy {
        AssignmentPolicy::Random => build_random_org(scenario, rng),
        AssignmentPolicy::Biased { .. } => build_biased_org(scenario, rng),
    }
}
