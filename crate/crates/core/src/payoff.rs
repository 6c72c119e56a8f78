//! Shared domain types: payoff parameters, reward models, game variants,
//! colluding-group partitions, strategy profiles, and scenario validation.
//!
//! Every quantity is expressed in one abstract utility unit. All types are
//! immutable values and safe to share across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::EQ_TOL;

/// The seven non-negative payoff constants of the game.
///
/// * `wpc` — worker's punishment for being caught cheating
/// * `wct` — group's cost for computing the task (charged once per group)
/// * `wba` — worker's benefit from the master's acceptance
/// * `mpw` — master's punishment for accepting a wrong answer
/// * `mca` — master's cost for accepting (rewarding) one worker's answer
/// * `mcv` — master's cost for verifying the answers
/// * `mbr` — master's benefit from accepting the right answer
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffParameters {
    pub wpc: f64,
    pub wct: f64,
    pub wba: f64,
    pub mpw: f64,
    pub mca: f64,
    pub mcv: f64,
    pub mbr: f64,
}

impl PayoffParameters {
    /// Checks the basic type invariants: all seven values finite and >= 0.
    pub fn check(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite, got {v}")));
            }
            if v < 0.0 {
                return Err(Error::Validation(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> [(&'static str, f64); 7] {
        [
            ("wpc", self.wpc),
            ("wct", self.wct),
            ("wba", self.wba),
            ("mpw", self.mpw),
            ("mca", self.mca),
            ("mcv", self.mcv),
            ("mbr", self.mbr),
        ]
    }
}

/// How the master rewards workers when it does not verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardModel {
    /// Reward the majority only.
    Rm,
    /// Reward all workers regardless of the returned value.
    Ra,
    /// Reward no one.
    Rnone,
}

impl RewardModel {
    pub const ALL: [Self; 3] = [Self::Rm, Self::Ra, Self::Rnone];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Rm => "rm",
            Self::Ra => "ra",
            Self::Rnone => "rnone",
        }
    }

    /// Who gets rewarded when the master accepts without verifying. In the
    /// one-to-one games every worker is the majority of its own instance, so
    /// the majority rule degenerates to rewarding everyone.
    pub fn unverified_reward(&self, game: GameKind) -> UnverifiedReward {
        match self {
            Self::Ra => UnverifiedReward::All,
            Self::Rnone => UnverifiedReward::None,
            Self::Rm => match game {
                GameKind::G1v1 | GameKind::G1v1n => UnverifiedReward::All,
                GameKind::G0n | GameKind::G1n => UnverifiedReward::MajoritySide,
            },
        }
    }
}

/// Reward semantics of an unverified acceptance, see
/// [`RewardModel::unverified_reward`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnverifiedReward {
    All,
    MajoritySide,
    None,
}

impl std::fmt::Display for RewardModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four game variants the master can force.
///
/// * `G1v1` — one master against one worker;
/// * `G1v1n` — `n` independent instances of the one-to-one game, one per
///   (singleton) worker, with a single verification decision;
/// * `G0n` — the `n` workers play among themselves; the verification
///   probability is a fixed protocol parameter, not a strategic choice;
/// * `G1n` — as `G0n` but the master participates as a player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameKind {
    #[serde(rename = "1v1")]
    G1v1,
    #[serde(rename = "1v1n")]
    G1v1n,
    #[serde(rename = "0n")]
    G0n,
    #[serde(rename = "1n")]
    G1n,
}

impl GameKind {
    pub const ALL: [Self; 4] = [Self::G1v1, Self::G1v1n, Self::G0n, Self::G1n];

    /// Whether the verification probability is pinned down by equilibrium
    /// conditions (the master plays, directly or once per instance) rather
    /// than being a freely committed protocol parameter. Only the game
    /// without the master leaves it free.
    pub fn master_in_game(&self) -> bool {
        !matches!(self, Self::G0n)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::G1v1 => "1v1",
            Self::G1v1n => "1v1n",
            Self::G0n => "0n",
            Self::G1n => "1n",
        }
    }
}

impl std::fmt::Display for GameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The collusion structure: a partition of the `n` workers into non-empty
/// groups. Workers in a group act homogeneously (one coin per group) and a
/// honest group pays the task cost `wct` once.
///
/// `n` must be odd so majority voting over a binary answer space cannot tie.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GroupPartition {
    sizes: Vec<u32>,
}

impl GroupPartition {
    pub fn new(sizes: Vec<u32>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidPartition("no groups".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidPartition("group sizes must be >= 1".into()));
        }
        let n: u64 = sizes.iter().map(|&s| u64::from(s)).sum();
        if n.is_multiple_of(2) {
            return Err(Error::InvalidPartition(format!(
                "total worker count must be odd, got {n}"
            )));
        }
        Ok(Self { sizes })
    }

    /// `n` singleton groups.
    pub fn singletons(n: u64) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::EvenWorkerCount(n));
        }
        Self::new(vec![1; n as usize])
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    /// Number of groups.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Total worker count `n`.
    pub fn total_workers(&self) -> u64 {
        self.sizes.iter().map(|&s| u64::from(s)).sum()
    }

    pub fn min_group_size(&self) -> u32 {
        *self.sizes.iter().min().expect("partition is non-empty")
    }
}

impl TryFrom<Vec<u32>> for GroupPartition {
    type Error = Error;

    fn try_from(sizes: Vec<u32>) -> Result<Self> {
        Self::new(sizes)
    }
}

impl From<GroupPartition> for Vec<u32> {
    fn from(p: GroupPartition) -> Self {
        p.sizes
    }
}

/// A mixed-strategy profile: one cheating probability per group plus the
/// master's verification probability. Complements are implied, never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub pc_per_group: Vec<f64>,
    pub pv: f64,
}

impl StrategyProfile {
    pub fn new(pc_per_group: Vec<f64>, pv: f64) -> Result<Self> {
        for &p in &pc_per_group {
            check_probability("pc", p)?;
        }
        check_probability("pv", pv)?;
        Ok(Self { pc_per_group, pv })
    }

    /// All groups use the same cheating probability.
    pub fn uniform(groups: usize, pc: f64, pv: f64) -> Result<Self> {
        Self::new(vec![pc; groups], pv)
    }
}

pub(crate) fn check_probability(what: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidProbability { what, value });
    }
    Ok(())
}

/// The two application scenarios the mechanism designers cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Volunteer computing: the task costs workers nothing (`wct = 0`) and
    /// they are paid in recognition (`wba > 0`).
    Seti,
    /// Paid computing: a coupled reward `s = wba = mca`, a real task cost
    /// (`wct > 0`), and a worker-participation requirement (`U_W > 0`).
    Contractor,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Seti => "seti",
            Self::Contractor => "contractor",
        }
    }
}

/// Which single parameter the master may tune in the contractor scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tunable {
    None,
    N,
    Wpc,
    S,
}

/// Scenario-level constraints attached to a payoff instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConstraints {
    pub scenario: Scenario,
    pub tunable: Tunable,
    /// Coupled reward `S = wba = mca` (contractor scenario only).
    pub s: Option<f64>,
    /// Additive margin applied to strict probability bounds.
    pub margin: f64,
}

impl ScenarioConstraints {
    pub fn new(scenario: Scenario, tunable: Tunable, s: Option<f64>, margin: f64) -> Result<Self> {
        if !margin.is_finite() || margin <= 0.0 {
            return Err(Error::Validation(format!(
                "margin must be finite and > 0, got {margin}"
            )));
        }
        Ok(Self {
            scenario,
            tunable,
            s,
            margin,
        })
    }

    pub fn seti(margin: f64) -> Result<Self> {
        Self::new(Scenario::Seti, Tunable::None, None, margin)
    }

    pub fn contractor(tunable: Tunable, s: Option<f64>, margin: f64) -> Result<Self> {
        Self::new(Scenario::Contractor, tunable, s, margin)
    }
}

/// Outcome of [`validate`]: the list of violated constraints, empty iff the
/// instance is admissible for the scenario.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation(self.violations.join("; ")))
        }
    }
}

/// Checks a payoff instance against its scenario's stated constraints.
///
/// Deterministic and total over finite inputs: violations are reported, not
/// raised. Degenerate denominators of the closed-form equilibria
/// (`wba + wpc = 0`, `mca + mpw = 0`) are rejected here for both scenarios.
pub fn validate(params: &PayoffParameters, constraints: &ScenarioConstraints) -> ValidationReport {
    let mut v = Vec::new();
    for (name, value) in params.fields() {
        if !value.is_finite() {
            v.push(format!("{name} must be finite"));
        } else if value < 0.0 {
            v.push(format!("{name} must be non-negative"));
        }
    }
    if params.wba + params.wpc <= EQ_TOL {
        v.push("WB_A + WP_C must be positive".into());
    }
    if params.mca + params.mpw <= EQ_TOL {
        v.push("MC_A + MP_W must be positive".into());
    }
    if !constraints.margin.is_finite() || constraints.margin <= 0.0 {
        v.push("margin must be > 0".into());
    }

    match constraints.scenario {
        Scenario::Seti => {
            if params.wct.abs() > EQ_TOL {
                v.push("WC_T must be 0".into());
            }
            if params.wba <= 0.0 {
                v.push("WB_A must be positive".into());
            }
            if params.mbr <= params.mca {
                v.push("MB_R > MC_A required".into());
            }
            if params.mcv <= 0.0 {
                v.push("MC_V must be positive".into());
            }
            if params.mpw <= params.mcv {
                v.push("MP_W > MC_V required".into());
            }
        }
        Scenario::Contractor => {
            if params.wct <= 0.0 {
                v.push("WC_T must be positive".into());
            }
            if params.mbr <= params.mca {
                v.push("MB_R > MC_A required".into());
            }
            if params.mcv <= 0.0 {
                v.push("MC_V must be positive".into());
            }
            if params.mpw <= params.mcv {
                v.push("MP_W > MC_V required".into());
            }
            if let Some(s) = constraints.s {
                if (params.wba - s).abs() > EQ_TOL {
                    v.push("WB_A = S required".into());
                }
                if (params.mca - s).abs() > EQ_TOL {
                    v.push("MC_A = S required".into());
                }
                if params.wct >= s {
                    v.push("WC_T < S required".into());
                }
                if s >= params.mbr {
                    v.push("S < MB_R required".into());
                }
            }
        }
    }
    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seti_params() -> PayoffParameters {
        PayoffParameters {
            wpc: 0.0,
            wct: 0.0,
            wba: 1.0,
            mpw: 3.0,
            mca: 1.0,
            mcv: 1.0,
            mbr: 5.0,
        }
    }

    #[test]
    fn seti_instance_valid() {
        let c = ScenarioConstraints::seti(0.01).unwrap();
        assert!(validate(&seti_params(), &c).is_valid());
    }

    #[test]
    fn seti_rejects_task_cost() {
        let c = ScenarioConstraints::seti(0.01).unwrap();
        let mut p = seti_params();
        p.wct = 1.0;
        let report = validate(&p, &c);
        assert!(report
            .violations
            .iter()
            .any(|m| m.contains("WC_T must be 0")));
    }

    #[test]
    fn contractor_rejects_task_cost_above_reward() {
        let c = ScenarioConstraints::contractor(Tunable::N, Some(2.0), 0.01).unwrap();
        let p = PayoffParameters {
            wpc: 2.0,
            wct: 3.0,
            wba: 2.0,
            mpw: 3.0,
            mca: 2.0,
            mcv: 1.0,
            mbr: 5.0,
        };
        let report = validate(&p, &c);
        assert!(report
            .violations
            .iter()
            .any(|m| m.contains("WC_T < S required")));
    }

    #[test]
    fn degenerate_denominators_rejected() {
        let c = ScenarioConstraints::seti(0.01).unwrap();
        let mut p = seti_params();
        p.wba = 0.0;
        p.wpc = 0.0;
        let report = validate(&p, &c);
        assert!(!report.is_valid());
    }

    #[test]
    fn partition_requires_odd_total() {
        assert!(GroupPartition::new(vec![1, 1]).is_err());
        assert!(GroupPartition::new(vec![2, 1]).is_ok());
        assert!(GroupPartition::new(vec![]).is_err());
        assert!(GroupPartition::new(vec![0, 3]).is_err());
    }

    #[test]
    fn profile_rejects_bad_probabilities() {
        assert!(StrategyProfile::new(vec![0.5], 1.5).is_err());
        assert!(StrategyProfile::new(vec![-0.1], 0.5).is_err());
        assert!(StrategyProfile::new(vec![0.0, 1.0], 0.25).is_ok());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = PayoffParameters> {
            // Mix of zeros and positives so every inequality gets exercised
            // from both sides.
            let v = || prop_oneof![Just(0.0), 0.0f64..6.0];
            (v(), v(), v(), v(), v(), v(), v()).prop_map(|(wpc, wct, wba, mpw, mca, mcv, mbr)| {
                PayoffParameters {
                    wpc,
                    wct,
                    wba,
                    mpw,
                    mca,
                    mcv,
                    mbr,
                }
            })
        }

        proptest! {
            #[test]
            fn report_agrees_with_direct_inequalities(p in params(), s in 0.0f64..6.0) {
                let denom_ok = p.wba + p.wpc > EQ_TOL && p.mca + p.mpw > EQ_TOL;

                let seti = ScenarioConstraints::seti(1e-3).unwrap();
                let direct_seti = denom_ok
                    && p.wct.abs() <= EQ_TOL
                    && p.wba > 0.0
                    && p.mbr > p.mca
                    && p.mcv > 0.0
                    && p.mpw > p.mcv;
                prop_assert_eq!(validate(&p, &seti).is_valid(), direct_seti);

                let contractor =
                    ScenarioConstraints::contractor(Tunable::N, Some(s), 1e-3).unwrap();
                let direct_contractor = denom_ok
                    && p.wct > 0.0
                    && p.mbr > p.mca
                    && p.mcv > 0.0
                    && p.mpw > p.mcv
                    && (p.wba - s).abs() <= EQ_TOL
                    && (p.mca - s).abs() <= EQ_TOL
                    && p.wct < s
                    && s < p.mbr;
                prop_assert_eq!(validate(&p, &contractor).is_valid(), direct_contractor);
            }
        }
    }
}
