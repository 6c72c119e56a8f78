//! Group games without a strategic master: payoff differentials, the
//! verification-probability bound that forces the unique all-honest
//! equilibrium, its utilities, and the feasibility check for the variant
//! where the master does play.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majority::cheater_count_distribution;
use crate::payoff::{GroupPartition, PayoffParameters, RewardModel, StrategyProfile};
use crate::EQ_TOL;

/// Payoff differentials (cheat minus honest) of one group, split by how the
/// group's choice relates to the majority outcome:
///
/// * `dw_cheat_majority` — the majority cheats regardless of this group;
/// * `dw_pivotal` — this group's choice decides the majority;
/// * `dw_honest_majority` — the majority is honest regardless.
///
/// Under the reward-all and reward-none models the three coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupDifferentials {
    pub group_size: u32,
    pub dw_cheat_majority: f64,
    pub dw_pivotal: f64,
    pub dw_honest_majority: f64,
    /// `dw_cheat_majority >= dw_pivotal >= dw_honest_majority`, the
    /// hypothesis under which no unique equilibrium can mix.
    pub ordered: bool,
}

/// Per-group differentials plus the realized utility differential for a full
/// strategy profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferentialReport {
    pub per_group: Vec<GroupDifferentials>,
    /// Expected gain of switching the group to cheating, holding everyone
    /// else's mixture fixed.
    pub du_per_group: Vec<f64>,
}

/// Differentials of a group of `group_size` workers at verification
/// probability `pv`.
pub fn differentials_0n(
    params: &PayoffParameters,
    model: RewardModel,
    group_size: u32,
    pv: f64,
) -> GroupDifferentials {
    let k = f64::from(group_size);
    let p = params;
    let (dw_c, dw_x, dw_h) = match model {
        RewardModel::Rm => (
            -pv * k * (p.wpc + 2.0 * p.wba) + k * p.wba + p.wct,
            -pv * k * (p.wpc + p.wba) + p.wct,
            -pv * k * p.wpc - k * p.wba + p.wct,
        ),
        RewardModel::Ra | RewardModel::Rnone => {
            let d = -pv * k * (p.wpc + p.wba) + p.wct;
            (d, d, d)
        }
    };
    GroupDifferentials {
        group_size,
        dw_cheat_majority: dw_c,
        dw_pivotal: dw_x,
        dw_honest_majority: dw_h,
        ordered: dw_c + EQ_TOL >= dw_x && dw_x + EQ_TOL >= dw_h,
    }
}

/// Expected gain for group `i` of switching to cheating, everyone else
/// keeping their mixture: the differentials weighted by the probability that
/// the rest of the workers leave the majority cheating, pivotal, or honest.
pub fn utility_differential_0n(
    params: &PayoffParameters,
    model: RewardModel,
    partition: &GroupPartition,
    pc_per_group: &[f64],
    pv: f64,
    group: usize,
) -> Result<f64> {
    let sizes = partition.sizes();
    if pc_per_group.len() != sizes.len() {
        return Err(Error::MismatchedLengths(format!(
            "{} groups but {} probabilities",
            sizes.len(),
            pc_per_group.len()
        )));
    }
    if group >= sizes.len() {
        return Err(Error::InvalidPartition(format!(
            "group index {group} out of range for {} groups",
            sizes.len()
        )));
    }
    let n = partition.total_workers();
    let own = sizes[group];

    let other_sizes: Vec<u32> = sizes
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != group)
        .map(|(_, &s)| s)
        .collect();
    let other_pcs: Vec<f64> = pc_per_group
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != group)
        .map(|(_, &p)| p)
        .collect();

    let dist = cheater_count_distribution(&other_sizes, &other_pcs);
    // With c cheating workers among the other n - own, the cheating side wins
    // regardless of this group iff c > n/2, and loses regardless iff
    // c < n/2 - own; n odd keeps both thresholds non-integral.
    let half = n as f64 / 2.0;
    let mut mass_cheat = 0.0;
    let mut mass_honest = 0.0;
    let mut mass_pivotal = 0.0;
    for (c, &mass) in dist.iter().enumerate() {
        let c = c as f64;
        if c > half {
            mass_cheat += mass;
        } else if c < half - f64::from(own) {
            mass_honest += mass;
        } else {
            mass_pivotal += mass;
        }
    }

    let d = differentials_0n(params, model, own, pv);
    Ok(d.dw_cheat_majority * mass_cheat
        + d.dw_pivotal * mass_pivotal
        + d.dw_honest_majority * mass_honest)
}

/// Differentials and utility differentials for every group of a profile.
pub fn differential_report(
    params: &PayoffParameters,
    model: RewardModel,
    partition: &GroupPartition,
    profile: &StrategyProfile,
) -> Result<DifferentialReport> {
    let per_group: Vec<GroupDifferentials> = partition
        .sizes()
        .iter()
        .map(|&s| differentials_0n(params, model, s, profile.pv))
        .collect();
    let mut du = Vec::with_capacity(partition.len());
    for i in 0..partition.len() {
        du.push(utility_differential_0n(
            params,
            model,
            partition,
            &profile.pc_per_group,
            profile.pv,
            i,
        )?);
    }
    Ok(DifferentialReport {
        per_group,
        du_per_group: du,
    })
}

/// Verification-probability bound that forces honesty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvBound {
    /// Strict lower bound on `pv`; honesty is the unique equilibrium for any
    /// `pv` strictly above it.
    pub bound: f64,
    /// False when the bound is >= 1, i.e. no admissible `pv` exists.
    pub feasible: bool,
}

/// Smallest verification probability (exclusive) above which every group
/// strictly prefers honesty. The bound decreases with group size, so the
/// worst case over all partitions with groups of at least `min_group_size`
/// is attained exactly at `min_group_size`.
pub fn min_pv_0n(
    params: &PayoffParameters,
    model: RewardModel,
    min_group_size: u32,
) -> Result<PvBound> {
    if min_group_size == 0 {
        return Err(Error::InvalidPartition(
            "min group size must be >= 1".into(),
        ));
    }
    let k = f64::from(min_group_size);
    let p = params;
    let (num, denom) = match model {
        RewardModel::Rm => (k * p.wba + p.wct, k * (p.wpc + 2.0 * p.wba)),
        RewardModel::Ra | RewardModel::Rnone => (p.wct, k * (p.wpc + p.wba)),
    };
    if denom <= EQ_TOL {
        return Err(Error::DegenerateDenominator(format!(
            "honesty bound denominator for {model} at group size {min_group_size}"
        )));
    }
    let bound = num / denom;
    Ok(PvBound {
        bound,
        feasible: bound < 1.0,
    })
}

/// Utilities at the unique all-honest equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HonestOutcome {
    pub p_wrong: f64,
    pub u_master: f64,
    pub u_worker_per_group: Vec<f64>,
}

/// Evaluates the all-honest outcome, first checking that `pv` clears the
/// honesty bound of the partition's smallest group by at least `margin`.
pub fn analyze_0n(
    params: &PayoffParameters,
    model: RewardModel,
    pv: f64,
    partition: &GroupPartition,
    margin: f64,
) -> Result<HonestOutcome> {
    crate::payoff::check_probability("pv", pv)?;
    let bound = min_pv_0n(params, model, partition.min_group_size())?;
    if pv + EQ_TOL < bound.bound + margin {
        return Err(Error::EquilibriumNotGuaranteed(format!(
            "pv = {pv} does not clear the honesty bound {} by margin {margin}",
            bound.bound
        )));
    }
    let p = params;
    let n = partition.total_workers() as f64;
    let u_master = match model {
        RewardModel::Rm | RewardModel::Ra => p.mbr - pv * p.mcv - n * p.mca,
        RewardModel::Rnone => p.mbr - pv * (p.mcv + n * p.mca),
    };
    let u_worker_per_group = partition
        .sizes()
        .iter()
        .map(|&s| {
            let k = f64::from(s);
            match model {
                RewardModel::Rm | RewardModel::Ra => k * p.wba - p.wct,
                RewardModel::Rnone => pv * k * p.wba - p.wct,
            }
        })
        .collect();
    Ok(HonestOutcome {
        p_wrong: 0.0,
        u_master,
        u_worker_per_group,
    })
}

/// Verdict on whether the game with the master as a strategic player can
/// hold the all-honest equilibrium: the master must be indifferent about
/// verifying, so the relevant costs must vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Feasibility1n {
    Feasible,
    Infeasible { nonzero_costs: Vec<String> },
}

impl Feasibility1n {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible)
    }
}

pub fn feasibility_1n(params: &PayoffParameters, model: RewardModel) -> Feasibility1n {
    let mut nonzero = Vec::new();
    if params.mcv.abs() > EQ_TOL {
        nonzero.push(format!("mcv = {}", params.mcv));
    }
    if matches!(model, RewardModel::Rnone) && params.mca.abs() > EQ_TOL {
        nonzero.push(format!("mca = {}", params.mca));
    }
    if nonzero.is_empty() {
        Feasibility1n::Feasible
    } else {
        Feasibility1n::Infeasible {
            nonzero_costs: nonzero,
        }
    }
}
