//! Scenario-driven mechanism design: given an admissible payoff instance and
//! the single parameter the master may tune, pick the game, reward model,
//! worker count, and verification probability that obtain the correct answer
//! with probability 1 while maximizing the master's expected utility, and
//! emit the worker-facing certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{classify_1v1n, RowKind};
use crate::payoff::{
    validate, GameKind, PayoffParameters, RewardModel, Scenario, ScenarioConstraints,
};
use crate::EQ_TOL;

/// Predicted outcome of a plan at its declared equilibrium. `u_worker` is
/// the utility of a worst-case (smallest, singleton) group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Predicted {
    pub p_wrong: f64,
    pub u_master: f64,
    pub u_worker: f64,
}

/// Parameter values chosen by the designer, keyed by what was tunable.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TunedValues {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wpc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

/// A complete mechanism choice: which game to announce, under which reward
/// model, with how many workers and which verification probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanismPlan {
    pub game: GameKind,
    pub model: RewardModel,
    pub n: u64,
    pub pv: f64,
    pub tuned: TunedValues,
    pub predicted: Predicted,
    pub rationale: String,
}

impl MechanismPlan {
    /// Base parameters with the designer's tuned values applied
    /// (`s` couples the worker reward and the master's acceptance cost).
    pub fn effective_params(&self, base: &PayoffParameters) -> PayoffParameters {
        let mut p = *base;
        if let Some(wpc) = self.tuned.wpc {
            p.wpc = wpc;
        }
        if let Some(s) = self.tuned.s {
            p.wba = s;
            p.mca = s;
        }
        p
    }
}

/// The bundle the master sends along with the task so workers can re-verify
/// the declared unique equilibrium without solving the game themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub game: GameKind,
    pub model: RewardModel,
    pub n: u64,
    pub pv: f64,
    pub params: PayoffParameters,
    /// Cheating probability of every group at the declared equilibrium.
    pub declared_pc: f64,
    pub declared_pv: f64,
}

fn validated(params: &PayoffParameters, constraints: &ScenarioConstraints) -> Result<()> {
    validate(params, constraints).into_result()
}

fn require_coupled_reward(constraints: &ScenarioConstraints) -> Result<f64> {
    constraints.s.ok_or_else(|| {
        Error::Validation("contractor designs need the coupled reward s = wba = mca".into())
    })
}

fn check_pv(pv: f64) -> Result<f64> {
    if pv >= 1.0 {
        return Err(Error::Infeasible(format!(
            "required verification probability {pv} is not below 1"
        )));
    }
    Ok(pv)
}

/// Volunteer-computing design: one worker, no reward unless verified, and an
/// arbitrarily small verification probability. Any positive `pv` already
/// forces honesty because the task costs the worker nothing, so the master's
/// utility approaches its acceptance benefit as the margin shrinks.
pub fn design_seti(
    params: &PayoffParameters,
    constraints: &ScenarioConstraints,
) -> Result<MechanismPlan> {
    if constraints.scenario != Scenario::Seti {
        return Err(Error::Validation("scenario must be seti".into()));
    }
    validated(params, constraints)?;
    let eps = constraints.margin;
    let pv = check_pv(eps)?;
    Ok(MechanismPlan {
        game: GameKind::G0n,
        model: RewardModel::Rnone,
        n: 1,
        pv,
        tuned: TunedValues {
            n: Some(1),
            ..Default::default()
        },
        predicted: Predicted {
            p_wrong: 0.0,
            u_master: params.mbr - pv * (params.mcv + params.mca),
            u_worker: pv * params.wba,
        },
        rationale: "seti: single worker, reward only when verified, minimal verification".into(),
    })
}

/// Reward-none contractor plan at `pv = margin + wct/s`; the participation
/// constraint, not the equilibrium bound, is binding here.
fn contractor_rnone_plan(
    params: &PayoffParameters,
    s: f64,
    n: u64,
    eps: f64,
    tuned: TunedValues,
    rationale: &str,
) -> Result<MechanismPlan> {
    let pv = check_pv(eps + params.wct / s)?;
    Ok(MechanismPlan {
        game: GameKind::G0n,
        model: RewardModel::Rnone,
        n,
        pv,
        tuned,
        predicted: Predicted {
            p_wrong: 0.0,
            u_master: params.mbr - pv * (params.mcv + n as f64 * s),
            u_worker: pv * s - params.wct,
        },
        rationale: rationale.into(),
    })
}

/// Reward-all contractor plan at `pv = margin + wct/(s + wpc)`.
fn contractor_ra_plan(
    params: &PayoffParameters,
    s: f64,
    wpc: f64,
    n: u64,
    eps: f64,
    tuned: TunedValues,
    rationale: &str,
) -> Result<MechanismPlan> {
    let pv = check_pv(eps + params.wct / (s + wpc))?;
    Ok(MechanismPlan {
        game: GameKind::G0n,
        model: RewardModel::Ra,
        n,
        pv,
        tuned,
        predicted: Predicted {
            p_wrong: 0.0,
            u_master: params.mbr - pv * params.mcv - n as f64 * s,
            u_worker: s - params.wct,
        },
        rationale: rationale.into(),
    })
}

/// Contractor design when the master chooses the number of workers: one
/// worker suffices, and the reward model follows the cost comparison at
/// `n = 1`. Between the two single-worker plans, reward-none wins exactly
/// when `mcv < s(s/wct - 1)(s/wpc + 1)`.
pub fn design_contractor_tunable_n(
    params: &PayoffParameters,
    constraints: &ScenarioConstraints,
) -> Result<MechanismPlan> {
    if constraints.scenario != Scenario::Contractor {
        return Err(Error::Validation("scenario must be contractor".into()));
    }
    validated(params, constraints)?;
    let s = require_coupled_reward(constraints)?;
    let eps = constraints.margin;
    let threshold = s * (s / params.wct - 1.0) * (s / params.wpc + 1.0);
    let tuned = TunedValues {
        n: Some(1),
        ..Default::default()
    };
    if params.mcv < threshold {
        contractor_rnone_plan(
            params,
            s,
            1,
            eps,
            tuned,
            "contractor, tunable n: single worker, reward only when verified",
        )
    } else {
        contractor_ra_plan(
            params,
            s,
            params.wpc,
            1,
            eps,
            tuned,
            "contractor, tunable n: single worker, reward even when unverified",
        )
    }
}

/// Contractor design when the master chooses the cheater punishment, `n`
/// fixed. When verification is cheap relative to `n s (s/wct - 1)` the
/// punishment is irrelevant: reward-none at `pv = margin + wct/s`. Otherwise
/// reward-all, with the punishment set low enough to keep
/// `mcv < n s (s/wct - 1)(s/wpc + 1)`.
pub fn design_contractor_tunable_wpc(
    params: &PayoffParameters,
    constraints: &ScenarioConstraints,
    n: u64,
) -> Result<MechanismPlan> {
    if constraints.scenario != Scenario::Contractor {
        return Err(Error::Validation("scenario must be contractor".into()));
    }
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::EvenWorkerCount(n));
    }
    validated(params, constraints)?;
    let s = require_coupled_reward(constraints)?;
    let eps = constraints.margin;
    let pivot = n as f64 * s * (s / params.wct - 1.0);

    if params.mcv < pivot {
        return contractor_rnone_plan(
            params,
            s,
            n,
            eps,
            TunedValues::default(),
            "contractor, tunable wpc: reward only when verified; punishment untouched",
        );
    }

    // Keep mcv < pivot * (s/wpc + 1): any punishment below s*pivot/(mcv -
    // pivot) works, with no finite ceiling at equality.
    let wpc_new = if params.mcv <= pivot + EQ_TOL {
        params.wpc
    } else {
        let sup = s * pivot / (params.mcv - pivot);
        if sup <= 0.0 {
            return Err(Error::Infeasible(
                "no positive punishment satisfies the reward-all branch inequality".into(),
            ));
        }
        0.5 * sup
    };
    debug_assert!(params.mcv < pivot * (s / wpc_new + 1.0) + EQ_TOL);
    contractor_ra_plan(
        params,
        s,
        wpc_new,
        n,
        eps,
        TunedValues {
            wpc: Some(wpc_new),
            ..Default::default()
        },
        "contractor, tunable wpc: reward even when unverified; punishment tuned",
    )
}

/// Utility peak of the reward-all plan over the admissible coupled reward,
/// used as the comparison point when tuning the reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardAllPeak {
    /// Maximizing reward `sqrt(mcv*wct/n) - wpc` (may fall outside the
    /// admissible interval, in which case `interior` is false).
    pub s_max: f64,
    /// Master utility at the peak, ignoring the vanishing margin terms.
    pub u_master: f64,
    pub interior: bool,
}

/// Outcome of the tunable-reward design: the chosen plan, the reward-all
/// comparison peak it was weighed against, and, when the
/// large-verification-cost regime admits it, the redundant majority-reward
/// alternative that trades a nonzero wrong-acceptance probability for
/// utility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunableSOutcome {
    pub chosen: MechanismPlan,
    pub reward_all_peak: RewardAllPeak,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<MechanismPlan>,
}

/// Contractor design when the master chooses the coupled reward
/// `s = wba = mca`, `n` fixed.
///
/// The default plan rewards only on verification with `s` set just above
/// `wct * mcv / (2 sqrt(n mcv wct) - n(wpc + wct))`, clipped into
/// `(wct, mbr)`, and `pv = margin + wct/s`. When `mpw >= 2 mcv` and the
/// interval `[wct, 2 sqrt(mcv wct / n) - (mbr + mpw)/(2n) - wpc]` is
/// non-degenerate, the redundant `(1:1^n, reward-majority)` plan is also
/// evaluated; a caller-supplied ceiling on the wrong-acceptance probability
/// decides whether it may be chosen (the default ceiling 0 never unlocks
/// it, since its mixed equilibrium accepts wrong answers with positive
/// probability).
pub fn design_contractor_tunable_s(
    params: &PayoffParameters,
    constraints: &ScenarioConstraints,
    n: u64,
    pwrong_ceiling: f64,
) -> Result<TunableSOutcome> {
    if constraints.scenario != Scenario::Contractor {
        return Err(Error::Validation("scenario must be contractor".into()));
    }
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::EvenWorkerCount(n));
    }
    // The coupled reward is being chosen here, so validate without it.
    let base_constraints = ScenarioConstraints {
        s: None,
        ..constraints.clone()
    };
    validated(params, &base_constraints)?;
    let eps = constraints.margin;
    let nf = n as f64;

    let denom = 2.0 * (nf * params.mcv * params.wct).sqrt() - nf * (params.wpc + params.wct);
    if denom <= EQ_TOL {
        return Err(Error::Infeasible(format!(
            "reward bound denominator 2*sqrt(n*mcv*wct) - n*(wpc+wct) = {denom} is not positive"
        )));
    }
    let s_floor = (params.wct * params.mcv / denom).max(params.wct);
    let s = (s_floor + eps).min(params.mbr - eps);
    if s <= s_floor || s <= params.wct {
        return Err(Error::Infeasible(format!(
            "no admissible reward: need s in ({s_floor}, {}) after margin",
            params.mbr
        )));
    }
    let tuned_params = PayoffParameters {
        wba: s,
        mca: s,
        ..*params
    };
    let chosen_default = contractor_rnone_plan(
        &tuned_params,
        s,
        n,
        eps,
        TunedValues {
            s: Some(s),
            ..Default::default()
        },
        "contractor, tunable s: reward only when verified, reward set just above the bound",
    )?;

    let s_max = (params.mcv * params.wct / nf).sqrt() - params.wpc;
    let reward_all_peak = RewardAllPeak {
        s_max,
        u_master: params.mbr - 2.0 * (nf * params.mcv * params.wct).sqrt() + nf * params.wpc,
        interior: s_max > params.wct && s_max < params.mbr,
    };
    let alternative = redundant_majority_alternative(params, n, eps);

    let chosen = match &alternative {
        Some(alt)
            if pwrong_ceiling > 0.0
                && alt.predicted.p_wrong <= pwrong_ceiling
                && alt.predicted.u_master > chosen_default.predicted.u_master =>
        {
            alt.clone()
        }
        _ => chosen_default,
    };
    Ok(TunableSOutcome {
        chosen,
        reward_all_peak,
        alternative,
    })
}

/// The large-verification-cost alternative: run the n-fold one-to-one game
/// under the majority-reward model at its fully mixed equilibrium, with the
/// coupled reward placed at the bottom of the admissible interval.
///
/// Note the interval cannot open up while the punishment hypothesis holds:
/// with `mpw >= 2 mcv` its upper end stays below `wct` by at least
/// `mbr/(2n) + wpc`, so on admissible instances this returns `None` and the
/// selection above always keeps the verification-reward plan.
fn redundant_majority_alternative(
    params: &PayoffParameters,
    n: u64,
    eps: f64,
) -> Option<MechanismPlan> {
    if params.mpw < 2.0 * params.mcv {
        return None;
    }
    let nf = n as f64;
    let s_hi = 2.0 * (params.mcv * params.wct / nf).sqrt()
        - (params.mbr + params.mpw) / (2.0 * nf)
        - params.wpc;
    if s_hi <= params.wct {
        return None;
    }
    let s_alt = (params.wct + eps).min(s_hi);
    let tuned = PayoffParameters {
        wba: s_alt,
        mca: s_alt,
        ..*params
    };
    let rows = classify_1v1n(&tuned, RewardModel::Rm, n);
    let row = rows.into_iter().find(|r| r.kind == RowKind::FullyMixed)?;
    Some(MechanismPlan {
        game: GameKind::G1v1n,
        model: RewardModel::Rm,
        n,
        pv: row.pv.eval_point(),
        tuned: TunedValues {
            s: Some(s_alt),
            ..Default::default()
        },
        predicted: Predicted {
            p_wrong: row.p_wrong,
            u_master: row.u_master,
            u_worker: row.u_worker,
        },
        rationale:
            "contractor, tunable s: redundant majority-reward alternative (wrong answers possible)"
                .into(),
    })
}

/// Builds the certificate for a plan. The declared strategy is all-honest
/// for the group games and the fully mixed point for the n-fold one-to-one
/// game.
pub fn emit_certificate(plan: &MechanismPlan, base_params: &PayoffParameters) -> Certificate {
    let params = plan.effective_params(base_params);
    let declared_pc = match plan.game {
        GameKind::G0n | GameKind::G1n => 0.0,
        GameKind::G1v1 | GameKind::G1v1n => match plan.model {
            RewardModel::Rm | RewardModel::Ra => params.mcv / (params.mca + params.mpw),
            RewardModel::Rnone => (params.mcv + params.mca) / (params.mca + params.mpw),
        },
    };
    Certificate {
        game: plan.game,
        model: plan.model,
        n: plan.n,
        pv: plan.pv,
        params,
        declared_pc,
        declared_pv: plan.pv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::analyze_0n;
    use crate::payoff::{GroupPartition, Tunable};

    fn seti_instance() -> (PayoffParameters, ScenarioConstraints) {
        (
            PayoffParameters {
                wpc: 1.0,
                wct: 0.0,
                wba: 1.0,
                mpw: 3.0,
                mca: 1.0,
                mcv: 1.0,
                mbr: 5.0,
            },
            ScenarioConstraints::seti(0.01).unwrap(),
        )
    }

    fn contractor_instance(mcv: f64) -> (PayoffParameters, ScenarioConstraints) {
        (
            PayoffParameters {
                wpc: 2.0,
                wct: 1.0,
                wba: 2.0,
                mpw: 2.0 * mcv + 1.0,
                mca: 2.0,
                mcv,
                mbr: 20.0,
            },
            ScenarioConstraints::contractor(Tunable::N, Some(2.0), 1e-3).unwrap(),
        )
    }

    #[test]
    fn seti_plan_frozen_values() {
        let (p, c) = seti_instance();
        let plan = design_seti(&p, &c).unwrap();
        assert_eq!(plan.game, GameKind::G0n);
        assert_eq!(plan.model, RewardModel::Rnone);
        assert_eq!(plan.n, 1);
        assert_eq!(plan.pv, 0.01);
        assert_eq!(plan.predicted.p_wrong, 0.0);
        assert!((plan.predicted.u_master - 4.98).abs() < 1e-12);
        assert!((plan.predicted.u_worker - 0.01).abs() < 1e-12);
    }

    #[test]
    fn seti_utility_approaches_acceptance_benefit() {
        let (p, _) = seti_instance();
        let c = ScenarioConstraints::seti(1e-9).unwrap();
        let plan = design_seti(&p, &c).unwrap();
        assert!((plan.predicted.u_master - p.mbr).abs() < 1e-7);
        assert_ne!(plan.game, GameKind::G1n);
    }

    #[test]
    fn seti_rejects_contractor_instance() {
        let (p, _) = contractor_instance(1.0);
        let c = ScenarioConstraints::seti(0.01).unwrap();
        assert!(design_seti(&p, &c).is_err());
    }

    #[test]
    fn tunable_n_branches_on_verification_cost() {
        // Threshold s(s/wct - 1)(s/wpc + 1) = 2 * 1 * 2 = 4.
        let (p, c) = contractor_instance(5.0);
        let plan = design_contractor_tunable_n(&p, &c).unwrap();
        assert_eq!(plan.model, RewardModel::Ra);
        assert_eq!(plan.n, 1);
        assert!((plan.pv - (1e-3 + 0.25)).abs() < 1e-12);
        assert_eq!(plan.predicted.p_wrong, 0.0);

        let (p, c) = contractor_instance(3.0);
        let plan = design_contractor_tunable_n(&p, &c).unwrap();
        assert_eq!(plan.model, RewardModel::Rnone);
        assert!((plan.pv - (1e-3 + 0.5)).abs() < 1e-12);
        assert_eq!(plan.predicted.p_wrong, 0.0);
    }

    #[test]
    fn tunable_wpc_branches() {
        // n*s*(s/wct - 1) = 6 > 5 at n = 3: punishment irrelevant.
        let (p, c) = contractor_instance(5.0);
        let plan = design_contractor_tunable_wpc(&p, &c, 3).unwrap();
        assert_eq!(plan.model, RewardModel::Rnone);
        assert!((plan.pv - (1e-3 + 0.5)).abs() < 1e-12);
        assert!(plan.tuned.wpc.is_none());

        // n = 1: pivot 2 < 5, so reward-all with a tuned punishment keeping
        // 2 * (2/wpc + 1) > 5, i.e. wpc < 4/3.
        let plan = design_contractor_tunable_wpc(&p, &c, 1).unwrap();
        assert_eq!(plan.model, RewardModel::Ra);
        let wpc = plan.tuned.wpc.unwrap();
        assert!(wpc > 0.0);
        assert!(5.0 < 2.0 * (2.0 / wpc + 1.0));
        assert!((plan.pv - (1e-3 + 1.0 / (2.0 + wpc))).abs() < 1e-12);
        assert_eq!(plan.predicted.p_wrong, 0.0);
    }

    #[test]
    fn tunable_s_frozen_example() {
        // n=1, mcv=4, wct=1, wpc=0.5: denominator 2*2 - 1.5 = 2.5, bound 1.6.
        let p = PayoffParameters {
            wpc: 0.5,
            wct: 1.0,
            wba: 0.0,
            mpw: 9.0,
            mca: 0.0,
            mcv: 4.0,
            mbr: 20.0,
        };
        let c = ScenarioConstraints::contractor(Tunable::S, None, 1e-3).unwrap();
        let out = design_contractor_tunable_s(&p, &c, 1, 0.0).unwrap();
        let plan = &out.chosen;
        assert_eq!(plan.model, RewardModel::Rnone);
        let s = plan.tuned.s.unwrap();
        assert!((s - (1.6 + 1e-3)).abs() < 1e-12);
        assert!((plan.pv - (1e-3 + 1.0 / s)).abs() < 1e-12);
        // Ceiling 0 never picks the redundant alternative.
        assert_eq!(plan.game, GameKind::G0n);
        // Reward-all comparison peak: sqrt(mcv*wct/n) - wpc = 1.5, with
        // utility mbr - 2*sqrt(n*mcv*wct) + n*wpc = 20 - 4 + 0.5.
        assert!((out.reward_all_peak.s_max - 1.5).abs() < 1e-12);
        assert!((out.reward_all_peak.u_master - 16.5).abs() < 1e-12);
        assert!(out.reward_all_peak.interior);
        // The verification-reward plan must beat the reward-all peak at the
        // chosen s (margin terms aside), which is what the bound encodes.
        assert!(plan.predicted.u_master > out.reward_all_peak.u_master - 10.0 * 1e-3);
    }

    #[test]
    fn tunable_s_infeasible_denominator() {
        let p = PayoffParameters {
            wpc: 50.0,
            wct: 1.0,
            wba: 0.0,
            mpw: 9.0,
            mca: 0.0,
            mcv: 4.0,
            mbr: 20.0,
        };
        let c = ScenarioConstraints::contractor(Tunable::S, None, 1e-3).unwrap();
        assert!(matches!(
            design_contractor_tunable_s(&p, &c, 1, 0.0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn tunable_s_redundant_interval_is_empty_on_admissible_instances() {
        // The upper end of the redundant-plan interval sits at
        // 2*sqrt(mcv*wct/n) - (mbr+mpw)/(2n) - wpc; with mpw >= 2*mcv its
        // distance to wct is at most -(sqrt(mcv/n)-sqrt(wct))^2 - mbr/(2n)
        // - wpc < 0, so no admissible instance unlocks the alternative and
        // the wrong-acceptance ceiling never changes the choice.
        let c = ScenarioConstraints::contractor(Tunable::S, None, 1e-3).unwrap();
        let mut lcg = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            lcg = lcg
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (lcg >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut designed = 0;
        for _ in 0..500 {
            let mcv = 0.1 + 60.0 * next();
            let p = PayoffParameters {
                wpc: 5.0 * next(),
                wct: 0.1 + 10.0 * next(),
                wba: 0.0,
                mpw: 2.0 * mcv * (1.0 + next()),
                mca: 0.0,
                mcv,
                mbr: 1.0 + 100.0 * next(),
            };
            for n in [1, 3, 9] {
                for ceiling in [0.0, 1.0] {
                    match design_contractor_tunable_s(&p, &c, n, ceiling) {
                        Ok(out) => {
                            designed += 1;
                            assert!(out.alternative.is_none(), "{p:?} n={n}");
                            assert_eq!(out.chosen.game, GameKind::G0n);
                            assert_eq!(out.chosen.model, RewardModel::Rnone);
                        }
                        Err(Error::Infeasible(_)) => {}
                        Err(e) => panic!("unexpected error {e}"),
                    }
                }
            }
        }
        assert!(designed > 100);
    }

    #[test]
    fn plans_self_consistent_with_group_analysis() {
        let (p, c) = contractor_instance(3.0);
        let plan = design_contractor_tunable_n(&p, &c).unwrap();
        let eff = plan.effective_params(&p);
        let partition = GroupPartition::singletons(plan.n).unwrap();
        let out = analyze_0n(&eff, plan.model, plan.pv, &partition, 0.0).unwrap();
        assert!((out.u_master - plan.predicted.u_master).abs() < 1e-9);
        assert!((out.u_worker_per_group[0] - plan.predicted.u_worker).abs() < 1e-9);
        assert_eq!(out.p_wrong, plan.predicted.p_wrong);
    }

    #[test]
    fn contractor_plans_keep_worker_participation() {
        for mcv in [0.5, 3.0, 5.0, 9.0] {
            let (p, c) = contractor_instance(mcv);
            let plan = design_contractor_tunable_n(&p, &c).unwrap();
            assert!(plan.predicted.u_worker > 0.0, "mcv={mcv}");
            for n in [1, 3, 5] {
                let plan = design_contractor_tunable_wpc(&p, &c, n).unwrap();
                assert!(plan.predicted.u_worker > 0.0, "mcv={mcv} n={n}");
            }
        }
    }

    #[test]
    fn certificate_roundtrips_through_json() {
        let (p, c) = seti_instance();
        let plan = design_seti(&p, &c).unwrap();
        let cert = emit_certificate(&plan, &p);
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(cert, back);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        assert_eq!(cert.declared_pc, 0.0);
    }

    #[test]
    fn crossover_switches_at_threshold() {
        // Sweep mcv across the tunable-n threshold 4; the chosen branch must
        // dominate the other up to the margin-driven slack.
        let eps = 1e-3;
        let mut prev_model = None;
        let mut switches = 0;
        for i in 0..=200 {
            let mcv = 2.0 + 4.0 * i as f64 / 200.0;
            let (p, c) = contractor_instance(mcv);
            let plan = design_contractor_tunable_n(&p, &c).unwrap();
            let s = 2.0;
            let u_rnone = p.mbr - (eps + p.wct / s) * (mcv + s);
            let u_ra = p.mbr - (eps + p.wct / (s + p.wpc)) * mcv - s;
            let (chosen, other) = match plan.model {
                RewardModel::Rnone => (u_rnone, u_ra),
                RewardModel::Ra => (u_ra, u_rnone),
                RewardModel::Rm => unreachable!(),
            };
            assert!((plan.predicted.u_master - chosen).abs() < 1e-9);
            assert!(chosen >= other - eps * (mcv + s) - 1e-9, "mcv={mcv}");
            if let Some(prev) = prev_model {
                if prev != plan.model {
                    switches += 1;
                    assert!((mcv - 4.0).abs() <= 4.0 / 200.0 + 1e-12, "switch at {mcv}");
                }
            }
            prev_model = Some(plan.model);
        }
        assert_eq!(switches, 1);
    }
}
