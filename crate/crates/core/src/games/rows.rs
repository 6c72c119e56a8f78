//! Equilibrium classification for the repeated one-to-one game with `n`
//! independent (singleton) workers and a single verification decision.
//!
//! Each reward model admits up to eight equilibrium regimes: one fully
//! mixed point, four partially mixed families where one side's probability
//! ranges over an interval, and three pure corners. A parameter instance
//! selects the subset whose side conditions hold; overlapping regimes are
//! all reported and the caller picks.

use serde::{Deserialize, Serialize};

use crate::majority::{cheater_count_distribution, majority_cheat_prob_iid};
use crate::payoff::{PayoffParameters, RewardModel};
use crate::EQ_TOL;

/// A probability that is either pinned to a point or free within an
/// interval the opponent cannot narrow further.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProbValue {
    Point {
        value: f64,
    },
    Range {
        lo: f64,
        hi: f64,
        lo_open: bool,
        hi_open: bool,
    },
}

#[allow(non_snake_case)]
impl ProbValue {
    pub fn point(value: f64) -> Self {
        Self::Point { value }
    }

    /// Interval clipped to `[0,1]`, open exactly where it touches 0 or 1
    /// (the corners are separate equilibrium rows). `None` when empty.
    pub(crate) fn range_open_at_corners(lo: f64, hi: f64) -> Option<Self> {
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        let lo_open = lo <= 0.0;
        let hi_open = hi >= 1.0;
        Self::range(lo, hi, lo_open, hi_open)
    }

    /// Interval clipped to `[0,1]` that keeps its lower endpoint closed even
    /// at 0, open at 1. `None` when empty.
    pub(crate) fn range_closed_lo(lo: f64, hi: f64) -> Option<Self> {
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        let hi_open = hi >= 1.0;
        Self::range(lo, hi, false, hi_open)
    }

    fn range(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Option<Self> {
        if lo > hi || (lo == hi && (lo_open || hi_open)) {
            return None;
        }
        if lo == hi {
            return Some(Self::Point { value: lo });
        }
        Some(Self::Range {
            lo,
            hi,
            lo_open,
            hi_open,
        })
    }

    /// The point itself, or the interval midpoint: the default evaluation
    /// point for quantities that depend on a probability the protocol cannot
    /// pin down.
    pub fn eval_point(&self) -> f64 {
        match *self {
            Self::Point { value } => value,
            Self::Range { lo, hi, .. } => 0.5 * (lo + hi),
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        match *self {
            Self::Point { value } => (p - value).abs() <= EQ_TOL,
            Self::Range {
                lo,
                hi,
                lo_open,
                hi_open,
            } => {
                let above = if lo_open { p > lo } else { p >= lo - EQ_TOL };
                let below = if hi_open { p < hi } else { p <= hi + EQ_TOL };
                above && below
            }
        }
    }

    pub fn is_point(&self, value: f64) -> bool {
        matches!(*self, Self::Point { value: v } if (v - value).abs() <= EQ_TOL)
    }
}

/// Structural tag of an equilibrium regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    /// Both sides mix: the unique interior indifference point.
    FullyMixed,
    /// Workers honest, master free within a verification-probability range.
    HonestPvRange,
    /// Workers cheat, master free within a verification-probability range.
    AllCheatPvRange,
    /// Master never verifies, workers free within a cheating range.
    PcRangeNoVerify,
    /// Master always verifies, workers free within a cheating range.
    PcRangeAlwaysVerify,
    AllCheatAlwaysVerify,
    HonestAlwaysVerify,
    AllCheatNeverVerify,
    /// Honest workers, no verification; only arises for general matrices
    /// with a strictly negative cheating gain.
    HonestNeverVerify,
}

impl RowKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FullyMixed => "fully-mixed",
            Self::HonestPvRange => "pc0-pv-range",
            Self::AllCheatPvRange => "pc1-pv-range",
            Self::PcRangeNoVerify => "pc-range-pv0",
            Self::PcRangeAlwaysVerify => "pc-range-pv1",
            Self::AllCheatAlwaysVerify => "pc1-pv1",
            Self::HonestAlwaysVerify => "pc0-pv1",
            Self::AllCheatNeverVerify => "pc1-pv0",
            Self::HonestNeverVerify => "pc0-pv0",
        }
    }
}

impl std::fmt::Display for RowKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One equilibrium regime of a game instance, with the wrong-acceptance
/// probability and both expected utilities evaluated at the row's point
/// (interval rows evaluate at the midpoint).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRow {
    pub kind: RowKind,
    pub pc: ProbValue,
    pub pv: ProbValue,
    pub conditions: Vec<String>,
    pub p_wrong: f64,
    pub u_master: f64,
    pub u_worker: f64,
    /// Whether the workers' side is pure cheating; such equilibria yield
    /// the correct answer only for binary (negatable) outputs.
    pub all_cheat: bool,
}

impl EquilibriumRow {
    pub fn source(&self) -> &'static str {
        self.kind.as_str()
    }
}

fn approx_zero(v: f64) -> bool {
    v.abs() <= EQ_TOL
}

/// Classifies the equilibria of the `n`-fold one-to-one game for a payoff
/// instance under a reward model. `n = 1` is exactly the single-worker game.
///
/// Returns the rows whose side conditions hold at tolerance [`EQ_TOL`];
/// the fully mixed row only when its closed-form probabilities lie strictly
/// inside `(0,1)`. Contradictory rows are omitted, never errored: an
/// instance selects a subset of an exhaustive case analysis.
pub fn classify_1v1n(params: &PayoffParameters, model: RewardModel, n: u64) -> Vec<EquilibriumRow> {
    assert!(n >= 1 && n % 2 == 1, "worker count must be odd, got {n}");
    let p = params;
    let master_denom = p.mca + p.mpw;
    let worker_denom = p.wba + p.wpc;
    assert!(
        master_denom > EQ_TOL && worker_denom > EQ_TOL,
        "degenerate payoff instance; run validation first"
    );

    let pc_star = match model {
        RewardModel::Rm | RewardModel::Ra => p.mcv / master_denom,
        RewardModel::Rnone => (p.mcv + p.mca) / master_denom,
    };
    let pv_star = p.wct / worker_denom;

    // Master-side equality conditions per model.
    let (master_indiff_at_pc0, master_indiff_at_pc0_desc): (bool, Vec<String>) = match model {
        RewardModel::Rm | RewardModel::Ra => (approx_zero(p.mcv), vec!["mcv = 0".into()]),
        RewardModel::Rnone => (
            approx_zero(p.mcv) && approx_zero(p.mca),
            vec!["mcv = 0".into(), "mca = 0".into()],
        ),
    };
    let (master_indiff_at_pc1, master_indiff_at_pc1_desc): (bool, String) = match model {
        RewardModel::Rm | RewardModel::Ra => (
            approx_zero(p.mcv - (p.mpw + p.mca)),
            "mcv = mpw + mca".into(),
        ),
        RewardModel::Rnone => (approx_zero(p.mcv - p.mpw), "mcv = mpw".into()),
    };
    let (verify_dominated_at_pc1, verify_dominated_desc): (bool, String) = match model {
        RewardModel::Rm | RewardModel::Ra => {
            (p.mcv >= p.mpw + p.mca - EQ_TOL, "mcv >= mpw + mca".into())
        }
        RewardModel::Rnone => (p.mcv >= p.mpw - EQ_TOL, "mcv >= mpw".into()),
    };
    let (verify_viable_at_pc1, verify_viable_desc): (bool, String) = match model {
        RewardModel::Rm | RewardModel::Ra => {
            (p.mcv <= p.mpw + p.mca + EQ_TOL, "mcv <= mpw + mca".into())
        }
        RewardModel::Rnone => (p.mcv <= p.mpw + EQ_TOL, "mcv <= mpw".into()),
    };

    let mut rows = Vec::new();
    let mut push = |kind: RowKind, pc: ProbValue, pv: ProbValue, conditions: Vec<String>| {
        let (p_wrong, u_master, u_worker) =
            eval_row(kind, model, params, n, pc.eval_point(), pv.eval_point());
        rows.push(EquilibriumRow {
            kind,
            pc,
            pv,
            conditions,
            p_wrong,
            u_master,
            u_worker,
            all_cheat: pc.is_point(1.0),
        });
    };

    if pc_star > 0.0 && pc_star < 1.0 && pv_star > 0.0 && pv_star < 1.0 {
        push(
            RowKind::FullyMixed,
            ProbValue::point(pc_star),
            ProbValue::point(pv_star),
            vec![],
        );
    }

    if master_indiff_at_pc0 {
        if let Some(pv) = ProbValue::range_open_at_corners(pv_star, 1.0) {
            push(
                RowKind::HonestPvRange,
                ProbValue::point(0.0),
                pv,
                master_indiff_at_pc0_desc.clone(),
            );
        }
    }
    if master_indiff_at_pc1 {
        if let Some(pv) = ProbValue::range_open_at_corners(0.0, pv_star) {
            push(
                RowKind::AllCheatPvRange,
                ProbValue::point(1.0),
                pv,
                vec![master_indiff_at_pc1_desc.clone()],
            );
        }
    }
    if approx_zero(p.wct) {
        if let Some(pc) = ProbValue::range_closed_lo(0.0, pc_star) {
            push(
                RowKind::PcRangeNoVerify,
                pc,
                ProbValue::point(0.0),
                vec!["wct = 0".into()],
            );
        }
    }
    if approx_zero(p.wct - worker_denom) {
        if let Some(pc) = ProbValue::range_open_at_corners(pc_star, 1.0) {
            push(
                RowKind::PcRangeAlwaysVerify,
                pc,
                ProbValue::point(1.0),
                vec!["wct = wba + wpc".into()],
            );
        }
    }
    if verify_viable_at_pc1 && p.wct >= worker_denom - EQ_TOL {
        push(
            RowKind::AllCheatAlwaysVerify,
            ProbValue::point(1.0),
            ProbValue::point(1.0),
            vec![verify_viable_desc, "wct >= wba + wpc".into()],
        );
    }
    if master_indiff_at_pc0 && p.wct <= worker_denom + EQ_TOL {
        let mut conds = master_indiff_at_pc0_desc;
        conds.push("wct <= wba + wpc".into());
        push(
            RowKind::HonestAlwaysVerify,
            ProbValue::point(0.0),
            ProbValue::point(1.0),
            conds,
        );
    }
    if verify_dominated_at_pc1 {
        push(
            RowKind::AllCheatNeverVerify,
            ProbValue::point(1.0),
            ProbValue::point(0.0),
            vec![verify_dominated_desc],
        );
    }

    rows
}

/// Re-evaluates a classified row's wrong-acceptance probability and both
/// expected utilities, including the `1 - pc^n` verification-success factor.
pub fn analyze_1v1n(
    row: &EquilibriumRow,
    params: &PayoffParameters,
    model: RewardModel,
    n: u64,
) -> (f64, f64, f64) {
    eval_row(
        row.kind,
        model,
        params,
        n,
        row.pc.eval_point(),
        row.pv.eval_point(),
    )
}

fn eval_row(
    kind: RowKind,
    model: RewardModel,
    p: &PayoffParameters,
    n: u64,
    pc: f64,
    pv: f64,
) -> (f64, f64, f64) {
    let nf = n as f64;
    let reward_all = matches!(model, RewardModel::Rm | RewardModel::Ra);
    match kind {
        RowKind::FullyMixed => {
            let big_pc = majority_cheat_prob_iid(n, pc).expect("n odd, pc in range");
            let p_wrong = (1.0 - pv) * big_pc;
            let verify_part = (1.0 - pc.powi(n as i32)) * p.mbr - p.mcv - (1.0 - pc) * nf * p.mca;
            let accept_part =
                p.mbr * (1.0 - big_pc) - p.mpw * big_pc - if reward_all { nf * p.mca } else { 0.0 };
            let u_master = pv * verify_part + (1.0 - pv) * accept_part;
            let u_worker = if reward_all {
                p.wba - p.wct
            } else {
                -pv * p.wpc
            };
            (p_wrong, u_master, u_worker)
        }
        RowKind::HonestPvRange | RowKind::HonestAlwaysVerify | RowKind::HonestNeverVerify => {
            let u_master = if reward_all {
                p.mbr - nf * p.mca
            } else {
                p.mbr
            };
            let u_worker = if reward_all {
                p.wba - p.wct
            } else {
                pv * p.wba - p.wct
            };
            (0.0, u_master, u_worker)
        }
        RowKind::AllCheatPvRange => {
            let u_master = if reward_all {
                -pv * p.mcv - (1.0 - pv) * (p.mpw + nf * p.mca)
            } else {
                -p.mcv
            };
            let u_worker = if reward_all {
                (1.0 - pv) * p.wba - pv * p.wpc
            } else {
                -pv * p.wpc
            };
            (1.0 - pv, u_master, u_worker)
        }
        RowKind::PcRangeNoVerify => {
            let big_pc = majority_cheat_prob_iid(n, pc).expect("n odd, pc in range");
            let u_master =
                p.mbr * (1.0 - big_pc) - p.mpw * big_pc - if reward_all { nf * p.mca } else { 0.0 };
            let u_worker = if reward_all { p.wba } else { 0.0 };
            (big_pc, u_master, u_worker)
        }
        RowKind::PcRangeAlwaysVerify => {
            let u_master = (1.0 - pc.powi(n as i32)) * p.mbr - p.mcv - (1.0 - pc) * nf * p.mca;
            (0.0, u_master, -p.wpc)
        }
        RowKind::AllCheatAlwaysVerify => (0.0, -p.mcv, -p.wpc),
        RowKind::AllCheatNeverVerify => {
            let u_master = if reward_all {
                -p.mpw - nf * p.mca
            } else {
                -p.mpw
            };
            let u_worker = if reward_all { p.wba } else { 0.0 };
            (1.0, u_master, u_worker)
        }
    }
}

/// Master payoff as a function of the verification outcome and the split of
/// the answers into cheaters and honest workers. This is the built-in
/// instance; [`expected_master_utility_1v1n`] accepts any such function for
/// callers whose per-outcome master payoffs are not a per-worker sum.
pub fn master_payoff_by_counts(
    params: &PayoffParameters,
    model: RewardModel,
    n: u64,
) -> impl Fn(bool, u64, u64) -> f64 {
    let p = *params;
    move |verified: bool, cheaters: u64, honest: u64| -> f64 {
        debug_assert_eq!(cheaters + honest, n);
        if verified {
            let benefit = if honest > 0 { p.mbr } else { 0.0 };
            benefit - p.mcv - honest as f64 * p.mca
        } else {
            let accepted = if cheaters > honest { -p.mpw } else { p.mbr };
            let rewarded = match model {
                // Each of the n instances rewards its own worker.
                RewardModel::Rm | RewardModel::Ra => n,
                RewardModel::Rnone => 0,
            };
            accepted - rewarded as f64 * p.mca
        }
    }
}

/// Expected master utility of the `n`-fold game for iid cheating probability
/// `pc` and verification probability `pv`, under an arbitrary per-outcome
/// master payoff function.
pub fn expected_master_utility_1v1n<F>(n: u64, pc: f64, pv: f64, payoff: F) -> f64
where
    F: Fn(bool, u64, u64) -> f64,
{
    let sizes = vec![1u32; n as usize];
    let pcs = vec![pc; n as usize];
    let dist = cheater_count_distribution(&sizes, &pcs);
    let mut total = 0.0;
    for (k, &mass) in dist.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        let cheaters = k as u64;
        let honest = n - cheaters;
        total += mass
            * (pv * payoff(true, cheaters, honest) + (1.0 - pv) * payoff(false, cheaters, honest));
    }
    total
}
