//! The one-master/one-worker 2x2 game: payoff matrices per reward model and
//! a complete mixed-strategy Nash equilibrium solver.

use crate::error::{Error, Result};
use crate::games::rows::{EquilibriumRow, ProbValue, RowKind};
use crate::payoff::{PayoffParameters, RewardModel};
use crate::EQ_TOL;

/// Payoffs of the 2x2 game between the master and a single worker.
///
/// Index conventions: `m_*` master, `w_*` worker; first letter of the suffix
/// is the worker move (`c` cheat, `h` honest), second the master move
/// (`v` verify, `n` not verify).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMatrix1v1 {
    pub m_cv: f64,
    pub m_hv: f64,
    pub m_cn: f64,
    pub m_hn: f64,
    pub w_cv: f64,
    pub w_hv: f64,
    pub w_cn: f64,
    pub w_hn: f64,
}

/// Instantiates the 2x2 matrix for a reward model. `Ra` behaves exactly like
/// `Rm` here: with a single worker the majority is the worker itself.
pub fn payoff_matrix_1v1(params: &PayoffParameters, model: RewardModel) -> PayoffMatrix1v1 {
    let p = params;
    match model {
        RewardModel::Rm | RewardModel::Ra => PayoffMatrix1v1 {
            m_cv: -p.mcv,
            m_hv: p.mbr - p.mcv - p.mca,
            m_cn: -p.mpw - p.mca,
            m_hn: p.mbr - p.mca,
            w_cv: -p.wpc,
            w_hv: p.wba - p.wct,
            w_cn: p.wba,
            w_hn: p.wba - p.wct,
        },
        RewardModel::Rnone => PayoffMatrix1v1 {
            m_cv: -p.mcv,
            m_hv: p.mbr - p.mcv - p.mca,
            m_cn: -p.mpw,
            m_hn: p.mbr,
            w_cv: -p.wpc,
            w_hv: p.wba - p.wct,
            w_cn: 0.0,
            w_hn: -p.wct,
        },
    }
}

impl PayoffMatrix1v1 {
    /// Worker's gain from cheating instead of playing honest when the master
    /// verifies with probability `pv`. Linear in `pv`.
    pub fn worker_cheat_gain(&self, pv: f64) -> f64 {
        let at_verify = self.w_cv - self.w_hv;
        let at_no_verify = self.w_cn - self.w_hn;
        pv * at_verify + (1.0 - pv) * at_no_verify
    }

    /// Master's gain from verifying instead of not when the worker cheats
    /// with probability `pc`. Linear in `pc`.
    pub fn master_verify_gain(&self, pc: f64) -> f64 {
        let at_cheat = self.m_cv - self.m_cn;
        let at_honest = self.m_hv - self.m_hn;
        pc * at_cheat + (1.0 - pc) * at_honest
    }

    pub fn master_utility(&self, pc: f64, pv: f64) -> f64 {
        pc * pv * self.m_cv
            + (1.0 - pc) * pv * self.m_hv
            + pc * (1.0 - pv) * self.m_cn
            + (1.0 - pc) * (1.0 - pv) * self.m_hn
    }

    pub fn worker_utility(&self, pc: f64, pv: f64) -> f64 {
        pc * pv * self.w_cv
            + (1.0 - pc) * pv * self.w_hv
            + pc * (1.0 - pv) * self.w_cn
            + (1.0 - pc) * (1.0 - pv) * self.w_hn
    }
}

/// Sub-interval of `[0,1]` on which the linear function with the given
/// endpoint values satisfies the requested comparison with zero.
/// Returns `None` when empty.
fn linear_interval(at_zero: f64, at_one: f64, want_le: bool) -> Option<(f64, f64)> {
    let (v0, v1) = if want_le {
        (at_zero, at_one)
    } else {
        (-at_zero, -at_one)
    };
    // Looking for {p : v0 + p (v1 - v0) <= 0}.
    if v0 <= 0.0 && v1 <= 0.0 {
        return Some((0.0, 1.0));
    }
    if v0 > 0.0 && v1 > 0.0 {
        return None;
    }
    let root = v0 / (v0 - v1);
    if v0 <= 0.0 {
        Some((0.0, root))
    } else {
        Some((root, 1.0))
    }
}

/// Enumerates every mixed-strategy Nash equilibrium of the 2x2 game.
///
/// Pure corners carry their (tolerance-checked) side conditions; when a
/// player is indifferent at a pure opponent strategy the equilibrium is a
/// whole interval, reported as a range row. The fully mixed point is
/// included when both indifference quotients land strictly inside `(0,1)`.
/// Overlapping rows are all returned; the caller selects.
///
/// Fails when one player's payoff differentials vanish identically, since
/// the equilibrium set is then a continuum in that player's probability.
pub fn solve_1v1(matrix: &PayoffMatrix1v1) -> Result<Vec<EquilibriumRow>> {
    let w0 = matrix.worker_cheat_gain(0.0);
    let w1 = matrix.worker_cheat_gain(1.0);
    let m0 = matrix.master_verify_gain(0.0);
    let m1 = matrix.master_verify_gain(1.0);

    if w0.abs() <= EQ_TOL && w1.abs() <= EQ_TOL {
        return Err(Error::DegenerateDenominator(
            "worker payoff differential vanishes identically (w_cv - w_hv and w_cn - w_hn)".into(),
        ));
    }
    if m0.abs() <= EQ_TOL && m1.abs() <= EQ_TOL {
        return Err(Error::DegenerateDenominator(
            "master payoff differential vanishes identically (m_cv - m_cn and m_hv - m_hn)".into(),
        ));
    }

    let mut rows = Vec::new();
    let mut push = |kind: RowKind, pc: ProbValue, pv: ProbValue, conditions: Vec<String>| {
        let pc_at = pc.eval_point();
        let pv_at = pv.eval_point();
        rows.push(EquilibriumRow {
            kind,
            pc,
            pv,
            conditions,
            p_wrong: (1.0 - pv_at) * pc_at,
            u_master: matrix.master_utility(pc_at, pv_at),
            u_worker: matrix.worker_utility(pc_at, pv_at),
            all_cheat: pc.is_point(1.0),
        });
    };

    // Fully mixed point: both players indifferent.
    if (w0 - w1).abs() > EQ_TOL && (m0 - m1).abs() > EQ_TOL {
        let pv_star = w0 / (w0 - w1);
        let pc_star = m0 / (m0 - m1);
        if pv_star > 0.0 && pv_star < 1.0 && pc_star > 0.0 && pc_star < 1.0 {
            push(
                RowKind::FullyMixed,
                ProbValue::point(pc_star),
                ProbValue::point(pv_star),
                vec![],
            );
        }
    }

    // Worker pure, master mixing over an interval: master indifferent at the
    // worker's pure strategy, worker's pure strategy a best response across
    // the interval. The interval is kept open at 0 and 1; the corners are
    // separate rows.
    if m0.abs() <= EQ_TOL {
        // pc = 0; worker must prefer honest: cheat gain <= 0.
        if let Some((lo, hi)) = linear_interval(w0, w1, true) {
            if let Some(pv) = ProbValue::range_open_at_corners(lo, hi) {
                push(
                    RowKind::HonestPvRange,
                    ProbValue::point(0.0),
                    pv,
                    vec!["master indifferent at pc=0".into()],
                );
            }
        }
    }
    if m1.abs() <= EQ_TOL {
        // pc = 1; worker must prefer cheating: cheat gain >= 0.
        if let Some((lo, hi)) = linear_interval(w0, w1, false) {
            if let Some(pv) = ProbValue::range_open_at_corners(lo, hi) {
                push(
                    RowKind::AllCheatPvRange,
                    ProbValue::point(1.0),
                    pv,
                    vec!["master indifferent at pc=1".into()],
                );
            }
        }
    }
    // Master pure, worker mixing over an interval.
    if w0.abs() <= EQ_TOL {
        // pv = 0; master must prefer not verifying: verify gain <= 0.
        if let Some((lo, hi)) = linear_interval(m0, m1, true) {
            if let Some(pc) = ProbValue::range_closed_lo(lo, hi) {
                push(
                    RowKind::PcRangeNoVerify,
                    pc,
                    ProbValue::point(0.0),
                    vec!["worker indifferent at pv=0".into()],
                );
            }
        }
    }
    if w1.abs() <= EQ_TOL {
        // pv = 1; master must prefer verifying: verify gain >= 0.
        if let Some((lo, hi)) = linear_interval(m0, m1, false) {
            if let Some(pc) = ProbValue::range_open_at_corners(lo, hi) {
                push(
                    RowKind::PcRangeAlwaysVerify,
                    pc,
                    ProbValue::point(1.0),
                    vec!["worker indifferent at pv=1".into()],
                );
            }
        }
    }

    // Pure corners, non-strict best responses (boundaries overlap with the
    // range rows above, matching the exhaustive case analysis).
    if w1 >= -EQ_TOL && m1 >= -EQ_TOL {
        push(
            RowKind::AllCheatAlwaysVerify,
            ProbValue::point(1.0),
            ProbValue::point(1.0),
            vec![
                "cheat gain >= 0 at pv=1".into(),
                "verify gain >= 0 at pc=1".into(),
            ],
        );
    }
    if w1 <= EQ_TOL && m0 >= -EQ_TOL {
        push(
            RowKind::HonestAlwaysVerify,
            ProbValue::point(0.0),
            ProbValue::point(1.0),
            vec![
                "cheat gain <= 0 at pv=1".into(),
                "verify gain >= 0 at pc=0".into(),
            ],
        );
    }
    if w0 >= -EQ_TOL && m1 <= EQ_TOL {
        push(
            RowKind::AllCheatNeverVerify,
            ProbValue::point(1.0),
            ProbValue::point(0.0),
            vec![
                "cheat gain >= 0 at pv=0".into(),
                "verify gain <= 0 at pc=1".into(),
            ],
        );
    }
    // (pc=0, pv=0) can only be an equilibrium with a strictly negative cheat
    // gain; at exactly zero the pv=0 range row already covers it.
    if w0 < -EQ_TOL && m0 <= EQ_TOL {
        push(
            RowKind::HonestNeverVerify,
            ProbValue::point(0.0),
            ProbValue::point(0.0),
            vec![
                "cheat gain < 0 at pv=0".into(),
                "verify gain <= 0 at pc=0".into(),
            ],
        );
    }

    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance() -> PayoffParameters {
        PayoffParameters {
            wpc: 2.0,
            wct: 1.0,
            wba: 2.0,
            mpw: 3.0,
            mca: 1.0,
            mcv: 1.0,
            mbr: 5.0,
        }
    }

    #[test]
    fn reward_all_matches_reward_majority() {
        let p = instance();
        assert_eq!(
            payoff_matrix_1v1(&p, RewardModel::Rm),
            payoff_matrix_1v1(&p, RewardModel::Ra)
        );
    }

    #[test]
    fn rnone_block_entries() {
        let p = instance();
        let m = payoff_matrix_1v1(&p, RewardModel::Rnone);
        assert_eq!(m.w_cn, 0.0);
        assert_eq!(m.w_hn, -p.wct);
        assert_eq!(m.m_cn, -p.mpw);
        assert_eq!(m.m_hn, p.mbr);
    }

    #[test]
    fn rm_block_entries() {
        let p = instance();
        let m = payoff_matrix_1v1(&p, RewardModel::Rm);
        assert_eq!(m.w_cn, p.wba);
        assert_eq!(m.m_hv, p.mbr - p.mcv - p.mca);
        assert_eq!(m.m_cn, -p.mpw - p.mca);
    }

    #[test]
    fn all_zero_params_give_zero_matrix_and_degenerate_solve() {
        let zero = PayoffParameters {
            wpc: 0.0,
            wct: 0.0,
            wba: 0.0,
            mpw: 0.0,
            mca: 0.0,
            mcv: 0.0,
            mbr: 0.0,
        };
        for model in RewardModel::ALL {
            let m = payoff_matrix_1v1(&zero, model);
            for entry in [
                m.m_cv, m.m_hv, m.m_cn, m.m_hn, m.w_cv, m.w_hv, m.w_cn, m.w_hn,
            ] {
                assert_eq!(entry, 0.0);
            }
            assert!(solve_1v1(&m).is_err());
        }
    }

    #[test]
    fn fully_mixed_point() {
        let m = payoff_matrix_1v1(&instance(), RewardModel::Rm);
        let rows = solve_1v1(&m).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.kind, RowKind::FullyMixed);
        assert!((row.pc.eval_point() - 0.25).abs() < 1e-12);
        assert!((row.pv.eval_point() - 0.25).abs() < 1e-12);
        assert!((row.p_wrong - 0.1875).abs() < 1e-12);
        assert!((row.u_worker - 1.0).abs() < 1e-12);
        assert!((row.u_master - 2.0).abs() < 1e-12);
    }

    #[test]
    fn expensive_verification_yields_pure_cheat_row() {
        let mut p = instance();
        p.mcv = 5.0; // mcv >= mpw + mca
        let m = payoff_matrix_1v1(&p, RewardModel::Rm);
        let rows = solve_1v1(&m).unwrap();
        assert!(rows
            .iter()
            .any(|r| r.kind == RowKind::AllCheatNeverVerify && r.p_wrong == 1.0));
    }
}
