//! Independent brute-force verification of equilibrium claims on small
//! instances.
//!
//! Everything here evaluates utilities directly from game outcomes (subset
//! enumeration over group coins, expectation over the verification coin)
//! rather than through the closed forms in [`crate::games`], so it can serve
//! as ground truth for them. Pure profiles are checked exhaustively for
//! profitable unilateral deviations; mixed profiles are found by a grid scan
//! over indifference residuals refined with bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::differentials_0n;
use crate::mechanism::Certificate;
use crate::payoff::{GameKind, GroupPartition, PayoffParameters, RewardModel, UnverifiedReward};

/// Tolerance on indifference residuals for accepted witnesses. Looser than
/// the analytic 1e-9 so it absorbs grid and bisection error; the oracle is a
/// falsifier, not the primary computation.
pub const INDIFFERENCE_TOL: f64 = 1e-7;

/// Default grid resolution of the mixed-strategy scan.
pub const DEFAULT_GRID_STEP: f64 = 1.0 / 64.0;

/// Hard cap on groups for the `2^l` pure enumeration.
pub const MAX_ENUM_GROUPS: usize = 20;

const MAX_GRID_PROFILES: u64 = 4_000_000;
const BISECT_ITERS: u32 = 80;
const DEDUP_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Pure,
    PartiallyMixed,
    FullyMixed,
}

/// An equilibrium found by enumeration or search: one cheating probability
/// per group, the verification probability (fixed parameter or the master's
/// strategy, depending on the game), and the worst violation of the
/// equilibrium conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumWitness {
    pub pc_per_group: Vec<f64>,
    pub pv: f64,
    pub kind: WitnessKind,
    pub residual: f64,
}

impl EquilibriumWitness {
    pub fn has_mixing_group(&self) -> bool {
        self.pc_per_group
            .iter()
            .any(|&p| p > 1e-9 && p < 1.0 - 1e-9)
    }

    fn close_to(&self, other: &Self) -> bool {
        (self.pv - other.pv).abs() <= DEDUP_TOL
            && self
                .pc_per_group
                .iter()
                .zip(&other.pc_per_group)
                .all(|(a, b)| (a - b).abs() <= DEDUP_TOL)
    }
}

/// Majority-cheating probability by explicit `2^l` subset enumeration.
/// Cross-checks the dynamic-programming route in [`crate::majority`].
pub fn subset_majority_cheat_prob(sizes: &[u32], pc_per_group: &[f64]) -> Result<f64> {
    if sizes.len() != pc_per_group.len() {
        return Err(Error::MismatchedLengths(format!(
            "{} sizes, {} probabilities",
            sizes.len(),
            pc_per_group.len()
        )));
    }
    if sizes.len() > MAX_ENUM_GROUPS {
        return Err(Error::PartitionTooLarge(sizes.len()));
    }
    let n: u64 = sizes.iter().map(|&s| u64::from(s)).sum();
    let mut total = 0.0;
    for mask in 0u32..(1 << sizes.len()) {
        let mut weight = 1.0;
        let mut cheaters = 0u64;
        for (j, (&size, &pc)) in sizes.iter().zip(pc_per_group).enumerate() {
            if mask >> j & 1 == 1 {
                weight *= pc;
                cheaters += u64::from(size);
            } else {
                weight *= 1.0 - pc;
            }
        }
        if cheaters * 2 > n {
            total += weight;
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Group payoff for a fully determined outcome, as the expectation over the
/// verification coin only.
fn group_outcome_payoff(
    params: &PayoffParameters,
    reward: UnverifiedReward,
    group_size: u32,
    own_cheat: bool,
    majority_cheats: bool,
    pv: f64,
) -> f64 {
    let k = f64::from(group_size);
    let p = params;
    let verified = if own_cheat {
        -k * p.wpc
    } else {
        k * p.wba - p.wct
    };
    let rewarded = match reward {
        UnverifiedReward::All => true,
        UnverifiedReward::None => false,
        UnverifiedReward::MajoritySide => own_cheat == majority_cheats,
    };
    let base = if rewarded { k * p.wba } else { 0.0 };
    let unverified = if own_cheat { base } else { base - p.wct };
    pv * verified + (1.0 - pv) * unverified
}

/// Expected utility of group `i` for a fixed own choice, averaging over the
/// other groups' coins by subset enumeration.
#[allow(clippy::too_many_arguments)]
fn group_utility(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    sizes: &[u32],
    pcs: &[f64],
    pv: f64,
    i: usize,
    own_cheat: bool,
) -> f64 {
    let reward = model.unverified_reward(game);
    let n: u64 = sizes.iter().map(|&s| u64::from(s)).sum();
    let own_size = sizes[i];
    let own_cheaters = if own_cheat { u64::from(own_size) } else { 0 };
    let other_count = sizes.len() - 1;

    let mut total = 0.0;
    for mask in 0u32..(1 << other_count) {
        let mut weight = 1.0;
        let mut cheaters = own_cheaters;
        let mut bit = 0;
        for j in 0..sizes.len() {
            if j == i {
                continue;
            }
            if mask >> bit & 1 == 1 {
                weight *= pcs[j];
                cheaters += u64::from(sizes[j]);
            } else {
                weight *= 1.0 - pcs[j];
            }
            bit += 1;
        }
        if weight == 0.0 {
            continue;
        }
        let majority_cheats = cheaters * 2 > n;
        total +=
            weight * group_outcome_payoff(params, reward, own_size, own_cheat, majority_cheats, pv);
    }
    total
}

/// Gain for group `i` of switching to cheating, others fixed.
#[allow(clippy::too_many_arguments)]
fn cheat_gain(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    sizes: &[u32],
    pcs: &[f64],
    pv: f64,
    i: usize,
) -> f64 {
    group_utility(params, model, game, sizes, pcs, pv, i, true)
        - group_utility(params, model, game, sizes, pcs, pv, i, false)
}

/// Per-group gains from unilaterally switching to cheating at a profile,
/// each computed by direct outcome enumeration. The best-response check for
/// a claimed all-honest equilibrium is that every entry is negative.
pub fn cheat_gain_profile(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    partition: &GroupPartition,
    pc_per_group: &[f64],
    pv: f64,
) -> Result<Vec<f64>> {
    check_partition_for_game(game, partition)?;
    let sizes = partition.sizes();
    if pc_per_group.len() != sizes.len() {
        return Err(Error::MismatchedLengths(format!(
            "{} groups, {} probabilities",
            sizes.len(),
            pc_per_group.len()
        )));
    }
    if sizes.len() > MAX_ENUM_GROUPS {
        return Err(Error::PartitionTooLarge(sizes.len()));
    }
    Ok((0..sizes.len())
        .map(|i| cheat_gain(params, model, game, sizes, pc_per_group, pv, i))
        .collect())
}

/// Master payoff for a fully determined group outcome.
fn master_outcome_payoff(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    n: u64,
    cheaters: u64,
    verify: bool,
) -> f64 {
    let p = params;
    let honest = n - cheaters;
    if verify {
        let benefit = if honest > 0 { p.mbr } else { 0.0 };
        benefit - p.mcv - honest as f64 * p.mca
    } else {
        let majority_cheats = cheaters * 2 > n;
        let accepted = if majority_cheats { -p.mpw } else { p.mbr };
        let rewarded = match model.unverified_reward(game) {
            UnverifiedReward::All => n,
            UnverifiedReward::None => 0,
            UnverifiedReward::MajoritySide => {
                if majority_cheats {
                    cheaters
                } else {
                    honest
                }
            }
        };
        accepted - rewarded as f64 * p.mca
    }
}

/// Master's expected gain from verifying, averaged over group coins.
fn master_verify_gain(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    sizes: &[u32],
    pcs: &[f64],
) -> f64 {
    let n: u64 = sizes.iter().map(|&s| u64::from(s)).sum();
    let mut total = 0.0;
    for mask in 0u32..(1 << sizes.len()) {
        let mut weight = 1.0;
        let mut cheaters = 0u64;
        for (j, (&size, &pc)) in sizes.iter().zip(pcs).enumerate() {
            if mask >> j & 1 == 1 {
                weight *= pc;
                cheaters += u64::from(size);
            } else {
                weight *= 1.0 - pc;
            }
        }
        if weight == 0.0 {
            continue;
        }
        total += weight
            * (master_outcome_payoff(params, model, game, n, cheaters, true)
                - master_outcome_payoff(params, model, game, n, cheaters, false));
    }
    total
}

fn check_partition_for_game(game: GameKind, partition: &GroupPartition) -> Result<()> {
    match game {
        GameKind::G1v1 => {
            if partition.sizes() != [1] {
                return Err(Error::InvalidPartition(
                    "the one-to-one game has exactly one singleton worker".into(),
                ));
            }
        }
        GameKind::G1v1n => {
            if partition.sizes().iter().any(|&s| s != 1) {
                return Err(Error::InvalidPartition(
                    "the n-fold one-to-one game treats workers as singletons".into(),
                ));
            }
        }
        GameKind::G0n | GameKind::G1n => {}
    }
    Ok(())
}

fn resolve_pv(game: GameKind, pv: Option<f64>) -> Result<Option<f64>> {
    if game.master_in_game() {
        Ok(None)
    } else {
        match pv {
            Some(v) => {
                crate::payoff::check_probability("pv", v)?;
                Ok(Some(v))
            }
            None => Err(Error::InvalidProbability {
                what: "pv (required when the master is not a player)",
                value: f64::NAN,
            }),
        }
    }
}

/// Checks every pure profile for profitable unilateral deviations. The
/// master is included as a player exactly when the game makes verification
/// strategic; otherwise `pv` is the fixed protocol parameter.
pub fn enumerate_pure_equilibria(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    partition: &GroupPartition,
    pv: Option<f64>,
) -> Result<Vec<EquilibriumWitness>> {
    check_partition_for_game(game, partition)?;
    let sizes = partition.sizes();
    let l = sizes.len();
    if l > MAX_ENUM_GROUPS {
        return Err(Error::PartitionTooLarge(l));
    }
    let fixed_pv = resolve_pv(game, pv)?;
    let pv_choices: &[f64] = match fixed_pv {
        Some(ref v) => std::slice::from_ref(v),
        None => &[0.0, 1.0],
    };

    let mut found = Vec::new();
    for mask in 0u32..(1 << l) {
        let pcs: Vec<f64> = (0..l)
            .map(|j| if mask >> j & 1 == 1 { 1.0 } else { 0.0 })
            .collect();
        for &pv_val in pv_choices {
            let mut residual: f64 = 0.0;
            for i in 0..l {
                let gain = cheat_gain(params, model, game, sizes, &pcs, pv_val, i);
                // A cheating group must not gain by turning honest and vice
                // versa.
                let violation = if mask >> i & 1 == 1 { -gain } else { gain };
                residual = residual.max(violation);
                if residual > INDIFFERENCE_TOL {
                    break;
                }
            }
            if residual > INDIFFERENCE_TOL {
                continue;
            }
            if fixed_pv.is_none() {
                let verify_gain = if game == GameKind::G1v1n {
                    // Per-instance master conditions: verifying must be a
                    // best response against every single worker.
                    (0..l)
                        .map(|i| {
                            master_verify_gain(params, model, GameKind::G1v1, &[1], &pcs[i..=i])
                        })
                        .fold(f64::INFINITY, f64::min)
                } else {
                    master_verify_gain(params, model, game, sizes, &pcs)
                };
                let violation = if pv_val == 1.0 {
                    -verify_gain
                } else {
                    verify_gain
                };
                residual = residual.max(violation);
            }
            if residual <= INDIFFERENCE_TOL {
                found.push(EquilibriumWitness {
                    pc_per_group: pcs.clone(),
                    pv: pv_val,
                    kind: WitnessKind::Pure,
                    residual: residual.max(0.0),
                });
            }
        }
    }
    Ok(found)
}

/// Bisection root of `f` over `[lo, hi]` given a sign change.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Scans for mixed-strategy equilibria.
///
/// For the one-to-one games the two indifference conditions decouple (the
/// worker's gain depends only on `pv`, the master's only on `pc`), so roots
/// are found by bisection directly. For the group games the scan walks a
/// `pc` grid (and a `pv` grid when the master plays), keeps profiles whose
/// indifference residuals are small at grid resolution, and refines them by
/// coordinate bisection.
pub fn search_mixed_equilibria(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    partition: &GroupPartition,
    pv: Option<f64>,
    grid_step: f64,
) -> Result<Vec<EquilibriumWitness>> {
    check_partition_for_game(game, partition)?;
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::Config(format!(
            "grid step must be in (0, 0.5], got {grid_step}"
        )));
    }
    match game {
        GameKind::G1v1 | GameKind::G1v1n => search_mixed_one_to_one(params, model, game, partition),
        GameKind::G0n => {
            let pv = resolve_pv(game, pv)?.expect("fixed pv for group game");
            search_mixed_groups(params, model, game, partition, &[pv], grid_step, false)
        }
        GameKind::G1n => {
            let steps = (1.0 / grid_step).round() as usize;
            let pv_grid: Vec<f64> = (0..=steps)
                .map(|j| (j as f64 * grid_step).min(1.0))
                .collect();
            search_mixed_groups(params, model, game, partition, &pv_grid, grid_step, true)
        }
    }
}

fn search_mixed_one_to_one(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    partition: &GroupPartition,
) -> Result<Vec<EquilibriumWitness>> {
    let l = partition.len();
    // Worker indifference: gain from cheating as a function of pv, identical
    // for every singleton worker and independent of the others.
    let worker_gain = |pv: f64| -> f64 { cheat_gain(params, model, game, &[1], &[0.0], pv, 0) };
    // Per-instance master indifference as a function of that worker's pc.
    let master_gain =
        |pc: f64| -> f64 { master_verify_gain(params, model, GameKind::G1v1, &[1], &[pc]) };

    let mut found = Vec::new();
    let pv_root = bisect(worker_gain, 0.0, 1.0);
    let pc_root = bisect(master_gain, 0.0, 1.0);

    if let (Some(pv_star), Some(pc_star)) = (pv_root, pc_root) {
        if pv_star > 0.0 && pv_star < 1.0 && pc_star > 0.0 && pc_star < 1.0 {
            let residual = worker_gain(pv_star).abs().max(master_gain(pc_star).abs());
            if residual <= INDIFFERENCE_TOL {
                found.push(EquilibriumWitness {
                    pc_per_group: vec![pc_star; l],
                    pv: pv_star,
                    kind: WitnessKind::FullyMixed,
                    residual,
                });
            }
        }
    }

    // Worker pure / master mixing families: the master must be exactly
    // indifferent at the pure pc; report the midpoint of the pv range where
    // the pure choice stays a best response.
    for pc in [0.0, 1.0] {
        if master_gain(pc).abs() <= INDIFFERENCE_TOL {
            if let Some((lo, hi)) = best_response_pv_range(&worker_gain, pc) {
                if hi - lo > DEDUP_TOL {
                    let pv_mid = 0.5 * (lo + hi);
                    if pv_mid > 0.0 && pv_mid < 1.0 {
                        found.push(EquilibriumWitness {
                            pc_per_group: vec![pc; l],
                            pv: pv_mid,
                            kind: WitnessKind::PartiallyMixed,
                            residual: master_gain(pc).abs(),
                        });
                    }
                }
            }
        }
    }
    // Master pure / worker mixing families.
    for pv in [0.0, 1.0] {
        if worker_gain(pv).abs() <= INDIFFERENCE_TOL {
            if let Some((lo, hi)) = best_response_pc_range(&master_gain, pv) {
                if hi - lo > DEDUP_TOL {
                    let pc_mid = 0.5 * (lo + hi);
                    if pc_mid > 0.0 && pc_mid < 1.0 {
                        found.push(EquilibriumWitness {
                            pc_per_group: vec![pc_mid; l],
                            pv,
                            kind: WitnessKind::PartiallyMixed,
                            residual: worker_gain(pv).abs(),
                        });
                    }
                }
            }
        }
    }
    Ok(found)
}

/// Range of `pv` on which the worker's pure choice `pc` is a best response.
fn best_response_pv_range<F: Fn(f64) -> f64>(worker_gain: &F, pc: f64) -> Option<(f64, f64)> {
    // Cheating best response needs gain >= 0, honesty needs gain <= 0.
    let ok = |pv: f64| {
        let g = worker_gain(pv);
        if pc == 1.0 {
            g >= -INDIFFERENCE_TOL
        } else {
            g <= INDIFFERENCE_TOL
        }
    };
    sweep_range(ok)
}

fn best_response_pc_range<F: Fn(f64) -> f64>(master_gain: &F, pv: f64) -> Option<(f64, f64)> {
    let ok = |pc: f64| {
        let g = master_gain(pc);
        if pv == 1.0 {
            g >= -INDIFFERENCE_TOL
        } else {
            g <= INDIFFERENCE_TOL
        }
    };
    sweep_range(ok)
}

fn sweep_range<F: Fn(f64) -> bool>(ok: F) -> Option<(f64, f64)> {
    const STEPS: usize = 256;
    let mut lo = None;
    let mut hi = None;
    for j in 0..=STEPS {
        let p = j as f64 / STEPS as f64;
        if ok(p) {
            if lo.is_none() {
                lo = Some(p);
            }
            hi = Some(p);
        }
    }
    match (lo, hi) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    }
}

#[allow(clippy::too_many_arguments)]
fn search_mixed_groups(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    partition: &GroupPartition,
    pv_grid: &[f64],
    grid_step: f64,
    master_plays: bool,
) -> Result<Vec<EquilibriumWitness>> {
    let sizes = partition.sizes();
    let l = sizes.len();
    if l > 15 {
        return Err(Error::PartitionTooLarge(l));
    }
    let steps = (1.0 / grid_step).round() as usize;
    let profiles = ((steps + 1) as u64).pow(l as u32) * pv_grid.len() as u64;
    if profiles > MAX_GRID_PROFILES {
        return Err(Error::PartitionTooLarge(l));
    }

    // Coarse acceptance threshold: how much an indifference residual can
    // move inside one grid cell, bounded through the payoff differentials.
    let slack_at = |pv: f64| -> f64 {
        let d_max = sizes
            .iter()
            .map(|&s| {
                let d = differentials_0n(params, model, s, pv);
                d.dw_cheat_majority.abs() + d.dw_pivotal.abs() + d.dw_honest_majority.abs()
            })
            .fold(0.0, f64::max);
        d_max * grid_step * l as f64 + INDIFFERENCE_TOL
    };
    let slacks: Vec<f64> = pv_grid.iter().map(|&pv| slack_at(pv)).collect();

    let mut candidates: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut pcs = vec![0.0f64; l];
    let mut counters = vec![0usize; l];
    'outer: loop {
        for (j, &c) in counters.iter().enumerate() {
            pcs[j] = (c as f64 * grid_step).min(1.0);
        }
        for (&pv, &coarse) in pv_grid.iter().zip(&slacks) {
            let mut ok = true;
            for i in 0..l {
                let gain = cheat_gain(params, model, game, sizes, &pcs, pv, i);
                let p = pcs[i];
                let fine = if p > 0.0 && p < 1.0 {
                    gain.abs() <= coarse
                } else if p == 0.0 {
                    gain <= coarse
                } else {
                    gain >= -coarse
                };
                if !fine {
                    ok = false;
                    break;
                }
            }
            if ok && master_plays && pv > 0.0 && pv < 1.0 {
                let g = master_verify_gain(params, model, game, sizes, &pcs);
                ok = g.abs() <= coarse;
            } else if ok && master_plays {
                let g = master_verify_gain(params, model, game, sizes, &pcs);
                ok = if pv == 0.0 { g <= coarse } else { g >= -coarse };
            }
            if ok
                && (pcs.iter().any(|&p| p > 0.0 && p < 1.0)
                    || (master_plays && pv > 0.0 && pv < 1.0))
            {
                candidates.push((pcs.clone(), pv));
            }
        }
        // Advance the mixed-radix counter over pc grid indices.
        for digit in counters.iter_mut() {
            *digit += 1;
            if *digit <= steps {
                continue 'outer;
            }
            *digit = 0;
        }
        break;
    }

    let mut found = Vec::new();
    for (pcs, pv) in candidates {
        if let Some(w) = refine_group_candidate(params, model, game, sizes, pcs, pv, master_plays) {
            found.push(w);
        }
    }
    Ok(found)
}

/// Refines a grid candidate by coordinate bisection and re-checks every
/// equilibrium condition exactly; returns `None` when no nearby profile
/// satisfies them within [`INDIFFERENCE_TOL`].
#[allow(clippy::too_many_arguments)]
fn refine_group_candidate(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    sizes: &[u32],
    mut pcs: Vec<f64>,
    mut pv: f64,
    master_plays: bool,
) -> Option<EquilibriumWitness> {
    let l = sizes.len();
    let mixing: Vec<usize> = (0..l).filter(|&i| pcs[i] > 0.0 && pcs[i] < 1.0).collect();
    let master_mixes = master_plays && pv > 0.0 && pv < 1.0;

    // The gain of group i does not depend on its own probability, so each
    // indifference equation constrains the other coordinates. Assign
    // equation i to the next mixing coordinate and sweep until stable.
    let total_unknowns = mixing.len() + usize::from(master_mixes);
    if total_unknowns >= 2 || (mixing.len() == 1 && master_mixes) {
        for _ in 0..60 {
            let mut moved = 0.0f64;
            for (idx, &eq) in mixing.iter().enumerate() {
                // Prefer adjusting pv for the last equation when the master
                // mixes, otherwise the next mixing group's probability.
                if master_mixes && idx == mixing.len() - 1 {
                    let f = |v: f64| cheat_gain(params, model, game, sizes, &pcs, v, eq);
                    if let Some(root) = bisect(f, 0.0, 1.0) {
                        moved = moved.max((root - pv).abs());
                        pv = root;
                    }
                } else if mixing.len() > 1 {
                    let var = mixing[(idx + 1) % mixing.len()];
                    let mut trial = pcs.clone();
                    let f = |v: f64| {
                        let mut t = trial.clone();
                        t[var] = v;
                        cheat_gain(params, model, game, sizes, &t, pv, eq)
                    };
                    if let Some(root) = bisect(f, 0.0, 1.0) {
                        moved = moved.max((root - pcs[var]).abs());
                        trial[var] = root;
                        pcs = trial;
                    }
                }
            }
            if master_plays && master_mixes {
                // Master indifference constrains the group probabilities;
                // adjust the first mixing group against it.
                if let Some(&var) = mixing.first() {
                    let f = |v: f64| {
                        let mut t = pcs.clone();
                        t[var] = v;
                        master_verify_gain(params, model, game, sizes, &t)
                    };
                    if let Some(root) = bisect(f, 0.0, 1.0) {
                        moved = moved.max((root - pcs[var]).abs());
                        pcs[var] = root;
                    }
                }
            }
            if moved < 1e-12 {
                break;
            }
        }
    }

    // Exact re-check of every condition at the refined profile.
    let mut residual = 0.0f64;
    for i in 0..l {
        let gain = cheat_gain(params, model, game, sizes, &pcs, pv, i);
        let p = pcs[i];
        let violation = if p > 0.0 && p < 1.0 {
            gain.abs()
        } else if p == 0.0 {
            gain
        } else {
            -gain
        };
        residual = residual.max(violation);
    }
    if master_plays {
        let g = master_verify_gain(params, model, game, sizes, &pcs);
        let violation = if pv > 0.0 && pv < 1.0 {
            g.abs()
        } else if pv == 0.0 {
            g
        } else {
            -g
        };
        residual = residual.max(violation);
    }
    if residual > INDIFFERENCE_TOL {
        return None;
    }
    let fully = pcs.iter().all(|&p| p > 0.0 && p < 1.0);
    Some(EquilibriumWitness {
        pc_per_group: pcs,
        pv,
        kind: if fully {
            WitnessKind::FullyMixed
        } else {
            WitnessKind::PartiallyMixed
        },
        residual: residual.max(0.0),
    })
}

/// Pure enumeration plus mixed search, de-duplicated (pure witnesses win
/// collisions).
pub fn equilibria(
    params: &PayoffParameters,
    model: RewardModel,
    game: GameKind,
    partition: &GroupPartition,
    pv: Option<f64>,
    grid_step: f64,
) -> Result<Vec<EquilibriumWitness>> {
    let mut all = enumerate_pure_equilibria(params, model, game, partition, pv)?;
    all.extend(search_mixed_equilibria(
        params, model, game, partition, pv, grid_step,
    )?);
    let mut deduped: Vec<EquilibriumWitness> = Vec::new();
    for w in all {
        if !deduped.iter().any(|d| d.close_to(&w)) {
            deduped.push(w);
        }
    }
    Ok(deduped)
}

/// Outcome of the mixed-uniqueness falsification harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedUniquenessVerdict {
    pub consistent: bool,
    pub ordering_holds: bool,
    pub equilibria_found: usize,
    pub mixed_found: usize,
}

/// Checks an instance against the claim that, when every group's payoff
/// differentials are ordered (cheating-majority >= pivotal >=
/// honest-majority), no unique equilibrium lets any group mix.
///
/// Reports inconsistency only if the ordering holds and the enumerated
/// equilibrium set is a single profile with a mixing group. Expected to be
/// consistent on every instance; exists to falsify, not to prove.
pub fn mixed_uniqueness_check(
    params: &PayoffParameters,
    model: RewardModel,
    partition: &GroupPartition,
    pv: f64,
    grid_step: f64,
) -> Result<MixedUniquenessVerdict> {
    let ordering_holds = partition
        .sizes()
        .iter()
        .all(|&s| differentials_0n(params, model, s, pv).ordered);
    let eqs = equilibria(params, model, GameKind::G0n, partition, Some(pv), grid_step)?;
    let mixed_found = eqs.iter().filter(|w| w.has_mixing_group()).count();
    let inconsistent = ordering_holds && eqs.len() == 1 && eqs[0].has_mixing_group();
    Ok(MixedUniquenessVerdict {
        consistent: !inconsistent,
        ordering_holds,
        equilibria_found: eqs.len(),
        mixed_found,
    })
}

/// Result of re-verifying a certificate's uniqueness claim on one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub verified: bool,
    pub equilibria: Vec<EquilibriumWitness>,
    /// An equilibrium different from the declared strategy, when one exists.
    pub counterexample: Option<EquilibriumWitness>,
}

/// Re-verifies that the certificate's declared strategy is the unique
/// equilibrium of the declared game on the given collusion partition.
pub fn verify_unique(
    certificate: &Certificate,
    partition: &GroupPartition,
    grid_step: f64,
) -> Result<UniquenessReport> {
    let pv_arg = if certificate.game.master_in_game() {
        None
    } else {
        Some(certificate.pv)
    };
    let eqs = equilibria(
        &certificate.params,
        certificate.model,
        certificate.game,
        partition,
        pv_arg,
        grid_step,
    )?;
    let declared = EquilibriumWitness {
        pc_per_group: vec![certificate.declared_pc; partition.len()],
        pv: certificate.declared_pv,
        kind: WitnessKind::Pure,
        residual: 0.0,
    };
    let matches_declared = |w: &EquilibriumWitness| {
        w.pc_per_group
            .iter()
            .all(|&p| (p - certificate.declared_pc).abs() <= 1e-6)
            && (!certificate.game.master_in_game()
                || (w.pv - certificate.declared_pv).abs() <= 1e-6)
    };
    let counterexample = eqs.iter().find(|w| !matches_declared(w)).cloned();
    let verified = eqs.len() == 1 && matches_declared(&eqs[0]) && counterexample.is_none();
    let counterexample = counterexample.or_else(|| {
        if eqs.iter().any(matches_declared) {
            None
        } else {
            // The declared strategy is not an equilibrium at all.
            Some(declared)
        }
    });
    Ok(UniquenessReport {
        verified,
        equilibria: eqs,
        counterexample: if verified { None } else { counterexample },
    })
}
