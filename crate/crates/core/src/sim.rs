//! Seeded Monte Carlo execution of the master protocol with colluding
//! groups.
//!
//! Per trial: each group tosses one coin, all cheating groups submit the
//! same bogus answer, and the master verifies with probability `pv`. On
//! verification honest workers are rewarded and cheaters punished, and the
//! correct result is obtained iff at least one group was honest; otherwise
//! the majority answer is accepted and the reward model applied. The task
//! cost is charged once per honest group.
//!
//! Reproducibility: one root seed, one counter-derived random stream per
//! trial, and a fixed chunked reduction, so reports are bit-identical for a
//! given configuration regardless of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanism::MechanismPlan;
use crate::payoff::{
    check_probability, GroupPartition, PayoffParameters, StrategyProfile, UnverifiedReward,
};

const CHUNK_TRIALS: u64 = 4096;
const MAX_TRIALS: u64 = 1 << 31;

/// Force one group to a fixed cheating probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub group: usize,
    pub forced_pc: f64,
}

/// Full simulation input. `params` are the effective payoff values (with
/// any designer-tuned parameters already applied); the plan supplies the
/// game and reward model, the strategy the probabilities actually played.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: PayoffParameters,
    pub plan: MechanismPlan,
    pub partition: GroupPartition,
    pub strategy: StrategyProfile,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deviation: Option<Deviation>,
}

impl SimConfig {
    fn check(&self) -> Result<()> {
        self.params.check()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.trials > MAX_TRIALS {
            return Err(Error::Config(format!(
                "trials capped at {MAX_TRIALS} to keep the error estimates stable"
            )));
        }
        if self.strategy.pc_per_group.len() != self.partition.len() {
            return Err(Error::MismatchedLengths(format!(
                "{} groups but {} cheating probabilities",
                self.partition.len(),
                self.strategy.pc_per_group.len()
            )));
        }
        if let Some(d) = &self.deviation {
            if d.group >= self.partition.len() {
                return Err(Error::Config(format!(
                    "deviation group {} out of range",
                    d.group
                )));
            }
            check_probability("forced_pc", d.forced_pc)?;
        }
        check_probability("pv", self.strategy.pv)?;
        Ok(())
    }

    fn effective_pcs(&self) -> Vec<f64> {
        let mut pcs = self.strategy.pc_per_group.clone();
        if let Some(d) = &self.deviation {
            pcs[d.group] = d.forced_pc;
        }
        pcs
    }
}

/// Mean group utility with a three-standard-error radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupStat {
    pub mean_utility: f64,
    pub radius: f64,
}

/// Aggregated simulation outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Fraction of trials in which a wrong answer was accepted (only
    /// possible without verification).
    pub empirical_p_wrong: f64,
    /// Fraction of trials in which the master ended up with the correct
    /// result, by accepting an honest majority or by verifying with at
    /// least one honest group.
    pub empirical_p_correct_accept: f64,
    pub mean_u_master: f64,
    pub u_master_radius: f64,
    pub worker_groups: Vec<GroupStat>,
    pub trials: u64,
    pub seed: u64,
}

/// Estimated utility change of a unilateral deviation, from paired runs
/// under common random numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationEstimate {
    pub delta: f64,
    pub radius: f64,
    /// The pure cheating probability the group deviated to.
    pub alternative_pc: f64,
    pub trials: u64,
}

/// Master-side result of one fully determined trial.
struct TrialMasterSide {
    u_master: f64,
    wrong_accept: bool,
    correct: bool,
    rewards_paid: u64,
    rewards_received: u64,
    wct_charges: u64,
}

/// Plays out one trial with decided coins, accumulating each group's
/// utility into `u_groups`.
fn play_outcome(
    params: &PayoffParameters,
    reward: UnverifiedReward,
    sizes: &[u32],
    cheat: &[bool],
    verify: bool,
    u_groups: &mut [f64],
) -> TrialMasterSide {
    let p = params;
    let n: u64 = sizes.iter().map(|&s| u64::from(s)).sum();
    let cheat_workers: u64 = sizes
        .iter()
        .zip(cheat)
        .filter(|&(_, &c)| c)
        .map(|(&s, _)| u64::from(s))
        .sum();
    let majority_cheats = cheat_workers * 2 > n;

    let mut side = TrialMasterSide {
        u_master: 0.0,
        wrong_accept: false,
        correct: false,
        rewards_paid: 0,
        rewards_received: 0,
        wct_charges: 0,
    };

    // Task cost, once per honest group.
    for (j, &c) in cheat.iter().enumerate() {
        if !c {
            u_groups[j] -= p.wct;
            side.wct_charges += 1;
        }
    }

    if verify {
        side.u_master -= p.mcv;
        let mut any_honest = false;
        for (j, &c) in cheat.iter().enumerate() {
            let k = f64::from(sizes[j]);
            if c {
                u_groups[j] -= k * p.wpc;
            } else {
                any_honest = true;
                u_groups[j] += k * p.wba;
                side.rewards_received += u64::from(sizes[j]);
                side.u_master -= k * p.mca;
                side.rewards_paid += u64::from(sizes[j]);
            }
        }
        if any_honest {
            side.u_master += p.mbr;
            side.correct = true;
        }
    } else {
        if majority_cheats {
            side.u_master -= p.mpw;
            side.wrong_accept = true;
        } else {
            side.u_master += p.mbr;
            side.correct = true;
        }
        let rewarded = |is_cheater: bool| match reward {
            UnverifiedReward::All => true,
            UnverifiedReward::None => false,
            UnverifiedReward::MajoritySide => is_cheater == majority_cheats,
        };
        for (j, &c) in cheat.iter().enumerate() {
            if rewarded(c) {
                let k = f64::from(sizes[j]);
                u_groups[j] += k * p.wba;
                side.rewards_received += u64::from(sizes[j]);
                side.u_master -= k * p.mca;
                side.rewards_paid += u64::from(sizes[j]);
            }
        }
    }
    side
}

#[derive(Clone)]
struct Accum {
    trials: u64,
    sum_um: f64,
    sq_um: f64,
    sum_uw: Vec<f64>,
    sq_uw: Vec<f64>,
    wrong: u64,
    correct: u64,
    rewards_paid: u64,
    rewards_received: u64,
    wct_charges: u64,
    honest_group_events: u64,
}

impl Accum {
    fn new(groups: usize) -> Self {
        Self {
            trials: 0,
            sum_um: 0.0,
            sq_um: 0.0,
            sum_uw: vec![0.0; groups],
            sq_uw: vec![0.0; groups],
            wrong: 0,
            correct: 0,
            rewards_paid: 0,
            rewards_received: 0,
            wct_charges: 0,
            honest_group_events: 0,
        }
    }

    fn merge(&mut self, other: &Accum) {
        self.trials += other.trials;
        self.sum_um += other.sum_um;
        self.sq_um += other.sq_um;
        for (a, b) in self.sum_uw.iter_mut().zip(&other.sum_uw) {
            *a += b;
        }
        for (a, b) in self.sq_uw.iter_mut().zip(&other.sq_uw) {
            *a += b;
        }
        self.wrong += other.wrong;
        self.correct += other.correct;
        self.rewards_paid += other.rewards_paid;
        self.rewards_received += other.rewards_received;
        self.wct_charges += other.wct_charges;
        self.honest_group_events += other.honest_group_events;
    }
}

fn mean_and_radius(sum: f64, sq: f64, trials: u64) -> (f64, f64) {
    let t = trials as f64;
    let mean = sum / t;
    if trials < 2 {
        return (mean, 0.0);
    }
    let var = ((sq - t * mean * mean) / (t - 1.0)).max(0.0);
    (mean, 3.0 * (var / t).sqrt())
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs the protocol for the configured number of trials and aggregates the
/// empirical distribution. Identical configurations (including the seed)
/// produce bit-identical reports.
pub fn run_protocol(cfg: &SimConfig) -> Result<SimReport> {
    let totals = run_accumulate(cfg)?;
    debug_assert_eq!(totals.rewards_paid, totals.rewards_received);
    debug_assert_eq!(totals.wct_charges, totals.honest_group_events);
    let (mean_um, rad_um) = mean_and_radius(totals.sum_um, totals.sq_um, totals.trials);
    let worker_groups = totals
        .sum_uw
        .iter()
        .zip(&totals.sq_uw)
        .map(|(&s, &q)| {
            let (mean_utility, radius) = mean_and_radius(s, q, totals.trials);
            GroupStat {
                mean_utility,
                radius,
            }
        })
        .collect();
    Ok(SimReport {
        empirical_p_wrong: totals.wrong as f64 / totals.trials as f64,
        empirical_p_correct_accept: totals.correct as f64 / totals.trials as f64,
        mean_u_master: mean_um,
        u_master_radius: rad_um,
        worker_groups,
        trials: totals.trials,
        seed: cfg.seed,
    })
}

fn run_accumulate(cfg: &SimConfig) -> Result<Accum> {
    cfg.check()?;
    let pcs = cfg.effective_pcs();
    let sizes = cfg.partition.sizes();
    let groups = sizes.len();
    let reward = cfg.plan.model.unverified_reward(cfg.plan.game);
    let pv = cfg.strategy.pv;

    let chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
    let partials: Vec<Accum> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK_TRIALS;
            let hi = (lo + CHUNK_TRIALS).min(cfg.trials);
            let mut acc = Accum::new(groups);
            let mut cheat = vec![false; groups];
            let mut u_groups = vec![0.0f64; groups];
            for trial in lo..hi {
                let mut rng = trial_rng(cfg.seed, trial);
                for (j, flag) in cheat.iter_mut().enumerate() {
                    *flag = rng.gen::<f64>() < pcs[j];
                }
                let verify = rng.gen::<f64>() < pv;
                acc.honest_group_events += cheat.iter().filter(|&&c| !c).count() as u64;
                u_groups.iter_mut().for_each(|u| *u = 0.0);
                let side = play_outcome(&cfg.params, reward, sizes, &cheat, verify, &mut u_groups);
                acc.trials += 1;
                acc.sum_um += side.u_master;
                acc.sq_um += side.u_master * side.u_master;
                for (j, &u) in u_groups.iter().enumerate() {
                    acc.sum_uw[j] += u;
                    acc.sq_uw[j] += u * u;
                }
                acc.wrong += u64::from(side.wrong_accept);
                acc.correct += u64::from(side.correct);
                acc.rewards_paid += side.rewards_paid;
                acc.rewards_received += side.rewards_received;
                acc.wct_charges += side.wct_charges;
            }
            acc
        })
        .collect();

    let mut totals = Accum::new(groups);
    for p in &partials {
        totals.merge(p);
    }
    Ok(totals)
}

/// Paired estimate of the utility change for `group` when its cheating
/// probability is forced to `forced_pc`, using common random numbers: both
/// worlds consume the identical coin draws, so a deviation to the same
/// strategy yields exactly zero.
pub fn paired_delta(cfg: &SimConfig, group: usize, forced_pc: f64) -> Result<DeviationEstimate> {
    cfg.check()?;
    if group >= cfg.partition.len() {
        return Err(Error::Config(format!("group {group} out of range")));
    }
    check_probability("forced_pc", forced_pc)?;
    let pcs = cfg.effective_pcs();
    let sizes = cfg.partition.sizes();
    let groups = sizes.len();
    let reward = cfg.plan.model.unverified_reward(cfg.plan.game);
    let pv = cfg.strategy.pv;

    let chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
    let partials: Vec<(u64, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK_TRIALS;
            let hi = (lo + CHUNK_TRIALS).min(cfg.trials);
            let mut count = 0u64;
            let mut sum = 0.0f64;
            let mut sq = 0.0f64;
            let mut base = vec![false; groups];
            let mut dev = vec![false; groups];
            let mut u_base = vec![0.0f64; groups];
            let mut u_dev = vec![0.0f64; groups];
            for trial in lo..hi {
                let mut rng = trial_rng(cfg.seed, trial);
                for j in 0..groups {
                    let draw = rng.gen::<f64>();
                    base[j] = draw < pcs[j];
                    dev[j] = if j == group {
                        draw < forced_pc
                    } else {
                        base[j]
                    };
                }
                let verify = rng.gen::<f64>() < pv;
                u_base.iter_mut().for_each(|u| *u = 0.0);
                u_dev.iter_mut().for_each(|u| *u = 0.0);
                play_outcome(&cfg.params, reward, sizes, &base, verify, &mut u_base);
                play_outcome(&cfg.params, reward, sizes, &dev, verify, &mut u_dev);
                let d = u_dev[group] - u_base[group];
                count += 1;
                sum += d;
                sq += d * d;
            }
            (count, sum, sq)
        })
        .collect();

    let mut count = 0u64;
    let mut sum = 0.0;
    let mut sq = 0.0;
    for (c, s, q) in partials {
        count += c;
        sum += s;
        sq += q;
    }
    let (delta, radius) = mean_and_radius(sum, sq, count);
    Ok(DeviationEstimate {
        delta,
        radius,
        alternative_pc: forced_pc,
        trials: count,
    })
}

/// Estimated gain of the best pure unilateral deviation for `group`: the
/// opposite pure strategy when the baseline is pure, otherwise the better of
/// the two pure strategies.
pub fn deviation_gain(cfg: &SimConfig, group: usize) -> Result<DeviationEstimate> {
    if group >= cfg.partition.len() {
        return Err(Error::Config(format!("group {group} out of range")));
    }
    let baseline = cfg.effective_pcs()[group];
    let candidates: &[f64] = if baseline == 0.0 {
        &[1.0]
    } else if baseline == 1.0 {
        &[0.0]
    } else {
        &[0.0, 1.0]
    };
    let mut best: Option<DeviationEstimate> = None;
    for &alt in candidates {
        let est = paired_delta(cfg, group, alt)?;
        if best.as_ref().is_none_or(|b| est.delta > b.delta) {
            best = Some(est);
        }
    }
    Ok(best.expect("at least one candidate"))
}
