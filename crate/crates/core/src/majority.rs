//! Exact majority-cheating probabilities over colluding groups.
//!
//! `P_C` is the probability that the workers returning the fabricated answer
//! hold a strict majority of the `n` (odd) individual answers. For
//! heterogeneous groups it is the sum over all cheat/honest splits of the
//! groups whose cheating sides cover more than `n/2` workers. The
//! implementation convolves group-by-group over the cheating-worker count,
//! which computes the identical quantity in `O(l * n)` time instead of `2^l`
//! subset enumeration (the subset enumeration survives in [`crate::oracle`]
//! as an independent cross-check).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::payoff::{check_probability, GroupPartition};

/// A majority-probability query: group partition plus one cheating
/// probability per group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityQuery {
    pub partition: GroupPartition,
    pub pc_per_group: Vec<f64>,
}

impl MajorityQuery {
    pub fn new(partition: GroupPartition, pc_per_group: Vec<f64>) -> Result<Self> {
        if partition.len() != pc_per_group.len() {
            return Err(Error::MismatchedLengths(format!(
                "{} groups but {} probabilities",
                partition.len(),
                pc_per_group.len()
            )));
        }
        for &p in &pc_per_group {
            check_probability("pc", p)?;
        }
        Ok(Self {
            partition,
            pc_per_group,
        })
    }
}

/// Distribution of the total cheating-worker count for independent group
/// coins: entry `k` is the probability that exactly `k` workers cheat.
pub fn cheater_count_distribution(sizes: &[u32], pc_per_group: &[f64]) -> Vec<f64> {
    let n: usize = sizes.iter().map(|&s| s as usize).sum();
    let mut dist = vec![0.0; n + 1];
    dist[0] = 1.0;
    let mut filled = 0usize;
    for (&size, &pc) in sizes.iter().zip(pc_per_group) {
        let size = size as usize;
        // In-place, iterating downward so each group is applied once.
        for k in (0..=filled).rev() {
            let mass = dist[k];
            if mass == 0.0 {
                continue;
            }
            dist[k] = mass * (1.0 - pc);
            dist[k + size] += mass * pc;
        }
        filled += size;
    }
    dist
}

/// Probability that the majority of individual answers is the fabricated one.
pub fn majority_cheat_prob(query: &MajorityQuery) -> f64 {
    let n = query.partition.total_workers();
    let dist = cheater_count_distribution(query.partition.sizes(), &query.pc_per_group);
    let threshold = (n / 2 + 1) as usize;
    let p: f64 = dist[threshold..].iter().sum();
    p.clamp(0.0, 1.0)
}

/// `P_C` for `n` independent workers each cheating with probability `pc`:
/// the binomial tail over counts `k > n/2`.
///
/// Stable for `n` up to around `10^4`: the summation starts from the
/// smallest majority count via a log-space head term and a multiplicative
/// recurrence, with the complement identity used for `pc > 1/2` so the head
/// term cannot underflow ahead of larger terms.
pub fn majority_cheat_prob_iid(n: u64, pc: f64) -> Result<f64> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::EvenWorkerCount(n));
    }
    check_probability("pc", pc)?;
    if pc == 0.0 {
        return Ok(0.0);
    }
    if pc == 1.0 {
        return Ok(1.0);
    }
    if pc > 0.5 {
        // P(X >= (n+1)/2 | p) = 1 - P(X' >= (n+1)/2 | 1-p) with X' = n - X.
        return Ok((1.0 - binomial_tail(n, 1.0 - pc)).clamp(0.0, 1.0));
    }
    Ok(binomial_tail(n, pc).clamp(0.0, 1.0))
}

/// Sum of `C(n,k) p^k (1-p)^(n-k)` for `k` from `(n+1)/2` to `n`, `p <= 1/2`.
fn binomial_tail(n: u64, p: f64) -> f64 {
    let k0 = n / 2 + 1;
    // ln C(n, k0) = sum_{i=1..k0} ln((n - k0 + i) / i)
    let mut ln_c = 0.0;
    for i in 1..=k0 {
        ln_c += (((n - k0 + i) as f64) / (i as f64)).ln();
    }
    let q = 1.0 - p;
    let mut term = (ln_c + (k0 as f64) * p.ln() + ((n - k0) as f64) * q.ln()).exp();
    let ratio = p / q;
    let mut sum = term;
    for k in k0..n {
        term *= ((n - k) as f64) / ((k + 1) as f64) * ratio;
        sum += term;
    }
    sum
}

/// Result of checking that adding two workers cannot increase the majority
/// cheating probability when `pc <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub p_n: f64,
    pub p_n_plus_2: f64,
    pub holds: bool,
}

/// Checks `P_C(n+2) <= P_C(n)` for iid workers with `pc <= 1/2`.
///
/// This holds for every valid input; the function exists as a test predicate
/// rather than as a computation whose outcome is in doubt.
pub fn majority_monotonicity(n: u64, pc: f64) -> Result<MonotonicityCheck> {
    if pc > 0.5 {
        return Err(Error::CheatProbTooLarge(pc));
    }
    let p_n = majority_cheat_prob_iid(n, pc)?;
    let p_n_plus_2 = majority_cheat_prob_iid(n + 2, pc)?;
    Ok(MonotonicityCheck {
        p_n,
        p_n_plus_2,
        holds: p_n_plus_2 <= p_n + 1e-12,
    })
}
