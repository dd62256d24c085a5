//! Exact offline optimum.
//!
//! Hierarchy-1 jobs are pinned to `M1`, so an offline schedule is fully
//! described by the subset of hierarchy-2 jobs placed on `M2`. With `s` the
//! load of that subset the objective is `min(T − s, d) + min(s, d)`.
//!
//! Two independent routes compute the optimum: exhaustive enumeration of the
//! subsets in the field, and a boolean subset-sum DP over integer-scaled
//! loads for rational instances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{q_min, QValue, Rational};
use crate::model::{self, Instance};

pub const DEFAULT_BRUTEFORCE_CAP: usize = 24;

/// Largest scaled hierarchy-2 total the DP will allocate for.
pub const DP_UNIT_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    #[serde(rename = "c_opt")]
    pub value: QValue,
    /// Indices (into the instance's job list) of the jobs placed on M2.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} hierarchy-2 jobs exceed the brute-force cap of {cap}; use the DP oracle")]
    TooManyJobs { count: usize, cap: usize },
    #[error("instance has irrational values; the DP oracle needs rationals (use brute force)")]
    Irrational,
    #[error("scaled hierarchy-2 total {units} exceeds the DP cap of {DP_UNIT_CAP} units")]
    TooLarge { units: String },
    #[error("due date must be positive")]
    NonPositiveDueDate,
}

fn objective(total: &QValue, s: &QValue, d: &QValue) -> QValue {
    q_min(&(total - s), d) + q_min(s, d)
}

/// Exhaustive search with the default cap.
pub fn optimal_bruteforce(instance: &Instance) -> Result<OracleResult, OracleError> {
    optimal_bruteforce_capped(instance, DEFAULT_BRUTEFORCE_CAP)
}

/// Maximum over all `2^n₂` subsets; ties go to the lexicographically
/// smallest witness (as a sorted index list).
pub fn optimal_bruteforce_capped(instance: &Instance, cap: usize) -> Result<OracleResult, OracleError> {
    if !instance.d.is_positive() {
        return Err(OracleError::NonPositiveDueDate);
    }
    let high = instance.high_indices();
    let cap = cap.min(63);
    if high.len() > cap {
        return Err(OracleError::TooManyJobs { count: high.len(), cap });
    }
    let total = instance.total();
    let d = &instance.d;
    let n = high.len();

    // Gray-code walk: each step flips one job in or out of the subset.
    let mut mask: u64 = 0;
    let mut s = QValue::zero();
    let mut best = objective(&total, &s, d);
    let mut best_mask: u64 = 0;
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let p = &instance.jobs[high[bit]].p;
        s = if mask & (1 << bit) != 0 { &s + p } else { &s - p };
        let value = objective(&total, &s, d);
        match value.cmp(&best) {
            std::cmp::Ordering::Greater => {
                best = value;
                best_mask = mask;
            }
            std::cmp::Ordering::Equal if lex_less(mask, best_mask, n) => best_mask = mask,
            _ => {}
        }
    }
    let witness = (0..n).filter(|&i| best_mask & (1 << i) != 0).map(|i| high[i]).collect();
    Ok(OracleResult { value: best, witness })
}

/// Lexicographic order of the index lists encoded by two masks (bit i =
/// i-th hierarchy-2 job, so index order is bit order).
fn lex_less(a: u64, b: u64, n: usize) -> bool {
    for i in 0..n {
        let (x, y) = (a >> i & 1, b >> i & 1);
        if x != y {
            // First difference at element i. The list holding i is smaller
            // unless the other list has already ended (a proper prefix).
            return if x == 1 { b >> (i + 1) != 0 } else { a >> (i + 1) == 0 };
        }
    }
    false
}

struct Scaled {
    scale: BigInt,
    d: BigInt,
    total: BigInt,
    weights: Vec<(usize, u64)>,
    high_total: u64,
}

fn scale_instance(instance: &Instance) -> Result<Scaled, OracleError> {
    if !instance.is_rational() {
        return Err(OracleError::Irrational);
    }
    let d = instance.d.a();
    if d.signum() <= 0 {
        return Err(OracleError::NonPositiveDueDate);
    }
    let mut scale = d.denom();
    for job in &instance.jobs {
        scale = scale.lcm(&job.p.a().denom());
    }
    let to_units = |r: &Rational| -> BigInt { r.numer() * (&scale / r.denom()) };
    let too_large = |units: &BigInt| OracleError::TooLarge {
        units: units.to_string(),
    };

    let mut high_total = BigInt::zero();
    let mut total = BigInt::zero();
    let mut weights = Vec::new();
    for (i, job) in instance.jobs.iter().enumerate() {
        let w = to_units(job.p.a());
        total += &w;
        if job.g == model::Hierarchy::High {
            high_total += &w;
            weights.push((i, w));
        }
    }
    let cap = BigInt::from(DP_UNIT_CAP);
    if high_total > cap {
        return Err(too_large(&high_total));
    }
    let weights = weights
        .into_iter()
        .map(|(i, w)| (i, w.to_u64().expect("bounded by the cap")))
        .collect();
    Ok(Scaled {
        d: to_units(d),
        scale,
        total,
        weights,
        high_total: high_total.to_u64().unwrap(),
    })
}

fn best_load(sc: &Scaled, reachable: impl Fn(u64) -> bool) -> (BigInt, u64) {
    // Smallest reachable load wins ties.
    if let (Some(t), Some(d)) = (sc.total.to_i128(), sc.d.to_i128()) {
        let mut best = -1i128;
        let mut best_s = 0;
        for s in (0..=sc.high_total).filter(|&s| reachable(s)) {
            let v = (t - s as i128).min(d) + (s as i128).min(d);
            if v > best {
                best = v;
                best_s = s;
            }
        }
        return (BigInt::from(best), best_s);
    }
    let d = &sc.d;
    let mut best = BigInt::from(-1);
    let mut best_s = 0;
    for s in (0..=sc.high_total).filter(|&s| reachable(s)) {
        let sb = BigInt::from(s);
        let v = (&sc.total - &sb).min(d.clone()) + sb.min(d.clone());
        if v > best {
            best = v;
            best_s = s;
        }
    }
    (best, best_s)
}

fn unscale(units: BigInt, scale: &BigInt) -> QValue {
    QValue::rational(Rational::from_big(units, scale.clone()).expect("scale is positive"))
}

/// Optimum of a rational instance by subset-sum reachability over the
/// integer-scaled hierarchy-2 loads.
pub fn optimal_dp(instance: &Instance) -> Result<QValue, OracleError> {
    let sc = scale_instance(instance)?;
    let len = sc.high_total as usize + 1;
    let mut bits = vec![0u64; len.div_ceil(64)];
    bits[0] = 1;
    for &(_, w) in &sc.weights {
        shift_or(&mut bits, w as usize);
    }
    let (best, _) = best_load(&sc, |s| bits[s as usize / 64] >> (s % 64) & 1 == 1);
    Ok(unscale(best, &sc.scale))
}

/// `bits |= bits << shift`, truncated to the current length.
fn shift_or(bits: &mut [u64], shift: usize) {
    let (words, rem) = (shift / 64, shift % 64);
    for i in (0..bits.len()).rev() {
        if i < words {
            break;
        }
        let src = i - words;
        let mut v = bits[src] << rem;
        if rem != 0 && src > 0 {
            v |= bits[src - 1] >> (64 - rem);
        }
        bits[i] |= v;
    }
}

/// DP that also reconstructs one optimal subset. Uses a `u32` per scaled
/// unit, so prefer [`optimal_dp`] when only the value is needed.
pub fn optimal_dp_witness(instance: &Instance) -> Result<OracleResult, OracleError> {
    let sc = scale_instance(instance)?;
    const UNREACHED: u32 = u32::MAX;
    const ORIGIN: u32 = u32::MAX - 1;
    let len = sc.high_total as usize + 1;
    // from[s] = position in `weights` of the job that first reached load s
    let mut from = vec![UNREACHED; len];
    from[0] = ORIGIN;
    for (k, &(_, w)) in sc.weights.iter().enumerate() {
        let w = w as usize;
        for s in (w..len).rev() {
            if from[s] == UNREACHED && from[s - w] != UNREACHED {
                from[s] = k as u32;
            }
        }
    }
    let (best, best_s) = best_load(&sc, |s| from[s as usize] != UNREACHED);
    let mut witness = Vec::new();
    let mut s = best_s as usize;
    while from[s] != ORIGIN {
        let (idx, w) = sc.weights[from[s] as usize];
        witness.push(idx);
        s -= w as usize;
    }
    witness.sort_unstable();
    Ok(OracleResult {
        value: unscale(best, &sc.scale),
        witness,
    })
}

/// Brute force (with its lexicographic tie-break) while the hierarchy-2
/// count is within the default cap, the witness DP beyond it.
pub fn optimal(instance: &Instance) -> Result<OracleResult, OracleError> {
    if instance.high_indices().len() <= DEFAULT_BRUTEFORCE_CAP {
        return optimal_bruteforce(instance);
    }
    optimal_dp_witness(instance)
}

/// Optimum value only, preferring the fast DP route.
pub fn optimal_value(instance: &Instance) -> Result<QValue, OracleError> {
    match optimal_dp(instance) {
        Ok(v) => Ok(v),
        Err(OracleError::Irrational | OracleError::TooLarge { .. }) => optimal_bruteforce(instance).map(|r| r.value),
        Err(e) => Err(e),
    }
}

/// `c_opt ≤ min(T, 2d)` and `c_opt ≤ d + T/2`, exactly.
pub fn opt_sanity(instance: &Instance, c_opt: &QValue) -> bool {
    let t = instance.total();
    c_opt <= &model::lemma1_bound(&t, &instance.d) && c_opt <= &model::opt_weak_bound(&t, &instance.d)
}

impl OracleResult {
    pub fn from_value(value: QValue) -> Self {
        OracleResult {
            value,
            witness: Vec::new(),
        }
    }
}
