use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{worst_case_instance, AdversaryKind};
use crate::exactnum::{QValue, Rational};
use crate::model::{Hierarchy, Hint, HintKind, Instance, Job};
use crate::policy::PolicyKind;

/// Parameters of the random instance generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    /// Common due date, a positive rational.
    pub d: Rational,
    /// Rational lengths are drawn as `d·k/denominator`, `k ∈ 1..=denominator`.
    pub denominator: u32,
    /// Probability that a job has hierarchy 1.
    pub low_prob: f64,
    /// Probability that a job takes an irrational length instead
    /// (`(√2−1)d`, `2(√2−1)d` or `(√5−1)d/2`). Keep at 0 for the DP oracle.
    pub irrational_rate: f64,
    /// Optionally start some instances from an adversary's worst-case path.
    pub path_seed: Option<PathSeed>,
}

/// Starts an instance, with probability `rate`, from the realized path of
/// `adversary` against `policy`, snapped to the rational grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSeed {
    pub adversary: AdversaryKind,
    pub policy: PolicyKind,
    pub rate: f64,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            d: Rational::one(),
            denominator: 24,
            low_prob: 0.5,
            irrational_rate: 0.0,
            path_seed: None,
        }
    }
}

impl Profile {
    /// Default stress profile for `policy`: rational grid with its matching
    /// adversary path mixed in.
    pub fn near_worst_case(policy: PolicyKind) -> Self {
        Profile {
            path_seed: Some(PathSeed {
                adversary: AdversaryKind::for_policy(policy),
                policy,
                rate: 0.1,
            }),
            ..Profile::default()
        }
    }
}

fn grid_job(rng: &mut ChaCha8Rng, profile: &Profile, d: &QValue) -> QValue {
    if profile.irrational_rate > 0.0 && rng.gen_bool(profile.irrational_rate) {
        let base = match rng.gen_range(0..3) {
            0 => QValue::sqrt2_minus_one(),
            1 => QValue::sqrt2_minus_one().scale(&Rational::from_int(2)),
            _ => QValue::half_sqrt5_minus_one(),
        };
        return &base * d;
    }
    let den = profile.denominator.max(1) as i64;
    let k = rng.gen_range(1..=den);
    d.scale(&Rational::new(k, den).unwrap())
}

/// Snaps `p` (in units of `d = 1`) onto the grid `k/den`, rounding up or
/// down at random and keeping `1 ≤ k ≤ den`.
fn snap(rng: &mut ChaCha8Rng, p: &QValue, den: i64) -> Rational {
    let scaled = p.scale(&Rational::from_int(den));
    let lo = crate::exactnum::q_floor(&scaled);
    let exact = scaled == QValue::rational(Rational::from(lo.clone()));
    let k = if exact || rng.gen_bool(0.5) { lo } else { lo + 1 };
    let k: i64 = k.try_into().unwrap_or(den);
    Rational::new(k.clamp(1, den), den).unwrap()
}

/// Deterministic random instance with `n` jobs and the truthful hint of
/// `hint_kind`.
///
/// For the `pmax*` kinds at least one job is generated (the hint needs a
/// maximum), and the first job attaining the maximum is given the promised
/// hierarchy if no such job exists already.
pub fn random_instance(seed: u64, n: usize, profile: &Profile, hint_kind: HintKind) -> (Instance, Hint) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = QValue::rational(profile.d.clone());
    let n = match hint_kind {
        HintKind::Pmax | HintKind::Pmax1 | HintKind::Pmax2 => n.max(1),
        _ => n,
    };

    let mut jobs = Vec::with_capacity(n);
    if let Some(ps) = profile.path_seed {
        if ps.rate > 0.0 && rng.gen_bool(ps.rate.min(1.0)) {
            let (path, _) = worst_case_instance(ps.adversary, ps.policy).expect("built-in adversaries always complete");
            let den = profile.denominator.max(1) as i64;
            for job in path.jobs.into_iter().take(n) {
                let p = d.scale(&snap(&mut rng, &job.p, den));
                jobs.push(Job::new(p, job.g));
            }
        }
    }
    while jobs.len() < n {
        let g = if rng.gen_bool(profile.low_prob) {
            Hierarchy::Low
        } else {
            Hierarchy::High
        };
        let p = grid_job(&mut rng, profile, &d);
        jobs.push(Job::new(p, g));
    }

    let promised = match hint_kind {
        HintKind::Pmax1 => Some(Hierarchy::Low),
        HintKind::Pmax2 => Some(Hierarchy::High),
        _ => None,
    };
    if let Some(g) = promised {
        let max = jobs.iter().map(|j| j.p.clone()).max().expect("n ≥ 1");
        if !jobs.iter().any(|j| j.g == g && j.p == max) {
            let holders: Vec<usize> = (0..jobs.len()).filter(|&i| jobs[i].p == max).collect();
            let &i = holders.choose(&mut rng).expect("max is attained");
            jobs[i].g = g;
        }
    }

    let instance = Instance::new(d, jobs);
    let hint = Hint::truthful(hint_kind, &instance).expect("pmax kinds have n ≥ 1");
    (instance, hint)
}

/// Like [`random_instance`] with `n` drawn uniformly from `1..=max_n`, on a
/// separate stream of the same seed.
pub fn random_sized_instance(seed: u64, max_n: usize, profile: &Profile, hint_kind: HintKind) -> (Instance, Hint) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let n = rng.gen_range(1..=max_n.max(1));
    random_instance(seed, n, profile, hint_kind)
}
