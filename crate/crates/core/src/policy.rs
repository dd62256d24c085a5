//! The four online/semi-online assignment rules, one job at a time.
//!
//! Hierarchy-1 jobs always go to `M1`. Hierarchy-2 jobs are routed by the
//! kind-specific rule; comparison strictness in each rule is deliberate and
//! exercised at equality by the tests below.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{QValue, Rational};
use crate::model::{self, Hierarchy, Hint, HintKind, Instance, Job, MachineId, Schedule, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    /// Pure online, competitive ratio √2.
    Alg1,
    /// Total processing time known, ratio 4/3.
    Alg2,
    /// Largest job known to be hierarchy 1, ratio 6/5.
    Alg3,
    /// Largest job known to be hierarchy 2, ratio √5 − 1.
    Alg4,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 4] = [PolicyKind::Alg1, PolicyKind::Alg2, PolicyKind::Alg3, PolicyKind::Alg4];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Alg1 => "alg1",
            PolicyKind::Alg2 => "alg2",
            PolicyKind::Alg3 => "alg3",
            PolicyKind::Alg4 => "alg4",
        }
    }

    /// Proven competitive ratio `r`: `C^OPT ≤ r·C^A` on every valid instance.
    pub fn competitive_ratio(self) -> QValue {
        match self {
            PolicyKind::Alg1 => QValue::sqrt2(),
            PolicyKind::Alg2 => QValue::ratio(4, 3),
            PolicyKind::Alg3 => QValue::ratio(6, 5),
            PolicyKind::Alg4 => QValue::sqrt5_minus_one(),
        }
    }

    /// Hint kind the policy needs, or `None` if it takes any hint.
    pub fn required_hint(self) -> Option<HintKind> {
        match self {
            PolicyKind::Alg1 => None,
            PolicyKind::Alg2 => Some(HintKind::Total),
            PolicyKind::Alg3 => Some(HintKind::Pmax1),
            PolicyKind::Alg4 => Some(HintKind::Pmax2),
        }
    }

    /// Hint kind used when generating instances for this policy.
    pub fn natural_hint(self) -> HintKind {
        self.required_hint().unwrap_or(HintKind::None)
    }

    pub fn accepts(self, hint: &Hint) -> bool {
        self.required_hint().is_none_or(|k| hint.kind() == k)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown policy `{s}` (expected alg1..alg4)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("{kind} requires a `{required}` hint, got `{got}`")]
    HintMismatch {
        kind: PolicyKind,
        required: HintKind,
        got: HintKind,
    },
    #[error("due date must be positive, got {0}")]
    NonPositiveDueDate(QValue),
    #[error("job {job} has p outside (0, d]")]
    InvalidJob { job: Box<Job> },
    #[error("job {job} exceeds the declared p_max {p_max}")]
    HintViolation { job: Box<Job>, p_max: Box<QValue> },
}

/// `L2 + p ≤ d` → M2; else `L2 ≤ (√2−1)d` → M2; else M1.
pub fn alg1_rule(l2: &QValue, d: &QValue, p: &QValue) -> MachineId {
    if &(l2 + p) <= d || l2 <= &(QValue::sqrt2_minus_one() * d) {
        MachineId::M2
    } else {
        MachineId::M1
    }
}

/// Returns the decision and the new commitment latch.
///
/// Once committed every job goes to M1. Otherwise `T−L2−p > 5T/8` → M2;
/// `T−L2−p ≥ L2` → M2 and commit; else M1 and commit.
pub fn alg2_rule(t: &QValue, l2: &QValue, committed: bool, p: &QValue) -> (MachineId, bool) {
    if committed {
        return (MachineId::M1, true);
    }
    let rest = &(t - l2) - p;
    if rest > t.scale(&Rational::new(5, 8).unwrap()) {
        (MachineId::M2, false)
    } else if &rest >= l2 {
        (MachineId::M2, true)
    } else {
        (MachineId::M1, true)
    }
}

/// `L2 < 2d/3` → M2; else M1.
pub fn alg3_rule(l2: &QValue, d: &QValue, _p: &QValue) -> MachineId {
    if l2 < &d.scale(&Rational::new(2, 3).unwrap()) {
        MachineId::M2
    } else {
        MachineId::M1
    }
}

/// Returns the decision and the new "largest job seen" flag.
///
/// Until the first job of length `p_max` arrives, M2 keeps `p_max` of its
/// `(√5−1)d` budget in reserve; that job itself always goes to M2.
pub fn alg4_rule(l2: &QValue, seen_largest: bool, p: &QValue, p_max: &QValue, d: &QValue) -> (MachineId, bool) {
    let cap = QValue::sqrt5_minus_one() * d;
    let m = |fits: bool| if fits { MachineId::M2 } else { MachineId::M1 };
    if seen_largest {
        (m((l2 + p) <= cap), true)
    } else if p != p_max {
        (m((&(l2 + p_max) + p) <= cap), false)
    } else {
        (MachineId::M2, true)
    }
}

/// Online state of one policy run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyState {
    kind: PolicyKind,
    d: QValue,
    l1: QValue,
    l2: QValue,
    hint: Hint,
    committed_m1: bool,
    seen_largest: bool,
}

impl PolicyState {
    pub fn new(kind: PolicyKind, d: QValue, hint: Hint) -> Result<Self, PolicyError> {
        if let Some(required) = kind.required_hint() {
            if hint.kind() != required {
                return Err(PolicyError::HintMismatch {
                    kind,
                    required,
                    got: hint.kind(),
                });
            }
        }
        if !d.is_positive() {
            return Err(PolicyError::NonPositiveDueDate(d));
        }
        Ok(PolicyState {
            kind,
            d,
            l1: QValue::zero(),
            l2: QValue::zero(),
            hint,
            committed_m1: false,
            seen_largest: false,
        })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn d(&self) -> &QValue {
        &self.d
    }

    pub fn l1(&self) -> &QValue {
        &self.l1
    }

    pub fn l2(&self) -> &QValue {
        &self.l2
    }

    pub fn hint(&self) -> &Hint {
        &self.hint
    }

    pub fn committed_m1(&self) -> bool {
        self.committed_m1
    }

    pub fn seen_largest(&self) -> bool {
        self.seen_largest
    }

    /// Decides the machine for `job` and updates loads and flags.
    pub fn step(&mut self, job: &Job) -> Result<MachineId, PolicyError> {
        if !job.p.is_positive() || job.p > self.d {
            return Err(PolicyError::InvalidJob {
                job: Box::new(job.clone()),
            });
        }
        if let (PolicyKind::Alg3 | PolicyKind::Alg4, Some(p_max)) = (self.kind, self.hint.value()) {
            if &job.p > p_max {
                return Err(PolicyError::HintViolation {
                    job: Box::new(job.clone()),
                    p_max: Box::new(p_max.clone()),
                });
            }
        }
        let machine = if job.g == Hierarchy::Low {
            MachineId::M1
        } else {
            self.route_high(&job.p)
        };
        match machine {
            MachineId::M1 => self.l1 = &self.l1 + &job.p,
            MachineId::M2 => self.l2 = &self.l2 + &job.p,
        }
        Ok(machine)
    }

    fn route_high(&mut self, p: &QValue) -> MachineId {
        let value = || self.hint.value().cloned().expect("hint kind checked at construction");
        match self.kind {
            PolicyKind::Alg1 => alg1_rule(&self.l2, &self.d, p),
            PolicyKind::Alg2 => {
                let (m, committed) = alg2_rule(&value(), &self.l2, self.committed_m1, p);
                self.committed_m1 = committed;
                m
            }
            PolicyKind::Alg3 => alg3_rule(&self.l2, &self.d, p),
            PolicyKind::Alg4 => {
                let (m, seen) = alg4_rule(&self.l2, self.seen_largest, p, &value(), &self.d);
                self.seen_largest = seen;
                m
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("invalid instance: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

/// Feeds the jobs through a fresh policy without validating the hint first.
/// Hint truthfulness is the caller's concern.
pub fn simulate(kind: PolicyKind, instance: &Instance, hint: &Hint) -> Result<(Schedule, QValue), PolicyError> {
    let mut state = PolicyState::new(kind, instance.d.clone(), hint.clone())?;
    let assignments = instance
        .jobs
        .iter()
        .map(|j| state.step(j))
        .collect::<Result<Vec<_>, _>>()?;
    let schedule = Schedule {
        assignments,
        l1: state.l1,
        l2: state.l2,
    };
    let c_alg = model::total_early_work(&schedule.l1, &schedule.l2, &instance.d)
        .expect("loads are sums of positive jobs and d > 0");
    Ok((schedule, c_alg))
}

/// Validates, then runs `kind` over the arrival sequence.
pub fn run_policy(kind: PolicyKind, instance: &Instance, hint: &Hint) -> Result<(Schedule, QValue), RunError> {
    if let Some(required) = kind.required_hint() {
        if hint.kind() != required {
            return Err(PolicyError::HintMismatch {
                kind,
                required,
                got: hint.kind(),
            }
            .into());
        }
    }
    let violations = model::validate(instance, hint);
    if !violations.is_empty() {
        return Err(RunError::Invalid(violations));
    }
    Ok(simulate(kind, instance, hint)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use MachineId::*;

    fn r(n: i64, d: i64) -> QValue {
        QValue::ratio(n, d)
    }

    fn one() -> QValue {
        QValue::one()
    }

    #[test]
    fn init() {
        let s = PolicyState::new(PolicyKind::Alg1, one(), Hint::NoInfo).unwrap();
        assert!(s.l2().is_zero());
        let s = PolicyState::new(PolicyKind::Alg2, one(), Hint::TotalT(r(2, 1))).unwrap();
        assert!(s.l1().is_zero() && s.l2().is_zero() && !s.committed_m1());
        assert!(matches!(
            PolicyState::new(PolicyKind::Alg4, one(), Hint::PMax1(r(1, 2))),
            Err(PolicyError::HintMismatch { .. })
        ));
        assert!(PolicyState::new(PolicyKind::Alg1, one(), Hint::PMax2(r(1, 2))).is_ok());
    }

    #[test]
    fn alg1_examples() {
        let s2m1 = QValue::sqrt2_minus_one();
        assert_eq!(alg1_rule(&QValue::zero(), &one(), &s2m1), M2);
        // second branch at equality L2 = (√2−1)d
        assert_eq!(alg1_rule(&s2m1, &one(), &one()), M2);
        assert_eq!(alg1_rule(&QValue::sqrt2(), &one(), &r(1, 2)), M1);
    }

    #[test]
    fn alg2_examples() {
        let t = r(2, 1);
        assert_eq!(alg2_rule(&t, &QValue::zero(), false, &r(1, 2)), (M2, false));
        assert_eq!(alg2_rule(&t, &r(1, 2), false, &one()), (M2, true));
        assert_eq!(alg2_rule(&t, &r(3, 2), true, &r(1, 2)), (M1, true));
        // first branch is strict: T−L2−p = 5T/8 falls through
        assert_eq!(alg2_rule(&r(8, 1), &QValue::zero(), false, &r(3, 1)), (M2, true));
        // T−L2−p < L2 → M1 and commit
        assert_eq!(alg2_rule(&t, &one(), false, &r(1, 2)), (M1, true));
    }

    #[test]
    fn alg3_examples() {
        assert_eq!(alg3_rule(&QValue::zero(), &one(), &r(1, 3)), M2);
        assert_eq!(alg3_rule(&r(2, 3), &one(), &r(2, 3)), M1);
        assert_eq!(alg3_rule(&r(1, 3), &one(), &r(2, 3)), M2);
    }

    #[test]
    fn alg4_examples() {
        let g = QValue::half_sqrt5_minus_one();
        assert_eq!(alg4_rule(&QValue::zero(), false, &g, &g, &one()), (M2, true));
        assert_eq!(alg4_rule(&g, true, &g, &g, &one()), (M2, true));
        assert_eq!(alg4_rule(&one(), false, &r(1, 4), &r(1, 2), &one()), (M1, false));
        // reserve branch at equality: L2 + 1/2 + 1/4 = √5 − 1
        let l2 = &QValue::sqrt5() - &r(7, 4);
        assert_eq!(alg4_rule(&l2, false, &r(1, 4), &r(1, 2), &one()), (M2, false));
        let l2 = &l2 + &r(1, 1_000_000);
        assert_eq!(alg4_rule(&l2, false, &r(1, 4), &r(1, 2), &one()), (M1, false));
    }

    #[test]
    fn alg4_later_ties_use_post_largest_rule() {
        let p = r(1, 2);
        let mut s = PolicyState::new(PolicyKind::Alg4, one(), Hint::PMax2(p.clone())).unwrap();
        assert_eq!(s.step(&Job::high(p.clone())).unwrap(), M2);
        assert!(s.seen_largest());
        // post-largest rule: 1/2 + 1/2 ≤ √5 − 1, then 1 + 1/2 > √5 − 1
        assert_eq!(s.step(&Job::high(p.clone())).unwrap(), M2);
        assert!(s.seen_largest());
        assert_eq!(s.step(&Job::high(p.clone())).unwrap(), M1);
    }

    #[test]
    fn alg2_latch_sticks() {
        let mut s = PolicyState::new(PolicyKind::Alg2, one(), Hint::TotalT(r(2, 1))).unwrap();
        assert_eq!(s.step(&Job::high(r(1, 2))).unwrap(), M2);
        assert_eq!(s.step(&Job::high(one())).unwrap(), M2);
        assert!(s.committed_m1());
        for _ in 0..3 {
            assert_eq!(s.step(&Job::high(r(1, 10))).unwrap(), M1);
        }
    }

    #[test]
    fn step_rejects_bad_jobs() {
        let mut s = PolicyState::new(PolicyKind::Alg3, one(), Hint::PMax1(r(2, 3))).unwrap();
        assert!(matches!(
            s.step(&Job::high(r(3, 2))),
            Err(PolicyError::InvalidJob { .. })
        ));
        assert!(matches!(
            s.step(&Job::high(QValue::zero())),
            Err(PolicyError::InvalidJob { .. })
        ));
        assert!(matches!(
            s.step(&Job::high(r(3, 4))),
            Err(PolicyError::HintViolation { .. })
        ));
        assert!(s.l1().is_zero() && s.l2().is_zero());
    }

    #[test]
    fn run_policy_examples() {
        let seq = vec![
            Job::low(r(2, 3)),
            Job::high(r(1, 3)),
            Job::high(r(1, 3)),
            Job::high(r(2, 3)),
            Job::low(r(2, 3)),
        ];
        let inst = Instance::new(one(), seq);
        let (sched, c) = run_policy(PolicyKind::Alg3, &inst, &Hint::PMax1(r(2, 3))).unwrap();
        assert_eq!(c, r(5, 3));
        assert_eq!(sched.assignments, vec![M1, M2, M2, M1, M1]);

        let inst = Instance::new(one(), vec![Job::high(QValue::sqrt2_minus_one()), Job::high(one())]);
        let (sched, c) = run_policy(PolicyKind::Alg1, &inst, &Hint::NoInfo).unwrap();
        assert_eq!(c, one());
        assert_eq!(sched.assignments, vec![M2, M2]);

        let empty = Instance::new(one(), vec![]);
        for kind in [PolicyKind::Alg1, PolicyKind::Alg2] {
            let hint = if kind == PolicyKind::Alg2 {
                Hint::TotalT(QValue::zero())
            } else {
                Hint::NoInfo
            };
            assert!(run_policy(kind, &empty, &hint).unwrap().1.is_zero());
        }
    }

    #[test]
    fn run_policy_rejects_untruthful_hint() {
        let inst = Instance::new(one(), vec![Job::high(r(1, 2))]);
        assert!(matches!(
            run_policy(PolicyKind::Alg2, &inst, &Hint::TotalT(r(2, 1))),
            Err(RunError::Invalid(_))
        ));
        // the promised largest job never arrives: simulation still completes
        let inst = Instance::new(one(), vec![Job::high(r(1, 4))]);
        assert!(simulate(PolicyKind::Alg4, &inst, &Hint::PMax2(r(1, 2))).is_ok());
        assert!(run_policy(PolicyKind::Alg4, &inst, &Hint::PMax2(r(1, 2))).is_err());
    }
}
