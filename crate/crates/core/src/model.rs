//! Jobs, instances, semi-online hints, schedules and the early-work objective.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{q_max, q_min, QValue, Rational};

/// Grade of service of a job. `Low` (g = 1) jobs may only run on `M1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Hierarchy {
    Low,
    High,
}

impl Hierarchy {
    pub fn as_u8(self) -> u8 {
        match self {
            Hierarchy::Low => 1,
            Hierarchy::High => 2,
        }
    }
}

impl TryFrom<u8> for Hierarchy {
    type Error = String;
    fn try_from(g: u8) -> Result<Self, String> {
        match g {
            1 => Ok(Hierarchy::Low),
            2 => Ok(Hierarchy::High),
            _ => Err(format!("hierarchy must be 1 or 2, got {g}")),
        }
    }
}

impl From<Hierarchy> for u8 {
    fn from(g: Hierarchy) -> u8 {
        g.as_u8()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MachineId {
    M1,
    M2,
}

impl MachineId {
    pub fn accepts(self, g: Hierarchy) -> bool {
        self == MachineId::M1 || g == Hierarchy::High
    }
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineId::M1 => "M1",
            MachineId::M2 => "M2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Job {
    pub p: QValue,
    pub g: Hierarchy,
}

impl Job {
    pub fn new(p: QValue, g: Hierarchy) -> Self {
        Job { p, g }
    }

    pub fn low(p: QValue) -> Self {
        Job::new(p, Hierarchy::Low)
    }

    pub fn high(p: QValue) -> Self {
        Job::new(p, Hierarchy::High)
    }
}

impl fmt::Display for Job {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.g.as_u8())
    }
}

/// Common due date and jobs in arrival order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub d: QValue,
    pub jobs: Vec<Job>,
}

impl Instance {
    pub fn new(d: QValue, jobs: Vec<Job>) -> Self {
        Instance { d, jobs }
    }

    pub fn total(&self) -> QValue {
        self.jobs.iter().map(|j| &j.p).sum()
    }

    pub fn total_of(&self, g: Hierarchy) -> QValue {
        self.jobs.iter().filter(|j| j.g == g).map(|j| &j.p).sum()
    }

    pub fn p_max(&self) -> Option<&QValue> {
        self.jobs.iter().map(|j| &j.p).max()
    }

    pub fn high_indices(&self) -> Vec<usize> {
        (0..self.jobs.len())
            .filter(|&i| self.jobs[i].g == Hierarchy::High)
            .collect()
    }

    /// True when `d` and every `p` are rational.
    pub fn is_rational(&self) -> bool {
        self.d.is_rational() && self.jobs.iter().all(|j| j.p.is_rational())
    }
}

/// Advance information available to a semi-online policy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HintRepr", into = "HintRepr")]
pub enum Hint {
    NoInfo,
    /// Total processing time of all jobs.
    TotalT(QValue),
    /// Largest processing time, hierarchy unknown.
    PMaxOnly(QValue),
    /// Largest processing time, attained by a hierarchy-1 job.
    PMax1(QValue),
    /// Largest processing time, attained by a hierarchy-2 job.
    PMax2(QValue),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HintKind {
    None,
    Total,
    Pmax,
    Pmax1,
    Pmax2,
}

impl HintKind {
    pub fn name(self) -> &'static str {
        match self {
            HintKind::None => "none",
            HintKind::Total => "total",
            HintKind::Pmax => "pmax",
            HintKind::Pmax1 => "pmax1",
            HintKind::Pmax2 => "pmax2",
        }
    }
}

impl std::str::FromStr for HintKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(HintKind::None),
            "total" => Ok(HintKind::Total),
            "pmax" => Ok(HintKind::Pmax),
            "pmax1" => Ok(HintKind::Pmax1),
            "pmax2" => Ok(HintKind::Pmax2),
            _ => Err(format!("unknown hint kind `{s}`")),
        }
    }
}

impl fmt::Display for HintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Hint {
    pub fn kind(&self) -> HintKind {
        match self {
            Hint::NoInfo => HintKind::None,
            Hint::TotalT(_) => HintKind::Total,
            Hint::PMaxOnly(_) => HintKind::Pmax,
            Hint::PMax1(_) => HintKind::Pmax1,
            Hint::PMax2(_) => HintKind::Pmax2,
        }
    }

    pub fn value(&self) -> Option<&QValue> {
        match self {
            Hint::NoInfo => None,
            Hint::TotalT(v) | Hint::PMaxOnly(v) | Hint::PMax1(v) | Hint::PMax2(v) => Some(v),
        }
    }

    /// The truthful hint of `kind` for a complete job list. For the
    /// `pmax*` kinds this is `None` when the instance has no jobs.
    pub fn truthful(kind: HintKind, instance: &Instance) -> Option<Hint> {
        Some(match kind {
            HintKind::None => Hint::NoInfo,
            HintKind::Total => Hint::TotalT(instance.total()),
            HintKind::Pmax => Hint::PMaxOnly(instance.p_max()?.clone()),
            HintKind::Pmax1 => Hint::PMax1(instance.p_max()?.clone()),
            HintKind::Pmax2 => Hint::PMax2(instance.p_max()?.clone()),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct HintRepr {
    kind: HintKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<QValue>,
}

impl TryFrom<HintRepr> for Hint {
    type Error = String;
    fn try_from(r: HintRepr) -> Result<Self, String> {
        match (r.kind, r.value) {
            (HintKind::None, None) => Ok(Hint::NoInfo),
            (HintKind::None, Some(_)) => Err("hint kind `none` takes no value".into()),
            (k, None) => Err(format!("hint kind `{k}` requires a value")),
            (HintKind::Total, Some(v)) => Ok(Hint::TotalT(v)),
            (HintKind::Pmax, Some(v)) => Ok(Hint::PMaxOnly(v)),
            (HintKind::Pmax1, Some(v)) => Ok(Hint::PMax1(v)),
            (HintKind::Pmax2, Some(v)) => Ok(Hint::PMax2(v)),
        }
    }
}

impl From<Hint> for HintRepr {
    fn from(h: Hint) -> Self {
        HintRepr {
            kind: h.kind(),
            value: h.value().cloned(),
        }
    }
}

/// On-disk instance: due date, declared hint, jobs in arrival order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub d: QValue,
    #[serde(default = "no_hint")]
    pub hint: Hint,
    pub jobs: Vec<Job>,
}

fn no_hint() -> Hint {
    Hint::NoInfo
}

impl InstanceFile {
    pub fn new(instance: Instance, hint: Hint) -> Self {
        InstanceFile {
            d: instance.d,
            hint,
            jobs: instance.jobs,
        }
    }

    pub fn split(self) -> (Instance, Hint) {
        (Instance::new(self.d, self.jobs), self.hint)
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization is infallible")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("due date must be positive, got {0}")]
    NonPositiveDueDate(QValue),
    #[error("load must be non-negative, got {0}")]
    NegativeLoad(QValue),
    #[error("job {index} is hierarchy 1 and cannot run on M2")]
    Infeasible { index: usize },
    #[error("expected {expected} assignments, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A partition of the jobs onto the two machines, with loads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignments: Vec<MachineId>,
    pub l1: QValue,
    pub l2: QValue,
}

impl Schedule {
    pub fn from_assignments(instance: &Instance, assignments: Vec<MachineId>) -> Result<Self, ModelError> {
        if assignments.len() != instance.jobs.len() {
            return Err(ModelError::LengthMismatch {
                expected: instance.jobs.len(),
                got: assignments.len(),
            });
        }
        let mut l1 = QValue::zero();
        let mut l2 = QValue::zero();
        for (index, (job, m)) in instance.jobs.iter().zip(&assignments).enumerate() {
            if !m.accepts(job.g) {
                return Err(ModelError::Infeasible { index });
            }
            match m {
                MachineId::M1 => l1 = l1 + &job.p,
                MachineId::M2 => l2 = l2 + &job.p,
            }
        }
        Ok(Schedule { assignments, l1, l2 })
    }

    pub fn early_work(&self, d: &QValue) -> Result<QValue, ModelError> {
        total_early_work(&self.l1, &self.l2, d)
    }
}

/// `min(L1, d) + min(L2, d)`.
pub fn total_early_work(l1: &QValue, l2: &QValue, d: &QValue) -> Result<QValue, ModelError> {
    if !d.is_positive() {
        return Err(ModelError::NonPositiveDueDate(d.clone()));
    }
    for l in [l1, l2] {
        if l.is_negative() {
            return Err(ModelError::NegativeLoad(l.clone()));
        }
    }
    Ok(q_min(l1, d) + q_min(l2, d))
}

/// Early work of one job of length `p` started at `start`:
/// `min(p, max(0, d − start))`.
pub fn job_early_work(p: &QValue, start: &QValue, d: &QValue) -> QValue {
    let slack = d - start;
    q_min(p, &q_max(&slack, &QValue::zero()))
}

/// Upper bound on the offline optimum: `min(T, 2d)`.
pub fn lemma1_bound(t: &QValue, d: &QValue) -> QValue {
    q_min(t, &(d + d))
}

/// The weaker bound `d + T/2`.
pub fn opt_weak_bound(t: &QValue, d: &QValue) -> QValue {
    d + &t.scale(&Rational::new(1, 2).unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Violation {
    #[error("due date d = {d} is not positive")]
    NonPositiveDueDate { d: QValue },
    #[error("p_{} = {p} is not positive", index + 1)]
    NonPositiveJob { index: usize, p: QValue },
    #[error("p_{} = {p} > d", index + 1)]
    ExceedsDueDate { index: usize, p: QValue },
    #[error("declared T = {declared} != actual {actual}")]
    TotalMismatch { declared: QValue, actual: QValue },
    #[error("declared p_max = {declared} but instance has {}", actual.as_ref().map_or("no jobs".to_string(), |a| format!("p_max = {a}")))]
    PMaxMismatch { declared: QValue, actual: Option<QValue> },
    #[error("no hierarchy-{hierarchy} job attains the declared p_max")]
    PMaxHierarchy { hierarchy: u8 },
}

/// All violations of the model assumptions and hint truthfulness.
pub fn validate(instance: &Instance, hint: &Hint) -> Vec<Violation> {
    let mut out = Vec::new();
    let d_ok = instance.d.is_positive();
    if !d_ok {
        out.push(Violation::NonPositiveDueDate { d: instance.d.clone() });
    }
    for (index, job) in instance.jobs.iter().enumerate() {
        if !job.p.is_positive() {
            out.push(Violation::NonPositiveJob {
                index,
                p: job.p.clone(),
            });
        } else if d_ok && job.p > instance.d {
            out.push(Violation::ExceedsDueDate {
                index,
                p: job.p.clone(),
            });
        }
    }
    match hint {
        Hint::NoInfo => {}
        Hint::TotalT(t) => {
            let actual = instance.total();
            if &actual != t {
                out.push(Violation::TotalMismatch {
                    declared: t.clone(),
                    actual,
                });
            }
        }
        Hint::PMaxOnly(p) | Hint::PMax1(p) | Hint::PMax2(p) => {
            let actual = instance.p_max().cloned();
            if actual.as_ref() != Some(p) {
                out.push(Violation::PMaxMismatch {
                    declared: p.clone(),
                    actual,
                });
            } else {
                let needed = match hint {
                    Hint::PMax1(_) => Some(Hierarchy::Low),
                    Hint::PMax2(_) => Some(Hierarchy::High),
                    _ => None,
                };
                if let Some(g) = needed {
                    if !instance.jobs.iter().any(|j| j.g == g && &j.p == p) {
                        out.push(Violation::PMaxHierarchy { hierarchy: g.as_u8() });
                    }
                }
            }
        }
    }
    out
}
