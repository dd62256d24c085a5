use serde::{Deserialize, Serialize};

use crate::exactnum::{q_ratio_decimal, QValue};
use crate::model::{self, Hint, Instance, Job, MachineId};
use crate::oracle;

/// Digits shown in `ratio_decimal`.
pub const RATIO_DIGITS: u32 = 10;

/// Direction of the exact bound verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundCheck {
    /// Policy guarantee: `c_opt ≤ bound·c_alg`.
    Upper,
    /// Adversary lower bound: `c_opt ≥ bound·c_alg`.
    Lower,
}

impl BoundCheck {
    pub fn holds(self, c_alg: &QValue, c_opt: &QValue, bound: &QValue) -> bool {
        let scaled = bound * c_alg;
        match self {
            BoundCheck::Upper => c_opt <= &scaled,
            BoundCheck::Lower => c_opt >= &scaled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub job: Job,
    pub machine: MachineId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    /// Policy or decider name (`alg1`, `greedy2`, `random:7`, ...).
    pub decider: String,
    /// Adversary kind for game reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<String>,
    pub d: QValue,
    pub hint: Hint,
    /// Whether the hint was truthful for the realized job list.
    pub hint_valid: bool,
    pub c_alg: QValue,
    pub c_opt: QValue,
    pub check: BoundCheck,
    pub bound: QValue,
    pub bound_holds: bool,
    /// `c_opt ≤ min(T, 2d) ≤ d + T/2`.
    pub opt_bound_holds: bool,
    pub ratio_decimal: String,
    pub trace: Vec<TraceStep>,
}

pub struct ReportInput<'a> {
    pub decider: String,
    pub adversary: Option<String>,
    pub instance: &'a Instance,
    pub hint: &'a Hint,
    pub assignments: &'a [MachineId],
    pub c_alg: QValue,
    pub c_opt: QValue,
    pub check: BoundCheck,
    pub bound: QValue,
}

impl RunReport {
    pub fn build(input: ReportInput<'_>) -> Self {
        let ReportInput {
            decider,
            adversary,
            instance,
            hint,
            assignments,
            c_alg,
            c_opt,
            check,
            bound,
        } = input;
        let trace = instance
            .jobs
            .iter()
            .zip(assignments)
            .map(|(job, &machine)| TraceStep {
                job: job.clone(),
                machine,
            })
            .collect();
        RunReport {
            decider,
            adversary,
            d: instance.d.clone(),
            hint: hint.clone(),
            hint_valid: model::validate(instance, hint).is_empty(),
            bound_holds: check.holds(&c_alg, &c_opt, &bound),
            opt_bound_holds: oracle::opt_sanity(instance, &c_opt),
            ratio_decimal: ratio_decimal(&c_opt, &c_alg),
            c_alg,
            c_opt,
            check,
            bound,
            trace,
        }
    }

    /// The oracle never loses to an online schedule.
    pub fn consistent(&self) -> bool {
        self.c_alg <= self.c_opt
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// `c_opt / c_alg` at [`RATIO_DIGITS`] digits; an empty schedule against an
/// empty optimum reads as ratio 1.
pub fn ratio_decimal(c_opt: &QValue, c_alg: &QValue) -> String {
    if c_alg.is_zero() {
        return if c_opt.is_zero() {
            q_ratio_decimal(&QValue::one(), &QValue::one(), RATIO_DIGITS)
        } else {
            "inf".to_string()
        };
    }
    q_ratio_decimal(c_opt, c_alg, RATIO_DIGITS)
}
