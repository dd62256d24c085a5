//! Adaptive lower-bound adversaries and the game loop that plays them
//! against any decider.
//!
//! Each adversary releases jobs one at a time and picks the next job from the
//! decider's previous answers, following a fixed decision tree with `d = 1`.
//! At every leaf the realized instance forces `c_opt ≥ LB·c_alg`, whatever
//! the decider did.

mod random;

pub use random::{random_instance, random_sized_instance, PathSeed, Profile};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::QValue;
use crate::model::{self, Hierarchy, Hint, Instance, Job, MachineId};
use crate::oracle::{self, OracleError};
use crate::policy::{PolicyError, PolicyKind, PolicyState};
use crate::report::{BoundCheck, ReportInput, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryKind {
    /// Pure online, LB √2.
    Thm2,
    /// Total processing time 2 declared, LB 4/3.
    Thm4,
    /// Largest job 2/3 of hierarchy 1 declared, LB 6/5.
    Thm6,
    /// Largest job (√5−1)/2 of hierarchy 2 declared, LB √5 − 1.
    Thm8,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 4] = [
        AdversaryKind::Thm2,
        AdversaryKind::Thm4,
        AdversaryKind::Thm6,
        AdversaryKind::Thm8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::Thm2 => "thm2",
            AdversaryKind::Thm4 => "thm4",
            AdversaryKind::Thm6 => "thm6",
            AdversaryKind::Thm8 => "thm8",
        }
    }

    pub fn lower_bound(self) -> QValue {
        match self {
            AdversaryKind::Thm2 => QValue::sqrt2(),
            AdversaryKind::Thm4 => QValue::ratio(4, 3),
            AdversaryKind::Thm6 => QValue::ratio(6, 5),
            AdversaryKind::Thm8 => QValue::sqrt5_minus_one(),
        }
    }

    pub fn due_date(self) -> QValue {
        QValue::one()
    }

    /// Largest processing time appearing anywhere in the decision tree.
    pub fn largest_job(self) -> QValue {
        match self {
            AdversaryKind::Thm2 | AdversaryKind::Thm4 => QValue::one(),
            AdversaryKind::Thm6 => QValue::ratio(2, 3),
            AdversaryKind::Thm8 => QValue::half_sqrt5_minus_one(),
        }
    }

    /// The information the adversary announces before the first job.
    pub fn declared_hint(self) -> Hint {
        match self {
            AdversaryKind::Thm2 => Hint::NoInfo,
            AdversaryKind::Thm4 => Hint::TotalT(QValue::from_int(2)),
            AdversaryKind::Thm6 => Hint::PMax1(self.largest_job()),
            AdversaryKind::Thm8 => Hint::PMax2(self.largest_job()),
        }
    }

    /// The policy whose matching lower bound this adversary proves.
    pub fn matching_policy(self) -> PolicyKind {
        match self {
            AdversaryKind::Thm2 => PolicyKind::Alg1,
            AdversaryKind::Thm4 => PolicyKind::Alg2,
            AdversaryKind::Thm6 => PolicyKind::Alg3,
            AdversaryKind::Thm8 => PolicyKind::Alg4,
        }
    }

    pub fn for_policy(policy: PolicyKind) -> Self {
        match policy {
            PolicyKind::Alg1 => AdversaryKind::Thm2,
            PolicyKind::Alg2 => AdversaryKind::Thm4,
            PolicyKind::Alg3 => AdversaryKind::Thm6,
            PolicyKind::Alg4 => AdversaryKind::Thm8,
        }
    }

    /// Hint handed to `policy` when it plays this adversary.
    ///
    /// The declared hint when the policy accepts it; otherwise a hint of the
    /// kind the policy needs, built from the tree's parameters (`T = 2`, or the
    /// tree's largest job). Such a hint need not be truthful on the realized
    /// path; the report records whether it was.
    pub fn hint_for(self, policy: PolicyKind) -> Hint {
        let declared = self.declared_hint();
        if policy.accepts(&declared) {
            return declared;
        }
        match policy {
            PolicyKind::Alg1 => declared,
            PolicyKind::Alg2 => Hint::TotalT(QValue::from_int(2)),
            PolicyKind::Alg3 => Hint::PMax1(self.largest_job()),
            PolicyKind::Alg4 => Hint::PMax2(self.largest_job()),
        }
    }

    /// Next job given the decisions made so far on every emitted job, or
    /// `None` at a leaf.
    fn next_job(self, path: &[MachineId]) -> Option<Job> {
        use MachineId::{M1, M2};
        let r = QValue::ratio;
        let one = QValue::one;
        match self {
            AdversaryKind::Thm2 => match path {
                [] => Some(Job::high(QValue::sqrt2_minus_one())),
                [M1] => Some(Job::low(one())),
                [M2] => Some(Job::high(one())),
                [M2, M1] => Some(Job::low(one())),
                _ => None,
            },
            AdversaryKind::Thm4 => match path {
                [] => Some(Job::high(r(1, 2))),
                [M1] => Some(Job::low(one())),
                [M1, _] => Some(Job::high(r(1, 2))),
                [M2] => Some(Job::high(one())),
                [M2, M1] => Some(Job::low(r(1, 2))),
                [M2, M2] => Some(Job::high(r(1, 2))),
                _ => None,
            },
            AdversaryKind::Thm6 => match path {
                [] => Some(Job::low(r(2, 3))),
                [_] => Some(Job::high(r(1, 3))),
                [_, M1] => Some(Job::low(r(2, 3))),
                [_, M2] => Some(Job::high(r(1, 3))),
                [_, M2, M1] => Some(Job::low(r(2, 3))),
                [_, M2, M2] => Some(Job::high(r(2, 3))),
                [_, M2, M2, M1] => Some(Job::low(r(2, 3))),
                _ => None,
            },
            AdversaryKind::Thm8 => {
                let g = QValue::half_sqrt5_minus_one;
                match path {
                    [] => Some(Job::high(g())),
                    [M1] | [M1, _] => Some(Job::low(r(1, 2))),
                    [M2] => Some(Job::high(g())),
                    [M2, M1] | [M2, M1, _] => Some(Job::low(r(1, 2))),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        AdversaryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown adversary `{s}` (expected thm2, thm4, thm6, thm8)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("decision for job {index} is missing")]
    MissingDecision { index: usize },
    #[error("a decision was reported before any job was released")]
    UnexpectedDecision,
    #[error("hierarchy-1 job {index} was assigned to M2")]
    InfeasibleDecision { index: usize },
    #[error(transparent)]
    Decider(#[from] PolicyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One adaptive game in progress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryGame {
    kind: AdversaryKind,
    emitted: Vec<Job>,
    decisions: Vec<MachineId>,
    done: bool,
}

impl AdversaryGame {
    pub fn new(kind: AdversaryKind) -> Self {
        AdversaryGame {
            kind,
            emitted: Vec::new(),
            decisions: Vec::new(),
            done: false,
        }
    }

    pub fn kind(&self) -> AdversaryKind {
        self.kind
    }

    pub fn emitted(&self) -> &[Job] {
        &self.emitted
    }

    pub fn decisions(&self) -> &[MachineId] {
        &self.decisions
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Records the decision for the previously released job (if any) and
    /// returns the next job, or `None` once the game has ended.
    pub fn next(&mut self, last_decision: Option<MachineId>) -> Result<Option<Job>, AdversaryError> {
        if self.done {
            return Ok(None);
        }
        match (self.emitted.len() - self.decisions.len(), last_decision) {
            (0, Some(_)) => return Err(AdversaryError::UnexpectedDecision),
            (0, None) => {}
            (_, None) => {
                return Err(AdversaryError::MissingDecision {
                    index: self.decisions.len(),
                })
            }
            (_, Some(m)) => {
                let index = self.decisions.len();
                if !m.accepts(self.emitted[index].g) {
                    return Err(AdversaryError::InfeasibleDecision { index });
                }
                self.decisions.push(m);
            }
        }
        let next = self.kind.next_job(&self.decisions);
        match &next {
            Some(job) => self.emitted.push(job.clone()),
            None => self.done = true,
        }
        Ok(next)
    }

    /// The instance realized so far.
    pub fn instance(&self) -> Instance {
        Instance::new(self.kind.due_date(), self.emitted.clone())
    }
}

/// Anything that assigns jobs online.
pub trait Decider {
    fn decide(&mut self, job: &Job) -> Result<MachineId, PolicyError>;
}

impl Decider for PolicyState {
    fn decide(&mut self, job: &Job) -> Result<MachineId, PolicyError> {
        self.step(job)
    }
}

/// Sends every hierarchy-2 job to a fixed machine.
#[derive(Debug, Clone, Copy)]
pub struct Greedy(pub MachineId);

impl Decider for Greedy {
    fn decide(&mut self, job: &Job) -> Result<MachineId, PolicyError> {
        Ok(if job.g == Hierarchy::Low { MachineId::M1 } else { self.0 })
    }
}

/// Flips a seeded coin for every hierarchy-2 job.
#[derive(Debug, Clone)]
pub struct RandomDecider(ChaCha8Rng);

impl RandomDecider {
    pub fn new(seed: u64) -> Self {
        RandomDecider(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Decider for RandomDecider {
    fn decide(&mut self, job: &Job) -> Result<MachineId, PolicyError> {
        if job.g == Hierarchy::Low {
            return Ok(MachineId::M1);
        }
        Ok(if self.0.gen_bool(0.5) {
            MachineId::M2
        } else {
            MachineId::M1
        })
    }
}

/// Named deciders accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Policy(PolicyKind),
    Greedy1,
    Greedy2,
    Random(u64),
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Policy(k) => write!(f, "{k}"),
            Player::Greedy1 => write!(f, "greedy1"),
            Player::Greedy2 => write!(f, "greedy2"),
            Player::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for Player {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "greedy1" => Ok(Player::Greedy1),
            "greedy2" => Ok(Player::Greedy2),
            _ => {
                if let Some(seed) = s.strip_prefix("random:") {
                    return seed
                        .parse()
                        .map(Player::Random)
                        .map_err(|_| format!("bad random seed in `{s}`"));
                }
                s.parse().map(Player::Policy).map_err(|_| {
                    format!("unknown decider `{s}` (expected alg1..alg4, greedy1, greedy2, random:<seed>)")
                })
            }
        }
    }
}

/// Plays `kind` against `player`; policies get [`AdversaryKind::hint_for`].
pub fn play(kind: AdversaryKind, player: Player) -> Result<RunReport, AdversaryError> {
    let hint = match player {
        Player::Policy(p) => kind.hint_for(p),
        _ => kind.declared_hint(),
    };
    play_with_hint(kind, player, hint)
}

/// Plays with an explicit hint (e.g. `PMaxOnly(1)` against `Thm2`).
pub fn play_with_hint(kind: AdversaryKind, player: Player, hint: Hint) -> Result<RunReport, AdversaryError> {
    let mut decider: Box<dyn Decider> = match player {
        Player::Policy(p) => Box::new(PolicyState::new(p, kind.due_date(), hint.clone())?),
        Player::Greedy1 => Box::new(Greedy(MachineId::M1)),
        Player::Greedy2 => Box::new(Greedy(MachineId::M2)),
        Player::Random(seed) => Box::new(RandomDecider::new(seed)),
    };
    play_decider(kind, decider.as_mut(), player.to_string(), hint)
}

/// Runs the game loop against an arbitrary decider and scores the result.
pub fn play_decider(
    kind: AdversaryKind,
    decider: &mut dyn Decider,
    name: String,
    hint: Hint,
) -> Result<RunReport, AdversaryError> {
    let mut game = AdversaryGame::new(kind);
    let mut last = None;
    while let Some(job) = game.next(last)? {
        last = Some(decider.decide(&job)?);
    }
    let instance = game.instance();
    let schedule = model::Schedule::from_assignments(&instance, game.decisions().to_vec())
        .expect("game rejects infeasible decisions");
    let c_alg = schedule.early_work(&instance.d).expect("d = 1");
    let c_opt = oracle::optimal_bruteforce(&instance)?.value;
    Ok(RunReport::build(ReportInput {
        decider: name,
        adversary: Some(kind.name().to_string()),
        instance: &instance,
        hint: &hint,
        assignments: &schedule.assignments,
        c_alg,
        c_opt,
        check: BoundCheck::Lower,
        bound: kind.lower_bound(),
    }))
}

/// The realized instance of `kind` played against `policy`, with the hint
/// the policy was given.
pub fn worst_case_instance(kind: AdversaryKind, policy: PolicyKind) -> Result<(Instance, Hint), AdversaryError> {
    let report = play(kind, Player::Policy(policy))?;
    let jobs = report.trace.into_iter().map(|s| s.job).collect();
    Ok((Instance::new(kind.due_date(), jobs), report.hint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use MachineId::*;

    fn r(n: i64, d: i64) -> QValue {
        QValue::ratio(n, d)
    }

    #[test]
    fn thm2_protocol() {
        let mut g = AdversaryGame::new(AdversaryKind::Thm2);
        assert_eq!(g.next(None).unwrap(), Some(Job::high(QValue::sqrt2_minus_one())));
        assert_eq!(g.next(Some(M1)).unwrap(), Some(Job::low(QValue::one())));
        assert_eq!(g.next(Some(M1)).unwrap(), None);
        assert!(g.is_done());
        assert_eq!(g.next(None).unwrap(), None);
    }

    #[test]
    fn thm8_stops_after_two_on_m2() {
        let mut g = AdversaryGame::new(AdversaryKind::Thm8);
        g.next(None).unwrap();
        assert!(g.next(Some(M2)).unwrap().is_some());
        assert_eq!(g.next(Some(M2)).unwrap(), None);
    }

    #[test]
    fn protocol_errors() {
        let mut g = AdversaryGame::new(AdversaryKind::Thm6);
        assert_eq!(g.next(Some(M1)), Err(AdversaryError::UnexpectedDecision));
        let first = g.next(None).unwrap().unwrap();
        assert_eq!(first.g, Hierarchy::Low);
        assert_eq!(g.next(None), Err(AdversaryError::MissingDecision { index: 0 }));
        assert_eq!(g.next(Some(M2)), Err(AdversaryError::InfeasibleDecision { index: 0 }));
        assert!(g.next(Some(M1)).unwrap().is_some());
    }

    #[test]
    fn play_matching_policies_are_tight() {
        let rep = play(AdversaryKind::Thm2, Player::Policy(PolicyKind::Alg1)).unwrap();
        assert_eq!((rep.c_alg.clone(), rep.c_opt.clone()), (QValue::one(), QValue::sqrt2()));
        assert_eq!(&rep.bound * &rep.c_alg, rep.c_opt);

        let rep = play(AdversaryKind::Thm6, Player::Policy(PolicyKind::Alg3)).unwrap();
        assert_eq!((rep.c_alg.clone(), rep.c_opt.clone()), (r(5, 3), r(2, 1)));
        assert!(rep.bound_holds && rep.hint_valid);

        let rep = play(AdversaryKind::Thm8, Player::Policy(PolicyKind::Alg4)).unwrap();
        assert_eq!(
            (rep.c_alg.clone(), rep.c_opt.clone()),
            (QValue::one(), QValue::sqrt5_minus_one())
        );
    }

    #[test]
    fn thm2_branch_m2_then_m1() {
        // J1 → M2, J2 → M1, then (1,1): loads L1 = 2, L2 = √2 − 1
        let mut g = AdversaryGame::new(AdversaryKind::Thm2);
        g.next(None).unwrap();
        g.next(Some(M2)).unwrap();
        let last = g.next(Some(M1)).unwrap().unwrap();
        assert_eq!(last, Job::low(QValue::one()));
        assert_eq!(g.next(Some(M1)).unwrap(), None);
        let inst = g.instance();
        let s = model::Schedule::from_assignments(&inst, g.decisions().to_vec()).unwrap();
        assert_eq!(s.early_work(&inst.d).unwrap(), QValue::sqrt2());
        assert_eq!(oracle::optimal_bruteforce(&inst).unwrap().value, r(2, 1));
    }

    #[test]
    fn player_names_round_trip() {
        for s in ["alg1", "alg4", "greedy1", "greedy2", "random:42"] {
            assert_eq!(s.parse::<Player>().unwrap().to_string(), s);
        }
        assert!("random:x".parse::<Player>().is_err());
        assert!("alg5".parse::<Player>().is_err());
    }

    #[test]
    fn mismatched_policy_gets_a_surrogate_hint() {
        assert_eq!(AdversaryKind::Thm2.hint_for(PolicyKind::Alg2), Hint::TotalT(r(2, 1)));
        assert_eq!(
            AdversaryKind::Thm8.hint_for(PolicyKind::Alg3),
            Hint::PMax1(QValue::half_sqrt5_minus_one())
        );
        assert_eq!(AdversaryKind::Thm6.hint_for(PolicyKind::Alg1), Hint::PMax1(r(2, 3)));
        let rep = play(AdversaryKind::Thm2, Player::Policy(PolicyKind::Alg4)).unwrap();
        assert!(rep.bound_holds);
    }
}
