use std::collections::BTreeSet;

use ewl_core::adversary::{play_decider, AdversaryError};
use ewl_core::model::validate;
use ewl_core::{
    play, AdversaryGame, AdversaryKind, Decider, Hierarchy, Hint, Job, MachineId, Player, PolicyError, PolicyKind,
    QValue, RunReport,
};

/// Answers hierarchy-2 jobs from the bits of `mask` (1 = M2), in order.
struct Scripted {
    mask: u32,
    used: u32,
}

impl Decider for Scripted {
    fn decide(&mut self, job: &Job) -> Result<MachineId, PolicyError> {
        if job.g == Hierarchy::Low {
            return Ok(MachineId::M1);
        }
        let bit = self.mask >> self.used & 1;
        self.used += 1;
        Ok(if bit == 1 { MachineId::M2 } else { MachineId::M1 })
    }
}

fn leaves(kind: AdversaryKind) -> Vec<RunReport> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0..16 {
        let mut d = Scripted { mask, used: 0 };
        let report = play_decider(kind, &mut d, format!("mask:{mask}"), kind.declared_hint()).unwrap();
        let key: Vec<String> = report.trace.iter().map(|s| format!("{}{}", s.job, s.machine)).collect();
        if seen.insert(key) {
            out.push(report);
        }
    }
    out
}

fn deciders() -> Vec<Player> {
    let mut v: Vec<Player> = PolicyKind::ALL.into_iter().map(Player::Policy).collect();
    v.push(Player::Greedy1);
    v.push(Player::Greedy2);
    v.extend((0..100).map(Player::Random));
    v
}

fn jobs(report: &RunReport) -> Vec<Job> {
    report.trace.iter().map(|s| s.job.clone()).collect()
}

#[test]
fn every_leaf_forces_the_lower_bound() {
    let expected_leaves = [3, 5, 4, 3];
    for (kind, count) in AdversaryKind::ALL.into_iter().zip(expected_leaves) {
        let all = leaves(kind);
        assert_eq!(all.len(), count, "{kind}");
        for r in &all {
            assert!(r.bound_holds, "{kind}: {:?}", r.trace);
            assert!(r.opt_bound_holds);
            assert!(r.hint_valid, "{kind} declared hint must be truthful on every leaf");
        }
    }
}

#[test]
fn universality_over_deciders() {
    for kind in AdversaryKind::ALL {
        for player in deciders() {
            let r = play(kind, player).unwrap();
            assert!(r.bound_holds, "{kind} vs {player}");
            assert!(r.opt_bound_holds && r.consistent());
            let inst = ewl_core::Instance::new(r.d.clone(), jobs(&r));
            assert!(validate(&inst, &kind.declared_hint()).is_empty(), "{kind} vs {player}");
            assert!(inst.jobs.iter().all(|j| j.p <= QValue::one()));
            match kind {
                AdversaryKind::Thm4 => assert_eq!(inst.total(), QValue::from_int(2)),
                AdversaryKind::Thm6 => {
                    let max = QValue::ratio(2, 3);
                    assert_eq!(inst.p_max(), Some(&max));
                    assert!(inst.jobs.iter().any(|j| j.g == Hierarchy::Low && j.p == max));
                }
                AdversaryKind::Thm8 => {
                    let max = QValue::half_sqrt5_minus_one();
                    assert_eq!(inst.p_max(), Some(&max));
                    assert!(inst.jobs.iter().any(|j| j.g == Hierarchy::High && j.p == max));
                }
                AdversaryKind::Thm2 => {}
            }
        }
    }
}

#[test]
fn matching_policies_are_tight() {
    let cases = [
        (AdversaryKind::Thm2, QValue::one(), QValue::sqrt2()),
        (AdversaryKind::Thm4, QValue::ratio(3, 2), QValue::from_int(2)),
        (AdversaryKind::Thm6, QValue::ratio(5, 3), QValue::from_int(2)),
        (AdversaryKind::Thm8, QValue::one(), QValue::sqrt5_minus_one()),
    ];
    for (kind, c_alg, c_opt) in cases {
        let r = play(kind, Player::Policy(kind.matching_policy())).unwrap();
        assert_eq!(r.c_alg, c_alg, "{kind}");
        assert_eq!(r.c_opt, c_opt, "{kind}");
        assert_eq!(&kind.lower_bound() * &r.c_alg, r.c_opt);
        assert!(r.hint_valid);
    }
}

#[test]
fn sqrt2_tree_branches() {
    let one = QValue::one();
    let mut g = AdversaryGame::new(AdversaryKind::Thm2);
    assert_eq!(g.next(None).unwrap(), Some(Job::high(QValue::sqrt2_minus_one())));
    assert_eq!(g.next(Some(MachineId::M1)).unwrap(), Some(Job::low(one.clone())));
    assert_eq!(g.next(Some(MachineId::M1)).unwrap(), None);
    assert!(g.is_done());

    let mut g = AdversaryGame::new(AdversaryKind::Thm2);
    g.next(None).unwrap();
    assert_eq!(g.next(Some(MachineId::M2)).unwrap(), Some(Job::high(one.clone())));
    assert_eq!(g.next(Some(MachineId::M1)).unwrap(), Some(Job::low(one.clone())));
    assert_eq!(g.next(Some(MachineId::M1)).unwrap(), None);
    // recomputed from loads: L1 = 2, L2 = √2 − 1
    let r = play_decider(
        AdversaryKind::Thm2,
        &mut Scripted { mask: 0b01, used: 0 },
        "s".into(),
        Hint::NoInfo,
    )
    .unwrap();
    assert_eq!(r.c_alg, QValue::sqrt2());
    assert_eq!(r.c_opt, QValue::from_int(2));
}

#[test]
fn golden_tree_stops_after_two_m2() {
    let mut g = AdversaryGame::new(AdversaryKind::Thm8);
    g.next(None).unwrap();
    g.next(Some(MachineId::M2)).unwrap();
    assert_eq!(g.next(Some(MachineId::M2)).unwrap(), None);
    assert_eq!(g.emitted().len(), 2);
}

#[test]
fn protocol_errors() {
    let mut g = AdversaryGame::new(AdversaryKind::Thm6);
    assert_eq!(g.next(Some(MachineId::M1)), Err(AdversaryError::UnexpectedDecision));
    assert!(g.next(None).unwrap().is_some());
    assert_eq!(g.next(None), Err(AdversaryError::MissingDecision { index: 0 }));
    assert_eq!(
        g.next(Some(MachineId::M2)),
        Err(AdversaryError::InfeasibleDecision { index: 0 })
    );
}
