//! Exact laboratory for online and semi-online scheduling on two
//! hierarchical machines with a common due date, maximizing total early
//! work.
//!
//! Machine `M1` accepts every job; `M2` accepts only hierarchy-2 jobs. A
//! schedule earns `min(L1, d) + min(L2, d)`. The crate provides
//!
//! - [`exactnum`]: the field Q(√2,√5) in which every quantity and comparison
//!   is exact,
//! - [`model`]: jobs, instances, hints, schedules and the objective,
//! - [`policy`]: the four online/semi-online assignment policies,
//! - [`oracle`]: the offline optimum, by enumeration and by subset-sum DP,
//! - [`adversary`]: the adaptive lower-bound games and a random generator,
//! - [`report`]: run reports with exact bound verdicts.
//!
//! ```
//! use ewl_core::{play, AdversaryKind, Player, PolicyKind, QValue};
//!
//! let report = play(AdversaryKind::Thm2, Player::Policy(PolicyKind::Alg1)).unwrap();
//! assert_eq!(report.c_alg, QValue::one());
//! assert_eq!(report.c_opt, QValue::sqrt2());
//! assert!(report.bound_holds);
//! ```

pub mod adversary;
pub mod exactnum;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod report;

pub use adversary::{
    play, play_decider, play_with_hint, random_instance, random_sized_instance, AdversaryError, AdversaryGame,
    AdversaryKind, Decider, Greedy, PathSeed, Player, Profile, RandomDecider,
};
pub use exactnum::{QValue, Rational};
pub use model::{
    total_early_work, validate, Hierarchy, Hint, HintKind, Instance, InstanceFile, Job, MachineId, Schedule, Violation,
};
pub use oracle::{opt_sanity, optimal_bruteforce, optimal_dp, OracleError, OracleResult};
pub use policy::{run_policy, PolicyError, PolicyKind, PolicyState, RunError};
pub use report::{BoundCheck, RunReport, TraceStep};
