//! Fixtures shared by the criterion benches in `benches/`.

use ewl_core::{random_instance, HintKind, Instance, PolicyKind, Profile, QValue, Rational};

/// Deterministic spread of irrational field elements with small coefficients.
pub fn field_values(n: usize) -> Vec<QValue> {
    (0..n as i64)
        .map(|i| {
            let r = |k: i64| Rational::new((i * k) % 23 - 11, 1 + (i + k) % 9).unwrap();
            QValue::new(r(3), r(5), r(7), r(11))
        })
        .collect()
}

/// Rational instance with `n` jobs on the default grid.
pub fn rational_instance(seed: u64, n: usize) -> Instance {
    random_instance(seed, n, &Profile::default(), HintKind::None).0
}

/// Instance with the truthful hint `policy` needs.
pub fn policy_instance(policy: PolicyKind, seed: u64, n: usize) -> (Instance, ewl_core::Hint) {
    random_instance(seed, n, &Profile::near_worst_case(policy), policy.natural_hint())
}
