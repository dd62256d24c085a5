//! Exact arithmetic in Q(√2,√5).
//!
//! Every quantity in the scheduling model (processing times, loads, due
//! dates, thresholds, ratio bounds) lives in this field, so each comparison
//! the policies make is decided exactly. Zero tests are structural; only
//! nonzero values go through the interval refinement in [`q_sign`].

mod qvalue;
mod rational;
mod serde_impl;
mod sign;

pub use qvalue::QValue;
pub use rational::Rational;
pub use sign::{
    q_cmp, q_floor, q_max, q_min, q_ratio_decimal, q_sign, q_to_decimal, set_start_precision_bits, start_precision_bits,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn q_add(x: &QValue, y: &QValue) -> QValue {
    x + y
}

pub fn q_mul(x: &QValue, y: &QValue) -> QValue {
    x * y
}
