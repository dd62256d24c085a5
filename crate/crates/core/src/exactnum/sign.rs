//! Sign determination and decimal rendering by dyadic interval enclosure.
//!
//! A value `x = a + b√2 + c√5 + e√10` is enclosed at `k` fractional bits by
//! integers `lo ≤ x·2^k ≤ hi`, using `isqrt(n·4^k)` for each radical. Zero is
//! detected structurally beforehand, so for any value reaching the loop the
//! enclosure eventually excludes zero; each round doubles `k`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::qvalue::QValue;
use super::rational::Rational;

static START_BITS: AtomicU32 = AtomicU32::new(64);

/// Starting precision (fractional bits) for the refinement loop.
pub fn start_precision_bits() -> u32 {
    START_BITS.load(Ordering::Relaxed)
}

/// Overrides the starting precision; values below 1 are clamped to 1.
pub fn set_start_precision_bits(bits: u32) {
    START_BITS.store(bits.max(1), Ordering::Relaxed);
}

thread_local! {
    static ROOTS: RefCell<HashMap<(u32, u32), BigInt>> = RefCell::new(HashMap::new());
}

/// `floor(√n · 2^bits)`.
fn scaled_isqrt(n: u32, bits: u32) -> BigInt {
    ROOTS.with(|cache| {
        cache
            .borrow_mut()
            .entry((n, bits))
            .or_insert_with(|| (BigInt::from(n) << (2 * bits as usize)).sqrt())
            .clone()
    })
}

fn div_floor(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn div_ceil(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

/// Integer bounds `(lo, hi)` with `lo ≤ x·2^bits ≤ hi`.
pub(crate) fn enclose(x: &QValue, bits: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << bits as usize;
    let a = x.a();
    let mut lo = div_floor(&(a.numer() * &scale), &a.denom());
    let mut hi = div_ceil(&(a.numer() * &scale), &a.denom());
    for (coef, &n) in x.coeffs().iter().zip(QValue::radicands()).skip(1) {
        if coef.is_zero() {
            continue;
        }
        let root_lo = scaled_isqrt(n, bits);
        let root_hi = &root_lo + 1u32;
        let (num, den) = (coef.numer(), coef.denom());
        let (l, h) = if num.is_negative() {
            (&num * &root_hi, &num * &root_lo)
        } else {
            (&num * &root_lo, &num * &root_hi)
        };
        lo += div_floor(&l, &den);
        hi += div_ceil(&h, &den);
    }
    (lo, hi)
}

/// Exact sign of `x`: -1, 0 or +1.
pub fn q_sign(x: &QValue) -> i32 {
    if x.is_rational() {
        return x.a().signum();
    }
    let mut bits = start_precision_bits();
    loop {
        let (lo, hi) = enclose(x, bits);
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        bits = bits.saturating_mul(2);
    }
}

/// Three-way exact comparison.
pub fn q_cmp(x: &QValue, y: &QValue) -> std::cmp::Ordering {
    x.cmp(y)
}

pub fn q_min(x: &QValue, y: &QValue) -> QValue {
    if x <= y {
        x.clone()
    } else {
        y.clone()
    }
}

pub fn q_max(x: &QValue, y: &QValue) -> QValue {
    if x >= y {
        x.clone()
    } else {
        y.clone()
    }
}

/// `floor(x)` exactly.
pub fn q_floor(x: &QValue) -> BigInt {
    if let Some(r) = x.as_rational() {
        return r.floor();
    }
    // x is irrational, so it is never an integer and the enclosure eventually
    // falls strictly between two consecutive integers.
    let mut bits = start_precision_bits();
    loop {
        let (lo, hi) = enclose(x, bits);
        let f_lo = lo >> bits as usize;
        let f_hi = hi >> bits as usize;
        if f_lo == f_hi {
            return f_lo;
        }
        bits = bits.saturating_mul(2);
    }
}

fn pow10(digits: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), digits as usize)
}

fn render(units: &BigInt, digits: u32, negative: bool) -> String {
    let s = units.to_string();
    let d = digits as usize;
    let padded = if s.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if negative && !units.is_zero() { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Decimal rendering of `x` with `digits` fractional digits, rounded to
/// nearest with ties away from zero.
pub fn q_to_decimal(x: &QValue, digits: u32) -> String {
    let negative = x.is_negative();
    let magnitude = if negative { -x } else { x.clone() };
    let half = QValue::rational(Rational::new(1, 2).unwrap());
    let shifted = magnitude.scale(&Rational::from(pow10(digits))) + half;
    render(&q_floor(&shifted), digits, negative)
}

/// Decimal rendering of `num / den` (`den > 0`) without field division.
///
/// The rounded value is the largest integer `N` with
/// `(N − 1/2)·den ≤ 10^digits·|num|`; an interval estimate seeds `N` and exact
/// comparisons settle it.
pub fn q_ratio_decimal(num: &QValue, den: &QValue, digits: u32) -> String {
    assert!(den.is_positive(), "ratio denominator must be positive");
    let negative = num.is_negative();
    let num = if negative { -num } else { num.clone() };
    let target = num.scale(&Rational::from(pow10(digits)));
    let half = Rational::new(1, 2).unwrap();

    if let (Some(n), Some(d)) = (target.as_rational(), den.as_rational()) {
        let d = d.clone();
        let q = Rational::from_big(n.numer() * d.denom(), n.denom() * d.numer()).unwrap();
        return render(&(q + half).floor(), digits, negative);
    }

    // Refine until the enclosure pins N to two candidates.
    let mut bits = start_precision_bits();
    let mut guess = loop {
        let (t_lo, t_hi) = enclose(&target, bits);
        let (d_lo, d_hi) = enclose(den, bits);
        if d_lo.is_positive() {
            // floor(t/d + 1/2) = floor((2t + d) / 2d)
            let lo = (t_lo.max(BigInt::zero()) * 2u32 + &d_hi).div_floor(&(&d_hi * 2u32));
            let hi = (t_hi * 2u32 + &d_lo).div_floor(&(&d_lo * 2u32));
            if &hi - &lo <= BigInt::one() {
                break lo;
            }
        }
        bits = bits.saturating_mul(2);
    };
    let fits = |n: &BigInt| -> bool {
        let k = &Rational::from(n.clone()) - &half;
        den.scale(&k) <= target
    };
    while fits(&(&guess + 1u32)) {
        guess += 1u32;
    }
    while guess.is_positive() && !fits(&guess) {
        guess -= 1u32;
    }
    render(&guess, digits, negative)
}
