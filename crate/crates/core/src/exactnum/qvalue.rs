use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::Rational;

/// Index of each basis element of Q(√2,√5) over Q.
///
/// The index doubles as a bitmask of the primes under the radical
/// (bit 0 = 2, bit 1 = 5), which makes the multiplication table a XOR.
const BASIS: [u32; 4] = [1, 2, 5, 10];

/// An element `a + b·√2 + c·√5 + e·√10` of the field Q(√2,√5).
///
/// The basis is linearly independent over Q, so the coefficient vector is a
/// unique representation and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QValue {
    coeffs: [Rational; 4],
}

impl QValue {
    pub fn new(a: Rational, b: Rational, c: Rational, e: Rational) -> Self {
        QValue { coeffs: [a, b, c, e] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_int(n))
    }

    /// `num/den` as a pure rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::new(num, den).expect("zero denominator"))
    }

    pub fn rational(a: Rational) -> Self {
        QValue {
            coeffs: [a, Rational::zero(), Rational::zero(), Rational::zero()],
        }
    }

    pub fn sqrt2() -> Self {
        Self::basis(1)
    }

    pub fn sqrt5() -> Self {
        Self::basis(2)
    }

    pub fn sqrt10() -> Self {
        Self::basis(3)
    }

    fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.coeffs[i] = Rational::one();
        v
    }

    /// `√2 − 1`.
    pub fn sqrt2_minus_one() -> Self {
        Self::sqrt2() - Self::one()
    }

    /// `√5 − 1`.
    pub fn sqrt5_minus_one() -> Self {
        Self::sqrt5() - Self::one()
    }

    /// `(√5 − 1)/2`.
    pub fn half_sqrt5_minus_one() -> Self {
        Self::sqrt5_minus_one().scale(&Rational::new(1, 2).unwrap())
    }

    pub fn a(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn b(&self) -> &Rational {
        &self.coeffs[1]
    }

    pub fn c(&self) -> &Rational {
        &self.coeffs[2]
    }

    pub fn e(&self) -> &Rational {
        &self.coeffs[3]
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub(crate) fn radicands() -> &'static [u32; 4] {
        &BASIS
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// True when the √2, √5 and √10 coefficients all vanish.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    pub fn scale(&self, k: &Rational) -> Self {
        QValue {
            coeffs: [
                &self.coeffs[0] * k,
                &self.coeffs[1] * k,
                &self.coeffs[2] * k,
                &self.coeffs[3] * k,
            ],
        }
    }

    /// Exact sign: -1, 0 or +1. See [`super::q_sign`].
    pub fn signum(&self) -> i32 {
        super::sign::q_sign(self)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Lossy approximation for sampling and display; never used to decide.
    pub fn approx_f64(&self) -> f64 {
        let roots = [1.0, std::f64::consts::SQRT_2, 5f64.sqrt(), 10f64.sqrt()];
        self.coeffs.iter().zip(roots).map(|(c, r)| c.to_f64() * r).sum()
    }
}

impl Ord for QValue {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.is_rational() && other.is_rational() {
            return self.coeffs[0].cmp(&other.coeffs[0]);
        }
        match (self - other).signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialOrd for QValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QValue> for &'a QValue {
    type Output = QValue;
    fn add(self, rhs: &'a QValue) -> QValue {
        QValue {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
        }
    }
}

impl<'a> Sub<&'a QValue> for &'a QValue {
    type Output = QValue;
    fn sub(self, rhs: &'a QValue) -> QValue {
        QValue {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
        }
    }
}

impl<'a> Mul<&'a QValue> for &'a QValue {
    type Output = QValue;
    fn mul(self, rhs: &'a QValue) -> QValue {
        let mut out: [Rational; 4] = Default::default();
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                // √m·√n = √(m/g · n/g) · g for the shared primes g.
                let shared = i & j;
                let factor = match shared {
                    0 => 1,
                    1 => 2,
                    2 => 5,
                    _ => 10,
                };
                let term = x * y;
                let term = if factor == 1 {
                    term
                } else {
                    &term * &Rational::from_int(factor)
                };
                out[i ^ j] = &out[i ^ j] + &term;
            }
        }
        QValue { coeffs: out }
    }
}

impl Neg for &QValue {
    type Output = QValue;
    fn neg(self) -> QValue {
        QValue {
            coeffs: std::array::from_fn(|i| -&self.coeffs[i]),
        }
    }
}

impl Neg for QValue {
    type Output = QValue;
    fn neg(self) -> QValue {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QValue> for QValue {
            type Output = QValue;
            fn $m(self, rhs: QValue) -> QValue {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QValue> for QValue {
            type Output = QValue;
            fn $m(self, rhs: &'a QValue) -> QValue {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QValue> for &'a QValue {
            type Output = QValue;
            fn $m(self, rhs: QValue) -> QValue {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for QValue {
    fn sum<I: Iterator<Item = QValue>>(iter: I) -> Self {
        iter.fold(QValue::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a QValue> for QValue {
    fn sum<I: Iterator<Item = &'a QValue>>(iter: I) -> Self {
        iter.fold(QValue::zero(), |acc, x| acc + x)
    }
}

impl From<Rational> for QValue {
    fn from(r: Rational) -> Self {
        QValue::rational(r)
    }
}

impl From<i64> for QValue {
    fn from(n: i64) -> Self {
        QValue::from_int(n)
    }
}

/// Human-readable form such as `-1 + √2` or `1/2·√5 - 1/2`.
impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["", "√2", "√5", "√10"];
        let mut wrote = false;
        for (coef, name) in self.coeffs.iter().zip(NAMES) {
            if coef.is_zero() {
                continue;
            }
            let neg = coef.signum() < 0;
            let mag = coef.abs();
            match (wrote, neg) {
                (false, true) => write!(f, "-")?,
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, false) => {}
            }
            if name.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == Rational::one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}·{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QValue({self})")
    }
}
