use ewl_core::exactnum::{q_cmp, q_sign, q_to_decimal};
use ewl_core::{QValue, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d).unwrap()),
        1 => Just(Rational::zero()),
    ]
}

fn qvalue() -> impl Strategy<Value = QValue> {
    (rational(), rational(), rational(), rational()).prop_map(|(a, b, c, e)| QValue::new(a, b, c, e))
}

/// `x·10^30·L` to within `err`, computed with integer square roots only.
fn fixed_point(x: &QValue) -> (BigInt, BigInt, BigInt) {
    let ten30 = BigInt::from(10u8).pow(30);
    let coeffs = x.coeffs();
    let l = coeffs.iter().fold(BigInt::from(1), |acc, r| acc.lcm(&r.denom()));
    let mut v = BigInt::zero();
    let mut err = BigInt::zero();
    for (r, m) in coeffs.iter().zip([1u32, 2, 5, 10]) {
        let k = r.numer() * (&l / r.denom());
        let root = if m == 1 {
            ten30.clone()
        } else {
            (BigInt::from(m) * &ten30 * &ten30).sqrt()
        };
        if m != 1 {
            err += k.abs();
        }
        v += k * root;
    }
    (v, err, l)
}

fn decimal_units(s: &str) -> BigInt {
    let neg = s.starts_with('-');
    let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    let n: BigInt = digits.parse().unwrap();
    if neg {
        -n
    } else {
        n
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ring_axioms(x in qvalue(), y in qvalue(), z in qvalue()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &QValue::zero(), x.clone());
        prop_assert_eq!(&x * &QValue::one(), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
        prop_assert_eq!(&x - &y, -(&y - &x));
    }

    #[test]
    fn sign_matches_fixed_point(x in qvalue()) {
        prop_assume!(!x.is_zero());
        let (v, err, l) = fixed_point(&x);
        // Small coefficients keep |x| far above 10^-25.
        prop_assert!(v.abs() > err, "undecided at 30 digits: {}", x);
        let expected = if v.is_positive() { 1 } else { -1 };
        prop_assert_eq!(q_sign(&x), expected);

        let d = decimal_units(&q_to_decimal(&x, 30));
        let gap = (&d * &l - &v).abs();
        prop_assert!(gap <= &err + &l, "decimal {} off for {}", q_to_decimal(&x, 30), x);
    }

    #[test]
    fn order_agrees_with_subtraction(x in qvalue(), y in qvalue()) {
        let diff = q_sign(&(&x - &y));
        prop_assert_eq!(q_cmp(&x, &y) as i32, diff);
        prop_assert_eq!(x.cmp(&y) as i32, diff);
    }

    #[test]
    fn rational_field(a in rational(), b in rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(a.cmp(&b), (a.numer() * b.denom()).cmp(&(b.numer() * a.denom())));
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn serde_round_trip(x in qvalue()) {
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<QValue>(&json).unwrap(), x);
    }
}

#[test]
fn large_values_leave_the_small_form() {
    let big = QValue::from_int(i64::MAX);
    let sq = &big * &big;
    assert_eq!(&sq - &sq, QValue::zero());
    assert!(sq > big);
    let tiny = QValue::new(
        Rational::from_int(-665_857),
        Rational::from_int(470_832),
        Rational::zero(),
        Rational::zero(),
    );
    // 470832·√2 − 665857 ≈ −7.5e-7
    assert_eq!(q_sign(&tiny), -1);
    let squared = &tiny * &tiny;
    assert_eq!(q_sign(&squared), 1);
}
