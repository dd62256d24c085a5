//! JSON form: a pure rational is `"p/q"` (or `"p"`, or a bare integer);
//! anything else is `{"a": .., "b": .., "c": .., "e": ..}` with omitted
//! coefficients read as zero.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::{QValue, Rational};

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Str(String),
    Int(i64),
}

impl RationalRepr {
    fn into_rational<E: de::Error>(self) -> Result<Rational, E> {
        match self {
            RationalRepr::Str(s) => s.parse().map_err(E::custom),
            RationalRepr::Int(n) => Ok(Rational::from_int(n)),
        }
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RationalRepr::deserialize(d)?.into_rational()
    }
}

impl Serialize for QValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(r) = self.as_rational() {
            return r.serialize(s);
        }
        let named = ["a", "b", "c", "e"];
        let nonzero = self.coeffs().iter().filter(|c| !c.is_zero()).count();
        let mut map = s.serialize_map(Some(nonzero))?;
        for (name, coef) in named.iter().zip(self.coeffs()) {
            if !coef.is_zero() {
                map.serialize_entry(name, coef)?;
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Coefficients {
    a: Option<RationalRepr>,
    b: Option<RationalRepr>,
    c: Option<RationalRepr>,
    e: Option<RationalRepr>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QValueRepr {
    Scalar(RationalRepr),
    Object(Coefficients),
}

impl<'de> Deserialize<'de> for QValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        fn coef<E: de::Error>(c: Option<RationalRepr>) -> Result<Rational, E> {
            c.map_or(Ok(Rational::zero()), RationalRepr::into_rational)
        }
        match QValueRepr::deserialize(d)? {
            QValueRepr::Scalar(r) => Ok(QValue::rational(r.into_rational()?)),
            QValueRepr::Object(c) => Ok(QValue::new(coef(c.a)?, coef(c.b)?, coef(c.c)?, coef(c.e)?)),
        }
    }
}
