//! Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p"`, `"p/q"` or a decimal-free integer into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// An exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: Rational,
    im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::real(Rational::from_integer(v.into()))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Scalar::real(Rational::new(p.into(), q.into()))
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::gaussian(0, 1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `s · conj(s)`, always real and non-negative.
    pub fn norm(&self) -> Self {
        Scalar::real(&self.re * &self.re + &self.im * &self.im)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = &self.re * &self.re + &self.im * &self.im;
        Ok(Scalar { re: &self.re / &d, im: -(&self.im / &d) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts a plain rational (`"-3/4"`); complex values go through the
    /// `{re, im}` object form.
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Scalar::real)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::real(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Scalar { re: &a.re + &b.re, im: &a.im + &b.im });
forward_binop!(Sub, sub, |a, b| Scalar { re: &a.re - &b.re, im: &a.im - &b.im });
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return Scalar::real(&a.re * &b.re);
    }
    Scalar {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
});
forward_binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero scalar");
    a * &inv
});

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

// Wire format: real values as "p/q" strings, complex values as {"re": .., "im": ..}.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.im.is_zero() {
            serializer.serialize_str(&self.re.to_string())
        } else {
            let mut map = serializer.serialize_map(Some(2))?;
            map.serialize_entry("re", &self.re.to_string())?;
            map.serialize_entry("im", &self.im.to_string())?;
            map.end()
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational string \"p/q\", an integer, or {re, im}")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        v.parse::<Scalar>().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::real(Rational::from_integer(v.into())))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Scalar, A::Error> {
        let mut re = None;
        let mut im = None;
        while let Some(key) = map.next_key::<String>()? {
            let value: serde_json::Value = map.next_value()?;
            let parsed = match &value {
                serde_json::Value::String(s) => parse_rational(s).map_err(de::Error::custom)?,
                serde_json::Value::Number(n) if n.is_i64() => {
                    Rational::from_integer(n.as_i64().unwrap().into())
                }
                other => return Err(de::Error::custom(format!("bad scalar component {other}"))),
            };
            match key.as_str() {
                "re" => re = Some(parsed),
                "im" => im = Some(parsed),
                other => return Err(de::Error::unknown_field(other, &["re", "im"])),
            }
        }
        Ok(Scalar::new(re.unwrap_or_default(), im.unwrap_or_default()))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// `#[serde(with = ...)]` helpers writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        parse_rational(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::{parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|r| r.to_string()).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|x| parse_rational(x).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(|(a, b, c, d)| {
            Scalar::new(Rational::new(a.into(), b.into()), Rational::new(c.into(), d.into()))
        })
    }

    proptest! {
        #[test]
        fn conj_is_involutive_and_multiplicative(s in arb_scalar(), t in arb_scalar()) {
            prop_assert_eq!(s.conj().conj(), s.clone());
            prop_assert_eq!((&s * &t).conj(), &s.conj() * &t.conj());
        }

        #[test]
        fn norm_is_real_nonnegative(s in arb_scalar()) {
            let n = s.norm();
            prop_assert!(n.is_real());
            prop_assert!(!n.re().is_negative());
            prop_assert_eq!(n, &s * &s.conj());
        }

        #[test]
        fn inverse_roundtrip(s in arb_scalar()) {
            prop_assume!(!s.is_zero());
            prop_assert!((&s * &s.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn wire_format() {
        let s = Scalar::frac(-3, 4);
        assert_eq!(serde_json::to_string(&s).unwrap(), "\"-3/4\"");
        let c = Scalar::new(Rational::new(1.into(), 2.into()), Rational::from_integer((-2).into()));
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"re":"1/2","im":"-2"}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&js).unwrap(), c);
        assert_eq!(serde_json::from_str::<Scalar>("7").unwrap(), Scalar::from_int(7));
        assert!(serde_json::from_str::<Scalar>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<Scalar>("\"abc\"").is_err());
    }
}
