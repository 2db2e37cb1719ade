//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`, which keeps every value reduced with a
//! positive denominator. The helpers here cover construction, text round-trips
//! and the few integer utilities the algebra kernel needs.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = num_rational::BigRational;

/// `n / d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"3"`, `"-3/4"`; whitespace around the parts is ignored.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Canonical text form: `"3"`, `"-3/4"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Best rational approximation with denominator at most `max_den`, accepted only
/// when it is within `tol` of `value`.
pub fn snap_to_rational(value: f64, max_den: i64, tol: f64) -> Option<Rat> {
    if !value.is_finite() {
        return None;
    }
    // continued-fraction convergents
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut x = value;
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a_i = a as i128;
        let h2 = a_i * h1 + h0;
        let k2 = a_i * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if ((h1 as f64) / (k1 as f64) - value).abs() <= tol {
            return Some(Rat::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = x - a;
        if frac.abs() < 1e-300 {
            break;
        }
        x = 1.0 / frac;
    }
    if k1 != 0 && ((h1 as f64) / (k1 as f64) - value).abs() <= tol {
        Some(Rat::new(BigInt::from(h1), BigInt::from(k1)))
    } else {
        None
    }
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

/// Integer value if `r` is an integer that fits in `i64`.
pub fn as_i64(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Serde adapter storing a `Rat` as its canonical text.
pub mod serde_text {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`")))
    }
}

/// Serde adapter for `Option<Rat>` as text or null.
pub mod serde_text_opt {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&fmt_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|text| parse_rat(&text).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`"))))
            .transpose()
    }
}
