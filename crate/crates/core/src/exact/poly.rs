//! Weighted polynomials in `x, y, z` with exact rational coefficients.
//!
//! Weights are `w(x) = 1`, `w(y) = 2`, `w(z) = 1`; a homogeneous polynomial of
//! weight `w` sits in grade `w - 2` of the polynomial model of the contact
//! algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::rat::{fmt_rat, Rat};
use crate::syntax::{self, Ast, ParseError};

/// Exponent triple `(a, b, c)` of `x^a y^b z^c`.
///
/// Ordered graded-lexicographically by `(weight, a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, z: 0 };

    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Monomial { x, y, z }
    }

    pub fn weight(&self) -> u32 {
        self.x + 2 * self.y + self.z
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.weight(), self.x, self.y, self.z)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Monomial::ONE {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (name, e) in [("x", self.x), ("y", self.y), ("z", self.z)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
}

/// Result of [`WPoly::weighted_grade`] on a nonzero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grade {
    Homogeneous(i32),
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the zero polynomial has no grade")]
    ZeroHasNoGrade,
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl WPoly {
    pub fn zero() -> Self {
        WPoly::default()
    }

    pub fn one() -> Self {
        WPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        WPoly::term(c, Monomial::ONE)
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        WPoly { terms }
    }

    pub fn monomial(x: u32, y: u32, z: u32) -> Self {
        WPoly::term(Rat::one(), Monomial::new(x, y, z))
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => WPoly::monomial(1, 0, 0),
            Var::Y => WPoly::monomial(0, 1, 0),
            Var::Z => WPoly::monomial(0, 0, 1),
        }
    }

    pub fn x() -> Self {
        WPoly::var(Var::X)
    }

    pub fn y() -> Self {
        WPoly::var(Var::Y)
    }

    pub fn z() -> Self {
        WPoly::var(Var::Z)
    }

    /// Parses the polynomial grammar (see [`crate::syntax`]).
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let ast = syntax::parse(text)?;
        lower(&ast)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest monomial in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rat) -> WPoly {
        if c.is_zero() {
            return WPoly::zero();
        }
        WPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &WPoly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            let entry = self.terms.entry(*m).or_insert_with(Rat::zero);
            *entry += v * c;
            if entry.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn pow(&self, n: u32) -> WPoly {
        let mut acc = WPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> WPoly {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, dm) = match v {
                Var::X if m.x > 0 => (m.x, Monomial::new(m.x - 1, m.y, m.z)),
                Var::Y if m.y > 0 => (m.y, Monomial::new(m.x, m.y - 1, m.z)),
                Var::Z if m.z > 0 => (m.z, Monomial::new(m.x, m.y, m.z - 1)),
                _ => continue,
            };
            out.insert(dm, c * Rat::from_integer(e.into()));
        }
        WPoly { terms: out }
    }

    pub fn dx(&self) -> WPoly {
        self.derivative(Var::X)
    }

    pub fn dy(&self) -> WPoly {
        self.derivative(Var::Y)
    }

    pub fn dz(&self) -> WPoly {
        self.derivative(Var::Z)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| match v {
                Var::X => m.x,
                Var::Y => m.y,
                Var::Z => m.z,
            })
            .max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.degree_in(v).is_some_and(|d| d > 0)
    }

    /// Grade `weight - 2` when all monomials share one weight.
    pub fn weighted_grade(&self) -> Result<Grade, PolyError> {
        let mut weights = self.terms.keys().map(Monomial::weight);
        let first = weights.next().ok_or(PolyError::ZeroHasNoGrade)?;
        if weights.all(|w| w == first) {
            Ok(Grade::Homogeneous(first as i32 - 2))
        } else {
            Ok(Grade::Mixed)
        }
    }

    /// Homogeneous grade, `None` for zero or mixed polynomials.
    pub fn grade(&self) -> Option<i32> {
        match self.weighted_grade() {
            Ok(Grade::Homogeneous(g)) => Some(g),
            _ => None,
        }
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, x: &Rat, y: &Rat, z: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * syntax::pow_rat(x, m.x as i32) * syntax::pow_rat(y, m.y as i32) * syntax::pow_rat(z, m.z as i32);
        }
        acc
    }
}

fn lower(ast: &Ast) -> Result<WPoly, ParseError> {
    Ok(match ast {
        Ast::Num(r) => WPoly::constant(r.clone()),
        Ast::Var { name, pos } => match name.as_str() {
            "x" => WPoly::x(),
            "y" => WPoly::y(),
            "z" => WPoly::z(),
            _ => {
                return Err(ParseError::UnknownVariable {
                    name: name.clone(),
                    pos: *pos,
                })
            }
        },
        Ast::Neg(a) => -lower(a)?,
        Ast::Add(a, b) => lower(a)? + lower(b)?,
        Ast::Sub(a, b) => lower(a)? - lower(b)?,
        Ast::Mul(a, b) => lower(a)? * lower(b)?,
        Ast::Div(a, b, pos) => {
            let d = b
                .const_value()
                .filter(|d| !d.is_zero())
                .ok_or(ParseError::Unsupported {
                    pos: *pos,
                    message: "polynomials may only be divided by nonzero constants".into(),
                })?;
            lower(a)?.scale(&d.recip())
        }
        Ast::Pow(a, e, pos) => {
            let n = super::rat::as_i64(e)
                .filter(|n| (0..=u32::MAX as i64).contains(n))
                .ok_or(ParseError::Unsupported {
                    pos: *pos,
                    message: "polynomial exponents must be non-negative integers".into(),
                })?;
            lower(a)?.pow(n as u32)
        }
        Ast::Call { name, pos, .. } => {
            return Err(ParseError::UnknownFunction {
                name: name.clone(),
                pos: *pos,
            })
        }
    })
}

impl FromStr for WPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WPoly::parse(s)
    }
}

impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{}", fmt_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rat(&mag))?;
            }
        }
        Ok(())
    }
}

impl Serialize for WPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        WPoly::parse(&text).map_err(serde::de::Error::custom)
    }
}

impl Add for &WPoly {
    type Output = WPoly;
    fn add(self, rhs: &WPoly) -> WPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rat::one());
        out
    }
}

impl Sub for &WPoly {
    type Output = WPoly;
    fn sub(self, rhs: &WPoly) -> WPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rat::one());
        out
    }
}

impl Mul for &WPoly {
    type Output = WPoly;
    fn mul(self, rhs: &WPoly) -> WPoly {
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e = terms.entry(ma.mul(mb)).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        WPoly { terms }
    }
}

impl Neg for &WPoly {
    type Output = WPoly;
    fn neg(self) -> WPoly {
        WPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for WPoly {
            type Output = WPoly;
            fn $method(self, rhs: WPoly) -> WPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&WPoly> for WPoly {
            type Output = WPoly;
            fn $method(self, rhs: &WPoly) -> WPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for WPoly {
    type Output = WPoly;
    fn neg(self) -> WPoly {
        -&self
    }
}

/// Parses a polynomial literal, panicking on malformed input. For tests and
/// hard-coded catalog data.
pub fn p(text: &str) -> WPoly {
    WPoly::parse(text).unwrap_or_else(|e| panic!("bad polynomial literal {text:?}: {e}"))
}

/// All monomials of weight `w`, in ascending canonical order.
pub fn monomials_of_weight(w: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for b in 0..=w / 2 {
        let rest = w - 2 * b;
        for a in 0..=rest {
            out.push(Monomial::new(a, b, rest - a));
        }
    }
    out.sort();
    out
}

/// Random polynomial with up to `terms` monomials of weight at most
/// `max_weight` and small integer coefficients.
pub fn random_poly<R: rand::Rng + ?Sized>(rng: &mut R, max_weight: u32, terms: usize) -> WPoly {
    let mut acc = WPoly::zero();
    for _ in 0..terms {
        let w = rng.random_range(0..=max_weight);
        acc = acc + random_homogeneous(rng, w, 1);
    }
    acc
}

/// Random polynomial with up to `terms` monomials, all of weight `w`.
pub fn random_homogeneous<R: rand::Rng + ?Sized>(rng: &mut R, w: u32, terms: usize) -> WPoly {
    let monos = monomials_of_weight(w);
    let mut acc = WPoly::zero();
    for _ in 0..terms {
        let m = monos[rng.random_range(0..monos.len())];
        let c = rng.random_range(-3i64..=3);
        acc.add_scaled(&WPoly::term(Rat::one(), m), &super::rat::int(c));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    #[test]
    fn parse_examples() {
        let f = p("2*y - x*z");
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff(&Monomial::new(0, 1, 0)), int(2));
        assert_eq!(f.coeff(&Monomial::new(1, 0, 1)), int(-1));

        let g = p("x^2+z^2");
        assert_eq!(g.coeff(&Monomial::new(2, 0, 0)), int(1));
        assert_eq!(g.coeff(&Monomial::new(0, 0, 2)), int(1));

        // expanded by hand: 4y^2 - 4xyz + x^2 z^2
        let h = p("(2*y-x*z)^2");
        let mut expect = WPoly::zero();
        expect.add_scaled(&WPoly::monomial(0, 2, 0), &int(4));
        expect.add_scaled(&WPoly::monomial(1, 1, 1), &int(-4));
        expect.add_scaled(&WPoly::monomial(2, 0, 2), &int(1));
        assert_eq!(h, expect);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            WPoly::parse("x + w"),
            Err(ParseError::UnknownVariable { pos: 4, .. })
        ));
        assert!(matches!(WPoly::parse("x^-1"), Err(ParseError::Unsupported { .. })));
        assert!(matches!(WPoly::parse("x/y"), Err(ParseError::Unsupported { .. })));
        assert!(matches!(
            WPoly::parse("sin(x)"),
            Err(ParseError::UnknownFunction { .. })
        ));
        assert!(matches!(WPoly::parse("x +* y"), Err(ParseError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(p("2*y - x*z").to_string(), "-x*z + 2*y");
        assert_eq!(p("x/2 - 3").to_string(), "1/2*x - 3");
        assert_eq!(p("0*x").to_string(), "0");
        assert_eq!(p("-x^2*z + y^3").to_string(), "y^3 - x^2*z");
    }

    #[test]
    fn grades() {
        assert_eq!(p("1").weighted_grade(), Ok(Grade::Homogeneous(-2)));
        assert_eq!(p("y").weighted_grade(), Ok(Grade::Homogeneous(0)));
        assert_eq!(p("x^2").weighted_grade(), Ok(Grade::Homogeneous(0)));
        assert_eq!(p("x*z").weighted_grade(), Ok(Grade::Homogeneous(0)));
        assert_eq!(p("x + y").weighted_grade(), Ok(Grade::Mixed));
        assert_eq!(WPoly::zero().weighted_grade(), Err(PolyError::ZeroHasNoGrade));
    }

    #[test]
    fn derivatives_and_eval() {
        let f = p("x^2*y + 3*z^3");
        assert_eq!(f.dx(), p("2*x*y"));
        assert_eq!(f.dz(), p("9*z^2"));
        assert_eq!(f.eval(&int(1), &rat(1, 2), &int(-1)), rat(-5, 2));
        assert_eq!(f.degree_in(Var::Z), Some(3));
    }
}
