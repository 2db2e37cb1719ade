//! Numeric evaluation of [`JetExpr`] trees in `f64` or in software floats.

use std::collections::HashMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::expr::{Func, JetExpr, JetVar, Node, MAX_ORDER};
use crate::exact::rat::{to_f64, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("variable {0} is not bound")]
    Unbound(JetVar),
    #[error("domain error in `{subtree}`")]
    Domain { subtree: String },
}

/// Scalar arithmetic used by [`evaluate_with`].
pub trait Arith {
    type Value: Clone;

    fn constant(&mut self, c: &Rat) -> Self::Value;
    fn add(&mut self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&mut self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// Real power; `None` outside the domain (even roots of negatives, `0^-n`).
    fn pow(&mut self, a: &Self::Value, e: &Rat) -> Option<Self::Value>;
    fn func(&mut self, f: Func, a: &Self::Value) -> Self::Value;
    fn is_finite(&self, a: &Self::Value) -> bool;
}

/// A point of `J^9`: `x` and `y0 … y9`, any of which may be unbound.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPoint<T> {
    values: Vec<Option<T>>,
}

impl<T: Clone> JetPoint<T> {
    pub fn new() -> Self {
        JetPoint {
            values: vec![None; MAX_ORDER as usize + 2],
        }
    }

    pub fn with(mut self, v: JetVar, value: T) -> Self {
        self.set(v, value);
        self
    }

    pub fn set(&mut self, v: JetVar, value: T) {
        self.values[v.slot()] = Some(value);
    }

    pub fn get(&self, v: JetVar) -> Option<&T> {
        self.values[v.slot()].as_ref()
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> JetPoint<U> {
        JetPoint {
            values: self.values.iter().map(|v| v.as_ref().map(&mut f)).collect(),
        }
    }
}

impl<T: Clone> Default for JetPoint<T> {
    fn default() -> Self {
        Self::new()
    }
}

pub fn evaluate_with<A: Arith>(e: &JetExpr, arith: &mut A, point: &JetPoint<A::Value>) -> Result<A::Value, EvalError> {
    let mut memo = HashMap::new();
    eval_rec(e, arith, point, &mut memo)
}

fn eval_rec<A: Arith>(
    e: &JetExpr,
    arith: &mut A,
    point: &JetPoint<A::Value>,
    memo: &mut HashMap<usize, A::Value>,
) -> Result<A::Value, EvalError> {
    if let Some(v) = memo.get(&e.id()) {
        return Ok(v.clone());
    }
    let domain = || EvalError::Domain { subtree: e.to_string() };
    let v = match e.node() {
        Node::Const(c) => arith.constant(c),
        Node::Var(v) => point.get(*v).cloned().ok_or(EvalError::Unbound(*v))?,
        Node::Add(ts) => {
            let mut acc = eval_rec(&ts[0], arith, point, memo)?;
            for t in &ts[1..] {
                let v = eval_rec(t, arith, point, memo)?;
                acc = arith.add(&acc, &v);
            }
            acc
        }
        Node::Mul(fs) => {
            let mut acc = eval_rec(&fs[0], arith, point, memo)?;
            for f in &fs[1..] {
                let v = eval_rec(f, arith, point, memo)?;
                acc = arith.mul(&acc, &v);
            }
            acc
        }
        Node::Pow(b, r) => {
            let base = eval_rec(b, arith, point, memo)?;
            arith.pow(&base, r).ok_or_else(domain)?
        }
        Node::Func(f, a) => {
            let arg = eval_rec(a, arith, point, memo)?;
            arith.func(*f, &arg)
        }
    };
    if !arith.is_finite(&v) {
        return Err(domain());
    }
    memo.insert(e.id(), v.clone());
    Ok(v)
}

/// Double-precision arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct F64;

impl Arith for F64 {
    type Value = f64;

    fn constant(&mut self, c: &Rat) -> f64 {
        to_f64(c)
    }

    fn add(&mut self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn mul(&mut self, a: &f64, b: &f64) -> f64 {
        a * b
    }

    fn pow(&mut self, a: &f64, e: &Rat) -> Option<f64> {
        if e.is_integer() {
            let n = e.to_i32()?;
            if *a == 0.0 && n < 0 {
                return None;
            }
            return Some(a.powi(n));
        }
        let num = e.numer().to_i64()?;
        let den = e.denom().to_i64()?;
        if *a == 0.0 {
            return (num > 0).then_some(0.0);
        }
        if *a < 0.0 {
            if den.is_even() {
                return None;
            }
            let m = (-a).powf(num as f64 / den as f64);
            return Some(if num.is_odd() { -m } else { m });
        }
        Some(a.powf(num as f64 / den as f64))
    }

    fn func(&mut self, f: Func, a: &f64) -> f64 {
        match f {
            Func::Exp => a.exp(),
            Func::Atan => a.atan(),
            Func::Sin => a.sin(),
            Func::Cos => a.cos(),
            Func::Sinh => a.sinh(),
            Func::Cosh => a.cosh(),
        }
    }

    fn is_finite(&self, a: &f64) -> bool {
        a.is_finite()
    }
}

/// Binary-float arithmetic at a fixed precision in bits.
pub struct HighPrecision {
    bits: usize,
    rm: RoundingMode,
    consts: Consts,
}

impl HighPrecision {
    /// 256 bits, about 77 significant decimal digits.
    pub const DEFAULT_BITS: usize = 256;

    pub fn new(bits: usize) -> Self {
        HighPrecision {
            bits,
            rm: RoundingMode::ToEven,
            consts: Consts::new().expect("astro-float constants cache"),
        }
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn to_f64(&self, v: &BigFloat) -> f64 {
        let text = format!("{v}");
        text.parse().unwrap_or(f64::NAN)
    }

    pub fn abs(&self, v: &BigFloat) -> BigFloat {
        v.abs()
    }

    pub fn sub(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, self.rm)
    }

    pub fn div(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, self.rm)
    }
}

impl Default for HighPrecision {
    fn default() -> Self {
        Self::new(Self::DEFAULT_BITS)
    }
}

impl Arith for HighPrecision {
    type Value = BigFloat;

    fn constant(&mut self, c: &Rat) -> BigFloat {
        let n = BigFloat::parse(&c.numer().to_string(), Radix::Dec, self.bits, self.rm, &mut self.consts);
        let d = BigFloat::parse(&c.denom().to_string(), Radix::Dec, self.bits, self.rm, &mut self.consts);
        n.div(&d, self.bits, self.rm)
    }

    fn add(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, self.rm)
    }

    fn mul(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, self.rm)
    }

    fn pow(&mut self, a: &BigFloat, e: &Rat) -> Option<BigFloat> {
        let negative = a.is_negative();
        if a.is_zero() {
            return e.is_positive().then(|| BigFloat::from_f64(0.0, self.bits));
        }
        let magnitude = if e.is_integer() {
            let n = e.numer().abs().to_usize()?;
            a.abs().powi(n, self.bits, self.rm)
        } else {
            if negative && e.denom().is_even() {
                return None;
            }
            let exponent = self.constant(&e.abs());
            let abs = a.abs();
            abs.pow(&exponent, self.bits, self.rm, &mut self.consts)
        };
        let magnitude = if e.is_negative() {
            magnitude.reciprocal(self.bits, self.rm)
        } else {
            magnitude
        };
        Some(if negative && e.numer().is_odd() {
            magnitude.neg()
        } else {
            magnitude
        })
    }

    fn func(&mut self, f: Func, a: &BigFloat) -> BigFloat {
        let (p, rm, cc) = (self.bits, self.rm, &mut self.consts);
        match f {
            Func::Exp => a.exp(p, rm, cc),
            Func::Atan => a.atan(p, rm, cc),
            Func::Sin => a.sin(p, rm, cc),
            Func::Cos => a.cos(p, rm, cc),
            Func::Sinh => a.sinh(p, rm, cc),
            Func::Cosh => a.cosh(p, rm, cc),
        }
    }

    fn is_finite(&self, a: &BigFloat) -> bool {
        !(a.is_nan() || a.is_inf())
    }
}

impl JetExpr {
    /// Double-precision value at `point`.
    ///
    /// ```
    /// use contact_lie::jet::{JetExpr, JetPoint, JetVar};
    ///
    /// let e = JetExpr::parse("sqrt(1 + z^2)*sinh(x)").unwrap();
    /// let at = JetPoint::new().with(JetVar::X, 0.0).with(JetVar::Y(1), 1.0);
    /// assert_eq!(e.evaluate(&at).unwrap(), 0.0);
    /// ```
    pub fn evaluate(&self, point: &JetPoint<f64>) -> Result<f64, EvalError> {
        evaluate_with(self, &mut F64, point)
    }
}
