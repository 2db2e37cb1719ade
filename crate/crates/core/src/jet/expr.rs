//! Expression trees over the jet coordinates `x, y0, …, y9`.
//!
//! Every constructor returns a structurally canonical tree: sums and products
//! are flattened and sorted, constants are folded, like terms and like powers
//! are merged. Nothing beyond that is attempted; two trees that differ
//! structurally may still be equal as functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::JetError;
use crate::exact::rat::{fmt_rat, Rat};
use crate::exact::WPoly;
use crate::syntax::{self, pow_rat, Ast, ParseError};

/// Highest jet index available.
pub const MAX_ORDER: u8 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetVar {
    X,
    Y(u8),
}

impl JetVar {
    /// `Some(k)` for `y_k`.
    pub fn order(self) -> Option<u8> {
        match self {
            JetVar::X => None,
            JetVar::Y(k) => Some(k),
        }
    }

    /// Slot in a dense point: `x` first, then `y0 … y9`.
    pub fn slot(self) -> usize {
        match self {
            JetVar::X => 0,
            JetVar::Y(k) => 1 + k as usize,
        }
    }

    pub fn all() -> impl Iterator<Item = JetVar> {
        std::iter::once(JetVar::X).chain((0..=MAX_ORDER).map(JetVar::Y))
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetVar::X => f.write_str("x"),
            JetVar::Y(k) => write!(f, "y{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Atan,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Atan => "atan",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "atan" | "arctan" | "arctg" => Func::Atan,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    /// Value at zero when it is rational.
    fn at_zero(self) -> Rat {
        match self {
            Func::Exp | Func::Cos | Func::Cosh => Rat::one(),
            Func::Atan | Func::Sin | Func::Sinh => Rat::zero(),
        }
    }
}

/// Node kinds. The variant order is the sort order of children, so constants
/// always lead a product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Const(Rat),
    Var(JetVar),
    Pow(JetExpr, Rat),
    Func(Func, JetExpr),
    Mul(Vec<JetExpr>),
    Add(Vec<JetExpr>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetExpr(Arc<Node>);

impl fmt::Debug for JetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetExpr({self})")
    }
}

impl JetExpr {
    fn raw(node: Node) -> Self {
        JetExpr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// Identity of the shared node, used as a memo key.
    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(c: Rat) -> Self {
        Self::raw(Node::Const(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rat::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var(v: JetVar) -> Self {
        Self::raw(Node::Var(v))
    }

    pub fn x() -> Self {
        Self::var(JetVar::X)
    }

    pub fn y(k: u8) -> Self {
        Self::var(JetVar::Y(k))
    }

    pub fn as_const(&self) -> Option<&Rat> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    /// Splits `c·rest` with `rest` free of a constant factor.
    fn split_coeff(&self) -> (Rat, JetExpr) {
        match self.node() {
            Node::Const(c) => (c.clone(), JetExpr::one()),
            Node::Mul(fs) => match fs[0].node() {
                Node::Const(c) => {
                    let rest = if fs.len() == 2 {
                        fs[1].clone()
                    } else {
                        Self::raw(Node::Mul(fs[1..].to_vec()))
                    };
                    (c.clone(), rest)
                }
                _ => (Rat::one(), self.clone()),
            },
            _ => (Rat::one(), self.clone()),
        }
    }

    /// `c·rest` for a `rest` produced by [`split_coeff`](Self::split_coeff).
    fn with_coeff(c: Rat, rest: JetExpr) -> JetExpr {
        if c.is_zero() {
            return JetExpr::zero();
        }
        if c.is_one() {
            return rest;
        }
        match rest.node() {
            Node::Const(r) => JetExpr::constant(c * r),
            Node::Mul(fs) => {
                let mut v = Vec::with_capacity(fs.len() + 1);
                v.push(JetExpr::constant(c));
                v.extend(fs.iter().cloned());
                Self::raw(Node::Mul(v))
            }
            _ => Self::raw(Node::Mul(vec![JetExpr::constant(c), rest])),
        }
    }

    pub fn sum<I: IntoIterator<Item = JetExpr>>(terms: I) -> JetExpr {
        let mut acc: BTreeMap<JetExpr, Rat> = BTreeMap::new();
        let mut push = |t: &JetExpr| {
            let (c, rest) = t.split_coeff();
            *acc.entry(rest).or_insert_with(Rat::zero) += c;
        };
        for t in terms {
            match t.node() {
                Node::Add(ts) => ts.iter().for_each(&mut push),
                _ => push(&t),
            }
        }
        let mut out: Vec<JetExpr> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(rest, c)| Self::with_coeff(c, rest))
            .collect();
        match out.len() {
            0 => JetExpr::zero(),
            1 => out.pop().expect("one term"),
            _ => {
                out.sort();
                Self::raw(Node::Add(out))
            }
        }
    }

    pub fn product<I: IntoIterator<Item = JetExpr>>(factors: I) -> JetExpr {
        let mut coeff = Rat::one();
        let mut powers: BTreeMap<JetExpr, Rat> = BTreeMap::new();
        let mut push = |f: &JetExpr, coeff: &mut Rat| match f.node() {
            Node::Const(c) => *coeff *= c,
            Node::Pow(b, e) => *powers.entry(b.clone()).or_insert_with(Rat::zero) += e,
            _ => *powers.entry(f.clone()).or_insert_with(Rat::zero) += Rat::one(),
        };
        for f in factors {
            match f.node() {
                Node::Mul(fs) => fs.iter().for_each(|g| push(g, &mut coeff)),
                _ => push(&f, &mut coeff),
            }
        }
        if coeff.is_zero() {
            return JetExpr::zero();
        }
        let mut out = Vec::new();
        for (base, e) in powers {
            if e.is_zero() {
                continue;
            }
            let f = base.pow(&e);
            match f.node() {
                Node::Const(c) => coeff *= c,
                Node::Mul(fs) => out.extend(fs.iter().cloned()),
                _ => out.push(f),
            }
        }
        out.sort();
        if out.is_empty() {
            return JetExpr::constant(coeff);
        }
        // re-splitting may have produced a constant leader or duplicate bases
        if out.iter().any(|f| matches!(f.node(), Node::Const(_)))
            || out.windows(2).any(|w| base_of(&w[0]) == base_of(&w[1]))
        {
            out.push(JetExpr::constant(coeff));
            return JetExpr::product(out);
        }
        let rest = if out.len() == 1 {
            out.pop().expect("one factor")
        } else {
            Self::raw(Node::Mul(out))
        };
        Self::with_coeff(coeff, rest)
    }

    /// `self^e`. Powers of powers merge only for integer outer exponents, so
    /// `(u²)^(1/2)` is kept as written.
    pub fn pow(&self, e: &Rat) -> JetExpr {
        if e.is_zero() {
            return JetExpr::one();
        }
        if e.is_one() {
            return self.clone();
        }
        match self.node() {
            Node::Const(c) => {
                if e.is_integer() && !(c.is_zero() && e.is_negative()) {
                    let n: i32 = e.to_integer().try_into().expect("small exponent");
                    return JetExpr::constant(pow_rat(c, n));
                }
                if c.is_one() || (c.is_zero() && e.is_positive()) {
                    return self.clone();
                }
            }
            Node::Pow(b, e2) if e.is_integer() => return b.pow(&(e2 * e)),
            Node::Mul(fs) if e.is_integer() => return JetExpr::product(fs.iter().map(|f| f.pow(e))),
            _ => {}
        }
        Self::raw(Node::Pow(self.clone(), e.clone()))
    }

    pub fn powi(&self, n: i64) -> JetExpr {
        self.pow(&Rat::from_integer(n.into()))
    }

    pub fn sqrt(&self) -> JetExpr {
        self.pow(&Rat::new(1.into(), 2.into()))
    }

    pub fn recip(&self) -> JetExpr {
        self.powi(-1)
    }

    pub fn apply(f: Func, arg: JetExpr) -> JetExpr {
        if arg.is_zero() {
            return JetExpr::constant(f.at_zero());
        }
        Self::raw(Node::Func(f, arg))
    }

    pub fn exp(&self) -> JetExpr {
        Self::apply(Func::Exp, self.clone())
    }

    pub fn atan(&self) -> JetExpr {
        Self::apply(Func::Atan, self.clone())
    }

    pub fn sin(&self) -> JetExpr {
        Self::apply(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> JetExpr {
        Self::apply(Func::Cos, self.clone())
    }

    pub fn sinh(&self) -> JetExpr {
        Self::apply(Func::Sinh, self.clone())
    }

    pub fn cosh(&self) -> JetExpr {
        Self::apply(Func::Cosh, self.clone())
    }

    pub fn scale(&self, c: &Rat) -> JetExpr {
        JetExpr::product([JetExpr::constant(c.clone()), self.clone()])
    }

    /// Partial derivative.
    ///
    /// ```
    /// use contact_lie::jet::{JetExpr, JetVar};
    ///
    /// let e = JetExpr::parse("atan(y2)").unwrap();
    /// assert_eq!(e.diff(JetVar::Y(2)), JetExpr::parse("(1 + y2^2)^(-1)").unwrap());
    /// ```
    pub fn diff(&self, v: JetVar) -> JetExpr {
        let mut memo = BTreeMap::new();
        self.diff_memo(v, &mut memo)
    }

    fn diff_memo(&self, v: JetVar, memo: &mut BTreeMap<usize, JetExpr>) -> JetExpr {
        if let Some(d) = memo.get(&self.id()) {
            return d.clone();
        }
        let d = match self.node() {
            Node::Const(_) => JetExpr::zero(),
            Node::Var(w) => {
                if *w == v {
                    JetExpr::one()
                } else {
                    JetExpr::zero()
                }
            }
            Node::Add(ts) => JetExpr::sum(ts.iter().map(|t| t.diff_memo(v, memo))),
            Node::Mul(fs) => {
                let mut terms = Vec::new();
                for i in 0..fs.len() {
                    let di = fs[i].diff_memo(v, memo);
                    if di.is_zero() {
                        continue;
                    }
                    let mut factors = fs.clone();
                    factors[i] = di;
                    terms.push(JetExpr::product(factors));
                }
                JetExpr::sum(terms)
            }
            Node::Pow(b, e) => {
                let db = b.diff_memo(v, memo);
                if db.is_zero() {
                    JetExpr::zero()
                } else {
                    JetExpr::product([JetExpr::constant(e.clone()), b.pow(&(e - Rat::one())), db])
                }
            }
            Node::Func(f, a) => {
                let da = a.diff_memo(v, memo);
                if da.is_zero() {
                    JetExpr::zero()
                } else {
                    let outer = match f {
                        Func::Exp => self.clone(),
                        Func::Atan => (JetExpr::one() + a.powi(2)).recip(),
                        Func::Sin => a.cos(),
                        Func::Cos => -a.sin(),
                        Func::Sinh => a.cosh(),
                        Func::Cosh => a.sinh(),
                    };
                    outer * da
                }
            }
        };
        memo.insert(self.id(), d.clone());
        d
    }

    /// Rebuilds the tree with every variable replaced.
    pub fn substitute(&self, f: &impl Fn(JetVar) -> JetExpr) -> JetExpr {
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(v) => f(*v),
            Node::Add(ts) => JetExpr::sum(ts.iter().map(|t| t.substitute(f))),
            Node::Mul(fs) => JetExpr::product(fs.iter().map(|t| t.substitute(f))),
            Node::Pow(b, e) => b.substitute(f).pow(e),
            Node::Func(g, a) => JetExpr::apply(*g, a.substitute(f)),
        }
    }

    /// Replaces every `y_i` by `y_{i+1}`.
    ///
    /// ```
    /// use contact_lie::jet::JetExpr;
    ///
    /// let e = JetExpr::parse("y2*y4/y3^2").unwrap();
    /// assert_eq!(e.shift_indices().unwrap(), JetExpr::parse("y3*y5/y4^2").unwrap());
    /// ```
    pub fn shift_indices(&self) -> Result<JetExpr, JetError> {
        if let Some(k) = self.max_order() {
            if k >= MAX_ORDER {
                return Err(JetError::OrderOverflow { order: k + 1 });
            }
        }
        Ok(self.substitute(&|v| match v {
            JetVar::X => JetExpr::x(),
            JetVar::Y(k) => JetExpr::y(k + 1),
        }))
    }

    pub fn vars(&self) -> BTreeSet<JetVar> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<JetVar>) {
        match self.node() {
            Node::Const(_) => {}
            Node::Var(v) => {
                out.insert(*v);
            }
            Node::Add(ts) | Node::Mul(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Node::Pow(b, _) | Node::Func(_, b) => b.collect_vars(out),
        }
    }

    /// Highest `k` with `y_k` occurring.
    pub fn max_order(&self) -> Option<u8> {
        self.vars().into_iter().filter_map(JetVar::order).max()
    }

    /// Number of nodes counted with multiplicity.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Add(ts) | Node::Mul(ts) => 1 + ts.iter().map(JetExpr::size).sum::<usize>(),
            Node::Pow(b, _) | Node::Func(_, b) => 1 + b.size(),
        }
    }

    /// Lifts a polynomial in `x, y, z` with `y ↦ y0`, `z ↦ y1`.
    pub fn from_wpoly(p: &WPoly) -> JetExpr {
        JetExpr::sum(p.terms().map(|(m, c)| {
            JetExpr::product([
                JetExpr::constant(c.clone()),
                JetExpr::x().powi(m.x.into()),
                JetExpr::y(0).powi(m.y.into()),
                JetExpr::y(1).powi(m.z.into()),
            ])
        }))
    }

    /// Expands a polynomial tree in `x, y0, y1` back to a [`WPoly`]; `None`
    /// if any other variable, function or non-natural power occurs.
    pub fn to_wpoly(&self) -> Option<WPoly> {
        Some(match self.node() {
            Node::Const(c) => WPoly::constant(c.clone()),
            Node::Var(JetVar::X) => WPoly::x(),
            Node::Var(JetVar::Y(0)) => WPoly::y(),
            Node::Var(JetVar::Y(1)) => WPoly::z(),
            Node::Var(_) | Node::Func(..) => return None,
            Node::Add(ts) => {
                let mut acc = WPoly::zero();
                for t in ts {
                    acc = &acc + &t.to_wpoly()?;
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = WPoly::one();
                for f in fs {
                    acc = &acc * &f.to_wpoly()?;
                }
                acc
            }
            Node::Pow(b, e) => {
                if !e.is_integer() || e.is_negative() {
                    return None;
                }
                b.to_wpoly()?.pow(e.to_integer().try_into().ok()?)
            }
        })
    }

    /// Parses the jet grammar: the polynomial grammar plus `exp`, `atan`
    /// (alias `arctg`), `sqrt`, `sin`, `cos`, `sinh`, `cosh` and the variables
    /// `x`, `y0 … y9`. `y` and `z` are accepted as `y0` and `y1`.
    pub fn parse(text: &str) -> Result<JetExpr, ParseError> {
        lower(&syntax::parse(text)?)
    }
}

fn base_of(e: &JetExpr) -> &JetExpr {
    match e.node() {
        Node::Pow(b, _) => b,
        _ => e,
    }
}

fn lower(ast: &Ast) -> Result<JetExpr, ParseError> {
    Ok(match ast {
        Ast::Num(r) => JetExpr::constant(r.clone()),
        Ast::Var { name, pos } => JetExpr::var(parse_var(name).ok_or_else(|| ParseError::UnknownVariable {
            name: name.clone(),
            pos: *pos,
        })?),
        Ast::Neg(a) => -lower(a)?,
        Ast::Add(a, b) => lower(a)? + lower(b)?,
        Ast::Sub(a, b) => lower(a)? - lower(b)?,
        Ast::Mul(a, b) => lower(a)? * lower(b)?,
        Ast::Div(a, b, pos) => {
            let d = lower(b)?;
            if d.is_zero() {
                return Err(ParseError::Unsupported {
                    pos: *pos,
                    message: "division by zero".into(),
                });
            }
            lower(a)? / d
        }
        Ast::Pow(a, e, _) => lower(a)?.pow(e),
        Ast::Call { name, arg, pos } => {
            let a = lower(arg)?;
            if name == "sqrt" {
                a.sqrt()
            } else {
                let f = Func::from_name(name).ok_or_else(|| ParseError::UnknownFunction {
                    name: name.clone(),
                    pos: *pos,
                })?;
                JetExpr::apply(f, a)
            }
        }
    })
}

fn parse_var(name: &str) -> Option<JetVar> {
    match name {
        "x" => Some(JetVar::X),
        "y" => Some(JetVar::Y(0)),
        "z" => Some(JetVar::Y(1)),
        _ => {
            let k: u8 = name.strip_prefix('y')?.parse().ok()?;
            (k <= MAX_ORDER && name.len() == 2).then_some(JetVar::Y(k))
        }
    }
}

impl std::str::FromStr for JetExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        JetExpr::parse(s)
    }
}

impl Add for JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: JetExpr) -> JetExpr {
        JetExpr::sum([self, rhs])
    }
}

impl Sub for JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: JetExpr) -> JetExpr {
        JetExpr::sum([self, -rhs])
    }
}

impl Mul for JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: JetExpr) -> JetExpr {
        JetExpr::product([self, rhs])
    }
}

impl Div for JetExpr {
    type Output = JetExpr;
    fn div(self, rhs: JetExpr) -> JetExpr {
        JetExpr::product([self, rhs.recip()])
    }
}

impl Neg for JetExpr {
    type Output = JetExpr;
    fn neg(self) -> JetExpr {
        self.scale(&-Rat::one())
    }
}

impl<'a> Add<&'a JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: &JetExpr) -> JetExpr {
        JetExpr::sum([self.clone(), rhs.clone()])
    }
}

impl<'a> Sub<&'a JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: &JetExpr) -> JetExpr {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a JetExpr> for &'a JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: &JetExpr) -> JetExpr {
        JetExpr::product([self.clone(), rhs.clone()])
    }
}

impl Neg for &JetExpr {
    type Output = JetExpr;
    fn neg(self) -> JetExpr {
        -self.clone()
    }
}

// Display: precedence 0 = sum, 1 = product, 2 = power base / atom.
impl JetExpr {
    fn write(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self.node() {
            Node::Const(c) => {
                let needs = (prec >= 1 && c.is_negative()) || (prec >= 2 && !c.is_integer());
                if needs {
                    write!(f, "({})", fmt_rat(c))
                } else {
                    f.write_str(&fmt_rat(c))
                }
            }
            Node::Var(v) => write!(f, "{v}"),
            Node::Func(g, a) => {
                write!(f, "{}(", g.name())?;
                a.write(f, 0)?;
                f.write_str(")")
            }
            Node::Pow(b, e) => {
                if prec >= 2 {
                    f.write_str("(")?;
                }
                b.write(f, 2)?;
                if e.is_integer() && e.is_positive() {
                    write!(f, "^{}", fmt_rat(e))?;
                } else {
                    write!(f, "^({})", fmt_rat(e))?;
                }
                if prec >= 2 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Node::Mul(_) => {
                let (c, rest) = self.split_coeff();
                if prec >= 1 {
                    f.write_str("(")?;
                }
                self.write_product(f, &c, &rest)?;
                if prec >= 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Node::Add(ts) => {
                if prec >= 1 {
                    f.write_str("(")?;
                }
                for (i, t) in ts.iter().enumerate() {
                    let (c, rest) = t.split_coeff();
                    if i > 0 {
                        f.write_str(if c.is_negative() { " - " } else { " + " })?;
                        self.write_product(f, &c.abs(), &rest)?;
                    } else {
                        self.write_product(f, &c, &rest)?;
                    }
                }
                if prec >= 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }

    /// Writes `c·rest` at sum level.
    fn write_product(&self, f: &mut fmt::Formatter<'_>, c: &Rat, rest: &JetExpr) -> fmt::Result {
        if rest.is_one() {
            return f.write_str(&fmt_rat(c));
        }
        if *c == -Rat::one() {
            f.write_str("-")?;
        } else if !c.is_one() {
            write!(f, "{}*", fmt_rat(c))?;
        }
        match rest.node() {
            Node::Mul(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    g.write(f, 1)?;
                }
                Ok(())
            }
            _ => rest.write(f, 1),
        }
    }
}

impl fmt::Display for JetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
