//! Shared text grammar for polynomials and jet expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := atom ('^' exponent)?
//! exponent := ['-'] integer | '(' expr ')'      -- must fold to a rational constant
//! atom     := integer | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! The parser produces an untyped [`Ast`]; `WPoly` and `JetExpr` each lower it
//! and reject what their grammar does not allow.

use crate::exact::rat::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("unknown function `{name}` at position {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("unsupported construct at position {pos}: {message}")]
    Unsupported { pos: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownVariable { pos, .. }
            | ParseError::UnknownFunction { pos, .. }
            | ParseError::Unsupported { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Num(Rat),
    Var { name: String, pos: usize },
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, Rat, usize),
    Call { name: String, arg: Box<Ast>, pos: usize },
}

impl Ast {
    /// Folds a variable-free, call-free tree to a rational.
    pub fn const_value(&self) -> Option<Rat> {
        match self {
            Ast::Num(r) => Some(r.clone()),
            Ast::Var { .. } | Ast::Call { .. } => None,
            Ast::Neg(a) => a.const_value().map(|v| -v),
            Ast::Add(a, b) => Some(a.const_value()? + b.const_value()?),
            Ast::Sub(a, b) => Some(a.const_value()? - b.const_value()?),
            Ast::Mul(a, b) => Some(a.const_value()? * b.const_value()?),
            Ast::Div(a, b, _) => {
                let d = b.const_value()?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.const_value()? / d)
                }
            }
            Ast::Pow(a, e, _) => {
                let base = a.const_value()?;
                if !e.is_integer() {
                    return None;
                }
                let n: i32 = e.to_integer().try_into().ok()?;
                if n < 0 && base.is_zero() {
                    return None;
                }
                Some(pow_rat(&base, n))
            }
        }
    }
}

pub(crate) fn pow_rat(base: &Rat, n: i32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..n.unsigned_abs() {
        acc *= base;
    }
    if n < 0 {
        acc.recip()
    } else {
        acc
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.len)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                message: format!("expected `{op}`"),
            })
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.eat('-') {
            Ok(Ast::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        let pos = self.pos();
        self.at += 1;
        let exponent = if self.eat('(') {
            let inner_pos = self.pos();
            let e = self.expr()?;
            self.expect(')')?;
            e.const_value().ok_or(ParseError::Syntax {
                pos: inner_pos,
                message: "exponent must be a rational constant".into(),
            })?
        } else {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let r = Rat::from_integer(n);
                    if neg {
                        -r
                    } else {
                        r
                    }
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos: self.pos(),
                        message: "expected integer exponent".into(),
                    })
                }
            }
        };
        Ok(Ast::Pow(Box::new(base), exponent, pos))
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Ast::Num(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Ast::Call {
                        name,
                        arg: Box::new(arg),
                        pos,
                    })
                } else {
                    Ok(Ast::Var { name, pos })
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(ParseError::Syntax {
                pos,
                message: format!("unexpected `{c}`"),
            }),
            None => Err(ParseError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        len: text.chars().count(),
    };
    let ast = p.expr()?;
    if p.at != p.toks.len() {
        return Err(ParseError::Syntax {
            pos: p.pos(),
            message: "trailing input".into(),
        });
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn precedence() {
        let ast = parse("-x^2").unwrap();
        assert!(matches!(ast, Ast::Neg(_)));
        assert_eq!(parse("3/2*4").unwrap().const_value(), Some(rat(6, 1)));
        assert_eq!(parse("2^(-3/2)").unwrap().const_value(), None);
        assert_eq!(parse("2^-2").unwrap().const_value(), Some(rat(1, 4)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("x + ").unwrap_err().position(), 4);
        assert_eq!(parse("x $ y").unwrap_err().position(), 2);
        assert_eq!(parse("(x").unwrap_err().position(), 2);
        assert_eq!(parse("x^y").unwrap_err().position(), 2);
    }
}
