//! Univariate polynomials over the rationals: characteristic polynomials,
//! rational roots and Sturm counts of real roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::Matrix;
use super::rat::Rat;

/// Coefficients in ascending order; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean remainder.
    pub fn rem(&self, d: &UPoly) -> UPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    r[top - dd + i] -= &q * c;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Sign of `p` at `+inf` (`at_pos`) or `-inf`.
    fn sign_at_infinity(&self, at_pos: bool) -> i32 {
        let Some(d) = self.degree() else { return 0 };
        let s = if self.coeffs[d].is_positive() { 1 } else { -1 };
        if at_pos || d % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Number of distinct real roots, by Sturm's theorem.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(UPoly::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        let changes = |at_pos: bool| {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| p.sign_at_infinity(at_pos))
                .filter(|s| *s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        changes(false) - changes(true)
    }

    /// All distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let Some(_) = self.degree() else {
            return Vec::new();
        };
        let mut roots = Vec::new();
        // strip the zero root
        let mut coeffs = self.coeffs.clone();
        if coeffs[0].is_zero() {
            roots.push(Rat::zero());
            while coeffs.first().is_some_and(Zero::is_zero) {
                coeffs.remove(0);
            }
        }
        if coeffs.len() > 1 {
            let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = coeffs
                .iter()
                .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
                .collect();
            let p = UPoly::new(coeffs);
            let num = divisors(&ints[0].abs());
            let den = divisors(&ints[ints.len() - 1].abs());
            for a in &num {
                for b in &den {
                    for s in [1, -1] {
                        let r = Rat::new(a * BigInt::from(s), b.clone());
                        if !roots.contains(&r) && p.eval(&r).is_zero() {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// Characteristic polynomial `det(tI - m)`, by Faddeev–LeVerrier.
pub fn char_poly(m: &Matrix) -> UPoly {
    let n = m.rows();
    assert_eq!(n, m.cols(), "square matrix required");
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let prev = Matrix::identity(n).scale(&coeffs[n - k + 1]);
        mk = m.mul(&mk.add(&prev));
        coeffs[n - k] = -m_trace_div(&mk, k);
    }
    UPoly::new(coeffs)
}

fn m_trace_div(m: &Matrix, k: usize) -> Rat {
    m.trace() / Rat::from_integer(BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(up(&[-2, 0, 1]).count_real_roots(), 2);
        assert_eq!(up(&[1, 0, 1]).count_real_roots(), 0);
        assert_eq!(up(&[0, 0, 1]).count_real_roots(), 1);
        assert_eq!(up(&[0, -1, 0, 1]).count_real_roots(), 3);
        assert_eq!(up(&[5]).count_real_roots(), 0);
    }

    #[test]
    fn rational_roots_found() {
        // (2t - 1)(t + 3) t
        let p = up(&[0, -3, 5, 2]);
        assert_eq!(p.rational_roots(), vec![int(-3), int(0), rat(1, 2)]);
        assert!(up(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn characteristic_polynomial() {
        let m = Matrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]);
        assert_eq!(char_poly(&m), up(&[1, 0, 1]));
        let m = Matrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(0), int(2), int(0)],
            vec![int(0), int(0), int(-1)],
        ]);
        // (t-2)^2 (t+1) = t^3 - 3t^2 + 4
        assert_eq!(char_poly(&m), up(&[4, 0, -3, 1]));
    }
}
