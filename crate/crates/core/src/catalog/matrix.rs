//! The matrix form of II.1 and II.2: `g_{-1}` is the real span of
//! `x·(1,1;−1,1) + y·Y + z·Z` and `g_0` is the line through `(1,1;−1,1)`,
//! with `Y = diag(1,−1)`, `Z = (0,1;1,0)` for II.1 and the same times `i`
//! for II.2.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::structure::{span_rows, StructureConstants};
use crate::exact::rat::{fmt_rat, int, Rat};
use crate::exact::Matrix;

/// A Gaussian rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Complex {
    pub re: Rat,
    pub im: Rat,
}

impl Complex {
    pub fn new(re: Rat, im: Rat) -> Self {
        Complex { re, im }
    }

    pub fn real(n: i64) -> Self {
        Complex::new(int(n), int(0))
    }

    pub fn imag(n: i64) -> Self {
        Complex::new(int(0), int(n))
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rat(&self.im)),
            (false, false) => write!(f, "{}{:+}i", fmt_rat(&self.re), fmt_rat(&self.im)),
        }
    }
}

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2(pub [[Complex; 2]; 2]);

impl Mat2 {
    pub fn real(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2([
            [Complex::real(a), Complex::real(b)],
            [Complex::real(c), Complex::real(d)],
        ])
    }

    pub fn scale(&self, c: &Complex) -> Mat2 {
        let m = &self.0;
        Mat2([[c * &m[0][0], c * &m[0][1]], [c * &m[1][0], c * &m[1][1]]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn commutator(&self, o: &Mat2) -> Mat2 {
        let (ab, ba) = (self.mul(o), o.mul(self));
        let e = |i: usize, j: usize| &ab.0[i][j] - &ba.0[i][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Real coordinates `(re, im)` of the four entries.
    pub fn to_real(&self) -> Vec<Rat> {
        self.0
            .iter()
            .flatten()
            .flat_map(|c| [c.re.clone(), c.im.clone()])
            .collect()
    }

    fn from_real(v: &[Rat]) -> Mat2 {
        let c = |k: usize| Complex::new(v[2 * k].clone(), v[2 * k + 1].clone());
        Mat2([[c(0), c(1)], [c(2), c(3)]])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "({}, {}; {}, {})", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// A real Lie algebra of 2×2 matrices with a filtration `g_0 ⊂ g_{-1} ⊂ g`.
#[derive(Debug, Clone)]
pub struct MatrixModel {
    pub g0: Vec<Mat2>,
    pub g_minus1: Vec<Mat2>,
    /// `g_{-1}` basis followed by the brackets needed to close it.
    pub basis: Vec<Mat2>,
    sc: StructureConstants,
}

fn rank(vs: &[Vec<Rat>]) -> usize {
    span_rows(vs.to_vec(), 8).len()
}

impl MatrixModel {
    /// Closes `g_{-1}` under commutators over the reals.
    pub fn new(g0: Vec<Mat2>, g_minus1: Vec<Mat2>) -> Self {
        let mut basis = g_minus1.clone();
        let mut vecs: Vec<Vec<Rat>> = basis.iter().map(Mat2::to_real).collect();
        let mut i = 0;
        while i < basis.len() {
            for j in 0..i {
                let c = basis[j].commutator(&basis[i]);
                let mut trial = vecs.clone();
                trial.push(c.to_real());
                if rank(&trial) > vecs.len() {
                    vecs = trial;
                    basis.push(c);
                }
            }
            i += 1;
        }
        let n = basis.len();
        let mut labels: Vec<String> = (0..g_minus1.len()).map(|k| format!("m{k}")).collect();
        labels.extend((g_minus1.len()..n).map(|k| format!("w{k}")));
        let cols = Matrix::from_rows(vecs.clone()).transpose();
        let mut sc = StructureConstants::zero(labels);
        for a in 0..n {
            for b in a + 1..n {
                let c = basis[a].commutator(&basis[b]).to_real();
                sc.set(a, b, cols.solve(&c).expect("closed under commutators"));
            }
        }
        MatrixModel {
            g0,
            g_minus1,
            basis,
            sc,
        }
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Checks `g_0 ⊂ g_{-1}`, `[g_0, g_{-1}] ⊂ g_{-1}`, `dim g_{-1} = dim g − 1`
    /// and `[g_{-1}, g_{-1}] + g_{-1} = g`.
    pub fn check_filtration(&self) -> Result<(), String> {
        let gm1: Vec<Vec<Rat>> = self.g_minus1.iter().map(Mat2::to_real).collect();
        let r = rank(&gm1);
        if r != self.g_minus1.len() || r + 1 != self.dim() {
            return Err(format!(
                "g_-1 has dimension {r} in an algebra of dimension {}",
                self.dim()
            ));
        }
        let inside = |m: &Mat2| {
            let mut t = gm1.clone();
            t.push(m.to_real());
            rank(&t) == r
        };
        for e in &self.g0 {
            if !inside(e) {
                return Err(format!("{e} is in g_0 but not in g_-1"));
            }
            for v in &self.g_minus1 {
                let c = e.commutator(v);
                if !inside(&c) {
                    return Err(format!("[{e}, {v}] = {c} leaves g_-1"));
                }
            }
        }
        let mut all = gm1.clone();
        for a in &self.g_minus1 {
            for b in &self.g_minus1 {
                all.push(a.commutator(b).to_real());
            }
        }
        if rank(&all) != self.dim() {
            return Err("g_-1 does not generate g".into());
        }
        Ok(())
    }

    /// The element of the closure with real coordinates `v`.
    pub fn element(&self, v: &[Rat]) -> Mat2 {
        let mut acc = vec![Rat::zero(); 8];
        for (c, m) in v.iter().zip(&self.basis) {
            for (a, b) in acc.iter_mut().zip(m.to_real()) {
                *a += c * b;
            }
        }
        Mat2::from_real(&acc)
    }
}

/// The model of II.1 (`complex = false`) or II.2 (`complex = true`).
pub fn filtered_model(complex: bool) -> MatrixModel {
    let g0 = Mat2::real(1, 1, -1, 1);
    let unit = if complex { Complex::imag(1) } else { Complex::real(1) };
    let y = Mat2::real(1, 0, 0, -1).scale(&unit);
    let z = Mat2::real(0, 1, 1, 0).scale(&unit);
    MatrixModel::new(vec![g0.clone()], vec![g0, y, z])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_is_four_dimensional() {
        for complex in [false, true] {
            let m = filtered_model(complex);
            assert_eq!(m.dim(), 4);
            assert!(m.structure_constants().jacobi_check().is_ok());
            assert_eq!(m.check_filtration(), Ok(()));
        }
        // [Y, Z] = (0, 2; -2, 0) in the real model
        let m = filtered_model(false);
        assert_eq!(m.basis[3], Mat2::real(0, 2, -2, 0));
    }

    #[test]
    fn real_and_complex_models_differ() {
        let real = filtered_model(false).structure_constants().fingerprint();
        let complex = filtered_model(true).structure_constants().fingerprint();
        assert_eq!(real.derived_killing_signature, (2, 1, 0));
        assert_eq!(complex.derived_killing_signature, (0, 3, 0));
    }

    #[test]
    fn filtration_failure_is_reported() {
        let bad = MatrixModel::new(
            vec![Mat2::real(1, 0, 0, 0)],
            vec![Mat2::real(0, 1, 0, 0), Mat2::real(0, 0, 1, 0)],
        );
        assert!(bad.check_filtration().is_err());
    }

    #[test]
    fn display() {
        let m = Mat2::real(1, 0, 0, -1).scale(&Complex::imag(1));
        assert_eq!(m.to_string(), "(1i, 0; 0, -1i)");
        assert_eq!(Complex::new(int(1), int(-2)).to_string(), "1-2i");
    }
}
