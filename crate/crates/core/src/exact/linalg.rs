//! Dense linear algebra over the rationals and polynomial subspaces.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::poly::{Monomial, WPoly};
use super::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Row-major dense matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).fold(Rat::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &f * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * v = b`, if one exists.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![Rat::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = r[(i, self.cols)].clone();
        }
        Some(v)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det *= &m[(c, c)];
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(super::rat::fmt_rat).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Signature `(positive, negative, zero)` of a symmetric matrix, by exact
/// congruence diagonalization.
pub fn signature(sym: &Matrix) -> (usize, usize, usize) {
    let n = sym.rows();
    assert_eq!(n, sym.cols(), "square matrix required");
    let mut m = sym.clone();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if m[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[(i, i)].is_zero()) {
                m.swap_rows(k, i);
                m.swap_cols(k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_zero())
            {
                // row/col i += row/col j puts 2 m_ij on the diagonal
                for c in 0..n {
                    let v = &m[(i, c)] + &m[(j, c)];
                    m[(i, c)] = v;
                }
                for r in 0..n {
                    let v = &m[(r, i)] + &m[(r, j)];
                    m[(r, i)] = v;
                }
                m.swap_rows(k, i);
                m.swap_cols(k, i);
            } else {
                break;
            }
        }
        let p = m[(k, k)].clone();
        if p > Rat::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &p;
            for c in k..n {
                let v = &m[(i, c)] - &f * &m[(k, c)];
                m[(i, c)] = v;
            }
            for r in k..n {
                let v = &m[(r, i)] - &f * &m[(r, k)];
                m[(r, i)] = v;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

/// A subspace of the polynomial model, stored in reduced row-echelon form.
///
/// Elements are sorted by leading monomial, largest first; each leading
/// monomial has coefficient 1 and occurs in no other element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Basis {
    elems: Vec<WPoly>,
}

impl Basis {
    pub fn empty() -> Self {
        Basis::default()
    }

    /// Echelonized span of `gens`.
    pub fn span<'a>(gens: impl IntoIterator<Item = &'a WPoly>) -> Self {
        let mut b = Basis::empty();
        for g in gens {
            b.insert(g);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[WPoly] {
        &self.elems
    }

    pub fn leads(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.elems.iter().map(|e| *e.leading().expect("nonzero element").0)
    }

    /// Remainder of `p` after eliminating every leading monomial.
    pub fn reduce(&self, p: &WPoly) -> WPoly {
        let mut r = p.clone();
        for e in &self.elems {
            let lead = e.leading().expect("nonzero element").0;
            let c = r.coeff(lead);
            if !c.is_zero() {
                r.add_scaled(e, &-c);
            }
        }
        r
    }

    pub fn contains(&self, p: &WPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, p: &WPoly) -> bool {
        let r = self.reduce(p);
        let Some((lead, c)) = r.leading() else {
            return false;
        };
        let lead = *lead;
        let r = r.scale(&c.recip());
        for e in &mut self.elems {
            let c = e.coeff(&lead);
            if !c.is_zero() {
                e.add_scaled(&r, &-c);
            }
        }
        let at = self
            .elems
            .iter()
            .position(|e| *e.leading().expect("nonzero").0 < lead)
            .unwrap_or(self.elems.len());
        self.elems.insert(at, r);
        true
    }

    /// Coordinates of `p` with respect to [`Basis::elements`].
    pub fn coordinates(&self, p: &WPoly) -> Option<Vec<Rat>> {
        if !self.contains(p) {
            return None;
        }
        Some(self.leads().map(|m| p.coeff(&m)).collect())
    }

    pub fn sum(&self, other: &Basis) -> Basis {
        let mut out = self.clone();
        for e in &other.elems {
            out.insert(e);
        }
        out
    }

    pub fn intersect(&self, other: &Basis) -> Basis {
        if self.is_empty() || other.is_empty() {
            return Basis::empty();
        }
        let monos = monomial_index(self.elems.iter().chain(&other.elems));
        let n1 = self.dim();
        let mut m = Matrix::zeros(monos.len(), n1 + other.dim());
        for (j, e) in self.elems.iter().chain(&other.elems).enumerate() {
            let sign = if j < n1 { Rat::one() } else { -Rat::one() };
            for (mono, c) in e.terms() {
                m[(monos[mono], j)] = c * &sign;
            }
        }
        let vecs: Vec<WPoly> = m
            .nullspace()
            .into_iter()
            .map(|v| {
                let mut acc = WPoly::zero();
                for (c, e) in v[..n1].iter().zip(&self.elems) {
                    acc.add_scaled(e, c);
                }
                acc
            })
            .collect();
        Basis::span(&vecs)
    }

    pub fn is_subspace_of(&self, other: &Basis) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }
}

impl serde::Serialize for Basis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Basis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Basis::span(&Vec::<WPoly>::deserialize(d)?))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

pub(crate) fn monomial_index<'a>(polys: impl IntoIterator<Item = &'a WPoly>) -> BTreeMap<Monomial, usize> {
    let mut set = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            set.insert(*m, 0);
        }
    }
    for (i, v) in set.values_mut().rev().enumerate() {
        *v = i;
    }
    set
}

/// Expresses polynomials in a fixed, linearly independent, not necessarily
/// echelonized list of generators.
#[derive(Debug, Clone)]
pub struct CoordinateSystem {
    gens: Vec<WPoly>,
    monos: BTreeMap<Monomial, usize>,
    /// Echelon rows over the monomials (first block) and the transformation
    /// expressing each row in terms of the generators (second block).
    rows: Vec<(usize, Vec<Rat>, Vec<Rat>)>,
}

impl CoordinateSystem {
    pub fn new(gens: &[WPoly]) -> Result<Self, LinalgError> {
        let monos = monomial_index(gens);
        let n = gens.len();
        let width = monos.len();
        let mut m = Matrix::zeros(n, width + n);
        for (i, g) in gens.iter().enumerate() {
            for (mono, c) in g.terms() {
                m[(i, monos[mono])] = c.clone();
            }
            m[(i, width + i)] = Rat::one();
        }
        let (r, pivots) = m.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= width) {
            return Err(LinalgError::Dependent);
        }
        let rows = pivots
            .iter()
            .enumerate()
            .map(|(i, &pc)| (pc, r.row(i)[..width].to_vec(), r.row(i)[width..].to_vec()))
            .collect();
        Ok(CoordinateSystem {
            gens: gens.to_vec(),
            monos,
            rows,
        })
    }

    pub fn generators(&self) -> &[WPoly] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    /// Coordinates of `p`, or the residual outside the span.
    pub fn coordinates(&self, p: &WPoly) -> Result<Vec<Rat>, WPoly> {
        let mut outside = WPoly::zero();
        let mut v = vec![Rat::zero(); self.monos.len()];
        for (m, c) in p.terms() {
            match self.monos.get(m) {
                Some(&i) => v[i] = c.clone(),
                None => outside.add_scaled(&WPoly::term(c.clone(), *m), &Rat::one()),
            }
        }
        let mut coords = vec![Rat::zero(); self.gens.len()];
        for (pc, row, t) in &self.rows {
            let c = v[*pc].clone();
            if c.is_zero() {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *vi -= &c * ri;
                }
            }
            for (ci, ti) in coords.iter_mut().zip(t) {
                if !ti.is_zero() {
                    *ci += &c * ti;
                }
            }
        }
        let inv: BTreeMap<usize, Monomial> = self.monos.iter().map(|(m, i)| (*i, *m)).collect();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                outside.add_scaled(&WPoly::term(c.clone(), inv[&i]), &Rat::one());
            }
        }
        if outside.is_zero() {
            Ok(coords)
        } else {
            Err(outside)
        }
    }

    pub fn combine(&self, coords: &[Rat]) -> WPoly {
        let mut acc = WPoly::zero();
        for (c, g) in coords.iter().zip(&self.gens) {
            acc.add_scaled(g, c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::p;
    use crate::exact::rat::{int, rat};

    #[test]
    fn span_reduce_examples() {
        let b = Basis::span(&[p("x"), p("2*x")]);
        assert_eq!(b.dim(), 1);
        assert_eq!(b.elements(), &[p("x")]);

        let b = Basis::span(&[p("x^2+z^2"), p("x^2-z^2")]);
        assert_eq!(b.dim(), 2);
        assert_eq!(b.elements(), &[p("x^2"), p("z^2")]);

        assert_eq!(Basis::span(&[]).dim(), 0);
    }

    #[test]
    fn membership_and_space_ops() {
        let b = Basis::span(&[p("y"), p("x*z")]);
        assert!(b.contains(&p("2*y - x*z")));
        assert!(!b.contains(&p("x^2")));

        let i = Basis::span(&[p("x"), p("z")]).intersect(&Basis::span(&[p("z"), p("y")]));
        assert_eq!(i.elements(), &[p("z")]);

        let s = Basis::span(&[p("x")]).sum(&Basis::span(&[p("z")]));
        assert_eq!(s.dim(), 2);
        assert_eq!(s, Basis::span(&[p("z"), p("x")]));
    }

    #[test]
    fn echelon_form_is_reduced() {
        let b = Basis::span(&[p("x^2 + x*z + y"), p("x*z - y"), p("z^2 + y")]);
        let leads: Vec<_> = b.leads().collect();
        for (i, e) in b.elements().iter().enumerate() {
            assert_eq!(e.leading().unwrap().1, &int(1));
            for (j, m) in leads.iter().enumerate() {
                if i != j {
                    assert_eq!(e.coeff(m), int(0));
                }
            }
        }
        assert_eq!(b.coordinates(&p("x^2 + 2*x*z + z^2 + y")).map(|c| c.len()), Some(3));
    }

    #[test]
    fn matrix_routines() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.nullspace(), vec![vec![int(-2), int(1)]]);
        assert_eq!(m.determinant(), int(0));
        assert_eq!(m.solve(&[int(1), int(3)]), None);

        let a = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.determinant(), int(1));
        assert_eq!(a.solve(&[int(3), int(2)]), Some(vec![int(1), int(1)]));
    }

    #[test]
    fn signatures() {
        let d = |v: &[i64]| {
            let mut m = Matrix::zeros(v.len(), v.len());
            for (i, x) in v.iter().enumerate() {
                m[(i, i)] = int(*x);
            }
            m
        };
        assert_eq!(signature(&d(&[2, -1, 0])), (1, 1, 1));
        let hyp = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert_eq!(signature(&hyp), (1, 1, 0));
        let sl2 = Matrix::from_rows(vec![
            vec![int(8), int(0), int(0)],
            vec![int(0), int(0), int(4)],
            vec![int(0), int(4), int(0)],
        ]);
        assert_eq!(signature(&sl2), (2, 1, 0));
    }

    #[test]
    fn coordinate_system() {
        let cs = CoordinateSystem::new(&[p("x^2+z^2"), p("2*y-x*z"), p("x")]).unwrap();
        let target = p("3*x^2 + 3*z^2 - y + x*z/2 + 5*x");
        assert_eq!(cs.coordinates(&target), Ok(vec![int(3), rat(-1, 2), int(5)]));
        assert!(cs.coordinates(&p("x^2 + z")).is_err());
        assert!(matches!(
            CoordinateSystem::new(&[p("x"), p("2*x")]),
            Err(LinalgError::Dependent)
        ));
    }
}
