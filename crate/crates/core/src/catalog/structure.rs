//! Structure constants of finite-dimensional Lie algebras and the
//! basis-independent data used to tell them apart.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::contact::contact_bracket;
use crate::exact::rat::{fmt_rat, parse_rat, Rat};
use crate::exact::{signature, CoordinateSystem, Matrix, WPoly};

/// `[b_i, b_j] = Σ_k c[i][j][k] b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    labels: Vec<String>,
    c: Vec<Vec<Vec<Rat>>>,
}

impl StructureConstants {
    pub fn zero(labels: Vec<String>) -> Self {
        let n = labels.len();
        StructureConstants {
            labels,
            c: vec![vec![vec![Rat::zero(); n]; n]; n],
        }
    }

    /// Labels `b0, b1, …`.
    pub fn unlabeled(n: usize) -> Self {
        Self::zero((0..n).map(|i| format!("b{i}")).collect())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sets `[b_i, b_j] = v` and `[b_j, b_i] = −v`.
    pub fn set(&mut self, i: usize, j: usize, v: Vec<Rat>) {
        assert_eq!(v.len(), self.dim());
        self.c[j][i] = v.iter().map(|x| -x).collect();
        self.c[i][j] = v;
    }

    /// Sets `[b_i, b_j] = Σ coeff · b_k` from sparse `(k, coeff)` pairs.
    pub fn set_sparse(&mut self, i: usize, j: usize, terms: &[(usize, Rat)]) {
        let mut v = vec![Rat::zero(); self.dim()];
        for (k, c) in terms {
            v[*k] += c;
        }
        self.set(i, j, v);
    }

    /// Stores a single entry without touching `c[j][i]`; for fault injection
    /// and for reading untrusted data.
    pub fn set_raw(&mut self, i: usize, j: usize, v: Vec<Rat>) {
        self.c[i][j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> &[Rat] {
        &self.c[i][j]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (ai, row) in a.iter().zip(&self.c) {
            if ai.is_zero() {
                continue;
            }
            for (bj, cij) in b.iter().zip(row) {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (o, c) in out.iter_mut().zip(cij) {
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        v[i] = Rat::from_integer(1.into());
        v
    }

    /// Matrix of `ad(v)`; column `j` holds `[v, b_j]`.
    pub fn ad(&self, v: &[Rat]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket(v, &self.unit(j));
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn antisymmetry_violations(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                if self.c[i][j].iter().zip(&self.c[j][i]).any(|(a, b)| !(a + b).is_zero()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn jacobi_sum(&self, i: usize, j: usize, k: usize) -> Vec<Rat> {
        let t1 = self.bracket(&self.c[i][j], &self.unit(k));
        let t2 = self.bracket(&self.c[j][k], &self.unit(i));
        let t3 = self.bracket(&self.c[k][i], &self.unit(j));
        t1.iter().zip(&t2).zip(&t3).map(|((a, b), c)| a + b + c).collect()
    }

    fn triples(&self) -> impl Iterator<Item = [usize; 3]> {
        let n = self.dim();
        (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
    }

    /// Triples `i < j < k` with `[[b_i,b_j],b_k] + [[b_j,b_k],b_i] + [[b_k,b_i],b_j] ≠ 0`.
    pub fn jacobi_violations(&self) -> Vec<[usize; 3]> {
        self.triples()
            .filter(|&[i, j, k]| self.jacobi_sum(i, j, k).iter().any(|x| !x.is_zero()))
            .collect()
    }

    /// All Jacobi sums over `i < j < k`, concatenated.
    pub fn jacobiator(&self) -> Vec<Rat> {
        self.triples().flat_map(|[i, j, k]| self.jacobi_sum(i, j, k)).collect()
    }

    /// `Ok` or the list of violating triples; antisymmetry failures are
    /// reported as triples `[i, j, j]`.
    pub fn jacobi_check(&self) -> Result<(), Vec<[usize; 3]>> {
        let mut bad: Vec<[usize; 3]> = self
            .antisymmetry_violations()
            .into_iter()
            .map(|(i, j)| [i, j, j])
            .collect();
        bad.extend(self.jacobi_violations());
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    /// Killing form `K_ij = tr(ad b_i ∘ ad b_j)`.
    pub fn killing(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|i| self.ad(&self.unit(i))).collect();
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).trace();
                k[(i, j)] = t.clone();
                k[(j, i)] = t;
            }
        }
        k
    }

    /// Echelon basis of `[A, B]` for subspaces given by spanning vectors.
    pub fn bracket_span(&self, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
        let mut gens = Vec::new();
        for u in a {
            for v in b {
                gens.push(self.bracket(u, v));
            }
        }
        span_rows(gens, self.dim())
    }

    /// Dimensions of `g ⊃ [g,g] ⊃ …` until the series becomes constant.
    pub fn derived_series(&self) -> Vec<usize> {
        let mut cur: Vec<Vec<Rat>> = (0..self.dim()).map(|i| self.unit(i)).collect();
        let mut dims = vec![cur.len()];
        loop {
            let next = self.bracket_span(&cur, &cur);
            if next.len() == cur.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            cur = next;
        }
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Vec<Rat>> {
        let n = self.dim();
        // Σ_i v_i c[i][j][k] = 0 for all j, k
        let mut rows = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.c[i][j][k].clone()).collect());
            }
        }
        if rows.is_empty() {
            return Vec::new();
        }
        Matrix::from_rows(rows).nullspace()
    }

    /// Structure constants of the subalgebra spanned by `basis`.
    pub fn restrict(&self, basis: &[Vec<Rat>]) -> Result<StructureConstants, CatalogError> {
        let m = basis.len();
        let mut sub = StructureConstants::unlabeled(m);
        if m == 0 {
            return Ok(sub);
        }
        let cols = Matrix::from_rows(basis.to_vec()).transpose();
        for i in 0..m {
            for j in i + 1..m {
                let w = self.bracket(&basis[i], &basis[j]);
                let coords = cols.solve(&w).ok_or_else(|| CatalogError::NotClosed {
                    pair: (i, j),
                    left: format!("{:?}", basis[i].iter().map(fmt_rat).collect::<Vec<_>>()),
                    right: format!("{:?}", basis[j].iter().map(fmt_rat).collect::<Vec<_>>()),
                    residual: format!("{:?}", w.iter().map(fmt_rat).collect::<Vec<_>>()),
                })?;
                sub.set(i, j, coords);
            }
        }
        Ok(sub)
    }

    pub fn derived_algebra(&self) -> StructureConstants {
        let all: Vec<Vec<Rat>> = (0..self.dim()).map(|i| self.unit(i)).collect();
        let d = self.bracket_span(&all, &all);
        self.restrict(&d).expect("the derived algebra is an ideal")
    }

    /// Structure constants in the basis whose `k`-th element has coordinates
    /// `columns[k]` in the current basis; `None` if they are dependent.
    pub fn change_basis(&self, columns: &[Vec<Rat>]) -> Option<StructureConstants> {
        let n = self.dim();
        if columns.len() != n {
            return None;
        }
        let p = Matrix::from_rows(columns.to_vec()).transpose();
        let inv = p.inverse()?;
        let mut out = StructureConstants::zero(self.labels.clone());
        for i in 0..n {
            for j in i + 1..n {
                let w = self.bracket(&columns[i], &columns[j]);
                out.set(i, j, inv.mul_vec(&w));
            }
        }
        Some(out)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let derived = self.derived_algebra();
        Fingerprint {
            dimension: self.dim(),
            derived_series: self.derived_series(),
            center_dim: self.center().len(),
            killing_signature: signature(&self.killing()),
            derived_killing_signature: signature(&derived.killing()),
        }
    }

    /// Structure constants of a bracket-closed list of characteristic
    /// functions.
    pub fn from_polys(basis: &[WPoly]) -> Result<StructureConstants, CatalogError> {
        let cs = CoordinateSystem::new(basis).map_err(|_| {
            CatalogError::Dependent(basis.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
        })?;
        let mut sc = StructureConstants::zero(basis.iter().map(ToString::to_string).collect());
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let w = contact_bracket(&basis[i], &basis[j]);
                let coords = cs.coordinates(&w).map_err(|residual| CatalogError::NotClosed {
                    pair: (i, j),
                    left: basis[i].to_string(),
                    right: basis[j].to_string(),
                    residual: residual.to_string(),
                })?;
                sc.set(i, j, coords);
            }
        }
        Ok(sc)
    }
}

/// Row-echelon basis of the span of `gens` (vectors of length `n`).
pub(crate) fn span_rows(gens: Vec<Vec<Rat>>, n: usize) -> Vec<Vec<Rat>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(gens);
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)[..n].to_vec()).collect()
}

impl fmt::Display for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<String> = self.c[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| format!("{}*[{}]", fmt_rat(c), self.labels[k]))
                    .collect();
                if !terms.is_empty() {
                    writeln!(f, "[{}, {}] = {}", self.labels[i], self.labels[j], terms.join(" + "))?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    i: usize,
    j: usize,
    result: Vec<(usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct ScJson {
    dimension: usize,
    labels: Vec<String>,
    brackets: Vec<Entry>,
}

impl Serialize for StructureConstants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let result: Vec<(usize, String)> = self.c[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, fmt_rat(c)))
                    .collect();
                if !result.is_empty() {
                    brackets.push(Entry { i, j, result });
                }
            }
        }
        ScJson {
            dimension: n,
            labels: self.labels.clone(),
            brackets,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructureConstants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = ScJson::deserialize(d)?;
        if raw.labels.len() != raw.dimension {
            return Err(D::Error::custom("label count differs from dimension"));
        }
        let mut sc = StructureConstants::zero(raw.labels);
        for e in raw.brackets {
            if e.i >= raw.dimension || e.j >= raw.dimension {
                return Err(D::Error::custom("bracket index out of range"));
            }
            let mut v = vec![Rat::zero(); raw.dimension];
            for (k, c) in e.result {
                let c = parse_rat(&c).ok_or_else(|| D::Error::custom(format!("bad rational `{c}`")))?;
                *v.get_mut(k)
                    .ok_or_else(|| D::Error::custom("bracket index out of range"))? = c;
            }
            sc.set(e.i, e.j, v);
        }
        Ok(sc)
    }
}

/// Basis-independent invariants of a Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dimension: usize,
    pub derived_series: Vec<usize>,
    pub center_dim: usize,
    /// `(positive, negative, zero)`.
    pub killing_signature: (usize, usize, usize),
    /// Signature of the Killing form of `[g, g]` as a Lie algebra in its own right.
    pub derived_killing_signature: (usize, usize, usize),
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, n, z) = self.killing_signature;
        let (dp, dn, dz) = self.derived_killing_signature;
        write!(
            f,
            "dim {}, derived series {:?}, center {}, killing ({p},{n},{z}), derived killing ({dp},{dn},{dz})",
            self.dimension, self.derived_series, self.center_dim
        )
    }
}
