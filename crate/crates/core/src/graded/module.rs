//! Actions of grade-0 subalgebras: action matrices, real irreducibility and
//! decomposition of modules into indecomposable summands.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::GradedError;
use crate::contact::contact_bracket;
use crate::exact::rat::fmt_rat;
use crate::exact::upoly::char_poly;
use crate::exact::{Basis, CoordinateSystem, Matrix, Rat, WPoly};

/// Matrix of `v ↦ {u, v}` on `V`: column `j` holds the coordinates of
/// `{u, b_j}` in the basis of `V`.
pub fn action_matrix(u: &WPoly, v: &CoordinateSystem) -> Result<Matrix, GradedError> {
    let n = v.dim();
    let mut m = Matrix::zeros(n, n);
    for (j, b) in v.generators().iter().enumerate() {
        let image = contact_bracket(u, b);
        let coords = v.coordinates(&image).map_err(|residual| GradedError::NotClosed {
            f: u.clone(),
            g: b.clone(),
            residual,
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    Ok(m)
}

/// Action of every element of `h0` on the invariant space `v`.
pub fn module_action(h0: &[WPoly], v: &Basis) -> Result<Vec<Matrix>, GradedError> {
    let cs = CoordinateSystem::new(v.elements()).expect("echelon basis is independent");
    h0.iter().map(|u| action_matrix(u, &cs)).collect()
}

/// Action matrices on `g_{-1} = ⟨x, z⟩` in the ordered basis `(x, z)`:
/// `{u, x} = m11 x + m21 z` and `{u, z} = m12 x + m22 z`.
///
/// ```
/// use contact_lie::exact::poly::p;
/// use contact_lie::graded::action_matrices;
///
/// let m = action_matrices(&[p("x^2")]).unwrap();
/// assert_eq!(m[0].to_string(), "[0 2; 0 0]");
/// ```
pub fn action_matrices(h0: &[WPoly]) -> Result<Vec<Matrix>, GradedError> {
    let cs = CoordinateSystem::new(&[WPoly::x(), WPoly::z()]).expect("x, z independent");
    h0.iter().map(|u| action_matrix(u, &cs)).collect()
}

/// `a + b √d` with `d ≥ 0` not a rational square (or `b = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Surd {
    a: Rat,
    b: Rat,
}

impl Surd {
    fn rat(a: Rat) -> Self {
        Surd { a, b: Rat::zero() }
    }

    fn mul(&self, o: &Surd, d: &Rat) -> Surd {
        Surd {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    fn sub(&self, o: &Surd) -> Surd {
        Surd {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// A real line in `g_{-1}`, spanned by `(x0 + x1 √d) x + (z0 + z1 √d) z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenline {
    pub radicand: Rat,
    pub x: (Rat, Rat),
    pub z: (Rat, Rat),
}

impl Eigenline {
    fn new(x: Surd, z: Surd, radicand: Rat) -> Self {
        Eigenline {
            radicand,
            x: (x.a, x.b),
            z: (z.a, z.b),
        }
    }

    /// The spanning vector when it is rational.
    pub fn rational(&self) -> Option<(Rat, Rat)> {
        (self.x.1.is_zero() && self.z.1.is_zero()).then(|| (self.x.0.clone(), self.z.0.clone()))
    }
}

impl fmt::Display for Eigenline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |(a, b): &(Rat, Rat)| {
            if b.is_zero() {
                fmt_rat(a)
            } else {
                format!("({} + {}*sqrt({}))", fmt_rat(a), fmt_rat(b), fmt_rat(&self.radicand))
            }
        };
        write!(f, "<{}*x + {}*z>", part(&self.x), part(&self.z))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A line in `g_{-1}` fixed by every element.
    Reducible(Eigenline),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (num_integer::Roots::sqrt(r.numer()), num_integer::Roots::sqrt(r.denom()));
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

/// Decides whether `h0` fixes a real line of `g_{-1}`, exactly.
///
/// Each candidate eigenline of a non-scalar matrix lives over `ℚ(√disc)` and is
/// tested against the remaining matrices in that field.
pub fn is_irreducible_on_gminus1(h0: &[WPoly]) -> Result<Irreducibility, GradedError> {
    let mats = action_matrices(h0)?;
    let scalar = |m: &Matrix| m[(0, 1)].is_zero() && m[(1, 0)].is_zero() && m[(0, 0)] == m[(1, 1)];
    let Some(m) = mats.iter().find(|m| !scalar(m)) else {
        return Ok(Irreducibility::Reducible(Eigenline::new(
            Surd::rat(Rat::one()),
            Surd::rat(Rat::zero()),
            Rat::zero(),
        )));
    };
    let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
    let disc = (a - d) * (a - d) + Rat::from_integer(BigInt::from(4)) * b * c;
    if disc.is_negative() {
        return Ok(Irreducibility::Irreducible);
    }
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    // eigenvalues ((a + d) ± s)/2 with s = √disc, as surds over ℚ(√radicand)
    let (radicand, roots) = match rational_sqrt(&disc) {
        Some(s) => (
            Rat::zero(),
            vec![Surd::rat((a + d - &s) * &half), Surd::rat((a + d + &s) * &half)],
        ),
        None => (
            disc.clone(),
            vec![
                Surd {
                    a: (a + d) * &half,
                    b: -half.clone(),
                },
                Surd {
                    a: (a + d) * &half,
                    b: half.clone(),
                },
            ],
        ),
    };
    for lambda in roots {
        let (vx, vz) = if !b.is_zero() {
            (Surd::rat(b.clone()), lambda.sub(&Surd::rat(a.clone())))
        } else if !c.is_zero() {
            (lambda.sub(&Surd::rat(d.clone())), Surd::rat(c.clone()))
        } else if lambda == Surd::rat(a.clone()) {
            (Surd::rat(Rat::one()), Surd::rat(Rat::zero()))
        } else {
            (Surd::rat(Rat::zero()), Surd::rat(Rat::one()))
        };
        let fixed_by_all = mats.iter().all(|n| {
            // det[v, N v] = vx (N v)_z − vz (N v)_x
            let nvx = Surd::rat(n[(0, 0)].clone())
                .mul(&vx, &radicand)
                .sub(&Surd::rat(-n[(0, 1)].clone()).mul(&vz, &radicand));
            let nvz = Surd::rat(n[(1, 0)].clone())
                .mul(&vx, &radicand)
                .sub(&Surd::rat(-n[(1, 1)].clone()).mul(&vz, &radicand));
            vx.mul(&nvz, &radicand).sub(&vz.mul(&nvx, &radicand)).is_zero()
        });
        if fixed_by_all {
            return Ok(Irreducibility::Reducible(Eigenline::new(vx, vz, radicand)));
        }
    }
    Ok(Irreducibility::Irreducible)
}

fn flatten(m: &Matrix) -> Vec<Rat> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn unflatten(v: &[Rat], n: usize) -> Matrix {
    Matrix::from_rows(v.chunks(n).map(<[Rat]>::to_vec).collect())
}

/// Independent subset of `mats`, kept in order.
fn independent(mats: Vec<Matrix>) -> Vec<Matrix> {
    let mut kept: Vec<Matrix> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for m in mats {
        rows.push(flatten(&m));
        if Matrix::from_rows(rows.clone()).rank() == rows.len() {
            kept.push(m);
        } else {
            rows.pop();
        }
    }
    kept
}

/// Span of all products of the action matrices, including the identity.
fn enveloping_algebra(mats: &[Matrix], n: usize) -> Vec<Matrix> {
    let mut basis = independent(vec![Matrix::identity(n)]);
    let mut frontier = basis.clone();
    while let Some(b) = frontier.pop() {
        for m in mats {
            let mut candidate = basis.clone();
            candidate.push(m.mul(&b));
            let grown = independent(candidate);
            if grown.len() > basis.len() {
                frontier.push(grown.last().expect("nonempty").clone());
                basis = grown;
            }
        }
    }
    basis
}

/// Basis of `{T : T A = A T for all A in mats}`.
pub(crate) fn commutant(mats: &[Matrix], n: usize) -> Vec<Matrix> {
    let unknowns = n * n;
    let mut rows = Vec::new();
    for a in mats {
        for i in 0..n {
            for j in 0..n {
                // (T A − A T)_{ij} = Σ_k T_ik A_kj − A_ik T_kj
                let mut row = vec![Rat::zero(); unknowns];
                for k in 0..n {
                    row[i * n + k] += &a[(k, j)];
                    row[k * n + j] -= &a[(i, k)];
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..unknowns)
            .map(|k| {
                let mut v = vec![Rat::zero(); unknowns];
                v[k] = Rat::one();
                unflatten(&v, n)
            })
            .collect();
    }
    Matrix::from_rows(rows)
        .nullspace()
        .iter()
        .map(|v| unflatten(v, n))
        .collect()
}

/// Whether the algebra spanned by `c` (containing the identity) is ℝ, ℂ or ℍ.
fn is_division_algebra(c: &[Matrix], n: usize) -> bool {
    match c.len() {
        1 => true,
        2 => {
            let t = c.iter().find(|m| !is_scalar(m)).expect("non-scalar element");
            char_poly(t).count_real_roots() == 0
        }
        4 => {
            // pure part: trace-zero elements; need p q + q p scalar and p² negative definite
            let nr = Rat::from_integer(BigInt::from(n as i64));
            let pure: Vec<Matrix> = c
                .iter()
                .map(|m| m.sub(&Matrix::identity(n).scale(&(m.trace() / &nr))))
                .collect();
            let pure = independent(pure);
            if pure.len() != 3 {
                return false;
            }
            let mut q = Matrix::zeros(3, 3);
            for i in 0..3 {
                for j in 0..3 {
                    let s = pure[i].mul(&pure[j]).add(&pure[j].mul(&pure[i]));
                    if !is_scalar(&s) {
                        return false;
                    }
                    q[(i, j)] = s[(0, 0)].clone();
                }
            }
            let (pos, _, zero) = crate::exact::linalg::signature(&q);
            pos == 0 && zero == 0
        }
        _ => false,
    }
}

fn is_scalar(m: &Matrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                m[(i, i)] == m[(0, 0)]
            } else {
                m[(i, j)].is_zero()
            }
        })
    })
}

/// Real irreducibility: `V` is irreducible iff the commutant `C` is a division
/// algebra and the enveloping algebra is all of `End_C(V)`.
pub fn is_irreducible_module(mats: &[Matrix], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let c = commutant(mats, n);
    if !is_division_algebra(&c, n) {
        return false;
    }
    enveloping_algebra(mats, n).len() * c.len() == n * n
}

/// Column basis of the image of `m`.
fn column_space(m: &Matrix) -> Matrix {
    let (r, pivots) = m.transpose().rref();
    let cols: Vec<Vec<Rat>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    Matrix::from_rows(cols).transpose()
}

fn kernel(m: &Matrix) -> Option<Matrix> {
    let ns = m.nullspace();
    (!ns.is_empty()).then(|| Matrix::from_rows(ns).transpose())
}

/// Matrix of `a` restricted to the invariant column space of `u`.
fn restrict(a: &Matrix, u: &Matrix) -> Matrix {
    let au = a.mul(u);
    let cols: Vec<Vec<Rat>> = (0..u.cols())
        .map(|j| u.solve(&au.column(j)).expect("subspace is invariant"))
        .collect();
    Matrix::from_rows(cols).transpose()
}

fn matrix_pow(m: &Matrix, k: usize) -> Matrix {
    (0..k).fold(Matrix::identity(m.rows()), |acc, _| acc.mul(m))
}

/// Commutant elements tried for a Fitting split, in a fixed order.
fn split_candidates(c: &[Matrix]) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = c.to_vec();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            for k in 1..=3 {
                out.push(c[i].add(&c[j].scale(&Rat::from_integer(BigInt::from(k)))));
            }
        }
    }
    out
}

fn split(mats: &[Matrix], n: usize) -> Option<(Matrix, Matrix)> {
    let c = commutant(mats, n);
    for t in split_candidates(&c) {
        for lambda in char_poly(&t).rational_roots() {
            let shifted = t.sub(&Matrix::identity(n).scale(&lambda));
            let power = matrix_pow(&shifted, n);
            let Some(k) = kernel(&power) else { continue };
            if k.cols() < n {
                return Some((k, column_space(&power)));
            }
        }
    }
    None
}

/// Splits `ℚ^n` under the action into summands that no rational commutant
/// element separates further. Each summand is a column-basis matrix.
pub fn decompose_module(mats: &[Matrix], n: usize) -> Vec<Matrix> {
    if n == 0 {
        return Vec::new();
    }
    match split(mats, n) {
        None => vec![Matrix::identity(n)],
        Some((k, im)) => {
            let mut out = Vec::new();
            for u in [k, im] {
                let sub: Vec<Matrix> = mats.iter().map(|a| restrict(a, &u)).collect();
                for part in decompose_module(&sub, u.cols()) {
                    out.push(u.mul(&part));
                }
            }
            out
        }
    }
}

/// Decomposes an `h0`-invariant polynomial space into summands.
pub fn decompose_space(h0: &[WPoly], v: &Basis) -> Result<Vec<Basis>, GradedError> {
    let mats = module_action(h0, v)?;
    let parts = decompose_module(&mats, v.dim());
    Ok(parts
        .iter()
        .map(|u| {
            let gens: Vec<WPoly> = (0..u.cols())
                .map(|j| {
                    let mut acc = WPoly::zero();
                    for (c, b) in u.column(j).iter().zip(v.elements()) {
                        acc.add_scaled(b, c);
                    }
                    acc
                })
                .collect();
            Basis::span(&gens)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::p;
    use crate::exact::rat::{int, rat};

    fn m(rows: &[[i64; 2]; 2]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn printed_action_matrices() {
        let got = action_matrices(&[p("x^2"), p("x*z"), p("z^2"), p("y")]).unwrap();
        assert_eq!(got[0], m(&[[0, 2], [0, 0]]));
        assert_eq!(got[1], m(&[[-1, 0], [0, 1]]));
        assert_eq!(got[2], m(&[[0, 0], [-2, 0]]));
        assert_eq!(got[3], m(&[[-1, 0], [0, 0]]));
        let e = action_matrices(&[p("2*y - x*z")]).unwrap();
        assert_eq!(e[0], m(&[[-1, 0], [0, -1]]));
    }

    #[test]
    fn rotation_family_action() {
        // x² + z² + α(2y − xz) acts as (−α 2; −2 −α)
        let alpha = rat(1, 2);
        let u = p("x^2 + z^2") + p("2*y - x*z").scale(&alpha);
        let got = &action_matrices(&[u]).unwrap()[0];
        assert_eq!(got[(0, 0)], -alpha.clone());
        assert_eq!(got[(0, 1)], int(2));
        assert_eq!(got[(1, 0)], int(-2));
        assert_eq!(got[(1, 1)], -alpha);
    }

    #[test]
    fn irreducibility_on_gminus1() {
        for alpha in ["0", "1/2", "1", "2"] {
            let u = p(&format!("x^2 + z^2 + ({alpha})*(2*y - x*z)"));
            assert!(
                is_irreducible_on_gminus1(&[u]).unwrap().is_irreducible(),
                "alpha {alpha}"
            );
        }
        match is_irreducible_on_gminus1(&[p("x*z")]).unwrap() {
            Irreducibility::Reducible(line) => {
                let (a, b) = line.rational().unwrap();
                assert!(!a.is_zero() && b.is_zero(), "{line}");
            }
            other => panic!("{other:?}"),
        }
        let gl2 = [p("x^2"), p("x*z"), p("z^2"), p("y")];
        assert!(is_irreducible_on_gminus1(&gl2).unwrap().is_irreducible());
        let sl2 = [p("x^2"), p("x*z"), p("z^2")];
        assert!(is_irreducible_on_gminus1(&sl2).unwrap().is_irreducible());
        assert!(!is_irreducible_on_gminus1(&[p("x^2")]).unwrap().is_irreducible());
        assert!(!is_irreducible_on_gminus1(&[p("y")]).unwrap().is_irreducible());
    }

    #[test]
    fn irrational_eigenline_is_found() {
        // x² − 2z² acts as (0 2; 4 0) with eigenvalues ±√8
        let u = p("x^2 - 2*z^2");
        match is_irreducible_on_gminus1(std::slice::from_ref(&u)).unwrap() {
            Irreducibility::Reducible(line) => assert!(line.rational().is_none(), "{line}"),
            other => panic!("{other:?}"),
        }
        // the same line is not fixed by x z
        assert!(is_irreducible_on_gminus1(&[u, p("x*z")]).unwrap().is_irreducible());
    }

    #[test]
    fn module_irreducibility_agrees_with_eigenlines() {
        let cases: Vec<Vec<WPoly>> = vec![
            vec![p("x^2+z^2")],
            vec![p("x^2+z^2"), p("2*y-x*z")],
            vec![p("x*z")],
            vec![p("x^2 - 2*z^2")],
            vec![p("x^2"), p("x*z"), p("z^2")],
            vec![p("y")],
        ];
        for h0 in cases {
            let mats = action_matrices(&h0).unwrap();
            assert_eq!(
                is_irreducible_module(&mats, 2),
                is_irreducible_on_gminus1(&h0).unwrap().is_irreducible(),
                "{h0:?}"
            );
        }
    }

    #[test]
    fn g1_splits_under_gl2() {
        let gl2 = [p("x^2"), p("x*z"), p("z^2"), p("y")];
        let g1 = super::super::universal_component(1).unwrap();
        let mut parts = decompose_space(&gl2, &g1).unwrap();
        parts.sort_by_key(Basis::dim);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], Basis::span(&[p("x*(2*y-x*z)"), p("z*(2*y-x*z)")]));
        assert_eq!(parts[1], Basis::span(&[p("x^3"), p("x^2*z"), p("x*z^2"), p("z^3")]));
        for part in &parts {
            let mats = module_action(&gl2, part).unwrap();
            assert!(is_irreducible_module(&mats, part.dim()));
        }
    }
}
