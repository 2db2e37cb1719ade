//! Steps II and III of the extension algorithm: the maximal extension
//! `g(𝔫, h_0, …, h_k)` and the generated subalgebra `g̃(𝔫, h_0, …, h_k)`.

use std::collections::{BTreeMap, VecDeque};

use super::{grade_of, universal_component, GradedSubalgebra, GradedSubspace, Status};
use crate::contact::contact_bracket;
use crate::exact::linalg::monomial_index;
use crate::exact::{Basis, Matrix, Rat, WPoly};

/// Solves `Σ c_i images(d_i) = 0` over the span of `domain` and returns the
/// corresponding combinations `Σ c_i d_i`.
fn linear_kernel(domain: &[WPoly], images: impl Fn(&WPoly) -> Vec<WPoly>) -> Basis {
    if domain.is_empty() {
        return Basis::empty();
    }
    let imgs: Vec<Vec<WPoly>> = domain.iter().map(&images).collect();
    let slots = imgs[0].len();
    let index: Vec<_> = (0..slots).map(|s| monomial_index(imgs.iter().map(|v| &v[s]))).collect();
    let offsets: Vec<usize> = index
        .iter()
        .scan(0, |acc, ix| {
            let o = *acc;
            *acc += ix.len();
            Some(o)
        })
        .collect();
    let rows = index.iter().map(|ix| ix.len()).sum::<usize>();
    if rows == 0 {
        return Basis::span(domain);
    }
    let mut m = Matrix::zeros(rows, domain.len());
    for (j, img) in imgs.iter().enumerate() {
        for (s, poly) in img.iter().enumerate() {
            for (mono, c) in poly.terms() {
                m[(offsets[s] + index[s][mono], j)] = c.clone();
            }
        }
    }
    let combos: Vec<WPoly> = m
        .nullspace()
        .iter()
        .map(|v| {
            let mut acc = WPoly::zero();
            for (c, d) in v.iter().zip(domain) {
                acc.add_scaled(d, c);
            }
            acc
        })
        .collect();
    Basis::span(&combos)
}

/// Elements of `span(b)` commuting with both `x` and `z`.
pub(crate) fn joint_kernel_on_gminus1(b: &Basis) -> Basis {
    let (x, z) = (WPoly::x(), WPoly::z());
    linear_kernel(b.elements(), |v| vec![contact_bracket(v, &x), contact_bracket(v, &z)])
}

/// `g_{k+1}(𝔫, h_0, …, h_k) = {v ∈ g_{k+1}(𝔫) : {v, x}, {v, z} ∈ h_k}`.
///
/// Reduction modulo the echelon basis of `h_k` is linear, so the condition is
/// a homogeneous linear system over the monomials of grade `k + 1`.
pub fn extension_step(h: &GradedSubalgebra, k: i32) -> Basis {
    let hk = h.component(k);
    let universe = universal_component(k + 1).expect("k + 1 >= -1");
    let (x, z) = (WPoly::x(), WPoly::z());
    linear_kernel(universe.elements(), |v| {
        vec![hk.reduce(&contact_bracket(v, &x)), hk.reduce(&contact_bracket(v, &z))]
    })
}

/// The extension of `(h_{-2}, …, h_k)`: components above `k` are the maximal
/// ones, computed until a zero component or the cutoff.
pub fn iterate_extension(fixed: &GradedSubalgebra, k: i32, cutoff: i32) -> GradedSubalgebra {
    let mut comps: BTreeMap<i32, Basis> = fixed.components().range(..=k).map(|(p, b)| (*p, b.clone())).collect();
    let mut current = GradedSubalgebra::new(comps.clone(), Status::Stabilized(k));
    for p in k + 1..=cutoff + 1 {
        let next = extension_step(&current, p - 1);
        if next.is_empty() {
            // a zero component forces all higher ones to vanish (transitivity)
            let top = comps.keys().next_back().copied().unwrap_or(-2);
            return GradedSubalgebra::new(comps, Status::Stabilized(top));
        }
        if p > cutoff {
            return GradedSubalgebra::new(comps, Status::GrowthExceeded(cutoff));
        }
        comps.insert(p, next);
        current = GradedSubalgebra::new(comps.clone(), Status::Stabilized(p));
    }
    unreachable!("loop returns at p = cutoff + 1")
}

/// Smallest bracket-closed graded space containing the seeds, truncated at
/// `cutoff`. Right-normed brackets of seed elements span the generated
/// algebra, so the span is closed under `ad` of each seed element only.
///
/// ```
/// use contact_lie::exact::poly::p;
/// use contact_lie::graded::{generated_closure, GradedSubspace, Status};
///
/// let seeds = GradedSubspace::from_generators(&[p("x"), p("z")]).unwrap();
/// let h = generated_closure(&seeds, 8);
/// assert_eq!(h.dim(), 3);
/// assert_eq!(h.status(), Status::Stabilized(-1));
/// ```
pub fn generated_closure(seeds: &[GradedSubspace], cutoff: i32) -> GradedSubalgebra {
    let mut comps: BTreeMap<i32, Basis> = BTreeMap::new();
    let mut gens: Vec<(i32, WPoly)> = Vec::new();
    let mut queue: VecDeque<(i32, WPoly)> = VecDeque::new();
    for s in seeds.iter().filter(|s| s.grade() <= cutoff) {
        for e in s.basis().elements() {
            gens.push((s.grade(), e.clone()));
            if comps.entry(s.grade()).or_default().insert(e) {
                queue.push_back((s.grade(), e.clone()));
            }
        }
    }
    let mut overflow = false;
    while let Some((q, v)) = queue.pop_front() {
        for (p, s) in &gens {
            let w = contact_bracket(s, &v);
            if w.is_zero() {
                continue;
            }
            let g = p + q;
            debug_assert_eq!(grade_of(&w).ok(), Some(g));
            if g > cutoff {
                overflow = true;
                continue;
            }
            let comp = comps.entry(g).or_default();
            let r = comp.reduce(&w);
            if comp.insert(&r) {
                queue.push_back((g, r));
            }
        }
    }
    let status = if overflow {
        Status::GrowthExceeded(cutoff)
    } else {
        Status::Stabilized(
            comps
                .iter()
                .filter(|(_, b)| !b.is_empty())
                .map(|(p, _)| *p)
                .max()
                .unwrap_or(-2),
        )
    };
    GradedSubalgebra::new(comps, status)
}

/// An element `e ∈ h_0` with `{e, v} = p v` for every `v` of grade `p`.
pub fn grading_element(h: &GradedSubalgebra) -> Option<WPoly> {
    let h0 = h.component(0);
    if h0.is_empty() {
        return None;
    }
    let targets: Vec<(i32, &WPoly)> = h
        .components()
        .iter()
        .flat_map(|(p, b)| b.elements().iter().map(move |v| (*p, v)))
        .collect();
    // columns: coefficients of the h_0 basis; rows: (target, monomial)
    let images: Vec<Vec<WPoly>> = h0
        .elements()
        .iter()
        .map(|u| targets.iter().map(|(_, v)| contact_bracket(u, v)).collect())
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (t, (p, v)) in targets.iter().enumerate() {
        let ix = monomial_index(images.iter().map(|img| &img[t]).chain(std::iter::once(*v)));
        for mono in ix.keys() {
            rows.push(images.iter().map(|img| img[t].coeff(mono)).collect::<Vec<Rat>>());
            rhs.push(v.coeff(mono) * Rat::from_integer((*p).into()));
        }
    }
    let coeffs = Matrix::from_rows(rows).solve(&rhs)?;
    let mut e = WPoly::zero();
    for (c, u) in coeffs.iter().zip(h0.elements()) {
        e.add_scaled(u, c);
    }
    Some(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::p;

    fn seeds(list: &[&str]) -> Vec<GradedSubspace> {
        GradedSubspace::from_generators(&list.iter().map(|s| p(s)).collect::<Vec<_>>()).unwrap()
    }

    fn span(list: &[&str]) -> Basis {
        Basis::span(&list.iter().map(|s| p(s)).collect::<Vec<_>>())
    }

    fn with_h0(h0: &[&str]) -> GradedSubalgebra {
        let mut all = vec!["1", "x", "z"];
        all.extend_from_slice(h0);
        GradedSubalgebra::from_generators(&all.iter().map(|s| p(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn extension_step_golden_values() {
        for alpha in ["0", "1/2", "1", "2"] {
            let h0 = format!("x^2+z^2+({alpha})*(2*y-x*z)");
            assert!(extension_step(&with_h0(&[&h0]), 0).is_empty(), "alpha {alpha}");
        }
        assert_eq!(
            extension_step(&with_h0(&["x^2+z^2", "2*y-x*z"]), 0),
            span(&["x*(x^2+z^2)-2*z*(2*y-x*z)", "z*(x^2+z^2)+2*x*(2*y-x*z)"])
        );
        assert_eq!(
            extension_step(&with_h0(&["x^2", "x*z", "z^2"]), 0),
            span(&["x^3", "x^2*z", "x*z^2", "z^3"])
        );
        assert_eq!(
            extension_step(&with_h0(&["x^2", "x*z", "z^2", "y"]), 0),
            universal_component(1).unwrap()
        );
    }

    #[test]
    fn closure_examples() {
        let h = generated_closure(&seeds(&["x", "z"]), 8);
        assert_eq!(h.components(), GradedSubalgebra::heisenberg().components());

        let i1 = generated_closure(
            &seeds(&["x", "z", "x^2", "x*z", "z^2", "y", "x*(2*y-x*z)", "z*(2*y-x*z)"]),
            8,
        );
        assert_eq!(i1.status(), Status::Stabilized(2));
        assert_eq!(i1.dim(), 10);
        assert_eq!(i1.component(2), span(&["(2*y-x*z)^2"]));

        let grow = generated_closure(
            &seeds(&["x", "z", "x^2", "x*z", "z^2", "x^3", "x^2*z", "x*z^2", "z^3"]),
            6,
        );
        assert_eq!(grow.status(), Status::GrowthExceeded(6));
        let dims = grow.dims();
        assert!(dims[&5] < dims[&6], "{dims:?}");
    }

    #[test]
    fn grading_elements() {
        let i1 = GradedSubalgebra::from_generators(
            &[
                "1",
                "x",
                "y",
                "z",
                "x^2",
                "x*z",
                "z^2",
                "x*(2*y-x*z)",
                "z*(2*y-x*z)",
                "(2*y-x*z)^2",
            ]
            .map(p),
        )
        .unwrap();
        assert_eq!(grading_element(&i1), Some(p("2*y - x*z")));
        let i6 = with_h0(&["x^2+z^2+(1/2)*(2*y-x*z)"]);
        assert_eq!(grading_element(&i6), None);
        assert_eq!(grading_element(&GradedSubalgebra::heisenberg()), None);
    }

    #[test]
    fn iterate_extension_stops() {
        let i4 = iterate_extension(&with_h0(&["x^2+z^2", "2*y-x*z"]), 0, 8);
        assert_eq!(i4.status(), Status::Stabilized(2));
        assert_eq!(i4.dim(), 8);
        let sl2 = iterate_extension(&with_h0(&["x^2", "x*z", "z^2"]), 0, 5);
        assert_eq!(sl2.status(), Status::GrowthExceeded(5));
    }

    #[test]
    fn joint_kernel_is_trivial_in_nonnegative_grades() {
        for q in 0..5 {
            assert!(joint_kernel_on_gminus1(&universal_component(q).unwrap()).is_empty());
        }
        assert_eq!(joint_kernel_on_gminus1(&span(&["1"])), span(&["1"]));
    }
}
