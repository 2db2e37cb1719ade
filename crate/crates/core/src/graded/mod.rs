//! The graded polynomial model `g(𝔫)` of the Heisenberg algebra and the
//! extension algorithm for its transitive graded subalgebras.
//!
//! Grade `p` is spanned by the monomials `x^a y^b z^c` with `a + 2b + c = p + 2`.
//! `g_{-2} = ⟨1⟩` and `g_{-1} = ⟨x, z⟩` form the Heisenberg algebra `𝔫`.

mod classify;
mod extend;
mod module;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contact::contact_bracket;
use crate::exact::poly::monomials_of_weight;
use crate::exact::{Basis, Grade, WPoly};

pub use classify::{
    alpha_samples, extend, h0_family, named_summands, run_classification, summarize, Branch, BranchOutcome, Choice,
    Classification, Family, FamilyCheck, DEFAULT_ALPHA_SAMPLES,
};
pub use extend::{extension_step, generated_closure, grading_element, iterate_extension};
pub use module::{
    action_matrices, action_matrix, decompose_module, decompose_space, is_irreducible_module,
    is_irreducible_on_gminus1, module_action, Eigenline, Irreducibility,
};

/// Default top grade for closures and extensions.
pub const DEFAULT_CUTOFF: i32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("grade {0} is below -2; g_p = 0 there")]
    GradeTooLow(i32),
    #[error("{0} is not grade-homogeneous")]
    Mixed(WPoly),
    #[error("the zero polynomial has no grade")]
    ZeroElement,
    #[error("{poly} has grade {found}, expected {expected}")]
    WrongGrade { poly: WPoly, expected: i32, found: i32 },
    #[error("no summand {label}; g1 has {available}")]
    UnknownSummand { label: String, available: usize },
    #[error("{{{f}, {g}}} leaves the space: residual {residual}")]
    NotClosed { f: WPoly, g: WPoly, residual: WPoly },
}

/// All monomials of grade `p`.
pub fn universal_component(p: i32) -> Result<Basis, GradedError> {
    if p < -2 {
        return Err(GradedError::GradeTooLow(p));
    }
    let monos: Vec<WPoly> = monomials_of_weight((p + 2) as u32)
        .into_iter()
        .map(|m| WPoly::monomial(m.x, m.y, m.z))
        .collect();
    Ok(Basis::span(&monos))
}

/// Grade of a nonzero homogeneous polynomial.
pub fn grade_of(p: &WPoly) -> Result<i32, GradedError> {
    match p.weighted_grade() {
        Ok(Grade::Homogeneous(g)) => Ok(g),
        Ok(Grade::Mixed) => Err(GradedError::Mixed(p.clone())),
        Err(_) => Err(GradedError::ZeroElement),
    }
}

/// A span of homogeneous polynomials of one grade.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedSubspace {
    grade: i32,
    basis: Basis,
}

impl GradedSubspace {
    pub fn new(grade: i32, gens: &[WPoly]) -> Result<Self, GradedError> {
        if grade < -2 {
            return Err(GradedError::GradeTooLow(grade));
        }
        for g in gens.iter().filter(|g| !g.is_zero()) {
            let found = grade_of(g)?;
            if found != grade {
                return Err(GradedError::WrongGrade {
                    poly: g.clone(),
                    expected: grade,
                    found,
                });
            }
        }
        Ok(GradedSubspace {
            grade,
            basis: Basis::span(gens),
        })
    }

    /// Groups homogeneous generators by grade.
    pub fn from_generators(gens: &[WPoly]) -> Result<Vec<GradedSubspace>, GradedError> {
        let mut by_grade: BTreeMap<i32, Vec<WPoly>> = BTreeMap::new();
        for g in gens.iter().filter(|g| !g.is_zero()) {
            by_grade.entry(grade_of(g)?).or_default().push(g.clone());
        }
        by_grade
            .into_iter()
            .map(|(p, gs)| GradedSubspace::new(p, &gs))
            .collect()
    }

    pub fn from_basis(grade: i32, basis: Basis) -> Self {
        GradedSubspace { grade, basis }
    }

    pub fn grade(&self) -> i32 {
        self.grade
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// How a closure or extension ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Closed; the argument is the highest nonzero grade.
    Stabilized(i32),
    /// Nonzero elements appeared beyond the cutoff.
    GrowthExceeded(i32),
}

impl Status {
    pub fn is_stabilized(&self) -> bool {
        matches!(self, Status::Stabilized(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Stabilized(top) => write!(f, "stabilized at grade {top}"),
            Status::GrowthExceeded(cutoff) => write!(f, "growth exceeded at grade {cutoff}"),
        }
    }
}

/// A graded subspace of `g(𝔫)`, stored component by component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubalgebra {
    components: BTreeMap<i32, Basis>,
    status: Status,
}

impl GradedSubalgebra {
    /// Builds from components; empty components are dropped.
    pub fn new(components: BTreeMap<i32, Basis>, status: Status) -> Self {
        GradedSubalgebra {
            components: components.into_iter().filter(|(_, b)| !b.is_empty()).collect(),
            status,
        }
    }

    /// `⟨1⟩ ⊕ ⟨x, z⟩`.
    pub fn heisenberg() -> Self {
        let mut c = BTreeMap::new();
        c.insert(-2, Basis::span(&[WPoly::one()]));
        c.insert(-1, Basis::span(&[WPoly::x(), WPoly::z()]));
        GradedSubalgebra::new(c, Status::Stabilized(-1))
    }

    /// Splits a homogeneous generating list into components; the result is
    /// marked stabilized at its top grade without any closure check.
    pub fn from_generators(gens: &[WPoly]) -> Result<Self, GradedError> {
        let comps = GradedSubspace::from_generators(gens)?;
        let top = comps.last().map_or(-2, |c| c.grade);
        Ok(GradedSubalgebra::new(
            comps.into_iter().map(|c| (c.grade, c.basis)).collect(),
            Status::Stabilized(top),
        ))
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn components(&self) -> &BTreeMap<i32, Basis> {
        &self.components
    }

    pub fn component(&self, p: i32) -> Basis {
        self.components.get(&p).cloned().unwrap_or_default()
    }

    pub fn subspaces(&self) -> Vec<GradedSubspace> {
        self.components
            .iter()
            .map(|(p, b)| GradedSubspace::from_basis(*p, b.clone()))
            .collect()
    }

    pub fn top_grade(&self) -> Option<i32> {
        self.components.keys().next_back().copied()
    }

    pub fn dim(&self) -> usize {
        self.components.values().map(Basis::dim).sum()
    }

    /// Dimensions per grade.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.components.iter().map(|(p, b)| (*p, b.dim())).collect()
    }

    pub fn elements(&self) -> Vec<WPoly> {
        self.components
            .values()
            .flat_map(|b| b.elements().iter().cloned())
            .collect()
    }

    /// The whole space as one (inhomogeneous) span.
    pub fn span(&self) -> Basis {
        Basis::span(&self.elements())
    }

    pub fn contains(&self, p: &WPoly) -> bool {
        self.span().contains(p)
    }

    /// Components up to and including grade `k`.
    pub fn truncate(&self, k: i32) -> GradedSubalgebra {
        GradedSubalgebra::new(
            self.components.range(..=k).map(|(p, b)| (*p, b.clone())).collect(),
            Status::Stabilized(k),
        )
    }

    /// Same subspace grade by grade (status ignored).
    pub fn same_space(&self, other: &GradedSubalgebra) -> bool {
        self.components == other.components
    }

    /// Every bracket of basis elements lands in the component of the summed grade.
    pub fn check_closure(&self) -> Result<(), GradedError> {
        let elems: Vec<(i32, &WPoly)> = self
            .components
            .iter()
            .flat_map(|(p, b)| b.elements().iter().map(move |e| (*p, e)))
            .collect();
        for (i, (p, f)) in elems.iter().enumerate() {
            for (q, g) in &elems[i + 1..] {
                let b = contact_bracket(f, g);
                let residual = self.component(p + q).reduce(&b);
                if !residual.is_zero() {
                    return Err(GradedError::NotClosed {
                        f: (*f).clone(),
                        g: (*g).clone(),
                        residual,
                    });
                }
            }
        }
        Ok(())
    }

    /// Transitivity: no nonzero element of grade `p ≥ 0` commutes with `g_{-1}`.
    pub fn is_transitive(&self) -> bool {
        self.components.iter().filter(|(p, _)| **p >= 0).all(|(_, b)| {
            let kernel = extend::joint_kernel_on_gminus1(b);
            kernel.is_empty()
        })
    }
}

impl fmt::Display for GradedSubalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, b)) in self.components.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "g_{p}: {b}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SubalgebraJson {
    components: BTreeMap<i32, Vec<WPoly>>,
    status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top_grade: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutoff: Option<i32>,
    #[serde(default)]
    dimension: usize,
}

impl Serialize for GradedSubalgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (status, top_grade, cutoff) = match self.status {
            Status::Stabilized(t) => ("stabilized", Some(t), None),
            Status::GrowthExceeded(c) => ("growth_exceeded", None, Some(c)),
        };
        SubalgebraJson {
            components: self
                .components
                .iter()
                .map(|(p, b)| (*p, b.elements().to_vec()))
                .collect(),
            status: status.into(),
            top_grade,
            cutoff,
            dimension: self.dim(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedSubalgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SubalgebraJson::deserialize(d)?;
        let status = match raw.status.as_str() {
            "stabilized" => Status::Stabilized(
                raw.top_grade
                    .or_else(|| raw.components.keys().next_back().copied())
                    .unwrap_or(-2),
            ),
            "growth_exceeded" => Status::GrowthExceeded(raw.cutoff.unwrap_or(DEFAULT_CUTOFF)),
            other => return Err(D::Error::custom(format!("unknown status `{other}`"))),
        };
        // components are kept as given (spans), grades are not re-validated here
        let components = raw
            .components
            .into_iter()
            .map(|(p, gens)| (p, Basis::span(&gens)))
            .collect();
        Ok(GradedSubalgebra::new(components, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::p;

    fn polys(list: &[&str]) -> Vec<WPoly> {
        list.iter().map(|s| p(s)).collect()
    }

    #[test]
    fn universal_components() {
        assert_eq!(universal_component(-2).unwrap(), Basis::span(&polys(&["1"])));
        assert_eq!(
            universal_component(0).unwrap(),
            Basis::span(&polys(&["x^2", "x*z", "z^2", "y"]))
        );
        assert_eq!(universal_component(1).unwrap().dim(), 6);
        assert_eq!(universal_component(-3), Err(GradedError::GradeTooLow(-3)));
        for q in -2..12 {
            let w = q + 2;
            let count: i32 = (0..=w / 2).map(|b| w - 2 * b + 1).sum();
            assert_eq!(universal_component(q).unwrap().dim() as i32, count);
        }
    }

    #[test]
    fn subspace_grade_checks() {
        assert!(GradedSubspace::new(0, &polys(&["x^2", "y"])).is_ok());
        assert!(matches!(
            GradedSubspace::new(0, &polys(&["x"])),
            Err(GradedError::WrongGrade { .. })
        ));
        assert!(matches!(
            GradedSubspace::from_generators(&polys(&["x + y"])),
            Err(GradedError::Mixed(_))
        ));
    }

    #[test]
    fn heisenberg_is_closed_and_json_roundtrips() {
        let h = GradedSubalgebra::heisenberg();
        h.check_closure().unwrap();
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(
            json,
            r#"{"components":{"-2":["1"],"-1":["x","z"]},"status":"stabilized","top_grade":-1,"dimension":3}"#
        );
        let back: GradedSubalgebra = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn closure_failure_is_reported() {
        let bad = GradedSubalgebra::from_generators(&polys(&["1", "x", "z", "x^2", "z^2"])).unwrap();
        match bad.check_closure() {
            Err(GradedError::NotClosed { residual, .. }) => assert_eq!(residual, p("4*x*z")),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }
}
