//! The classification as data: every irreducible contact algebra with its
//! basis of characteristic functions, exact structure constants and the
//! checks that tie the list together.
//!
//! ```
//! use contact_lie::catalog;
//!
//! let spec = catalog::load("I.3").unwrap();
//! let sc = catalog::structure_constants(&spec).unwrap();
//! assert_eq!(sc.dim(), 6);
//! assert!(sc.jacobi_check().is_ok());
//! ```

pub mod data;
pub mod deformation;
pub mod matrix;
pub mod numeric;
pub mod plane;
pub mod structure;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::poly::p;
use crate::exact::rat::{fmt_rat, Rat};
use crate::exact::{Basis, WPoly};
use crate::jet::{JetError, JetExpr};

pub use deformation::{beta_rescaling, deformation_6, normalize_beta, solve_gamma, DEFORMATION_LABELS};
pub use structure::{Fingerprint, StructureConstants};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("bracket of basis elements {} and {} ({left}, {right}) leaves the span: residual {residual}", pair.0, pair.1)]
    NotClosed {
        pair: (usize, usize),
        left: String,
        right: String,
        residual: String,
    },
    #[error("basis is linearly dependent: {0}")]
    Dependent(String),
    #[error("{0} has no polynomial basis")]
    NotPolynomial(String),
    #[error("bracket of basis elements {} and {} does not fit the basis numerically (residual {residual:e})", pair.0, pair.1)]
    NumericMismatch { pair: (usize, usize), residual: f64 },
    #[error("stored structure constants of {0} differ from the recomputed ones")]
    ConstantsMismatch(String),
    #[error("structure constants of {id} violate Jacobi at {triples:?}")]
    Jacobi { id: String, triples: Vec<[usize; 3]> },
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("catalog file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("catalog file: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog file: {0}")]
    Parse(String),
}

/// A reading of a printed formula that differs from what is stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub verbatim: String,
    pub stored: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecBasis {
    Polynomial(Vec<WPoly>),
    /// Characteristic functions in `x, y0 = y, y1 = z` outside the polynomial model.
    Transcendental(Vec<JetExpr>),
    /// No basis of functions, only the bracket table.
    Abstract(StructureConstants),
}

impl SpecBasis {
    pub fn len(&self) -> usize {
        match self {
            SpecBasis::Polynomial(b) => b.len(),
            SpecBasis::Transcendental(b) => b.len(),
            SpecBasis::Abstract(sc) => sc.dim(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Basis elements as text; abstract bases give their labels.
    pub fn texts(&self) -> Vec<String> {
        match self {
            SpecBasis::Polynomial(b) => b.iter().map(ToString::to_string).collect(),
            SpecBasis::Transcendental(b) => b.iter().map(ToString::to_string).collect(),
            SpecBasis::Abstract(sc) => sc.labels().to_vec(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpecBasis::Polynomial(_) => "polynomial",
            SpecBasis::Transcendental(_) => "transcendental",
            SpecBasis::Abstract(_) => "abstract",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub id: String,
    pub name: String,
    pub basis: SpecBasis,
    pub alpha: Option<Rat>,
    pub beta: Option<Rat>,
    pub annotations: Vec<Annotation>,
}

impl AlgebraSpec {
    fn polynomial(id: &str, name: &str, basis: &[&str]) -> Self {
        AlgebraSpec {
            id: id.into(),
            name: name.into(),
            basis: SpecBasis::Polynomial(basis.iter().map(|s| p(s)).collect()),
            alpha: None,
            beta: None,
            annotations: Vec::new(),
        }
    }

    fn transcendental(id: &str, name: &str, basis: &[&str]) -> Self {
        AlgebraSpec {
            id: id.into(),
            name: name.into(),
            basis: SpecBasis::Transcendental(
                basis
                    .iter()
                    .map(|s| JetExpr::parse(s).expect("catalog expression"))
                    .collect(),
            ),
            alpha: None,
            beta: None,
            annotations: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn polynomials(&self) -> Result<&[WPoly], CatalogError> {
        match &self.basis {
            SpecBasis::Polynomial(b) => Ok(b),
            _ => Err(CatalogError::NotPolynomial(self.id.clone())),
        }
    }

    /// Echelonized span of a polynomial basis.
    pub fn span(&self) -> Result<Basis, CatalogError> {
        Ok(Basis::span(self.polynomials()?))
    }
}

/// Ids of the graded algebras.
pub const GRADED_IDS: [&str; 6] = ["I.1", "I.2", "I.3", "I.4", "I.5", "I.6"];
/// Ids of the two algebras without a grading, in matrix form.
pub const FILTERED_IDS: [&str; 2] = ["II.1", "II.2"];
/// Ids of their function representations.
pub const REPRESENTATION_IDS: [&str; 6] = ["II.1a", "II.1b", "II.1c", "II.2a", "II.2b", "II.2c"];

/// Every id accepted by [`load`].
pub fn ids() -> Vec<&'static str> {
    GRADED_IDS
        .iter()
        .chain(&FILTERED_IDS)
        .chain(&REPRESENTATION_IDS)
        .copied()
        .collect()
}

const I4_LAST_PRINTED: &str = "(x^2+y^2)^2+4*(2*y-x*z)^2";
const I4_LAST: &str = "(x^2+z^2)^2+4*(2*y-x*z)^2";

fn i4_basis(last: &str) -> Vec<&str> {
    vec![
        "1",
        "x",
        "z",
        "x^2+z^2",
        "2*y-x*z",
        "x*(x^2+z^2)-2*z*(2*y-x*z)",
        "z*(x^2+z^2)+2*x*(2*y-x*z)",
        last,
    ]
}

/// I.6 for an arbitrary `α`; [`load`] gives `α = 0`.
pub fn i6(alpha: &Rat) -> AlgebraSpec {
    let h = p("x^2+z^2") + p("2*y-x*z").scale(alpha);
    AlgebraSpec {
        id: "I.6".into(),
        name: if num_traits::Zero::is_zero(alpha) {
            "h0 = <x^2+z^2>, top grade 0".into()
        } else {
            format!("h0 = <x^2+z^2+({})*(2*y-x*z)>, top grade 0", fmt_rat(alpha))
        },
        basis: SpecBasis::Polynomial(vec![p("1"), p("x"), p("z"), h]),
        alpha: Some(alpha.clone()),
        beta: None,
        annotations: Vec::new(),
    }
}

/// I.4 exactly as printed, with `(x² + y²)²` in the last element.
pub fn i4_verbatim() -> AlgebraSpec {
    AlgebraSpec::polynomial("I.4", "I.4 as printed", &i4_basis(I4_LAST_PRINTED))
}

pub fn load(id: &str) -> Result<AlgebraSpec, CatalogError> {
    let spec = match id {
        "I.1" => AlgebraSpec::polynomial(
            id,
            "h0 = gl(2,R), top grade 2",
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
            ],
        ),
        "I.2" => AlgebraSpec::polynomial(
            id,
            "h0 = gl(2,R), top grade 0",
            &["1", "x", "y", "z", "x^2", "x*z", "z^2"],
        ),
        "I.3" => AlgebraSpec::polynomial(id, "h0 = sl(2,R), top grade 0", &["1", "x", "z", "x^2", "x*z", "z^2"]),
        "I.4" => {
            let mut spec = AlgebraSpec::polynomial(id, "h0 = C, top grade 2", &i4_basis(I4_LAST));
            spec.annotations.push(Annotation {
                verbatim: I4_LAST_PRINTED.into(),
                stored: I4_LAST.into(),
                reason: "the printed element is not grade-homogeneous and the printed basis is not bracket-closed; \
                         the stored reading closes"
                    .into(),
            });
            spec
        }
        "I.5" => AlgebraSpec::polynomial(id, "h0 = C, top grade 0", &["1", "x", "z", "x^2+z^2", "2*y-x*z"]),
        "I.6" => i6(&Rat::from_integer(0.into())),
        "II.1" => matrix_spec(id, "gl(2,R) with g0 = <(1,1;-1,1)>", matrix::filtered_model(false)),
        "II.2" => matrix_spec(id, "u(2) with g0 = <(1,1;-1,1)>", matrix::filtered_model(true)),
        "II.1a" => AlgebraSpec::polynomial(
            id,
            "II.1, representation (a)",
            &["(2*y-x*z)^2+1", "x-z*(2*y-x*z)", "z+x*(2*y-x*z)", "x^2+z^2"],
        ),
        "II.1b" => AlgebraSpec::polynomial(
            id,
            "II.1, representation (b)",
            &[
                "x^2+z^2",
                "2*x*(2*y-x*z)+z*(x^2+z^2+4)",
                "2*z*(2*y-x*z)-x*(x^2+z^2+4)",
                "16+4*(2*y-x*z)^2+(x^2+z^2)^2",
            ],
        ),
        "II.1c" => AlgebraSpec::transcendental(
            id,
            "II.1, representation (c)",
            &["1", "z", "sqrt(1+z^2)*sinh(x)", "sqrt(1+z^2)*cosh(x)"],
        ),
        "II.2a" => AlgebraSpec::polynomial(
            id,
            "II.2, representation (a)",
            &["(2*y-x*z)^2+1", "x+z*(2*y-x*z)", "z-x*(2*y-x*z)", "x^2+z^2"],
        ),
        "II.2b" => AlgebraSpec::polynomial(
            id,
            "II.2, representation (b)",
            &[
                "x^2+z^2",
                "2*x*(2*y-x*z)+z*(x^2+z^2-4)",
                "2*z*(2*y-x*z)-x*(x^2+z^2-4)",
                "16+4*(2*y-x*z)^2+(x^2+z^2)^2",
            ],
        ),
        "II.2c" => AlgebraSpec::transcendental(
            id,
            "II.2, representation (c)",
            &["1", "z", "sqrt(1-z^2)*sin(x)", "sqrt(1-z^2)*cos(x)"],
        ),
        _ => return Err(CatalogError::UnknownId(id.into())),
    };
    if let SpecBasis::Polynomial(b) = &spec.basis {
        StructureConstants::from_polys(b)?;
    }
    Ok(spec)
}

fn matrix_spec(id: &str, name: &str, model: matrix::MatrixModel) -> AlgebraSpec {
    AlgebraSpec {
        id: id.into(),
        name: name.into(),
        basis: SpecBasis::Abstract(model.structure_constants().clone()),
        alpha: None,
        beta: None,
        annotations: Vec::new(),
    }
}

/// Exact constants for polynomial and abstract bases, snapped numeric ones
/// for transcendental bases.
pub fn structure_constants(spec: &AlgebraSpec) -> Result<StructureConstants, CatalogError> {
    match &spec.basis {
        SpecBasis::Polynomial(b) => StructureConstants::from_polys(b),
        SpecBasis::Transcendental(b) => numeric::structure_constants(b, &numeric::NumericOptions::default()),
        SpecBasis::Abstract(sc) => Ok(sc.clone()),
    }
}

/// Whether every basis element of `sub` lies in the span of `sup`.
pub fn embedding_check(sub: &AlgebraSpec, sup: &AlgebraSpec) -> Result<bool, CatalogError> {
    let span = sup.span()?;
    Ok(sub.polynomials()?.iter().all(|f| span.contains(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    #[test]
    fn dimensions() {
        let expected = [
            ("I.1", 10),
            ("I.2", 7),
            ("I.3", 6),
            ("I.4", 8),
            ("I.5", 5),
            ("I.6", 4),
            ("II.1", 4),
            ("II.2", 4),
        ];
        for (id, dim) in expected {
            let spec = load(id).unwrap();
            assert_eq!(spec.dim(), dim, "{id}");
            assert_eq!(structure_constants(&spec).unwrap().dim(), dim, "{id}");
        }
        for id in REPRESENTATION_IDS {
            assert_eq!(load(id).unwrap().dim(), 4, "{id}");
        }
    }

    #[test]
    fn load_examples() {
        let i3 = load("I.3").unwrap();
        assert_eq!(i3.basis.texts(), ["1", "x", "z", "x^2", "x*z", "z^2"]);
        let i1 = load("I.1").unwrap();
        assert_eq!(i1.polynomials().unwrap().last().unwrap(), &p("(2*y-x*z)^2"));
        assert!(matches!(load("I.7"), Err(CatalogError::UnknownId(_))));
    }

    #[test]
    fn all_constants_satisfy_jacobi() {
        for id in ids() {
            let sc = structure_constants(&load(id).unwrap()).unwrap();
            assert!(sc.jacobi_check().is_ok(), "{id}");
        }
    }

    #[test]
    fn printed_i4_does_not_close() {
        match StructureConstants::from_polys(i4_verbatim().polynomials().unwrap()) {
            Err(CatalogError::NotClosed { .. }) => {}
            other => panic!("{other:?}"),
        }
        let spec = load("I.4").unwrap();
        assert_eq!(spec.annotations.len(), 1);
        assert_eq!(spec.annotations[0].verbatim, I4_LAST_PRINTED);
    }

    #[test]
    fn transcendental_bases_need_numeric_constants() {
        let spec = load("II.2c").unwrap();
        assert!(matches!(spec.polynomials(), Err(CatalogError::NotPolynomial(_))));
    }

    #[test]
    fn i6_rotates_the_negative_part() {
        for alpha in [int(0), rat(1, 2), int(3)] {
            let sc = structure_constants(&i6(&alpha)).unwrap();
            assert!(sc.jacobi_check().is_ok());
            // {h, x} and {h, z} in the basis (1, x, z, h)
            let hx = sc.get(3, 1);
            let hz = sc.get(3, 2);
            assert_eq!(hx[1], -&alpha);
            assert_eq!(hx[2], int(-2));
            assert_eq!(hz[1], int(2));
            assert_eq!(hz[2], -&alpha);
        }
    }

    #[test]
    fn embeddings() {
        let i1 = load("I.1").unwrap();
        let i4 = load("I.4").unwrap();
        // (a) lies in I.1 and (b) in I.4, not the other way round
        for id in ["II.1a", "II.2a"] {
            let spec = load(id).unwrap();
            assert!(embedding_check(&spec, &i1).unwrap(), "{id} in I.1");
            assert!(!embedding_check(&spec, &i4).unwrap(), "{id} in I.4");
        }
        for id in ["II.1b", "II.2b"] {
            let spec = load(id).unwrap();
            assert!(embedding_check(&spec, &i4).unwrap(), "{id} in I.4");
            assert!(!embedding_check(&spec, &i1).unwrap(), "{id} in I.1");
        }
        assert!(!embedding_check(&i1, &load("I.2").unwrap()).unwrap());
        assert!(embedding_check(&load("II.1c").unwrap(), &i1).is_err());
    }

    #[test]
    fn fingerprints_separate_the_list() {
        let fp = |id: &str| structure_constants(&load(id).unwrap()).unwrap().fingerprint();
        for family in [["II.1", "II.1a", "II.1b", "II.1c"], ["II.2", "II.2a", "II.2b", "II.2c"]] {
            for id in &family[1..] {
                assert_eq!(fp(id), fp(family[0]), "{id}");
            }
        }
        let main: Vec<&str> = GRADED_IDS.iter().chain(&FILTERED_IDS).copied().collect();
        for (i, a) in main.iter().enumerate() {
            for b in &main[i + 1..] {
                assert_ne!(fp(a), fp(b), "{a} vs {b}");
            }
        }
        assert_eq!(fp("II.1").derived_killing_signature, (2, 1, 0));
        assert_eq!(fp("II.2").derived_killing_signature, (0, 3, 0));
    }
}
