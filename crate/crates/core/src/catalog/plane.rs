//! Plane algebras obtained by projecting the catalog algebras that lie in
//! `𝔖 = {a y + g(x, z)}` along `∂y`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{i6, load, AlgebraSpec, CatalogError};
use crate::contact::{contact_bracket, project_s, volume_multiplier, PlaneField};
use crate::exact::poly::{p, random_poly};
use crate::exact::rat::{int, Rat};
use crate::exact::{Basis, Monomial, Var, WPoly};

/// Encodes `a ∂x + b ∂z` as `a + y b`, so that spans of plane fields can be
/// compared with [`Basis`].
pub fn encode(f: &PlaneField) -> WPoly {
    &f.a + &(&WPoly::y() * &f.b)
}

fn field(a: &str, b: &str) -> PlaneField {
    PlaneField::new(p(a), p(b), Var::Z)
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneImage {
    pub id: String,
    pub images: Vec<String>,
    pub expected: Vec<String>,
    pub matches: bool,
}

/// Projects every basis element of `spec` and compares the span of the
/// images with `expected`.
pub fn plane_image(spec: &AlgebraSpec, expected: &[PlaneField]) -> Result<PlaneImage, CatalogError> {
    let mut images = Vec::new();
    for f in spec.polynomials()? {
        let (_, pf) =
            project_s(f).map_err(|_| CatalogError::NotPolynomial(format!("{} ({f} is not in S)", spec.id)))?;
        if !pf.is_zero() {
            images.push(pf);
        }
    }
    let got = Basis::span(&images.iter().map(encode).collect::<Vec<_>>());
    let want = Basis::span(&expected.iter().map(encode).collect::<Vec<_>>());
    Ok(PlaneImage {
        id: spec.id.clone(),
        images: images.iter().map(ToString::to_string).collect(),
        expected: expected.iter().map(ToString::to_string).collect(),
        matches: got == want,
    })
}

/// `⟨∂x, ∂z, (βx − z)∂x + (x + βz)∂z⟩` with `β = α/2`.
pub fn i6_expected(alpha: &Rat) -> Vec<PlaneField> {
    let beta = alpha / int(2);
    vec![
        field("1", "0"),
        field("0", "1"),
        PlaneField::new(p("x").scale(&beta) - p("z"), p("x") + p("z").scale(&beta), Var::Z),
    ]
}

/// Images of I.2, I.3, I.5 and I.6 for the given values of `α`.
pub fn plane_images(alphas: &[Rat]) -> Result<Vec<PlaneImage>, CatalogError> {
    let mut out = vec![
        plane_image(
            &load("I.2")?,
            &[
                field("1", "0"),
                field("0", "1"),
                field("x", "0"),
                field("z", "0"),
                field("0", "x"),
                field("0", "z"),
            ],
        )?,
        plane_image(
            &load("I.3")?,
            &[
                field("1", "0"),
                field("0", "1"),
                field("x", "-z"),
                field("z", "0"),
                field("0", "x"),
            ],
        )?,
        plane_image(
            &load("I.5")?,
            &[field("1", "0"), field("0", "1"), field("-z", "x"), field("x", "z")],
        )?,
    ];
    for alpha in alphas {
        let mut img = plane_image(&i6(alpha), &i6_expected(alpha))?;
        img.id = format!("I.6 (alpha = {alpha})");
        out.push(img);
    }
    Ok(out)
}

/// Random `a y + g(x, z)` with integer `a`.
pub fn random_s_element(rng: &mut impl Rng, max_weight: u32) -> WPoly {
    let g = random_poly(rng, max_weight, 5);
    let mut f = WPoly::zero();
    for (m, c) in g.terms().filter(|(m, _)| m.y == 0) {
        f.add_scaled(&WPoly::term(int(1), *m), c);
    }
    let a = rng.random_range(-3i64..=3);
    f.add_scaled(&WPoly::term(int(1), Monomial::new(0, 1, 0)), &int(a));
    f
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub pairs: usize,
    pub homomorphism_failures: Vec<(String, String)>,
    pub kernel_failures: Vec<String>,
    pub volume_failures: Vec<String>,
}

impl ProjectionReport {
    pub fn passed(&self) -> bool {
        self.homomorphism_failures.is_empty() && self.kernel_failures.is_empty() && self.volume_failures.is_empty()
    }
}

/// Checks `π({f, g}) = [π f, π g]`, `π f = 0 ⇔ f ∈ ⟨1⟩` and
/// `volume_multiplier(π f) = a` on random elements of `𝔖`.
pub fn check_projection(pairs: usize, seed: u64) -> ProjectionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProjectionReport {
        pairs,
        homomorphism_failures: Vec::new(),
        kernel_failures: Vec::new(),
        volume_failures: Vec::new(),
    };
    for _ in 0..pairs {
        let f = random_s_element(&mut rng, 4);
        let g = random_s_element(&mut rng, 4);
        let (a, pf) = project_s(&f).expect("f lies in S");
        let (_, pg) = project_s(&g).expect("g lies in S");
        let (_, pfg) = project_s(&contact_bracket(&f, &g)).expect("S is a subalgebra");
        if pfg != pf.commutator(&pg) {
            report.homomorphism_failures.push((f.to_string(), g.to_string()));
        }
        let is_constant = f.terms().all(|(m, _)| *m == Monomial::ONE);
        if pf.is_zero() != is_constant {
            report.kernel_failures.push(f.to_string());
        }
        if volume_multiplier(&pf).ok() != Some(a) {
            report.volume_failures.push(f.to_string());
        }
    }
    // the constants themselves
    let (_, p1) = project_s(&WPoly::one()).expect("1 lies in S");
    if !p1.is_zero() {
        report.kernel_failures.push("1".into());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn images_match_the_plane_algebras() {
        let images = plane_images(&[int(0), rat(1, 2), int(2)]).unwrap();
        assert_eq!(images.len(), 6);
        for img in &images {
            assert!(img.matches, "{img:?}");
        }
    }

    #[test]
    fn wrong_expectation_is_detected() {
        let img = plane_image(
            &load("I.5").unwrap(),
            &[field("1", "0"), field("0", "1"), field("z", "x")],
        )
        .unwrap();
        assert!(!img.matches);
    }

    #[test]
    fn algebras_outside_s_are_rejected() {
        assert!(plane_image(&load("I.4").unwrap(), &[]).is_err());
    }

    #[test]
    fn projection_properties() {
        let report = check_projection(120, 7);
        assert!(report.passed(), "{report:?}");
    }
}
