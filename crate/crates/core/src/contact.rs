//! Contact calculus on `J¹(ℝ,ℝ)` with coordinates `(x, y, z)` and contact form
//! `ω = dy − z dx`.
//!
//! Every contact vector field is `X_f` for its characteristic function
//! `f = ω(X_f)`:
//!
//! ```text
//! X_f = −f_z ∂x + (f − z f_z) ∂y + (f_x + z f_y) ∂z
//! ```
//!
//! and the contact bracket is `{f, g} = ω([X_f, X_g])`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{Rat, Var, WPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("vector field is not contact: L_X ω is not a multiple of ω")]
    NotContact,
    #[error("plane field coefficients must not contain z (found in {0})")]
    ContainsZ(WPoly),
    #[error("{0} is not of the form a*y + g(x, z)")]
    NotInS(WPoly),
    #[error("divergence {0} is not constant")]
    NotScaled(WPoly),
}

/// A vector field `a ∂x + b ∂y + c ∂z` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VectorField {
    pub x: WPoly,
    pub y: WPoly,
    pub z: WPoly,
}

impl VectorField {
    pub fn new(x: WPoly, y: WPoly, z: WPoly) -> Self {
        VectorField { x, y, z }
    }

    /// Derivative of `g` along the field.
    pub fn apply(&self, g: &WPoly) -> WPoly {
        &(&self.x * &g.dx()) + &(&(&self.y * &g.dy()) + &(&self.z * &g.dz()))
    }

    /// `[self, other]`, acting as `self ∘ other − other ∘ self`.
    pub fn commutator(&self, other: &VectorField) -> VectorField {
        VectorField {
            x: &self.apply(&other.x) - &other.apply(&self.x),
            y: &self.apply(&other.y) - &other.apply(&self.y),
            z: &self.apply(&other.z) - &other.apply(&self.z),
        }
    }

    /// `ω(X) = b − z a`.
    pub fn omega(&self) -> WPoly {
        &self.y - &(&WPoly::z() * &self.x)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_field(f, &[(&self.x, "∂x"), (&self.y, "∂y"), (&self.z, "∂z")])
    }
}

fn write_field(f: &mut fmt::Formatter<'_>, parts: &[(&WPoly, &str)]) -> fmt::Result {
    let mut first = true;
    for (c, d) in parts {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        if c.len() > 1 {
            write!(f, "({c}){d}")?;
        } else {
            write!(f, "{c}*{d}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// The contact field `X_f` together with its characteristic function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContactField {
    field: VectorField,
    characteristic: WPoly,
}

impl ContactField {
    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn characteristic(&self) -> &WPoly {
        &self.characteristic
    }

    pub fn into_field(self) -> VectorField {
        self.field
    }
}

impl fmt::Display for ContactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt(f)
    }
}

/// `X_f = −f_z ∂x + (f − z f_z) ∂y + (f_x + z f_y) ∂z`.
pub fn hamiltonian_field(f: &WPoly) -> ContactField {
    let z = WPoly::z();
    let fz = f.dz();
    let field = VectorField {
        x: -&fz,
        y: f - &(&z * &fz),
        z: &f.dx() + &(&z * &f.dy()),
    };
    ContactField {
        field,
        characteristic: f.clone(),
    }
}

/// `{f, g} = ω([X_f, X_g])`.
///
/// ```
/// use contact_lie::contact::contact_bracket;
/// use contact_lie::exact::poly::p;
///
/// assert_eq!(contact_bracket(&p("x"), &p("z")), p("1"));
/// assert_eq!(contact_bracket(&p("y"), &p("x")), p("-x"));
/// ```
pub fn contact_bracket(f: &WPoly, g: &WPoly) -> WPoly {
    let xf = hamiltonian_field(f);
    let xg = hamiltonian_field(g);
    xf.field.commutator(&xg.field).omega()
}

/// The function `λ` with `L_X ω = λ ω`.
///
/// Writing `X = a ∂x + b ∂y + c ∂z`, this requires `b_z = z a_z` and
/// `b_x − z a_x − c = −z λ`, and then `λ = b_y − z a_y`.
pub fn contact_multiplier(field: &VectorField) -> Result<WPoly, ContactError> {
    let z = WPoly::z();
    let (a, b, c) = (&field.x, &field.y, &field.z);
    if !(&b.dz() - &(&z * &a.dz())).is_zero() {
        return Err(ContactError::NotContact);
    }
    let lambda = &b.dy() - &(&z * &a.dy());
    let dx_part = &(&b.dx() - &(&z * &a.dx())) - c;
    if !(&dx_part + &(&z * &lambda)).is_zero() {
        return Err(ContactError::NotContact);
    }
    Ok(lambda)
}

/// Characteristic functions of point fields are at most linear in `z`.
pub fn is_point_function(f: &WPoly) -> bool {
    f.degree_in(Var::Z).unwrap_or(0) <= 1
}

/// First prolongation of the plane field `A ∂x + B ∂y`:
/// `A ∂x + B ∂y + (B_x + (B_y − A_x) z − A_y z²) ∂z`, the field `X_{B − A z}`.
pub fn point_prolong(a: &WPoly, b: &WPoly) -> Result<ContactField, ContactError> {
    for c in [a, b] {
        if c.contains_var(Var::Z) {
            return Err(ContactError::ContainsZ(c.clone()));
        }
    }
    let z = WPoly::z();
    let zc = &(&b.dx() + &(&(&b.dy() - &a.dx()) * &z)) - &(&a.dy() * &z.pow(2));
    let field = VectorField::new(a.clone(), b.clone(), zc);
    let characteristic = field.omega();
    Ok(ContactField { field, characteristic })
}

/// A vector field `a ∂x + b ∂v` on a plane with coordinates `(x, v)`, where `v`
/// is `y` before prolongation or `z` after the projection of 𝔖.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneField {
    pub a: WPoly,
    pub b: WPoly,
    pub var: Var,
}

impl PlaneField {
    pub fn new(a: WPoly, b: WPoly, var: Var) -> Self {
        PlaneField { a, b, var }
    }

    pub fn zero(var: Var) -> Self {
        PlaneField::new(WPoly::zero(), WPoly::zero(), var)
    }

    pub fn apply(&self, g: &WPoly) -> WPoly {
        &(&self.a * &g.dx()) + &(&self.b * &g.derivative(self.var))
    }

    pub fn commutator(&self, other: &PlaneField) -> PlaneField {
        assert_eq!(self.var, other.var, "plane fields on different planes");
        PlaneField {
            a: &self.apply(&other.a) - &other.apply(&self.a),
            b: &self.apply(&other.b) - &other.apply(&self.b),
            var: self.var,
        }
    }

    pub fn divergence(&self) -> WPoly {
        &self.a.dx() + &self.b.derivative(self.var)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for PlaneField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dv = match self.var {
            Var::X => "∂x",
            Var::Y => "∂y",
            Var::Z => "∂z",
        };
        write_field(f, &[(&self.a, "∂x"), (&self.b, dv)])
    }
}

/// Splits `f = a y + g(x, z)`.
pub fn split_s(f: &WPoly) -> Result<(Rat, WPoly), ContactError> {
    let a = f.dy();
    if a.contains_var(Var::X) || a.contains_var(Var::Y) || a.contains_var(Var::Z) {
        return Err(ContactError::NotInS(f.clone()));
    }
    let a = a.coeff(&crate::exact::Monomial::ONE);
    let g = f - &(&WPoly::y() * &WPoly::constant(a.clone()));
    Ok((a, g))
}

/// The projection `π(X_f) = −g_z ∂x + (g_x + a z) ∂z` for `f = a y + g(x, z)`.
pub fn project_s(f: &WPoly) -> Result<(Rat, PlaneField), ContactError> {
    let (a, g) = split_s(f)?;
    let b = &g.dx() + &(&WPoly::z() * &WPoly::constant(a.clone()));
    Ok((a, PlaneField::new(-&g.dz(), b, Var::Z)))
}

/// The constant `λ` with `L_P(dx ∧ dz) = λ dx ∧ dz`.
pub fn volume_multiplier(p: &PlaneField) -> Result<Rat, ContactError> {
    let div = p.divergence();
    match div.leading() {
        None => Ok(Rat::zero()),
        Some((m, c)) if *m == crate::exact::Monomial::ONE => Ok(c.clone()),
        Some(_) => Err(ContactError::NotScaled(div)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::{p, random_poly};
    use crate::exact::rat::int;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(a: &str, b: &str, c: &str) -> VectorField {
        VectorField::new(p(a), p(b), p(c))
    }

    /// `{f, g} = X_f(g) − f_y g`, derived independently of the commutator route.
    fn oracle(f: &WPoly, g: &WPoly) -> WPoly {
        &hamiltonian_field(f).field.apply(g) - &(&f.dy() * g)
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(hamiltonian_field(&p("1")).field, field("0", "1", "0"));
        assert_eq!(hamiltonian_field(&p("z")).field, field("-1", "0", "0"));
        assert_eq!(hamiltonian_field(&p("x*z")).field, field("-x", "0", "z"));
    }

    #[test]
    fn bracket_examples() {
        let cases = [
            ("x", "z", "1"),
            ("y", "x", "-x"),
            ("y", "z", "0"),
            ("x^2", "z", "2*x"),
            ("z^2", "x", "-2*z"),
            ("x*z", "x", "-x"),
            ("x*z", "z", "z"),
            ("x^2", "z^2", "4*x*z"),
        ];
        for (f, g, want) in cases {
            assert_eq!(contact_bracket(&p(f), &p(g)), p(want), "{{{f}, {g}}}");
            assert_eq!(oracle(&p(f), &p(g)), p(want), "oracle {{{f}, {g}}}");
        }
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(contact_multiplier(&field("0", "1", "0")), Ok(p("0")));
        assert_eq!(contact_multiplier(&field("-x", "0", "z")), Ok(p("0")));
        assert_eq!(contact_multiplier(&field("1", "0", "0")), Ok(p("0")));
        assert_eq!(contact_multiplier(&field("0", "0", "1")), Err(ContactError::NotContact));
        assert_eq!(contact_multiplier(&hamiltonian_field(&p("y")).field), Ok(p("1")));
    }

    #[test]
    fn point_functions() {
        assert!(is_point_function(&p("x*y - x^2*z")));
        assert!(!is_point_function(&p("x^2 + z^2")));
        assert!(is_point_function(&p("1")));
    }

    #[test]
    fn point_prolong_examples() {
        let x1 = point_prolong(&p("0"), &p("1")).unwrap();
        assert_eq!(x1.field, field("0", "1", "0"));
        let x2 = point_prolong(&p("x"), &p("0")).unwrap();
        assert_eq!(x2.field, field("x", "0", "-z"));
        assert_eq!(x2.characteristic, p("-x*z"));
        let x3 = point_prolong(&p("0"), &p("x")).unwrap();
        assert_eq!(x3.field, field("0", "x", "1"));
        assert_eq!(x3.characteristic, p("x"));
        assert!(matches!(
            point_prolong(&p("z"), &p("0")),
            Err(ContactError::ContainsZ(_))
        ));
    }

    #[test]
    fn projection_examples() {
        let (a, f) = project_s(&p("1")).unwrap();
        assert_eq!((a, f.is_zero()), (int(0), true));
        let (a, f) = project_s(&p("y")).unwrap();
        assert_eq!((a, f), (int(1), PlaneField::new(p("0"), p("z"), Var::Z)));
        let (a, f) = project_s(&p("x^2+z^2")).unwrap();
        assert_eq!((a, f), (int(0), PlaneField::new(p("-2*z"), p("2*x"), Var::Z)));
        assert!(matches!(project_s(&p("x*y")), Err(ContactError::NotInS(_))));
        assert!(matches!(project_s(&p("y^2")), Err(ContactError::NotInS(_))));
    }

    #[test]
    fn volume_examples() {
        let (_, f) = project_s(&p("y")).unwrap();
        assert_eq!(volume_multiplier(&f), Ok(int(1)));
        let (_, f) = project_s(&p("x^3*z + z^4")).unwrap();
        assert_eq!(volume_multiplier(&f), Ok(int(0)));
        let bad = PlaneField::new(p("x^2"), p("0"), Var::Z);
        assert!(matches!(volume_multiplier(&bad), Err(ContactError::NotScaled(_))));
    }

    fn poly_strategy(max_weight: u32) -> impl Strategy<Value = WPoly> {
        any::<u64>().prop_map(move |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_poly(&mut rng, max_weight, 4)
        })
    }

    fn s_strategy() -> impl Strategy<Value = WPoly> {
        (any::<u64>(), -3i64..=3).prop_map(|(seed, a)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_poly(&mut rng, 4, 4);
            let g = g
                .terms()
                .filter(|(m, _)| m.y == 0)
                .fold(WPoly::zero(), |acc, (m, c)| acc + WPoly::term(c.clone(), *m));
            g + WPoly::y().scale(&int(a))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn omega_recovers_characteristic(f in poly_strategy(6)) {
            let xf = hamiltonian_field(&f);
            prop_assert_eq!(xf.field.omega(), f.clone());
            prop_assert!(contact_multiplier(&xf.field).is_ok());
        }

        #[test]
        fn bracket_matches_commutator(f in poly_strategy(5), g in poly_strategy(5)) {
            let b = contact_bracket(&f, &g);
            prop_assert_eq!(&b, &oracle(&f, &g));
            let lhs = hamiltonian_field(&b).field;
            let rhs = hamiltonian_field(&f).field.commutator(&hamiltonian_field(&g).field);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(contact_bracket(&g, &f), -b);
        }

        #[test]
        fn jacobi(f in poly_strategy(4), g in poly_strategy(4), h in poly_strategy(4)) {
            let j = contact_bracket(&f, &contact_bracket(&g, &h))
                + contact_bracket(&g, &contact_bracket(&h, &f))
                + contact_bracket(&h, &contact_bracket(&f, &g));
            prop_assert!(j.is_zero());
        }

        #[test]
        fn s_is_closed_and_commutant_is_y_free(f in s_strategy(), g in s_strategy()) {
            let b = contact_bracket(&f, &g);
            prop_assert!(split_s(&b).is_ok());
            let (_, gf) = split_s(&f).unwrap();
            let (_, gg) = split_s(&g).unwrap();
            prop_assert!(!contact_bracket(&gf, &gg).contains_var(Var::Y));
        }

        #[test]
        fn projection_is_homomorphism(f in s_strategy(), g in s_strategy()) {
            let (_, pf) = project_s(&f).unwrap();
            let (_, pg) = project_s(&g).unwrap();
            let (_, pb) = project_s(&contact_bracket(&f, &g)).unwrap();
            prop_assert_eq!(pb, pf.commutator(&pg));
            let (a, _) = split_s(&f).unwrap();
            prop_assert_eq!(volume_multiplier(&pf), Ok(a));
        }

        #[test]
        fn point_prolong_characteristic(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let strip = |q: WPoly| q.terms().filter(|(m, _)| m.z == 0)
                .fold(WPoly::zero(), |acc, (m, c)| acc + WPoly::term(c.clone(), *m));
            let a = strip(random_poly(&mut rng, 4, 3));
            let b = strip(random_poly(&mut rng, 4, 3));
            let pp = point_prolong(&a, &b).unwrap();
            prop_assert_eq!(pp.characteristic(), &(&b - &(&a * &WPoly::z())));
            let expected = hamiltonian_field(&pp.characteristic);
            prop_assert_eq!(pp.field(), expected.field());
        }
    }
}
