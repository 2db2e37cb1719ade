//! Total derivative and prolongation of plane and contact vector fields.

use std::fmt;

use super::eval::{evaluate_with, Arith, EvalError, JetPoint, F64};
use super::expr::{JetExpr, JetVar, MAX_ORDER};
use super::JetError;
use crate::exact::WPoly;

/// `D = ∂x + Σ_{k < max_order} y_{k+1} ∂/∂y_k`.
///
/// ```
/// use contact_lie::jet::{total_derivative, JetExpr};
///
/// let d = total_derivative(&JetExpr::parse("y2^2").unwrap(), 3).unwrap();
/// assert_eq!(d, JetExpr::parse("2*y2*y3").unwrap());
/// ```
pub fn total_derivative(e: &JetExpr, max_order: u8) -> Result<JetExpr, JetError> {
    if max_order > MAX_ORDER {
        return Err(JetError::OrderOverflow { order: max_order });
    }
    if let Some(k) = e.max_order() {
        if k >= max_order {
            return Err(JetError::OrderOverflow { order: k + 1 });
        }
    }
    let mut terms = vec![e.diff(JetVar::X)];
    for k in 0..max_order {
        let d = e.diff(JetVar::Y(k));
        if !d.is_zero() {
            terms.push(JetExpr::y(k + 1) * d);
        }
    }
    Ok(JetExpr::sum(terms))
}

/// `D` applied with just enough room for the expression's own order.
pub fn total_derivative_auto(e: &JetExpr) -> Result<JetExpr, JetError> {
    total_derivative(e, e.max_order().map_or(0, |k| k + 1))
}

/// A prolonged vector field `ξ ∂x + Σ_{k ≤ n} φ_k ∂y_k` on `J^n`.
///
/// Only built by prolongation, so `φ_{k+1} = D(φ_k) − y_{k+1} D(ξ)` holds for
/// every `k ≥ 1` by construction; [`JetField::recursion_residual`] re-checks it
/// numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct JetField {
    xi: JetExpr,
    phi: Vec<JetExpr>,
}

impl JetField {
    fn prolong_from(xi: JetExpr, mut phi: Vec<JetExpr>, n: u8) -> Result<JetField, JetError> {
        if n > MAX_ORDER - 1 {
            return Err(JetError::OrderOverflow { order: n + 1 });
        }
        let dxi = total_derivative_auto(&xi)?;
        while phi.len() <= n as usize {
            let k = phi.len() as u8 - 1;
            let last = &phi[k as usize];
            let d = total_derivative(last, k + 1)?;
            phi.push(d - JetExpr::y(k + 1) * dxi.clone());
        }
        phi.truncate(n as usize + 1);
        Ok(JetField { xi, phi })
    }

    pub fn order(&self) -> u8 {
        (self.phi.len() - 1) as u8
    }

    pub fn xi(&self) -> &JetExpr {
        &self.xi
    }

    pub fn phi(&self) -> &[JetExpr] {
        &self.phi
    }

    pub fn truncate(&self, n: u8) -> JetField {
        JetField {
            xi: self.xi.clone(),
            phi: self.phi[..=(n.min(self.order()) as usize)].to_vec(),
        }
    }

    /// Pairs `(coefficient, ∂I)` whose products sum to `X(I)`; zero partials
    /// are dropped.
    pub fn terms(&self, inv: &JetExpr) -> Result<Vec<(JetExpr, JetExpr)>, JetError> {
        if let Some(k) = inv.max_order() {
            if k > self.order() {
                return Err(JetError::OrderOverflow { order: k });
            }
        }
        let mut out = Vec::new();
        let dx = inv.diff(JetVar::X);
        if !dx.is_zero() {
            out.push((self.xi.clone(), dx));
        }
        for (k, phi) in self.phi.iter().enumerate() {
            let d = inv.diff(JetVar::Y(k as u8));
            if !d.is_zero() {
                out.push((phi.clone(), d));
            }
        }
        Ok(out)
    }

    /// `X(I) = ξ ∂I/∂x + Σ φ_k ∂I/∂y_k` as an expression.
    pub fn apply(&self, inv: &JetExpr) -> Result<JetExpr, JetError> {
        Ok(JetExpr::sum(self.terms(inv)?.into_iter().map(|(c, d)| c * d)))
    }

    /// Coefficients `[ξ, φ_0, …, φ_n]`.
    pub fn coefficients(&self) -> Vec<&JetExpr> {
        std::iter::once(&self.xi).chain(self.phi.iter()).collect()
    }

    /// Coefficients of the commutator `[self, other]` as expressions.
    pub fn commutator(&self, other: &JetField) -> Result<Vec<JetExpr>, JetError> {
        let a = self.coefficients();
        let b = other.coefficients();
        a.iter()
            .zip(&b)
            .map(|(ca, cb)| Ok(self.apply(cb)? - other.apply(ca)?))
            .collect()
    }

    /// Largest `|φ_{k+1} − D(φ_k) + y_{k+1} D(ξ)|` over `k` at `point`.
    pub fn recursion_residual(&self, point: &JetPoint<f64>) -> Result<f64, JetError> {
        let dxi = total_derivative_auto(&self.xi)?;
        let mut worst: f64 = 0.0;
        for k in 0..self.order() {
            let d = total_derivative_auto(&self.phi[k as usize])?;
            let expected = d - JetExpr::y(k + 1) * dxi.clone();
            let lhs = self.phi[k as usize + 1].evaluate(point)?;
            let rhs = expected.evaluate(point)?;
            worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs())));
        }
        Ok(worst)
    }

    /// Evaluates `ξ, φ_0, …, φ_n` at `point`.
    pub fn evaluate<A: Arith>(&self, arith: &mut A, point: &JetPoint<A::Value>) -> Result<Vec<A::Value>, EvalError> {
        self.coefficients()
            .into_iter()
            .map(|c| evaluate_with(c, arith, point))
            .collect()
    }

    pub fn evaluate_f64(&self, point: &JetPoint<f64>) -> Result<Vec<f64>, EvalError> {
        self.evaluate(&mut F64, point)
    }
}

impl fmt::Display for JetField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "xi = {}", self.xi)?;
        for (k, phi) in self.phi.iter().enumerate() {
            writeln!(f, "phi{k} = {phi}")?;
        }
        Ok(())
    }
}

/// Prolongation of `A ∂x + B ∂y` to `J^n`: `φ_0 = B`,
/// `φ_{k+1} = D(φ_k) − y_{k+1} D(A)`.
pub fn prolong_plane(a: &JetExpr, b: &JetExpr, n: u8) -> Result<JetField, JetError> {
    for e in [a, b] {
        if e.max_order().is_some_and(|k| k >= 1) {
            return Err(JetError::NotPlane(e.to_string()));
        }
    }
    JetField::prolong_from(a.clone(), vec![b.clone()], n)
}

/// Prolongation of the contact field with characteristic function
/// `f(x, y0, y1)`: `ξ = −f_{y1}`, `φ_0 = f − y1 f_{y1}`, `φ_1 = f_x + y1 f_{y0}`.
///
/// ```
/// use contact_lie::jet::{prolong_contact, JetExpr};
///
/// let field = prolong_contact(&JetExpr::parse("z").unwrap(), 3).unwrap();
/// assert_eq!(field.xi(), &JetExpr::int(-1));
/// assert!(field.phi().iter().all(JetExpr::is_zero));
/// ```
pub fn prolong_contact(f: &JetExpr, n: u8) -> Result<JetField, JetError> {
    if n < 1 {
        return Err(JetError::OrderTooLow(n));
    }
    if f.max_order().is_some_and(|k| k >= 2) {
        return Err(JetError::NotContact(f.to_string()));
    }
    let fz = f.diff(JetVar::Y(1));
    let xi = -fz.clone();
    let phi0 = f - &(JetExpr::y(1) * fz);
    let phi1 = f.diff(JetVar::X) + JetExpr::y(1) * f.diff(JetVar::Y(0));
    JetField::prolong_from(xi, vec![phi0, phi1], n)
}

pub fn prolong_contact_poly(f: &WPoly, n: u8) -> Result<JetField, JetError> {
    prolong_contact(&JetExpr::from_wpoly(f), n)
}

/// `{f, g} = X_f(g) − f_{y0} g` for characteristic functions in `x, y0, y1`.
pub fn contact_bracket_expr(f: &JetExpr, g: &JetExpr) -> Result<JetExpr, JetError> {
    let field = prolong_contact(f, 1)?;
    Ok(field.apply(g)? - f.diff(JetVar::Y(0)) * g.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{hamiltonian_field, point_prolong};
    use crate::exact::poly::{p, random_poly};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(s: &str) -> JetExpr {
        JetExpr::parse(s).unwrap()
    }

    fn random_point(rng: &mut impl Rng) -> JetPoint<f64> {
        JetVar::all().fold(JetPoint::new(), |pt, v| pt.with(v, rng.random_range(-1.5..1.5)))
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&e("y0"), 1).unwrap(), e("y1"));
        assert_eq!(total_derivative(&e("x"), 0).unwrap(), JetExpr::one());
        assert_eq!(total_derivative(&e("y2^2"), 3).unwrap(), e("2*y2*y3"));
        assert!(matches!(
            total_derivative(&e("y3"), 3),
            Err(JetError::OrderOverflow { .. })
        ));
        assert!(total_derivative(&e("x"), 10).is_err());
    }

    #[test]
    fn plane_prolongation_examples() {
        let f = prolong_plane(&e("0"), &e("1"), 3).unwrap();
        assert!(f.xi().is_zero());
        assert_eq!(
            f.phi(),
            &[JetExpr::one(), JetExpr::zero(), JetExpr::zero(), JetExpr::zero()]
        );
        let f = prolong_plane(&e("x"), &e("0"), 2).unwrap();
        assert_eq!(f.phi()[1], e("-y1"));
        assert_eq!(f.phi()[2], e("-2*y2"));
        let f = prolong_plane(&e("0"), &e("x"), 1).unwrap();
        assert_eq!(f.phi()[1], JetExpr::one());
        assert!(matches!(
            prolong_plane(&e("y1"), &e("0"), 1),
            Err(JetError::NotPlane(_))
        ));
    }

    #[test]
    fn first_prolongation_matches_point_prolong() {
        for (a, b) in [("x*y", "y^2"), ("x^2", "x*y + 1"), ("y", "x")] {
            let jet = prolong_plane(&JetExpr::from_wpoly(&p(a)), &JetExpr::from_wpoly(&p(b)), 1).unwrap();
            let contact = point_prolong(&p(a), &p(b)).unwrap();
            let field = contact.field();
            assert_eq!(jet.xi().to_wpoly().unwrap(), field.x);
            assert_eq!(jet.phi()[0].to_wpoly().unwrap(), field.y);
            assert_eq!(jet.phi()[1].to_wpoly().unwrap(), field.z);
        }
    }

    #[test]
    fn contact_prolongation_examples() {
        let f = prolong_contact(&e("1"), 3).unwrap();
        assert!(f.xi().is_zero());
        assert_eq!(f.phi()[0], JetExpr::one());
        assert!(f.phi()[1..].iter().all(JetExpr::is_zero));
        let f = prolong_contact(&e("x"), 2).unwrap();
        assert!(f.xi().is_zero());
        assert_eq!(f.phi(), &[e("x"), JetExpr::one(), JetExpr::zero()]);
        assert!(prolong_contact(&e("x"), 0).is_err());
        assert!(prolong_contact(&e("y2"), 2).is_err());
    }

    #[test]
    fn recursion_holds_numerically() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in ["x^2 + z^2 + (1/2)*(2*y - x*z)", "(2*y - x*z)^2 + 1", "x*z^2"] {
            let field = prolong_contact_poly(&p(f), 5).unwrap();
            for _ in 0..5 {
                assert!(field.recursion_residual(&random_point(&mut rng)).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn transcendental_brackets() {
        let one = e("1");
        let z = e("z");
        let s = e("sqrt(1 + z^2)*sinh(x)");
        let c = e("sqrt(1 + z^2)*cosh(x)");
        // y-free characteristic functions: {1, g} = 0
        assert!(contact_bracket_expr(&one, &s).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let pt = random_point(&mut rng);
            let zs = contact_bracket_expr(&z, &s).unwrap().evaluate(&pt).unwrap();
            let cv = c.evaluate(&pt).unwrap();
            assert!((zs + cv).abs() < 1e-12, "{zs} {cv}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn order_one_truncation_is_the_hamiltonian_field(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_poly(&mut rng, 4, 4);
            let jet = prolong_contact_poly(&f, 3).unwrap().truncate(1);
            let ham = hamiltonian_field(&f);
            prop_assert_eq!(jet.xi().to_wpoly().unwrap(), ham.field().x.clone());
            prop_assert_eq!(jet.phi()[0].to_wpoly().unwrap(), ham.field().y.clone());
            prop_assert_eq!(jet.phi()[1].to_wpoly().unwrap(), ham.field().z.clone());
        }

        #[test]
        fn leibniz_for_total_derivative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_tree(&mut rng, 3);
            let b = random_tree(&mut rng, 3);
            let lhs = total_derivative(&(a.clone() * b.clone()), 5).unwrap();
            let rhs = total_derivative(&a, 5).unwrap() * b.clone() + a.clone() * total_derivative(&b, 5).unwrap();
            for _ in 0..5 {
                let pt = random_point(&mut rng);
                let (l, r) = (lhs.evaluate(&pt), rhs.evaluate(&pt));
                if let (Ok(l), Ok(r)) = (l, r) {
                    prop_assert!((l - r).abs() <= 1e-9 * (1.0 + l.abs()), "{} vs {}", l, r);
                }
            }
        }

        #[test]
        fn shift_commutes_with_total_derivative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_tree(&mut rng, 3);
            let lhs = total_derivative(&a, 5).unwrap().shift_indices().unwrap();
            let rhs = total_derivative(&a.shift_indices().unwrap(), 6).unwrap();
            // shift(E) is free of y0, so D(shift E) has no y1 ∂y0 term
            prop_assert!(a.shift_indices().unwrap().diff(JetVar::Y(0)).is_zero());
            for _ in 0..5 {
                let pt = random_point(&mut rng);
                if let (Ok(l), Ok(r)) = (lhs.evaluate(&pt), rhs.evaluate(&pt)) {
                    prop_assert!((l - r).abs() <= 1e-9 * (1.0 + l.abs()), "{} vs {}", l, r);
                }
            }
        }

        #[test]
        fn prolongation_respects_commutators(seed in any::<u64>(), n in 1u8..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let plane = |rng: &mut ChaCha8Rng| {
                let poly = random_poly(rng, 3, 3);
                // only x and y occur in plane coefficients
                JetExpr::from_wpoly(&poly).substitute(&|v| match v {
                    JetVar::Y(1) => JetExpr::x(),
                    other => JetExpr::var(other),
                })
            };
            let (a, b, c, d) = (plane(&mut rng), plane(&mut rng), plane(&mut rng), plane(&mut rng));
            let x = prolong_plane(&a, &b, n).unwrap();
            let y = prolong_plane(&c, &d, n).unwrap();
            let bracket_a = x.apply(&c).unwrap() - y.apply(&a).unwrap();
            let bracket_b = x.apply(&d).unwrap() - y.apply(&b).unwrap();
            let direct = prolong_plane(&bracket_a, &bracket_b, n).unwrap();
            let composed = x.commutator(&y).unwrap();
            for _ in 0..10 {
                let pt = random_point(&mut rng);
                let lhs = direct.evaluate_f64(&pt).unwrap();
                for (l, r) in lhs.iter().zip(&composed) {
                    let r = r.evaluate(&pt).unwrap();
                    prop_assert!((l - r).abs() <= 1e-9 * (1.0 + l.abs()), "{} vs {}", l, r);
                }
            }
        }
    }

    fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> JetExpr {
        let leaf = |rng: &mut ChaCha8Rng| match rng.random_range(0..4) {
            0 => JetExpr::x(),
            1 => JetExpr::int(rng.random_range(-3..=3)),
            _ => JetExpr::y(rng.random_range(0..4)),
        };
        if depth == 0 {
            return leaf(rng);
        }
        let a = random_tree(rng, depth - 1);
        match rng.random_range(0..6) {
            0 => a + random_tree(rng, depth - 1),
            1 => a * random_tree(rng, depth - 1),
            2 => (JetExpr::int(2) + a.powi(2)).sqrt(),
            3 => a.atan(),
            4 => a.sin(),
            _ => leaf(rng),
        }
    }
}
