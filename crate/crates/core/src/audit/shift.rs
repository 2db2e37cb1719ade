//! Invariants of an algebra in `𝔖` containing `1` come from invariants of its
//! plane image by the index shift `y_i ↦ y_{i+1}`.

use serde::Serialize;

use super::{check, e, AuditError, AuditOptions, AuditReport, Generator, InvariantCase, Kind};
use crate::catalog::load;
use crate::contact::project_s;
use crate::jet::{JetExpr, JetVar};

#[derive(Debug, Clone, Serialize)]
pub struct ShiftReport {
    pub plane_invariant: String,
    pub shifted: String,
    pub expected: String,
    pub shift_matches: bool,
    pub checks: Vec<AuditReport>,
}

impl ShiftReport {
    pub fn passed(&self) -> bool {
        self.shift_matches && self.checks.iter().all(|r| r.verdict.passed())
    }
}

/// `y_i ↦ y_{i−1}`; the caller guarantees that `y0` does not occur.
fn unshift(expr: &JetExpr) -> JetExpr {
    expr.substitute(&|v| match v {
        JetVar::Y(k) if k > 0 => JetExpr::y(k - 1),
        other => JetExpr::var(other),
    })
}

fn plane(a: &str, b: &str) -> Generator {
    Generator::Plane(e(a), e(b))
}

fn contact(list: &[&str]) -> Vec<Generator> {
    list.iter().map(|s| Generator::Contact(e(s))).collect()
}

/// Plane images `π(f)` of the I.5 basis, written on the `(x, y0)` plane.
fn i5_plane_generators() -> Vec<Generator> {
    let spec = load("I.5").expect("registry id");
    let to_plane = |p: &crate::exact::WPoly| {
        JetExpr::from_wpoly(p).substitute(&|v| match v {
            JetVar::Y(1) => JetExpr::y(0),
            other => JetExpr::var(other),
        })
    };
    spec.polynomials()
        .expect("polynomial basis")
        .iter()
        .filter_map(|f| {
            let (_, pf) = project_s(f).expect("I.5 lies in S");
            (!pf.is_zero()).then(|| Generator::Plane(to_plane(&pf.a), to_plane(&pf.b)))
        })
        .collect()
}

pub fn shift_check(opts: &AuditOptions) -> Result<ShiftReport, AuditError> {
    let plane_inv = e("y2*y4/y3^2");
    let shifted = plane_inv.shift_indices()?;
    let expected = e("y3*y5/y4^2");
    // ⟨∂x, x∂x, y∂y, ∂y, x∂y⟩ and the contact algebra projecting onto it
    let plane_gens = vec![
        plane("1", "0"),
        plane("x", "0"),
        plane("0", "y"),
        plane("0", "1"),
        plane("0", "x"),
    ];
    let contact_gens = contact(&["1", "-z", "-x*z", "y", "x", "x^2/2"]);
    let i5_plane = i5_plane_generators();
    let i5_diff = e("((1+y2^2)*y4-3*y2*y3^2)/y3^2");
    let i5_int = e("y3/(1+y2^2)");
    let cases = [
        InvariantCase::new("plane", Kind::Differential, plane_inv.clone(), plane_gens.clone()),
        InvariantCase::new("plane", Kind::Integral, e("y3/y2"), plane_gens),
        InvariantCase::new("shifted", Kind::Differential, shifted.clone(), contact_gens.clone()),
        InvariantCase::new("shifted", Kind::Integral, e("y3/y2").shift_indices()?, contact_gens),
        InvariantCase::new(
            "I.5 plane image",
            Kind::Differential,
            unshift(&i5_diff),
            i5_plane.clone(),
        ),
        InvariantCase::new("I.5 plane image", Kind::Integral, unshift(&i5_int), i5_plane),
    ];
    let checks = cases.iter().map(|c| check(c, opts)).collect::<Result<_, _>>()?;
    Ok(ShiftReport {
        plane_invariant: plane_inv.to_string(),
        shift_matches: shifted == expected,
        shifted: shifted.to_string(),
        expected: expected.to_string(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_relation_holds() {
        let report = shift_check(&AuditOptions::default()).unwrap();
        assert!(report.shift_matches);
        for c in &report.checks {
            assert!(c.verdict.passed(), "{} {:?}: {}", c.case, c.kind, c.max_residual);
        }
    }

    #[test]
    fn unshift_inverts_shift() {
        let a = e("y3*y5/y4^2 + x");
        assert_eq!(unshift(&a).shift_indices().unwrap(), a);
    }
}
