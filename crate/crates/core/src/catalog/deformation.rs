//! Filtered deformations of the graded algebra I.6.
//!
//! Basis `(e, u1, u2, u3)` with `u3 = [u1, u2]` and
//!
//! ```text
//! [e, u1] = α u1 − u2     [e, u2] = u1 + α u2     [e, u3] = 2α u3
//! [u1, u3] = −β u2        [u2, u3] = γ u1
//! ```
//!
//! `γ` is not free: it is fixed by the Jacobi identity at `α = 0`.

use num_traits::{Signed, Zero};

use super::structure::StructureConstants;
use crate::exact::rat::{int, Rat};
use crate::exact::Matrix;

pub const DEFORMATION_LABELS: [&str; 4] = ["e", "u1", "u2", "u3"];

fn model(alpha: &Rat, beta: &Rat, gamma: &Rat) -> StructureConstants {
    let mut sc = StructureConstants::zero(DEFORMATION_LABELS.iter().map(|s| s.to_string()).collect());
    let one = int(1);
    sc.set_sparse(0, 1, &[(1, alpha.clone()), (2, -&one)]);
    sc.set_sparse(0, 2, &[(1, one.clone()), (2, alpha.clone())]);
    sc.set_sparse(0, 3, &[(3, alpha * int(2))]);
    sc.set_sparse(1, 2, &[(3, one)]);
    sc.set_sparse(1, 3, &[(2, -beta)]);
    sc.set_sparse(2, 3, &[(1, gamma.clone())]);
    sc
}

/// The value of `γ` making the `α = 0` model satisfy Jacobi, if any.
///
/// The Jacobiator is affine in `γ`, so two evaluations determine the linear
/// system `A γ = −J(0)`.
pub fn solve_gamma(beta: &Rat) -> Option<Rat> {
    let j0 = model(&Rat::zero(), beta, &Rat::zero()).jacobiator();
    let j1 = model(&Rat::zero(), beta, &int(1)).jacobiator();
    let rows: Vec<Vec<Rat>> = j0.iter().zip(&j1).map(|(a, b)| vec![b - a]).collect();
    let rhs: Vec<Rat> = j0.iter().map(|a| -a).collect();
    Matrix::from_rows(rows).solve(&rhs).map(|v| v[0].clone())
}

/// The four-dimensional algebra of the deformation analysis, with `γ` from
/// [`solve_gamma`].
///
/// ```
/// use contact_lie::catalog::deformation_6;
/// use contact_lie::exact::rat::int;
///
/// assert!(deformation_6(&int(1), &int(0)).jacobi_check().is_ok());
/// assert!(deformation_6(&int(1), &int(1)).jacobi_check().is_err());
/// assert!(deformation_6(&int(0), &int(1)).jacobi_check().is_ok());
/// ```
pub fn deformation_6(alpha: &Rat, beta: &Rat) -> StructureConstants {
    let gamma = solve_gamma(beta).expect("the alpha = 0 Jacobi system is consistent");
    model(alpha, beta, &gamma)
}

/// Sign of `β`: rescaling `u1, u2 ↦ s u1, s u2`, `u3 ↦ s² u3` replaces `β` by
/// `s² β`, so only `0, ±1` are distinct.
pub fn normalize_beta(beta: &Rat) -> Rat {
    if beta.is_zero() {
        Rat::zero()
    } else if beta.is_positive() {
        int(1)
    } else {
        int(-1)
    }
}

/// Columns of the rescaling `(e, s u1, s u2, s² u3)`.
pub fn beta_rescaling(s: &Rat) -> Vec<Vec<Rat>> {
    let z = Rat::zero;
    vec![
        vec![int(1), z(), z(), z()],
        vec![z(), s.clone(), z(), z()],
        vec![z(), z(), s.clone(), z()],
        vec![z(), z(), z(), s * s],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::structure::StructureConstants;
    use crate::exact::poly::p;
    use crate::exact::rat::rat;
    use crate::exact::WPoly;

    #[test]
    fn gamma_matches_brute_force() {
        for beta in [int(-2), int(-1), int(0), rat(1, 2), int(1), int(3)] {
            let solved = solve_gamma(&beta).unwrap();
            let candidates: Vec<Rat> = (-12..=12).map(|n| rat(n, 4)).collect();
            let hits: Vec<&Rat> = candidates
                .iter()
                .filter(|g| model(&Rat::zero(), &beta, g).jacobi_check().is_ok())
                .collect();
            assert_eq!(hits, vec![&solved], "beta {beta}");
            assert_eq!(solved, beta);
        }
    }

    #[test]
    fn jacobi_iff_alpha_or_beta_vanishes() {
        let values = [int(0), rat(1, 2), int(1), int(2), int(-1)];
        for a in values.iter().filter(|a| !a.is_negative()) {
            for b in &values {
                let ok = deformation_6(a, b).jacobi_check().is_ok();
                assert_eq!(ok, a.is_zero() || b.is_zero(), "alpha {a} beta {b}");
            }
        }
    }

    #[test]
    fn signatures_of_the_two_real_forms() {
        let plus = deformation_6(&int(0), &int(1)).fingerprint();
        let minus = deformation_6(&int(0), &int(-1)).fingerprint();
        assert_eq!(plus.derived_killing_signature, (0, 3, 0));
        assert_eq!(minus.derived_killing_signature, (2, 1, 0));
        assert_eq!(plus.center_dim, 1);
        assert_eq!(minus.center_dim, 1);
    }

    #[test]
    fn rescaling_normalizes_beta() {
        let s = rat(1, 2);
        let moved = deformation_6(&int(0), &int(4))
            .change_basis(&beta_rescaling(&s))
            .unwrap();
        assert_eq!(moved, deformation_6(&int(0), &int(1)));
        assert_eq!(normalize_beta(&int(4)), int(1));
        assert_eq!(normalize_beta(&rat(-1, 9)), int(-1));
        assert_eq!(
            deformation_6(&int(0), &rat(-1, 9)).fingerprint(),
            deformation_6(&int(0), &int(-1)).fingerprint()
        );
    }

    #[test]
    fn beta_zero_is_the_graded_algebra() {
        // e = −h/2, u1 = x, u2 = −z, u3 = {u1, u2} = −1 with h = x² + z² + 2α(2y − xz)
        for alpha in [int(0), rat(1, 2), int(1), int(2)] {
            let h = p("x^2 + z^2") + p("2*y - x*z").scale(&(&alpha * int(2)));
            let basis: Vec<WPoly> = vec![h.scale(&rat(-1, 2)), p("x"), p("-z"), p("-1")];
            let sc = StructureConstants::from_polys(&basis).unwrap();
            let expected = deformation_6(&alpha, &int(0));
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(sc.get(i, j), expected.get(i, j), "alpha {alpha} ({i},{j})");
                }
            }
        }
    }
}
