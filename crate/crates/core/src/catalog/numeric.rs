//! Structure constants of bases outside the polynomial model.
//!
//! Each bracket `{b_i, b_j}` is built symbolically, both sides are sampled at
//! a fixed set of points in `(x, y, z)`, the coefficients are fitted by least
//! squares, snapped to small rationals and then re-checked at every sample.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::structure::StructureConstants;
use super::CatalogError;
use crate::exact::rat::{snap_to_rational, to_f64};
use crate::jet::{contact_bracket_expr, JetExpr, JetPoint, JetVar};

#[derive(Debug, Clone)]
pub struct NumericOptions {
    pub samples: usize,
    pub seed: u64,
    /// Largest denominator accepted when snapping.
    pub max_den: i64,
    pub snap_tol: f64,
    /// Largest residual `|{b_i,b_j} − Σ c_k b_k| / (1 + |{b_i,b_j}|)` accepted after snapping.
    pub residual_tol: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            samples: 12,
            seed: 1,
            max_den: 100,
            snap_tol: 1e-8,
            residual_tol: 1e-9,
        }
    }
}

/// Sample points with `|x| ≤ 1.5`, `|y| ≤ 1`, `|z| ≤ 0.8`.
pub fn sample_points(opts: &NumericOptions) -> Vec<JetPoint<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    (0..opts.samples)
        .map(|_| {
            JetPoint::new()
                .with(JetVar::X, rng.random_range(-1.5..1.5))
                .with(JetVar::Y(0), rng.random_range(-1.0..1.0))
                .with(JetVar::Y(1), rng.random_range(-0.8..0.8))
        })
        .collect()
}

fn eval(e: &JetExpr, pt: &JetPoint<f64>) -> Result<f64, CatalogError> {
    e.evaluate(pt).map_err(|err| CatalogError::Jet(err.into()))
}

pub fn structure_constants(basis: &[JetExpr], opts: &NumericOptions) -> Result<StructureConstants, CatalogError> {
    let n = basis.len();
    let points = sample_points(opts);
    let mut a = DMatrix::<f64>::zeros(points.len(), n);
    for (s, pt) in points.iter().enumerate() {
        for (k, b) in basis.iter().enumerate() {
            a[(s, k)] = eval(b, pt)?;
        }
    }
    let svd = a.clone().svd(true, true);
    let mut sc = StructureConstants::zero(basis.iter().map(ToString::to_string).collect());
    for i in 0..n {
        for j in i + 1..n {
            let w = contact_bracket_expr(&basis[i], &basis[j])?;
            let rhs = DVector::from_iterator(
                points.len(),
                points.iter().map(|pt| eval(&w, pt)).collect::<Result<Vec<_>, _>>()?,
            );
            let fit = svd.solve(&rhs, 1e-12).map_err(|_| CatalogError::NumericMismatch {
                pair: (i, j),
                residual: f64::INFINITY,
            })?;
            let mut coords = Vec::with_capacity(n);
            for v in fit.iter() {
                let r = snap_to_rational(*v, opts.max_den, opts.snap_tol).ok_or(CatalogError::NumericMismatch {
                    pair: (i, j),
                    residual: f64::INFINITY,
                })?;
                coords.push(r);
            }
            let exact = DVector::from_iterator(n, coords.iter().map(to_f64));
            let fitted = &a * exact;
            let residual = rhs
                .iter()
                .zip(fitted.iter())
                .map(|(b, f)| (b - f).abs() / (1.0 + b.abs()))
                .fold(0.0, f64::max);
            if residual > opts.residual_tol {
                return Err(CatalogError::NumericMismatch { pair: (i, j), residual });
            }
            sc.set(i, j, coords);
        }
    }
    Ok(sc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::p;
    use crate::exact::rat::int;

    fn parse(list: &[&str]) -> Vec<JetExpr> {
        list.iter().map(|s| JetExpr::parse(s).unwrap()).collect()
    }

    #[test]
    fn agrees_with_exact_constants_on_polynomials() {
        let list = ["1", "x", "z", "x^2+z^2", "2*y-x*z"];
        let polys: Vec<_> = list.iter().map(|s| p(s)).collect();
        let exact = StructureConstants::from_polys(&polys).unwrap();
        let numeric = structure_constants(&parse(&list), &NumericOptions::default()).unwrap();
        for i in 0..list.len() {
            for j in 0..list.len() {
                assert_eq!(numeric.get(i, j), exact.get(i, j), "({i},{j})");
            }
        }
    }

    #[test]
    fn hyperbolic_representation() {
        let basis = parse(&["1", "z", "sqrt(1+z^2)*sinh(x)", "sqrt(1+z^2)*cosh(x)"]);
        let sc = structure_constants(&basis, &NumericOptions::default()).unwrap();
        // {z, √(1+z²) sinh x} = −√(1+z²) cosh x
        assert_eq!(sc.get(1, 2), &[int(0), int(0), int(0), int(-1)]);
        assert!(sc.jacobi_check().is_ok());
    }

    #[test]
    fn a_missing_element_is_a_mismatch() {
        let basis = parse(&["1", "z", "sqrt(1+z^2)*sinh(x)"]);
        match structure_constants(&basis, &NumericOptions::default()) {
            Err(CatalogError::NumericMismatch { pair, .. }) => assert_eq!(pair, (1, 2)),
            other => panic!("{other:?}"),
        }
    }
}
