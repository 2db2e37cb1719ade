//! Numerical audit of differential and integral invariants.
//!
//! A differential invariant `I` of order `n` must satisfy `X^(n)(I) = 0` for
//! every generator `X`; the density `J` of an integral invariant `J dx` must
//! satisfy `X^(n)(J) + J·D(ξ) = 0`. Both are checked at random jet points,
//! with the residual measured relative to the sum of absolute values of the
//! individual summands so that verdicts do not depend on the scale of `I`.

pub mod rows;
pub mod shift;

use std::collections::BTreeMap;

use astro_float::BigFloat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::jet::{
    evaluate_with, prolong_contact, prolong_plane, total_derivative_auto, Arith, HighPrecision, JetError, JetExpr,
    JetField, JetPoint, JetVar, F64,
};

pub use rows::{audit_all, audit_row, build_i4_pq, row_ids, PVariant, Row, RowReport, TypoResolution};

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("no admissible sample for {case} after {tries} tries")]
    Sampling { case: String, tries: usize },
    #[error("unknown audit case `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Differential,
    Integral,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Differential => "differential",
            Kind::Integral => "integral",
        }
    }
}

/// Generators of the acting algebra.
#[derive(Debug, Clone)]
pub enum Generator {
    /// Contact field with this characteristic function of `x, y0, y1`.
    Contact(JetExpr),
    /// Plane field `A ∂x + B ∂y0`.
    Plane(JetExpr, JetExpr),
}

impl Generator {
    pub fn label(&self) -> String {
        match self {
            Generator::Contact(f) => f.to_string(),
            Generator::Plane(a, b) => format!("({a})*d/dx + ({b})*d/dy"),
        }
    }

    pub fn prolong(&self, n: u8) -> Result<JetField, JetError> {
        match self {
            Generator::Contact(f) => prolong_contact(f, n.max(1)),
            Generator::Plane(a, b) => prolong_plane(a, b, n),
        }
    }
}

/// Where samples may be drawn.
#[derive(Debug, Clone, Default)]
pub struct Domain {
    /// Per-variable `(low, high)` bounds on `|v|`, replacing the default `[0.2, 2]`.
    pub magnitude: Vec<(JetVar, f64, f64)>,
    /// Expressions that must satisfy `|e| ≥ bound` at every sample.
    pub away_from_zero: Vec<(JetExpr, f64)>,
}

pub const DEFAULT_MAGNITUDE: (f64, f64) = (0.2, 2.0);

#[derive(Debug, Clone)]
pub struct InvariantCase {
    pub id: String,
    pub kind: Kind,
    pub expr: JetExpr,
    pub order: u8,
    pub generators: Vec<Generator>,
    pub domain: Domain,
}

impl InvariantCase {
    pub fn new(id: impl Into<String>, kind: Kind, expr: JetExpr, generators: Vec<Generator>) -> Self {
        let order = expr.max_order().unwrap_or(0).max(1);
        InvariantCase {
            id: id.into(),
            kind,
            expr,
            order,
            generators,
            domain: Domain::default(),
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// Summand pairs `(a, b)` for each generator; `Σ a·b` must vanish.
    fn summands(&self) -> Result<Vec<Vec<(JetExpr, JetExpr)>>, AuditError> {
        self.generators
            .iter()
            .map(|g| {
                let field = g.prolong(self.order)?;
                let mut terms = field.terms(&self.expr)?;
                if self.kind == Kind::Integral {
                    terms.push((self.expr.clone(), total_derivative_auto(field.xi())?));
                }
                Ok(terms)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct AuditOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    /// Residuals in this band are recomputed in high precision.
    pub recheck_band: (f64, f64),
    pub precision_bits: usize,
    pub max_tries: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            samples: 20,
            tol: 1e-7,
            seed: 1,
            recheck_band: (1e-9, 1e-5),
            precision_bits: HighPrecision::DEFAULT_BITS,
            max_tries: 1000,
        }
    }
}

impl AuditOptions {
    /// The band always covers `[tol/100, tol·100]`.
    fn band(&self) -> (f64, f64) {
        (
            self.recheck_band.0.min(self.tol / 100.0),
            self.recheck_band.1.max(self.tol * 100.0),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorReport {
    pub generator: String,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub case: String,
    pub kind: Kind,
    pub invariant: String,
    pub order: u8,
    pub samples: usize,
    pub tol: f64,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub high_precision_rechecks: usize,
    pub generators: Vec<GeneratorReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// FNV-1a, so that a case gets the same samples alone or inside a batch.
fn case_seed(seed: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn random_point(rng: &mut ChaCha8Rng, order: u8, domain: &Domain) -> JetPoint<f64> {
    let mut pt = JetPoint::new();
    let vars = std::iter::once(JetVar::X).chain((0..=order).map(JetVar::Y));
    for v in vars {
        let (lo, hi) = domain
            .magnitude
            .iter()
            .find(|(w, _, _)| *w == v)
            .map_or(DEFAULT_MAGNITUDE, |&(_, lo, hi)| (lo, hi));
        let m = rng.random_range(lo..=hi);
        pt.set(v, if rng.random_bool(0.5) { m } else { -m });
    }
    pt
}

fn residual_f64(terms: &[(JetExpr, JetExpr)], pt: &JetPoint<f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (a, b) in terms {
        let s = a.evaluate(pt).ok()? * b.evaluate(pt).ok()?;
        if !s.is_finite() {
            return None;
        }
        sum += s;
        scale += s.abs();
    }
    Some(if scale == 0.0 { 0.0 } else { sum.abs() / scale })
}

fn residual_high(terms: &[(JetExpr, JetExpr)], pt: &JetPoint<f64>, bits: usize) -> Option<f64> {
    let mut hp = HighPrecision::new(bits);
    let point: JetPoint<BigFloat> = pt.map(|v| hp.from_f64(*v));
    let mut sum = hp.from_f64(0.0);
    let mut scale = hp.from_f64(0.0);
    for (a, b) in terms {
        let va = evaluate_with(a, &mut hp, &point).ok()?;
        let vb = evaluate_with(b, &mut hp, &point).ok()?;
        let s = hp.mul(&va, &vb);
        sum = hp.add(&sum, &s);
        let abs = hp.abs(&s);
        scale = hp.add(&scale, &abs);
    }
    if scale.is_zero() {
        return Some(0.0);
    }
    let abs = hp.abs(&sum);
    let ratio = hp.div(&abs, &scale);
    Some(hp.to_f64(&ratio))
}

fn admissible(case: &InvariantCase, summands: &[Vec<(JetExpr, JetExpr)>], pt: &JetPoint<f64>) -> bool {
    let finite = |e: &JetExpr| evaluate_with(e, &mut F64, pt).is_ok_and(f64::is_finite);
    if !finite(&case.expr) {
        return false;
    }
    for (e, bound) in &case.domain.away_from_zero {
        match e.evaluate(pt) {
            Ok(v) if v.abs() >= *bound => {}
            _ => return false,
        }
    }
    summands.iter().flatten().all(|(a, b)| finite(a) && finite(b))
}

/// Admissible sample points for `case`.
pub fn sample(case: &InvariantCase, opts: &AuditOptions) -> Result<Vec<JetPoint<f64>>, AuditError> {
    let summands = case.summands()?;
    sample_with(case, &summands, opts)
}

fn sample_with(
    case: &InvariantCase,
    summands: &[Vec<(JetExpr, JetExpr)>],
    opts: &AuditOptions,
) -> Result<Vec<JetPoint<f64>>, AuditError> {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(opts.seed, &case.id));
    let mut out = Vec::with_capacity(opts.samples);
    for _ in 0..opts.samples {
        let mut found = None;
        for _ in 0..opts.max_tries {
            let pt = random_point(&mut rng, case.order, &case.domain);
            if admissible(case, summands, &pt) {
                found = Some(pt);
                break;
            }
        }
        out.push(found.ok_or_else(|| AuditError::Sampling {
            case: case.id.clone(),
            tries: opts.max_tries,
        })?);
    }
    Ok(out)
}

/// Checks a differential or integral invariant, depending on `case.kind`.
pub fn check(case: &InvariantCase, opts: &AuditOptions) -> Result<AuditReport, AuditError> {
    let summands = case.summands()?;
    let points = sample_with(case, &summands, opts)?;
    let (lo, hi) = opts.band();
    let mut rechecks = 0;
    let mut generators = Vec::new();
    for (g, terms) in case.generators.iter().zip(&summands) {
        let mut residuals = Vec::with_capacity(points.len());
        for pt in &points {
            let mut r = residual_f64(terms, pt).unwrap_or(f64::INFINITY);
            if (lo..=hi).contains(&r) {
                rechecks += 1;
                r = residual_high(terms, pt, opts.precision_bits).unwrap_or(r);
            }
            residuals.push(r);
        }
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        generators.push(GeneratorReport {
            generator: g.label(),
            residuals,
            max_residual,
        });
    }
    let max_residual = generators.iter().map(|g| g.max_residual).fold(0.0, f64::max);
    Ok(AuditReport {
        case: case.id.clone(),
        kind: case.kind,
        invariant: case.expr.to_string(),
        order: case.order,
        samples: points.len(),
        tol: opts.tol,
        max_residual,
        verdict: Verdict::from_bool(max_residual <= opts.tol),
        high_precision_rechecks: rechecks,
        generators,
    })
}

pub fn check_differential(case: &InvariantCase, opts: &AuditOptions) -> Result<AuditReport, AuditError> {
    let mut c = case.clone();
    c.kind = Kind::Differential;
    check(&c, opts)
}

pub fn check_integral(case: &InvariantCase, opts: &AuditOptions) -> Result<AuditReport, AuditError> {
    let mut c = case.clone();
    c.kind = Kind::Integral;
    check(&c, opts)
}

/// Parses expressions known to be well formed.
pub(crate) fn e(text: &str) -> JetExpr {
    JetExpr::parse(text).unwrap_or_else(|err| panic!("bad expression {text:?}: {err}"))
}

/// Summary counts over a batch of reports.
pub fn tally(reports: &[AuditReport]) -> BTreeMap<&'static str, usize> {
    let mut t = BTreeMap::new();
    for r in reports {
        *t.entry(if r.verdict.passed() { "pass" } else { "fail" }).or_insert(0) += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contact(list: &[&str]) -> Vec<Generator> {
        list.iter().map(|s| Generator::Contact(e(s))).collect()
    }

    fn i5() -> Vec<Generator> {
        contact(&["1", "x", "z", "x^2+z^2", "2*y-x*z"])
    }

    #[test]
    fn curvature_of_the_similitude_algebra() {
        let case = InvariantCase::new("I.5", Kind::Integral, e("y3/(1+y2^2)"), i5());
        let report = check(&case, &AuditOptions::default()).unwrap();
        assert!(report.verdict.passed(), "{report:?}");
        assert_eq!(report.generators.len(), 5);
        assert_eq!(report.samples, 20);
    }

    #[test]
    fn missing_denominator_fails() {
        let case = InvariantCase::new("I.5 control", Kind::Integral, e("y3"), i5());
        let report = check(&case, &AuditOptions::default()).unwrap();
        assert!(!report.verdict.passed());
        assert!(report.max_residual > 1e-3);
    }

    #[test]
    fn residual_is_scale_invariant() {
        let opts = AuditOptions::default();
        let a = check(
            &InvariantCase::new("s", Kind::Differential, e("y3^2/(1+y2^2)^3"), i5()),
            &opts,
        )
        .unwrap();
        let b = check(
            &InvariantCase::new("s", Kind::Differential, e("1000*y3^2/(1+y2^2)^3"), i5()),
            &opts,
        )
        .unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert!((a.max_residual - b.max_residual).abs() < 1e-12);
    }

    #[test]
    fn reports_are_deterministic() {
        let case = InvariantCase::new("I.5", Kind::Integral, e("y3/(1+y2^2)"), i5());
        let opts = AuditOptions {
            samples: 5,
            ..Default::default()
        };
        let a = serde_json::to_string(&check(&case, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&check(&case, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn impossible_domain_is_a_sampling_error() {
        let case = InvariantCase::new("never", Kind::Differential, e("y2"), i5()).with_domain(Domain {
            magnitude: Vec::new(),
            away_from_zero: vec![(e("y2"), 10.0)],
        });
        let opts = AuditOptions {
            max_tries: 20,
            ..Default::default()
        };
        assert!(matches!(check(&case, &opts), Err(AuditError::Sampling { .. })));
    }

    #[test]
    fn high_precision_recheck_runs_in_the_band() {
        let case = InvariantCase::new("I.5", Kind::Integral, e("y3/(1+y2^2)"), i5());
        let opts = AuditOptions {
            samples: 3,
            recheck_band: (0.0, 1.0),
            ..Default::default()
        };
        let report = check(&case, &opts).unwrap();
        assert_eq!(report.high_precision_rechecks, 15);
        assert!(report.max_residual < 1e-30, "{}", report.max_residual);
    }
}
