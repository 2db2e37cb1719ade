//! The invariant table: one row per algebra and kind, with every reading of
//! a suspect formula tried side by side and a perturbed control.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{check, e, AuditError, AuditOptions, AuditReport, Domain, Generator, InvariantCase, Kind, Verdict};
use crate::catalog::{i6, load, SpecBasis};
use crate::exact::rat::{fmt_rat, int, rat, Rat};
use crate::jet::{total_derivative_auto, JetExpr, JetVar};

/// Reading of the term `−7/6 D(Q)` inside `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PVariant {
    /// `−7/6 D(Q)` as printed.
    Printed,
    /// `−7/6 (D(Q))²`, which has the same weight as `Q D²(Q)`.
    SquaredDq,
}

fn q_expr() -> JetExpr {
    e("9*(y2^2+1)^2*y5 - 90*(y2^2+1)*y2*y3*y4 + 5*(27*y2^2-5)*y3^3")
}

fn p_expr(q: &JetExpr, variant: PVariant, c9: i64) -> Result<JetExpr, AuditError> {
    let dq = total_derivative_auto(q)?;
    let d2q = total_derivative_auto(&dq)?;
    let w = e("y2^2+1");
    let middle = match variant {
        PVariant::Printed => dq.clone(),
        PVariant::SquaredDq => dq.powi(2),
    };
    let first = w.powi(2) * (q.clone() * d2q - middle.scale(&rat(7, 6)));
    let second = JetExpr::int(2) * w.clone() * e("y2*y3") * q.clone() * dq;
    let bracket = JetExpr::int(c9) * w * e("y2*y4") - e("(9*y2^2-19)*y3^2").scale(&rat(1, 2));
    Ok(first + second - bracket * q.powi(2))
}

/// `(P, Q)` for the order-7 invariant `P / Q^(8/3)`.
///
/// ```
/// use contact_lie::audit::{build_i4_pq, PVariant};
/// use contact_lie::jet::{JetPoint, JetVar};
///
/// let (_, q) = build_i4_pq(PVariant::SquaredDq).unwrap();
/// let at = JetPoint::new()
///     .with(JetVar::Y(2), 0.0)
///     .with(JetVar::Y(3), 1.0)
///     .with(JetVar::Y(4), 0.0)
///     .with(JetVar::Y(5), 0.0);
/// assert_eq!(q.evaluate(&at).unwrap(), -25.0);
/// ```
pub fn build_i4_pq(variant: PVariant) -> Result<(JetExpr, JetExpr), AuditError> {
    let q = q_expr();
    Ok((p_expr(&q, variant, 9)?, q))
}

/// One reading of a row's formula.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub name: String,
    /// Whether this is the formula exactly as printed.
    pub verbatim: bool,
    pub case: InvariantCase,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub case: String,
    pub kind: Kind,
    pub beta: Option<Rat>,
    /// What the candidates disagree about, if there is more than one.
    pub item: Option<String>,
    pub candidates: Vec<Candidate>,
    pub control: InvariantCase,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariantReport {
    pub verbatim: bool,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub report: AuditReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ControlReport {
    pub invariant: String,
    pub max_residual: f64,
    /// Control residual over the selected variant's residual.
    pub margin: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypoResolution {
    pub item: String,
    pub verbatim: String,
    pub adopted: String,
    pub evidence: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub case: String,
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub selected_variant: Option<String>,
    pub variants: BTreeMap<String, VariantReport>,
    pub control: ControlReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<TypoResolution>,
}

/// Smallest factor by which a control must exceed the passing residual.
pub const CONTROL_MARGIN: f64 = 1e6;

fn generators_of(id: &str) -> Vec<Generator> {
    let spec = load(id).expect("registry id");
    generators_from(&spec.basis)
}

fn generators_from(basis: &SpecBasis) -> Vec<Generator> {
    match basis {
        SpecBasis::Polynomial(b) => b.iter().map(|f| Generator::Contact(JetExpr::from_wpoly(f))).collect(),
        SpecBasis::Transcendental(b) => b.iter().cloned().map(Generator::Contact).collect(),
        SpecBasis::Abstract(_) => Vec::new(),
    }
}

fn i6_generators(alpha: &Rat) -> Vec<Generator> {
    generators_from(&i6(alpha).basis)
}

fn single(case: InvariantCase) -> Vec<Candidate> {
    vec![Candidate {
        name: "printed".into(),
        verbatim: true,
        case,
    }]
}

fn i4_rows() -> Result<Vec<Row>, AuditError> {
    let gens = generators_of("I.4");
    let q = q_expr();
    let q_domain = Domain {
        magnitude: Vec::new(),
        away_from_zero: vec![(q.clone(), 0.1)],
    };
    let invariant = |p: JetExpr| p * q.pow(&rat(-8, 3));
    let diff = |name: &str, variant, verbatim| -> Result<Candidate, AuditError> {
        let case = InvariantCase::new(
            format!("I.4 {name}"),
            Kind::Differential,
            invariant(p_expr(&q, variant, 9)?),
            gens.clone(),
        )
        .with_domain(q_domain.clone());
        Ok(Candidate {
            name: name.into(),
            verbatim,
            case,
        })
    };
    let differential = Row {
        case: "I.4".into(),
        kind: Kind::Differential,
        beta: None,
        item: Some("P: the term -7/6 D(Q)".into()),
        candidates: vec![
            diff("-7/6*D(Q)", PVariant::Printed, true)?,
            diff("-7/6*D(Q)^2", PVariant::SquaredDq, false)?,
        ],
        control: InvariantCase::new(
            "I.4 control",
            Kind::Differential,
            invariant(p_expr(&q, PVariant::SquaredDq, 8)?),
            gens.clone(),
        )
        .with_domain(q_domain.clone()),
    };
    let integral = Row {
        case: "I.4".into(),
        kind: Kind::Integral,
        beta: None,
        item: None,
        candidates: single(
            InvariantCase::new("I.4", Kind::Integral, q.pow(&rat(1, 3)) / e("y2^2+1"), gens.clone())
                .with_domain(q_domain.clone()),
        ),
        control: InvariantCase::new("I.4 control", Kind::Integral, q.pow(&rat(1, 3)) / e("y2^2+2"), gens)
            .with_domain(q_domain),
    };
    Ok(vec![differential, integral])
}

fn i5_rows() -> Vec<Row> {
    let gens = generators_of("I.5");
    let case = |id: &str, kind, text: &str| InvariantCase::new(id, kind, e(text), gens.clone());
    vec![
        Row {
            case: "I.5".into(),
            kind: Kind::Differential,
            beta: None,
            item: Some("denominator of the I.5 differential invariant".into()),
            candidates: vec![
                Candidate {
                    name: "denominator y2^2".into(),
                    verbatim: true,
                    case: case("I.5 y2^2", Kind::Differential, "((1+y2^2)*y4-3*y2*y3^2)/y2^2"),
                },
                Candidate {
                    name: "denominator y3^2".into(),
                    verbatim: false,
                    case: case("I.5 y3^2", Kind::Differential, "((1+y2^2)*y4-3*y2*y3^2)/y3^2"),
                },
            ],
            control: case("I.5 control", Kind::Differential, "((1+y2^2)*y4-2*y2*y3^2)/y3^2"),
        },
        Row {
            case: "I.5".into(),
            kind: Kind::Integral,
            beta: None,
            item: None,
            candidates: single(case("I.5", Kind::Integral, "y3/(1+y2^2)")),
            control: case("I.5 control", Kind::Integral, "y3"),
        },
    ]
}

/// `β` values audited for I.6.
pub fn i6_betas() -> Vec<Rat> {
    vec![int(0), rat(1, 2), int(1)]
}

fn i6_rows(beta: &Rat) -> Vec<Row> {
    let b = fmt_rat(beta);
    let id = format!("I.6 beta={b}");
    let exp_minus = e(&format!("exp(-({b})*atan(y2))"));
    let exp_plus = e(&format!("exp(({b})*atan(y2))"));
    let differential = exp_minus.clone() * e("y3") * e("(1+y2^2)^(-3/2)");
    let integral = |radicand: &str| exp_plus.clone() * e(&format!("({radicand})^(1/2)"));
    // the plane image suggests alpha = 2 beta; the other sign is tried as well
    let pairings: Vec<(String, bool, Rat)> = if beta == &Rat::from_integer(0.into()) {
        vec![("alpha = 0".into(), true, int(0))]
    } else {
        vec![
            ("alpha = 2*beta".into(), true, beta * int(2)),
            ("alpha = -2*beta".into(), false, beta * int(-2)),
        ]
    };
    let reference = i6_generators(&(beta * int(-2)));
    let mut diff_candidates = Vec::new();
    let mut int_candidates = Vec::new();
    for (pairing, verbatim_pairing, alpha) in &pairings {
        let gens = i6_generators(alpha);
        diff_candidates.push(Candidate {
            name: pairing.clone(),
            verbatim: *verbatim_pairing,
            case: InvariantCase::new(
                format!("{id} {pairing}"),
                Kind::Differential,
                differential.clone(),
                gens.clone(),
            ),
        });
        for (radicand, verbatim_radicand) in [("1+y2", true), ("1+y2^2", false)] {
            let name = format!("{pairing}, radicand {radicand}");
            int_candidates.push(Candidate {
                verbatim: *verbatim_pairing && verbatim_radicand,
                case: InvariantCase::new(format!("{id} {name}"), Kind::Integral, integral(radicand), gens.clone()),
                name,
            });
        }
    }
    let pairing_item = (pairings.len() > 1).then(|| "pairing of beta with the algebra parameter alpha".to_string());
    vec![
        Row {
            case: "I.6".into(),
            kind: Kind::Differential,
            beta: Some(beta.clone()),
            item: pairing_item.clone(),
            candidates: diff_candidates,
            control: InvariantCase::new(
                format!("{id} control"),
                Kind::Differential,
                exp_minus * e("y3") * e("(1+2*y2^2)^(-3/2)"),
                reference.clone(),
            ),
        },
        Row {
            case: "I.6".into(),
            kind: Kind::Integral,
            beta: Some(beta.clone()),
            item: Some(match pairing_item {
                Some(p) => format!("radicand of the I.6 integral invariant; {p}"),
                None => "radicand of the I.6 integral invariant".into(),
            }),
            candidates: int_candidates,
            control: InvariantCase::new(format!("{id} control"), Kind::Integral, integral("1+2*y2^2"), reference),
        },
    ]
}

fn ii_rows(id: &str, sign: i64) -> Vec<Row> {
    let gens = generators_of(&format!("{id}c"));
    let (s, t) = if sign > 0 { ("+", "-") } else { ("-", "+") };
    let w = format!("(1{s}y1^2)");
    let differential = |c: i64| {
        e(&format!(
            "(1{s}y1^2)^(1/2)*({w}*y3 {t} {c}*y1*y2^2 {t} y1*{w}^2)/({w}^2+y2^2)^(3/2)"
        ))
    };
    let integral = |c: i64| e(&format!("(({w}^2+{c}*y2^2)/{w})^(1/2)"));
    let domain = if sign < 0 {
        Domain {
            magnitude: vec![(JetVar::Y(1), 0.05, 0.9)],
            away_from_zero: Vec::new(),
        }
    } else {
        Domain::default()
    };
    let case = |name: &str, kind, expr| InvariantCase::new(name, kind, expr, gens.clone()).with_domain(domain.clone());
    vec![
        Row {
            case: id.into(),
            kind: Kind::Differential,
            beta: None,
            item: None,
            candidates: single(case(id, Kind::Differential, differential(3))),
            control: case(&format!("{id} control"), Kind::Differential, differential(2)),
        },
        Row {
            case: id.into(),
            kind: Kind::Integral,
            beta: None,
            item: None,
            candidates: single(case(id, Kind::Integral, integral(1))),
            control: case(&format!("{id} control"), Kind::Integral, integral(2)),
        },
    ]
}

/// Row groups accepted by [`rows`].
pub fn row_ids() -> [&'static str; 5] {
    ["I.4", "I.5", "I.6", "II.1", "II.2"]
}

/// Rows of one group; I.6 expands to every β of [`i6_betas`].
pub fn rows(id: &str) -> Result<Vec<Row>, AuditError> {
    Ok(match id {
        "I.4" => i4_rows()?,
        "I.5" => i5_rows(),
        "I.6" => i6_betas().iter().flat_map(i6_rows).collect(),
        "II.1" => ii_rows("II.1", 1),
        "II.2" => ii_rows("II.2", -1),
        other => return Err(AuditError::UnknownCase(other.into())),
    })
}

pub fn audit_row(row: &Row, opts: &AuditOptions) -> Result<RowReport, AuditError> {
    let mut variants = BTreeMap::new();
    let mut selected: Option<(String, f64)> = None;
    for c in &row.candidates {
        let report = check(&c.case, opts)?;
        let verdict = report.verdict;
        if verdict.passed() && selected.as_ref().is_none_or(|(_, r)| report.max_residual < *r) {
            selected = Some((c.name.clone(), report.max_residual));
        }
        variants.insert(
            c.name.clone(),
            VariantReport {
                verbatim: c.verbatim,
                max_residual: report.max_residual,
                verdict,
                report,
            },
        );
    }
    let control = check(&row.control, opts)?;
    let best = selected.as_ref().map_or_else(
        || variants.values().map(|v| v.max_residual).fold(f64::INFINITY, f64::min),
        |(_, r)| *r,
    );
    let margin = control.max_residual / best.max(f64::MIN_POSITIVE);
    let control_ok = !control.verdict.passed() && margin >= CONTROL_MARGIN;
    let resolution = row.item.as_ref().map(|item| {
        let verbatim: Vec<&str> = row
            .candidates
            .iter()
            .filter(|c| c.verbatim)
            .map(|c| c.name.as_str())
            .collect();
        let evidence = variants
            .iter()
            .map(|(name, v)| {
                format!(
                    "{name}: {} ({:.1e})",
                    if v.verdict.passed() { "pass" } else { "fail" },
                    v.max_residual
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        TypoResolution {
            item: match &row.beta {
                Some(b) => format!("{item} (beta = {})", fmt_rat(b)),
                None => item.clone(),
            },
            verbatim: verbatim.join(", "),
            adopted: selected.as_ref().map_or_else(|| "none".into(), |(n, _)| n.clone()),
            evidence,
        }
    });
    Ok(RowReport {
        case: row.case.clone(),
        kind: row.kind,
        beta: row.beta.as_ref().map(fmt_rat),
        max_residual: best,
        verdict: Verdict::from_bool(selected.is_some() && control_ok),
        selected_variant: selected.map(|(n, _)| n),
        variants,
        control: ControlReport {
            invariant: control.invariant,
            max_residual: control.max_residual,
            margin,
            verdict: Verdict::from_bool(control_ok),
        },
        resolution,
    })
}

/// Every row of the given groups, in order.
pub fn audit_cases(ids: &[&str], opts: &AuditOptions) -> Result<Vec<RowReport>, AuditError> {
    let mut out = Vec::new();
    for id in ids {
        for row in rows(id)? {
            out.push(audit_row(&row, opts)?);
        }
    }
    Ok(out)
}

/// The whole table.
pub fn audit_all(opts: &AuditOptions) -> Result<Vec<RowReport>, AuditError> {
    audit_cases(&row_ids(), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetPoint;

    #[test]
    fn q_golden_values() {
        let (_, q) = build_i4_pq(PVariant::Printed).unwrap();
        let zero = (2..=5).fold(JetPoint::new(), |p, k| p.with(JetVar::Y(k), 0.0));
        assert_eq!(q.evaluate(&zero).unwrap(), 0.0);
        assert_eq!(q.max_order(), Some(5));
    }

    #[test]
    fn p_has_order_seven() {
        for v in [PVariant::Printed, PVariant::SquaredDq] {
            let (p, _) = build_i4_pq(v).unwrap();
            assert_eq!(p.max_order(), Some(7));
        }
    }

    #[test]
    fn i5_rows_pick_the_weighted_denominator() {
        let opts = AuditOptions::default();
        for row in rows("I.5").unwrap() {
            let report = audit_row(&row, &opts).unwrap();
            assert!(report.verdict.passed(), "{report:#?}");
            if row.kind == Kind::Differential {
                assert_eq!(report.selected_variant.as_deref(), Some("denominator y3^2"));
                assert!(!report.variants["denominator y2^2"].verdict.passed());
            }
        }
    }

    #[test]
    fn ii2_hyperbolic_and_trigonometric() {
        let opts = AuditOptions::default();
        for id in ["II.1", "II.2"] {
            for row in rows(id).unwrap() {
                let report = audit_row(&row, &opts).unwrap();
                assert!(report.verdict.passed(), "{report:#?}");
            }
        }
    }

    #[test]
    fn i6_radicand_and_pairing() {
        let opts = AuditOptions::default();
        for row in i6_rows(&rat(1, 2)) {
            let report = audit_row(&row, &opts).unwrap();
            assert!(report.verdict.passed(), "{report:#?}");
            let selected = report.selected_variant.unwrap();
            assert!(selected.starts_with("alpha = -2*beta"), "{selected}");
            if row.kind == Kind::Integral {
                assert!(selected.ends_with("1+y2^2"));
            }
        }
    }

    #[test]
    fn i4_selects_the_squared_reading() {
        let opts = AuditOptions::default();
        let rows = rows("I.4").unwrap();
        let diff = audit_row(&rows[0], &opts).unwrap();
        assert!(diff.verdict.passed(), "{diff:#?}");
        assert_eq!(diff.selected_variant.as_deref(), Some("-7/6*D(Q)^2"));
        assert!(!diff.variants["-7/6*D(Q)"].verdict.passed());
        let resolution = diff.resolution.unwrap();
        assert_eq!(resolution.verbatim, "-7/6*D(Q)");
        assert_eq!(resolution.adopted, "-7/6*D(Q)^2");
        let int = audit_row(&rows[1], &opts).unwrap();
        assert!(int.verdict.passed(), "{int:#?}");
    }

    #[test]
    fn unknown_row() {
        assert!(matches!(rows("I.1"), Err(AuditError::UnknownCase(_))));
    }
}
