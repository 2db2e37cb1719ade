//! End-to-end checks: the classification, the catalog, the filtered algebras
//! and the typo resolutions, collected into one report.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::audit::{audit_row, AuditError, AuditOptions, TypoResolution};
use crate::catalog::data::{verify_entry, CatalogEntry};
use crate::catalog::matrix::filtered_model;
use crate::catalog::plane::{check_projection, plane_images};
use crate::catalog::{
    deformation_6, embedding_check, i4_verbatim, i6, load, structure_constants, CatalogError, FILTERED_IDS, GRADED_IDS,
    REPRESENTATION_IDS,
};
use crate::contact::{contact_bracket, hamiltonian_field};
use crate::exact::poly::{p, random_homogeneous, random_poly};
use crate::exact::rat::{fmt_rat, int, rat, Rat};
use crate::exact::{Basis, Matrix, WPoly};
use crate::graded::{
    action_matrices, alpha_samples, decompose_space, extension_step, grade_of, grading_element, h0_family,
    run_classification, summarize, universal_component, BranchOutcome, Family, GradedSubalgebra,
};

/// Grades at which every catalog algebra has already stabilized.
pub const MIN_CUTOFF: i32 = 2;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cutoff {0} is below {MIN_CUTOFF}; I.1 and I.4 reach grade 2")]
    Cutoff(i32),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Audit(#[from] AuditError),
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Value) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub cutoff: i32,
    pub seed: u64,
    /// Random pairs for the bracket and projection checks.
    pub pairs: usize,
    pub audit: AuditOptions,
    /// A catalog document to re-verify instead of the built-in registry.
    pub catalog: Option<Vec<CatalogEntry>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cutoff: crate::graded::DEFAULT_CUTOFF,
            seed: 1,
            pairs: 200,
            audit: AuditOptions::default(),
            catalog: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub first_failure: Option<String>,
    pub cutoff: i32,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub typo_resolutions: Vec<TypoResolution>,
}

/// Runs every check in a fixed order.
pub fn run(opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    if opts.cutoff < MIN_CUTOFF {
        return Err(VerifyError::Cutoff(opts.cutoff));
    }
    let (typo_check, typo_resolutions) = typo_resolutions(&opts.audit)?;
    let mut checks = vec![
        classification(opts.cutoff)?,
        extension_steps(),
        growth_detection(opts.cutoff),
        bracket_properties(opts.pairs, opts.seed),
        printed_action_matrices(),
        grading_elements()?,
        deformation(),
    ];
    checks.push(match &opts.catalog {
        Some(entries) => catalog_file(entries),
        None => catalog_suite()?,
    });
    checks.extend([
        representations()?,
        matrix_models(),
        projection(opts.pairs.max(100), opts.seed)?,
        typo_check,
    ]);
    let first_failure = checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    Ok(VerifyReport {
        passed: first_failure.is_none(),
        first_failure,
        cutoff: opts.cutoff,
        seed: opts.seed,
        checks,
        typo_resolutions,
    })
}

fn catalog_algebra(id: &str, alpha: &Rat) -> Result<GradedSubalgebra, CatalogError> {
    let spec = if id == "I.6" { i6(alpha) } else { load(id)? };
    GradedSubalgebra::from_generators(spec.polynomials()?).map_err(|e| CatalogError::Parse(e.to_string()))
}

/// The algorithm run from the four families of `h_0` finds exactly the six
/// catalog algebras, for every sampled `α`.
pub fn classification(cutoff: i32) -> Result<Check, VerifyError> {
    let mut passed = true;
    let mut per_alpha = Vec::new();
    for alpha in alpha_samples() {
        let c = run_classification(&alpha, cutoff);
        let found = c.algebras();
        let mut dims = BTreeMap::new();
        for id in GRADED_IDS {
            let want = catalog_algebra(id, &alpha)?;
            let hits = found.iter().filter(|a| a.same_space(&want)).count();
            passed &= hits == 1;
            dims.insert(id, json!({ "dimension": want.dim(), "matches": hits }));
        }
        let families_ok = c.families.iter().all(|f| f.irreducible && f.closed);
        let closed = found.iter().all(|a| a.check_closure().is_ok() && a.is_transitive());
        passed &= families_ok && closed && found.len() == GRADED_IDS.len();
        per_alpha.push(json!({
            "alpha": fmt_rat(&alpha),
            "algebras": found.len(),
            "families_irreducible_and_closed": families_ok,
            "catalog": dims,
            "branches": summarize(&c),
        }));
    }
    let dims: Vec<usize> = GRADED_IDS
        .iter()
        .map(|id| catalog_algebra(id, &int(0)).map(|a| a.dim()))
        .collect::<Result<_, _>>()?;
    passed &= dims == [10, 7, 6, 8, 5, 4];
    Ok(Check::new(
        "classification",
        passed,
        json!({ "dims": dims, "runs": per_alpha }),
    ))
}

fn with_h0(h0: &[WPoly]) -> GradedSubalgebra {
    let mut gens = vec![p("1"), p("x"), p("z")];
    gens.extend_from_slice(h0);
    GradedSubalgebra::from_generators(&gens).expect("homogeneous generators")
}

fn span(list: &[&str]) -> Basis {
    Basis::span(&list.iter().map(|s| p(s)).collect::<Vec<_>>())
}

/// `g_1(𝔫, h_0)` for the four families against their known values.
pub fn extension_steps() -> Check {
    let mut detail = serde_json::Map::new();
    let mut passed = true;
    for alpha in alpha_samples() {
        let g1 = extension_step(&with_h0(&h0_family(&Family::Rotation(alpha.clone()))), 0);
        passed &= g1.is_empty();
        detail.insert(format!("i (alpha = {})", fmt_rat(&alpha)), json!(g1.dim()));
    }
    let ii = extension_step(&with_h0(&h0_family(&Family::Complex)), 0);
    let ii_want = span(&["x*(x^2+z^2)-2*z*(2*y-x*z)", "z*(x^2+z^2)+2*x*(2*y-x*z)"]);
    let iii = extension_step(&with_h0(&h0_family(&Family::Sl2)), 0);
    let iii_want = span(&["x^3", "x^2*z", "x*z^2", "z^3"]);
    let gl2 = h0_family(&Family::Gl2);
    let iv = extension_step(&with_h0(&gl2), 0);
    let summands = decompose_space(&gl2, &iv).unwrap_or_default();
    let w2 = span(&["x*(2*y-x*z)", "z*(2*y-x*z)"]);
    let split = summands.len() == 2 && summands.contains(&iii_want) && summands.contains(&w2);
    passed &= ii == ii_want && iii == iii_want && iv == universal_component(1).expect("grade 1") && split;
    detail.insert("ii".into(), json!({ "dim": ii.dim(), "matches": ii == ii_want }));
    detail.insert("iii".into(), json!({ "dim": iii.dim(), "matches": iii == iii_want }));
    detail.insert(
        "iv".into(),
        json!({
            "dim": iv.dim(),
            "summands": summands.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "splits_as_W1_plus_W2": split,
        }),
    );
    Check::new("extension_steps", passed, Value::Object(detail))
}

/// Seeding `h_1 = W_1` in cases (iii) and (iv) never stabilizes: the
/// components keep growing up to the cutoff.
pub fn growth_detection(cutoff: i32) -> Check {
    let c = run_classification(&int(0), cutoff);
    let mut passed = true;
    let mut detail = Vec::new();
    for (family, path) in [("iii", "h1=W1"), ("iv", "h1=W1"), ("iv", "h1=W1+W2")] {
        let branch = c
            .branches
            .iter()
            .find(|b| b.family == family && b.path().starts_with(path));
        let ok = match branch.map(|b| &b.outcome) {
            Some(BranchOutcome::GrowthExceeded { cutoff: top, dims }) => {
                let below = dims.get(&(top - 1)).copied().unwrap_or(0);
                let at = dims.get(top).copied().unwrap_or(0);
                *top <= 8 && below < at
            }
            _ => false,
        };
        passed &= ok;
        detail.push(json!({
            "family": family,
            "path": branch.map(|b| b.path()),
            "outcome": branch.map(|b| serde_json::to_value(&b.outcome).unwrap_or(Value::Null)),
            "growth_exceeded": ok,
        }));
    }
    Check::new("growth_detection", passed, json!(detail))
}

/// Antisymmetry, Jacobi, grading, `X_{f,g} = [X_f, X_g]` and `ω(X_f) = f`.
pub fn bracket_properties(pairs: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut fail = |kind: &'static str, what: String| failures.entry(kind).or_default().push(what);
    for _ in 0..pairs {
        let f = random_poly(&mut rng, 5, 4);
        let g = random_poly(&mut rng, 5, 4);
        let h = random_poly(&mut rng, 5, 3);
        let fg = contact_bracket(&f, &g);
        if fg != -contact_bracket(&g, &f) {
            fail("antisymmetry", format!("{f} ; {g}"));
        }
        let jac = contact_bracket(&f, &contact_bracket(&g, &h))
            + contact_bracket(&g, &contact_bracket(&h, &f))
            + contact_bracket(&h, &fg);
        if !jac.is_zero() {
            fail("jacobi", format!("{f} ; {g} ; {h}"));
        }
        let (xf, xg) = (hamiltonian_field(&f), hamiltonian_field(&g));
        if hamiltonian_field(&fg).field() != &xf.field().commutator(xg.field()) {
            fail("hamiltonian_homomorphism", format!("{f} ; {g}"));
        }
        if xf.field().omega() != f {
            fail("omega", f.to_string());
        }
        let (a, b) = (rng_weight(&mut rng), rng_weight(&mut rng));
        let (u, v) = (random_homogeneous(&mut rng, a, 3), random_homogeneous(&mut rng, b, 3));
        let uv = contact_bracket(&u, &v);
        if !u.is_zero() && !v.is_zero() && !uv.is_zero() {
            let additive = match (grade_of(&u), grade_of(&v), grade_of(&uv)) {
                (Ok(gu), Ok(gv), Ok(guv)) => gu + gv == guv,
                _ => false,
            };
            if !additive {
                fail("grading", format!("{u} ; {v}"));
            }
        }
    }
    let detail = json!({ "pairs": pairs, "seed": seed, "failures": failures });
    Check::new("bracket_properties", failures.is_empty(), detail)
}

fn rng_weight(rng: &mut ChaCha8Rng) -> u32 {
    rand::Rng::random_range(rng, 0..=5)
}

fn matrix(rows: [[i64; 2]; 2]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
}

/// The action of `x², xz, z², y` on `g_{-1}` in the basis `(x, z)`.
pub fn printed_action_matrices() -> Check {
    let printed = [
        [[0, 2], [0, 0]],
        [[-1, 0], [0, 1]],
        [[0, 0], [-2, 0]],
        [[-1, 0], [0, 0]],
    ];
    let got = action_matrices(&h0_family(&Family::Gl2)).unwrap_or_default();
    let passed = got.len() == 4 && got.iter().zip(printed).all(|(m, want)| *m == matrix(want));
    let shown: Vec<String> = got.iter().map(ToString::to_string).collect();
    Check::new(
        "action_matrices",
        passed,
        json!({ "h0": ["x^2", "x*z", "z^2", "y"], "matrices": shown }),
    )
}

/// `±(2y − xz)` is the grading element of I.1, I.2, I.4 and I.5, and I.3 and
/// I.6 have none.
pub fn grading_elements() -> Result<Check, VerifyError> {
    let e = p("2*y-x*z");
    let mut passed = true;
    let mut detail = BTreeMap::new();
    for id in GRADED_IDS {
        let found = grading_element(&catalog_algebra(id, &int(0))?);
        let expect_one = matches!(id, "I.1" | "I.2" | "I.4" | "I.5");
        let sign = match &found {
            Some(g) if *g == e => Some("+"),
            Some(g) if *g == -e.clone() => Some("-"),
            _ => None,
        };
        passed &= if expect_one { sign.is_some() } else { found.is_none() };
        detail.insert(id, json!({ "element": found.map(|g| g.to_string()), "sign": sign }));
    }
    Ok(Check::new(
        "grading_elements",
        passed,
        json!({ "convention": "{e, v} = p v for v of grade p", "algebras": detail }),
    ))
}

/// Jacobi holds exactly on `αβ = 0`, and `β = ±1` at `α = 0` separate u(2)
/// from gl(2).
pub fn deformation() -> Check {
    let grid = [int(-1), rat(-1, 2), int(0), rat(1, 2), int(1), int(2)];
    let mut mismatches = Vec::new();
    for a in &grid {
        for b in &grid {
            let jacobi = deformation_6(a, b).jacobi_check().is_ok();
            if jacobi != (a.is_zero() || b.is_zero()) {
                mismatches.push(format!("alpha={} beta={}", fmt_rat(a), fmt_rat(b)));
            }
        }
    }
    let plus = deformation_6(&int(0), &int(1)).fingerprint();
    let minus = deformation_6(&int(0), &int(-1)).fingerprint();
    let signatures_ok = plus.derived_killing_signature == (0, 3, 0) && minus.derived_killing_signature == (2, 1, 0);
    let ii1 = filtered_model(false).structure_constants().fingerprint();
    let ii2 = filtered_model(true).structure_constants().fingerprint();
    let matches = minus == ii1 && plus == ii2;
    Check::new(
        "deformation",
        mismatches.is_empty() && signatures_ok && matches,
        json!({
            "jacobi_iff_alpha_beta_zero": mismatches.is_empty(),
            "mismatches": mismatches,
            "beta_plus_one": plus.to_string(),
            "beta_minus_one": minus.to_string(),
            "beta_plus_one_is_II.2": plus == ii2,
            "beta_minus_one_is_II.1": minus == ii1,
        }),
    )
}

/// Closure, Jacobi and fingerprints of every registry algebra; fingerprints
/// separate the graded and filtered algebras and agree across representations.
pub fn catalog_suite() -> Result<Check, VerifyError> {
    let entries = crate::catalog::data::export()?;
    let mut check = catalog_file(&entries);
    let fp = |id: &str| entries.iter().find(|e| e.id == id).map(|e| e.fingerprint.clone());
    let main: Vec<_> = GRADED_IDS.iter().chain(&FILTERED_IDS).map(|id| fp(id)).collect();
    let distinct = main
        .iter()
        .enumerate()
        .all(|(i, a)| main[i + 1..].iter().all(|b| a != b));
    let reps_agree = REPRESENTATION_IDS.iter().all(|id| fp(id) == fp(&id[..4]));
    check.passed &= distinct && reps_agree;
    if let Value::Object(m) = &mut check.detail {
        m.insert("fingerprints_distinct".into(), json!(distinct));
        m.insert("representations_match_models".into(), json!(reps_agree));
    }
    Ok(check)
}

/// Re-derives each entry's constants from its stored basis.
pub fn catalog_file(entries: &[CatalogEntry]) -> Check {
    let mut results = BTreeMap::new();
    let mut first_error = None;
    for e in entries {
        let outcome = verify_entry(e).and_then(|sc| {
            if sc.fingerprint() == e.fingerprint {
                Ok(())
            } else {
                Err(CatalogError::ConstantsMismatch(format!("{}: fingerprint", e.id)))
            }
        });
        let text = match &outcome {
            Ok(()) => "ok".to_string(),
            Err(err) => format!("{}: {err}", error_kind(err)),
        };
        if outcome.is_err() && first_error.is_none() {
            first_error = Some(format!("{}: {text}", e.id));
        }
        results.insert(e.id.clone(), text);
    }
    Check::new(
        "catalog",
        first_error.is_none() && !entries.is_empty(),
        json!({ "entries": results, "first_error": first_error }),
    )
}

fn error_kind(err: &CatalogError) -> &'static str {
    match err {
        CatalogError::NotClosed { .. } => "NotClosed",
        CatalogError::ConstantsMismatch(_) => "ConstantsMismatch",
        CatalogError::Jacobi { .. } => "Jacobi",
        CatalogError::Parse(_) => "Parse",
        CatalogError::Dependent(_) => "Dependent",
        CatalogError::NumericMismatch { .. } => "NumericMismatch",
        _ => "Error",
    }
}

/// The function representations of II.1 and II.2: 4-dimensional, closed,
/// and inside I.1 or I.4.
pub fn representations() -> Result<Check, VerifyError> {
    let (i1, i4) = (load("I.1")?, load("I.4")?);
    let mut passed = true;
    let mut detail = BTreeMap::new();
    for id in REPRESENTATION_IDS {
        let spec = load(id)?;
        let sc = structure_constants(&spec)?;
        let jacobi = sc.jacobi_check().is_ok();
        let (in_i1, in_i4) = match spec.polynomials() {
            Ok(_) => (Some(embedding_check(&spec, &i1)?), Some(embedding_check(&spec, &i4)?)),
            Err(_) => (None, None),
        };
        let embedded = in_i1.is_none() || in_i1 == Some(true) || in_i4 == Some(true);
        passed &= spec.dim() == 4 && jacobi && embedded;
        detail.insert(
            id,
            json!({ "dimension": spec.dim(), "jacobi": jacobi, "in_I.1": in_i1, "in_I.4": in_i4 }),
        );
    }
    Ok(Check::new("representations", passed, json!(detail)))
}

/// The matrix models of II.1 and II.2 respect the filtration they are built on.
pub fn matrix_models() -> Check {
    let mut passed = true;
    let mut detail = BTreeMap::new();
    for (id, complex) in [("II.1", false), ("II.2", true)] {
        let model = filtered_model(complex);
        let filtration = model.check_filtration();
        passed &= filtration.is_ok() && model.dim() == 4;
        detail.insert(
            id,
            json!({
                "dimension": model.dim(),
                "filtration": filtration.err().unwrap_or_else(|| "ok".into()),
                "fingerprint": model.structure_constants().fingerprint().to_string(),
            }),
        );
    }
    Check::new("matrix_models", passed, json!(detail))
}

/// `π` on random elements of `𝔖`, and the plane images of I.2, I.3, I.5, I.6.
pub fn projection(pairs: usize, seed: u64) -> Result<Check, VerifyError> {
    let report = check_projection(pairs, seed);
    let images = plane_images(&alpha_samples())?;
    let images_ok = images.iter().all(|i| i.matches);
    Ok(Check::new(
        "projection",
        report.passed() && images_ok,
        json!({ "random": report, "plane_images": images }),
    ))
}

/// Every place where the printed text and a computation disagree, with the
/// reading adopted and the evidence for it.
pub fn typo_resolutions(opts: &AuditOptions) -> Result<(Check, Vec<TypoResolution>), VerifyError> {
    let mut out = Vec::new();
    let mut passed = true;

    let printed = i4_verbatim();
    let printed_err = structure_constants(&printed).err();
    let stored_ok = load("I.4").is_ok();
    passed &= printed_err.is_some() && stored_ok;
    out.push(TypoResolution {
        item: "I.4: last basis element".into(),
        verbatim: "(x^2+y^2)^2+4*(2*y-x*z)^2".into(),
        adopted: "(x^2+z^2)^2+4*(2*y-x*z)^2".into(),
        evidence: format!(
            "printed: {}; adopted: closed, and equal to the algebra found by the classification",
            printed_err.map_or_else(|| "closed".into(), |e| e.to_string())
        ),
    });

    let printed_h0 = [p("x^2"), p("z^2"), p("2*y-x*z")];
    let residual = contact_bracket(&printed_h0[0], &printed_h0[1]);
    let h0_closed = Basis::span(&printed_h0).contains(&residual);
    let sl2_g1 = extension_step(&with_h0(&h0_family(&Family::Sl2)), 0);
    let sl2_ok = sl2_g1 == span(&["x^3", "x^2*z", "x*z^2", "z^3"]);
    passed &= !h0_closed && sl2_ok;
    out.push(TypoResolution {
        item: "case (iii): h0".into(),
        verbatim: "<x^2, z^2, 2*y-x*z>".into(),
        adopted: "<x^2, x*z, z^2>".into(),
        evidence: format!(
            "{{x^2, z^2}} = {residual} is {} the printed span; the adopted h0 gives g1 = <x^3, x^2*z, x*z^2, z^3> ({}) and I.3",
            if h0_closed { "in" } else { "outside" },
            if sl2_ok { "matches" } else { "differs" }
        ),
    });

    for id in ["I.4", "I.5", "I.6"] {
        for row in crate::audit::rows::rows(id)? {
            if row.item.is_none() {
                continue;
            }
            let report = audit_row(&row, opts)?;
            if let Some(r) = report.resolution {
                passed &= r.adopted != "none";
                out.push(r);
            }
        }
    }
    let detail = json!(out
        .iter()
        .map(|r| json!({ "item": r.item, "adopted": r.adopted }))
        .collect::<Vec<_>>());
    Ok((Check::new("typo_resolutions", passed, detail), out))
}
