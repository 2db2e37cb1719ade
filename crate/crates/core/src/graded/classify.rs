//! Steps I–III run over the four irreducible subalgebras of `gl(2, ℝ)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::extend::{extension_step, generated_closure, iterate_extension};
use super::module::{decompose_space, is_irreducible_on_gminus1};
use super::{GradedError, GradedSubalgebra, Status};
use crate::exact::poly::p;
use crate::exact::rat::{fmt_rat, rat};
use crate::exact::{Basis, Rat, WPoly};

/// Samples of the parameter `α ≥ 0` of the rotation family.
pub const DEFAULT_ALPHA_SAMPLES: [(i64, i64); 4] = [(0, 1), (1, 2), (1, 1), (2, 1)];

/// The irreducible subalgebras `h_0 ⊂ g_0(𝔫) ≅ gl(2, ℝ)` up to conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `⟨x² + z² + α(2y − xz)⟩`
    Rotation(Rat),
    /// `⟨x² + z², 2y − xz⟩`
    Complex,
    /// `⟨x², xz, z²⟩`
    Sl2,
    /// `⟨x², xz, z², y⟩`
    Gl2,
}

impl Family {
    pub fn all(alpha: &Rat) -> Vec<Family> {
        vec![
            Family::Rotation(alpha.clone()),
            Family::Complex,
            Family::Sl2,
            Family::Gl2,
        ]
    }

    pub fn label(&self) -> &'static str {
        match self {
            Family::Rotation(_) => "i",
            Family::Complex => "ii",
            Family::Sl2 => "iii",
            Family::Gl2 => "iv",
        }
    }
}

pub fn h0_family(family: &Family) -> Vec<WPoly> {
    match family {
        Family::Rotation(alpha) => vec![p("x^2 + z^2") + p("2*y - x*z").scale(alpha)],
        Family::Complex => vec![p("x^2 + z^2"), p("2*y - x*z")],
        Family::Sl2 => vec![p("x^2"), p("x*z"), p("z^2")],
        Family::Gl2 => vec![p("x^2"), p("x*z"), p("z^2"), p("y")],
    }
}

/// One choice of `h_{k+1}` made along a branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Choice {
    pub grade: i32,
    /// `0`, `W1`, `W1+W2`, … in terms of the summands of the maximal space.
    pub label: String,
    pub space: Basis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BranchOutcome {
    /// `g̃ = g`: a finite graded contact algebra.
    Algebra { algebra: GradedSubalgebra },
    /// The generated subalgebra grew past the cutoff.
    GrowthExceeded { cutoff: i32, dims: BTreeMap<i32, usize> },
    /// The chosen components were not bracket-closed.
    NotClosed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub family: String,
    #[serde(with = "crate::exact::rat::serde_text_opt")]
    pub alpha: Option<Rat>,
    pub h0: Vec<WPoly>,
    pub choices: Vec<Choice>,
    #[serde(flatten)]
    pub outcome: BranchOutcome,
}

impl Branch {
    pub fn algebra(&self) -> Option<&GradedSubalgebra> {
        match &self.outcome {
            BranchOutcome::Algebra { algebra } => Some(algebra),
            _ => None,
        }
    }

    /// The branch's choices as text, e.g. `h1=W2`.
    pub fn path(&self) -> String {
        if self.choices.is_empty() {
            return "-".into();
        }
        self.choices
            .iter()
            .map(|c| format!("h{}={}", c.grade, c.label))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub family: String,
    pub h0: Vec<WPoly>,
    pub irreducible: bool,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    #[serde(with = "crate::exact::rat::serde_text")]
    pub alpha: Rat,
    pub cutoff: i32,
    pub families: Vec<FamilyCheck>,
    pub branches: Vec<Branch>,
}

impl Classification {
    pub fn algebras(&self) -> Vec<&GradedSubalgebra> {
        self.branches.iter().filter_map(Branch::algebra).collect()
    }

    pub fn discarded(&self) -> Vec<&Branch> {
        self.branches.iter().filter(|b| b.algebra().is_none()).collect()
    }
}

/// Runs the algorithm from the four families of `h_0` with the given `α`.
///
/// ```
/// use contact_lie::exact::rat::int;
/// use contact_lie::graded::run_classification;
///
/// let c = run_classification(&int(1), 8);
/// let dims: Vec<usize> = c.algebras().iter().map(|a| a.dim()).collect();
/// assert_eq!(dims, [4, 5, 8, 6, 7, 10]);
/// ```
pub fn run_classification(alpha: &Rat, cutoff: i32) -> Classification {
    let mut families = Vec::new();
    let mut branches = Vec::new();
    for family in Family::all(alpha) {
        let h0 = h0_family(&family);
        let irreducible = is_irreducible_on_gminus1(&h0).is_ok_and(|i| i.is_irreducible());
        let h0_span = Basis::span(&h0);
        let closed = h0.iter().all(|a| {
            h0.iter()
                .all(|b| h0_span.contains(&crate::contact::contact_bracket(a, b)))
        });
        families.push(FamilyCheck {
            family: family.label().into(),
            h0: h0.clone(),
            irreducible,
            closed,
        });
        let mut fixed = GradedSubalgebra::heisenberg().components().clone();
        fixed.insert(0, h0_span);
        let ctx = Explore {
            family: family.label(),
            alpha: matches!(family, Family::Rotation(_)).then(|| alpha.clone()),
            h0: &h0,
            cutoff,
        };
        ctx.explore(fixed, 0, Vec::new(), &mut branches);
    }
    Classification {
        alpha: alpha.clone(),
        cutoff,
        families,
        branches,
    }
}

struct Explore<'a> {
    family: &'a str,
    alpha: Option<Rat>,
    h0: &'a [WPoly],
    cutoff: i32,
}

impl Explore<'_> {
    fn finish(&self, choices: Vec<Choice>, outcome: BranchOutcome, out: &mut Vec<Branch>) {
        out.push(Branch {
            family: self.family.into(),
            alpha: self.alpha.clone(),
            h0: self.h0.to_vec(),
            choices,
            outcome,
        });
    }

    fn explore(&self, fixed: BTreeMap<i32, Basis>, k: i32, choices: Vec<Choice>, out: &mut Vec<Branch>) {
        let fixed_alg = GradedSubalgebra::new(fixed.clone(), Status::Stabilized(k));
        let tilde = generated_closure(&fixed_alg.subspaces(), self.cutoff);
        if let Status::GrowthExceeded(cutoff) = tilde.status() {
            let dims = tilde.dims();
            return self.finish(choices, BranchOutcome::GrowthExceeded { cutoff, dims }, out);
        }
        if (-2..=k).any(|q| tilde.component(q) != fixed_alg.component(q)) {
            return self.finish(choices, BranchOutcome::NotClosed, out);
        }
        let ext = iterate_extension(&fixed_alg, k, self.cutoff);
        if ext.status().is_stabilized() && ext.same_space(&tilde) {
            return self.finish(choices, BranchOutcome::Algebra { algebra: tilde }, out);
        }
        if k + 1 > self.cutoff {
            let dims = tilde.dims();
            let cutoff = self.cutoff;
            return self.finish(choices, BranchOutcome::GrowthExceeded { cutoff, dims }, out);
        }
        let maximal = extension_step(&fixed_alg, k);
        let low = tilde.component(k + 1);
        let summands = named_summands(self.h0, &maximal).expect("maximal space is h0-invariant");
        let mut seen: Vec<Basis> = Vec::new();
        for mask in 0u32..(1 << summands.len()) {
            let mut space = low.clone();
            let mut names = Vec::new();
            for (i, s) in summands.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    space = space.sum(s);
                    names.push(format!("W{}", i + 1));
                }
            }
            if seen.contains(&space) {
                continue;
            }
            seen.push(space.clone());
            let label = if names.is_empty() {
                "0".to_string()
            } else {
                names.join("+")
            };
            let mut next = fixed.clone();
            if !space.is_empty() {
                next.insert(k + 1, space.clone());
            }
            let mut path = choices.clone();
            path.push(Choice {
                grade: k + 1,
                label,
                space,
            });
            self.explore(next, k + 1, path, out);
        }
    }
}

/// Irreducible summands of an `h_0`-invariant space, in the order that names
/// them `W1, W2, …`: larger first, ties broken by their text.
pub fn named_summands(h0: &[WPoly], space: &Basis) -> Result<Vec<Basis>, GradedError> {
    let mut summands = decompose_space(h0, space)?;
    summands.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.to_string().cmp(&b.to_string())));
    Ok(summands)
}

fn check_closed(h: &GradedSubalgebra, fixed: &GradedSubalgebra, top: i32) -> Result<(), GradedError> {
    if (-2..=top).all(|q| h.component(q) == fixed.component(q)) {
        return Ok(());
    }
    let elems = fixed.elements();
    for f in &elems {
        for g in &elems {
            let r = crate::contact::contact_bracket(f, g);
            if !fixed.contains(&r) {
                return Err(GradedError::NotClosed {
                    f: f.clone(),
                    g: g.clone(),
                    residual: r,
                });
            }
        }
    }
    Ok(())
}

/// The extension of `𝔫 ⊕ h_0`, optionally with `h_1` fixed to a sum of the
/// named summands of `g_1(𝔫, h_0)` (`"0"`, `"W1"`, `"W1+W2"`, …).
///
/// ```
/// use contact_lie::exact::poly::p;
/// use contact_lie::graded::{extend, Status};
///
/// let i4 = extend(&[p("x^2+z^2"), p("2*y-x*z")], None, 8).unwrap();
/// assert_eq!(i4.dim(), 8);
/// let grown = extend(&[p("x^2"), p("x*z"), p("z^2"), p("y")], Some("W1"), 8).unwrap();
/// assert_eq!(grown.status(), Status::GrowthExceeded(8));
/// ```
pub fn extend(h0: &[WPoly], h1: Option<&str>, cutoff: i32) -> Result<GradedSubalgebra, GradedError> {
    for g in h0 {
        let found = super::grade_of(g)?;
        if found != 0 {
            return Err(GradedError::WrongGrade {
                poly: g.clone(),
                expected: 0,
                found,
            });
        }
    }
    let mut fixed = GradedSubalgebra::heisenberg().components().clone();
    fixed.insert(0, Basis::span(h0));
    let mut top = 0;
    if let Some(label) = h1 {
        let base = GradedSubalgebra::new(fixed.clone(), Status::Stabilized(0));
        let summands = named_summands(h0, &extension_step(&base, 0))?;
        let mut space = Basis::default();
        if label != "0" {
            for name in label.split('+') {
                let i = name
                    .trim()
                    .strip_prefix('W')
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|i| (1..=summands.len()).contains(i))
                    .ok_or_else(|| GradedError::UnknownSummand {
                        label: name.trim().into(),
                        available: summands.len(),
                    })?;
                space = space.sum(&summands[i - 1]);
            }
        }
        if !space.is_empty() {
            fixed.insert(1, space);
        }
        top = 1;
    }
    let fixed = GradedSubalgebra::new(fixed, Status::Stabilized(top));
    let tilde = generated_closure(&fixed.subspaces(), cutoff);
    if !tilde.status().is_stabilized() {
        return Ok(tilde);
    }
    check_closed(&tilde, &fixed, top)?;
    Ok(iterate_extension(&fixed, top, cutoff))
}

/// `α` samples as rationals.
pub fn alpha_samples() -> Vec<Rat> {
    DEFAULT_ALPHA_SAMPLES.iter().map(|&(n, d)| rat(n, d)).collect()
}

/// Text summary used by reports: `family path -> dim`.
pub fn summarize(c: &Classification) -> Vec<String> {
    c.branches
        .iter()
        .map(|b| {
            let alpha = b
                .alpha
                .as_ref()
                .map(|a| format!("(alpha={})", fmt_rat(a)))
                .unwrap_or_default();
            let outcome = match &b.outcome {
                BranchOutcome::Algebra { algebra } => format!("algebra dim {}", algebra.dim()),
                BranchOutcome::GrowthExceeded { cutoff, .. } => format!("growth exceeded at grade {cutoff}"),
                BranchOutcome::NotClosed => "not closed".into(),
            };
            format!("{}{} {} -> {}", b.family, alpha, b.path(), outcome)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;

    #[test]
    fn six_algebras_for_each_alpha() {
        for alpha in alpha_samples() {
            let c = run_classification(&alpha, 8);
            assert!(c.families.iter().all(|f| f.irreducible && f.closed));
            let dims: Vec<usize> = c.algebras().iter().map(|a| a.dim()).collect();
            assert_eq!(dims, [4, 5, 8, 6, 7, 10], "alpha {alpha}");
            assert!(c
                .algebras()
                .iter()
                .all(|a| a.check_closure().is_ok() && a.is_transitive()));
        }
    }

    #[test]
    fn discarded_branches_are_w1_seeds() {
        let c = run_classification(&int(0), 8);
        let lines = summarize(&c);
        let discarded: Vec<&String> = lines.iter().filter(|l| l.contains("growth")).collect();
        assert_eq!(discarded.len(), 3, "{lines:#?}");
        assert!(discarded.iter().any(|l| l.starts_with("iii h1=W1 ")));
        assert!(discarded.iter().any(|l| l.starts_with("iv h1=W1 ")));
        assert!(discarded.iter().any(|l| l.starts_with("iv h1=W1+W2 ")));
        assert!(lines.contains(&"iv h1=W2 -> algebra dim 10".to_string()), "{lines:#?}");
    }

    #[test]
    fn extend_examples() {
        let i6 = extend(&[p("x^2+z^2")], None, 8).unwrap();
        assert_eq!((i6.dim(), i6.status()), (4, Status::Stabilized(0)));
        let i1 = extend(&h0_family(&Family::Gl2), Some("W2"), 8).unwrap();
        assert_eq!(i1.dim(), 10);
        let sl2 = extend(&h0_family(&Family::Sl2), Some("W1"), 6).unwrap();
        assert_eq!(sl2.status(), Status::GrowthExceeded(6));
        assert_eq!(extend(&h0_family(&Family::Sl2), Some("0"), 8).unwrap().dim(), 6);
    }

    #[test]
    fn extend_rejects_bad_input() {
        assert!(matches!(
            extend(&[p("x^3")], None, 8),
            Err(GradedError::WrongGrade { found: 1, .. })
        ));
        assert!(matches!(
            extend(&[p("x^2"), p("z^2")], None, 8),
            Err(GradedError::NotClosed { .. })
        ));
        assert!(matches!(
            extend(&[p("x^2+z^2")], Some("W3"), 8),
            Err(GradedError::UnknownSummand { .. })
        ));
    }
}
