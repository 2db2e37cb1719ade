//! The catalog as a JSON document, and re-verification of such documents.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::structure::{Fingerprint, StructureConstants};
use super::{ids, load, structure_constants, AlgebraSpec, Annotation, CatalogError, SpecBasis, GRADED_IDS};
use crate::exact::rat::fmt_rat;
use crate::exact::WPoly;
use crate::graded::GradedSubalgebra;
use crate::jet::JetExpr;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub name: String,
    /// `graded`, `filtered` or `representation`.
    pub kind: String,
    /// `polynomial`, `transcendental` or `abstract`.
    pub basis_kind: String,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_grade: Option<i32>,
    pub dimension: usize,
    pub structure_constants: StructureConstants,
    pub fingerprint: Fingerprint,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

fn kind_of(id: &str) -> &'static str {
    if GRADED_IDS.contains(&id) {
        "graded"
    } else if id.len() == 4 {
        "filtered"
    } else {
        "representation"
    }
}

pub fn entry(spec: &AlgebraSpec) -> Result<CatalogEntry, CatalogError> {
    let sc = structure_constants(spec)?;
    let mut e = CatalogEntry {
        id: spec.id.clone(),
        name: spec.name.clone(),
        kind: kind_of(&spec.id).into(),
        basis_kind: spec.basis.kind().into(),
        basis: spec.basis.texts(),
        components: None,
        status: None,
        top_grade: None,
        dimension: spec.dim(),
        fingerprint: sc.fingerprint(),
        structure_constants: sc,
        parameters: Parameters {
            alpha: spec.alpha.as_ref().map(fmt_rat),
            beta: spec.beta.as_ref().map(fmt_rat),
        },
        annotations: spec.annotations.clone(),
    };
    if e.kind == "graded" {
        let graded = GradedSubalgebra::from_generators(spec.polynomials()?)
            .map_err(|err| CatalogError::Parse(err.to_string()))?;
        let v = serde_json::to_value(&graded)?;
        e.components = serde_json::from_value(v["components"].clone())?;
        e.status = v["status"].as_str().map(str::to_string);
        e.top_grade = v["top_grade"].as_i64().map(|t| t as i32);
    }
    Ok(e)
}

/// Every registry entry, in [`ids`] order.
pub fn export() -> Result<Vec<CatalogEntry>, CatalogError> {
    ids().into_iter().map(|id| entry(&load(id)?)).collect()
}

pub fn to_json(entries: &[CatalogEntry]) -> Result<String, CatalogError> {
    Ok(serde_json::to_string_pretty(entries)? + "\n")
}

pub fn from_json(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_file(path: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    from_json(&std::fs::read_to_string(path)?)
}

/// Rebuilds the algebra from the stored basis, recomputes its constants and
/// compares them with the stored ones.
pub fn verify_entry(e: &CatalogEntry) -> Result<StructureConstants, CatalogError> {
    let basis = match e.basis_kind.as_str() {
        "polynomial" => SpecBasis::Polynomial(
            e.basis
                .iter()
                .map(|s| WPoly::parse(s).map_err(|err| CatalogError::Parse(format!("{}: {s}: {err}", e.id))))
                .collect::<Result<_, _>>()?,
        ),
        "transcendental" => SpecBasis::Transcendental(
            e.basis
                .iter()
                .map(|s| JetExpr::parse(s).map_err(|err| CatalogError::Parse(format!("{}: {s}: {err}", e.id))))
                .collect::<Result<_, _>>()?,
        ),
        // known matrix models are rebuilt from the registry, others taken as stored
        "abstract" => match load(&e.id) {
            Ok(AlgebraSpec {
                basis: b @ SpecBasis::Abstract(_),
                ..
            }) => b,
            _ => SpecBasis::Abstract(e.structure_constants.clone()),
        },
        other => return Err(CatalogError::Parse(format!("{}: unknown basis kind `{other}`", e.id))),
    };
    let spec = AlgebraSpec {
        id: e.id.clone(),
        name: e.name.clone(),
        basis,
        alpha: None,
        beta: None,
        annotations: Vec::new(),
    };
    if spec.dim() != e.dimension {
        return Err(CatalogError::Parse(format!(
            "{}: dimension {} but {} basis elements",
            e.id,
            e.dimension,
            spec.dim()
        )));
    }
    let sc = structure_constants(&spec)?;
    let same = (0..sc.dim()).all(|i| (0..sc.dim()).all(|j| sc.get(i, j) == e.structure_constants.get(i, j)));
    if sc.dim() != e.structure_constants.dim() || !same {
        return Err(CatalogError::ConstantsMismatch(e.id.clone()));
    }
    sc.jacobi_check().map_err(|triples| CatalogError::Jacobi {
        id: e.id.clone(),
        triples,
    })?;
    Ok(sc)
}
