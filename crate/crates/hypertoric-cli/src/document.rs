//! Arrangement documents: parsing, validation and the shipped catalog.

use hypertoric::arrangement::StackyArrangement;
use hypertoric::exactalg::{gale_dual, FgAbelianGroup, GroupHom};
use hypertoric::{Error, Int};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementDocument {
    pub schema_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    pub beta: Vec<Vec<i64>>,
    pub theta: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<i64>>,
}

pub const CATALOG: [(&str, &str); 4] = [
    ("tp1", include_str!("../catalog/tp1.json")),
    ("tp12", include_str!("../catalog/tp12.json")),
    ("hirzebruch", include_str!("../catalog/hirzebruch.json")),
    (
        "hirzebruch_weighted",
        include_str!("../catalog/hirzebruch_weighted.json"),
    ),
];

pub fn catalog_entry(name: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

impl ArrangementDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: ArrangementDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." || path == "?" {
                "$".to_string()
            } else {
                format!("$.{path}")
            };
            invalid(path, e.inner().to_string())
        })?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "$.schema_version",
                format!(
                    "unsupported schema version {:?}, expected {SCHEMA_VERSION:?}",
                    doc.schema_version
                ),
            ));
        }
        Ok(doc)
    }

    /// Serialization with fixed field order; parsing it back gives `self`.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn build(&self) -> Result<StackyArrangement, CliError> {
        if self.rank == 0 {
            return Err(invalid("$.rank", "rank must be at least 1"));
        }
        for (i, &t) in self.torsion.iter().enumerate() {
            if t < 2 {
                return Err(invalid(
                    format!("$.torsion[{i}]"),
                    format!("torsion order {t} must be at least 2"),
                ));
            }
        }
        if self.beta.is_empty() {
            return Err(invalid("$.beta", "beta needs at least one column"));
        }
        let width = self.rank + self.torsion.len();
        for (i, c) in self.beta.iter().enumerate() {
            if c.len() != width {
                return Err(invalid(
                    format!("$.beta[{i}]"),
                    format!("column has {} entries, expected {width}", c.len()),
                ));
            }
        }
        let ints = |v: &[i64]| v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
        let group = FgAbelianGroup::new(self.rank, ints(&self.torsion))
            .map_err(|e| invalid("$.torsion", e.to_string()))?;
        let columns: Vec<Vec<Int>> = self.beta.iter().map(|c| ints(c)).collect();
        let beta = GroupHom::new(group.clone(), &columns).map_err(|e| library(e, "$.beta"))?;
        let dual = gale_dual(&beta).map_err(|e| library(e, "$.beta"))?;
        let expected = dual.target.coordinate_count();
        if self.theta.len() != expected {
            return Err(invalid(
                "$.theta",
                format!(
                    "theta has {} entries, expected {expected}",
                    self.theta.len()
                ),
            ));
        }
        if let Some(psi) = &self.psi {
            if psi.len() != self.beta.len() {
                return Err(invalid(
                    "$.psi",
                    format!(
                        "psi has {} entries, expected {}",
                        psi.len(),
                        self.beta.len()
                    ),
                ));
            }
        }
        StackyArrangement::new(
            group,
            &columns,
            ints(&self.theta),
            self.psi.as_deref().map(ints),
        )
        .map_err(|e| library(e, "$.theta"))
    }
}

/// Maps a library error raised while building to the input field it concerns.
fn library(e: Error, fallback: &str) -> CliError {
    let path = match &e {
        Error::InfiniteCokernel { .. } | Error::DimensionTooLarge { .. } => "$.beta".to_string(),
        Error::TorsionColumn { index } => format!("$.beta[{index}]"),
        Error::NotInImage | Error::NonGeneric => "$.theta".to_string(),
        Error::PsiMismatch { .. } => "$.psi".to_string(),
        _ => fallback.to_string(),
    };
    invalid(path, e.to_string())
}
