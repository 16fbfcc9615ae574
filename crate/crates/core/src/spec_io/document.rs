//! Serde shapes of the `.canvas.json` document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::Column;
use crate::model::{Cell, ColorScheme, Composition, Rgb, SchemeKind, VisualOutput};
use crate::registry::ConfirmationStatus;

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CanvasDocument {
    pub version: u32,
    pub dataset: DatasetDoc,
    #[serde(default)]
    pub equivalences: Vec<EquivalenceDoc>,
    #[serde(default)]
    pub views: Vec<ViewDoc>,
}

/// Exactly one of `source` (a CSV path relative to the document) and
/// `inline` (CSV text) is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inline: Option<String>,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceDoc {
    pub a: String,
    pub b: String,
    pub status: ConfirmationStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewDoc {
    pub id: String,
    pub chart: String,
    #[serde(default)]
    pub grouping: Option<String>,
    #[serde(default)]
    pub composition: Option<Composition>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesDoc>,
    #[serde(default)]
    pub cell: Option<Cell>,
    pub channels: BTreeMap<String, ChannelDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub label: String,
    /// Canonical field text, e.g. `mean(clinton)`.
    pub field: String,
    pub color: VisualDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<crate::model::DataDomain>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visual: Option<VisualDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum VisualDoc {
    Range {
        min: f64,
        max: f64,
    },
    Color {
        value: Rgb,
    },
    Scheme {
        id: String,
        kind: SchemeKind,
        /// `[key, color]` pairs in assignment order.
        assignment: Vec<(String, Rgb)>,
    },
    Size {
        min: f64,
        max: f64,
    },
}

impl From<&VisualOutput> for VisualDoc {
    fn from(v: &VisualOutput) -> Self {
        match v {
            VisualOutput::PositionRange { min, max } => VisualDoc::Range { min: *min, max: *max },
            VisualOutput::ConstantColor(c) => VisualDoc::Color { value: c.clone() },
            VisualOutput::ColorScheme(s) => VisualDoc::Scheme {
                id: s.scheme_id.clone(),
                kind: s.kind,
                assignment: s.assignment.clone(),
            },
            VisualOutput::SizeRange { min, max } => VisualDoc::Size { min: *min, max: *max },
        }
    }
}

impl From<VisualDoc> for VisualOutput {
    fn from(v: VisualDoc) -> Self {
        match v {
            VisualDoc::Range { min, max } => VisualOutput::PositionRange { min, max },
            VisualDoc::Color { value } => VisualOutput::ConstantColor(value),
            VisualDoc::Scheme { id, kind, assignment } => VisualOutput::ColorScheme(ColorScheme {
                scheme_id: id,
                kind,
                assignment,
            }),
            VisualDoc::Size { min, max } => VisualOutput::SizeRange { min, max },
        }
    }
}

impl Serialize for VisualOutput {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        VisualDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VisualOutput {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        VisualDoc::deserialize(deserializer).map(Into::into)
    }
}
