//! Operations that resolve detected relations: planning, canvas rewrites,
//! keep/undo history, and the semantic-space score.

mod apply;
mod history;
mod plan;
mod rewrite;
mod score;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::DataError;
use crate::model::{ChannelClass, FieldRef, ModelError, VisualOutput};
use crate::registry::{EquivalenceRegistry, RegistryError};

pub use apply::{apply_operation, Answer};
pub use history::{CanvasHistory, HistoryError, Pending};
pub use plan::{all_plans, plan_operations};
pub use rewrite::{
    delete_view, differentiate, homogenize_data, homogenize_style, integrate_views, pick_distinct_output,
    transfer_mapping, IntegrationVariant,
};
pub use score::{semantic_position, SemanticPosition};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperationError {
    #[error("unknown view `{0}`")]
    UnknownView(String),
    #[error("plan `{0}` is stale: the canvas changed since it was planned")]
    StalePlan(String),
    #[error("missing confirmation: {question}")]
    MissingConfirmation { question: String },
    #[error("the fields were confirmed as different; the operation was withdrawn")]
    ConfirmationDenied { registry: EquivalenceRegistry },
    #[error("view `{view}` has no data mapped on {class}")]
    EmptyMapping { view: String, class: ChannelClass },
    #[error("no {kind} witness on {class} between `{a}` and `{b}`")]
    NoWitness {
        kind: &'static str,
        class: ChannelClass,
        a: String,
        b: String,
    },
    #[error("every palette entry collides with an existing {0} output")]
    PaletteExhausted(ChannelClass),
    #[error("views {0:?} do not share a chart type")]
    IncompatibleChartTypes(Vec<String>),
    #[error("views {0:?} do not show the same data on the x axis")]
    UnsharedXAxis(Vec<String>),
    #[error("{variant} is not available for {detail}")]
    UnsupportedVariant { variant: String, detail: String },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    HomogenizeData,
    HomogenizeStyle,
    Differentiate,
    Integrate,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::HomogenizeData,
        Category::HomogenizeStyle,
        Category::Differentiate,
        Category::Integrate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::HomogenizeData => "homogenize-data",
            Category::HomogenizeStyle => "homogenize-style",
            Category::Differentiate => "differentiate",
            Category::Integrate => "integrate",
        }
    }

    /// Which semantic axis the category moves along.
    pub fn improves_consistency(self) -> bool {
        self != Category::Integrate
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperationKind {
    Delete,
    HomogenizeData,
    HomogenizeStyle,
    Differentiate,
    IntegrateOverlay,
    IntegrateGroup,
    IntegrateStack,
    IntegrateMirror,
    IntegrateTransfer,
}

impl OperationKind {
    pub fn category(self) -> Category {
        match self {
            OperationKind::HomogenizeData => Category::HomogenizeData,
            OperationKind::HomogenizeStyle => Category::HomogenizeStyle,
            OperationKind::Differentiate => Category::Differentiate,
            _ => Category::Integrate,
        }
    }

    /// Menu label, e.g. `integrate: mirror`.
    pub fn label(self) -> &'static str {
        match self {
            OperationKind::Delete => "integrate: delete",
            OperationKind::HomogenizeData => "homogenize data",
            OperationKind::HomogenizeStyle => "homogenize style",
            OperationKind::Differentiate => "differentiate",
            OperationKind::IntegrateOverlay => "integrate: overlay",
            OperationKind::IntegrateGroup => "integrate: group",
            OperationKind::IntegrateStack => "integrate: stack",
            OperationKind::IntegrateMirror => "integrate: mirror",
            OperationKind::IntegrateTransfer => "integrate: transfer",
        }
    }

    pub fn variant(self) -> Option<IntegrationVariant> {
        match self {
            OperationKind::IntegrateOverlay => Some(IntegrationVariant::Overlay),
            OperationKind::IntegrateGroup => Some(IntegrationVariant::Group),
            OperationKind::IntegrateStack => Some(IntegrationVariant::Stack),
            OperationKind::IntegrateMirror => Some(IntegrationVariant::Mirror),
            _ => None,
        }
    }
}

impl fmt::Display for OperationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Kind-specific parameters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlanParams {
    /// Channel classes the rewrite touches.
    pub classes: Vec<ChannelClass>,
    /// Differentiate: the replacement output per class, in `classes` order.
    pub outputs: Vec<VisualOutput>,
}

/// An executable rewrite offered for one detected relation.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationPlan {
    pub id: String,
    pub kind: OperationKind,
    pub target_view_ids: Vec<String>,
    pub source_view_id: Option<String>,
    pub resolves_relation_id: String,
    pub params: PlanParams,
    pub required_confirmations: Vec<(FieldRef, FieldRef)>,
    pub description: String,
    pub question: Option<String>,
}

impl OperationPlan {
    pub fn category(&self) -> Category {
        self.kind.category()
    }
}

pub fn confirmation_question(a: &FieldRef, b: &FieldRef) -> String {
    format!("Are {a} and {b} representing the same quantity?")
}
