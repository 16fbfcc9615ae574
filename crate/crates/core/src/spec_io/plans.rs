use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{ChannelClass, FieldRef, VisualOutput};
use crate::operations::{Category, OperationPlan};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfirmationDoc {
    pub a: FieldRef,
    pub b: FieldRef,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlanDoc {
    pub id: String,
    pub category: Category,
    pub label: String,
    pub target_view_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_view_id: Option<String>,
    pub resolves_relation_id: String,
    pub classes: Vec<ChannelClass>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<VisualOutput>,
    pub required_confirmations: Vec<ConfirmationDoc>,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
}

impl From<&OperationPlan> for PlanDoc {
    fn from(p: &OperationPlan) -> Self {
        PlanDoc {
            id: p.id.clone(),
            category: p.category(),
            label: p.kind.label().to_string(),
            target_view_ids: p.target_view_ids.clone(),
            source_view_id: p.source_view_id.clone(),
            resolves_relation_id: p.resolves_relation_id.clone(),
            classes: p.params.classes.clone(),
            outputs: p.params.outputs.clone(),
            required_confirmations: p
                .required_confirmations
                .iter()
                .map(|(a, b)| ConfirmationDoc {
                    a: a.clone(),
                    b: b.clone(),
                })
                .collect(),
            description: p.description.clone(),
            question: p.question.clone(),
        }
    }
}

/// Plans of one view grouped by category, as the operations menu lists them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanMenu {
    pub counts: BTreeMap<Category, usize>,
    pub categories: BTreeMap<Category, Vec<PlanDoc>>,
}

pub fn plan_menu(plans: &[OperationPlan]) -> PlanMenu {
    let mut categories: BTreeMap<Category, Vec<PlanDoc>> = BTreeMap::new();
    for p in plans {
        categories.entry(p.category()).or_default().push(PlanDoc::from(p));
    }
    let counts = categories.iter().map(|(c, ps)| (*c, ps.len())).collect();
    PlanMenu { counts, categories }
}
