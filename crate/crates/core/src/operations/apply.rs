use serde::{Deserialize, Serialize};

use super::rewrite::{
    delete_view, differentiate, homogenize_data, homogenize_style, integrate_views, transfer_mapping,
};
use super::{all_plans, confirmation_question, OperationError, OperationKind, OperationPlan};
use crate::config::Config;
use crate::model::{Canvas, FieldRef};
use crate::relations::find_relations;

/// A user's answer to "are these two fields the same quantity?".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub a: FieldRef,
    pub b: FieldRef,
    pub same: bool,
}

impl Answer {
    fn matches(&self, a: &FieldRef, b: &FieldRef) -> bool {
        (&self.a == a && &self.b == b) || (&self.a == b && &self.b == a)
    }
}

/// Checks the plan is still offered for `canvas`, records the answers and
/// runs the rewrite. A "different" answer to a required pair withdraws the
/// operation; the updated registry travels in the error.
pub fn apply_operation(
    canvas: &Canvas,
    plan: &OperationPlan,
    answers: &[Answer],
    config: &Config,
) -> Result<Canvas, OperationError> {
    let relations = find_relations(canvas);
    if !all_plans(canvas, &relations, config).iter().any(|p| p.id == plan.id) {
        return Err(OperationError::StalePlan(plan.id.clone()));
    }
    for (a, b) in &plan.required_confirmations {
        if !answers.iter().any(|ans| ans.matches(a, b)) {
            return Err(OperationError::MissingConfirmation {
                question: confirmation_question(a, b),
            });
        }
    }
    let mut registry = canvas.registry.clone();
    for ans in answers {
        registry = registry.record(&ans.a, &ans.b, ans.same)?;
    }
    let denied = plan
        .required_confirmations
        .iter()
        .any(|(a, b)| answers.iter().any(|ans| ans.matches(a, b) && !ans.same));
    if denied {
        return Err(OperationError::ConfirmationDenied { registry });
    }

    let mut next = canvas.clone();
    next.registry = registry;
    run(&next, plan, config)
}

fn run(canvas: &Canvas, plan: &OperationPlan, config: &Config) -> Result<Canvas, OperationError> {
    let targets = &plan.target_view_ids;
    let first = targets
        .first()
        .ok_or_else(|| OperationError::UnknownView(String::new()))?;
    let source = || {
        plan.source_view_id
            .as_deref()
            .ok_or_else(|| OperationError::UnknownView(String::new()))
    };
    let mut next = canvas.clone();
    match plan.kind {
        OperationKind::Delete => next = delete_view(&next, first)?,
        OperationKind::HomogenizeData => {
            let second = targets
                .get(1)
                .ok_or_else(|| OperationError::UnknownView(String::new()))?;
            for &class in &plan.params.classes {
                next = homogenize_data(&next, first, second, class)?;
            }
        }
        OperationKind::HomogenizeStyle => {
            let src = source()?;
            for &class in &plan.params.classes {
                next = homogenize_style(&next, first, src, class)?;
            }
        }
        OperationKind::Differentiate => {
            for &class in &plan.params.classes {
                next = differentiate(&next, first, class, &config.palette)?;
            }
        }
        OperationKind::IntegrateTransfer => {
            next = transfer_mapping(&next, first, source()?, &plan.params.classes)?;
        }
        OperationKind::IntegrateOverlay
        | OperationKind::IntegrateGroup
        | OperationKind::IntegrateStack
        | OperationKind::IntegrateMirror => {
            let variant = plan.kind.variant().expect("integrate kinds carry a variant");
            next = integrate_views(&next, targets, variant, &config.palette)?;
        }
    }
    Ok(next)
}
