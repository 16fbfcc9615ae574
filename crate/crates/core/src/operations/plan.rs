use std::collections::BTreeSet;

use sha2::{Digest, Sha256};

use super::rewrite::{differentiated_output, IntegrationVariant};
use super::{confirmation_question, OperationError, OperationKind, OperationPlan, PlanParams};
use crate::config::Config;
use crate::model::{field_eq, grouping_eq, visual_eq, Canvas, ChannelClass, TriState, View};
use crate::relations::{
    integrable, integration_groups, relations_for_view, RelationInstance, RelationKind, RelationSet,
};

fn plan_id(
    kind: OperationKind,
    targets: &[String],
    source: Option<&str>,
    relation: &str,
    params: &PlanParams,
) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "{kind:?}|{}|{}|{relation}|{:?}|{:?}",
        targets.join(","),
        source.unwrap_or(""),
        params.classes,
        params.outputs
    ));
    let digest = h.finalize();
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

struct Draft {
    kind: OperationKind,
    targets: Vec<String>,
    source: Option<String>,
    params: PlanParams,
    description: String,
}

fn finish(draft: Draft, relation: &RelationInstance, relations: &RelationSet) -> OperationPlan {
    // a merge is reachable from every multiples pair inside its group; anchor
    // it to the smallest so each member view offers the same plan
    let anchor = draft.kind.variant().and_then(|_| {
        relations
            .of_kind(RelationKind::MultiplesSameGrouping)
            .filter(|r| draft.targets.contains(&r.view_ids.0) && draft.targets.contains(&r.view_ids.1))
            .min_by(|x, y| x.id.cmp(&y.id))
    });
    let relation = anchor.unwrap_or(relation);
    let required = if relation.conditional {
        relation.pending_confirmations()
    } else {
        Vec::new()
    };
    let question = required.first().map(|(a, b)| confirmation_question(a, b));
    OperationPlan {
        id: plan_id(
            draft.kind,
            &draft.targets,
            draft.source.as_deref(),
            &relation.id,
            &draft.params,
        ),
        kind: draft.kind,
        target_view_ids: draft.targets,
        source_view_id: draft.source,
        resolves_relation_id: relation.id.clone(),
        params: draft.params,
        required_confirmations: required,
        description: draft.description,
        question,
    }
}

fn classes_text(classes: &[ChannelClass]) -> String {
    classes.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
}

/// Whether recoloring `view` on `classes` is possible and would not make it
/// look like a view that shows the same data.
fn recolor(canvas: &Canvas, view: &View, classes: &[ChannelClass], config: &Config) -> Option<PlanParams> {
    let mut params = PlanParams::default();
    for &class in classes {
        let output = differentiated_output(canvas, &view.id, class, &config.palette).ok()?;
        let mine = view.binding(class)?;
        let clashes = canvas.views.iter().filter(|o| o.id != view.id).any(|o| {
            let g = grouping_eq(view, o, &canvas.registry);
            g == TriState::Equal
                && o.binding(class).is_some_and(|theirs| {
                    mine.mapping.is_mapped()
                        && field_eq(&mine.mapping, &theirs.mapping, g, &canvas.registry) == TriState::Equal
                        && visual_eq(&output, &theirs.visual).unwrap_or(false)
                })
        });
        if clashes {
            return None;
        }
        params.classes.push(class);
        params.outputs.push(output);
    }
    Some(params)
}

fn drafts_for(
    canvas: &Canvas,
    relation: &RelationInstance,
    selected: &str,
    groups: &[Vec<String>],
    config: &Config,
) -> Vec<Draft> {
    let (a, b) = (&relation.view_ids.0, &relation.view_ids.1);
    let classes = relation.witness_classes();
    let mut out = Vec::new();
    match relation.kind {
        RelationKind::FullRedundancy => {
            for v in [a, b] {
                out.push(Draft {
                    kind: OperationKind::Delete,
                    targets: vec![v.clone()],
                    source: None,
                    params: PlanParams::default(),
                    description: format!("Delete `{v}`; `{}` already shows the same data", relation.other(v)),
                });
            }
        }
        RelationKind::PartialRedundancy => {
            let Some(subset) = relation.subset_view() else {
                return out;
            };
            let superset = relation.other(subset).to_string();
            out.push(Draft {
                kind: OperationKind::Delete,
                targets: vec![subset.to_string()],
                source: None,
                params: PlanParams::default(),
                description: format!("Delete `{subset}`; `{superset}` shows everything it shows"),
            });
            let extra: Vec<ChannelClass> = relation
                .witnesses
                .iter()
                .filter(|w| w.subset_view.is_some())
                .map(|w| w.channel_class)
                .collect();
            out.push(Draft {
                kind: OperationKind::IntegrateTransfer,
                targets: vec![subset.to_string()],
                source: Some(superset.clone()),
                description: format!(
                    "Move the {} mapping of `{superset}` into `{subset}` and delete `{superset}`",
                    classes_text(&extra)
                ),
                params: PlanParams {
                    classes: extra,
                    outputs: Vec::new(),
                },
            });
        }
        RelationKind::MultiplesSameGrouping => {
            if relation.domains_differ {
                out.push(Draft {
                    kind: OperationKind::HomogenizeData,
                    targets: vec![a.clone(), b.clone()],
                    source: None,
                    params: PlanParams {
                        classes: vec![ChannelClass::PositionY],
                        outputs: Vec::new(),
                    },
                    description: format!("Give `{a}` and `{b}` a shared y scale"),
                });
            }
            let (Some(va), Some(vb)) = (canvas.view(a), canvas.view(b)) else {
                return out;
            };
            if !integrable(va, vb, &canvas.registry) {
                return out;
            }
            let Some(group) = groups.iter().find(|g| g.contains(a) && g.contains(b)) else {
                return out;
            };
            let members: Vec<&View> = group.iter().filter_map(|id| canvas.view(id)).collect();
            for variant in IntegrationVariant::ALL {
                if variant.applicable_to(&members).is_err() {
                    continue;
                }
                out.push(Draft {
                    kind: match variant {
                        IntegrationVariant::Overlay => OperationKind::IntegrateOverlay,
                        IntegrationVariant::Group => OperationKind::IntegrateGroup,
                        IntegrationVariant::Stack => OperationKind::IntegrateStack,
                        IntegrationVariant::Mirror => OperationKind::IntegrateMirror,
                    },
                    targets: group.clone(),
                    source: None,
                    params: PlanParams::default(),
                    description: format!("Merge {} into one {variant} chart", quoted(group)),
                });
            }
        }
        RelationKind::MultiplesSameData => {
            out.push(Draft {
                kind: OperationKind::HomogenizeData,
                targets: vec![a.clone(), b.clone()],
                source: None,
                description: format!("Give `{a}` and `{b}` shared {} scales", classes_text(&classes)),
                params: PlanParams {
                    classes,
                    outputs: Vec::new(),
                },
            });
        }
        RelationKind::Hallucinator => {
            for (target, source) in [(a, b), (b, a)] {
                out.push(Draft {
                    kind: OperationKind::HomogenizeStyle,
                    targets: vec![target.clone()],
                    source: Some(source.clone()),
                    description: format!("Restyle {} of `{target}` to match `{source}`", classes_text(&classes)),
                    params: PlanParams {
                        classes: classes.clone(),
                        outputs: Vec::new(),
                    },
                });
            }
        }
        RelationKind::Confuser => {
            let partner = relation.other(selected).to_string();
            for side in [partner.as_str(), selected] {
                let Some(v) = canvas.view(side) else { continue };
                if let Some(params) = recolor(canvas, v, &classes, config) {
                    out.push(Draft {
                        kind: OperationKind::Differentiate,
                        targets: vec![side.to_string()],
                        source: None,
                        description: format!(
                            "Give `{side}` a {} encoding distinct from `{}`",
                            classes_text(&params.classes),
                            relation.other(side)
                        ),
                        params,
                    });
                    break;
                }
            }
        }
    }
    out
}

fn quoted(ids: &[String]) -> String {
    ids.iter().map(|id| format!("`{id}`")).collect::<Vec<_>>().join(", ")
}

fn sort_plans(plans: &mut Vec<OperationPlan>) {
    plans.sort_by(|x, y| {
        x.category()
            .cmp(&y.category())
            .then_with(|| x.target_view_ids.cmp(&y.target_view_ids))
            .then_with(|| x.kind.cmp(&y.kind))
            .then_with(|| x.source_view_id.cmp(&y.source_view_id))
            .then_with(|| x.resolves_relation_id.cmp(&y.resolves_relation_id))
    });
    // one plan per distinct rewrite; a merge reachable through several
    // multiples relations is offered once
    type Rewrite = (OperationKind, Vec<String>, Option<String>, Vec<ChannelClass>);
    let mut seen: BTreeSet<Rewrite> = BTreeSet::new();
    plans.retain(|p| {
        seen.insert((
            p.kind,
            p.target_view_ids.clone(),
            p.source_view_id.clone(),
            p.params.classes.clone(),
        ))
    });
}

/// Rewrites offered for the relations that involve `view_id`, ordered by
/// category then target views.
pub fn plan_operations(
    canvas: &Canvas,
    relations: &RelationSet,
    view_id: &str,
    config: &Config,
) -> Result<Vec<OperationPlan>, OperationError> {
    if canvas.view(view_id).is_none() {
        return Err(OperationError::UnknownView(view_id.to_string()));
    }
    let involved =
        relations_for_view(relations, view_id).map_err(|_| OperationError::UnknownView(view_id.to_string()))?;
    let groups = integration_groups(relations, canvas);
    let mut plans: Vec<OperationPlan> = involved
        .into_iter()
        .flat_map(|r| {
            drafts_for(canvas, r, view_id, &groups, config)
                .into_iter()
                .map(move |d| finish(d, r, relations))
        })
        .collect();
    sort_plans(&mut plans);
    Ok(plans)
}

/// Every plan offered from any view, deduplicated by id.
pub fn all_plans(canvas: &Canvas, relations: &RelationSet, config: &Config) -> Vec<OperationPlan> {
    let mut out: Vec<OperationPlan> = Vec::new();
    let mut ids = BTreeSet::new();
    for v in &canvas.views {
        for p in plan_operations(canvas, relations, &v.id, config).unwrap_or_default() {
            if ids.insert(p.id.clone()) {
                out.push(p);
            }
        }
    }
    out
}
