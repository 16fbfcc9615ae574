use semsnap_core::config::Config;
use semsnap_core::model::{ChannelClass, Composition, FieldRef};
use semsnap_core::operations::{
    all_plans, apply_operation, plan_operations, Answer, CanvasHistory, HistoryError, OperationError, OperationKind,
};
use semsnap_core::registry::Sameness;
use semsnap_core::relations::{find_relations, RelationKind};
use semsnap_testkit::load_fixture;

fn plan_of(name: &str, kind: OperationKind) -> (semsnap_core::model::Canvas, semsnap_core::operations::OperationPlan) {
    let canvas = load_fixture(name);
    let plan = all_plans(&canvas, &find_relations(&canvas), &Config::default())
        .into_iter()
        .find(|p| p.kind == kind)
        .unwrap_or_else(|| panic!("{name}: no {kind:?} plan"));
    (canvas, plan)
}

#[test]
fn plan_ids_are_deterministic() {
    let canvas = load_fixture("covid");
    let config = Config::default();
    let rel = find_relations(&canvas);
    let first: Vec<String> = all_plans(&canvas, &rel, &config).into_iter().map(|p| p.id).collect();
    let again: Vec<String> = all_plans(&canvas, &find_relations(&canvas), &config)
        .into_iter()
        .map(|p| p.id)
        .collect();
    assert_eq!(first, again);
    assert!(first
        .iter()
        .all(|id| id.len() == 12 && id.chars().all(|c| c.is_ascii_hexdigit())));
}

#[test]
fn merge_plans_match_from_either_view() {
    let canvas = load_fixture("nightingale");
    let config = Config::default();
    let rel = find_relations(&canvas);
    let merges = |view: &str| -> Vec<String> {
        plan_operations(&canvas, &rel, view, &config)
            .unwrap()
            .into_iter()
            .filter(|p| p.kind == OperationKind::IntegrateStack)
            .map(|p| p.id)
            .collect()
    };
    assert_eq!(merges("disease"), merges("other"));
    assert_eq!(merges("disease"), merges("wounds"));
}

#[test]
fn menu_for_unknown_view_is_an_error() {
    let canvas = load_fixture("election");
    let err = plan_operations(&canvas, &find_relations(&canvas), "nope", &Config::default()).unwrap_err();
    assert_eq!(err, OperationError::UnknownView("nope".into()));
}

#[test]
fn clean_canvas_offers_nothing() {
    let canvas = load_fixture("single");
    assert!(all_plans(&canvas, &find_relations(&canvas), &Config::default()).is_empty());
}

#[test]
fn applying_twice_is_stale() {
    let (canvas, plan) = plan_of("full_redundancy", OperationKind::Delete);
    let config = Config::default();
    let after = apply_operation(&canvas, &plan, &[], &config).unwrap();
    assert_eq!(after.views.len(), 1);
    assert!(matches!(
        apply_operation(&after, &plan, &[], &config),
        Err(OperationError::StalePlan(_))
    ));
}

#[test]
fn conditional_plan_needs_an_answer() {
    let (canvas, plan) = plan_of("sales", OperationKind::IntegrateGroup);
    assert_eq!(plan.required_confirmations.len(), 1);
    let err = apply_operation(&canvas, &plan, &[], &Config::default()).unwrap_err();
    let OperationError::MissingConfirmation { question } = err else {
        panic!("{err:?}")
    };
    assert_eq!(
        question,
        "Are sum(Europe) and sum(North America) representing the same quantity?"
    );
}

#[test]
fn answering_same_applies_and_records() {
    let (canvas, plan) = plan_of("sales", OperationKind::IntegrateGroup);
    let (a, b) = plan.required_confirmations[0].clone();
    let answers = [Answer {
        a: a.clone(),
        b: b.clone(),
        same: true,
    }];
    let after = apply_operation(&canvas, &plan, &answers, &Config::default()).unwrap();
    assert_eq!(after.views.len(), 1);
    assert_eq!(after.views[0].composition, Composition::Grouped);
    assert_eq!(after.registry.sameness(&a, &b), Sameness::Same);
}

#[test]
fn answering_different_withdraws_and_settles_the_question() {
    let (canvas, plan) = plan_of("sales", OperationKind::IntegrateGroup);
    let (a, b) = plan.required_confirmations[0].clone();
    let answers = [Answer { a, b, same: false }];
    let err = apply_operation(&canvas, &plan, &answers, &Config::default()).unwrap_err();
    let OperationError::ConfirmationDenied { registry } = err else {
        panic!("{err:?}")
    };
    let mut answered = canvas.clone();
    answered.registry = registry;
    let rel = find_relations(&answered);
    // the pair is now known to differ, so the multiples are no longer conditional
    let r3a = rel.of_kind(RelationKind::MultiplesSameGrouping).next().unwrap();
    assert!(!r3a.conditional);
}

#[test]
fn transfer_keeps_the_smaller_view() {
    let (canvas, plan) = plan_of("partial_redundancy", OperationKind::IntegrateTransfer);
    let after = apply_operation(&canvas, &plan, &[], &Config::default()).unwrap();
    assert_eq!(after.views.len(), 1);
    let kept = &after.views[0];
    assert_eq!(kept.id, "price_by_cyl");
    assert_eq!(
        kept.binding(ChannelClass::Color).and_then(|b| b.mapping.field()),
        Some(&FieldRef::raw("cylinders"))
    );
    assert!(find_relations(&after).is_empty());
}

#[test]
fn differentiate_picks_an_unused_color() {
    let (canvas, plan) = plan_of("confuser", OperationKind::Differentiate);
    let after = apply_operation(&canvas, &plan, &[], &Config::default()).unwrap();
    assert!(find_relations(&after).of_kind(RelationKind::Confuser).next().is_none());
    let target = after.view(&plan.target_view_ids[0]).unwrap();
    let other = after.views.iter().find(|v| v.id != target.id).unwrap();
    assert_ne!(
        target.binding(ChannelClass::Color).unwrap().visual,
        other.binding(ChannelClass::Color).unwrap().visual
    );
}

#[test]
fn restyle_copies_the_source_output() {
    let (canvas, plan) = plan_of("hallucinator", OperationKind::HomogenizeStyle);
    let after = apply_operation(&canvas, &plan, &[], &Config::default()).unwrap();
    let source = plan.source_view_id.as_deref().unwrap();
    let target = &plan.target_view_ids[0];
    assert_eq!(
        after.view(target).unwrap().binding(ChannelClass::Color).unwrap().visual,
        canvas
            .view(source)
            .unwrap()
            .binding(ChannelClass::Color)
            .unwrap()
            .visual
    );
    assert!(find_relations(&after)
        .of_kind(RelationKind::Hallucinator)
        .next()
        .is_none());
}

#[test]
fn shared_scale_covers_both_views() {
    let (canvas, plan) = plan_of("same_grouping", OperationKind::HomogenizeData);
    let after = apply_operation(&canvas, &plan, &[], &Config::default()).unwrap();
    let domains: Vec<_> = after
        .views
        .iter()
        .map(|v| v.binding(ChannelClass::PositionY).unwrap().domain.clone())
        .collect();
    assert_eq!(domains[0], domains[1]);
    let r3a = find_relations(&after)
        .of_kind(RelationKind::MultiplesSameGrouping)
        .next()
        .cloned()
        .unwrap();
    assert!(!r3a.domains_differ);
}

#[test]
fn mirror_rejects_three_views() {
    let canvas = load_fixture("nightingale");
    let rel = find_relations(&canvas);
    let mirrors: Vec<_> = all_plans(&canvas, &rel, &Config::default())
        .into_iter()
        .filter(|p| p.kind == OperationKind::IntegrateMirror)
        .collect();
    assert!(mirrors.iter().all(|p| p.target_view_ids.len() == 2));
}

#[test]
fn history_allows_one_pending_step() {
    let (canvas, plan) = plan_of("full_redundancy", OperationKind::Delete);
    let after = apply_operation(&canvas, &plan, &[], &Config::default()).unwrap();
    let history = CanvasHistory::new(canvas.clone());
    assert_eq!(history.undo().unwrap_err(), HistoryError::NothingPending);
    assert_eq!(history.keep().unwrap_err(), HistoryError::NothingPending);

    let pending = history.begin(plan.clone(), after.clone()).unwrap();
    assert_eq!(pending.current(), &after);
    assert_eq!(pending.last_committed(), &canvas);
    assert_eq!(
        pending.begin(plan.clone(), after.clone()).unwrap_err(),
        HistoryError::AlreadyPending
    );

    let (restored, undone) = pending.undo().unwrap();
    assert_eq!(restored, canvas);
    assert_eq!(undone.committed.len(), 1);

    let kept = pending.keep().unwrap();
    assert_eq!(kept.committed.len(), 2);
    assert_eq!(kept.current(), &after);
}
