use std::collections::BTreeMap;

use semsnap_core::config::Config;
use semsnap_core::model::DataDomain;
use semsnap_core::operations::{all_plans, apply_operation, OperationKind};
use semsnap_core::relations::find_relations;
use semsnap_core::render::{render_canvas, render_view, MarkType, RenderError, XValue};
use semsnap_testkit::acceptance::FIXTURES;
use semsnap_testkit::load_fixture;

fn key(x: &XValue) -> String {
    match x {
        XValue::Number(n) => n.to_string(),
        XValue::Category(c) => c.clone(),
    }
}

fn merged(name: &str, kind: OperationKind, targets: &[&str]) -> semsnap_core::model::Canvas {
    let canvas = load_fixture(name);
    let plan = all_plans(&canvas, &find_relations(&canvas), &Config::default())
        .into_iter()
        .find(|p| {
            p.kind == kind
                && p.target_view_ids.len() == targets.len()
                && targets.iter().all(|t| p.target_view_ids.iter().any(|id| id == t))
        })
        .unwrap();
    apply_operation(&canvas, &plan, &[], &Config::default()).unwrap()
}

#[test]
fn every_fixture_renders() {
    for name in FIXTURES {
        let canvas = load_fixture(name);
        let specs = render_canvas(&canvas).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(specs.len(), canvas.views.len());
        let cells: Vec<_> = specs.iter().map(|s| (s.cell.row, s.cell.col)).collect();
        let mut sorted = cells.clone();
        sorted.sort();
        assert_eq!(cells, sorted, "{name}");
        for s in &specs {
            assert!(!s.spec.series_marks.is_empty(), "{name}/{}", s.spec.view_id);
        }
    }
}

#[test]
fn unknown_view() {
    let canvas = load_fixture("single");
    assert_eq!(
        render_view(&canvas, "ghost"),
        Err(RenderError::UnknownView("ghost".into()))
    );
}

#[test]
fn stacked_bars_add_up() {
    let before = load_fixture("nightingale");
    let members = ["disease", "wounds", "other"];
    let mut totals: BTreeMap<String, f64> = BTreeMap::new();
    for id in members {
        for p in &render_view(&before, id).unwrap().series_marks[0].points {
            *totals.entry(key(&p.x)).or_default() += p.y;
        }
    }
    let after = merged("nightingale", OperationKind::IntegrateStack, &members);
    let spec = render_view(&after, "disease").unwrap();
    assert_eq!(spec.series_marks.len(), 3);
    assert!(spec.series_marks[0].points.iter().all(|p| p.y0 == Some(0.0)));
    let top = spec.series_marks.last().unwrap();
    for p in &top.points {
        let want = totals[&key(&p.x)];
        assert!((p.y - want).abs() < 1e-9, "{}: {} vs {want}", key(&p.x), p.y);
    }
    let DataDomain::Quantitative { max, .. } = spec.axes.y.domain else {
        panic!()
    };
    let peak = totals.values().cloned().fold(0.0, f64::max);
    assert!(max >= peak);
}

#[test]
fn mirrored_lines_keep_both_series() {
    let after = merged("election", OperationKind::IntegrateMirror, &["clinton", "trump"]);
    let spec = render_view(&after, "clinton").unwrap();
    assert!(spec.mirror);
    assert_eq!(spec.mark_type, MarkType::Line);
    let legend = spec.legend.unwrap();
    assert_eq!(legend.len(), 2);
    assert_ne!(legend[0].1, legend[1].1);
    assert!(spec
        .series_marks
        .iter()
        .all(|m| m.points.iter().all(|p| p.y0.is_none())));
}

#[test]
fn pies_use_arcs() {
    let canvas = load_fixture("covid");
    let spec = render_view(&canvas, "cases_by_gender").unwrap();
    assert_eq!(spec.mark_type, MarkType::Arc);
    let legend = spec.legend.expect("categorical fill");
    let points = &spec.series_marks[0].points;
    assert!(points.iter().all(|p| p.y >= 0.0));
    for p in points {
        let XValue::Category(k) = &p.x else { panic!() };
        let expected = legend.iter().find(|(key, _)| key == k).map(|(_, c)| c.clone());
        assert_eq!(p.color, expected);
    }
}

#[test]
fn specs_serialize_camel_case() {
    let canvas = load_fixture("same_grouping");
    let spec = render_view(&canvas, "price_by_cyl").unwrap();
    let json = serde_json::to_value(&spec).unwrap();
    assert_eq!(json["viewId"], "price_by_cyl");
    assert_eq!(json["markType"], "bar");
    assert!(json["seriesMarks"].is_array());
}
