use std::collections::BTreeSet;

use proptest::prelude::*;
use semsnap_core::config::Config;
use semsnap_core::model::Canvas;
use semsnap_core::operations::{all_plans, semantic_position};
use semsnap_core::relations::find_relations;
use semsnap_core::spec_io::{parse_canvas, serialize_canvas};
use semsnap_testkit::gen::random_canvas;

fn summary(canvas: &Canvas) -> BTreeSet<(String, String, String)> {
    find_relations(canvas)
        .instances
        .iter()
        .map(|r| (r.kind.code().to_string(), r.view_ids.0.clone(), r.view_ids.1.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn view_order_does_not_matter(seed in any::<u64>()) {
        let canvas = random_canvas(seed);
        let mut reversed = canvas.clone();
        reversed.views.reverse();
        prop_assert_eq!(summary(&canvas), summary(&reversed));
    }

    #[test]
    fn relation_ids_are_unique(seed in any::<u64>()) {
        let rel = find_relations(&random_canvas(seed));
        let ids: BTreeSet<&str> = rel.instances.iter().map(|r| r.id.as_str()).collect();
        prop_assert_eq!(ids.len(), rel.len());
    }

    #[test]
    fn position_is_zero_only_without_relations(seed in any::<u64>()) {
        let rel = find_relations(&random_canvas(seed));
        let p = semantic_position(&rel, &Config::default().weights);
        prop_assert!(p.compactness <= 0.0 && p.consistency <= 0.0);
        prop_assert_eq!(rel.is_empty(), p.compactness == 0.0 && p.consistency == 0.0);
    }

    #[test]
    fn every_plan_targets_existing_views(seed in any::<u64>()) {
        let canvas = random_canvas(seed);
        let rel = find_relations(&canvas);
        for p in all_plans(&canvas, &rel, &Config::default()) {
            prop_assert!(p.target_view_ids.iter().all(|id| canvas.view(id).is_some()));
            prop_assert!(rel.contains(&p.resolves_relation_id));
        }
    }

    #[test]
    fn random_canvases_round_trip(seed in any::<u64>()) {
        let canvas = random_canvas(seed);
        let text = serialize_canvas(&canvas);
        let again = parse_canvas(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&serialize_canvas(&again), &text);
        prop_assert_eq!(summary(&canvas), summary(&again));
    }
}
