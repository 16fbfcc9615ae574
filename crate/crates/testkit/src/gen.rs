//! Seeded random canvases over a small fixed dataset.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semsnap_core::config::Config;
use semsnap_core::data::{compute_domain, load_dataset, union_domain, Column, ColumnType, Dataset, DatasetSource};
use semsnap_core::model::{
    Aggregate, Canvas, Cell, ChannelBinding, ChannelClass, ChartType, ColorScheme, Composition, DataMapping, FieldRef,
    Rgb, SchemeKind, View, VisualOutput,
};
use semsnap_core::operations::{all_plans, apply_operation, Answer};
use semsnap_core::registry::EquivalenceRegistry;
use semsnap_core::relations::find_relations;

pub const MAX_VIEWS: usize = 5;
pub const MAX_CHANNELS: usize = 4;

const CATEGORICAL: [&str; 3] = ["region", "tier", "day"];

pub fn dataset() -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(0xda7a);
    let mut csv = String::from("region,tier,day,q1,q2,q3\n");
    for region in ["north", "south", "east"] {
        for tier in ["low", "mid", "high"] {
            for day in ["2024-01-01", "2024-01-02", "2024-01-03"] {
                let (a, b, c): (u32, u32, u32) = (rng.gen_range(0..100), rng.gen_range(0..100), rng.gen_range(0..100));
                csv.push_str(&format!("{region},{tier},{day},{a},{b},{c}\n"));
            }
        }
    }
    let mut tier = Column::new("tier", ColumnType::Ordinal);
    tier.order = Some(vec!["low".into(), "mid".into(), "high".into()]);
    let schema = vec![
        Column::new("region", ColumnType::Nominal),
        tier,
        Column::new("day", ColumnType::Temporal),
        Column::new("q1", ColumnType::Quantitative),
        Column::new("q2", ColumnType::Quantitative),
        Column::new("q3", ColumnType::Quantitative),
    ];
    load_dataset("random", &csv, &schema, DatasetSource::Inline(csv.clone())).expect("generated data is valid")
}

fn rgb(hex: &str) -> Rgb {
    Rgb::parse(hex).expect("valid color")
}

// few colors, so collisions are common
const CONSTANTS: [&str; 3] = ["#d62728", "#1f77b4", "#2ca02c"];
const CATEGORY_SETS: [[&str; 3]; 2] = [["#d62728", "#ff7f0e", "#9467bd"], ["#8c564b", "#e377c2", "#17becf"]];
const RAMPS: [(&str, &str); 2] = [("#c6dbef", "#1f77b4"), ("#fcbba1", "#a50f15")];

fn value_field(rng: &mut ChaCha8Rng) -> FieldRef {
    let pool = [
        FieldRef::new("q1", Aggregate::Sum),
        FieldRef::new("q1", Aggregate::Mean),
        FieldRef::new("q2", Aggregate::Sum),
        FieldRef::new("q3", Aggregate::Max),
        FieldRef::count(),
    ];
    pool.choose(rng).expect("non-empty").clone()
}

fn range(rng: &mut ChaCha8Rng, options: &[(f64, f64)]) -> (f64, f64) {
    *options.choose(rng).expect("non-empty")
}

fn color_scheme(rng: &mut ChaCha8Rng, ds: &Dataset, field: &FieldRef) -> VisualOutput {
    if field.aggregate == Aggregate::None
        && ds
            .column(&field.column)
            .is_some_and(|c| c.kind != ColumnType::Quantitative)
    {
        let set = CATEGORY_SETS.choose(rng).expect("non-empty");
        let keys = ds.distinct_keys(&field.column).expect("declared column");
        VisualOutput::ColorScheme(ColorScheme {
            scheme_id: format!("cat-{}", set[0]),
            kind: SchemeKind::Categorical,
            assignment: keys
                .into_iter()
                .zip(set.iter().cycle())
                .map(|(k, c)| (k, rgb(c)))
                .collect(),
        })
    } else {
        let (start, end) = RAMPS.choose(rng).expect("non-empty");
        VisualOutput::ColorScheme(ColorScheme {
            scheme_id: format!("ramp-{end}"),
            kind: SchemeKind::Continuous,
            assignment: vec![("start".into(), rgb(start)), ("end".into(), rgb(end))],
        })
    }
}

fn binding_for(rng: &mut ChaCha8Rng, ds: &Dataset, raw: &str, class: ChannelClass, grouping: &str) -> ChannelBinding {
    let other_cat = || {
        CATEGORICAL
            .iter()
            .find(|c| **c != grouping)
            .copied()
            .unwrap_or(grouping)
    };
    let (mapping, visual) = match class {
        ChannelClass::PositionX => {
            let roll: f64 = rng.gen();
            let mapping = if roll < 0.5 {
                DataMapping::Mapped(FieldRef::raw(grouping))
            } else if roll < 0.65 {
                DataMapping::Mapped(FieldRef::raw(other_cat()))
            } else if roll < 0.85 {
                DataMapping::Mapped(value_field(rng))
            } else {
                DataMapping::Empty
            };
            let (min, max) = range(rng, &[(0.0, 400.0), (0.0, 300.0)]);
            (mapping, VisualOutput::PositionRange { min, max })
        }
        ChannelClass::PositionY | ChannelClass::Angle => {
            let mapping = if rng.gen_bool(0.9) {
                DataMapping::Mapped(value_field(rng))
            } else {
                DataMapping::Empty
            };
            let (min, max) = if class == ChannelClass::Angle {
                (0.0, 360.0)
            } else {
                range(rng, &[(0.0, 300.0), (0.0, 200.0)])
            };
            (mapping, VisualOutput::PositionRange { min, max })
        }
        ChannelClass::Color => {
            if rng.gen_bool(0.55) {
                let c = CONSTANTS.choose(rng).expect("non-empty");
                (DataMapping::Empty, VisualOutput::ConstantColor(rgb(c)))
            } else {
                let field = match rng.gen_range(0..3) {
                    0 => FieldRef::raw(grouping),
                    1 => FieldRef::raw(other_cat()),
                    _ => value_field(rng),
                };
                let visual = color_scheme(rng, ds, &field);
                (DataMapping::Mapped(field), visual)
            }
        }
        ChannelClass::Size => {
            let mapping = if rng.gen_bool(0.6) {
                DataMapping::Mapped(value_field(rng))
            } else {
                DataMapping::Empty
            };
            let (min, max) = range(rng, &[(1.0, 10.0), (2.0, 20.0)]);
            (mapping, VisualOutput::SizeRange { min, max })
        }
    };
    ChannelBinding {
        raw_channel: raw.to_string(),
        class,
        mapping,
        domain: None,
        visual,
    }
}

fn random_view(rng: &mut ChaCha8Rng, ds: &Dataset, index: usize) -> View {
    let chart = *ChartType::ALL.choose(rng).expect("non-empty");
    let grouping = CATEGORICAL.choose(rng).expect("non-empty").to_string();
    let mut channels: Vec<(&str, ChannelClass)> = chart.channels().to_vec();
    channels.shuffle(rng);
    let take = rng.gen_range(1..=channels.len().min(MAX_CHANNELS));
    let mut bindings = BTreeMap::new();
    for (raw, class) in channels.into_iter().take(take) {
        bindings.insert(class, binding_for(rng, ds, raw, class, &grouping));
    }
    let mut view = View {
        id: format!("v{index}"),
        chart_type: chart,
        grouping,
        composition: Composition::Single,
        series: Vec::new(),
        bindings,
        cell: Cell::at(index as u32 / 2, index as u32 % 2),
    };
    let snapshot = view.clone();
    for b in view.bindings.values_mut() {
        if b.mapping.is_mapped() {
            b.domain = Some(compute_domain(ds, &snapshot, b).expect("generated mappings aggregate cleanly"));
        }
    }
    view
}

/// Gives every PositionY binding that shows the same field one shared domain.
fn share_domains(views: &mut [View]) {
    let mut shared: BTreeMap<String, semsnap_core::model::DataDomain> = BTreeMap::new();
    for v in views.iter() {
        if let Some(b) = v.binding(ChannelClass::PositionY) {
            if let (Some(f), Some(d)) = (b.mapping.field(), &b.domain) {
                let key = f.canonical();
                let merged = match shared.get(&key) {
                    Some(prev) => union_domain(prev, d).expect("same field, same domain kind"),
                    None => d.clone(),
                };
                shared.insert(key, merged);
            }
        }
    }
    for v in views.iter_mut() {
        if let Some(b) = v.binding_mut(ChannelClass::PositionY) {
            if let Some(f) = b.mapping.field() {
                b.domain = shared.get(&f.canonical()).cloned();
            }
        }
    }
}

fn random_registry(rng: &mut ChaCha8Rng, views: &[View]) -> EquivalenceRegistry {
    let mut keys: Vec<String> = views
        .iter()
        .flat_map(|v| v.bindings.values())
        .filter_map(|b| b.mapping.field().map(FieldRef::canonical))
        .chain(CATEGORICAL.iter().map(|c| c.to_string()))
        .collect();
    keys.sort();
    keys.dedup();
    let mut registry = EquivalenceRegistry::default();
    for _ in 0..rng.gen_range(0..=4) {
        let (Some(a), Some(b)) = (keys.choose(rng), keys.choose(rng)) else {
            break;
        };
        if a == b {
            continue;
        }
        if let Ok(next) = registry.record_keys(a, b, rng.gen_bool(0.5)) {
            registry = next;
        }
    }
    registry
}

pub fn random_canvas(seed: u64) -> Canvas {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ds = dataset();
    let n = rng.gen_range(2..=MAX_VIEWS);
    let mut views: Vec<View> = (0..n).map(|i| random_view(&mut rng, &ds, i)).collect();
    if rng.gen_bool(0.3) {
        share_domains(&mut views);
    }
    let registry = random_registry(&mut rng, &views);
    Canvas::new(Arc::new(ds), views, registry)
}

/// Answers every required confirmation with "same".
pub fn agree_all(plan: &semsnap_core::operations::OperationPlan) -> Vec<Answer> {
    plan.required_confirmations
        .iter()
        .map(|(a, b)| Answer {
            a: a.clone(),
            b: b.clone(),
            same: true,
        })
        .collect()
}

/// Random canvases plus the canvases reached from them by up to `steps`
/// randomly chosen operations, so integrated views are covered too.
pub fn corpus(count: usize, steps: usize) -> Vec<Canvas> {
    let config = Config::default();
    let mut out = Vec::new();
    for seed in 0..count as u64 {
        let mut canvas = random_canvas(seed);
        out.push(canvas.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..steps {
            let plans = all_plans(&canvas, &find_relations(&canvas), &config);
            let Some(plan) = plans.choose(&mut rng) else { break };
            match apply_operation(&canvas, plan, &agree_all(plan), &config) {
                Ok(next) => {
                    canvas = next;
                    out.push(canvas.clone());
                }
                Err(_) => break,
            }
        }
    }
    out
}
