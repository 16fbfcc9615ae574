//! Whole-system checks shared by the per-crate test suites and the
//! acceptance runner. Each check returns a one-line summary on success and
//! a description of the first counterexample on failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use semsnap_core::config::Config;
use semsnap_core::model::{Canvas, ChannelClass, Composition, DataDomain};
use semsnap_core::operations::{
    all_plans, apply_operation, semantic_position, CanvasHistory, OperationKind, OperationPlan,
};
use semsnap_core::relations::{find_relations, is_hallucinator, PairContext, RelationKind, RelationSet};
use semsnap_core::spec_io::{parse_canvas_in, serialize_canvas};

use crate::gen::{agree_all, corpus};
use crate::oracle::brute_force;
use crate::{fixture_text, fixtures_dir, listing, load_fixture};

pub type Outcome = Result<String, String>;

/// Every canvas fixture, by stem.
pub const FIXTURES: [&str; 11] = [
    "election",
    "nightingale",
    "covid",
    "sales",
    "single",
    "full_redundancy",
    "partial_redundancy",
    "same_grouping",
    "same_data",
    "hallucinator",
    "confuser",
];

/// Random canvases plus up to two random operations applied to each.
pub fn standard_corpus() -> Vec<Canvas> {
    corpus(200, 2)
}

fn within(label: &str, started: Instant, limit: Duration) -> Result<Duration, String> {
    let took = started.elapsed();
    if took > limit {
        Err(format!("{label} took {took:?}, limit {limit:?}"))
    } else {
        Ok(took)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Case {
    fixture: &'static str,
    kind: RelationKind,
    class: ChannelClass,
    plans: &'static [OperationKind],
    /// Relations that necessarily accompany the fixture's relation.
    companions: &'static [RelationKind],
}

const CASES: [Case; 6] = [
    Case {
        fixture: "full_redundancy",
        kind: RelationKind::FullRedundancy,
        class: ChannelClass::PositionY,
        plans: &[OperationKind::Delete],
        companions: &[],
    },
    Case {
        fixture: "partial_redundancy",
        kind: RelationKind::PartialRedundancy,
        class: ChannelClass::Color,
        plans: &[OperationKind::Delete, OperationKind::IntegrateTransfer],
        companions: &[],
    },
    Case {
        fixture: "same_grouping",
        kind: RelationKind::MultiplesSameGrouping,
        class: ChannelClass::PositionY,
        plans: &[
            OperationKind::HomogenizeData,
            OperationKind::IntegrateGroup,
            OperationKind::IntegrateStack,
            OperationKind::IntegrateMirror,
        ],
        companions: &[],
    },
    Case {
        fixture: "same_data",
        kind: RelationKind::MultiplesSameData,
        class: ChannelClass::PositionY,
        plans: &[OperationKind::HomogenizeData],
        companions: &[],
    },
    Case {
        fixture: "hallucinator",
        kind: RelationKind::Hallucinator,
        class: ChannelClass::Color,
        plans: &[OperationKind::HomogenizeStyle],
        // equal data under equal grouping is always redundant as well
        companions: &[RelationKind::FullRedundancy],
    },
    Case {
        fixture: "confuser",
        kind: RelationKind::Confuser,
        class: ChannelClass::Color,
        plans: &[OperationKind::Differentiate],
        companions: &[],
    },
];

fn check_case(case: &Case, config: &Config) -> Result<(), String> {
    let canvas = load_fixture(case.fixture);
    let relations = find_relations(&canvas);
    let kinds: BTreeSet<RelationKind> = relations.instances.iter().map(|r| r.kind).collect();
    let mut expected: BTreeSet<RelationKind> = case.companions.iter().copied().collect();
    expected.insert(case.kind);
    ensure(kinds == expected, || {
        format!("{}: found {kinds:?}, expected {expected:?}", case.fixture)
    })?;
    let hits: Vec<_> = relations.of_kind(case.kind).collect();
    ensure(hits.len() == 1, || {
        format!("{}: {} {:?} instances", case.fixture, hits.len(), case.kind)
    })?;
    let rel = hits[0];
    ensure(rel.witness_classes().contains(&case.class), || {
        format!(
            "{}: witnesses {:?}, expected {}",
            case.fixture,
            rel.witness_classes(),
            case.class
        )
    })?;
    let offered: BTreeSet<OperationKind> = all_plans(&canvas, &relations, config)
        .into_iter()
        .filter(|p| p.resolves_relation_id == rel.id)
        .map(|p| p.kind)
        .collect();
    let wanted: BTreeSet<OperationKind> = case.plans.iter().copied().collect();
    ensure(offered == wanted, || {
        format!("{}: offered {offered:?}, expected {wanted:?}", case.fixture)
    })
}

/// One fixture per relation case, each detected with its witness channel and
/// offered its operations.
pub fn relation_fixtures() -> Outcome {
    let started = Instant::now();
    let config = Config::default();
    for case in &CASES {
        check_case(case, &config)?;
    }
    let took = within("six fixtures", started, Duration::from_secs(1))?;
    Ok(format!("6 fixtures in {took:?}"))
}

fn detected(canvas: &Canvas) -> Vec<crate::oracle::Expected> {
    let mut got: Vec<_> = find_relations(canvas)
        .instances
        .iter()
        .map(|r| {
            (
                r.kind.code().to_string(),
                r.view_ids.0.clone(),
                r.view_ids.1.clone(),
                r.witness_classes(),
                r.conditional,
            )
        })
        .collect();
    got.sort();
    got
}

/// The engine and the brute-force evaluator agree on every canvas.
pub fn oracle_equivalence(canvases: &[Canvas]) -> Outcome {
    let started = Instant::now();
    let mut relations = 0;
    for (i, canvas) in canvases.iter().enumerate() {
        let (got, want) = (detected(canvas), brute_force(canvas));
        ensure(got == want, || format!("canvas #{i}: engine {got:?}, oracle {want:?}"))?;
        relations += got.len();
    }
    let took = within("oracle comparison", started, Duration::from_secs(60))?;
    Ok(format!(
        "{} canvases, {relations} relations, in {took:?}",
        canvases.len()
    ))
}

/// Records "same" for every required pair; `None` when those answers
/// contradict the stored confirmations.
fn agreed_canvas(canvas: &Canvas, plan: &OperationPlan) -> Option<Canvas> {
    let mut next = canvas.clone();
    for a in agree_all(plan) {
        next.registry = next.registry.record(&a.a, &a.b, a.same).ok()?;
    }
    Some(next)
}

/// A multiples relation counts as resolved by scale sharing once its scales
/// agree; the views legitimately stay small multiples.
fn resolved(plan: &OperationPlan, after: &RelationSet) -> bool {
    match after.get(&plan.resolves_relation_id) {
        None => true,
        Some(r) => {
            plan.kind == OperationKind::HomogenizeData
                && r.kind == RelationKind::MultiplesSameGrouping
                && !r.domains_differ
        }
    }
}

struct Applied {
    plan: OperationPlan,
    before: Canvas,
    after: Canvas,
}

/// Every plan of every canvas, applied with "same" answers. Plans whose
/// answers contradict stored confirmations are counted separately.
fn apply_all(canvases: &[Canvas], config: &Config) -> Result<(Vec<Applied>, usize), String> {
    let mut out = Vec::new();
    let mut contradictory = 0;
    for (i, canvas) in canvases.iter().enumerate() {
        for plan in all_plans(canvas, &find_relations(canvas), config) {
            let Some(before) = agreed_canvas(canvas, &plan) else {
                contradictory += 1;
                continue;
            };
            let after = apply_operation(canvas, &plan, &agree_all(&plan), config)
                .map_err(|e| format!("canvas #{i}: {} failed: {e}", plan.description))?;
            out.push(Applied { plan, before, after });
        }
    }
    Ok((out, contradictory))
}

/// Applying any offered plan removes the relation it targets.
pub fn closure(canvases: &[Canvas]) -> Outcome {
    let started = Instant::now();
    let config = Config::default();
    let (applied, contradictory) = apply_all(canvases, &config)?;
    for a in &applied {
        let after = find_relations(&a.after);
        ensure(resolved(&a.plan, &after), || {
            format!("`{}` left {} in place", a.plan.description, a.plan.resolves_relation_id)
        })?;
    }
    let took = within("closure", started, Duration::from_secs(120))?;
    Ok(format!(
        "{} plans applied, {contradictory} skipped for contradictory answers, in {took:?}",
        applied.len()
    ))
}

/// Consistency operations never lower consistency; the others never lower
/// compactness.
pub fn monotonicity(canvases: &[Canvas]) -> Outcome {
    let config = Config::default();
    let (applied, _) = apply_all(canvases, &config)?;
    for a in &applied {
        let before = semantic_position(&find_relations(&a.before), &config.weights);
        let after = semantic_position(&find_relations(&a.after), &config.weights);
        let (label, from, to) = if a.plan.category().improves_consistency() {
            ("consistency", before.consistency, after.consistency)
        } else {
            ("compactness", before.compactness, after.compactness)
        };
        ensure(to >= from - 1e-9, || {
            format!("`{}` lowered {label} from {from} to {to}", a.plan.description)
        })?;
    }
    Ok(format!("{} plans checked", applied.len()))
}

/// Scripted walk state: a history plus the kept snapshots.
pub struct Walk {
    pub name: &'static str,
    pub history: CanvasHistory,
    config: Config,
}

impl Walk {
    pub fn start(name: &'static str) -> Self {
        Self {
            name,
            history: CanvasHistory::new(load_fixture(name)),
            config: Config::default(),
        }
    }

    pub fn canvas(&self) -> &Canvas {
        self.history.current()
    }

    pub fn relations(&self) -> RelationSet {
        find_relations(self.canvas())
    }

    pub fn has(&self, kind: RelationKind, a: &str, b: &str) -> bool {
        self.relations().between(a, b).any(|r| r.kind == kind)
    }

    /// The plan of `kind` whose targets are exactly `targets`, in any order.
    pub fn plan(&self, kind: OperationKind, targets: &[&str]) -> Result<OperationPlan, String> {
        let want: BTreeSet<&str> = targets.iter().copied().collect();
        all_plans(self.canvas(), &self.relations(), &self.config)
            .into_iter()
            .find(|p| p.kind == kind && p.target_view_ids.iter().map(String::as_str).collect::<BTreeSet<_>>() == want)
            .ok_or_else(|| format!("{}: no {kind:?} plan for {targets:?}", self.name))
    }

    /// Applies a plan as a pending preview and checks it removed its relation.
    pub fn apply(&mut self, plan: &OperationPlan) -> Result<(), String> {
        let after = apply_operation(self.canvas(), plan, &agree_all(plan), &self.config)
            .map_err(|e| format!("{}: `{}` failed: {e}", self.name, plan.description))?;
        ensure(resolved(plan, &find_relations(&after)), || {
            format!("{}: `{}` left its relation in place", self.name, plan.description)
        })?;
        self.history = self.history.begin(plan.clone(), after).map_err(|e| e.to_string())?;
        Ok(())
    }

    pub fn keep(&mut self) -> Result<(), String> {
        self.history = self.history.keep().map_err(|e| e.to_string())?;
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), String> {
        self.history = self.history.undo().map_err(|e| e.to_string())?.1;
        Ok(())
    }

    pub fn apply_and_keep(&mut self, kind: OperationKind, targets: &[&str]) -> Result<(), String> {
        let plan = self.plan(kind, targets)?;
        self.apply(&plan)?;
        self.keep()
    }

    pub fn view_count(&self) -> usize {
        self.canvas().views.len()
    }

    fn finish(&self, expected_views: usize, started: Instant) -> Outcome {
        ensure(self.view_count() == expected_views, || {
            format!(
                "{}: ended with {} views, expected {expected_views}",
                self.name,
                self.view_count()
            )
        })?;
        let took = within(self.name, started, Duration::from_secs(5))?;
        Ok(format!(
            "{}: {} views after {} kept steps, {took:?}",
            self.name,
            self.view_count(),
            self.history.committed.len() - 1
        ))
    }
}

/// Two polling lines and a scatter of pollsters.
pub fn election_walk() -> Outcome {
    let started = Instant::now();
    let mut w = Walk::start("election");
    ensure(w.has(RelationKind::Confuser, "pollsters", "trump"), || {
        "election: no confuser".into()
    })?;
    w.apply_and_keep(OperationKind::Differentiate, &["pollsters"])?;
    ensure(!w.has(RelationKind::Confuser, "pollsters", "trump"), || {
        "election: confuser survived".into()
    })?;

    ensure(w.has(RelationKind::MultiplesSameGrouping, "clinton", "trump"), || {
        "election: no multiples".into()
    })?;
    let overlay = w.plan(OperationKind::IntegrateOverlay, &["clinton", "trump"])?;
    w.apply(&overlay)?;
    ensure(w.view_count() == 2, || "election: overlay did not merge".into())?;
    w.undo()?;
    ensure(w.view_count() == 3, || {
        "election: undo did not restore the views".into()
    })?;
    w.apply_and_keep(OperationKind::IntegrateMirror, &["clinton", "trump"])?;
    let mirrored = w
        .canvas()
        .views
        .iter()
        .filter(|v| v.composition == Composition::Mirrored)
        .count();
    ensure(mirrored == 1, || "election: no mirrored view".into())?;
    ensure(w.relations().is_empty(), || {
        format!("election: left {:?}", w.relations().instances)
    })?;
    w.finish(2, started)
}

fn contains_all(outer: &DataDomain, inner: &DataDomain) -> bool {
    match (outer, inner) {
        (DataDomain::Quantitative { min: a, max: b }, DataDomain::Quantitative { min: c, max: d }) => a <= c && d <= b,
        (DataDomain::Categorical { values: a }, DataDomain::Categorical { values: b }) => {
            b.iter().all(|v| a.contains(v))
        }
        _ => false,
    }
}

/// Monthly deaths by cause, as two areas and three bars.
pub fn nightingale_walk() -> Outcome {
    let started = Instant::now();
    let mut w = Walk::start("nightingale");
    w.apply_and_keep(OperationKind::IntegrateMirror, &["deaths", "army"])?;

    let members = ["disease", "wounds", "other"];
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            ensure(w.has(RelationKind::MultiplesSameGrouping, a, b), || {
                format!("nightingale: {a}/{b} not related")
            })?;
        }
    }
    let old: Vec<DataDomain> = members
        .iter()
        .filter_map(|id| w.canvas().view(id))
        .filter_map(|v| v.binding(ChannelClass::PositionY).and_then(|b| b.domain.clone()))
        .collect();
    w.apply_and_keep(OperationKind::IntegrateStack, &members)?;
    let stacked = w
        .canvas()
        .views
        .iter()
        .find(|v| v.composition == Composition::Stacked)
        .ok_or("nightingale: no stacked view")?;
    let domain = stacked
        .binding(ChannelClass::PositionY)
        .and_then(|b| b.domain.as_ref())
        .ok_or("nightingale: stacked view has no y domain")?;
    ensure(old.iter().all(|d| contains_all(domain, d)), || {
        "nightingale: stacked scale misses a member".into()
    })?;
    // the mirrored areas and the stacked bars stay small multiples of each
    // other; no multiples remain inside either merged group
    let left: Vec<(String, String)> = w
        .relations()
        .of_kind(RelationKind::MultiplesSameGrouping)
        .map(|r| r.view_ids.clone())
        .collect();
    let across = |(a, b): &(String, String)| {
        let mirrored = |id: &str| {
            w.canvas()
                .view(id)
                .is_some_and(|v| v.composition == Composition::Mirrored)
        };
        mirrored(a) != mirrored(b)
    };
    ensure(left.iter().all(across), || {
        format!("nightingale: multiples left {left:?}")
    })?;
    w.finish(2, started)
}

/// Six views of case and death counts.
pub fn covid_walk() -> Outcome {
    let started = Instant::now();
    let mut w = Walk::start("covid");
    ensure(
        w.has(RelationKind::Confuser, "cases_over_time", "deaths_by_gender"),
        || "covid: no confuser".into(),
    )?;
    w.apply_and_keep(OperationKind::Differentiate, &["deaths_by_gender"])?;
    ensure(w.relations().of_kind(RelationKind::Confuser).next().is_none(), || {
        "covid: confuser survived".into()
    })?;

    for (target, source) in [
        ("cases_over_time", "cases_by_age"),
        ("deaths_over_time", "cases_by_age"),
        ("deaths_by_gender", "cases_by_gender"),
    ] {
        let plan = all_plans(w.canvas(), &w.relations(), &w.config)
            .into_iter()
            .find(|p| {
                p.kind == OperationKind::HomogenizeStyle
                    && p.target_view_ids == [target]
                    && p.source_view_id.as_deref() == Some(source)
            })
            .ok_or_else(|| format!("covid: no restyle of {target} after {source}"))?;
        w.apply(&plan)?;
        w.keep()?;
    }
    ensure(
        w.relations().of_kind(RelationKind::Hallucinator).next().is_none(),
        || {
            format!(
                "covid: hallucinators left {:?}",
                w.relations()
                    .of_kind(RelationKind::Hallucinator)
                    .map(|r| &r.id)
                    .collect::<Vec<_>>()
            )
        },
    )?;
    ensure(w.relations().of_kind(RelationKind::Confuser).next().is_none(), || {
        "covid: restyling made a confuser".into()
    })?;

    w.apply_and_keep(OperationKind::IntegrateGroup, &["cases_by_age", "deaths_by_age"])?;
    w.apply_and_keep(OperationKind::IntegrateMirror, &["cases_over_time", "deaths_over_time"])?;
    let integrated = w.canvas().views.iter().filter(|v| v.is_integrated()).count();
    ensure(integrated == 2, || format!("covid: {integrated} integrated views"))?;
    w.finish(4, started)
}

/// The engine's hallucinator predicate against a literal transcription.
pub fn hallucinator_listing(canvases: &[Canvas]) -> Outcome {
    let mut pairs = 0;
    let fixtures: Vec<Canvas> = FIXTURES.iter().map(|f| load_fixture(f)).collect();
    for canvas in fixtures.iter().chain(canvases) {
        for a in &canvas.views {
            for b in &canvas.views {
                if a.id == b.id {
                    continue;
                }
                let engine = is_hallucinator(&PairContext::new(a, b, &canvas.registry)).is_some();
                let reference = listing::is_hallucinator(a, b, canvas);
                ensure(engine == reference, || {
                    format!("{}/{}: engine {engine}, transcription {reference}", a.id, b.id)
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered view pairs agree"))
}

/// Parse, write, parse gives the same canvas, and writing is byte-stable.
pub fn round_trip() -> Outcome {
    let base = fixtures_dir();
    for name in FIXTURES {
        let text = fixture_text(&format!("{name}.canvas.json"));
        let first = parse_canvas_in(&text, &base).map_err(|e| format!("{name}: {e}"))?;
        let written = serialize_canvas(&first);
        let second = parse_canvas_in(&written, &base).map_err(|e| format!("{name} reparse: {e}"))?;
        ensure(first == second, || {
            format!("{name}: canvas changed across a round trip")
        })?;
        let rewritten = serialize_canvas(&second);
        ensure(written == rewritten, || {
            format!("{name}: serialization is not byte-stable")
        })?;
    }
    Ok(format!("{} fixtures", FIXTURES.len()))
}
