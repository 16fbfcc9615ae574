//! Pairwise relation detection over all views of a canvas.
//!
//! Every unordered view pair is checked against six predicates. On the
//! redundancy axis at most one of full redundancy, partial redundancy and
//! same-grouping multiples is reported per pair (strongest first); the
//! consistency-axis relations are evaluated independently.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    data_eq, field_eq, grouping_eq, tuples_of, visual_eq, Canvas, ChannelClass, DataMapping, FieldRef, GcdvTuple,
    TriState, View,
};
use crate::registry::EquivalenceRegistry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("unknown view `{0}`")]
    UnknownView(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    FullRedundancy,
    PartialRedundancy,
    MultiplesSameGrouping,
    MultiplesSameData,
    Hallucinator,
    Confuser,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Redundancy,
    Consistency,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::FullRedundancy,
        RelationKind::PartialRedundancy,
        RelationKind::MultiplesSameGrouping,
        RelationKind::MultiplesSameData,
        RelationKind::Hallucinator,
        RelationKind::Confuser,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RelationKind::FullRedundancy => "R1",
            RelationKind::PartialRedundancy => "R2",
            RelationKind::MultiplesSameGrouping => "R3a",
            RelationKind::MultiplesSameData => "R3b",
            RelationKind::Hallucinator => "R4",
            RelationKind::Confuser => "R5",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::FullRedundancy => "full redundancy",
            RelationKind::PartialRedundancy => "partial redundancy",
            RelationKind::MultiplesSameGrouping => "multiples (same grouping)",
            RelationKind::MultiplesSameData => "multiples (same data)",
            RelationKind::Hallucinator => "hallucinator",
            RelationKind::Confuser => "confuser",
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            RelationKind::FullRedundancy | RelationKind::PartialRedundancy | RelationKind::MultiplesSameGrouping => {
                Axis::Redundancy
            }
            _ => Axis::Consistency,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A pair of tuples (one per view) that satisfies a relation predicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub channel_class: ChannelClass,
    pub tuple_a: GcdvTuple,
    pub tuple_b: GcdvTuple,
    pub pending_confirmations: Vec<(FieldRef, FieldRef)>,
    /// Partial redundancy only: the view whose side of the pair is unmapped.
    pub subset_view: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationInstance {
    pub id: String,
    pub kind: RelationKind,
    pub view_ids: (String, String),
    pub witnesses: Vec<Witness>,
    pub conditional: bool,
    /// Same-grouping multiples only: the two PositionY domains differ.
    pub domains_differ: bool,
}

impl RelationInstance {
    pub fn involves(&self, view_id: &str) -> bool {
        self.view_ids.0 == view_id || self.view_ids.1 == view_id
    }

    pub fn other(&self, view_id: &str) -> &str {
        if self.view_ids.0 == view_id {
            &self.view_ids.1
        } else {
            &self.view_ids.0
        }
    }

    pub fn witness_classes(&self) -> Vec<ChannelClass> {
        let mut classes: Vec<ChannelClass> = self.witnesses.iter().map(|w| w.channel_class).collect();
        classes.sort();
        classes.dedup();
        classes
    }

    pub fn pending_confirmations(&self) -> Vec<(FieldRef, FieldRef)> {
        let mut out: Vec<(FieldRef, FieldRef)> = Vec::new();
        for w in &self.witnesses {
            for p in &w.pending_confirmations {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    /// The view whose data is contained in the other (partial redundancy).
    pub fn subset_view(&self) -> Option<&str> {
        self.witnesses.iter().find_map(|w| w.subset_view.as_deref())
    }
}

pub fn relation_id(kind: RelationKind, a: &str, b: &str) -> String {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    format!("{}:{}:{}", kind.code(), lo, hi)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RelationSet {
    pub instances: Vec<RelationInstance>,
    pub by_view: BTreeMap<String, Vec<String>>,
    canvas_views: Vec<String>,
}

impl RelationSet {
    pub fn get(&self, id: &str) -> Option<&RelationInstance> {
        self.instances.iter().find(|r| r.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.get(id).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn of_kind(&self, kind: RelationKind) -> impl Iterator<Item = &RelationInstance> {
        self.instances.iter().filter(move |r| r.kind == kind)
    }

    pub fn between(&self, a: &str, b: &str) -> impl Iterator<Item = &RelationInstance> {
        let (a, b) = (a.to_string(), b.to_string());
        self.instances
            .iter()
            .filter(move |r| r.involves(&a) && r.involves(&b) && a != b)
    }
}

/// Pre-computed comparison state for one view pair.
pub struct PairContext<'a> {
    pub a: &'a View,
    pub b: &'a View,
    pub tuples_a: Vec<GcdvTuple>,
    pub tuples_b: Vec<GcdvTuple>,
    pub g: TriState,
    pub registry: &'a EquivalenceRegistry,
}

/// One matched channel pair and its data equality.
struct Matched<'c> {
    ta: &'c GcdvTuple,
    tb: &'c GcdvTuple,
    d: TriState,
}

impl<'a> PairContext<'a> {
    pub fn new(a: &'a View, b: &'a View, registry: &'a EquivalenceRegistry) -> Self {
        Self {
            a,
            b,
            tuples_a: tuples_of(a),
            tuples_b: tuples_of(b),
            g: grouping_eq(a, b, registry),
            registry,
        }
    }

    fn matched(&self) -> Vec<Matched<'_>> {
        let mut out = Vec::new();
        for ta in &self.tuples_a {
            for tb in self.tuples_b.iter().filter(|tb| tb.c == ta.c) {
                out.push(Matched {
                    ta,
                    tb,
                    d: data_eq(ta, tb, self.g, self.registry),
                });
            }
        }
        out
    }

    fn witness(&self, m: &Matched<'_>) -> Witness {
        let pending = match (&m.ta.d, &m.tb.d, m.d) {
            (DataMapping::Mapped(fa), DataMapping::Mapped(fb), TriState::NeedsConfirmation) => {
                vec![(fa.clone(), fb.clone())]
            }
            _ => Vec::new(),
        };
        Witness {
            channel_class: m.ta.c,
            tuple_a: m.ta.clone(),
            tuple_b: m.tb.clone(),
            pending_confirmations: pending,
            subset_view: None,
        }
    }

    /// The PositionY domains of both views are present and unequal.
    pub fn value_domains_differ(&self) -> bool {
        let dom = |v: &View| {
            v.binding(ChannelClass::PositionY)
                .filter(|b| b.mapping.is_mapped())
                .and_then(|b| b.domain.clone())
        };
        matches!((dom(self.a), dom(self.b)), (Some(x), Some(y)) if x != y)
    }
}

fn both_mapped(m: &Matched<'_>) -> bool {
    m.ta.d.is_mapped() && m.tb.d.is_mapped()
}

fn non_empty(ws: Vec<Witness>) -> Option<Vec<Witness>> {
    (!ws.is_empty()).then_some(ws)
}

/// Same grouping and every shared channel shows the same data.
pub fn is_full_redundancy(ctx: &PairContext<'_>) -> Option<Vec<Witness>> {
    if ctx.g != TriState::Equal {
        return None;
    }
    let matched = ctx.matched();
    if matched.is_empty() || matched.iter().any(|m| m.d != TriState::Equal) {
        return None;
    }
    non_empty(matched.iter().map(|m| ctx.witness(m)).collect())
}

/// Same grouping; every channel pair that differs is unmapped on exactly one
/// side, and all unmapped sides belong to the same view.
pub fn is_partial_redundancy(ctx: &PairContext<'_>) -> Option<Vec<Witness>> {
    if ctx.g != TriState::Equal {
        return None;
    }
    let matched = ctx.matched();
    if matched.iter().any(|m| m.d == TriState::NeedsConfirmation) {
        return None;
    }
    if !matched.iter().any(|m| m.d == TriState::Equal && both_mapped(m)) {
        return None;
    }
    let differing: Vec<&Matched<'_>> = matched.iter().filter(|m| m.d == TriState::Different).collect();
    let mut subset: Option<&str> = None;
    for m in &differing {
        let empty_side = match (m.ta.d.is_mapped(), m.tb.d.is_mapped()) {
            (false, true) => &ctx.a.id,
            (true, false) => &ctx.b.id,
            _ => return None,
        };
        match subset {
            None => subset = Some(empty_side),
            Some(s) if s == empty_side => {}
            Some(_) => return None,
        }
    }
    let subset = subset?;
    non_empty(
        differing
            .iter()
            .map(|m| Witness {
                subset_view: Some(subset.to_string()),
                ..ctx.witness(m)
            })
            .collect(),
    )
}

/// Same grouping, and some shared channel maps different fields on both sides.
pub fn is_multiples_same_grouping(ctx: &PairContext<'_>) -> Option<Vec<Witness>> {
    if ctx.g != TriState::Equal {
        return None;
    }
    non_empty(
        ctx.matched()
            .iter()
            .filter(|m| both_mapped(m) && matches!(m.d, TriState::Different | TriState::NeedsConfirmation))
            .map(|m| ctx.witness(m))
            .collect(),
    )
}

/// Different groupings, and some shared channel maps the same field on both
/// sides over unequal domains.
pub fn is_multiples_same_data(ctx: &PairContext<'_>) -> Option<Vec<Witness>> {
    if ctx.g == TriState::Equal {
        return None;
    }
    non_empty(
        ctx.matched()
            .iter()
            .filter(|m| {
                both_mapped(m)
                    && matches!(m.d, TriState::Equal | TriState::NeedsConfirmation)
                    && m.ta.domain != m.tb.domain
            })
            .map(|m| ctx.witness(m))
            .collect(),
    )
}

/// Same grouping, same (non-empty) data, different visual output.
pub fn is_hallucinator(ctx: &PairContext<'_>) -> Option<Vec<Witness>> {
    if ctx.g != TriState::Equal {
        return None;
    }
    non_empty(
        ctx.matched()
            .iter()
            .filter(|m| {
                m.d == TriState::Equal
                    && (m.ta.d.is_mapped() || m.tb.d.is_mapped())
                    && !visual_eq(&m.ta.v, &m.tb.v).unwrap_or(true)
            })
            .map(|m| ctx.witness(m))
            .collect(),
    )
}

/// Different data shown with the same color or size output. Positional
/// channels are excluded: equal axes over different quantities are the
/// consistent state that homogenization produces.
pub fn is_confuser(ctx: &PairContext<'_>) -> Option<Vec<Witness>> {
    non_empty(
        ctx.matched()
            .iter()
            .filter(|m| {
                !m.ta.c.is_positional() && m.d == TriState::Different && visual_eq(&m.ta.v, &m.tb.v).unwrap_or(false)
            })
            .map(|m| ctx.witness(m))
            .collect(),
    )
}

fn instance(kind: RelationKind, a: &View, b: &View, witnesses: Vec<Witness>, domains_differ: bool) -> RelationInstance {
    // Witness tuples are oriented so tuple_a belongs to the first id.
    let (first, second) = if a.id <= b.id { (a, b) } else { (b, a) };
    let witnesses: Vec<Witness> = if first.id == a.id {
        witnesses
    } else {
        witnesses
            .into_iter()
            .map(|w| Witness {
                tuple_a: w.tuple_b,
                tuple_b: w.tuple_a,
                pending_confirmations: w.pending_confirmations.into_iter().map(|(x, y)| (y, x)).collect(),
                ..w
            })
            .collect()
    };
    let conditional = match kind {
        RelationKind::MultiplesSameGrouping => witnesses.iter().all(|w| !w.pending_confirmations.is_empty()),
        RelationKind::MultiplesSameData => witnesses.iter().all(|w| !w.pending_confirmations.is_empty()),
        _ => false,
    };
    RelationInstance {
        id: relation_id(kind, &a.id, &b.id),
        kind,
        view_ids: (first.id.clone(), second.id.clone()),
        witnesses,
        conditional,
        domains_differ,
    }
}

/// All relations between one pair of views.
pub fn relations_between(a: &View, b: &View, registry: &EquivalenceRegistry) -> Vec<RelationInstance> {
    let ctx = PairContext::new(a, b, registry);
    let mut out = Vec::new();
    if let Some(w) = is_full_redundancy(&ctx) {
        out.push(instance(RelationKind::FullRedundancy, a, b, w, false));
    } else if let Some(w) = is_partial_redundancy(&ctx) {
        out.push(instance(RelationKind::PartialRedundancy, a, b, w, false));
    } else if let Some(w) = is_multiples_same_grouping(&ctx) {
        let differ = ctx.value_domains_differ();
        out.push(instance(RelationKind::MultiplesSameGrouping, a, b, w, differ));
    }
    if let Some(w) = is_multiples_same_data(&ctx) {
        out.push(instance(RelationKind::MultiplesSameData, a, b, w, false));
    }
    if let Some(w) = is_hallucinator(&ctx) {
        out.push(instance(RelationKind::Hallucinator, a, b, w, false));
    }
    if let Some(w) = is_confuser(&ctx) {
        out.push(instance(RelationKind::Confuser, a, b, w, false));
    }
    out
}

/// Evaluates every unordered view pair. Instances are ordered by
/// (first view id, second view id, kind).
pub fn find_relations(canvas: &Canvas) -> RelationSet {
    let mut instances = Vec::new();
    for (i, a) in canvas.views.iter().enumerate() {
        for b in &canvas.views[i + 1..] {
            instances.extend(relations_between(a, b, &canvas.registry));
        }
    }
    instances.sort_by(|x, y| x.view_ids.cmp(&y.view_ids).then(x.kind.cmp(&y.kind)));
    let mut by_view: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for r in &instances {
        for v in [&r.view_ids.0, &r.view_ids.1] {
            by_view.entry(v.clone()).or_default().push(r.id.clone());
        }
    }
    RelationSet {
        instances,
        by_view,
        canvas_views: canvas.views.iter().map(|v| v.id.clone()).collect(),
    }
}

pub fn relations_for_view<'s>(set: &'s RelationSet, view_id: &str) -> Result<Vec<&'s RelationInstance>, RelationError> {
    if !set.canvas_views.iter().any(|v| v == view_id) {
        return Err(RelationError::UnknownView(view_id.to_string()));
    }
    Ok(set.instances.iter().filter(|r| r.involves(view_id)).collect())
}

/// Whether two views may be merged into one: same chart type and the same
/// data on the x axis.
pub fn integrable(a: &View, b: &View, registry: &EquivalenceRegistry) -> bool {
    if a.chart_type != b.chart_type {
        return false;
    }
    match (a.binding(ChannelClass::PositionX), b.binding(ChannelClass::PositionX)) {
        (Some(xa), Some(xb)) => {
            field_eq(&xa.mapping, &xb.mapping, grouping_eq(a, b, registry), registry) == TriState::Equal
        }
        _ => false,
    }
}

/// Connected components of same-grouping multiples whose members can be
/// merged. Members keep canvas order; groups are ordered by first member.
pub fn integration_groups(set: &RelationSet, canvas: &Canvas) -> Vec<Vec<String>> {
    let index = |id: &str| canvas.views.iter().position(|v| v.id == id);
    let mut parent: Vec<usize> = (0..canvas.views.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut linked = vec![false; canvas.views.len()];
    for r in set.of_kind(RelationKind::MultiplesSameGrouping) {
        let (Some(i), Some(j)) = (index(&r.view_ids.0), index(&r.view_ids.1)) else {
            continue;
        };
        if !integrable(&canvas.views[i], &canvas.views[j], &canvas.registry) {
            continue;
        }
        linked[i] = true;
        linked[j] = true;
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, view) in canvas.views.iter().enumerate() {
        if linked[i] {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(view.id.clone());
        }
    }
    groups.into_values().filter(|g| g.len() >= 2).collect()
}
