//! Brute-force reference evaluator for the six relation predicates.
//!
//! Shares only the data model with the engine. Field equivalence, tuple
//! extraction, visual comparison and the predicates themselves are
//! re-derived here from the stored confirmations and bindings.

use std::collections::BTreeSet;

use semsnap_core::model::{Canvas, ChannelClass, Composition, DataDomain, FieldRef, View, VisualOutput};
use semsnap_core::registry::ConfirmationStatus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eq3 {
    Yes,
    No,
    Ask,
}

/// Field equivalence rebuilt from the confirmation list by repeated merging.
pub struct Equivalence {
    classes: Vec<BTreeSet<String>>,
    apart: Vec<(String, String)>,
}

impl Equivalence {
    pub fn from_canvas(canvas: &Canvas) -> Self {
        let mut classes: Vec<BTreeSet<String>> = Vec::new();
        let mut apart = Vec::new();
        for c in canvas.registry.confirmations() {
            match c.status {
                ConfirmationStatus::ConfirmedSame => {
                    let hits: Vec<usize> = (0..classes.len())
                        .filter(|&i| classes[i].contains(&c.a) || classes[i].contains(&c.b))
                        .collect();
                    let mut merged: BTreeSet<String> = [c.a.clone(), c.b.clone()].into();
                    for &i in hits.iter().rev() {
                        merged.extend(classes.remove(i));
                    }
                    classes.push(merged);
                }
                ConfirmationStatus::ConfirmedDifferent => apart.push((c.a.clone(), c.b.clone())),
                ConfirmationStatus::Pending => {}
            }
        }
        Self { classes, apart }
    }

    fn class_of(&self, key: &str) -> BTreeSet<String> {
        self.classes
            .iter()
            .find(|c| c.contains(key))
            .cloned()
            .unwrap_or_else(|| [key.to_string()].into())
    }

    pub fn compare(&self, a: &str, b: &str) -> Eq3 {
        if a == b {
            return Eq3::Yes;
        }
        let (ca, cb) = (self.class_of(a), self.class_of(b));
        if ca.contains(b) {
            return Eq3::Yes;
        }
        let pinned = self
            .apart
            .iter()
            .any(|(x, y)| (ca.contains(x) && cb.contains(y)) || (ca.contains(y) && cb.contains(x)));
        if pinned {
            Eq3::No
        } else {
            Eq3::Ask
        }
    }
}

#[derive(Debug, Clone)]
pub struct Tup {
    pub class: ChannelClass,
    pub field: Option<FieldRef>,
    pub visual: VisualOutput,
    pub domain: Option<DataDomain>,
}

pub fn tuples(view: &View) -> Vec<Tup> {
    let mut out = Vec::new();
    for b in view.bindings.values() {
        let stacked_series = b.class == ChannelClass::PositionY && view.composition != Composition::Single;
        let fields: Vec<Option<FieldRef>> = if stacked_series && !view.series.is_empty() {
            view.series.iter().map(|s| Some(s.y_field.clone())).collect()
        } else {
            vec![b.mapping.field().cloned()]
        };
        for field in fields {
            out.push(Tup {
                class: b.class,
                field,
                visual: b.visual.clone(),
                domain: b.domain.clone(),
            });
        }
    }
    out
}

pub fn same_grouping(a: &View, b: &View, eq: &Equivalence) -> bool {
    eq.compare(&a.grouping, &b.grouping) == Eq3::Yes
}

pub fn same_data(x: &Option<FieldRef>, y: &Option<FieldRef>, g_same: bool, eq: &Equivalence) -> Eq3 {
    match (x, y) {
        (None, None) if g_same => Eq3::Yes,
        (None, _) | (_, None) => Eq3::No,
        (Some(fx), Some(fy)) => eq.compare(&fx.canonical(), &fy.canonical()),
    }
}

/// Data equality of two tuples; a numeric and a categorical field never match.
pub fn tuple_data(ta: &Tup, tb: &Tup, g_same: bool, eq: &Equivalence) -> Eq3 {
    if kind_of(&ta.domain) != kind_of(&tb.domain) && ta.field != tb.field {
        return Eq3::No;
    }
    same_data(&ta.field, &tb.field, g_same, eq)
}

fn colors(v: &VisualOutput) -> Vec<String> {
    match v {
        VisualOutput::ConstantColor(c) => vec![c.as_str().to_string()],
        VisualOutput::ColorScheme(s) => s.assignment.iter().map(|(_, c)| c.as_str().to_string()).collect(),
        _ => Vec::new(),
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

pub fn same_look(x: &VisualOutput, y: &VisualOutput) -> bool {
    use VisualOutput::*;
    match (x, y) {
        (PositionRange { min: a, max: b }, PositionRange { min: c, max: d })
        | (SizeRange { min: a, max: b }, SizeRange { min: c, max: d }) => close(*a, *c) && close(*b, *d),
        (ConstantColor(a), ConstantColor(b)) => a == b,
        (ConstantColor(_), ColorScheme(_)) | (ColorScheme(_), ConstantColor(_)) => {
            let (cx, cy) = (colors(x), colors(y));
            cx.iter().any(|c| cy.contains(c))
        }
        (ColorScheme(s), ColorScheme(t)) => {
            if s.kind == t.kind {
                s.assignment == t.assignment
            } else {
                let (cx, cy) = (colors(x), colors(y));
                cx.iter().any(|c| cy.contains(c))
            }
        }
        _ => false,
    }
}

/// One expected relation: code, sorted view pair, witness classes, conditional.
pub type Expected = (String, String, String, Vec<ChannelClass>, bool);

struct Pair {
    class: ChannelClass,
    a_mapped: bool,
    b_mapped: bool,
    d: Eq3,
    v: bool,
    domains_differ: bool,
}

fn classes_of<'p>(ps: impl Iterator<Item = &'p Pair>) -> Vec<ChannelClass> {
    ps.map(|p| p.class).collect::<BTreeSet<_>>().into_iter().collect()
}

fn expected(code: &str, a: &str, b: &str, ws: &[&Pair], conditional: bool) -> Expected {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    (
        code.to_string(),
        lo.to_string(),
        hi.to_string(),
        classes_of(ws.iter().copied()),
        conditional,
    )
}

pub fn relations_for_pair(a: &View, b: &View, eq: &Equivalence) -> Vec<Expected> {
    let g = same_grouping(a, b, eq);
    let mut pairs = Vec::new();
    for ta in tuples(a) {
        for tb in tuples(b) {
            if ta.class != tb.class {
                continue;
            }
            pairs.push(Pair {
                class: ta.class,
                a_mapped: ta.field.is_some(),
                b_mapped: tb.field.is_some(),
                d: tuple_data(&ta, &tb, g, eq),
                v: same_look(&ta.visual, &tb.visual),
                domains_differ: ta.domain != tb.domain,
            });
        }
    }
    let mut out = Vec::new();
    let both = |p: &&Pair| p.a_mapped && p.b_mapped;

    // redundancy axis, first match wins
    let r1 = g && !pairs.is_empty() && pairs.iter().all(|p| p.d == Eq3::Yes);
    let differing: Vec<&Pair> = pairs.iter().filter(|p| p.d == Eq3::No).collect();
    let one_sided_same_view = {
        let sides: BTreeSet<bool> = differing
            .iter()
            .filter(|p| p.a_mapped != p.b_mapped)
            .map(|p| p.a_mapped)
            .collect();
        !differing.is_empty() && differing.iter().all(|p| p.a_mapped != p.b_mapped) && sides.len() == 1
    };
    let r2 = g
        && !pairs.iter().any(|p| p.d == Eq3::Ask)
        && pairs.iter().filter(both).any(|p| p.d == Eq3::Yes)
        && one_sided_same_view;
    let r3a: Vec<&Pair> = pairs.iter().filter(both).filter(|p| p.d != Eq3::Yes).collect();
    if r1 {
        out.push(expected("R1", &a.id, &b.id, &pairs.iter().collect::<Vec<_>>(), false));
    } else if r2 {
        out.push(expected("R2", &a.id, &b.id, &differing, false));
    } else if g && !r3a.is_empty() {
        let conditional = r3a.iter().all(|p| p.d == Eq3::Ask);
        out.push(expected("R3a", &a.id, &b.id, &r3a, conditional));
    }

    // consistency axis
    if !g {
        let r3b: Vec<&Pair> = pairs
            .iter()
            .filter(both)
            .filter(|p| p.d != Eq3::No && p.domains_differ)
            .collect();
        if !r3b.is_empty() {
            let conditional = r3b.iter().all(|p| p.d == Eq3::Ask);
            out.push(expected("R3b", &a.id, &b.id, &r3b, conditional));
        }
    }
    if g {
        let r4: Vec<&Pair> = pairs
            .iter()
            .filter(|p| p.d == Eq3::Yes && (p.a_mapped || p.b_mapped) && !p.v)
            .collect();
        if !r4.is_empty() {
            out.push(expected("R4", &a.id, &b.id, &r4, false));
        }
    }
    let r5: Vec<&Pair> = pairs
        .iter()
        .filter(|p| !is_positional(p.class) && p.d == Eq3::No && p.v)
        .collect();
    if !r5.is_empty() {
        out.push(expected("R5", &a.id, &b.id, &r5, false));
    }
    out
}

/// 0 for none, 1 numeric, 2 categorical.
fn kind_of(d: &Option<DataDomain>) -> u8 {
    match d {
        None => 0,
        Some(DataDomain::Quantitative { .. }) => 1,
        Some(DataDomain::Categorical { .. }) => 2,
    }
}

fn is_positional(c: ChannelClass) -> bool {
    matches!(
        c,
        ChannelClass::PositionX | ChannelClass::PositionY | ChannelClass::Angle
    )
}

/// Every relation on the canvas, sorted.
pub fn brute_force(canvas: &Canvas) -> Vec<Expected> {
    let eq = Equivalence::from_canvas(canvas);
    let mut out = Vec::new();
    for (i, a) in canvas.views.iter().enumerate() {
        for b in &canvas.views[i + 1..] {
            out.extend(relations_for_pair(a, b, &eq));
        }
    }
    out.sort();
    out
}
