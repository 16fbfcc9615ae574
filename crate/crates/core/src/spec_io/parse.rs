use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use super::document::{CanvasDocument, ChannelDoc, DatasetDoc, EquivalenceDoc, SeriesDoc, ViewDoc, DOCUMENT_VERSION};
use super::SpecError;
use crate::data::{compute_domain, load_dataset, union_domain, ColumnType, Dataset, DatasetSource};
use crate::model::{
    channel_class, Aggregate, Canvas, Cell, ChannelBinding, ChannelClass, ChartType, Composition, DataMapping,
    FieldRef, Series, View, VisualOutput,
};
use crate::registry::{Confirmation, EquivalenceRegistry};

/// Grid width used when cells are assigned automatically.
const AUTO_COLUMNS: u32 = 2;

fn default_visual(class: ChannelClass) -> Option<VisualOutput> {
    match class {
        ChannelClass::PositionX => Some(VisualOutput::PositionRange { min: 0.0, max: 400.0 }),
        ChannelClass::PositionY => Some(VisualOutput::PositionRange { min: 0.0, max: 300.0 }),
        ChannelClass::Angle => Some(VisualOutput::PositionRange { min: 0.0, max: 360.0 }),
        ChannelClass::Color | ChannelClass::Size => None,
    }
}

/// Parses a document whose dataset path is resolved against the current
/// directory.
pub fn parse_canvas(text: &str) -> Result<Canvas, SpecError> {
    parse_canvas_in(text, Path::new("."))
}

/// Parses a document, resolving a relative dataset path against `base`.
pub fn parse_canvas_in(text: &str, base: &Path) -> Result<Canvas, SpecError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        // the position is reported separately
        let message = full
            .rsplit_once(" at line ")
            .map_or(full.as_str(), |(m, _)| m)
            .to_string();
        SpecError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let doc: CanvasDocument =
        serde_json::from_value(value).map_err(|e| SpecError::Validation(vec![format!("document shape: {e}")]))?;
    from_document(doc, base)
}

fn load(ds: &DatasetDoc, base: &Path, errors: &mut Vec<String>) -> Option<Dataset> {
    let (text, source) = match (&ds.source, &ds.inline) {
        (Some(path), None) => match std::fs::read_to_string(base.join(path)) {
            Ok(text) => (text, DatasetSource::File(path.clone())),
            Err(e) => {
                errors.push(format!("dataset: cannot read `{path}`: {e}"));
                return None;
            }
        },
        (None, Some(csv)) => (csv.clone(), DatasetSource::Inline(csv.clone())),
        _ => {
            errors.push("dataset: exactly one of `source` and `inline` must be given".into());
            return None;
        }
    };
    let mut names = BTreeSet::new();
    for c in &ds.columns {
        if !names.insert(c.name.as_str()) {
            errors.push(format!("dataset: column `{}` declared twice", c.name));
        }
    }
    match load_dataset(&ds.name, &text, &ds.columns, source) {
        Ok(d) => Some(d),
        Err(e) => {
            errors.push(format!("dataset: {e}"));
            None
        }
    }
}

fn check_field(dataset: Option<&Dataset>, field: &FieldRef, ctx: &str, errors: &mut Vec<String>) {
    let Some(ds) = dataset else { return };
    if field.column == FieldRef::ANY_COLUMN {
        if field.aggregate != Aggregate::Count {
            errors.push(format!("{ctx}: `*` is only allowed with count"));
        }
        return;
    }
    let Some(col) = ds.column(&field.column) else {
        errors.push(format!("{ctx}: column `{}` is not declared", field.column));
        return;
    };
    let numeric_agg = !matches!(field.aggregate, Aggregate::None | Aggregate::Count);
    if numeric_agg && col.kind != ColumnType::Quantitative {
        errors.push(format!(
            "{ctx}: {} needs a quantitative column, `{}` is {}",
            field.aggregate.name(),
            col.name,
            col.kind
        ));
    }
}

fn channel_field(ch: &ChannelDoc, ctx: &str, errors: &mut Vec<String>) -> DataMapping {
    match (&ch.field, &ch.aggregate) {
        (None, None) => DataMapping::Empty,
        (None, Some(_)) => {
            errors.push(format!("{ctx}: aggregate given without a field"));
            DataMapping::Empty
        }
        (Some(column), agg) => {
            let aggregate = match agg.as_deref() {
                None => Aggregate::None,
                Some(name) => Aggregate::from_name(name).unwrap_or_else(|| {
                    errors.push(format!("{ctx}: unknown aggregate `{name}`"));
                    Aggregate::None
                }),
            };
            DataMapping::Mapped(FieldRef::new(column.clone(), aggregate))
        }
    }
}

fn build_view(doc: &ViewDoc, dataset: Option<&Dataset>, errors: &mut Vec<String>) -> Option<View> {
    let at = format!("view `{}`", doc.id);
    let chart = ChartType::ALL.into_iter().find(|c| c.name() == doc.chart);
    if chart.is_none() {
        errors.push(format!("{at}: unknown chart type `{}`", doc.chart));
    }
    let grouping = doc.grouping.clone();
    match &grouping {
        None => errors.push(format!("{at}: missing `grouping`")),
        Some(g) => {
            if dataset.is_some_and(|d| d.column(g).is_none()) {
                errors.push(format!("{at}: grouping column `{g}` is not declared"));
            }
        }
    }
    let composition = doc.composition.unwrap_or(Composition::Single);
    let mut bindings = BTreeMap::new();
    for (raw, ch) in &doc.channels {
        let ctx = format!("{at}, channel `{raw}`");
        let Some(chart) = chart else { continue };
        let class = match channel_class(chart, raw) {
            Ok(c) => c,
            Err(e) => {
                errors.push(format!("{ctx}: {e}"));
                continue;
            }
        };
        if bindings.contains_key(&class) {
            errors.push(format!("{ctx}: a second {class} channel"));
            continue;
        }
        let mapping = channel_field(ch, &ctx, errors);
        if let DataMapping::Mapped(f) = &mapping {
            check_field(dataset, f, &ctx, errors);
        } else if ch.domain.is_some() {
            errors.push(format!("{ctx}: a domain needs a field"));
        }
        let visual = match ch
            .visual
            .clone()
            .map(VisualOutput::from)
            .or_else(|| default_visual(class))
        {
            Some(v) => v,
            None => {
                errors.push(format!("{ctx}: missing `visual`"));
                continue;
            }
        };
        if !visual.fits(class) {
            errors.push(format!("{ctx}: visual output does not fit a {class} channel"));
        }
        bindings.insert(
            class,
            ChannelBinding {
                raw_channel: raw.clone(),
                class,
                mapping,
                domain: ch.domain.clone(),
                visual,
            },
        );
    }
    let series = doc
        .series
        .iter()
        .map(|s| build_series(s, dataset, &at, errors))
        .collect::<Option<Vec<_>>>()
        .unwrap_or_default();
    match composition {
        Composition::Single if !doc.series.is_empty() => errors.push(format!("{at}: series on a single view")),
        Composition::Mirrored if doc.series.len() != 2 => errors.push(format!("{at}: a mirrored view needs 2 series")),
        c if c != Composition::Single && doc.series.len() < 2 => {
            errors.push(format!("{at}: an integrated view needs at least 2 series"))
        }
        _ => {}
    }
    Some(View {
        id: doc.id.clone(),
        chart_type: chart?,
        grouping: grouping?,
        composition,
        series,
        bindings,
        cell: doc.cell.unwrap_or(Cell::at(0, 0)),
    })
}

fn build_series(s: &SeriesDoc, dataset: Option<&Dataset>, at: &str, errors: &mut Vec<String>) -> Option<Series> {
    let Some(field) = FieldRef::parse(&s.field) else {
        errors.push(format!("{at}: series `{}` has an empty field", s.label));
        return None;
    };
    check_field(dataset, &field, &format!("{at}, series `{}`", s.label), errors);
    let color = VisualOutput::from(s.color.clone());
    if !color.fits(ChannelClass::Color) {
        errors.push(format!("{at}: series `{}` color is not a color", s.label));
    }
    Some(Series {
        label: s.label.clone(),
        y_field: field,
        color,
    })
}

/// Fills in domains the document left out.
fn complete_domains(dataset: &Dataset, view: &mut View, errors: &mut Vec<String>) {
    let snapshot = view.clone();
    for (class, binding) in view.bindings.iter_mut() {
        if binding.domain.is_some() || !binding.mapping.is_mapped() {
            continue;
        }
        let computed = if *class == ChannelClass::PositionY && snapshot.is_integrated() {
            snapshot
                .series
                .iter()
                .map(|s| {
                    let mut b = binding.clone();
                    b.mapping = DataMapping::Mapped(s.y_field.clone());
                    compute_domain(dataset, &snapshot, &b)
                })
                .try_fold(None, |acc: Option<crate::model::DataDomain>, d| {
                    let d = d?;
                    Ok::<_, crate::data::DataError>(Some(match acc {
                        None => d,
                        Some(a) => union_domain(&a, &d)?,
                    }))
                })
                .and_then(|d| d.ok_or(crate::data::DataError::EmptyData))
        } else {
            compute_domain(dataset, &snapshot, binding)
        };
        match computed {
            Ok(d) => binding.domain = Some(d),
            Err(e) => errors.push(format!(
                "view `{}`, channel `{}`: {e}",
                snapshot.id, binding.raw_channel
            )),
        }
    }
}

/// Row-major placement for views without a cell, skipping taken slots.
fn assign_cells(docs: &[ViewDoc], views: &mut [View]) {
    let mut taken: BTreeSet<(u32, u32)> = docs.iter().filter_map(|d| d.cell).map(|c| (c.row, c.col)).collect();
    let mut slot = 0u32;
    for (doc, view) in docs.iter().zip(views.iter_mut()) {
        if doc.cell.is_some() {
            continue;
        }
        while taken.contains(&(slot / AUTO_COLUMNS, slot % AUTO_COLUMNS)) {
            slot += 1;
        }
        view.cell = Cell::at(slot / AUTO_COLUMNS, slot % AUTO_COLUMNS);
        taken.insert((view.cell.row, view.cell.col));
    }
}

fn build_registry(entries: &[EquivalenceDoc], errors: &mut Vec<String>) -> EquivalenceRegistry {
    let mut confirmations = Vec::new();
    for e in entries {
        match (FieldRef::parse(&e.a), FieldRef::parse(&e.b)) {
            (Some(a), Some(b)) if a != b => confirmations.push(Confirmation {
                a: a.canonical(),
                b: b.canonical(),
                status: e.status,
            }),
            (Some(_), Some(_)) => errors.push(format!(
                "equivalence `{}` = `{}`: a field is trivially itself",
                e.a, e.b
            )),
            _ => errors.push("equivalence: empty field".to_string()),
        }
    }
    EquivalenceRegistry::from_entries(confirmations).unwrap_or_else(|e| {
        errors.push(format!("equivalences: {e}"));
        EquivalenceRegistry::default()
    })
}

pub fn from_document(doc: CanvasDocument, base: &Path) -> Result<Canvas, SpecError> {
    let mut errors = Vec::new();
    if doc.version != DOCUMENT_VERSION {
        errors.push(format!("version: expected {DOCUMENT_VERSION}, found {}", doc.version));
    }
    let dataset = load(&doc.dataset, base, &mut errors);
    let registry = build_registry(&doc.equivalences, &mut errors);
    let mut ids = BTreeSet::new();
    for v in &doc.views {
        if !ids.insert(v.id.as_str()) {
            errors.push(format!("view `{}`: duplicate id", v.id));
        }
    }
    let views: Vec<Option<View>> = doc
        .views
        .iter()
        .map(|v| build_view(v, dataset.as_ref(), &mut errors))
        .collect();
    if !errors.is_empty() {
        return Err(SpecError::Validation(errors));
    }
    let dataset = dataset.expect("no errors implies a dataset");
    let mut views: Vec<View> = views
        .into_iter()
        .map(|v| v.expect("no errors implies a view"))
        .collect();
    for v in &mut views {
        complete_domains(&dataset, v, &mut errors);
    }
    if !errors.is_empty() {
        return Err(SpecError::Validation(errors));
    }
    assign_cells(&doc.views, &mut views);
    Ok(Canvas::new(Arc::new(dataset), views, registry))
}
