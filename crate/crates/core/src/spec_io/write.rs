use std::collections::BTreeMap;

use super::document::{
    CanvasDocument, ChannelDoc, DatasetDoc, EquivalenceDoc, SeriesDoc, ViewDoc, VisualDoc, DOCUMENT_VERSION,
};
use crate::data::DatasetSource;
use crate::model::{Aggregate, Canvas, DataMapping, View};

fn view_doc(v: &View) -> ViewDoc {
    let channels: BTreeMap<String, ChannelDoc> = v
        .bindings
        .values()
        .map(|b| {
            let (field, aggregate) = match &b.mapping {
                DataMapping::Empty => (None, None),
                DataMapping::Mapped(f) => (
                    Some(f.column.clone()),
                    (f.aggregate != Aggregate::None).then(|| f.aggregate.name().to_string()),
                ),
            };
            let doc = ChannelDoc {
                field,
                aggregate,
                domain: b.domain.clone(),
                visual: Some(VisualDoc::from(&b.visual)),
            };
            (b.raw_channel.clone(), doc)
        })
        .collect();
    ViewDoc {
        id: v.id.clone(),
        chart: v.chart_type.name().to_string(),
        grouping: Some(v.grouping.clone()),
        composition: Some(v.composition),
        series: v
            .series
            .iter()
            .map(|s| SeriesDoc {
                label: s.label.clone(),
                field: s.y_field.canonical(),
                color: VisualDoc::from(&s.color),
            })
            .collect(),
        cell: Some(v.cell),
        channels,
    }
}

pub fn to_document(canvas: &Canvas) -> CanvasDocument {
    let ds = &canvas.dataset;
    let (source, inline) = match &ds.source {
        DatasetSource::File(p) => (Some(p.clone()), None),
        DatasetSource::Inline(csv) => (None, Some(csv.clone())),
    };
    CanvasDocument {
        version: DOCUMENT_VERSION,
        dataset: DatasetDoc {
            name: ds.name.clone(),
            source,
            inline,
            columns: ds.columns.clone(),
        },
        equivalences: canvas
            .registry
            .confirmations()
            .iter()
            .map(|c| EquivalenceDoc {
                a: c.a.clone(),
                b: c.b.clone(),
                status: c.status,
            })
            .collect(),
        views: canvas.views.iter().map(view_doc).collect(),
    }
}

/// Pretty JSON with two-space indent and a trailing newline. Every domain
/// and cell is written out, so the output is a fixed point of parsing.
pub fn serialize_canvas(canvas: &Canvas) -> String {
    let mut text = serde_json::to_string_pretty(&to_document(canvas)).expect("documents always serialize");
    text.push('\n');
    text
}
