//! Resolves views against the dataset into renderer-neutral chart specs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{cross_aggregate, group_aggregate, secondary_axis, ColumnType, DataError, Dataset, SeriesTable};
use crate::model::{
    Canvas, Cell, ChannelClass, ChartType, Composition, DataDomain, DataMapping, FieldRef, Rgb, SchemeKind, View,
    VisualOutput,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("unknown view `{0}`")]
    UnknownView(String),
    #[error("view `{view}`: {source}")]
    Data {
        view: String,
        #[source]
        source: DataError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkType {
    Bar,
    Line,
    Area,
    Point,
    Arc,
    Stream,
}

impl From<ChartType> for MarkType {
    fn from(c: ChartType) -> Self {
        match c {
            ChartType::Bar => MarkType::Bar,
            ChartType::Line => MarkType::Line,
            ChartType::Area => MarkType::Area,
            ChartType::Pie => MarkType::Arc,
            ChartType::Scatter => MarkType::Point,
            ChartType::Streamgraph => MarkType::Stream,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisKind {
    Quantitative,
    Categorical,
    Temporal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub title: String,
    pub domain: DataDomain,
    pub kind: AxisKind,
}

/// A point's x is a category label, or a number for aggregated x fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XValue {
    Number(f64),
    Category(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderPoint {
    pub x: XValue,
    pub y: f64,
    /// Baseline of stacked marks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<Rgb>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesMark {
    pub label: String,
    pub color: Rgb,
    pub points: Vec<RenderPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axes {
    pub x: AxisSpec,
    pub y: AxisSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderSpec {
    pub view_id: String,
    pub mark_type: MarkType,
    pub composition: Composition,
    pub series_marks: Vec<SeriesMark>,
    pub axes: Axes,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legend: Option<Vec<(String, Rgb)>>,
    /// The second series is drawn on a negated value axis.
    pub mirror: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedSpec {
    pub spec: RenderSpec,
    pub cell: Cell,
}

fn fallback_color() -> Rgb {
    Rgb::parse("#4e79a7").expect("valid")
}

fn color_of(v: &VisualOutput) -> Rgb {
    v.key_color().cloned().unwrap_or_else(fallback_color)
}

fn axis_kind(dataset: &Dataset, mapping: &DataMapping) -> AxisKind {
    let Some(f) = mapping.field() else {
        return AxisKind::Categorical;
    };
    if f.aggregate != crate::model::Aggregate::None {
        return AxisKind::Quantitative;
    }
    match dataset.column(&f.column).map(|c| c.kind) {
        Some(ColumnType::Quantitative) => AxisKind::Quantitative,
        Some(ColumnType::Temporal) => AxisKind::Temporal,
        _ => AxisKind::Categorical,
    }
}

fn axis(dataset: &Dataset, view: &View, class: ChannelClass, title: String) -> Result<AxisSpec, DataError> {
    let binding = view.binding(class);
    let domain = match binding.and_then(|b| b.domain.clone()) {
        Some(d) => d,
        None => DataDomain::Categorical {
            values: dataset.distinct_keys(&view.grouping)?,
        },
    };
    let kind = match (&domain, binding) {
        (DataDomain::Categorical { .. }, Some(b)) if axis_kind(dataset, &b.mapping) == AxisKind::Temporal => {
            AxisKind::Temporal
        }
        (DataDomain::Categorical { .. }, _) => AxisKind::Categorical,
        (DataDomain::Quantitative { .. }, _) => AxisKind::Quantitative,
    };
    Ok(AxisSpec { title, domain, kind })
}

fn title(view: &View, class: ChannelClass) -> String {
    view.binding(class)
        .and_then(|b| b.mapping.field())
        .map(FieldRef::canonical)
        .unwrap_or_else(|| view.grouping.clone())
}

/// Points of one value field over the view's groups. An aggregated x field
/// places each group at its x value.
fn points(dataset: &Dataset, view: &View, table: &SeriesTable) -> Result<Vec<RenderPoint>, DataError> {
    let x_values = match view.binding(ChannelClass::PositionX).and_then(|b| b.mapping.field()) {
        Some(f) if f.aggregate != crate::model::Aggregate::None => Some(group_aggregate(dataset, &view.grouping, f)?),
        _ => None,
    };
    Ok(table
        .iter()
        .map(|(k, y)| RenderPoint {
            x: match x_values.as_ref().and_then(|t| t.get(k)) {
                Some(n) => XValue::Number(n),
                None => XValue::Category(k.to_string()),
            },
            y,
            y0: None,
            color: None,
        })
        .collect())
}

fn stack(marks: &mut [SeriesMark]) {
    let mut base: Vec<(XValue, f64)> = Vec::new();
    for m in marks {
        for p in &mut m.points {
            let slot = match base.iter_mut().find(|(x, _)| *x == p.x) {
                Some(slot) => slot,
                None => {
                    base.push((p.x.clone(), 0.0));
                    base.last_mut().expect("just pushed")
                }
            };
            p.y0 = Some(slot.1);
            slot.1 += p.y;
            p.y += p.y0.unwrap_or(0.0);
        }
    }
}

fn value_table(dataset: &Dataset, view: &View, field: &FieldRef) -> Result<SeriesTable, DataError> {
    match secondary_axis(view) {
        // integrated views with their own x column aggregate across groups
        Some(x) => group_aggregate(dataset, x, field),
        None => group_aggregate(dataset, &view.grouping, field),
    }
}

fn single_marks(dataset: &Dataset, view: &View) -> Result<Vec<SeriesMark>, DataError> {
    let value_class = if view.chart_type == ChartType::Pie {
        ChannelClass::Angle
    } else {
        ChannelClass::PositionY
    };
    let field = view
        .binding(value_class)
        .and_then(|b| b.mapping.field().cloned())
        .ok_or_else(|| DataError::UnmappedBinding(value_class.name().to_string()))?;
    let color = view.binding(ChannelClass::Color).map(|b| &b.visual);
    let scheme = match color {
        Some(VisualOutput::ColorScheme(s)) if s.kind == SchemeKind::Categorical => Some(s),
        _ => None,
    };
    let base_color = color.map(color_of).unwrap_or_else(fallback_color);

    if let Some(x_col) = secondary_axis(view) {
        let mut marks: Vec<SeriesMark> = cross_aggregate(dataset, &view.grouping, x_col, &field)?
            .into_iter()
            .map(|(group, table)| SeriesMark {
                color: scheme
                    .and_then(|s| s.color_for(&group))
                    .cloned()
                    .unwrap_or_else(|| base_color.clone()),
                label: group,
                points: table
                    .iter()
                    .map(|(k, y)| RenderPoint {
                        x: XValue::Category(k.to_string()),
                        y,
                        y0: None,
                        color: None,
                    })
                    .collect(),
            })
            .collect();
        if view.chart_type == ChartType::Streamgraph {
            stack(&mut marks);
        }
        return Ok(marks);
    }

    let table = group_aggregate(dataset, &view.grouping, &field)?;
    let mut pts = points(dataset, view, &table)?;
    if let Some(s) = scheme {
        for p in &mut pts {
            if let XValue::Category(k) = &p.x {
                p.color = s.color_for(k).cloned();
            }
        }
    }
    if view.chart_type == ChartType::Pie {
        for p in &mut pts {
            p.y = p.y.max(0.0);
        }
    }
    Ok(vec![SeriesMark {
        label: field.canonical(),
        color: base_color,
        points: pts,
    }])
}

fn integrated_marks(dataset: &Dataset, view: &View) -> Result<Vec<SeriesMark>, DataError> {
    let mut marks = view
        .series
        .iter()
        .map(|s| {
            let table = value_table(dataset, view, &s.y_field)?;
            let pts = if secondary_axis(view).is_some() {
                table
                    .iter()
                    .map(|(k, y)| RenderPoint {
                        x: XValue::Category(k.to_string()),
                        y,
                        y0: None,
                        color: None,
                    })
                    .collect()
            } else {
                points(dataset, view, &table)?
            };
            Ok(SeriesMark {
                label: s.label.clone(),
                color: color_of(&s.color),
                points: pts,
            })
        })
        .collect::<Result<Vec<_>, DataError>>()?;
    if view.composition == Composition::Stacked {
        stack(&mut marks);
    }
    Ok(marks)
}

pub fn render_view(canvas: &Canvas, view_id: &str) -> Result<RenderSpec, RenderError> {
    let view = canvas
        .view(view_id)
        .ok_or_else(|| RenderError::UnknownView(view_id.to_string()))?;
    let ds = canvas.dataset.as_ref();
    let wrap = |source| RenderError::Data {
        view: view_id.to_string(),
        source,
    };
    if ds.rows.is_empty() {
        return Err(wrap(DataError::EmptyData));
    }
    let marks = if view.is_integrated() {
        integrated_marks(ds, view)
    } else {
        single_marks(ds, view)
    }
    .map_err(wrap)?;
    let axes = if view.chart_type == ChartType::Pie {
        Axes {
            x: axis(ds, view, ChannelClass::Color, view.grouping.clone()).map_err(wrap)?,
            y: axis(ds, view, ChannelClass::Angle, title(view, ChannelClass::Angle)).map_err(wrap)?,
        }
    } else {
        let y_title = if view.is_integrated() {
            view.series
                .iter()
                .map(|s| s.label.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        } else {
            title(view, ChannelClass::PositionY)
        };
        Axes {
            x: axis(ds, view, ChannelClass::PositionX, title(view, ChannelClass::PositionX)).map_err(wrap)?,
            y: axis(ds, view, ChannelClass::PositionY, y_title).map_err(wrap)?,
        }
    };
    let mut axes = axes;
    let stacked = view.composition == Composition::Stacked || view.chart_type == ChartType::Streamgraph;
    if stacked {
        widen_to_stack(&mut axes.y, &marks);
    }
    let legend = if view.is_integrated() {
        Some(marks.iter().map(|m| (m.label.clone(), m.color.clone())).collect())
    } else {
        match view.binding(ChannelClass::Color).map(|b| &b.visual) {
            Some(VisualOutput::ColorScheme(s)) if s.kind == SchemeKind::Categorical => Some(s.assignment.clone()),
            _ => None,
        }
    };
    Ok(RenderSpec {
        view_id: view.id.clone(),
        mark_type: view.chart_type.into(),
        composition: view.composition,
        series_marks: marks,
        axes,
        legend,
        mirror: view.composition == Composition::Mirrored,
    })
}

/// Stacked totals can exceed every member's own scale.
fn widen_to_stack(axis: &mut AxisSpec, marks: &[SeriesMark]) {
    let top = marks
        .iter()
        .flat_map(|m| &m.points)
        .map(|p| p.y)
        .fold(f64::NEG_INFINITY, f64::max);
    if let DataDomain::Quantitative { max, .. } = &mut axis.domain {
        if top > *max {
            *max = top;
        }
    }
}

/// One spec per view, ordered by grid cell.
pub fn render_canvas(canvas: &Canvas) -> Result<Vec<PlacedSpec>, RenderError> {
    let mut views: Vec<&View> = canvas.views.iter().collect();
    views.sort_by_key(|v| (v.cell.row, v.cell.col));
    views
        .into_iter()
        .map(|v| {
            Ok(PlacedSpec {
                spec: render_view(canvas, &v.id)?,
                cell: v.cell,
            })
        })
        .collect()
}
