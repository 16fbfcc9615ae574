//! Canvas data model: views, channel bindings, the (grouping, channel, data,
//! visual) tuples extracted from them, and the equality predicates that every
//! relation is built from.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::Dataset;
use crate::registry::{EquivalenceRegistry, Sameness};

/// Relative tolerance used when comparing numeric ranges of visual outputs.
pub const RANGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("channel `{channel}` is not valid for {chart} charts")]
    UnknownChannel { chart: ChartType, channel: String },
    #[error("cannot compare a {a} output with a {b} output")]
    ClassMismatch { a: &'static str, b: &'static str },
    #[error("invalid color `{0}`, expected #rrggbb")]
    InvalidColor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    None,
    Sum,
    Mean,
    Count,
    Min,
    Max,
}

impl Aggregate {
    pub const ALL: [Aggregate; 6] = [
        Aggregate::None,
        Aggregate::Sum,
        Aggregate::Mean,
        Aggregate::Count,
        Aggregate::Min,
        Aggregate::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Aggregate::None => "none",
            Aggregate::Sum => "sum",
            Aggregate::Mean => "mean",
            Aggregate::Count => "count",
            Aggregate::Min => "min",
            Aggregate::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

/// A column reference, optionally aggregated. `count` may use the synthetic
/// column `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FieldRef {
    pub column: String,
    pub aggregate: Aggregate,
}

impl FieldRef {
    pub const ANY_COLUMN: &'static str = "*";

    pub fn new(column: impl Into<String>, aggregate: Aggregate) -> Self {
        Self {
            column: column.into(),
            aggregate,
        }
    }

    pub fn raw(column: impl Into<String>) -> Self {
        Self::new(column, Aggregate::None)
    }

    pub fn count() -> Self {
        Self::new(Self::ANY_COLUMN, Aggregate::Count)
    }

    /// `sum(Europe)`, or the bare column name when not aggregated.
    pub fn canonical(&self) -> String {
        match self.aggregate {
            Aggregate::None => self.column.clone(),
            agg => format!("{}({})", agg.name(), self.column),
        }
    }

    /// Inverse of [`FieldRef::canonical`].
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.is_empty() {
            return None;
        }
        if let Some(open) = text.find('(') {
            if text.ends_with(')') {
                if let Some(agg) = Aggregate::from_name(&text[..open]) {
                    if agg != Aggregate::None {
                        let column = &text[open + 1..text.len() - 1];
                        if !column.is_empty() {
                            return Some(Self::new(column, agg));
                        }
                    }
                }
            }
        }
        Some(Self::raw(text))
    }
}

impl TryFrom<String> for FieldRef {
    type Error = String;

    fn try_from(text: String) -> Result<Self, String> {
        Self::parse(&text).ok_or_else(|| "empty field reference".to_string())
    }
}

impl From<FieldRef> for String {
    fn from(f: FieldRef) -> String {
        f.canonical()
    }
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DataMapping {
    Empty,
    Mapped(FieldRef),
}

impl DataMapping {
    pub fn field(&self) -> Option<&FieldRef> {
        match self {
            DataMapping::Empty => None,
            DataMapping::Mapped(f) => Some(f),
        }
    }

    pub fn is_mapped(&self) -> bool {
        matches!(self, DataMapping::Mapped(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DataDomain {
    Quantitative { min: f64, max: f64 },
    Categorical { values: Vec<String> },
}

impl DataDomain {
    pub fn quantitative(min: f64, max: f64) -> Self {
        DataDomain::Quantitative { min, max }
    }

    pub fn categorical<S: Into<String>>(values: impl IntoIterator<Item = S>) -> Self {
        DataDomain::Categorical {
            values: values.into_iter().map(Into::into).collect(),
        }
    }
}

/// A validated `#rrggbb` color, stored lowercase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Rgb(String);

impl TryFrom<String> for Rgb {
    type Error = ModelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Rgb::parse(&value)
    }
}

impl From<Rgb> for String {
    fn from(value: Rgb) -> Self {
        value.0
    }
}

impl Rgb {
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let hex = text.strip_prefix('#').unwrap_or(text);
        if hex.len() == 6 && hex.chars().all(|c| c.is_ascii_hexdigit()) {
            Ok(Rgb(format!("#{}", hex.to_ascii_lowercase())))
        } else {
            Err(ModelError::InvalidColor(text.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Continuous,
    Categorical,
}

/// A named color scheme. Categorical schemes assign one color per category;
/// continuous ramps store their endpoints under the keys `start` and `end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorScheme {
    pub scheme_id: String,
    pub kind: SchemeKind,
    pub assignment: Vec<(String, Rgb)>,
}

impl ColorScheme {
    pub fn colors(&self) -> impl Iterator<Item = &Rgb> {
        self.assignment.iter().map(|(_, c)| c)
    }

    pub fn color_for(&self, key: &str) -> Option<&Rgb> {
        self.assignment.iter().find(|(k, _)| k == key).map(|(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VisualOutput {
    PositionRange { min: f64, max: f64 },
    ConstantColor(Rgb),
    ColorScheme(ColorScheme),
    SizeRange { min: f64, max: f64 },
}

impl VisualOutput {
    fn family(&self) -> &'static str {
        match self {
            VisualOutput::PositionRange { .. } => "position",
            VisualOutput::ConstantColor(_) | VisualOutput::ColorScheme(_) => "color",
            VisualOutput::SizeRange { .. } => "size",
        }
    }

    /// Whether this output can back a binding of `class`.
    pub fn fits(&self, class: ChannelClass) -> bool {
        match class {
            ChannelClass::PositionX | ChannelClass::PositionY | ChannelClass::Angle => self.family() == "position",
            ChannelClass::Color => self.family() == "color",
            ChannelClass::Size => self.family() == "size",
        }
    }

    /// Representative color: the constant itself, or the last color of a
    /// scheme (ramp end for continuous schemes).
    pub fn key_color(&self) -> Option<&Rgb> {
        match self {
            VisualOutput::ConstantColor(c) => Some(c),
            VisualOutput::ColorScheme(s) => s.assignment.last().map(|(_, c)| c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelClass {
    #[serde(rename = "x")]
    PositionX,
    #[serde(rename = "y")]
    PositionY,
    Color,
    Size,
    Angle,
}

impl ChannelClass {
    pub const ALL: [ChannelClass; 5] = [
        ChannelClass::PositionX,
        ChannelClass::PositionY,
        ChannelClass::Color,
        ChannelClass::Size,
        ChannelClass::Angle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelClass::PositionX => "x",
            ChannelClass::PositionY => "y",
            ChannelClass::Color => "color",
            ChannelClass::Size => "size",
            ChannelClass::Angle => "angle",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn is_positional(self) -> bool {
        matches!(
            self,
            ChannelClass::PositionX | ChannelClass::PositionY | ChannelClass::Angle
        )
    }
}

impl fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartType {
    Bar,
    Line,
    Area,
    Pie,
    Scatter,
    Streamgraph,
}

impl ChartType {
    pub const ALL: [ChartType; 6] = [
        ChartType::Bar,
        ChartType::Line,
        ChartType::Area,
        ChartType::Pie,
        ChartType::Scatter,
        ChartType::Streamgraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChartType::Bar => "bar",
            ChartType::Line => "line",
            ChartType::Area => "area",
            ChartType::Pie => "pie",
            ChartType::Scatter => "scatter",
            ChartType::Streamgraph => "streamgraph",
        }
    }

    /// Raw channel names accepted by this chart type, with their class.
    pub fn channels(self) -> &'static [(&'static str, ChannelClass)] {
        use ChannelClass::*;
        match self {
            ChartType::Bar | ChartType::Area | ChartType::Streamgraph => {
                &[("x", PositionX), ("y", PositionY), ("fill", Color)]
            }
            ChartType::Line => &[
                ("x", PositionX),
                ("y", PositionY),
                ("stroke", Color),
                ("strokeWidth", Size),
            ],
            ChartType::Pie => &[("theta", Angle), ("fill", Color)],
            ChartType::Scatter => &[("x", PositionX), ("y", PositionY), ("fill", Color), ("size", Size)],
        }
    }

    /// Bars, areas and streams encode magnitude by length from a zero baseline.
    pub fn has_zero_baseline(self) -> bool {
        matches!(self, ChartType::Bar | ChartType::Area | ChartType::Streamgraph)
    }
}

impl fmt::Display for ChartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Stroke color of unfilled charts and fill color of filled charts both
/// resolve to [`ChannelClass::Color`].
pub fn channel_class(chart: ChartType, raw_channel: &str) -> Result<ChannelClass, ModelError> {
    chart
        .channels()
        .iter()
        .find(|(name, _)| *name == raw_channel)
        .map(|(_, class)| *class)
        .ok_or_else(|| ModelError::UnknownChannel {
            chart,
            channel: raw_channel.to_string(),
        })
}

/// The raw channel name a chart type uses for a class, if any.
pub fn raw_channel_for(chart: ChartType, class: ChannelClass) -> Option<&'static str> {
    chart
        .channels()
        .iter()
        .find(|(_, c)| *c == class)
        .map(|(name, _)| *name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Composition {
    Single,
    Grouped,
    Stacked,
    Mirrored,
    Overlaid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub y_field: FieldRef,
    pub color: VisualOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Cell {
    pub row: u32,
    pub col: u32,
    pub row_span: u32,
    pub col_span: u32,
}

impl Cell {
    pub fn at(row: u32, col: u32) -> Self {
        Self {
            row,
            col,
            row_span: 1,
            col_span: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBinding {
    pub raw_channel: String,
    pub class: ChannelClass,
    pub mapping: DataMapping,
    pub domain: Option<DataDomain>,
    pub visual: VisualOutput,
}

#[derive(Debug, Clone, PartialEq)]
pub struct View {
    pub id: String,
    pub chart_type: ChartType,
    pub grouping: String,
    pub composition: Composition,
    pub series: Vec<Series>,
    pub bindings: BTreeMap<ChannelClass, ChannelBinding>,
    pub cell: Cell,
}

impl View {
    pub fn binding(&self, class: ChannelClass) -> Option<&ChannelBinding> {
        self.bindings.get(&class)
    }

    pub fn binding_mut(&mut self, class: ChannelClass) -> Option<&mut ChannelBinding> {
        self.bindings.get_mut(&class)
    }

    pub fn is_integrated(&self) -> bool {
        self.composition != Composition::Single
    }

    /// Fields shown on the value axis: the series fields of integrated
    /// views, otherwise the PositionY (or pie angle) mapping.
    pub fn value_fields(&self) -> Vec<FieldRef> {
        if self.is_integrated() {
            return self.series.iter().map(|s| s.y_field.clone()).collect();
        }
        [ChannelClass::PositionY, ChannelClass::Angle]
            .into_iter()
            .filter_map(|c| self.binding(c))
            .filter_map(|b| b.mapping.field().cloned())
            .take(1)
            .collect()
    }
}

/// A multi-view visualization over one tabular dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Canvas {
    pub dataset: Arc<Dataset>,
    pub views: Vec<View>,
    pub registry: EquivalenceRegistry,
}

impl Canvas {
    pub fn new(dataset: Arc<Dataset>, views: Vec<View>, registry: EquivalenceRegistry) -> Self {
        Self {
            dataset,
            views,
            registry,
        }
    }

    pub fn view(&self, id: &str) -> Option<&View> {
        self.views.iter().find(|v| v.id == id)
    }

    pub fn view_mut(&mut self, id: &str) -> Option<&mut View> {
        self.views.iter_mut().find(|v| v.id == id)
    }
}

/// One (grouping, channel, data, visual) tuple of a view.
#[derive(Debug, Clone, PartialEq)]
pub struct GcdvTuple {
    pub g: String,
    pub c: ChannelClass,
    pub d: DataMapping,
    pub v: VisualOutput,
    pub domain: Option<DataDomain>,
    pub view_id: String,
}

/// One tuple per binding; integrated views emit one PositionY tuple per series.
pub fn tuples_of(view: &View) -> Vec<GcdvTuple> {
    let mut out = Vec::with_capacity(view.bindings.len() + view.series.len());
    for (class, binding) in &view.bindings {
        let tuple = |d: DataMapping| GcdvTuple {
            g: view.grouping.clone(),
            c: *class,
            d,
            v: binding.visual.clone(),
            domain: binding.domain.clone(),
            view_id: view.id.clone(),
        };
        if *class == ChannelClass::PositionY && view.is_integrated() && !view.series.is_empty() {
            for s in &view.series {
                out.push(tuple(DataMapping::Mapped(s.y_field.clone())));
            }
        } else {
            out.push(tuple(binding.mapping.clone()));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriState {
    Equal,
    Different,
    NeedsConfirmation,
}

pub fn grouping_eq(a: &View, b: &View, registry: &EquivalenceRegistry) -> TriState {
    if a.grouping == b.grouping || registry.same_class(&a.grouping, &b.grouping) {
        TriState::Equal
    } else {
        TriState::Different
    }
}

pub fn data_eq(a: &GcdvTuple, b: &GcdvTuple, g_eq: TriState, registry: &EquivalenceRegistry) -> TriState {
    // a numeric field and a categorical one can never be the same quantity
    let kinds_differ = matches!(
        (&a.domain, &b.domain),
        (Some(x), Some(y)) if std::mem::discriminant(x) != std::mem::discriminant(y)
    );
    if kinds_differ && a.d != b.d {
        return TriState::Different;
    }
    field_eq(&a.d, &b.d, g_eq, registry)
}

/// [`data_eq`] over bare mappings.
pub fn field_eq(a: &DataMapping, b: &DataMapping, g_eq: TriState, registry: &EquivalenceRegistry) -> TriState {
    match (a, b) {
        (DataMapping::Empty, DataMapping::Empty) => {
            if g_eq == TriState::Equal {
                TriState::Equal
            } else {
                TriState::Different
            }
        }
        (DataMapping::Empty, _) | (_, DataMapping::Empty) => TriState::Different,
        (DataMapping::Mapped(fa), DataMapping::Mapped(fb)) => {
            if fa == fb {
                return TriState::Equal;
            }
            match registry.sameness(fa, fb) {
                Sameness::Same => TriState::Equal,
                Sameness::Different => TriState::Different,
                Sameness::Unknown => TriState::NeedsConfirmation,
            }
        }
    }
}

fn ranges_eq(a: (f64, f64), b: (f64, f64)) -> bool {
    let close = |x: f64, y: f64| {
        let scale = x.abs().max(y.abs()).max(1.0);
        (x - y).abs() <= RANGE_TOLERANCE * scale
    };
    close(a.0, b.0) && close(a.1, b.1)
}

/// Visual-output equality. A constant color collides with any scheme that
/// assigns it, and a categorical scheme collides with a continuous ramp that
/// shares one of its colors.
pub fn visual_eq(a: &VisualOutput, b: &VisualOutput) -> Result<bool, ModelError> {
    use VisualOutput::*;
    if a.family() != b.family() {
        return Err(ModelError::ClassMismatch {
            a: a.family(),
            b: b.family(),
        });
    }
    Ok(match (a, b) {
        (PositionRange { min: a0, max: a1 }, PositionRange { min: b0, max: b1 })
        | (SizeRange { min: a0, max: a1 }, SizeRange { min: b0, max: b1 }) => ranges_eq((*a0, *a1), (*b0, *b1)),
        (ConstantColor(x), ConstantColor(y)) => x == y,
        (ConstantColor(c), ColorScheme(s)) | (ColorScheme(s), ConstantColor(c)) => s.colors().any(|x| x == c),
        (ColorScheme(x), ColorScheme(y)) => {
            if x.kind == y.kind {
                // the scheme id is a name only; what is seen is the assignment
                x.assignment == y.assignment
            } else {
                x.colors().any(|cx| y.colors().any(|cy| cx == cy))
            }
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::EquivalenceRegistry;

    fn red() -> VisualOutput {
        VisualOutput::ConstantColor(Rgb::parse("#d62728").unwrap())
    }

    fn tuple(g: &str, d: DataMapping) -> GcdvTuple {
        GcdvTuple {
            g: g.into(),
            c: ChannelClass::Color,
            d,
            v: red(),
            domain: None,
            view_id: "v".into(),
        }
    }

    fn view(id: &str, grouping: &str) -> View {
        View {
            id: id.into(),
            chart_type: ChartType::Bar,
            grouping: grouping.into(),
            composition: Composition::Single,
            series: vec![],
            bindings: BTreeMap::new(),
            cell: Cell::at(0, 0),
        }
    }

    #[test]
    fn stroke_and_fill_unify_to_color() {
        assert_eq!(channel_class(ChartType::Line, "stroke"), Ok(ChannelClass::Color));
        assert_eq!(channel_class(ChartType::Bar, "fill"), Ok(ChannelClass::Color));
        assert_eq!(channel_class(ChartType::Scatter, "x"), Ok(ChannelClass::PositionX));
        assert_eq!(channel_class(ChartType::Pie, "theta"), Ok(ChannelClass::Angle));
        assert!(matches!(
            channel_class(ChartType::Pie, "x"),
            Err(ModelError::UnknownChannel { .. })
        ));
        assert!(channel_class(ChartType::Line, "fill").is_err());
    }

    #[test]
    fn canonical_field_text() {
        let f = FieldRef::new("Europe", Aggregate::Sum);
        assert_eq!(f.canonical(), "sum(Europe)");
        assert_eq!(
            FieldRef::parse("sum(North America)"),
            Some(FieldRef::new("North America", Aggregate::Sum))
        );
        assert_eq!(FieldRef::parse("state"), Some(FieldRef::raw("state")));
        assert_eq!(FieldRef::count().canonical(), "count(*)");
        assert_eq!(FieldRef::parse("median(x)"), Some(FieldRef::raw("median(x)")));
    }

    #[test]
    fn grouping_equality() {
        let reg = EquivalenceRegistry::default();
        assert_eq!(
            grouping_eq(&view("a", "category"), &view("b", "category"), &reg),
            TriState::Equal
        );
        assert_eq!(
            grouping_eq(&view("a", "gender"), &view("b", "age group"), &reg),
            TriState::Different
        );
        let reg = reg
            .record(&FieldRef::raw("state"), &FieldRef::raw("region"), true)
            .unwrap();
        assert_eq!(
            grouping_eq(&view("a", "state"), &view("b", "region"), &reg),
            TriState::Equal
        );
    }

    #[test]
    fn data_equality_rules() {
        let reg = EquivalenceRegistry::default();
        let mean_price = DataMapping::Mapped(FieldRef::new("price", Aggregate::Mean));
        let europe = DataMapping::Mapped(FieldRef::new("Europe", Aggregate::Sum));
        let na = DataMapping::Mapped(FieldRef::new("North America", Aggregate::Sum));
        let eq = |a: &DataMapping, b: &DataMapping, g| data_eq(&tuple("g", a.clone()), &tuple("g", b.clone()), g, &reg);
        assert_eq!(eq(&mean_price, &mean_price, TriState::Equal), TriState::Equal);
        assert_eq!(eq(&europe, &na, TriState::Equal), TriState::NeedsConfirmation);
        assert_eq!(
            eq(&DataMapping::Empty, &DataMapping::Empty, TriState::Different),
            TriState::Different
        );
        assert_eq!(
            eq(&DataMapping::Empty, &DataMapping::Empty, TriState::Equal),
            TriState::Equal
        );
        assert_eq!(eq(&DataMapping::Empty, &europe, TriState::Equal), TriState::Different);
    }

    #[test]
    fn visual_equality() {
        let green = VisualOutput::ConstantColor(Rgb::parse("#2ca02c").unwrap());
        assert_eq!(visual_eq(&red(), &red()), Ok(true));
        assert_eq!(visual_eq(&red(), &green), Ok(false));
        let r = |a, b| VisualOutput::PositionRange { min: a, max: b };
        assert_eq!(visual_eq(&r(0.0, 100.0), &r(0.0, 120.0)), Ok(false));
        assert_eq!(visual_eq(&r(0.0, 100.0), &r(0.0, 100.0 + 1e-12)), Ok(true));
        assert!(matches!(
            visual_eq(&r(0.0, 1.0), &red()),
            Err(ModelError::ClassMismatch { .. })
        ));

        let scheme = |id: &str, kind, colors: &[(&str, &str)]| {
            VisualOutput::ColorScheme(ColorScheme {
                scheme_id: id.into(),
                kind,
                assignment: colors
                    .iter()
                    .map(|(k, c)| (k.to_string(), Rgb::parse(c).unwrap()))
                    .collect(),
            })
        };
        let gender = scheme(
            "g",
            SchemeKind::Categorical,
            &[("male", "#ff7f0e"), ("female", "#d62728")],
        );
        assert_eq!(visual_eq(&red(), &gender), Ok(true));
        assert_eq!(visual_eq(&gender, &red()), Ok(true));
        assert_eq!(visual_eq(&green, &gender), Ok(false));
        let ramp = scheme(
            "blues",
            SchemeKind::Continuous,
            &[("start", "#deebf7"), ("end", "#d62728")],
        );
        assert_eq!(visual_eq(&gender, &ramp), Ok(true));
        // the scheme name is a label; only the assignment is visible
        let renamed = scheme(
            "g2",
            SchemeKind::Categorical,
            &[("male", "#ff7f0e"), ("female", "#d62728")],
        );
        assert_eq!(visual_eq(&gender, &renamed), Ok(true));
        let swapped = scheme(
            "g",
            SchemeKind::Categorical,
            &[("male", "#d62728"), ("female", "#ff7f0e")],
        );
        assert_eq!(visual_eq(&gender, &swapped), Ok(false));
    }

    #[test]
    fn rgb_validation() {
        assert_eq!(Rgb::parse("#ABCDEF").unwrap().as_str(), "#abcdef");
        assert!(Rgb::parse("#abc").is_err());
        assert!(Rgb::parse("#gggggg").is_err());
    }
}
