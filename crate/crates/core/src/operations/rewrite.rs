use std::fmt;

use serde::{Deserialize, Serialize};

use super::OperationError;
use crate::config::Palette;
use crate::data::union_domain;
use crate::model::{
    field_eq, raw_channel_for, visual_eq, Canvas, ChannelClass, ChartType, ColorScheme, Composition, DataDomain,
    DataMapping, SchemeKind, Series, TriState, View, VisualOutput,
};
use crate::relations::{integrable, is_confuser, is_hallucinator, PairContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegrationVariant {
    Overlay,
    Group,
    Stack,
    Mirror,
}

impl IntegrationVariant {
    pub const ALL: [IntegrationVariant; 4] = [
        IntegrationVariant::Overlay,
        IntegrationVariant::Group,
        IntegrationVariant::Stack,
        IntegrationVariant::Mirror,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntegrationVariant::Overlay => "overlay",
            IntegrationVariant::Group => "group",
            IntegrationVariant::Stack => "stack",
            IntegrationVariant::Mirror => "mirror",
        }
    }

    pub fn composition(self) -> Composition {
        match self {
            IntegrationVariant::Overlay => Composition::Overlaid,
            IntegrationVariant::Group => Composition::Grouped,
            IntegrationVariant::Stack => Composition::Stacked,
            IntegrationVariant::Mirror => Composition::Mirrored,
        }
    }

    pub fn supports(self, chart: ChartType) -> bool {
        use ChartType::*;
        match self {
            IntegrationVariant::Overlay => matches!(chart, Scatter | Line),
            IntegrationVariant::Mirror => matches!(chart, Line | Area | Bar | Streamgraph),
            IntegrationVariant::Stack => matches!(chart, Bar | Area | Streamgraph),
            IntegrationVariant::Group => matches!(chart, Bar),
        }
    }

    /// Mirror and overlay take exactly two views.
    pub fn binary_only(self) -> bool {
        matches!(self, IntegrationVariant::Overlay | IntegrationVariant::Mirror)
    }

    /// Checks chart type, arity and existing compositions of the members.
    pub fn applicable_to(self, members: &[&View]) -> Result<(), OperationError> {
        let unsupported = |detail: String| OperationError::UnsupportedVariant {
            variant: self.name().to_string(),
            detail,
        };
        let Some(first) = members.first() else {
            return Err(unsupported("an empty group".into()));
        };
        if members.len() < 2 {
            return Err(unsupported("a single view".into()));
        }
        if !self.supports(first.chart_type) {
            return Err(unsupported(format!("{} charts", first.chart_type)));
        }
        if self.binary_only() && members.len() != 2 {
            return Err(unsupported(format!("{} views", members.len())));
        }
        for m in members {
            let ok = match m.composition {
                Composition::Single => true,
                c => c == self.composition() && self != IntegrationVariant::Mirror,
            };
            if !ok {
                return Err(unsupported(format!("already integrated view `{}`", m.id)));
            }
            let has_values = m.is_integrated()
                || m.binding(ChannelClass::PositionY)
                    .is_some_and(|b| b.mapping.is_mapped());
            if !has_values {
                return Err(OperationError::EmptyMapping {
                    view: m.id.clone(),
                    class: ChannelClass::PositionY,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntegrationVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn view<'c>(canvas: &'c Canvas, id: &str) -> Result<&'c View, OperationError> {
    canvas
        .view(id)
        .ok_or_else(|| OperationError::UnknownView(id.to_string()))
}

pub fn delete_view(canvas: &Canvas, view_id: &str) -> Result<Canvas, OperationError> {
    view(canvas, view_id)?;
    let mut next = canvas.clone();
    next.views.retain(|v| v.id != view_id);
    Ok(next)
}

fn mapped_domain(v: &View, class: ChannelClass) -> Result<DataDomain, OperationError> {
    v.binding(class)
        .filter(|b| b.mapping.is_mapped())
        .and_then(|b| b.domain.clone())
        .ok_or_else(|| OperationError::EmptyMapping {
            view: v.id.clone(),
            class,
        })
}

/// Sets both views' domains on `class` to the union of the two.
pub fn homogenize_data(canvas: &Canvas, a: &str, b: &str, class: ChannelClass) -> Result<Canvas, OperationError> {
    let da = mapped_domain(view(canvas, a)?, class)?;
    let db = mapped_domain(view(canvas, b)?, class)?;
    let merged = union_domain(&da, &db)?;
    let mut next = canvas.clone();
    // views already sharing either old scale follow along, so no pair that
    // agreed before disagrees afterwards
    for v in next.views.iter_mut() {
        let follows = v.id == a || v.id == b;
        if let Some(binding) = v.binding_mut(class) {
            let shared = binding.domain.as_ref().is_some_and(|d| *d == da || *d == db);
            if follows || shared {
                binding.domain = Some(merged.clone());
            }
        }
    }
    Ok(next)
}

/// Copies the source view's visual output on `class` onto the target and
/// unifies their domains on that class.
pub fn homogenize_style(
    canvas: &Canvas,
    target: &str,
    source: &str,
    class: ChannelClass,
) -> Result<Canvas, OperationError> {
    let (t, s) = (view(canvas, target)?, view(canvas, source)?);
    let ctx = PairContext::new(t, s, &canvas.registry);
    let witnessed = is_hallucinator(&ctx).is_some_and(|ws| ws.iter().any(|w| w.channel_class == class));
    if !witnessed {
        return Err(OperationError::NoWitness {
            kind: "hallucinator",
            class,
            a: target.to_string(),
            b: source.to_string(),
        });
    }
    let source_binding = s.binding(class).cloned().expect("witness implies binding");
    let merged = match (
        t.binding(class).and_then(|b| b.domain.as_ref()),
        source_binding.domain.as_ref(),
    ) {
        (Some(x), Some(y)) => union_domain(x, y).ok(),
        _ => None,
    };
    let mut next = canvas.clone();
    for id in [target, source] {
        let v = next.view_mut(id).expect("checked above");
        let is_target = id == target;
        if let Some(b) = v.binding_mut(class) {
            if is_target {
                b.visual = source_binding.visual.clone();
            }
            if let Some(m) = &merged {
                b.domain = Some(m.clone());
            }
        }
        if is_target {
            sync_series_colors(v);
        }
    }
    Ok(next)
}

fn candidates(current: &VisualOutput, palette: &Palette) -> Vec<VisualOutput> {
    match current {
        VisualOutput::ConstantColor(_) => palette
            .constants
            .iter()
            .cloned()
            .map(VisualOutput::ConstantColor)
            .collect(),
        VisualOutput::ColorScheme(s) => palette
            .schemes
            .iter()
            .filter(|p| !p.colors.is_empty())
            .map(|p| {
                let assignment = match s.kind {
                    SchemeKind::Categorical => s
                        .assignment
                        .iter()
                        .enumerate()
                        .map(|(i, (k, _))| (k.clone(), p.colors[i % p.colors.len()].clone()))
                        .collect(),
                    SchemeKind::Continuous => vec![
                        ("start".to_string(), p.colors[0].clone()),
                        ("end".to_string(), p.colors[p.colors.len() - 1].clone()),
                    ],
                };
                VisualOutput::ColorScheme(ColorScheme {
                    scheme_id: p.id.clone(),
                    kind: s.kind,
                    assignment,
                })
            })
            .collect(),
        VisualOutput::SizeRange { .. } => palette
            .sizes
            .iter()
            .map(|&(min, max)| VisualOutput::SizeRange { min, max })
            .collect(),
        VisualOutput::PositionRange { .. } => Vec::new(),
    }
}

/// First palette entry of the same variant as `current` that is not
/// v-equal to any output in `avoid`.
pub fn pick_distinct_output<'a>(
    current: &VisualOutput,
    avoid: impl IntoIterator<Item = &'a VisualOutput> + Clone,
    palette: &Palette,
    class: ChannelClass,
) -> Result<VisualOutput, OperationError> {
    candidates(current, palette)
        .into_iter()
        .find(|cand| {
            cand != current
                && avoid
                    .clone()
                    .into_iter()
                    .all(|other| !visual_eq(cand, other).unwrap_or(false))
        })
        .ok_or(OperationError::PaletteExhausted(class))
}

/// Outputs of every other view on `class`.
fn outputs_elsewhere<'c>(canvas: &'c Canvas, exclude: &[&str], class: ChannelClass) -> Vec<&'c VisualOutput> {
    canvas
        .views
        .iter()
        .filter(|v| !exclude.contains(&v.id.as_str()))
        .filter_map(|v| v.binding(class))
        .map(|b| &b.visual)
        .collect()
}

/// The output `differentiate` would assign, without applying it.
pub(super) fn differentiated_output(
    canvas: &Canvas,
    view_id: &str,
    class: ChannelClass,
    palette: &Palette,
) -> Result<VisualOutput, OperationError> {
    let v = view(canvas, view_id)?;
    let current = &v
        .binding(class)
        .ok_or_else(|| OperationError::EmptyMapping {
            view: view_id.to_string(),
            class,
        })?
        .visual;
    let avoid = outputs_elsewhere(canvas, &[view_id], class);
    pick_distinct_output(current, avoid.iter().copied(), palette, class)
}

/// Gives `view_id` a new output on `class` that collides with no other view.
pub fn differentiate(
    canvas: &Canvas,
    view_id: &str,
    class: ChannelClass,
    palette: &Palette,
) -> Result<Canvas, OperationError> {
    let v = view(canvas, view_id)?;
    let witnessed = canvas.views.iter().filter(|o| o.id != view_id).any(|o| {
        let ctx = PairContext::new(v, o, &canvas.registry);
        is_confuser(&ctx).is_some_and(|ws| ws.iter().any(|w| w.channel_class == class))
    });
    if !witnessed {
        return Err(OperationError::NoWitness {
            kind: "confuser",
            class,
            a: view_id.to_string(),
            b: "any view".to_string(),
        });
    }
    let output = differentiated_output(canvas, view_id, class, palette)?;
    let mut next = canvas.clone();
    let v = next.view_mut(view_id).expect("checked above");
    if let Some(b) = v.binding_mut(class) {
        b.visual = output;
    }
    if class == ChannelClass::Color {
        sync_series_colors(v);
    }
    Ok(next)
}

/// Keeps series colors of an integrated view in step with a categorical
/// color scheme keyed by series label.
fn sync_series_colors(v: &mut View) {
    let Some(VisualOutput::ColorScheme(scheme)) = v.binding(ChannelClass::Color).map(|b| b.visual.clone()) else {
        return;
    };
    for s in &mut v.series {
        if let Some(c) = scheme.color_for(&s.label) {
            s.color = VisualOutput::ConstantColor(c.clone());
        }
    }
}

fn union_all(domains: impl IntoIterator<Item = Option<DataDomain>>) -> Option<DataDomain> {
    domains
        .into_iter()
        .flatten()
        .try_fold(None::<DataDomain>, |acc, d| match acc {
            None => Some(Some(d)),
            Some(a) => union_domain(&a, &d).ok().map(Some),
        })
        .flatten()
}

fn default_series_color(palette: &Palette) -> VisualOutput {
    palette
        .constants
        .first()
        .cloned()
        .map(VisualOutput::ConstantColor)
        .unwrap_or(VisualOutput::ConstantColor(
            crate::model::Rgb::parse("#4e79a7").expect("valid"),
        ))
}

/// Replaces the group's views with one integrated view placed at the first
/// member's cell.
pub fn integrate_views(
    canvas: &Canvas,
    group: &[String],
    variant: IntegrationVariant,
    palette: &Palette,
) -> Result<Canvas, OperationError> {
    let members = group.iter().map(|id| view(canvas, id)).collect::<Result<Vec<_>, _>>()?;
    let first = *members.first().ok_or_else(|| OperationError::UnsupportedVariant {
        variant: variant.name().to_string(),
        detail: "an empty group".into(),
    })?;
    if members.iter().any(|m| m.chart_type != first.chart_type) {
        return Err(OperationError::IncompatibleChartTypes(group.to_vec()));
    }
    variant.applicable_to(&members)?;
    if members[1..].iter().any(|m| !integrable(first, m, &canvas.registry)) {
        return Err(OperationError::UnsharedXAxis(group.to_vec()));
    }

    let mut series: Vec<Series> = Vec::new();
    for m in &members {
        if m.is_integrated() {
            series.extend(m.series.iter().cloned());
            continue;
        }
        let field = m
            .binding(ChannelClass::PositionY)
            .and_then(|b| b.mapping.field().cloned())
            .ok_or_else(|| OperationError::EmptyMapping {
                view: m.id.clone(),
                class: ChannelClass::PositionY,
            })?;
        let color = m
            .binding(ChannelClass::Color)
            .map(|b| b.visual.clone())
            .unwrap_or_else(|| default_series_color(palette));
        series.push(Series {
            label: field.canonical(),
            y_field: field,
            color,
        });
    }

    let member_ids: Vec<&str> = group.iter().map(String::as_str).collect();
    let elsewhere = outputs_elsewhere(canvas, &member_ids, ChannelClass::Color);
    for i in 1..series.len() {
        let collides = series[..i]
            .iter()
            .any(|s| visual_eq(&s.color, &series[i].color).unwrap_or(false));
        if collides {
            let avoid: Vec<&VisualOutput> = series[..i]
                .iter()
                .map(|s| &s.color)
                .chain(elsewhere.iter().copied())
                .collect();
            series[i].color =
                pick_distinct_output(&series[i].color, avoid.iter().copied(), palette, ChannelClass::Color)?;
        }
    }

    let mut merged = first.clone();
    merged.composition = variant.composition();
    if let Some(y) = merged.binding_mut(ChannelClass::PositionY) {
        y.mapping = DataMapping::Mapped(series[0].y_field.clone());
        y.domain = union_all(
            members
                .iter()
                .map(|m| m.binding(ChannelClass::PositionY).and_then(|b| b.domain.clone())),
        );
    }
    if let Some(x) = merged.binding_mut(ChannelClass::PositionX) {
        if x.mapping.is_mapped() {
            x.domain = union_all(
                members
                    .iter()
                    .map(|m| m.binding(ChannelClass::PositionX).and_then(|b| b.domain.clone())),
            );
        }
    }
    let shared_color = first.binding(ChannelClass::Color).map(|fc| {
        members.iter().all(|m| {
            m.binding(ChannelClass::Color).is_some_and(|mc| {
                field_eq(&fc.mapping, &mc.mapping, TriState::Equal, &canvas.registry) == TriState::Equal
            })
        })
    });
    if let Some(c) = merged.binding_mut(ChannelClass::Color) {
        if shared_color == Some(true) && c.mapping.is_mapped() {
            c.domain = union_all(
                members
                    .iter()
                    .map(|m| m.binding(ChannelClass::Color).and_then(|b| b.domain.clone())),
            );
        } else {
            c.mapping = DataMapping::Empty;
            c.domain = None;
        }
        c.visual = VisualOutput::ColorScheme(ColorScheme {
            scheme_id: "series".to_string(),
            kind: SchemeKind::Categorical,
            assignment: series
                .iter()
                .map(|s| {
                    let key = s.color.key_color().cloned().expect("series colors are color outputs");
                    (s.label.clone(), key)
                })
                .collect(),
        });
    }
    merged.series = series;

    let mut next = canvas.clone();
    next.views = canvas
        .views
        .iter()
        .filter_map(|v| {
            if v.id == first.id {
                Some(merged.clone())
            } else if member_ids.contains(&v.id.as_str()) {
                None
            } else {
                Some(v.clone())
            }
        })
        .collect();
    Ok(next)
}

/// Moves the bindings that only `superset` maps onto `subset`, then deletes
/// `superset`.
pub fn transfer_mapping(
    canvas: &Canvas,
    subset: &str,
    superset: &str,
    classes: &[ChannelClass],
) -> Result<Canvas, OperationError> {
    let sup = view(canvas, superset)?.clone();
    view(canvas, subset)?;
    let mut next = canvas.clone();
    let target = next.view_mut(subset).expect("checked above");
    for &class in classes {
        let Some(donor) = sup.binding(class) else {
            return Err(OperationError::EmptyMapping {
                view: superset.to_string(),
                class,
            });
        };
        let raw = raw_channel_for(target.chart_type, class).ok_or_else(|| OperationError::UnsupportedVariant {
            variant: "transfer".into(),
            detail: format!("{} channel on {} charts", class, target.chart_type),
        })?;
        let mut binding = donor.clone();
        binding.raw_channel = raw.to_string();
        target.bindings.insert(class, binding);
    }
    next.views.retain(|v| v.id != superset);
    Ok(next)
}
