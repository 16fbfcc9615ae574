//! Typed tabular data, grouped aggregation, and the data domains that back
//! each channel binding.

use std::collections::{BTreeSet, HashMap};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Aggregate, ChannelBinding, ChannelClass, DataDomain, DataMapping, FieldRef, View};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("malformed CSV at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("row {row}, column `{column}`: `{value}` is not a valid {expected} value")]
    Type {
        row: usize,
        column: String,
        value: String,
        expected: ColumnType,
    },
    #[error("column `{0}` is declared in the schema but missing from the CSV header")]
    Schema(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("group `{group}` has {rows} rows but `{field}` is not aggregated")]
    NonScalarGroup { group: String, rows: usize, field: String },
    #[error("`{field}` needs a quantitative column")]
    NonQuantitative { field: String },
    #[error("dataset has no rows")]
    EmptyData,
    #[error("binding on `{0}` has no data mapping")]
    UnmappedBinding(String),
    #[error("cannot combine a quantitative domain with a categorical one")]
    VariantMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    Nominal,
    Ordinal,
    Quantitative,
    Temporal,
}

impl std::fmt::Display for ColumnType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ColumnType::Nominal => "nominal",
            ColumnType::Ordinal => "ordinal",
            ColumnType::Quantitative => "quantitative",
            ColumnType::Temporal => "temporal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ColumnType,
    /// Explicit category order for ordinal columns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

impl Column {
    pub fn new(name: impl Into<String>, kind: ColumnType) -> Self {
        Self {
            name: name.into(),
            kind,
            order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Number(f64),
    Date(NaiveDate),
}

impl Value {
    /// Label used for grouping keys and categorical domains.
    pub fn key(&self) -> String {
        match self {
            Value::Text(s) => s.clone(),
            Value::Number(n) => format_number(*n),
            Value::Date(d) => d.format("%Y-%m-%d").to_string(),
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(n) => Some(*n),
            _ => None,
        }
    }
}

pub fn format_number(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

/// Where the rows came from; kept so documents serialize back unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSource {
    File(String),
    Inline(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub source: DatasetSource,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

impl Dataset {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn has_field(&self, field: &FieldRef) -> bool {
        (field.column == FieldRef::ANY_COLUMN && field.aggregate == Aggregate::Count)
            || self.column_index(&field.column).is_some()
    }

    /// Whether a field yields numbers (aggregates, or raw quantitative columns).
    pub fn is_quantitative(&self, field: &FieldRef) -> bool {
        match field.aggregate {
            Aggregate::None => self
                .column(&field.column)
                .is_some_and(|c| c.kind == ColumnType::Quantitative),
            _ => true,
        }
    }

    fn column_or_err(&self, name: &str) -> Result<(usize, &Column), DataError> {
        self.column_index(name)
            .map(|i| (i, &self.columns[i]))
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    /// Distinct values of a column in grouping order: first appearance for
    /// nominal columns, sorted for ordinal, temporal and quantitative ones.
    pub fn distinct_keys(&self, column: &str) -> Result<Vec<String>, DataError> {
        let (idx, col) = self.column_or_err(column)?;
        Ok(self.ordered_keys(idx, col, 0..self.rows.len()))
    }

    fn ordered_keys(&self, idx: usize, col: &Column, rows: impl Iterator<Item = usize>) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut firsts: Vec<&Value> = Vec::new();
        for r in rows {
            let v = &self.rows[r][idx];
            if seen.insert(v.key()) {
                firsts.push(v);
            }
        }
        match col.kind {
            ColumnType::Nominal => {}
            ColumnType::Ordinal => {
                let rank = |k: &str| {
                    col.order
                        .as_ref()
                        .and_then(|o| o.iter().position(|x| x == k))
                        .unwrap_or(usize::MAX)
                };
                firsts.sort_by(|a, b| {
                    let (ka, kb) = (a.key(), b.key());
                    rank(&ka).cmp(&rank(&kb)).then(ka.cmp(&kb))
                });
            }
            ColumnType::Quantitative => firsts.sort_by(|a, b| {
                a.as_number()
                    .unwrap_or(f64::NAN)
                    .total_cmp(&b.as_number().unwrap_or(f64::NAN))
            }),
            ColumnType::Temporal => firsts.sort_by(|a, b| match (a, b) {
                (Value::Date(x), Value::Date(y)) => x.cmp(y),
                _ => a.key().cmp(&b.key()),
            }),
        }
        firsts.into_iter().map(Value::key).collect()
    }
}

fn parse_cell(raw: &str, kind: ColumnType) -> Option<Value> {
    match kind {
        ColumnType::Nominal | ColumnType::Ordinal => Some(Value::Text(raw.to_string())),
        ColumnType::Quantitative => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|n| n.is_finite())
            .map(Value::Number),
        ColumnType::Temporal => NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d").ok().map(Value::Date),
    }
}

/// Parses RFC-4180 CSV text (header row first) against a column schema.
/// Header columns absent from the schema are dropped.
pub fn load_dataset(name: &str, text: &str, schema: &[Column], source: DatasetSource) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| DataError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let positions = schema
        .iter()
        .map(|col| {
            header
                .iter()
                .position(|h| h.trim() == col.name)
                .ok_or_else(|| DataError::Schema(col.name.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DataError::Parse {
            line: e.position().map_or(i as u64 + 2, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = schema
            .iter()
            .zip(&positions)
            .map(|(col, &pos)| {
                let raw = record.get(pos).unwrap_or("");
                parse_cell(raw, col.kind).ok_or_else(|| DataError::Type {
                    row: i + 1,
                    column: col.name.clone(),
                    value: raw.to_string(),
                    expected: col.kind,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Dataset {
        name: name.to_string(),
        source,
        columns: schema.to_vec(),
        rows,
    })
}

/// One aggregate per distinct grouping value.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub keys: Vec<String>,
    pub values: Vec<f64>,
}

impl SeriesTable {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.keys.iter().position(|k| k == key).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.keys.iter().map(String::as_str).zip(self.values.iter().copied())
    }
}

fn reduce(agg: Aggregate, values: &[f64], rows: usize, field: &FieldRef, group: &str) -> Result<f64, DataError> {
    Ok(match agg {
        Aggregate::Count => rows as f64,
        Aggregate::Sum => values.iter().sum(),
        Aggregate::Mean => values.iter().sum::<f64>() / values.len().max(1) as f64,
        Aggregate::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        Aggregate::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        Aggregate::None => {
            if rows != 1 {
                return Err(DataError::NonScalarGroup {
                    group: group.to_string(),
                    rows,
                    field: field.canonical(),
                });
            }
            values[0]
        }
    })
}

/// Aggregates `field` over the rows selected by `filter`, grouped by `grouping`.
pub fn group_aggregate_where(
    dataset: &Dataset,
    grouping: &str,
    field: &FieldRef,
    filter: impl Fn(&[Value]) -> bool,
) -> Result<SeriesTable, DataError> {
    let (g_idx, g_col) = dataset.column_or_err(grouping)?;
    let value_idx = if field.column == FieldRef::ANY_COLUMN && field.aggregate == Aggregate::Count {
        None
    } else {
        let (idx, col) = dataset.column_or_err(&field.column)?;
        if field.aggregate != Aggregate::Count && col.kind != ColumnType::Quantitative {
            return Err(DataError::NonQuantitative {
                field: field.canonical(),
            });
        }
        Some(idx)
    };

    let selected: Vec<usize> = (0..dataset.rows.len()).filter(|&r| filter(&dataset.rows[r])).collect();
    let keys = dataset.ordered_keys(g_idx, g_col, selected.iter().copied());
    let mut members: HashMap<String, (usize, Vec<f64>)> = HashMap::new();
    for &r in &selected {
        let row = &dataset.rows[r];
        let entry = members.entry(row[g_idx].key()).or_default();
        entry.0 += 1;
        if let Some(n) = value_idx.and_then(|i| row[i].as_number()) {
            entry.1.push(n);
        }
    }
    let values = keys
        .iter()
        .map(|k| {
            let (rows, vals) = &members[k];
            reduce(field.aggregate, vals, *rows, field, k)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SeriesTable { keys, values })
}

pub fn group_aggregate(dataset: &Dataset, grouping: &str, field: &FieldRef) -> Result<SeriesTable, DataError> {
    group_aggregate_where(dataset, grouping, field, |_| true)
}

/// Aggregated values for every (group, x) cell, for views whose x axis is a
/// raw column different from the grouping (e.g. a streamgraph over time).
pub fn cross_aggregate(
    dataset: &Dataset,
    grouping: &str,
    x_column: &str,
    field: &FieldRef,
) -> Result<Vec<(String, SeriesTable)>, DataError> {
    let (g_idx, _) = dataset.column_or_err(grouping)?;
    dataset
        .distinct_keys(grouping)?
        .into_iter()
        .map(|g| {
            let table = group_aggregate_where(dataset, x_column, field, |row| row[g_idx].key() == g)?;
            Ok((g, table))
        })
        .collect()
}

/// The raw x column of a view when it differs from the grouping.
pub fn secondary_axis(view: &View) -> Option<&str> {
    let x = view.binding(ChannelClass::PositionX)?.mapping.field()?;
    (x.aggregate == Aggregate::None && x.column != view.grouping).then_some(x.column.as_str())
}

fn extent(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    values.into_iter().fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

/// Value extent of a field as shown by a view.
fn field_extent(
    dataset: &Dataset,
    view: &View,
    class: ChannelClass,
    field: &FieldRef,
) -> Result<(f64, f64), DataError> {
    if field.aggregate == Aggregate::None {
        let (idx, _) = dataset.column_or_err(&field.column)?;
        return extent(dataset.rows.iter().filter_map(|r| r[idx].as_number())).ok_or(DataError::EmptyData);
    }
    let values: Vec<f64> = match (class, secondary_axis(view)) {
        (ChannelClass::PositionY, Some(x_col)) => {
            let cells = cross_aggregate(dataset, &view.grouping, x_col, field)?;
            if view.chart_type == crate::model::ChartType::Streamgraph {
                // stacked: the extent is the per-x total
                let mut totals: Vec<(String, f64)> = Vec::new();
                for (_, table) in &cells {
                    for (k, v) in table.iter() {
                        match totals.iter_mut().find(|(tk, _)| tk == k) {
                            Some((_, t)) => *t += v,
                            None => totals.push((k.to_string(), v)),
                        }
                    }
                }
                totals.into_iter().map(|(_, v)| v).collect()
            } else {
                cells.iter().flat_map(|(_, t)| t.values.clone()).collect()
            }
        }
        _ => group_aggregate(dataset, &view.grouping, field)?.values,
    };
    extent(values).ok_or(DataError::EmptyData)
}

/// Domain of a mapped binding: an extent for numeric fields (zero-anchored
/// for bar, area and streamgraph values), otherwise the ordered categories.
pub fn compute_domain(dataset: &Dataset, view: &View, binding: &ChannelBinding) -> Result<DataDomain, DataError> {
    let DataMapping::Mapped(field) = &binding.mapping else {
        return Err(DataError::UnmappedBinding(binding.raw_channel.clone()));
    };
    if dataset.rows.is_empty() {
        return Err(DataError::EmptyData);
    }
    if !dataset.has_field(field) {
        return Err(DataError::UnknownColumn(field.column.clone()));
    }
    if !dataset.is_quantitative(field) {
        return Ok(DataDomain::Categorical {
            values: dataset.distinct_keys(&field.column)?,
        });
    }
    let (lo, hi) = field_extent(dataset, view, binding.class, field)?;
    if binding.class == ChannelClass::PositionY && view.chart_type.has_zero_baseline() {
        Ok(DataDomain::quantitative(lo.min(0.0), hi))
    } else {
        Ok(DataDomain::quantitative(lo, hi))
    }
}

pub fn union_domain(a: &DataDomain, b: &DataDomain) -> Result<DataDomain, DataError> {
    match (a, b) {
        (DataDomain::Quantitative { min: a0, max: a1 }, DataDomain::Quantitative { min: b0, max: b1 }) => {
            Ok(DataDomain::quantitative(a0.min(*b0), a1.max(*b1)))
        }
        (DataDomain::Categorical { values: va }, DataDomain::Categorical { values: vb }) => {
            let mut values = va.clone();
            for v in vb {
                if !values.contains(v) {
                    values.push(v.clone());
                }
            }
            Ok(DataDomain::Categorical { values })
        }
        _ => Err(DataError::VariantMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Vec<Column> {
        vec![
            Column::new("city", ColumnType::Nominal),
            Column::new("day", ColumnType::Temporal),
            Column::new("sales", ColumnType::Quantitative),
        ]
    }

    fn load(text: &str) -> Result<Dataset, DataError> {
        load_dataset("t", text, &schema(), DatasetSource::Inline(text.into()))
    }

    const SAMPLE: &str = "city,day,sales\nOslo,2020-01-02,3\nBergen,2020-01-01,4\nOslo,2020-01-01,-1\n";

    #[test]
    fn loads_typed_rows() {
        let ds = load(SAMPLE).unwrap();
        assert_eq!(ds.rows.len(), 3);
        assert_eq!(ds.rows[0][2], Value::Number(3.0));
        assert!(matches!(ds.rows[0][1], Value::Date(_)));
    }

    #[test]
    fn rejects_bad_cells_and_schema() {
        let err = load("city,day,sales\nOslo,2020-01-02,abc\n").unwrap_err();
        assert_eq!(
            err,
            DataError::Type {
                row: 1,
                column: "sales".into(),
                value: "abc".into(),
                expected: ColumnType::Quantitative
            }
        );
        assert_eq!(
            load("city,sales\nOslo,1\n").unwrap_err(),
            DataError::Schema("day".into())
        );
        assert!(matches!(
            load("city,day,sales\nOslo,2020-01-02\n"),
            Err(DataError::Parse { .. })
        ));
    }

    #[test]
    fn group_order_follows_column_type() {
        let ds = load(SAMPLE).unwrap();
        let by_city = group_aggregate(&ds, "city", &FieldRef::new("sales", Aggregate::Sum)).unwrap();
        assert_eq!(by_city.keys, vec!["Oslo", "Bergen"]);
        assert_eq!(by_city.values, vec![2.0, 4.0]);
        let by_day = group_aggregate(&ds, "day", &FieldRef::count()).unwrap();
        assert_eq!(by_day.keys, vec!["2020-01-01", "2020-01-02"]);
        assert_eq!(by_day.values, vec![2.0, 1.0]);
    }

    #[test]
    fn aggregate_errors() {
        let ds = load(SAMPLE).unwrap();
        assert!(matches!(
            group_aggregate(&ds, "city", &FieldRef::raw("sales")),
            Err(DataError::NonScalarGroup { .. })
        ));
        assert_eq!(
            group_aggregate(&ds, "nope", &FieldRef::count()),
            Err(DataError::UnknownColumn("nope".into()))
        );
        assert!(matches!(
            group_aggregate(&ds, "day", &FieldRef::new("city", Aggregate::Sum)),
            Err(DataError::NonQuantitative { .. })
        ));
    }

    #[test]
    fn domain_union() {
        let q = DataDomain::quantitative;
        assert_eq!(union_domain(&q(0.0, 48.0), &q(0.0, 60.0)), Ok(q(0.0, 60.0)));
        assert_eq!(union_domain(&q(-5.0, 2.0), &q(0.0, 9.0)), Ok(q(-5.0, 9.0)));
        assert_eq!(
            union_domain(
                &DataDomain::categorical(["A", "B"]),
                &DataDomain::categorical(["B", "C"])
            ),
            Ok(DataDomain::categorical(["A", "B", "C"]))
        );
        assert_eq!(
            union_domain(&q(0.0, 1.0), &DataDomain::categorical(["A"])),
            Err(DataError::VariantMismatch)
        );
    }
}
