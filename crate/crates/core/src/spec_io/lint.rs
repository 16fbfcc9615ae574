use serde::{Deserialize, Serialize};

use crate::operations::{confirmation_question, Category};
use crate::relations::{RelationInstance, RelationKind, RelationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportStyle {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LintEntry {
    pub code: String,
    pub relation_id: String,
    pub view_ids: Vec<String>,
    /// Witness channel classes, comma separated.
    pub channel: String,
    pub message: String,
    pub conditional: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    pub suggested: Vec<Category>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LintReport {
    pub entries: Vec<LintEntry>,
}

fn message(r: &RelationInstance) -> String {
    let (a, b) = (&r.view_ids.0, &r.view_ids.1);
    match r.kind {
        RelationKind::FullRedundancy => "full redundancy: both views show the same data under the same grouping".into(),
        RelationKind::PartialRedundancy => {
            let sub = r.subset_view().unwrap_or(a);
            let sup = r.other(sub);
            format!("partial redundancy: everything `{sub}` shows is also in `{sup}`")
        }
        RelationKind::MultiplesSameGrouping if r.domains_differ => {
            "multiples: same grouping, different data, on unequal value scales".into()
        }
        RelationKind::MultiplesSameGrouping => "multiples: same grouping, different data".into(),
        RelationKind::MultiplesSameData => format!("multiples: the same data grouped differently in `{a}` and `{b}`"),
        RelationKind::Hallucinator => "hallucinator: the same data are encoded differently".into(),
        RelationKind::Confuser => "confuser: different data share one encoding".into(),
    }
}

fn suggested(r: &RelationInstance) -> Vec<Category> {
    match r.kind {
        RelationKind::FullRedundancy | RelationKind::PartialRedundancy => vec![Category::Integrate],
        RelationKind::MultiplesSameGrouping if r.domains_differ => vec![Category::HomogenizeData, Category::Integrate],
        RelationKind::MultiplesSameGrouping => vec![Category::Integrate],
        RelationKind::MultiplesSameData => vec![Category::HomogenizeData],
        RelationKind::Hallucinator => vec![Category::HomogenizeStyle],
        RelationKind::Confuser => vec![Category::Differentiate],
    }
}

pub fn lint_report(relations: &RelationSet) -> LintReport {
    let mut entries: Vec<LintEntry> = relations
        .instances
        .iter()
        .map(|r| LintEntry {
            code: r.kind.code().to_string(),
            relation_id: r.id.clone(),
            view_ids: vec![r.view_ids.0.clone(), r.view_ids.1.clone()],
            channel: r
                .witness_classes()
                .iter()
                .map(|c| c.name())
                .collect::<Vec<_>>()
                .join(","),
            message: message(r),
            conditional: r.conditional,
            question: r
                .conditional
                .then(|| {
                    r.pending_confirmations()
                        .first()
                        .map(|(a, b)| confirmation_question(a, b))
                })
                .flatten(),
            suggested: suggested(r),
        })
        .collect();
    entries.sort_by(|x, y| x.code.cmp(&y.code).then_with(|| x.view_ids.cmp(&y.view_ids)));
    LintReport { entries }
}

/// Text: one line per relation, `R4 [a,b] color: message`. Json: the
/// report as a single-line object.
pub fn format_lint_report(relations: &RelationSet, style: ReportStyle) -> String {
    let report = lint_report(relations);
    match style {
        ReportStyle::Json => serde_json::to_string(&report).expect("reports always serialize"),
        ReportStyle::Text if report.entries.is_empty() => "no relations found".to_string(),
        ReportStyle::Text => report
            .entries
            .iter()
            .map(|e| {
                let mut line = format!("{} [{}] {}: {}", e.code, e.view_ids.join(","), e.channel, e.message);
                if let Some(q) = &e.question {
                    line.push_str(&format!(" (conditional: {q})"));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}
