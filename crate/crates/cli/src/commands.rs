use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;

use semsnap_core::config::Config;
use semsnap_core::data::DatasetSource;
use semsnap_core::model::{Canvas, Cell, FieldRef};
use semsnap_core::operations::{all_plans, apply_operation, plan_operations, Answer, OperationError};
use semsnap_core::relations::find_relations;
use semsnap_core::render::render_view;
use semsnap_core::spec_io::{format_lint_report, parse_canvas_in, serialize_canvas, PlanDoc, ReportStyle};
use semsnap_service::{bind, router, serve as serve_http, shared, Session};

use crate::exit::{Failure, OrExit, APPLY, FOUND, USAGE};
use crate::Format;

pub struct Output {
    pub quiet: bool,
}

impl Output {
    fn print(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

pub fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .or_exit(USAGE)?;
    toml::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))
        .or_exit(USAGE)
}

fn load_canvas(path: &Path) -> Result<Canvas, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .or_exit(USAGE)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_canvas_in(&text, base)
        .with_context(|| format!("parsing {}", path.display()))
        .or_exit(USAGE)
}

fn style(format: Format) -> ReportStyle {
    match format {
        Format::Text => ReportStyle::Text,
        Format::Json => ReportStyle::Json,
    }
}

pub fn lint(path: &Path, format: Format, fail_on_conditional: bool, out: &Output) -> Result<ExitCode, Failure> {
    let canvas = load_canvas(path)?;
    let relations = find_relations(&canvas);
    out.print(&format_lint_report(&relations, style(format)));
    let counted = relations
        .instances
        .iter()
        .any(|r| fail_on_conditional || !r.conditional);
    Ok(if counted {
        ExitCode::from(FOUND)
    } else {
        ExitCode::SUCCESS
    })
}

pub fn ops(path: &Path, view: &str, format: Format, config: &Config, out: &Output) -> Result<ExitCode, Failure> {
    let canvas = load_canvas(path)?;
    let plans = plan_operations(&canvas, &find_relations(&canvas), view, config).or_exit(USAGE)?;
    let text = match format {
        Format::Json => {
            let docs: Vec<PlanDoc> = plans.iter().map(PlanDoc::from).collect();
            serde_json::to_string(&docs).expect("plans serialize")
        }
        Format::Text if plans.is_empty() => format!("no operations for `{view}`"),
        Format::Text => plans
            .iter()
            .map(|p| {
                let mut line = format!("{}  {}  {}", p.id, p.kind.label(), p.description);
                if let Some(q) = &p.question {
                    line.push_str(&format!("\n    confirm: {q}"));
                }
                line
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    out.print(&text);
    Ok(ExitCode::SUCCESS)
}

/// Parses `a=b:same` or `a=b:different`.
fn parse_confirmation(text: &str) -> anyhow::Result<Answer> {
    let (pair, verdict) = text
        .rsplit_once(':')
        .ok_or_else(|| anyhow!("`{text}`: expected `a=b:same` or `a=b:different`"))?;
    let same = match verdict.trim() {
        "same" => true,
        "different" => false,
        other => bail!("`{text}`: the answer must be `same` or `different`, not `{other}`"),
    };
    let (a, b) = pair
        .split_once('=')
        .ok_or_else(|| anyhow!("`{text}`: missing `=` between the fields"))?;
    let field = |s: &str| FieldRef::parse(s.trim()).ok_or_else(|| anyhow!("`{text}`: empty field"));
    Ok(Answer {
        a: field(a)?,
        b: field(b)?,
        same,
    })
}

/// Keeps a relative dataset path valid when the document moves.
fn relocate(canvas: &mut Canvas, from: &Path, to: &Path) -> anyhow::Result<()> {
    let DatasetSource::File(rel) = &canvas.dataset.source else {
        return Ok(());
    };
    let (src_dir, dst_dir) = (
        from.parent().unwrap_or(Path::new(".")),
        to.parent().unwrap_or(Path::new(".")),
    );
    let data = src_dir.join(rel);
    if Path::new(rel).is_absolute() || same_dir(src_dir, dst_dir) {
        return Ok(());
    }
    let absolute = std::fs::canonicalize(&data).with_context(|| format!("locating {}", data.display()))?;
    let mut dataset = (*canvas.dataset).clone();
    dataset.source = DatasetSource::File(absolute.display().to_string());
    canvas.dataset = Arc::new(dataset);
    Ok(())
}

fn same_dir(a: &Path, b: &Path) -> bool {
    let norm = |p: &Path| std::fs::canonicalize(if p.as_os_str().is_empty() { Path::new(".") } else { p }).ok();
    norm(a).is_some() && norm(a) == norm(b)
}

pub fn apply(
    path: &Path,
    op: &str,
    confirmations: &[String],
    output: &Path,
    config: &Config,
    out: &Output,
) -> Result<ExitCode, Failure> {
    let canvas = load_canvas(path)?;
    let answers = confirmations
        .iter()
        .map(|c| parse_confirmation(c))
        .collect::<anyhow::Result<Vec<_>>>()
        .or_exit(USAGE)?;
    let plan = all_plans(&canvas, &find_relations(&canvas), config)
        .into_iter()
        .find(|p| p.id == op)
        .ok_or(OperationError::StalePlan(op.to_string()))
        .or_exit(APPLY)?;
    let mut after = apply_operation(&canvas, &plan, &answers, config).or_exit(APPLY)?;
    relocate(&mut after, path, output).or_exit(USAGE)?;
    std::fs::write(output, serialize_canvas(&after))
        .with_context(|| format!("writing {}", output.display()))
        .or_exit(USAGE)?;
    out.print(&format!("{}: {}", plan.id, plan.description));
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct IndexEntry {
    id: String,
    file: String,
    cell: Cell,
}

#[derive(Serialize)]
struct Index {
    views: Vec<IndexEntry>,
}

pub fn render(path: &Path, dir: &Path, out: &Output) -> Result<ExitCode, Failure> {
    let canvas = load_canvas(path)?;
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .or_exit(USAGE)?;
    let mut views: Vec<_> = canvas.views.iter().collect();
    views.sort_by_key(|v| (v.cell.row, v.cell.col));
    let mut index = Index { views: Vec::new() };
    for v in views {
        let spec = render_view(&canvas, &v.id).or_exit(USAGE)?;
        let file = format!("{}.json", v.id);
        let json = serde_json::to_string_pretty(&spec).expect("render specs serialize") + "\n";
        std::fs::write(dir.join(&file), json)
            .with_context(|| format!("writing {file}"))
            .or_exit(USAGE)?;
        index.views.push(IndexEntry {
            id: v.id.clone(),
            file,
            cell: v.cell,
        });
    }
    let json = serde_json::to_string_pretty(&index).expect("index serializes") + "\n";
    std::fs::write(dir.join("index.json"), json)
        .context("writing index.json")
        .or_exit(USAGE)?;
    out.print(&format!("{} views rendered to {}", index.views.len(), dir.display()));
    Ok(ExitCode::SUCCESS)
}

pub fn serve(
    path: &Path,
    addr: SocketAddr,
    ui: Option<PathBuf>,
    config: Config,
    out: &Output,
) -> Result<ExitCode, Failure> {
    let canvas = load_canvas(path)?;
    let session = Session::new(canvas, config, Some(path.to_path_buf()));
    let runtime = tokio::runtime::Runtime::new()
        .context("starting the runtime")
        .or_exit(USAGE)?;
    runtime.block_on(async {
        let listener = bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))
            .or_exit(USAGE)?;
        out.print(&format!("serving {} on http://{addr}", path.display()));
        let app = router(shared(session), ui);
        serve_http(listener, app).await.context("serving").or_exit(USAGE)
    })?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confirmation_syntax() {
        let a = parse_confirmation("sum(Europe)=sum(North America):same").unwrap();
        assert_eq!(a.a.canonical(), "sum(Europe)");
        assert_eq!(a.b.canonical(), "sum(North America)");
        assert!(a.same);
        assert!(!parse_confirmation("x=y:different").unwrap().same);
        assert!(parse_confirmation("x=y:maybe").is_err());
        assert!(parse_confirmation("x:same").is_err());
        assert!(parse_confirmation("=y:same").is_err());
    }
}
