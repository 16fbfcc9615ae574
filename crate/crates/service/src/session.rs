//! Session state: one canvas, its history, and the relations and score
//! derived from whatever is currently on screen.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use semsnap_core::config::Config;
use semsnap_core::model::{Canvas, FieldRef};
use semsnap_core::operations::{
    all_plans, apply_operation, plan_operations, semantic_position, Answer, CanvasHistory, HistoryError,
    OperationError, OperationPlan, SemanticPosition,
};
use semsnap_core::registry::RegistryError;
use semsnap_core::relations::{find_relations, RelationSet};
use semsnap_core::render::{render_canvas, PlacedSpec, RenderError};
use semsnap_core::spec_io::{
    lint_report, plan_menu, serialize_canvas, to_document, CanvasDocument, LintReport, PlanMenu,
};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("unknown view `{0}`")]
    UnknownView(String),
    #[error("unknown operation `{0}`")]
    UnknownPlan(String),
    #[error("operation `{0}` no longer applies to the canvas")]
    StalePlan(String),
    #[error("an operation is pending; keep or undo it first")]
    Pending,
    #[error("no operation is pending")]
    NothingPending,
    #[error("{0}")]
    MissingConfirmation(String),
    #[error("`{0}` is not a field")]
    BadField(String),
    #[error(transparent)]
    Contradiction(#[from] RegistryError),
    #[error("operation failed: {0}")]
    Operation(OperationError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("the session has no file to save to")]
    NoSavePath,
    #[error("cannot write {path}: {source}")]
    Save {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<HistoryError> for SessionError {
    fn from(e: HistoryError) -> Self {
        match e {
            HistoryError::AlreadyPending => SessionError::Pending,
            HistoryError::NothingPending => SessionError::NothingPending,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Position {
    pub current: SemanticPosition,
    /// One entry per kept canvas, starting with the initial one.
    pub trail: Vec<SemanticPosition>,
}

/// Payload of every mutating call: the canvas now on screen and what was
/// derived from it.
#[derive(Debug, Clone, Serialize)]
pub struct Snapshot {
    pub document: CanvasDocument,
    pub relations: LintReport,
    pub position: SemanticPosition,
    pub pending: bool,
    /// Set when a "different" answer withdrew the requested operation.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub withdrawn: bool,
}

pub struct Session {
    history: CanvasHistory,
    relations: RelationSet,
    trail: Vec<SemanticPosition>,
    /// Every plan offered so far, so a vanished id reads as stale, not unknown.
    offered: BTreeMap<String, OperationPlan>,
    config: Config,
    save_path: Option<PathBuf>,
}

impl Session {
    pub fn new(canvas: Canvas, config: Config, save_path: Option<PathBuf>) -> Self {
        let relations = find_relations(&canvas);
        let start = semantic_position(&relations, &config.weights);
        let mut session = Session {
            history: CanvasHistory::new(canvas),
            relations,
            trail: vec![start],
            offered: BTreeMap::new(),
            config,
            save_path,
        };
        session.remember_plans();
        session
    }

    pub fn canvas(&self) -> &Canvas {
        self.history.current()
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    fn remember_plans(&mut self) {
        for p in all_plans(self.history.current(), &self.relations, &self.config) {
            self.offered.entry(p.id.clone()).or_insert(p);
        }
    }

    fn refresh(&mut self) {
        self.relations = find_relations(self.history.current());
        self.remember_plans();
    }

    fn current_position(&self) -> SemanticPosition {
        semantic_position(&self.relations, &self.config.weights)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            document: to_document(self.canvas()),
            relations: lint_report(&self.relations),
            position: self.current_position(),
            pending: self.history.pending.is_some(),
            withdrawn: false,
        }
    }

    pub fn document(&self) -> CanvasDocument {
        to_document(self.canvas())
    }

    pub fn lint(&self) -> LintReport {
        lint_report(&self.relations)
    }

    pub fn menu(&self, view_id: &str) -> Result<PlanMenu, SessionError> {
        let plans = plan_operations(self.canvas(), &self.relations, view_id, &self.config)
            .map_err(|_| SessionError::UnknownView(view_id.to_string()))?;
        Ok(plan_menu(&plans))
    }

    pub fn position(&self) -> Position {
        Position {
            current: self.current_position(),
            trail: self.trail.clone(),
        }
    }

    pub fn render(&self) -> Result<Vec<PlacedSpec>, SessionError> {
        Ok(render_canvas(self.canvas())?)
    }

    /// Applies a plan as a pending preview.
    pub fn apply(&mut self, plan_id: &str, answers: &[Answer]) -> Result<Snapshot, SessionError> {
        if self.history.pending.is_some() {
            return Err(SessionError::Pending);
        }
        let plan = self
            .offered
            .get(plan_id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownPlan(plan_id.to_string()))?;
        match apply_operation(self.canvas(), &plan, answers, &self.config) {
            Ok(after) => {
                self.history = self.history.begin(plan, after)?;
                self.refresh();
                Ok(self.snapshot())
            }
            Err(OperationError::ConfirmationDenied { registry }) => {
                let mut answered = self.canvas().clone();
                answered.registry = registry;
                self.history = self.history.amend(answered)?;
                self.refresh();
                Ok(Snapshot {
                    withdrawn: true,
                    ..self.snapshot()
                })
            }
            Err(OperationError::StalePlan(id)) => Err(SessionError::StalePlan(id)),
            Err(OperationError::MissingConfirmation { question }) => Err(SessionError::MissingConfirmation(question)),
            Err(OperationError::Registry(e)) => Err(SessionError::Contradiction(e)),
            Err(e) => Err(SessionError::Operation(e)),
        }
    }

    pub fn undo(&mut self) -> Result<Snapshot, SessionError> {
        self.history = self.history.undo()?.1;
        self.refresh();
        Ok(self.snapshot())
    }

    pub fn keep(&mut self) -> Result<Snapshot, SessionError> {
        self.history = self.history.keep()?;
        self.refresh();
        self.trail.push(self.current_position());
        Ok(self.snapshot())
    }

    /// Records a user's answer about two fields on the kept canvas.
    pub fn confirm(&mut self, a: &str, b: &str, same: bool) -> Result<Snapshot, SessionError> {
        if self.history.pending.is_some() {
            return Err(SessionError::Pending);
        }
        let parse = |s: &str| FieldRef::parse(s).ok_or_else(|| SessionError::BadField(s.to_string()));
        let (fa, fb) = (parse(a)?, parse(b)?);
        let mut next = self.canvas().clone();
        next.registry = next.registry.record(&fa, &fb, same)?;
        self.history = self.history.amend(next)?;
        self.refresh();
        Ok(self.snapshot())
    }

    /// Writes the kept canvas to the session file.
    pub fn save(&self) -> Result<PathBuf, SessionError> {
        if self.history.pending.is_some() {
            return Err(SessionError::Pending);
        }
        let path = self.save_path.clone().ok_or(SessionError::NoSavePath)?;
        std::fs::write(&path, serialize_canvas(self.canvas())).map_err(|source| SessionError::Save {
            path: path.display().to_string(),
            source,
        })?;
        Ok(path)
    }
}
