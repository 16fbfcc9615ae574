use thiserror::Error;

use super::OperationPlan;
use crate::model::Canvas;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("no operation is pending")]
    NothingPending,
    #[error("an operation is already pending; keep or undo it first")]
    AlreadyPending,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pending {
    pub before: Canvas,
    pub after: Canvas,
    pub plan: OperationPlan,
}

/// Linear history of kept canvases plus at most one applied-but-undecided
/// operation.
#[derive(Debug, Clone, PartialEq)]
pub struct CanvasHistory {
    pub committed: Vec<Canvas>,
    pub pending: Option<Pending>,
}

impl CanvasHistory {
    pub fn new(initial: Canvas) -> Self {
        Self {
            committed: vec![initial],
            pending: None,
        }
    }

    /// The canvas on screen: the pending preview if any, else the last kept one.
    pub fn current(&self) -> &Canvas {
        match &self.pending {
            Some(p) => &p.after,
            None => self.committed.last().expect("history always holds the initial canvas"),
        }
    }

    pub fn last_committed(&self) -> &Canvas {
        self.committed.last().expect("history always holds the initial canvas")
    }

    pub fn begin(&self, plan: OperationPlan, after: Canvas) -> Result<CanvasHistory, HistoryError> {
        if self.pending.is_some() {
            return Err(HistoryError::AlreadyPending);
        }
        Ok(CanvasHistory {
            committed: self.committed.clone(),
            pending: Some(Pending {
                before: self.last_committed().clone(),
                after,
                plan,
            }),
        })
    }

    /// Replaces the last kept canvas, e.g. to record a confirmation answer.
    pub fn amend(&self, canvas: Canvas) -> Result<CanvasHistory, HistoryError> {
        if self.pending.is_some() {
            return Err(HistoryError::AlreadyPending);
        }
        let mut committed = self.committed.clone();
        *committed.last_mut().expect("non-empty") = canvas;
        Ok(CanvasHistory {
            committed,
            pending: None,
        })
    }

    pub fn undo(&self) -> Result<(Canvas, CanvasHistory), HistoryError> {
        let pending = self.pending.as_ref().ok_or(HistoryError::NothingPending)?;
        Ok((
            pending.before.clone(),
            CanvasHistory {
                committed: self.committed.clone(),
                pending: None,
            },
        ))
    }

    pub fn keep(&self) -> Result<CanvasHistory, HistoryError> {
        let pending = self.pending.as_ref().ok_or(HistoryError::NothingPending)?;
        let mut committed = self.committed.clone();
        committed.push(pending.after.clone());
        Ok(CanvasHistory {
            committed,
            pending: None,
        })
    }
}
