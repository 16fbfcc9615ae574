use serde::{Deserialize, Serialize};

use crate::config::Weights;
use crate::relations::{RelationKind, RelationSet};

/// Position of a canvas in semantic space. Both coordinates are non-positive
/// penalties; a relation-free canvas sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SemanticPosition {
    pub compactness: f64,
    pub consistency: f64,
}

pub fn semantic_position(relations: &RelationSet, weights: &Weights) -> SemanticPosition {
    let mut pos = SemanticPosition::default();
    for r in &relations.instances {
        let scale = if r.conditional { 0.5 } else { 1.0 };
        match r.kind {
            RelationKind::FullRedundancy => pos.compactness -= scale * weights.full_redundancy,
            RelationKind::PartialRedundancy => pos.compactness -= scale * weights.partial_redundancy,
            RelationKind::MultiplesSameGrouping => {
                pos.compactness -= scale * weights.multiples_same_grouping;
                if r.domains_differ {
                    pos.consistency -= scale * weights.domain_mismatch;
                }
            }
            RelationKind::MultiplesSameData => pos.consistency -= scale * weights.multiples_same_data,
            RelationKind::Hallucinator => pos.consistency -= scale * weights.hallucinator,
            RelationKind::Confuser => pos.consistency -= scale * weights.confuser,
        }
    }
    // avoid reporting -0.0
    pos.compactness += 0.0;
    pos.consistency += 0.0;
    pos
}
