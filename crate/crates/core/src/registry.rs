//! User confirmations of semantic field sameness, closed under transitivity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::FieldRef;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("`{a}` and `{b}` were already confirmed as {existing}")]
    ContradictoryConfirmation {
        a: String,
        b: String,
        existing: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfirmationStatus {
    ConfirmedSame,
    ConfirmedDifferent,
    Pending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confirmation {
    pub a: String,
    pub b: String,
    pub status: ConfirmationStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sameness {
    Same,
    Different,
    Unknown,
}

/// Union-find over canonical field strings. Roots are the lexicographically
/// smallest member so the structure is a pure function of the entries.
#[derive(Debug, Clone, Default)]
struct Classes {
    parent: BTreeMap<String, String>,
}

impl Classes {
    fn find<'a>(&'a self, key: &'a str) -> &'a str {
        let mut cur = key;
        while let Some(p) = self.parent.get(cur) {
            if p == cur {
                break;
            }
            cur = p;
        }
        cur
    }

    fn union(&mut self, a: &str, b: &str) {
        let ra = self.find(a).to_string();
        let rb = self.find(b).to_string();
        if ra == rb {
            return;
        }
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(child, root.clone());
        self.parent.entry(root.clone()).or_insert(root);
    }
}

/// Equality only looks at the confirmation entries; the class structure is
/// derived from them.
#[derive(Debug, Clone, Default)]
pub struct EquivalenceRegistry {
    confirmations: Vec<Confirmation>,
    classes: Classes,
}

impl PartialEq for EquivalenceRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.confirmations == other.confirmations
    }
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl EquivalenceRegistry {
    /// Rebuilds a registry from stored entries, later entries replacing
    /// earlier ones for the same pair.
    pub fn from_entries(entries: impl IntoIterator<Item = Confirmation>) -> Result<Self, RegistryError> {
        let mut reg = Self::default();
        for e in entries {
            reg = match e.status {
                ConfirmationStatus::ConfirmedSame => reg.record_keys(&e.a, &e.b, true)?,
                ConfirmationStatus::ConfirmedDifferent => reg.record_keys(&e.a, &e.b, false)?,
                ConfirmationStatus::Pending => reg.mark_pending_keys(&e.a, &e.b),
            };
        }
        Ok(reg)
    }

    pub fn confirmations(&self) -> &[Confirmation] {
        &self.confirmations
    }

    pub fn is_empty(&self) -> bool {
        self.confirmations.is_empty()
    }

    pub fn same_class(&self, a: &str, b: &str) -> bool {
        a == b || self.classes.find(a) == self.classes.find(b)
    }

    fn pinned_different(&self, a: &str, b: &str) -> bool {
        let (ra, rb) = (self.classes.find(a), self.classes.find(b));
        self.confirmations
            .iter()
            .filter(|c| c.status == ConfirmationStatus::ConfirmedDifferent)
            .any(|c| {
                let (x, y) = (self.classes.find(&c.a), self.classes.find(&c.b));
                (x == ra && y == rb) || (x == rb && y == ra)
            })
    }

    pub fn sameness(&self, a: &FieldRef, b: &FieldRef) -> Sameness {
        self.sameness_keys(&a.canonical(), &b.canonical())
    }

    pub fn sameness_keys(&self, a: &str, b: &str) -> Sameness {
        if self.same_class(a, b) {
            Sameness::Same
        } else if self.pinned_different(a, b) {
            Sameness::Different
        } else {
            Sameness::Unknown
        }
    }

    pub fn status_of(&self, a: &str, b: &str) -> Option<ConfirmationStatus> {
        let key = ordered(a, b);
        self.confirmations
            .iter()
            .find(|c| (c.a.clone(), c.b.clone()) == key)
            .map(|c| c.status)
    }

    /// Records a user answer. Returns a new registry; `self` is untouched.
    pub fn record(&self, a: &FieldRef, b: &FieldRef, same: bool) -> Result<Self, RegistryError> {
        self.record_keys(&a.canonical(), &b.canonical(), same)
    }

    pub fn record_keys(&self, a: &str, b: &str, same: bool) -> Result<Self, RegistryError> {
        let current = self.sameness_keys(a, b);
        let contradiction = match (same, current) {
            (true, Sameness::Different) => Some("different"),
            (false, Sameness::Same) => Some("the same"),
            _ => None,
        };
        if let Some(existing) = contradiction {
            return Err(RegistryError::ContradictoryConfirmation {
                a: a.to_string(),
                b: b.to_string(),
                existing,
            });
        }
        let status = if same {
            ConfirmationStatus::ConfirmedSame
        } else {
            ConfirmationStatus::ConfirmedDifferent
        };
        let mut next = self.with_entry(a, b, status);
        if same {
            next.classes.union(a, b);
        }
        Ok(next)
    }

    pub fn mark_pending_keys(&self, a: &str, b: &str) -> Self {
        match self.status_of(a, b) {
            Some(ConfirmationStatus::ConfirmedSame | ConfirmationStatus::ConfirmedDifferent) => self.clone(),
            _ => self.with_entry(a, b, ConfirmationStatus::Pending),
        }
    }

    fn with_entry(&self, a: &str, b: &str, status: ConfirmationStatus) -> Self {
        let (a, b) = ordered(a, b);
        let mut next = self.clone();
        next.confirmations.retain(|c| !(c.a == a && c.b == b));
        next.confirmations.push(Confirmation { a, b, status });
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Aggregate;

    fn f(col: &str) -> FieldRef {
        FieldRef::new(col, Aggregate::Sum)
    }

    #[test]
    fn confirmations_close_transitively() {
        let reg = EquivalenceRegistry::default()
            .record(&f("a"), &f("b"), true)
            .unwrap()
            .record(&f("b"), &f("c"), true)
            .unwrap();
        assert_eq!(reg.sameness(&f("a"), &f("c")), Sameness::Same);
        assert_eq!(reg.sameness(&f("a"), &f("d")), Sameness::Unknown);
    }

    #[test]
    fn different_pins_follow_classes() {
        let reg = EquivalenceRegistry::default()
            .record(&f("a"), &f("b"), true)
            .unwrap()
            .record(&f("b"), &f("x"), false)
            .unwrap();
        assert_eq!(reg.sameness(&f("a"), &f("x")), Sameness::Different);
        assert!(matches!(
            reg.record(&f("a"), &f("x"), true),
            Err(RegistryError::ContradictoryConfirmation { .. })
        ));
        assert!(reg.record(&f("a"), &f("b"), false).is_err());
    }

    #[test]
    fn pending_is_replaced_by_answer() {
        let reg = EquivalenceRegistry::default().mark_pending_keys("sum(a)", "sum(b)");
        assert_eq!(reg.status_of("sum(b)", "sum(a)"), Some(ConfirmationStatus::Pending));
        let reg = reg.record(&f("b"), &f("a"), false).unwrap();
        assert_eq!(reg.confirmations().len(), 1);
        assert_eq!(
            reg.status_of("sum(a)", "sum(b)"),
            Some(ConfirmationStatus::ConfirmedDifferent)
        );
    }

    #[test]
    fn record_leaves_input_untouched() {
        let reg = EquivalenceRegistry::default();
        let _ = reg.record(&f("a"), &f("b"), true).unwrap();
        assert!(reg.is_empty());
    }

    #[test]
    fn rebuild_matches_incremental() {
        let reg = EquivalenceRegistry::default()
            .record(&f("a"), &f("b"), true)
            .unwrap()
            .record(&f("c"), &f("b"), true)
            .unwrap();
        let rebuilt = EquivalenceRegistry::from_entries(reg.confirmations().to_vec()).unwrap();
        assert_eq!(rebuilt, reg);
        assert_eq!(rebuilt.sameness(&f("a"), &f("c")), Sameness::Same);
    }
}
