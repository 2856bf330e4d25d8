//! Machine-readable verdicts: equation residuals and inequality margins,
//! each with the tolerance it was judged against.

use serde::{Deserialize, Serialize};

/// Default relative tolerance for equation residuals.
pub const EQUATION_TOL: f64 = 1e-9;
/// Default relative tolerance for strict inequality margins.
pub const STRICT_TOL: f64 = 1e-12;
/// Slack allowed on entropy production of a shock.
pub const ENTROPY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub equation: f64,
    pub strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { equation: EQUATION_TOL, strict: STRICT_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    EquationResidual,
    StrictInequalityMargin,
    NonstrictInequalityMargin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub label: String,
    pub kind: EntryKind,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Entry {
    pub fn judge(kind: EntryKind, value: f64, tolerance: f64) -> bool {
        match kind {
            EntryKind::EquationResidual => value.abs() <= tolerance,
            EntryKind::StrictInequalityMargin => value > tolerance,
            EntryKind::NonstrictInequalityMargin => value >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Certificate {
    pub entries: Vec<Entry>,
    pub overall: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// `max(1, |t|)` over the compared terms.
pub fn scale_of(terms: &[f64]) -> f64 {
    terms.iter().fold(1.0f64, |acc, t| acc.max(t.abs()))
}

impl Certificate {
    pub fn new() -> Self {
        Self { entries: Vec::new(), overall: true, notes: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, kind: EntryKind, value: f64, tolerance: f64) {
        let pass = Entry::judge(kind, value, tolerance);
        self.overall &= pass;
        self.entries.push(Entry { label: label.into(), kind, value, tolerance, pass });
    }

    /// Records `lhs - rhs`, judged against `rel_tol * max(1, |terms|)`.
    pub fn equation(&mut self, label: impl Into<String>, lhs: f64, rhs: f64, terms: &[f64], rel_tol: f64) {
        let scale = scale_of(terms).max(lhs.abs()).max(rhs.abs());
        self.push(label, EntryKind::EquationResidual, lhs - rhs, rel_tol * scale);
    }

    /// Records `greater - lesser` as a strict margin.
    pub fn strict(&mut self, label: impl Into<String>, greater: f64, lesser: f64, terms: &[f64], rel_tol: f64) {
        let scale = scale_of(terms).max(greater.abs()).max(lesser.abs());
        self.push(label, EntryKind::StrictInequalityMargin, greater - lesser, rel_tol * scale);
    }

    pub fn nonstrict(&mut self, label: impl Into<String>, greater: f64, lesser: f64, terms: &[f64], rel_tol: f64) {
        let scale = scale_of(terms).max(greater.abs()).max(lesser.abs());
        self.push(label, EntryKind::NonstrictInequalityMargin, greater - lesser, rel_tol * scale);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn entry(&self, label: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    /// Re-derives every pass flag and the overall verdict from the stored values.
    pub fn is_consistent(&self) -> bool {
        let all = self.entries.iter().all(|e| e.pass == Entry::judge(e.kind, e.value, e.tolerance));
        all && self.overall == self.entries.iter().all(|e| e.pass)
    }
}
