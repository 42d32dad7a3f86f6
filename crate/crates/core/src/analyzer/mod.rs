//! Structural predicates on 3-dynamic 4-colorings of grids.
//!
//! Every check gates on its hypotheses (palette of exactly four colors, grid
//! large enough, no definite violation of the 3-dynamic condition) and
//! reports [`Verdict::NotApplicable`] instead of guessing. Partial colorings
//! are accepted; rule instances that touch an unassigned cell are skipped.

mod coherence;
pub mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{validate, Coloring, Position};

pub use coherence::{
    canonical_color, check_coherence, classify_positions, detect_partial_signature, partial_fixture, PositionClass,
    PositionClassification, ReferencePermutation, COHERENT_BLOCK,
};
use rules::{Rule, RuleOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LemmaId {
    /// Periodic first two rows and columns.
    #[serde(rename = "ring")]
    Ring,
    /// `x(3,2) = x(2,3)` at every corner.
    #[serde(rename = "corner")]
    Corner,
    /// Every 2x3 / 3x2 window holds all four colors.
    #[serde(rename = "2x3")]
    Rainbow,
    #[serde(rename = "zigzag")]
    Zigzag,
    /// Upper-left 4x4 matches the canonical block up to renaming.
    #[serde(rename = "coherence")]
    Coherence,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [
        LemmaId::Ring,
        LemmaId::Corner,
        LemmaId::Rainbow,
        LemmaId::Zigzag,
        LemmaId::Coherence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Ring => "ring",
            LemmaId::Corner => "corner",
            LemmaId::Rainbow => "2x3",
            LemmaId::Zigzag => "zigzag",
            LemmaId::Coherence => "coherence",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown lemma {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "Holds",
            Verdict::Violated => "Violated",
            Verdict::NotApplicable => "NotApplicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaFinding {
    pub lemma: LemmaId,
    pub verdict: Verdict,
    /// One position set per failing instance (for a window, its cells with
    /// the top-left corner first).
    pub witnesses: Vec<Vec<Position>>,
    /// Holds only because no instance had its premise met.
    pub vacuous: bool,
    /// Instances actually evaluated.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LemmaFinding {
    pub(crate) fn not_applicable(lemma: LemmaId, note: impl Into<String>) -> Self {
        LemmaFinding {
            lemma,
            verdict: Verdict::NotApplicable,
            witnesses: Vec::new(),
            vacuous: false,
            checked: 0,
            note: Some(note.into()),
        }
    }
}

impl fmt::Display for LemmaFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.lemma, self.verdict)?;
        if self.vacuous {
            f.write_str(" (vacuous)")?;
        }
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        for w in &self.witnesses {
            f.write_str(" [")?;
            for (idx, p) in w.iter().enumerate() {
                if idx > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Shared gate: four colors, minimum size, nothing already violating the
/// 3-dynamic condition.
fn gate(c: &Coloring, lemma: LemmaId, min_side: usize) -> Option<LemmaFinding> {
    if c.k() != 4 {
        return Some(LemmaFinding::not_applicable(
            lemma,
            format!("needs k = 4, got {}", c.k()),
        ));
    }
    let dims = c.dims();
    if dims.m() < min_side || dims.n() < min_side {
        return Some(LemmaFinding::not_applicable(lemma, format!("needs m,n >= {min_side}")));
    }
    let consistent = validate(c, 3, Some(4)).map(|r| r.is_consistent()).unwrap_or(false);
    if !consistent {
        return Some(LemmaFinding::not_applicable(lemma, "not a 3-dynamic coloring"));
    }
    None
}

fn evaluate_rules(c: &Coloring, lemma: LemmaId, rules: &[Rule]) -> LemmaFinding {
    let mut witnesses = Vec::new();
    let mut checked = 0;
    let mut premised = 0;
    for rule in rules {
        match rule.evaluate(|p| c.get(p)) {
            RuleOutcome::Open => {}
            RuleOutcome::Vacuous => checked += 1,
            RuleOutcome::Holds => {
                checked += 1;
                premised += 1;
            }
            RuleOutcome::Violated => {
                checked += 1;
                premised += 1;
                witnesses.push(rule.cells());
            }
        }
    }
    let vacuous = lemma == LemmaId::Zigzag && premised == 0;
    LemmaFinding {
        lemma,
        verdict: if witnesses.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Violated
        },
        witnesses,
        vacuous,
        checked,
        note: None,
    }
}

/// First two rows and columns (and their mirror images at the other corners)
/// cycle with period four through the corner 2x2's four distinct colors.
pub fn check_border_periodicity(c: &Coloring) -> LemmaFinding {
    if let Some(na) = gate(c, LemmaId::Ring, 3) {
        return na;
    }
    evaluate_rules(c, LemmaId::Ring, &rules::ring_rules(c.dims()))
}

pub fn check_corner_equalities(c: &Coloring) -> LemmaFinding {
    if let Some(na) = gate(c, LemmaId::Corner, 3) {
        return na;
    }
    evaluate_rules(c, LemmaId::Corner, &rules::corner_rules(c.dims()))
}

/// Every fully assigned 2x3 and 3x2 window uses four colors. Witnesses list
/// the window's cells starting from its top-left corner.
pub fn check_2x3_rainbow(c: &Coloring) -> LemmaFinding {
    if let Some(na) = gate(c, LemmaId::Rainbow, 1) {
        return na;
    }
    evaluate_rules(c, LemmaId::Rainbow, &rules::rainbow_rules(c.dims()))
}

pub fn check_zigzag(c: &Coloring) -> LemmaFinding {
    if let Some(na) = gate(c, LemmaId::Zigzag, 1) {
        return na;
    }
    evaluate_rules(c, LemmaId::Zigzag, &rules::zigzag_rules(c.dims()))
}

/// Runs the requested checks in the given order.
pub fn analyze(c: &Coloring, lemmas: &[LemmaId]) -> Vec<LemmaFinding> {
    lemmas
        .iter()
        .map(|&lemma| match lemma {
            LemmaId::Ring => check_border_periodicity(c),
            LemmaId::Corner => check_corner_equalities(c),
            LemmaId::Rainbow => check_2x3_rainbow(c),
            LemmaId::Zigzag => check_zigzag(c),
            LemmaId::Coherence => check_coherence(c).0,
        })
        .collect()
}
