//! Local consequences that every 3-dynamic 4-coloring of a grid must satisfy.
//!
//! Each [`Rule`] is a small constraint over a handful of cells. The analyzer
//! evaluates them on finished or partial colorings; the backtracking engine
//! uses [`Rule::is_refuted`] on its partial assignment to cut subtrees early.

use serde::{Deserialize, Serialize};

use crate::grid::{Color, GridDims, Position};

use super::LemmaId;

/// One instance of a lemma, over cells addressed by `P` (positions, or
/// row-major indices once compiled for the solver).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule<P = Position> {
    /// The two cells carry the same color.
    Equal { lemma: LemmaId, cells: [P; 2] },
    /// The four cells carry pairwise different colors.
    AllDistinct { lemma: LemmaId, cells: [P; 4] },
    /// A 2x3 or 3x2 window uses all four colors.
    Rainbow { cells: [P; 6] },
    /// If `eq` cells agree and `ne` cells differ, each `then` pair agrees.
    Zigzag { eq: [P; 2], ne: [P; 2], then: [[P; 2]; 2] },
}

/// Result of evaluating a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleOutcome {
    Holds,
    /// Holds because its premise is false.
    Vacuous,
    Violated,
    /// Some cell the rule needs is unassigned.
    Open,
}

impl<P: Copy> Rule<P> {
    pub fn lemma(&self) -> LemmaId {
        match self {
            Rule::Equal { lemma, .. } | Rule::AllDistinct { lemma, .. } => *lemma,
            Rule::Rainbow { .. } => LemmaId::Rainbow,
            Rule::Zigzag { .. } => LemmaId::Zigzag,
        }
    }

    pub fn cells(&self) -> Vec<P> {
        match self {
            Rule::Equal { cells, .. } => cells.to_vec(),
            Rule::AllDistinct { cells, .. } => cells.to_vec(),
            Rule::Rainbow { cells } => cells.to_vec(),
            Rule::Zigzag { eq, ne, then } => {
                let mut v = vec![eq[0], eq[1], ne[0], ne[1]];
                v.extend(then.iter().flatten().copied());
                v
            }
        }
    }

    pub fn map<Q>(&self, f: impl Fn(P) -> Q) -> Rule<Q> {
        match self {
            Rule::Equal { lemma, cells } => Rule::Equal {
                lemma: *lemma,
                cells: cells.map(&f),
            },
            Rule::AllDistinct { lemma, cells } => Rule::AllDistinct {
                lemma: *lemma,
                cells: cells.map(&f),
            },
            Rule::Rainbow { cells } => Rule::Rainbow { cells: cells.map(&f) },
            Rule::Zigzag { eq, ne, then } => Rule::Zigzag {
                eq: eq.map(&f),
                ne: ne.map(&f),
                then: then.map(|pair| pair.map(&f)),
            },
        }
    }

    /// Evaluates the rule only when every cell it quantifies over is assigned
    /// (a zigzag with a false premise is vacuous as soon as the premise is known).
    pub fn evaluate(&self, get: impl Fn(P) -> Option<Color>) -> RuleOutcome {
        match self {
            Rule::Equal { cells, .. } => match (get(cells[0]), get(cells[1])) {
                (Some(a), Some(b)) if a == b => RuleOutcome::Holds,
                (Some(_), Some(_)) => RuleOutcome::Violated,
                _ => RuleOutcome::Open,
            },
            Rule::AllDistinct { cells, .. } => {
                let Some(colors) = all_assigned(cells, &get) else {
                    return RuleOutcome::Open;
                };
                if distinct_count(&colors) == colors.len() {
                    RuleOutcome::Holds
                } else {
                    RuleOutcome::Violated
                }
            }
            Rule::Rainbow { cells } => {
                let Some(colors) = all_assigned(cells, &get) else {
                    return RuleOutcome::Open;
                };
                if distinct_count(&colors) >= 4 {
                    RuleOutcome::Holds
                } else {
                    RuleOutcome::Violated
                }
            }
            Rule::Zigzag { eq, ne, then } => {
                let (Some(e0), Some(e1), Some(n0), Some(n1)) = (get(eq[0]), get(eq[1]), get(ne[0]), get(ne[1])) else {
                    return RuleOutcome::Open;
                };
                if e0 != e1 || n0 == n1 {
                    return RuleOutcome::Vacuous;
                }
                let mut open = false;
                for pair in then {
                    match (get(pair[0]), get(pair[1])) {
                        (Some(a), Some(b)) if a != b => return RuleOutcome::Violated,
                        (Some(_), Some(_)) => {}
                        _ => open = true,
                    }
                }
                if open {
                    RuleOutcome::Open
                } else {
                    RuleOutcome::Holds
                }
            }
        }
    }

    /// True when no way of filling the unassigned cells can satisfy the rule.
    pub fn is_refuted(&self, get: impl Fn(P) -> Option<Color>) -> bool {
        match self {
            Rule::Rainbow { cells } => {
                let mut colors = [0 as Color; 6];
                let mut assigned = 0;
                for &c in cells {
                    if let Some(x) = get(c) {
                        colors[assigned] = x;
                        assigned += 1;
                    }
                }
                distinct_count(&colors[..assigned]) + (6 - assigned) < 4
            }
            Rule::AllDistinct { cells, .. } => {
                let colors: Vec<Color> = cells.iter().filter_map(|&c| get(c)).collect();
                distinct_count(&colors) < colors.len()
            }
            _ => self.evaluate(get) == RuleOutcome::Violated,
        }
    }
}

fn all_assigned<P: Copy, const N: usize>(cells: &[P; N], get: &impl Fn(P) -> Option<Color>) -> Option<[Color; N]> {
    let mut out = [0; N];
    for (slot, &c) in out.iter_mut().zip(cells) {
        *slot = get(c)?;
    }
    Some(out)
}

fn distinct_count(colors: &[Color]) -> usize {
    colors
        .iter()
        .enumerate()
        .filter(|&(idx, c)| !colors[..idx].contains(c))
        .count()
}

/// Maps a corner-relative position onto one of the four corners.
#[derive(Debug, Clone, Copy)]
struct Corner {
    flip_rows: bool,
    flip_cols: bool,
}

impl Corner {
    const ALL: [Corner; 4] = [
        Corner {
            flip_rows: false,
            flip_cols: false,
        },
        Corner {
            flip_rows: false,
            flip_cols: true,
        },
        Corner {
            flip_rows: true,
            flip_cols: false,
        },
        Corner {
            flip_rows: true,
            flip_cols: true,
        },
    ];

    fn map(self, dims: GridDims, i: usize, j: usize) -> Position {
        let i = if self.flip_rows { dims.m() + 1 - i } else { i };
        let j = if self.flip_cols { dims.n() + 1 - j } else { j };
        Position::new(i, j)
    }
}

fn push_equal(out: &mut Vec<Rule>, lemma: LemmaId, a: Position, b: Position) {
    if a == b {
        return;
    }
    let cells = if a < b { [a, b] } else { [b, a] };
    let rule = Rule::Equal { lemma, cells };
    if !out.contains(&rule) {
        out.push(rule);
    }
}

/// Periodic border bands: with a, b, c, d the colors of the corner 2x2 (all
/// distinct), the first row cycles (a,b,c,d), the second (c,d,a,b), the
/// first column (a,c,b,d) and the second (b,d,a,c); the same holds from every
/// corner. Requires m,n >= 3.
pub fn ring_rules(dims: GridDims) -> Vec<Rule> {
    let (m, n) = (dims.m(), dims.n());
    let mut out = Vec::new();
    if m < 3 || n < 3 {
        return out;
    }
    let lemma = LemmaId::Ring;
    for corner in Corner::ALL {
        let at = |i, j| corner.map(dims, i, j);
        out.push(Rule::AllDistinct {
            lemma,
            cells: [at(1, 1), at(1, 2), at(2, 1), at(2, 2)],
        });
        for j in 1..=n {
            if j + 4 <= n {
                push_equal(&mut out, lemma, at(1, j), at(1, j + 4));
                push_equal(&mut out, lemma, at(2, j), at(2, j + 4));
            }
            if j + 2 <= n {
                push_equal(&mut out, lemma, at(2, j), at(1, j + 2));
            }
            if j >= 3 {
                push_equal(&mut out, lemma, at(2, j), at(1, j - 2));
            }
        }
        for i in 1..=m {
            if i + 4 <= m {
                push_equal(&mut out, lemma, at(i, 1), at(i + 4, 1));
                push_equal(&mut out, lemma, at(i, 2), at(i + 4, 2));
            }
            if i + 2 <= m {
                push_equal(&mut out, lemma, at(i, 2), at(i + 2, 1));
            }
            if i >= 3 {
                push_equal(&mut out, lemma, at(i, 2), at(i - 2, 1));
            }
        }
        push_equal(&mut out, lemma, at(1, 3), at(2, 1));
        push_equal(&mut out, lemma, at(3, 1), at(1, 2));
    }
    out.dedup();
    out
}

/// `x(3,2) = x(2,3)` and its images at the other three corners. Requires m,n >= 3.
pub fn corner_rules(dims: GridDims) -> Vec<Rule> {
    let mut out = Vec::new();
    if dims.m() < 3 || dims.n() < 3 {
        return out;
    }
    for corner in Corner::ALL {
        push_equal(
            &mut out,
            LemmaId::Corner,
            corner.map(dims, 3, 2),
            corner.map(dims, 2, 3),
        );
    }
    out
}

/// The corner 4x4 is the coherent block: rows 3-4 repeat the first two rows
/// with the pairs swapped. Requires m,n >= 4.
pub fn coherence_rules(dims: GridDims) -> Vec<Rule> {
    let mut out = Vec::new();
    if dims.m() < 4 || dims.n() < 4 {
        return out;
    }
    for corner in Corner::ALL {
        let at = |i, j| corner.map(dims, i, j);
        push_equal(&mut out, LemmaId::Coherence, at(3, 3), at(2, 2));
        push_equal(&mut out, LemmaId::Coherence, at(3, 4), at(2, 1));
        push_equal(&mut out, LemmaId::Coherence, at(4, 3), at(1, 2));
        push_equal(&mut out, LemmaId::Coherence, at(4, 4), at(1, 1));
    }
    out
}

/// Every 2x3 and 3x2 window.
pub fn rainbow_rules(dims: GridDims) -> Vec<Rule> {
    let (m, n) = (dims.m(), dims.n());
    let mut out = Vec::new();
    let p = Position::new;
    for i in 1..m {
        for j in 1..n.saturating_sub(1) {
            out.push(Rule::Rainbow {
                cells: [
                    p(i, j),
                    p(i, j + 1),
                    p(i, j + 2),
                    p(i + 1, j),
                    p(i + 1, j + 1),
                    p(i + 1, j + 2),
                ],
            });
        }
    }
    for i in 1..m.saturating_sub(1) {
        for j in 1..n {
            out.push(Rule::Rainbow {
                cells: [
                    p(i, j),
                    p(i + 1, j),
                    p(i + 2, j),
                    p(i, j + 1),
                    p(i + 1, j + 1),
                    p(i + 2, j + 1),
                ],
            });
        }
    }
    out
}

/// The zigzag implication centered at each (i,j) with 1 < i < m, 1 < j < n,
/// in its stated form and with rows and columns exchanged.
pub fn zigzag_rules(dims: GridDims) -> Vec<Rule> {
    let (m, n) = (dims.m(), dims.n());
    let mut out = Vec::new();
    let p = Position::new;
    for i in 2..m {
        for j in 2..n {
            out.push(Rule::Zigzag {
                eq: [p(i - 1, j), p(i, j - 1)],
                ne: [p(i, j), p(i - 1, j + 1)],
                then: [[p(i + 1, j), p(i - 1, j + 1)], [p(i + 1, j + 1), p(i - 1, j)]],
            });
            out.push(Rule::Zigzag {
                eq: [p(i, j - 1), p(i - 1, j)],
                ne: [p(i, j), p(i + 1, j - 1)],
                then: [[p(i, j + 1), p(i + 1, j - 1)], [p(i + 1, j + 1), p(i, j - 1)]],
            });
        }
    }
    out
}

/// All rules usable as propagation for 3-dynamic 4-colorings of `dims`.
pub fn propagation_rules(dims: GridDims) -> Vec<Rule> {
    let mut out = ring_rules(dims);
    out.extend(corner_rules(dims));
    out.extend(coherence_rules(dims));
    out.extend(rainbow_rules(dims));
    out.extend(zigzag_rules(dims));
    out
}
