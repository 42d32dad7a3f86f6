//! Coherence of the upper-left corner and the correct / flipped classification
//! relative to the 4-periodic tiling it generates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constructions::BLOCK;
use crate::error::{Error, Result};
use crate::grid::{Color, Coloring, GridDims, Position};

use super::{LemmaFinding, LemmaId, Verdict};

/// Canonical coherent block, rows `abcd / cdab / badc / dcba` with
/// a,b,c,d = 0,1,2,3. All mod-4 logic below reads from this one table.
pub const COHERENT_BLOCK: [[Color; 4]; 4] = BLOCK;

/// Canonical label of `(i,j)` in the 4-periodic tiling by the coherent block.
pub fn canonical_color(p: Position) -> Color {
    COHERENT_BLOCK[(p.i - 1) % 4][(p.j - 1) % 4]
}

/// Maps each color of a coloring to its canonical label: `x(1,1) -> a`,
/// `x(1,2) -> b`, `x(2,1) -> c`, `x(2,2) -> d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReferencePermutation(pub [Color; 4]);

impl ReferencePermutation {
    pub fn label(&self, color: Color) -> Color {
        self.0[color as usize]
    }
}

/// Whether the upper-left 4x4 equals the coherent block after renaming
/// colors, and the renaming when it does.
pub fn check_coherence(c: &Coloring) -> (LemmaFinding, Option<ReferencePermutation>) {
    let lemma = LemmaId::Coherence;
    if c.k() != 4 {
        return (
            LemmaFinding::not_applicable(lemma, format!("needs k = 4, got {}", c.k())),
            None,
        );
    }
    let dims = c.dims();
    if dims.m() < 4 || dims.n() < 4 {
        return (LemmaFinding::not_applicable(lemma, "needs m,n >= 4"), None);
    }
    let corner: Vec<Position> = (1..=4)
        .flat_map(|i| (1..=4).map(move |j| Position::new(i, j)))
        .collect();
    if corner.iter().any(|&p| c.get(p).is_none()) {
        return (
            LemmaFinding::not_applicable(lemma, "upper-left 4x4 not fully assigned"),
            None,
        );
    }
    let at = |i, j| c.get(Position::new(i, j)).unwrap();
    let seeds = [at(1, 1), at(1, 2), at(2, 1), at(2, 2)];
    let mut perm = [u8::MAX; 4];
    for (label, &color) in seeds.iter().enumerate() {
        if perm[color as usize] != u8::MAX {
            let finding = LemmaFinding {
                lemma,
                verdict: Verdict::Violated,
                witnesses: vec![vec![
                    Position::new(1, 1),
                    Position::new(1, 2),
                    Position::new(2, 1),
                    Position::new(2, 2),
                ]],
                vacuous: false,
                checked: 16,
                note: Some("corner 2x2 repeats a color".into()),
            };
            return (finding, None);
        }
        perm[color as usize] = label as Color;
    }
    let mismatches: Vec<Position> = corner
        .into_iter()
        .filter(|&p| perm[c.get(p).unwrap() as usize] != canonical_color(p))
        .collect();
    if mismatches.is_empty() {
        let finding = LemmaFinding {
            lemma,
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            vacuous: false,
            checked: 16,
            note: None,
        };
        (finding, Some(ReferencePermutation(perm)))
    } else {
        let finding = LemmaFinding {
            lemma,
            verdict: Verdict::Violated,
            witnesses: vec![mismatches],
            vacuous: false,
            checked: 16,
            note: None,
        };
        (finding, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionClass {
    Correct,
    /// Half of a vertical pair `(i,j),(i+1,j)` (i > 4) holding each other's
    /// correct colors.
    FlippedRowPair,
    /// Half of a horizontal pair `(i,j),(i,j+1)` (j > 4) holding each other's
    /// correct colors.
    FlippedColPair,
    Other,
    Unassigned,
}

impl PositionClass {
    fn symbol(self) -> char {
        match self {
            PositionClass::Correct => 'C',
            PositionClass::FlippedRowPair => 'V',
            PositionClass::FlippedColPair => 'H',
            PositionClass::Other => 'x',
            PositionClass::Unassigned => '.',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionClassification {
    pub dims: GridDims,
    pub reference: ReferencePermutation,
    /// Row-major labels.
    pub labels: Vec<PositionClass>,
}

impl PositionClassification {
    pub fn get(&self, p: Position) -> PositionClass {
        self.labels[self.dims.index(p)]
    }

    pub fn count(&self, class: PositionClass) -> usize {
        self.labels.iter().filter(|&&l| l == class).count()
    }
}

impl fmt::Display for PositionClassification {
    /// One character per cell: `C` correct, `V` vertical flipped pair,
    /// `H` horizontal flipped pair, `x` other, `.` unassigned.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.labels.chunks(self.dims.n()) {
            let line: String = row.iter().map(|l| l.symbol()).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Labels every position relative to the tiling generated by the coherent
/// corner. Errors with [`Error::NotCoherent`] when the corner is not coherent.
pub fn classify_positions(c: &Coloring) -> Result<PositionClassification> {
    let (finding, reference) = check_coherence(c);
    let reference = match (finding.verdict, reference) {
        (Verdict::Holds, Some(r)) => r,
        _ => return Err(Error::NotCoherent),
    };
    let dims = c.dims();
    let label = |p: Position| c.get(p).map(|x| reference.label(x));
    let swapped = |p: Position, q: Position| {
        dims.contains(q) && label(p) == Some(canonical_color(q)) && label(q) == Some(canonical_color(p))
    };
    let labels = dims
        .positions()
        .map(|p| match label(p) {
            None => PositionClass::Unassigned,
            Some(x) if x == canonical_color(p) => PositionClass::Correct,
            Some(_) => {
                let below = Position::new(p.i + 1, p.j);
                let right = Position::new(p.i, p.j + 1);
                if (p.i > 4 && swapped(p, below)) || (p.i > 5 && swapped(Position::new(p.i - 1, p.j), p)) {
                    PositionClass::FlippedRowPair
                } else if (p.j > 4 && swapped(p, right)) || (p.j > 5 && swapped(Position::new(p.i, p.j - 1), p)) {
                    PositionClass::FlippedColPair
                } else {
                    PositionClass::Other
                }
            }
        })
        .collect();
    Ok(PositionClassification {
        dims,
        reference,
        labels,
    })
}

/// Cells of an (r,s)-partial coloring and whether each is flipped.
fn partial_region(r: usize, s: usize) -> Vec<(Position, bool)> {
    let p = Position::new;
    let mut cells = Vec::new();
    let mut add = |q: Position, flipped: bool| {
        if let Some(slot) = cells.iter_mut().find(|(c, _)| *c == q) {
            let (_, f): &mut (Position, bool) = slot;
            *f |= flipped;
        } else {
            cells.push((q, flipped));
        }
    };
    for i in 1..=3 {
        for j in 1..=2 * s {
            add(p(i, j), false);
        }
    }
    for j in 1..=2 * s + 2 {
        add(p(4, j), false);
    }
    for j in 1..=3 {
        for i in 1..=2 * r {
            add(p(i, j), false);
        }
    }
    for i in 1..=2 * r + 2 {
        add(p(i, 4), false);
    }
    for q in [p(3, 2 * s + 1), p(3, 2 * s + 2), p(2 * r + 1, 3), p(2 * r + 2, 3)] {
        add(q, true);
    }
    cells
}

/// Expected canonical color of a region cell. Flipped cells sit in row 3
/// (horizontal pair starting at an odd column) or column 3 (vertical pair
/// starting at an odd row) and take their partner's correct color.
fn region_color(p: Position, flipped: bool) -> Color {
    if !flipped {
        return canonical_color(p);
    }
    let partner = |x: usize| if x % 2 == 1 { x + 1 } else { x - 1 };
    if p.i == 3 {
        canonical_color(Position::new(p.i, partner(p.j)))
    } else {
        canonical_color(Position::new(partner(p.i), p.j))
    }
}

/// The (r,s)-partial coloring on `dims` with canonical colors: correct on
/// the first three rows through column 2s, row 4 through column 2s+2, the
/// first three columns through row 2r and column 4 through row 2r+2, with
/// (3,2s+1),(3,2s+2) and (2r+1,3),(2r+2,3) flipped. Everything else is
/// unassigned.
pub fn partial_fixture(dims: GridDims, r: usize, s: usize) -> Result<Coloring> {
    if r < 2 || s < 2 {
        return Err(Error::invalid(format!(
            "partial colorings need r,s >= 2, got ({r},{s})"
        )));
    }
    if dims.m() < 2 * r + 2 || dims.n() < 2 * s + 2 {
        return Err(Error::invalid(format!(
            "a ({r},{s})-partial coloring needs at least {}x{}",
            2 * r + 2,
            2 * s + 2
        )));
    }
    let mut c = Coloring::unassigned(dims, 4)?;
    for (p, flipped) in partial_region(r, s) {
        c.set(p, Some(region_color(p, flipped)))?;
    }
    Ok(c)
}

/// `Some((r,s))` when the coloring is coherent and is an (r,s)-partial
/// coloring for some r,s >= 2. Cells outside the defining region are ignored.
pub fn detect_partial_signature(c: &Coloring) -> Option<(usize, usize)> {
    let (finding, reference) = check_coherence(c);
    if finding.verdict != Verdict::Holds {
        return None;
    }
    let reference = reference?;
    let dims = c.dims();
    let label = |p: Position| c.get(p).map(|x| reference.label(x));
    let max_r = dims.m().saturating_sub(2) / 2;
    let max_s = dims.n().saturating_sub(2) / 2;
    for r in 2..=max_r {
        for s in 2..=max_s {
            let matches = partial_region(r, s)
                .into_iter()
                .all(|(p, flipped)| label(p) == Some(region_color(p, flipped)));
            if matches {
                return Some((r, s));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{block_coloring, mod5_coloring};

    fn dims(m: usize, n: usize) -> GridDims {
        GridDims::new(m, n).unwrap()
    }

    /// The 6x6 base case with a,b,c,d = 0,1,2,3 and blanks as None.
    fn base_case() -> Coloring {
        let rows: [[Option<Color>; 6]; 6] = {
            let (a, b, c, d) = (Some(0), Some(1), Some(2), Some(3));
            [
                [a, b, c, d, None, None],
                [c, d, a, b, None, None],
                [b, a, d, c, a, b],
                [d, c, b, a, d, c],
                [None, None, a, d, None, None],
                [None, None, c, b, None, None],
            ]
        };
        let mut col = Coloring::unassigned(dims(6, 6), 4).unwrap();
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                col.set(Position::new(i + 1, j + 1), x).unwrap();
            }
        }
        col
    }

    #[test]
    fn block_is_coherent_with_identity() {
        let (f, perm) = check_coherence(&block_coloring(dims(4, 4)).unwrap());
        assert_eq!(f.verdict, Verdict::Holds);
        assert_eq!(perm, Some(ReferencePermutation([0, 1, 2, 3])));
    }

    #[test]
    fn coherence_gating_and_negative() {
        let (f, perm) = check_coherence(&mod5_coloring(dims(5, 5)).unwrap());
        assert_eq!(f.verdict, Verdict::NotApplicable);
        assert!(perm.is_none());

        let b = block_coloring(dims(4, 4)).unwrap();
        let mut rows: Vec<Vec<Color>> = b.rows().map(<[Color]>::to_vec).collect();
        rows.swap(2, 3);
        let swapped = Coloring::from_rows(4, &rows).unwrap();
        let (f, perm) = check_coherence(&swapped);
        assert_eq!(f.verdict, Verdict::Violated);
        assert!(!f.witnesses[0].is_empty());
        assert!(perm.is_none());
    }

    #[test]
    fn coherence_reference_follows_renaming() {
        let b = block_coloring(dims(6, 6)).unwrap();
        let renamed = b.permute_colors(&[2, 0, 3, 1]).unwrap();
        let (f, perm) = check_coherence(&renamed);
        assert_eq!(f.verdict, Verdict::Holds);
        // color 2 was a, 0 was b, 3 was c, 1 was d
        assert_eq!(perm.unwrap().0, [1, 3, 0, 2]);
    }

    #[test]
    fn tiling_is_all_correct() {
        let cls = classify_positions(&block_coloring(dims(8, 8)).unwrap()).unwrap();
        assert_eq!(cls.count(PositionClass::Correct), 64);
    }

    #[test]
    fn base_case_classification() {
        let cls = classify_positions(&base_case()).unwrap();
        let p = Position::new;
        assert_eq!(cls.get(p(3, 5)), PositionClass::FlippedColPair);
        assert_eq!(cls.get(p(3, 6)), PositionClass::FlippedColPair);
        assert_eq!(cls.get(p(5, 3)), PositionClass::FlippedRowPair);
        assert_eq!(cls.get(p(6, 3)), PositionClass::FlippedRowPair);
        assert_eq!(cls.count(PositionClass::Other), 0);
        assert_eq!(cls.count(PositionClass::Unassigned), 12);
        assert_eq!(cls.count(PositionClass::Correct), 36 - 12 - 4);
        assert_eq!(cls.to_string().lines().nth(2), Some("CCCCHH"));
    }

    #[test]
    fn non_coherent_classification_errors() {
        let b = block_coloring(dims(4, 4)).unwrap();
        let mut rows: Vec<Vec<Color>> = b.rows().map(<[Color]>::to_vec).collect();
        rows.swap(2, 3);
        let swapped = Coloring::from_rows(4, &rows).unwrap();
        assert_eq!(classify_positions(&swapped), Err(Error::NotCoherent));
    }

    #[test]
    fn base_case_signature() {
        assert_eq!(detect_partial_signature(&base_case()), Some((2, 2)));
        assert_eq!(partial_fixture(dims(6, 6), 2, 2).unwrap(), base_case());
        assert_eq!(detect_partial_signature(&block_coloring(dims(8, 8)).unwrap()), None);

        // Undo the row flip in column 3.
        let mut c = base_case();
        c.set(Position::new(5, 3), Some(2)).unwrap();
        c.set(Position::new(6, 3), Some(0)).unwrap();
        assert_eq!(detect_partial_signature(&c), None);
    }

    #[test]
    fn fixtures_round_trip() {
        for r in 2..=4 {
            for s in 2..=4 {
                let d = dims(2 * r + 4, 2 * s + 4);
                let fx = partial_fixture(d, r, s).unwrap();
                assert_eq!(detect_partial_signature(&fx), Some((r, s)), "({r},{s})");
                let renamed = fx.permute_colors(&[3, 1, 0, 2]).unwrap();
                assert_eq!(detect_partial_signature(&renamed), Some((r, s)));
            }
        }
        assert!(partial_fixture(dims(5, 6), 2, 2).is_err());
        assert!(partial_fixture(dims(9, 9), 1, 2).is_err());
    }
}
