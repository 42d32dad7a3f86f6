//! Grid graphs `G(m,n)`, colorings of them, and the r-dynamic validity check.
//!
//! Positions are 1-based `(i, j)` with `1 <= i <= m` (row) and `1 <= j <= n`
//! (column). Two positions are adjacent iff their Manhattan distance is 1.
//! Colors are small integers `0..k`; a cell may also hold [`UNASSIGNED`],
//! which turns a [`Coloring`] into a partial coloring.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Color = u8;

/// Sentinel for a cell that carries no color yet.
pub const UNASSIGNED: Color = Color::MAX;

/// Largest palette a [`Coloring`] can carry (the sentinel takes the last value).
pub const MAX_PALETTE: usize = UNASSIGNED as usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridDims {
    m: usize,
    n: usize,
}

impl GridDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!("grid dimensions must be positive, got {m}x{n}")));
        }
        Ok(GridDims { m, n })
    }

    /// Rows.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Columns.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cell_count(&self) -> usize {
        self.m * self.n
    }

    pub fn transposed(&self) -> GridDims {
        GridDims { m: self.n, n: self.m }
    }

    pub fn contains(&self, p: Position) -> bool {
        (1..=self.m).contains(&p.i) && (1..=self.n).contains(&p.j)
    }

    pub fn check(&self, p: Position) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "position {p} outside {}x{} grid",
                self.m, self.n
            )))
        }
    }

    /// Maximum degree of the grid graph.
    pub fn max_degree(&self) -> usize {
        let along = |len: usize| (len - 1).min(2);
        along(self.m) + along(self.n)
    }

    pub fn degree(&self, p: Position) -> usize {
        (p.i > 1) as usize + (p.i < self.m) as usize + (p.j > 1) as usize + (p.j < self.n) as usize
    }

    /// Row-major index of `p`; `p` must lie inside the grid.
    pub fn index(&self, p: Position) -> usize {
        debug_assert!(self.contains(p));
        (p.i - 1) * self.n + (p.j - 1)
    }

    pub fn position(&self, index: usize) -> Position {
        Position::new(index / self.n + 1, index % self.n + 1)
    }

    /// All positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (1..=self.m).flat_map(move |i| (1..=self.n).map(move |j| Position::new(i, j)))
    }

    /// Neighbors of an in-range position, in the order up, down, left, right.
    pub(crate) fn neighbors_unchecked(&self, p: Position) -> impl Iterator<Item = Position> {
        let (m, n) = (self.m, self.n);
        [
            (p.i > 1).then(|| Position::new(p.i - 1, p.j)),
            (p.i < m).then(|| Position::new(p.i + 1, p.j)),
            (p.j > 1).then(|| Position::new(p.i, p.j - 1)),
            (p.j < n).then(|| Position::new(p.i, p.j + 1)),
        ]
        .into_iter()
        .flatten()
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub i: usize,
    pub j: usize,
}

impl Position {
    pub const fn new(i: usize, j: usize) -> Self {
        Position { i, j }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl From<(usize, usize)> for Position {
    fn from((i, j): (usize, usize)) -> Self {
        Position::new(i, j)
    }
}

/// Positions at Manhattan distance 1 from `p`, ordered up, down, left, right.
pub fn neighbors(dims: GridDims, p: Position) -> Result<Vec<Position>> {
    dims.check(p)?;
    Ok(dims.neighbors_unchecked(p).collect())
}

/// A (possibly partial) assignment of colors `0..k` to the cells of a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    dims: GridDims,
    k: usize,
    cells: Vec<Color>,
}

impl Coloring {
    /// Builds a coloring from row-major cells. Cells must be `< k` or [`UNASSIGNED`].
    pub fn new(dims: GridDims, k: usize, cells: Vec<Color>) -> Result<Self> {
        if k == 0 || k > MAX_PALETTE {
            return Err(Error::invalid(format!(
                "palette size must be in 1..={MAX_PALETTE}, got {k}"
            )));
        }
        if cells.len() != dims.cell_count() {
            return Err(Error::invalid(format!(
                "expected {} cells for {}x{}, got {}",
                dims.cell_count(),
                dims.m,
                dims.n,
                cells.len()
            )));
        }
        if let Some((idx, &c)) = cells
            .iter()
            .enumerate()
            .find(|&(_, &c)| c != UNASSIGNED && c as usize >= k)
        {
            return Err(Error::invalid(format!(
                "color {c} at {} is outside palette 0..{k}",
                dims.position(idx)
            )));
        }
        Ok(Coloring { dims, k, cells })
    }

    pub fn unassigned(dims: GridDims, k: usize) -> Result<Self> {
        Coloring::new(dims, k, vec![UNASSIGNED; dims.cell_count()])
    }

    pub fn from_fn(dims: GridDims, k: usize, mut f: impl FnMut(Position) -> Color) -> Result<Self> {
        let cells = dims.positions().map(&mut f).collect();
        Coloring::new(dims, k, cells)
    }

    pub fn from_rows(k: usize, rows: &[Vec<Color>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let dims = GridDims::new(m, n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("rows have unequal lengths"));
        }
        Coloring::new(dims, k, rows.concat())
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Row-major cell values, including [`UNASSIGNED`] sentinels.
    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    /// Color at `p`, or `None` when unassigned. Panics if `p` is out of range.
    pub fn get(&self, p: Position) -> Option<Color> {
        assert!(self.dims.contains(p), "position {p} outside {}", self.dims);
        match self.cells[self.dims.index(p)] {
            UNASSIGNED => None,
            c => Some(c),
        }
    }

    /// Like [`Coloring::get`] but returns `None` for out-of-range positions too.
    pub fn try_get(&self, i: isize, j: isize) -> Option<Color> {
        if i < 1 || j < 1 {
            return None;
        }
        let p = Position::new(i as usize, j as usize);
        if self.dims.contains(p) {
            self.get(p)
        } else {
            None
        }
    }

    pub fn set(&mut self, p: Position, color: Option<Color>) -> Result<()> {
        self.dims.check(p)?;
        let value = match color {
            Some(c) if (c as usize) < self.k => c,
            Some(c) => return Err(Error::invalid(format!("color {c} outside palette 0..{}", self.k))),
            None => UNASSIGNED,
        };
        let idx = self.dims.index(p);
        self.cells[idx] = value;
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        !self.cells.contains(&UNASSIGNED)
    }

    pub fn assigned_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != UNASSIGNED).count()
    }

    pub fn distinct_colors(&self) -> usize {
        self.cells
            .iter()
            .filter(|&&c| c != UNASSIGNED)
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Color]> {
        self.cells.chunks(self.dims.n)
    }

    pub fn transpose(&self) -> Coloring {
        let t = self.dims.transposed();
        let cells = t
            .positions()
            .map(|p| self.cells[self.dims.index(Position::new(p.j, p.i))])
            .collect();
        Coloring {
            dims: t,
            k: self.k,
            cells,
        }
    }

    /// Mirror top-to-bottom.
    pub fn reflect_rows(&self) -> Coloring {
        let m = self.dims.m;
        let cells = self
            .dims
            .positions()
            .map(|p| self.cells[self.dims.index(Position::new(m + 1 - p.i, p.j))])
            .collect();
        Coloring {
            dims: self.dims,
            k: self.k,
            cells,
        }
    }

    /// Mirror left-to-right.
    pub fn reflect_cols(&self) -> Coloring {
        let n = self.dims.n;
        let cells = self
            .dims
            .positions()
            .map(|p| self.cells[self.dims.index(Position::new(p.i, n + 1 - p.j))])
            .collect();
        Coloring {
            dims: self.dims,
            k: self.k,
            cells,
        }
    }

    /// Renames every color `c` to `perm[c]`. `perm` must be a permutation of `0..k`.
    pub fn permute_colors(&self, perm: &[Color]) -> Result<Coloring> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted.len() != self.k || sorted.iter().enumerate().any(|(i, &c)| c as usize != i) {
            return Err(Error::invalid(format!("not a permutation of 0..{}", self.k)));
        }
        let cells = self
            .cells
            .iter()
            .map(|&c| if c == UNASSIGNED { c } else { perm[c as usize] })
            .collect();
        Ok(Coloring {
            dims: self.dims,
            k: self.k,
            cells,
        })
    }

    /// Same cells over a different palette size.
    pub fn with_palette(&self, k: usize) -> Result<Coloring> {
        Coloring::new(self.dims, k, self.cells.clone())
    }

    /// Writes the text format. Unassigned cells are printed as `.`, which the
    /// parser does not accept; only complete colorings round-trip.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.dims.m, self.dims.n, self.k)?;
        for row in self.rows() {
            for (j, &c) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                if c == UNASSIGNED {
                    f.write_str(".")?;
                } else {
                    write!(f, "{c}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = Error;

    /// Parses the text format: a `m n k` header line followed by `m` lines of
    /// `n` color indices, tokens separated by single spaces, each line
    /// (including the last) terminated by `\n`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse { line, column, message };

        if !s.is_empty() && !s.ends_with('\n') {
            let line = s.split('\n').count();
            let column = s.rsplit('\n').next().map_or(0, str::len) + 1;
            return Err(err(line, column, "missing trailing newline".into()));
        }
        let lines: Vec<&str> = s.split_terminator('\n').collect();
        if lines.is_empty() {
            return Err(err(1, 1, "empty input".into()));
        }

        fn tokens(line_no: usize, line: &str) -> Result<Vec<(usize, u64)>> {
            let mut out = Vec::new();
            let mut column = 1;
            for tok in line.split(' ') {
                if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                    let message = if tok.is_empty() {
                        "expected a number (tokens are separated by single spaces)".to_string()
                    } else {
                        format!("unexpected token {tok:?}")
                    };
                    return Err(Error::Parse {
                        line: line_no,
                        column,
                        message,
                    });
                }
                let value = tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    column,
                    message: format!("number {tok} is too large"),
                })?;
                out.push((column, value));
                column += tok.len() + 1;
            }
            Ok(out)
        }

        let header = tokens(1, lines[0])?;
        if header.len() != 3 {
            let column = header.get(3).map_or(lines[0].len() + 1, |t| t.0);
            return Err(err(
                1,
                column,
                format!("header must be `m n k`, got {} tokens", header.len()),
            ));
        }
        let (m, n, k) = (header[0].1 as usize, header[1].1 as usize, header[2].1 as usize);
        for (idx, (name, v)) in [("m", m), ("n", n), ("k", k)].into_iter().enumerate() {
            if v == 0 {
                return Err(err(1, header[idx].0, format!("{name} must be positive")));
            }
        }
        if k > MAX_PALETTE {
            return Err(err(1, header[2].0, format!("k must be at most {MAX_PALETTE}")));
        }
        let dims = GridDims::new(m, n)?;
        if lines.len() != m + 1 {
            let line = (m + 2).min(lines.len() + 1);
            return Err(err(
                line,
                1,
                format!("expected {m} color rows, found {}", lines.len() - 1),
            ));
        }

        let mut cells = Vec::with_capacity(dims.cell_count());
        for (row, line) in lines[1..].iter().enumerate() {
            let line_no = row + 2;
            let toks = tokens(line_no, line)?;
            if toks.len() != n {
                let column = toks.get(n).map_or(line.len() + 1, |t| t.0);
                return Err(err(line_no, column, format!("expected {n} colors, got {}", toks.len())));
            }
            for (column, v) in toks {
                if v as usize >= k {
                    return Err(err(line_no, column, format!("color {v} outside palette 0..{k}")));
                }
                cells.push(v as Color);
            }
        }
        Coloring::new(dims, k, cells)
    }
}

/// The set of colors on the assigned neighbors of `p`.
pub fn seen_colors(c: &Coloring, p: Position) -> Result<BTreeSet<Color>> {
    c.dims.check(p)?;
    Ok(c.dims.neighbors_unchecked(p).filter_map(|q| c.get(q)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deficiency {
    pub position: Position,
    pub degree: usize,
    /// `min(r, degree)`.
    pub required: usize,
    pub seen: usize,
    /// Neighbors without a color yet; zero for complete colorings.
    pub unassigned_neighbors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteViolation {
    pub position: Position,
    pub color: Color,
}

/// Every way a coloring fails to be a proper r-dynamic coloring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub improper_edges: Vec<(Position, Position)>,
    pub deficient_vertices: Vec<Deficiency>,
    pub out_of_palette: Vec<PaletteViolation>,
    pub unassigned: Vec<Position>,
}

impl ViolationReport {
    /// True iff the coloring is a complete proper r-dynamic coloring.
    pub fn is_empty(&self) -> bool {
        self.is_consistent() && self.unassigned.is_empty()
    }

    /// True iff nothing is already violated; unassigned cells are allowed.
    pub fn is_consistent(&self) -> bool {
        self.improper_edges.is_empty() && self.deficient_vertices.is_empty() && self.out_of_palette.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.improper_edges.len() + self.deficient_vertices.len() + self.out_of_palette.len()
    }
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "ok");
        }
        for (p, q) in &self.improper_edges {
            writeln!(f, "improper {p} {q}")?;
        }
        for d in &self.deficient_vertices {
            writeln!(
                f,
                "deficient {} degree {} required {} seen {}",
                d.position, d.degree, d.required, d.seen
            )?;
        }
        for v in &self.out_of_palette {
            writeln!(f, "palette {} color {}", v.position, v.color)?;
        }
        for p in &self.unassigned {
            writeln!(f, "unassigned {p}")?;
        }
        Ok(())
    }
}

/// Checks `c` against the r-dynamic condition `|f(N(v))| >= min(r, d(v))`
/// plus properness, reporting every violation rather than the first.
///
/// Unassigned cells never cause an improper edge. A vertex is deficient when
/// its seen colors plus its unassigned neighbors cannot reach the requirement,
/// so on complete colorings this is exactly the definition and on partial
/// ones it reports only violations no completion can repair.
pub fn validate(c: &Coloring, r: usize, expected_k: Option<usize>) -> Result<ViolationReport> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let dims = c.dims;
    let mut report = ViolationReport::default();
    for p in dims.positions() {
        let own = c.get(p);
        match own {
            None => report.unassigned.push(p),
            Some(color) => {
                if let Some(k) = expected_k {
                    if color as usize >= k {
                        report.out_of_palette.push(PaletteViolation { position: p, color });
                    }
                }
                // Each edge once: look down and right.
                for q in [Position::new(p.i + 1, p.j), Position::new(p.i, p.j + 1)] {
                    if dims.contains(q) && c.get(q) == Some(color) {
                        report.improper_edges.push((p, q));
                    }
                }
            }
        }

        let mut seen = 0u64;
        let mut open = 0;
        let mut degree = 0;
        for q in dims.neighbors_unchecked(p) {
            degree += 1;
            match c.get(q) {
                Some(x) => seen |= 1u64 << (x % 64),
                None => open += 1,
            }
        }
        let seen_count = if c.k <= 64 {
            seen.count_ones() as usize
        } else {
            dims.neighbors_unchecked(p)
                .filter_map(|q| c.get(q))
                .collect::<BTreeSet<_>>()
                .len()
        };
        let required = r.min(degree);
        if seen_count + open < required {
            report.deficient_vertices.push(Deficiency {
                position: p,
                degree,
                required,
                seen: seen_count,
                unassigned_neighbors: open,
            });
        }
    }
    Ok(report)
}
