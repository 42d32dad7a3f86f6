//! Column-sweep dynamic programming.
//!
//! Columns have height `h = min(m, n)` (the grid is transposed when m > n).
//! A state after column t is the pair (column t, column t+1). Moving to
//! (column t+1, column t+2) is allowed when column t+1 meets every
//! requirement, since its whole neighborhood is then known. States are packed
//! 4 bits per cell, so k and h are both limited to 16.

use std::time::Instant;

use rustc_hash::FxHashMap;

use super::{SearchStats, SolverConfig};
use crate::error::{Error, Result};
use crate::grid::{Color, Coloring, GridDims};

pub(crate) const MAX_K: usize = 16;
pub(crate) const MAX_HEIGHT: usize = 16;

const BITS: usize = 4;
const CHECK_EVERY: u64 = 1 << 16;

type Column = [Color; MAX_HEIGHT];
type State = u128;

struct Layer {
    states: Vec<State>,
    parent: Vec<u32>,
    /// Renaming that took the parent's successor to this canonical state,
    /// packed 4 bits per color.
    sigma: Vec<u64>,
}

struct Sweep<'a> {
    h: usize,
    w: usize,
    k: usize,
    r: usize,
    symmetry: bool,
    config: &'a SolverConfig,
    deadline: Option<Instant>,
    stats: SearchStats,
}

fn pack(b: &[Color], c: &[Color]) -> State {
    let mut s: State = 0;
    for (idx, &x) in b.iter().chain(c).enumerate() {
        s |= (x as State) << (BITS * idx);
    }
    s
}

fn unpack(s: State, h: usize) -> (Column, Column) {
    let mut b = [0; MAX_HEIGHT];
    let mut c = [0; MAX_HEIGHT];
    for i in 0..h {
        b[i] = ((s >> (BITS * i)) & 0xF) as Color;
        c[i] = ((s >> (BITS * (h + i))) & 0xF) as Color;
    }
    (b, c)
}

fn pack_perm(perm: &[Color]) -> u64 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (idx, &x)| acc | (x as u64) << (BITS * idx))
}

fn unpack_perm(packed: u64, k: usize) -> Column {
    let mut perm = [0; MAX_HEIGHT];
    for (idx, slot) in perm.iter_mut().enumerate().take(k) {
        *slot = ((packed >> (BITS * idx)) & 0xF) as Color;
    }
    perm
}

impl Sweep<'_> {
    /// Does cell `i` of column `b` meet its requirement? `c_i` is the cell to
    /// its right, if any.
    fn meets(&self, a: Option<&[Color]>, b: &[Color], c_i: Option<Color>, i: usize) -> bool {
        let mut seen = 0u32;
        let mut degree = 0;
        let left = a.map(|a| a[i]);
        let up = (i > 0).then(|| b[i - 1]);
        let down = (i + 1 < self.h).then(|| b[i + 1]);
        for x in [left, c_i, up, down].into_iter().flatten() {
            seen |= 1 << x;
            degree += 1;
        }
        seen.count_ones() as usize >= degree.min(self.r)
    }

    /// Can cell `i` of `c` still meet its requirement once the column after
    /// it is chosen? Needs `c[..=i+1]` (or `c[..=i]` on the last row).
    fn may_meet(&self, b: &[Color], c: &[Color], i: usize, has_next: bool) -> bool {
        let mut seen = 1u32 << b[i];
        let mut degree = 1 + has_next as usize;
        if i > 0 {
            seen |= 1 << c[i - 1];
            degree += 1;
        }
        if i + 1 < self.h {
            seen |= 1 << c[i + 1];
            degree += 1;
        }
        seen.count_ones() as usize + has_next as usize >= degree.min(self.r)
    }

    /// Calls `out` with every column `c` that can follow `b` (preceded by `a`)
    /// such that `b` meets all requirements.
    fn successors(
        &mut self,
        a: Option<&[Color]>,
        b: &[Color],
        has_next: bool,
        out: &mut dyn FnMut(&mut Self, &[Color]),
    ) {
        let mut c = [0 as Color; MAX_HEIGHT];
        self.extend(a, b, &mut c, 0, has_next, out);
    }

    fn extend(
        &mut self,
        a: Option<&[Color]>,
        b: &[Color],
        c: &mut Column,
        i: usize,
        has_next: bool,
        out: &mut dyn FnMut(&mut Self, &[Color]),
    ) {
        let h = self.h;
        if i == h {
            if h >= 1 && !self.may_meet(b, &c[..h], h - 1, has_next) {
                return;
            }
            out(self, &c[..h]);
            return;
        }
        for x in 0..self.k as Color {
            if x == b[i] || (i > 0 && c[i - 1] == x) {
                continue;
            }
            c[i] = x;
            if !self.meets(a, b, Some(x), i) {
                continue;
            }
            if i > 0 && !self.may_meet(b, &c[..h], i - 1, has_next) {
                continue;
            }
            self.extend(a, b, c, i + 1, has_next, out);
        }
    }

    /// Every proper first column; with symmetry breaking only those whose
    /// colors first appear in increasing order.
    fn first_columns(&self) -> Vec<Column> {
        let mut out = Vec::new();
        let mut col = [0 as Color; MAX_HEIGHT];
        fn rec(s: &Sweep<'_>, col: &mut Column, i: usize, used: usize, out: &mut Vec<Column>) {
            if i == s.h {
                out.push(*col);
                return;
            }
            let top = if s.symmetry { (used + 1).min(s.k) } else { s.k };
            for x in 0..top as Color {
                if i > 0 && col[i - 1] == x {
                    continue;
                }
                col[i] = x;
                rec(s, col, i + 1, used.max(x as usize + 1), out);
            }
        }
        rec(self, &mut col, 0, 0, &mut out);
        out
    }

    /// Renames colors by first appearance in (b, c). Returns the packed state
    /// and the full renaming.
    fn canonical(&self, b: &[Color], c: &[Color]) -> (State, [Color; MAX_K]) {
        let mut sigma = [Color::MAX; MAX_K];
        if !self.symmetry {
            for (x, slot) in sigma.iter_mut().enumerate().take(self.k) {
                *slot = x as Color;
            }
            return (pack(b, c), sigma);
        }
        let mut next = 0;
        let mut rb = [0 as Color; MAX_HEIGHT];
        let mut rc = [0 as Color; MAX_HEIGHT];
        for (src, dst) in [(b, &mut rb), (c, &mut rc)] {
            for (idx, &x) in src.iter().enumerate() {
                if sigma[x as usize] == Color::MAX {
                    sigma[x as usize] = next;
                    next += 1;
                }
                dst[idx] = sigma[x as usize];
            }
        }
        for slot in sigma.iter_mut().take(self.k) {
            if *slot == Color::MAX {
                *slot = next;
                next += 1;
            }
        }
        (pack(&rb[..self.h], &rc[..self.h]), sigma)
    }

    fn check_budget(&self, layer_len: usize) -> Result<()> {
        if layer_len as u64 > self.config.dp_state_budget {
            return Err(Error::ResourceLimit {
                what: format!("frontier layer exceeds {} states", self.config.dp_state_budget),
                last_k: None,
            });
        }
        if self.stats.dp_transitions.is_multiple_of(CHECK_EVERY) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::ResourceLimit {
                        what: "time limit".into(),
                        last_k: None,
                    });
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, layer: &mut Layer, index: &mut FxHashMap<State, u32>, parent: u32, b: &[Color], c: &[Color]) {
        self.stats.dp_transitions += 1;
        let (state, sigma) = self.canonical(b, c);
        if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(state) {
            slot.insert(layer.states.len() as u32);
            layer.states.push(state);
            layer.parent.push(parent);
            layer.sigma.push(pack_perm(&sigma[..self.k]));
        }
    }

    fn run(&mut self) -> Result<Option<Vec<Column>>> {
        let h = self.h;
        if self.w == 1 {
            // A single column: only vertical neighbors.
            let col = self
                .first_columns()
                .into_iter()
                .find(|col| (0..h).all(|i| self.meets(None, &col[..h], None, i)));
            return Ok(col.map(|col| vec![col]));
        }

        let mut layers: Vec<Layer> = Vec::with_capacity(self.w - 1);
        let mut failure = None;

        let mut layer = Layer {
            states: Vec::new(),
            parent: Vec::new(),
            sigma: Vec::new(),
        };
        let mut index = FxHashMap::default();
        let firsts = self.first_columns();
        let has_next = self.w > 2;
        for b in &firsts {
            self.successors(None, &b[..h], has_next, &mut |s, c| {
                if failure.is_some() {
                    return;
                }
                if !has_next && !(0..h).all(|i| s.meets(Some(&b[..h]), c, None, i)) {
                    return;
                }
                s.push(&mut layer, &mut index, u32::MAX, &b[..h], c);
                if let Err(e) = s.check_budget(layer.states.len()) {
                    failure = Some(e);
                }
            });
        }
        if let Some(e) = failure {
            return Err(e);
        }
        self.stats.dp_states += layer.states.len() as u64;
        layers.push(layer);

        for t in 2..self.w {
            let has_next = t + 1 < self.w;
            let prev = layers.last().expect("at least one layer");
            if prev.states.is_empty() {
                return Ok(None);
            }
            let mut layer = Layer {
                states: Vec::new(),
                parent: Vec::new(),
                sigma: Vec::new(),
            };
            let mut index = FxHashMap::default();
            for (pidx, &state) in prev.states.iter().enumerate() {
                let (a, b) = unpack(state, h);
                self.successors(Some(&a[..h]), &b[..h], has_next, &mut |s, c| {
                    if failure.is_some() {
                        return;
                    }
                    if !has_next && !(0..h).all(|i| s.meets(Some(&b[..h]), c, None, i)) {
                        return;
                    }
                    s.push(&mut layer, &mut index, pidx as u32, &b[..h], c);
                    if let Err(e) = s.check_budget(layer.states.len()) {
                        failure = Some(e);
                    }
                });
                if let Some(e) = failure.take() {
                    return Err(e);
                }
            }
            self.stats.dp_states += layer.states.len() as u64;
            layers.push(layer);
        }

        let last = layers.last().expect("at least one layer");
        if last.states.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.reconstruct(&layers)))
    }

    /// Walks parent links back from the first final state, renaming each
    /// column into the final state's frame.
    fn reconstruct(&self, layers: &[Layer]) -> Vec<Column> {
        let h = self.h;
        let k = self.k;
        let mut tau: Column = [0; MAX_HEIGHT];
        for (x, slot) in tau.iter_mut().enumerate().take(k) {
            *slot = x as Color;
        }
        let rename = |tau: &Column, col: &Column| -> Column {
            let mut out = [0; MAX_HEIGHT];
            for i in 0..h {
                out[i] = tau[col[i] as usize];
            }
            out
        };
        let mut columns = Vec::with_capacity(self.w);
        let mut idx = 0usize;
        for layer in layers.iter().rev() {
            let (b, c) = unpack(layer.states[idx], h);
            columns.push(rename(&tau, &c));
            if layer.parent[idx] == u32::MAX {
                columns.push(rename(&tau, &b));
            }
            // Colors of this frame = sigma(colors of the parent's frame).
            let sigma = unpack_perm(layer.sigma[idx], k);
            let mut composed = [0; MAX_HEIGHT];
            for x in 0..k {
                composed[x] = tau[sigma[x] as usize];
            }
            tau = composed;
            idx = layer.parent[idx] as usize;
        }
        columns.reverse();
        columns
    }
}

/// Estimated per-column state count: proper colorings of a 2 x h ladder,
/// divided by k! when states are stored up to renaming.
fn estimate(h: usize, k: usize, symmetry: bool) -> f64 {
    let k = k as f64;
    let mut est = k * (k - 1.0).max(0.0) * (k * k - 3.0 * k + 3.0).powi(h as i32 - 1);
    if symmetry {
        est /= (1..=k as u64).map(|x| x as f64).product::<f64>();
    }
    est
}

pub(super) fn solve(
    dims: GridDims,
    r: usize,
    k: usize,
    config: &SolverConfig,
    start: Instant,
) -> Result<(Option<Coloring>, SearchStats)> {
    if k > MAX_K {
        return Err(Error::unsupported(format!(
            "frontier engine supports k <= {MAX_K}, got {k}"
        )));
    }
    let transposed = dims.m() > dims.n();
    let (h, w) = if transposed {
        (dims.n(), dims.m())
    } else {
        (dims.m(), dims.n())
    };
    if h > MAX_HEIGHT {
        return Err(Error::unsupported(format!(
            "frontier engine supports min(m,n) <= {MAX_HEIGHT}, got {h}"
        )));
    }
    let est = estimate(h, k, config.symmetry_breaking);
    if est > config.dp_state_budget as f64 {
        return Err(Error::ResourceLimit {
            what: format!(
                "about {est:.0} frontier states per column exceed the budget {}",
                config.dp_state_budget
            ),
            last_k: None,
        });
    }

    let mut sweep = Sweep {
        h,
        w,
        k,
        r,
        symmetry: config.symmetry_breaking,
        config,
        deadline: config.deadline(start),
        stats: SearchStats::default(),
    };
    let columns = sweep.run()?;
    let witness = match columns {
        None => None,
        Some(columns) => {
            let sweep_dims = GridDims::new(h, w)?;
            let c = Coloring::from_fn(sweep_dims, k, |p| columns[p.j - 1][p.i - 1])?;
            Some(if transposed { c.transpose() } else { c })
        }
    };
    Ok((witness, sweep.stats))
}
