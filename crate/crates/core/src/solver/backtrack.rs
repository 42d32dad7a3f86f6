//! Row-major backtracking with forward checking.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SearchStats, SolverConfig};
use crate::analyzer::rules::{propagation_rules, Rule};
use crate::error::{Error, Result};
use crate::grid::{Color, Coloring, UNASSIGNED};

/// Colors are tracked in a `u64` bitmask.
pub(crate) const MAX_K: usize = 64;

const FLUSH_EVERY: u64 = 4096;
/// Target number of subtrees per worker when splitting the search.
const PREFIXES_PER_THREAD: usize = 16;

/// Counters shared by every worker of one search.
struct Shared {
    nodes: AtomicU64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    cancelled: AtomicBool,
}

impl Shared {
    fn new(config: &SolverConfig, start: Instant) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            node_limit: config.node_limit,
            deadline: config.deadline(start),
            cancelled: AtomicBool::new(false),
        }
    }
}

/// Immutable instance data.
struct Instance {
    k: usize,
    neighbors: Vec<Vec<usize>>,
    required: Vec<usize>,
    /// Unpinned cells in row-major order.
    order: Vec<usize>,
    values: Vec<Vec<Color>>,
    rules: Vec<Rule<usize>>,
    rules_at: Vec<Vec<usize>>,
    symmetry: bool,
}

impl Instance {
    fn new(partial: &Coloring, r: usize, config: &SolverConfig) -> Self {
        let dims = partial.dims();
        let k = partial.k();
        let neighbors: Vec<Vec<usize>> = dims
            .positions()
            .map(|p| dims.neighbors_unchecked(p).map(|q| dims.index(q)).collect())
            .collect();
        let required = neighbors.iter().map(|nb| nb.len().min(r)).collect();
        let order: Vec<usize> = (0..dims.cell_count())
            .filter(|&v| partial.cells()[v] == UNASSIGNED)
            .collect();

        let mut values = vec![(0..k as Color).collect::<Vec<_>>(); dims.cell_count()];
        if let Some(seed) = config.seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in &order {
                values[*v].shuffle(&mut rng);
            }
        }

        let (rules, rules_at) = if config.lemma_propagation && r == 3 && k == 4 {
            let rules: Vec<Rule<usize>> = propagation_rules(dims)
                .iter()
                .map(|rule| rule.map(|p| dims.index(p)))
                .collect();
            let mut at = vec![Vec::new(); dims.cell_count()];
            for (idx, rule) in rules.iter().enumerate() {
                for v in rule.cells() {
                    at[v].push(idx);
                }
            }
            (rules, at)
        } else {
            (Vec::new(), vec![Vec::new(); dims.cell_count()])
        };

        let pinned = order.len() < dims.cell_count();
        Instance {
            k,
            neighbors,
            required,
            order,
            values,
            rules,
            rules_at,
            symmetry: config.symmetry_breaking && !pinned,
        }
    }

    /// Can `w` still reach its requirement under `cells`?
    fn satisfiable(&self, cells: &[Color], w: usize) -> bool {
        let mut seen = 0u64;
        let mut open = 0;
        for &u in &self.neighbors[w] {
            match cells[u] {
                UNASSIGNED => open += 1,
                c => seen |= 1 << c,
            }
        }
        let distinct = seen.count_ones() as usize;
        distinct + open.min(self.k - distinct) >= self.required[w]
    }

    fn rule_refuted(&self, cells: &[Color], v: usize) -> bool {
        let get = |u: usize| (cells[u] != UNASSIGNED).then(|| cells[u]);
        self.rules_at[v].iter().any(|&idx| self.rules[idx].is_refuted(get))
    }

    /// Checks a complete set of pinned cells before any search starts.
    fn pinned_consistent(&self, cells: &[Color]) -> bool {
        (0..cells.len()).all(|v| {
            let clash = cells[v] != UNASSIGNED && self.neighbors[v].iter().any(|&u| cells[u] == cells[v]);
            !clash && self.satisfiable(cells, v) && (cells[v] == UNASSIGNED || !self.rule_refuted(cells, v))
        })
    }
}

enum Reject {
    Clash,
    Lemma,
}

/// One depth-first walk over `order[from..to]`.
struct Walker<'a> {
    inst: &'a Instance,
    shared: &'a Shared,
    cells: Vec<Color>,
    /// Next value index to try at each depth.
    next: Vec<usize>,
    /// Largest color used before each depth, plus one (0 = none yet).
    used: Vec<usize>,
    stats: SearchStats,
    unflushed: u64,
}

impl<'a> Walker<'a> {
    fn new(inst: &'a Instance, shared: &'a Shared, cells: Vec<Color>) -> Self {
        let depth = inst.order.len() + 1;
        Walker {
            inst,
            shared,
            cells,
            next: vec![0; depth],
            used: vec![0; depth],
            stats: SearchStats::default(),
            unflushed: 0,
        }
    }

    fn try_color(&mut self, v: usize, c: Color) -> std::result::Result<(), Reject> {
        let inst = self.inst;
        if inst.neighbors[v].iter().any(|&u| self.cells[u] == c) {
            return Err(Reject::Clash);
        }
        self.cells[v] = c;
        let ok =
            inst.satisfiable(&self.cells, v) && inst.neighbors[v].iter().all(|&u| inst.satisfiable(&self.cells, u));
        if !ok {
            self.cells[v] = UNASSIGNED;
            return Err(Reject::Clash);
        }
        if inst.rule_refuted(&self.cells, v) {
            self.cells[v] = UNASSIGNED;
            return Err(Reject::Lemma);
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let total = self.shared.nodes.fetch_add(self.unflushed, Ordering::Relaxed) + self.unflushed;
        self.unflushed = 0;
        self.check_limits(total)
    }

    fn check_limits(&self, total: u64) -> Result<()> {
        if let Some(limit) = self.shared.node_limit {
            if total > limit {
                return Err(Error::ResourceLimit {
                    what: format!("node limit {limit}"),
                    last_k: None,
                });
            }
        }
        if let Some(deadline) = self.shared.deadline {
            if Instant::now() >= deadline {
                return Err(Error::ResourceLimit {
                    what: "time limit".into(),
                    last_k: None,
                });
            }
        }
        Ok(())
    }

    fn count_node(&mut self) -> Result<()> {
        self.stats.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            self.flush()?;
            if self.shared.cancelled.load(Ordering::Relaxed) {
                return Err(Error::ResourceLimit {
                    what: "cancelled".into(),
                    last_k: None,
                });
            }
        } else if let Some(limit) = self.shared.node_limit {
            // Exact in the single-threaded case.
            let total = self.shared.nodes.load(Ordering::Relaxed) + self.unflushed;
            if total > limit {
                return self.check_limits(total);
            }
        }
        Ok(())
    }

    /// Walks depths `from..to`, calling `visit` with the cells every time
    /// depth `to` is reached. Returns true if `visit` stopped the walk.
    fn walk(&mut self, from: usize, to: usize, visit: &mut dyn FnMut(&[Color]) -> ControlFlow<()>) -> Result<bool> {
        let inst = self.inst;
        if from == to {
            let stopped = visit(&self.cells).is_break();
            return self.flush().map(|()| stopped);
        }
        let mut d = from;
        self.next[d] = 0;
        loop {
            if d == to {
                if visit(&self.cells).is_break() {
                    self.flush()?;
                    return Ok(true);
                }
                d -= 1;
                continue;
            }
            let v = inst.order[d];
            self.cells[v] = UNASSIGNED;
            let mut placed = false;
            while self.next[d] < inst.k {
                let c = inst.values[v][self.next[d]];
                self.next[d] += 1;
                if inst.symmetry && c as usize > self.used[d] {
                    continue;
                }
                match self.try_color(v, c) {
                    Ok(()) => {
                        placed = true;
                        break;
                    }
                    Err(Reject::Clash) => self.stats.prunings += 1,
                    Err(Reject::Lemma) => self.stats.lemma_prunings += 1,
                }
            }
            if placed {
                self.count_node()?;
                let c = self.cells[v] as usize;
                self.used[d + 1] = self.used[d].max(c + 1);
                d += 1;
                self.next[d] = 0;
            } else {
                if d == from {
                    self.flush()?;
                    return Ok(false);
                }
                d -= 1;
            }
        }
    }

    /// Prepares the walker to continue below a prefix produced by [`Walker::walk`].
    fn load_prefix(&mut self, prefix: &[Color]) {
        let mut used = 0;
        for (d, &v) in self.inst.order.iter().enumerate() {
            self.cells[v] = prefix.get(d).copied().unwrap_or(UNASSIGNED);
        }
        for &c in prefix {
            used = used.max(c as usize + 1);
        }
        self.used[prefix.len()] = used;
    }
}

fn to_coloring(partial: &Coloring, cells: &[Color]) -> Coloring {
    Coloring::new(partial.dims(), partial.k(), cells.to_vec()).expect("solver keeps colors in palette")
}

fn merge(into: &mut SearchStats, from: &SearchStats) {
    into.nodes += from.nodes;
    into.prunings += from.prunings;
    into.lemma_prunings += from.lemma_prunings;
}

/// Finds the first coloring extending `partial`, in deterministic order.
pub(super) fn solve(
    partial: &Coloring,
    r: usize,
    config: &SolverConfig,
    start: Instant,
) -> Result<(Option<Coloring>, SearchStats)> {
    let inst = Instance::new(partial, r, config);
    if !inst.pinned_consistent(partial.cells()) {
        return Ok((None, SearchStats::default()));
    }
    let shared = Shared::new(config, start);
    if config.threads > 1 && inst.order.len() > 1 {
        return solve_parallel(partial, &inst, &shared, config);
    }
    let mut walker = Walker::new(&inst, &shared, partial.cells().to_vec());
    let mut found = None;
    walker.walk(0, inst.order.len(), &mut |cells| {
        found = Some(cells.to_vec());
        ControlFlow::Break(())
    })?;
    Ok((found.map(|cells| to_coloring(partial, &cells)), walker.stats))
}

/// Splits the tree into prefixes and hands them to worker threads. Unless
/// `any_witness` is set, the witness is the one from the earliest prefix,
/// which is the witness the sequential search returns.
fn solve_parallel(
    partial: &Coloring,
    inst: &Instance,
    shared: &Shared,
    config: &SolverConfig,
) -> Result<(Option<Coloring>, SearchStats)> {
    let want = config.threads * PREFIXES_PER_THREAD;
    let mut depth = 0;
    let mut prefixes: Vec<Vec<Color>> = vec![Vec::new()];
    let mut stats = SearchStats::default();
    while prefixes.len() < want && depth < inst.order.len() {
        depth = (depth + 2).min(inst.order.len());
        let mut walker = Walker::new(inst, shared, partial.cells().to_vec());
        let mut out = Vec::new();
        walker.walk(0, depth, &mut |cells| {
            out.push(inst.order[..depth].iter().map(|&v| cells[v]).collect());
            ControlFlow::Continue(())
        })?;
        stats = walker.stats;
        prefixes = out;
        if prefixes.is_empty() {
            return Ok((None, stats));
        }
    }

    let next = AtomicUsize::new(0);
    // Lowest prefix index with a witness so far.
    let best = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<(usize, Vec<Color>)>> = Mutex::new(Vec::new());
    let errors: Mutex<Vec<Error>> = Mutex::new(Vec::new());
    let worker_stats: Mutex<Vec<SearchStats>> = Mutex::new(Vec::new());

    std::thread::scope(|scope| {
        for _ in 0..config.threads {
            scope.spawn(|| {
                let mut walker = Walker::new(inst, shared, partial.cells().to_vec());
                loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= prefixes.len()
                        || idx > best.load(Ordering::Relaxed)
                        || shared.cancelled.load(Ordering::Relaxed)
                    {
                        break;
                    }
                    walker.load_prefix(&prefixes[idx]);
                    let mut found = None;
                    let outcome = walker.walk(depth, inst.order.len(), &mut |cells| {
                        found = Some(cells.to_vec());
                        ControlFlow::Break(())
                    });
                    match outcome {
                        Ok(_) => {
                            if let Some(cells) = found {
                                best.fetch_min(idx, Ordering::Relaxed);
                                results.lock().unwrap().push((idx, cells));
                                if config.any_witness {
                                    shared.cancelled.store(true, Ordering::Relaxed);
                                }
                            }
                        }
                        Err(e) => {
                            shared.cancelled.store(true, Ordering::Relaxed);
                            errors.lock().unwrap().push(e);
                            break;
                        }
                    }
                }
                worker_stats.lock().unwrap().push(walker.stats);
            });
        }
    });

    for s in worker_stats.into_inner().unwrap() {
        merge(&mut stats, &s);
    }
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(idx, _)| *idx);
    if let Some((_, cells)) = results.into_iter().next() {
        return Ok((Some(to_coloring(partial, &cells)), stats));
    }
    let errors = errors.into_inner().unwrap();
    // Cancellation errors are echoes of a real one.
    if let Some(e) = errors
        .iter()
        .find(|e| !matches!(e, Error::ResourceLimit { what, .. } if what == "cancelled"))
    {
        return Err(e.clone());
    }
    if let Some(e) = errors.into_iter().next() {
        return Err(e);
    }
    Ok((None, stats))
}

/// Visits every coloring extending `partial`.
pub(super) fn enumerate(
    partial: &Coloring,
    r: usize,
    config: &SolverConfig,
    start: Instant,
    mut visit: impl FnMut(&Coloring) -> ControlFlow<()>,
) -> Result<(SearchStats, bool)> {
    let inst = Instance::new(partial, r, config);
    if !inst.pinned_consistent(partial.cells()) {
        return Ok((SearchStats::default(), false));
    }
    let shared = Shared::new(config, start);
    let mut walker = Walker::new(&inst, &shared, partial.cells().to_vec());
    let stopped = walker.walk(0, inst.order.len(), &mut |cells| visit(&to_coloring(partial, cells)))?;
    Ok((walker.stats, stopped))
}
