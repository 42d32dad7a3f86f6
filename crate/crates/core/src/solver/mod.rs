//! Exact decision procedures for "does G(m,n) have an r-dynamic k-coloring?".
//!
//! Two engines are independent of each other:
//!
//! * **Backtracking** assigns cells in row-major order with forward checking,
//!   optional color-relabeling symmetry breaking and, for r = 3 and k = 4,
//!   optional propagation of the structural rules in [`crate::analyzer::rules`].
//! * **Frontier DP** sweeps columns left to right; a state is a pair of
//!   adjacent columns and a transition certifies the middle column.
//!
//! A third, deliberately naive procedure ([`brute_force_oracle`]) enumerates
//! every assignment of tiny grids and checks the definition directly.

mod backtrack;
mod brute;
mod frontier;

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{validate, Coloring, GridDims};
use crate::table::degree_lower_bound;

pub use brute::{brute_force_oracle, BRUTE_FORCE_MAX_CELLS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "backtracking")]
    Backtracking,
    #[serde(rename = "frontier-dp")]
    FrontierDp,
    #[serde(rename = "both")]
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Backtracking => "backtracking",
            Engine::FrontierDp => "frontier-dp",
            Engine::Both => "both",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backtracking" | "bt" => Ok(Engine::Backtracking),
            "frontier-dp" | "frontier" | "dp" => Ok(Engine::FrontierDp),
            "both" => Ok(Engine::Both),
            other => Err(Error::invalid(format!("unknown engine {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub engine: Engine,
    /// Backtracking: first cell gets color 0 and new colors appear in
    /// increasing order. Frontier DP: states are stored up to color renaming.
    pub symmetry_breaking: bool,
    /// Only takes effect for r = 3, k = 4.
    pub lemma_propagation: bool,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub enumeration_limit: Option<usize>,
    /// Upper bound on the estimated number of frontier states per column.
    pub dp_state_budget: u64,
    /// Worker threads for backtracking subtrees; 1 runs sequentially.
    pub threads: usize,
    /// Shuffles the per-cell color order of the backtracking engine.
    pub seed: Option<u64>,
    /// With several threads, accept whichever witness is found first.
    pub any_witness: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            engine: Engine::Backtracking,
            symmetry_breaking: true,
            lemma_propagation: false,
            node_limit: None,
            time_limit: None,
            enumeration_limit: None,
            dp_state_budget: 100_000_000,
            threads: 1,
            seed: None,
            any_witness: false,
        }
    }
}

impl SolverConfig {
    pub fn with_engine(engine: Engine) -> Self {
        SolverConfig {
            engine,
            ..SolverConfig::default()
        }
    }

    fn check(&self) -> Result<()> {
        if self.node_limit == Some(0) {
            return Err(Error::invalid("node limit must be positive"));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(Error::invalid("time limit must be positive"));
        }
        if self.enumeration_limit == Some(0) {
            return Err(Error::invalid("enumeration limit must be positive"));
        }
        if self.dp_state_budget == 0 {
            return Err(Error::invalid("state budget must be positive"));
        }
        if self.threads == 0 {
            return Err(Error::invalid("thread count must be positive"));
        }
        Ok(())
    }

    pub(crate) fn deadline(&self, start: Instant) -> Option<Instant> {
        self.time_limit.map(|t| start + t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Successful backtracking assignments.
    pub nodes: u64,
    /// Candidate colors rejected by properness or the look-ahead count.
    pub prunings: u64,
    /// Candidate colors rejected by structural rules.
    pub lemma_prunings: u64,
    /// Distinct frontier states stored over all columns.
    pub dp_states: u64,
    pub dp_transitions: u64,
    #[serde(serialize_with = "millis", deserialize_with = "from_millis")]
    pub wall_time: Duration,
}

fn millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

fn from_millis<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Duration, D::Error> {
    let ms = f64::deserialize(d)?;
    Ok(Duration::from_secs_f64(ms.max(0.0) / 1000.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOutcome {
    pub status: Status,
    /// Present iff `status` is SAT.
    pub witness: Option<Coloring>,
    pub stats: SearchStats,
}

impl DecisionOutcome {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

fn check_instance(dims: GridDims, r: usize, k: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > backtrack::MAX_K {
        return Err(Error::unsupported(format!(
            "k = {k} exceeds the solver limit {}",
            backtrack::MAX_K
        )));
    }
    let _ = dims;
    Ok(())
}

fn finish(
    dims: GridDims,
    r: usize,
    k: usize,
    witness: Option<Coloring>,
    stats: SearchStats,
) -> Result<DecisionOutcome> {
    if let Some(w) = &witness {
        let report = validate(w, r, Some(k))?;
        if !report.is_empty() || w.dims() != dims {
            return Err(Error::InvalidWitness {
                instance: format!("{dims} r={r} k={k}"),
                report: report.to_string().replace('\n', "; "),
            });
        }
    }
    Ok(DecisionOutcome {
        status: if witness.is_some() { Status::Sat } else { Status::Unsat },
        witness,
        stats,
    })
}

/// Decides whether `dims` has a proper r-dynamic k-coloring.
///
/// Running out of nodes, time or state budget returns
/// [`Error::ResourceLimit`], never UNSAT. With [`Engine::Both`], a status
/// mismatch between the engines is an [`Error::EngineDisagreement`].
pub fn decide(dims: GridDims, r: usize, k: usize, config: &SolverConfig) -> Result<DecisionOutcome> {
    config.check()?;
    check_instance(dims, r, k)?;
    let start = Instant::now();
    match config.engine {
        Engine::Backtracking => {
            let (witness, mut stats) = backtrack::solve(&Coloring::unassigned(dims, k)?, r, config, start)?;
            stats.wall_time = start.elapsed();
            finish(dims, r, k, witness, stats)
        }
        Engine::FrontierDp => {
            let (witness, mut stats) = frontier::solve(dims, r, k, config, start)?;
            stats.wall_time = start.elapsed();
            finish(dims, r, k, witness, stats)
        }
        Engine::Both => {
            let (bt_witness, bt_stats) = backtrack::solve(&Coloring::unassigned(dims, k)?, r, config, start)?;
            let (dp_witness, dp_stats) = frontier::solve(dims, r, k, config, start)?;
            if bt_witness.is_some() != dp_witness.is_some() {
                let name = |w: &Option<Coloring>| if w.is_some() { "SAT" } else { "UNSAT" }.to_string();
                return Err(Error::EngineDisagreement {
                    instance: format!("{dims} r={r} k={k}"),
                    backtracking: name(&bt_witness),
                    frontier: name(&dp_witness),
                });
            }
            if let Some(w) = &dp_witness {
                finish(dims, r, k, Some(w.clone()), SearchStats::default())?;
            }
            let stats = SearchStats {
                nodes: bt_stats.nodes,
                prunings: bt_stats.prunings,
                lemma_prunings: bt_stats.lemma_prunings,
                dp_states: dp_stats.dp_states,
                dp_transitions: dp_stats.dp_transitions,
                wall_time: start.elapsed(),
            };
            finish(dims, r, k, bt_witness, stats)
        }
    }
}

/// Backtracking search that keeps every assigned cell of `partial` fixed and
/// fills the rest. Symmetry breaking is skipped when anything is pinned,
/// since pinned colors already fix the names.
pub fn decide_from(partial: &Coloring, r: usize, config: &SolverConfig) -> Result<DecisionOutcome> {
    config.check()?;
    let dims = partial.dims();
    let k = partial.k();
    check_instance(dims, r, k)?;
    let start = Instant::now();
    let (witness, mut stats) = backtrack::solve(partial, r, config, start)?;
    stats.wall_time = start.elapsed();
    if let Some(w) = &witness {
        debug_assert!(partial
            .cells()
            .iter()
            .zip(w.cells())
            .all(|(&p, &x)| p == crate::grid::UNASSIGNED || p == x));
    }
    finish(dims, r, k, witness, stats)
}

/// Least k with an r-dynamic k-coloring of `dims`, counting up from
/// `min(Delta, r) + 1`.
pub fn chromatic_exact(dims: GridDims, r: usize, config: &SolverConfig) -> Result<usize> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let mut k = degree_lower_bound(dims, r);
    let mut last_decided = None;
    loop {
        match decide(dims, r, k, config) {
            Ok(outcome) if outcome.is_sat() => return Ok(k),
            Ok(_) => {
                last_decided = Some(k);
                k += 1;
            }
            Err(Error::ResourceLimit { what, .. }) => {
                return Err(Error::ResourceLimit {
                    what,
                    last_k: last_decided,
                });
            }
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub colorings: Vec<Coloring>,
    /// The limit stopped the search before it was exhausted.
    pub truncated: bool,
    pub stats: SearchStats,
}

/// Calls `visit` on every r-dynamic k-coloring in the backtracking engine's
/// deterministic order (one per relabeling class when symmetry breaking is
/// on), stopping early when `visit` breaks. Returns the search statistics and
/// whether the visitor stopped the search.
pub fn for_each_coloring(
    dims: GridDims,
    r: usize,
    k: usize,
    config: &SolverConfig,
    visit: impl FnMut(&Coloring) -> ControlFlow<()>,
) -> Result<(SearchStats, bool)> {
    config.check()?;
    check_instance(dims, r, k)?;
    let start = Instant::now();
    let (mut stats, stopped) = backtrack::enumerate(&Coloring::unassigned(dims, k)?, r, config, start, visit)?;
    stats.wall_time = start.elapsed();
    Ok((stats, stopped))
}

/// Collects colorings as [`for_each_coloring`] does, at most `limit` of them.
pub fn enumerate(
    dims: GridDims,
    r: usize,
    k: usize,
    limit: Option<usize>,
    config: &SolverConfig,
) -> Result<Enumeration> {
    let limit = limit.or(config.enumeration_limit);
    if limit == Some(0) {
        return Err(Error::invalid("enumeration limit must be positive"));
    }
    let mut colorings = Vec::new();
    let mut truncated = false;
    let (stats, _) = for_each_coloring(dims, r, k, config, |c| {
        if limit.is_some_and(|l| colorings.len() >= l) {
            truncated = true;
            return ControlFlow::Break(());
        }
        colorings.push(c.clone());
        ControlFlow::Continue(())
    })?;
    Ok(Enumeration {
        colorings,
        truncated,
        stats,
    })
}
