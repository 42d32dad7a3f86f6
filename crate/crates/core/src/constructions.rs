//! Explicit optimal colorings of grids.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Color, Coloring, GridDims};
use crate::solver::{self, SolverConfig, Status};
use crate::table;

/// The 4x4 block whose 4-periodic tiling gives the 4-color constructions.
/// It is also the canonical coherent corner (a,b,c,d = 0,1,2,3).
pub const BLOCK: [[Color; 4]; 4] = [[0, 1, 2, 3], [2, 3, 0, 1], [1, 0, 3, 2], [3, 2, 1, 0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstructionKind {
    Mod5Diagonal,
    BlockTiling,
    Checkerboard,
    SolverWitness,
}

impl ConstructionKind {
    /// Palette size the generator uses.
    pub fn palette(self) -> Option<usize> {
        match self {
            ConstructionKind::Mod5Diagonal => Some(5),
            ConstructionKind::BlockTiling => Some(4),
            ConstructionKind::Checkerboard => Some(2),
            ConstructionKind::SolverWitness => None,
        }
    }

    /// Largest r for which the generator is guaranteed valid on `dims`,
    /// or `None` outside its domain.
    pub fn max_valid_r(self, dims: GridDims) -> Option<usize> {
        let (m, n) = (dims.m(), dims.n());
        if m < 2 || n < 2 {
            return None;
        }
        match self {
            ConstructionKind::Mod5Diagonal => Some(usize::MAX),
            ConstructionKind::BlockTiling if m.min(n) == 2 => Some(usize::MAX),
            ConstructionKind::BlockTiling if m % 2 == 0 && n % 2 == 0 => Some(3),
            ConstructionKind::BlockTiling => None,
            ConstructionKind::Checkerboard => Some(1),
            ConstructionKind::SolverWitness => None,
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Mod5Diagonal => "mod5",
            ConstructionKind::BlockTiling => "block",
            ConstructionKind::Checkerboard => "checkerboard",
            ConstructionKind::SolverWitness => "solver",
        })
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mod5" => Ok(ConstructionKind::Mod5Diagonal),
            "block" => Ok(ConstructionKind::BlockTiling),
            "checkerboard" => Ok(ConstructionKind::Checkerboard),
            "solver" => Ok(ConstructionKind::SolverWitness),
            other => Err(Error::invalid(format!("unknown construction kind {other:?}"))),
        }
    }
}

fn require_table_dims(dims: GridDims) -> Result<()> {
    if dims.m() < 2 || dims.n() < 2 {
        return Err(Error::unsupported(format!(
            "constructions need m,n >= 2, got {}x{}",
            dims.m(),
            dims.n()
        )));
    }
    Ok(())
}

/// `f(i,j) = (i + 2j) mod 5`, a 4-dynamic 5-coloring of every grid with m,n >= 2.
pub fn mod5_coloring(dims: GridDims) -> Result<Coloring> {
    require_table_dims(dims)?;
    Coloring::from_fn(dims, 5, |p| ((p.i + 2 * p.j) % 5) as Color)
}

/// First `m` rows and `n` columns of the 4-periodic tiling by [`BLOCK`].
///
/// Defined when `min(m,n) = 2` or both dimensions are even; there it is a
/// 3-dynamic 4-coloring, and a 4-dynamic one when `min(m,n) = 2`.
pub fn block_coloring(dims: GridDims) -> Result<Coloring> {
    require_table_dims(dims)?;
    let (m, n) = (dims.m(), dims.n());
    if m.min(n) != 2 && (m % 2 != 0 || n % 2 != 0) {
        let odd: Vec<&str> = [("m", m), ("n", n)]
            .into_iter()
            .filter(|(_, v)| v % 2 != 0)
            .map(|(name, _)| name)
            .collect();
        return Err(Error::unsupported(format!(
            "block tiling needs min(m,n) = 2 or m and n both even; {} odd for {m}x{n}",
            odd.join(" and ")
        )));
    }
    Coloring::from_fn(dims, 4, |p| BLOCK[(p.i - 1) % 4][(p.j - 1) % 4])
}

/// `(i + j) mod 2`.
pub fn checkerboard_coloring(dims: GridDims) -> Result<Coloring> {
    require_table_dims(dims)?;
    Coloring::from_fn(dims, 2, |p| ((p.i + p.j) % 2) as Color)
}

/// An r-dynamic coloring of `dims` with exactly `grid_chromatic(m, n, r)` colors.
pub fn optimal_coloring(dims: GridDims, r: usize) -> Result<Coloring> {
    optimal_coloring_with(dims, r, &SolverConfig::default()).map(|(c, _)| c)
}

/// As [`optimal_coloring`], also naming the generator used. `config` only
/// matters when the answer has to come from the exact solver.
pub fn optimal_coloring_with(dims: GridDims, r: usize, config: &SolverConfig) -> Result<(Coloring, ConstructionKind)> {
    let answer = table::grid_chromatic(dims.m(), dims.n(), r)?;
    let (m, n) = (dims.m(), dims.n());
    let block_ok = m.min(n) == 2 || (m % 2 == 0 && n % 2 == 0);
    match answer.value {
        2 => Ok((checkerboard_coloring(dims)?, ConstructionKind::Checkerboard)),
        4 if block_ok => Ok((block_coloring(dims)?, ConstructionKind::BlockTiling)),
        5 => Ok((mod5_coloring(dims)?, ConstructionKind::Mod5Diagonal)),
        k => {
            let outcome = solver::decide(dims, r, k, config)?;
            match (outcome.status, outcome.witness) {
                (Status::Sat, Some(w)) => Ok((w, ConstructionKind::SolverWitness)),
                _ => Err(Error::EngineDisagreement {
                    instance: format!("{dims} r={r} k={k}"),
                    backtracking: "UNSAT (table says SAT)".into(),
                    frontier: "n/a".into(),
                }),
            }
        }
    }
}
