//! r-dynamic colorings of grid graphs G(m,n).
//!
//! A proper coloring is r-dynamic when every vertex v sees at least
//! `min(r, deg(v))` distinct colors on its neighbors. This crate validates
//! such colorings, builds the standard constructions, answers chi_r(G(m,n))
//! in closed form, decides small instances exactly with two independent
//! engines, and checks the structural facts forced on 3-dynamic 4-colorings.

pub mod analyzer;
pub mod constructions;
pub mod error;
pub mod grid;
pub mod solver;
pub mod table;

pub use error::{Error, Result};
pub use grid::{neighbors, seen_colors, validate, Color, Coloring, GridDims, Position, ViolationReport, UNASSIGNED};
pub use table::{grid_chromatic, ChromaticAnswer, LowerBoundSource, Provenance};
