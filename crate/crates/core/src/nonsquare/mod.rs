//! Hilbert loops beyond power-of-two squares.

mod fgf;
mod fur;
pub mod nano;
mod overlay;

pub use fgf::{iter_fgf, iter_fgf_verified, triangle_query, QuadrantQuery, Verdict};
pub use fur::{iter_fur, iter_fur_tiled, tile_plan, FurIter, FurLoop, Tile};
pub use nano::{nano_program, NanoProgram};
pub use overlay::{overlay_plan, OverlayGrid};

use crate::curve::CoordPair;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NonsquareError {
    #[error("{n}x{m} admits no overlay grid; split it into tiles (see iter_fur_tiled)")]
    AspectRatio { n: u32, m: u32 },
    #[error("empty grid {n}x{m}")]
    EmptyGrid { n: u32, m: u32 },
    #[error("no unit-step plan exists for the {n}x{m} overlay")]
    NoContinuousPlan { n: u32, m: u32 },
    #[error("cell {height}x{width} exceeds 4x4")]
    CellTooLarge { height: u32, width: u32 },
    #[error("nano-program of {0} moves exceeds 15")]
    ProgramTooLong(usize),
    #[error("quadrant query contradicts its parent at level {level}, anchor ({}, {})", anchor.i, anchor.j)]
    InconsistentPredicate { level: u32, anchor: CoordPair },
    #[error("level {0} exceeds 31")]
    LevelTooLarge(u32),
}
