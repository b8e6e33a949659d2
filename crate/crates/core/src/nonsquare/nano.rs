//! Nano-programs: unit-step traversals of sub-grids of at most 4x4 cells,
//! packed into one 64-bit word.
//!
//! Layout: bits 0..6 hold the move count, move `k` occupies bits
//! `6 + 2k .. 8 + 2k` using the [`Direction`] coding.

use std::io::{self, Read, Write};
use std::sync::OnceLock;

use super::NonsquareError;
use crate::curve::HilbertState;
use crate::lindenmayer::{expand_pattern, Direction};
use crate::CoordPair;

pub const MAX_SIDE: u32 = 4;
pub const MAX_MOVES: usize = 15;
const LEN_BITS: u32 = 6;

/// Packs a move sequence into a word.
pub fn pack(moves: &[Direction]) -> Result<u64, NonsquareError> {
    if moves.len() > MAX_MOVES {
        return Err(NonsquareError::ProgramTooLong(moves.len()));
    }
    let mut word = moves.len() as u64;
    for (k, mv) in moves.iter().enumerate() {
        word |= mv.code() << (LEN_BITS as usize + 2 * k);
    }
    Ok(word)
}

/// Number of moves stored in a packed word.
#[inline]
pub fn packed_len(word: u64) -> u32 {
    (word & ((1 << LEN_BITS) - 1)) as u32
}

/// Iterator over the moves of a packed word.
#[derive(Clone, Copy, Debug)]
pub struct Moves {
    bits: u64,
    left: u32,
}

impl Moves {
    #[inline]
    pub fn new(word: u64) -> Self {
        Moves {
            bits: word >> LEN_BITS,
            left: packed_len(word),
        }
    }
}

impl Iterator for Moves {
    type Item = Direction;

    #[inline]
    fn next(&mut self) -> Option<Direction> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        let mv = Direction::from_code(self.bits);
        self.bits >>= 2;
        Some(mv)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.left as usize, Some(self.left as usize))
    }
}

impl ExactSizeIterator for Moves {}

/// Traversal of a `height x width` cell for one orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NanoProgram {
    pub packed: u64,
    pub height: u8,
    pub width: u8,
    pub orientation: HilbertState,
}

impl NanoProgram {
    pub fn len(&self) -> usize {
        packed_len(self.packed) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn moves(&self) -> Moves {
        Moves::new(self.packed)
    }

    /// Local `(row, col)` of the first cell.
    pub fn entry(&self) -> (u32, u32) {
        orientation_entry(self.orientation, u32::from(self.height), u32::from(self.width))
    }

    /// Local cells in visiting order.
    pub fn cells(&self) -> Vec<(u32, u32)> {
        let (mut r, mut c) = self.entry();
        let mut out = vec![(r, c)];
        for mv in self.moves() {
            let (dr, dc) = mv.delta();
            r = r.wrapping_add_signed(dr);
            c = c.wrapping_add_signed(dc);
            out.push((r, c));
        }
        out
    }
}

/// Entry corner of an orientation in a `height x width` cell.
pub fn orientation_entry(orientation: HilbertState, height: u32, width: u32) -> (u32, u32) {
    match orientation {
        HilbertState::U | HilbertState::D => (0, 0),
        HilbertState::A | HilbertState::C => (height - 1, width - 1),
    }
}

/// Exit corner an orientation aims for in a `height x width` cell.
pub fn orientation_exit(orientation: HilbertState, height: u32, width: u32) -> (u32, u32) {
    match orientation {
        HilbertState::U | HilbertState::C => (0, width - 1),
        HilbertState::D | HilbertState::A => (height - 1, 0),
    }
}

const NO_PATH: u64 = u64::MAX;
const SHAPES: usize = (MAX_SIDE * MAX_SIDE) as usize;
const CELLS: usize = SHAPES;

/// Every Hamiltonian unit-step path of every sub-grid up to 4x4, one per
/// (shape, entry, exit) triple.
pub struct PathTable {
    words: Vec<u64>,
}

fn shape_index(height: u32, width: u32) -> usize {
    ((height - 1) * MAX_SIDE + (width - 1)) as usize
}

impl PathTable {
    fn slot(height: u32, width: u32, entry: usize, exit: usize) -> usize {
        (shape_index(height, width) * CELLS + entry) * CELLS + exit
    }

    /// Packed path from local cell index `entry` to `exit` (`row * width +
    /// col`), if one exists.
    pub fn path(&self, height: u32, width: u32, entry: usize, exit: usize) -> Option<u64> {
        let w = self.words[Self::slot(height, width, entry, exit)];
        (w != NO_PATH).then_some(w)
    }

    /// Bitmask over exits reachable by some Hamiltonian path from `entry`.
    pub fn exits(&self, height: u32, width: u32, entry: usize) -> u16 {
        let mut mask = 0u16;
        for exit in 0..(height * width) as usize {
            if self.path(height, width, entry, exit).is_some() {
                mask |= 1 << exit;
            }
        }
        mask
    }

    fn build() -> Self {
        let mut words = vec![NO_PATH; SHAPES * CELLS * CELLS];
        for height in 1..=MAX_SIDE {
            for width in 1..=MAX_SIDE {
                // Square power-of-two cells keep the Hilbert sub-curve for
                // their corner-to-corner paths.
                if height == width && height.is_power_of_two() && height > 1 {
                    let level = height.trailing_zeros();
                    for s in HilbertState::ALL {
                        let moves = hilbert_moves(s, level);
                        let (er, ec) = orientation_entry(s, height, width);
                        let (xr, xc) = orientation_exit(s, height, width);
                        let slot = Self::slot(height, width, (er * width + ec) as usize, (xr * width + xc) as usize);
                        words[slot] = pack(&moves).expect("at most 15 moves");
                    }
                }
                for entry in 0..(height * width) as usize {
                    let mut search = PathSearch {
                        height,
                        width,
                        moves: Vec::with_capacity(MAX_MOVES),
                        found: &mut words,
                        entry,
                    };
                    search.dfs(entry, 1u16 << entry);
                }
            }
        }
        PathTable { words }
    }
}

struct PathSearch<'a> {
    height: u32,
    width: u32,
    moves: Vec<Direction>,
    found: &'a mut Vec<u64>,
    entry: usize,
}

impl PathSearch<'_> {
    fn dfs(&mut self, at: usize, visited: u16) {
        let total = self.height * self.width;
        if visited.count_ones() == total {
            let slot = PathTable::slot(self.height, self.width, self.entry, at);
            if self.found[slot] == NO_PATH {
                self.found[slot] = pack(&self.moves).expect("at most 15 moves");
            }
            return;
        }
        let (r, c) = ((at as u32) / self.width, (at as u32) % self.width);
        for mv in Direction::ALL {
            let (dr, dc) = mv.delta();
            let (nr, nc) = (r as i32 + dr, c as i32 + dc);
            if nr < 0 || nc < 0 || nr >= self.height as i32 || nc >= self.width as i32 {
                continue;
            }
            let next = (nr as u32 * self.width + nc as u32) as usize;
            if visited & (1 << next) != 0 {
                continue;
            }
            self.moves.push(mv);
            self.dfs(next, visited | (1 << next));
            self.moves.pop();
        }
    }
}

fn hilbert_moves(state: HilbertState, level: u32) -> Vec<Direction> {
    let mut cells = Vec::new();
    expand_pattern(state, level, CoordPair::new(0, 0), 0, |i, j, _| cells.push((i, j)));
    cells
        .windows(2)
        .map(|w| {
            Direction::from_delta(
                i64::from(w[1].0) - i64::from(w[0].0),
                i64::from(w[1].1) - i64::from(w[0].1),
            )
            .expect("unit step")
        })
        .collect()
}

/// Shared, lazily built path table.
pub fn path_table() -> &'static PathTable {
    static TABLE: OnceLock<PathTable> = OnceLock::new();
    TABLE.get_or_init(PathTable::build)
}

/// Traversal of a `height x width` cell entering at the orientation's entry
/// corner. It leaves at the orientation's exit corner when a Hamiltonian path
/// allows it, otherwise at the nearest reachable cell.
pub fn nano_program(height: u32, width: u32, orientation: HilbertState) -> Result<NanoProgram, NonsquareError> {
    if !(1..=MAX_SIDE).contains(&height) || !(1..=MAX_SIDE).contains(&width) {
        return Err(NonsquareError::CellTooLarge { height, width });
    }
    let table = path_table();
    let (er, ec) = orientation_entry(orientation, height, width);
    let (xr, xc) = orientation_exit(orientation, height, width);
    let entry = (er * width + ec) as usize;
    let packed = (0..height * width)
        .filter_map(|idx| {
            let (r, c) = (idx / width, idx % width);
            let dist = r.abs_diff(xr) + c.abs_diff(xc);
            table.path(height, width, entry, idx as usize).map(|w| (dist, idx, w))
        })
        .min()
        .map(|(_, _, w)| w)
        .expect("a serpentine from any corner always exists");
    Ok(NanoProgram {
        packed,
        height: height as u8,
        width: width as u8,
        orientation,
    })
}

/// Flat index of a `(height, width, orientation)` entry in the serialized
/// table.
pub fn table_index(height: u32, width: u32, orientation: HilbertState) -> usize {
    shape_index(height, width) * 4 + orientation.index()
}

/// All 64 canonical programs ordered by [`table_index`].
pub fn nano_table() -> Vec<NanoProgram> {
    let mut out = Vec::with_capacity(SHAPES * 4);
    for height in 1..=MAX_SIDE {
        for width in 1..=MAX_SIDE {
            for s in HilbertState::ALL {
                out.push(nano_program(height, width, s).expect("in range"));
            }
        }
    }
    out
}

/// Writes the table as little-endian 64-bit words.
pub fn write_nano_table<W: Write>(mut out: W) -> io::Result<()> {
    for prog in nano_table() {
        out.write_all(&prog.packed.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a table written by [`write_nano_table`].
pub fn read_nano_table<R: Read>(mut input: R) -> io::Result<Vec<NanoProgram>> {
    let mut out = Vec::with_capacity(SHAPES * 4);
    for height in 1..=MAX_SIDE {
        for width in 1..=MAX_SIDE {
            for orientation in HilbertState::ALL {
                let mut buf = [0u8; 8];
                input.read_exact(&mut buf)?;
                out.push(NanoProgram {
                    packed: u64::from_le_bytes(buf),
                    height: height as u8,
                    width: width as u8,
                    orientation,
                });
            }
        }
    }
    Ok(out)
}
