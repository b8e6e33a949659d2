//! Full Hilbert traversals of a `2^L x 2^L` grid.
//!
//! Two generators produce the same `(i, j, h)` sequence: the mutually
//! recursive expansion of the four production rules, and [`HilbertLoop`], a
//! non-recursive iterator that recovers everything the recursion stack would
//! hold from the order value alone. The latter does a fixed amount of work
//! per step and keeps a constant-size state.

use crate::curve::{CoordPair, HilbertState, OrderValue};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("side length {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("side length {0} exceeds 2^31")]
    TooLarge(u64),
}

/// Unit moves. The discriminant is the direction register coding used by
/// [`HilbertLoop`] and by packed nano-programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Right = 0,
    Down = 1,
    Left = 2,
    Up = 3,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Right, Direction::Down, Direction::Left, Direction::Up];

    pub const fn from_code(c: u64) -> Direction {
        Self::ALL[(c & 3) as usize]
    }

    pub const fn code(self) -> u64 {
        self as u64
    }

    /// `(di, dj)` for one step.
    pub const fn delta(self) -> (i32, i32) {
        match self {
            Direction::Right => (0, 1),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Up => (-1, 0),
        }
    }

    pub fn from_delta(di: i64, dj: i64) -> Option<Direction> {
        match (di, dj) {
            (0, 1) => Some(Direction::Right),
            (1, 0) => Some(Direction::Down),
            (0, -1) => Some(Direction::Left),
            (-1, 0) => Some(Direction::Up),
            _ => None,
        }
    }

    pub const fn opposite(self) -> Direction {
        Self::ALL[(self as usize + 2) & 3]
    }
}

/// Right-hand side of one production: four non-terminals separated by three
/// moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Production {
    pub parts: [HilbertState; 4],
    pub moves: [Direction; 3],
}

/// `U ::= D v U > U ^ C`, `D ::= U > D v D < A`, `A ::= C ^ A < A v D`,
/// `C ::= A < C ^ C > U`.
pub const fn production(state: HilbertState) -> Production {
    use Direction::*;
    use HilbertState as S;
    match state {
        S::U => Production {
            parts: [S::D, S::U, S::U, S::C],
            moves: [Down, Right, Up],
        },
        S::D => Production {
            parts: [S::U, S::D, S::D, S::A],
            moves: [Right, Down, Left],
        },
        S::A => Production {
            parts: [S::C, S::A, S::A, S::D],
            moves: [Up, Left, Down],
        },
        S::C => Production {
            parts: [S::A, S::C, S::C, S::U],
            moves: [Left, Up, Right],
        },
    }
}

/// Corner at which `state` enters a `side x side` block, relative to the
/// block's upper-left cell.
pub const fn entry_corner(state: HilbertState, side: u32) -> (u32, u32) {
    match state {
        HilbertState::U | HilbertState::D => (0, 0),
        HilbertState::A | HilbertState::C => (side - 1, side - 1),
    }
}

/// Corner at which `state` leaves a `side x side` block.
pub const fn exit_corner(state: HilbertState, side: u32) -> (u32, u32) {
    match state {
        HilbertState::U => (0, side - 1),
        HilbertState::D => (side - 1, 0),
        HilbertState::A => (side - 1, 0),
        HilbertState::C => (0, side - 1),
    }
}

/// Counters gathered while expanding the grammar.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RecursionStats {
    pub calls: u64,
    pub max_depth: u32,
}

struct Expander<F> {
    i: u32,
    j: u32,
    h: u64,
    depth: u32,
    stats: RecursionStats,
    visit: F,
}

impl<F: FnMut(u32, u32, OrderValue)> Expander<F> {
    // `level` is the rule level; the terminal that processes a pair fires at -1.
    fn expand(&mut self, state: HilbertState, level: i32) {
        self.stats.calls += 1;
        self.depth += 1;
        self.stats.max_depth = self.stats.max_depth.max(self.depth);
        if level < 0 {
            (self.visit)(self.i, self.j, self.h);
        } else {
            let rule = production(state);
            self.expand(rule.parts[0], level - 1);
            for (part, mv) in rule.parts[1..].iter().zip(rule.moves) {
                let (di, dj) = mv.delta();
                self.i = self.i.wrapping_add_signed(di);
                self.j = self.j.wrapping_add_signed(dj);
                self.h += 1;
                self.expand(*part, level - 1);
            }
        }
        self.depth -= 1;
    }
}

/// Expands `state` over the `2^level` block whose upper-left cell is
/// `origin`, numbering cells from `h0`. Returns the recursion counters.
pub fn expand_pattern<F>(state: HilbertState, level: u32, origin: CoordPair, h0: OrderValue, visit: F) -> RecursionStats
where
    F: FnMut(u32, u32, OrderValue),
{
    let side = 1u32 << level;
    let (ci, cj) = entry_corner(state, side);
    let mut ex = Expander {
        i: origin.i + ci,
        j: origin.j + cj,
        h: h0,
        depth: 0,
        stats: RecursionStats::default(),
        visit,
    };
    ex.expand(state, level as i32 - 1);
    ex.stats
}

/// Recursive generator over `[0, 2^level)^2`. The start symbol is `U` for
/// even levels and `D` for odd ones.
pub fn generate_recursive<F>(level: u32, visit: F) -> RecursionStats
where
    F: FnMut(u32, u32, OrderValue),
{
    expand_pattern(
        HilbertState::start_for_level(level),
        level,
        CoordPair::new(0, 0),
        0,
        visit,
    )
}

/// Number of recursive invocations `generate_recursive(level)` performs.
pub fn count_recursive_calls(level: u32) -> u64 {
    generate_recursive(level, |_, _, _| {}).calls
}

/// Trailing zero bits, via the `log2(h & -h)` identity. `h` must be nonzero.
pub fn trailing_zeros(h: u64) -> u32 {
    debug_assert!(h != 0);
    (h & h.wrapping_neg()).ilog2()
}

/// Sink for the elementary-operation counter of [`HilbertLoop`].
pub trait OpCounter {
    fn tick(&mut self, ops: u32);
}

impl OpCounter for () {
    #[inline(always)]
    fn tick(&mut self, _ops: u32) {}
}

/// Counts elementary operations of the most recent step.
#[derive(Clone, Copy, Debug, Default)]
pub struct StepOps {
    pub last: u32,
}

impl OpCounter for StepOps {
    fn tick(&mut self, ops: u32) {
        self.last += ops;
    }
}

/// Non-recursive Hilbert loop over an `n x n` grid, `n` a power of two.
///
/// Yields `(i, j, h)` in the same order as [`generate_recursive`].
#[derive(Clone, Debug)]
pub struct HilbertLoop {
    i: u32,
    j: u32,
    h: u64,
    // Direction register, coded as `Direction`.
    c: u64,
    level: u32,
    digit: u64,
    end: u64,
}

/// `for (i, j, h) in hilbert(n)?`
pub fn hilbert(n: u64) -> Result<HilbertLoop, LoopError> {
    HilbertLoop::new(n)
}

impl HilbertLoop {
    pub fn new(n: u64) -> Result<Self, LoopError> {
        if !n.is_power_of_two() {
            return Err(LoopError::NotPowerOfTwo(n));
        }
        if n > 1 << 31 {
            return Err(LoopError::TooLarge(n));
        }
        Ok(HilbertLoop {
            i: 0,
            j: 0,
            h: 0,
            c: 0,
            level: 0,
            digit: 0,
            end: n * n,
        })
    }

    pub fn position(&self) -> (u32, u32, OrderValue) {
        (self.i, self.j, self.h)
    }

    pub fn direction(&self) -> Direction {
        Direction::from_code(self.c)
    }

    /// Rule level and digit recovered by the last step.
    pub fn rule(&self) -> (u32, u64) {
        (self.level, self.digit)
    }

    pub fn is_done(&self) -> bool {
        self.h >= self.end
    }

    /// Moves to the next cell. Every call performs the same operations
    /// regardless of `n` and `h`; `ops` is told how many.
    #[inline]
    pub fn advance<O: OpCounter>(&mut self, ops: &mut O) {
        self.h += 1;
        ops.tick(1);
        let tz = self.h.trailing_zeros();
        ops.tick(1);
        self.level = (tz >> 1) + 1;
        ops.tick(2);
        self.digit = (self.h >> (2 * (self.level - 1))) & 3;
        ops.tick(4);
        let odd = u64::from((self.level - 1) & 1);
        ops.tick(2);
        self.c ^= 3 * (odd ^ u64::from(self.digit == 3));
        ops.tick(4);
        // Truncated remainder keeps the dividend's sign: (1 - c) rem 2 is
        // +1, 0, -1, 0 for c = 0..3.
        let c = self.c as i32;
        self.j = self.j.wrapping_add_signed((1 - c) % 2);
        ops.tick(3);
        self.i = self.i.wrapping_add_signed((2 - c) % 2);
        ops.tick(3);
        self.c ^= odd ^ u64::from(self.digit == 1);
        ops.tick(3);
    }
}

impl Iterator for HilbertLoop {
    type Item = (u32, u32, OrderValue);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        if self.h >= self.end {
            return None;
        }
        let out = (self.i, self.j, self.h);
        self.advance(&mut ());
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end - self.h.min(self.end)) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for HilbertLoop {}

/// Callback form of [`HilbertLoop`].
pub fn iter_nonrecursive<F>(n: u64, mut visit: F) -> Result<(), LoopError>
where
    F: FnMut(u32, u32, OrderValue),
{
    for (i, j, h) in HilbertLoop::new(n)? {
        visit(i, j, h);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::hilbert_encode;

    fn recursive(level: u32) -> Vec<(u32, u32, u64)> {
        let mut out = Vec::new();
        generate_recursive(level, |i, j, h| out.push((i, j, h)));
        out
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(recursive(0), vec![(0, 0, 0)]);
        assert_eq!(recursive(1), vec![(0, 0, 0), (0, 1, 1), (1, 1, 2), (1, 0, 3)]);
        let l2 = recursive(2);
        assert_eq!(l2.len(), 16);
        assert_eq!(&l2[..5], &[(0, 0, 0), (0, 1, 1), (1, 1, 2), (1, 0, 3), (2, 0, 4)]);
        assert_eq!(l2[15], (0, 3, 15));
        for &(i, j, h) in &l2 {
            assert_eq!(hilbert_encode(CoordPair::new(i, j)), h);
        }
    }

    #[test]
    fn call_counts() {
        assert_eq!(count_recursive_calls(0), 1);
        assert_eq!(count_recursive_calls(1), 5);
        assert_eq!(count_recursive_calls(3), 85);
        let stats = generate_recursive(5, |_, _, _| {});
        assert_eq!(stats.max_depth, 6);
    }

    #[test]
    fn trailing_zero_examples() {
        assert_eq!(trailing_zeros(1), 0);
        assert_eq!(trailing_zeros(8), 3);
        assert_eq!(trailing_zeros(12), 2);
        for h in 1..5000u64 {
            assert_eq!(trailing_zeros(h), h.trailing_zeros());
        }
    }

    #[test]
    fn loop_examples() {
        let collect = |n| hilbert(n).unwrap().collect::<Vec<_>>();
        assert_eq!(collect(1), vec![(0, 0, 0)]);
        assert_eq!(collect(2), vec![(0, 0, 0), (0, 1, 1), (1, 1, 2), (1, 0, 3)]);
        assert_eq!(
            &collect(4)[..5],
            &[(0, 0, 0), (0, 1, 1), (1, 1, 2), (1, 0, 3), (2, 0, 4)]
        );
    }

    #[test]
    fn loop_rejects_bad_sizes() {
        assert_eq!(hilbert(6).unwrap_err(), LoopError::NotPowerOfTwo(6));
        assert_eq!(hilbert(0).unwrap_err(), LoopError::NotPowerOfTwo(0));
        assert!(hilbert(1 << 32).is_err());
    }

    #[test]
    fn loop_initial_state() {
        let it = hilbert(8).unwrap();
        assert_eq!(it.position(), (0, 0, 0));
        assert_eq!(it.direction(), Direction::Right);
    }

    #[test]
    fn loop_matches_recursion() {
        for level in 0..=7 {
            let it: Vec<_> = hilbert(1 << level).unwrap().collect();
            assert_eq!(it, recursive(level), "level {level}");
        }
    }

    // Literal transcription: register starts at 3 and moves by
    // j += (c-1) rem 2, i += (c-2) rem 2.
    fn literal_figure(n: u64) -> Vec<(i64, i64, u64)> {
        let (mut i, mut j, mut h, mut c) = (0i64, 0i64, 0u64, 3i64);
        let mut out = Vec::new();
        while h < n * n {
            out.push((i, j, h));
            h += 1;
            let l = (h.trailing_zeros() / 2 + 1) as i64;
            let a = ((h >> (2 * (l - 1))) & 3) as i64;
            let odd = (l - 1) & 1;
            c ^= 3 * (odd ^ i64::from(a == 3));
            j += (c - 1) % 2;
            i += (c - 2) % 2;
            c ^= odd ^ i64::from(a == 1);
        }
        out
    }

    #[test]
    fn literal_transcription_is_the_transpose() {
        for level in 0..=6 {
            let lit = literal_figure(1 << level);
            let ours: Vec<_> = hilbert(1 << level)
                .unwrap()
                .map(|(i, j, h)| (i64::from(j), i64::from(i), h))
                .collect();
            assert_eq!(lit, ours, "level {level}");
        }
    }

    #[test]
    fn constant_ops_per_step() {
        let mut it = hilbert(64).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        while !it.is_done() {
            let mut ops = StepOps::default();
            it.advance(&mut ops);
            seen.insert(ops.last);
        }
        assert_eq!(seen.len(), 1);
        assert!(*seen.iter().next().unwrap() <= 40);
    }

    #[test]
    fn productions_are_connected_paths() {
        for s in HilbertState::ALL {
            let rule = production(s);
            let (ci, cj) = entry_corner(s, 2);
            let (mut i, mut j) = (ci as i32, cj as i32);
            let mut cells = vec![(i, j)];
            for mv in rule.moves {
                let (di, dj) = mv.delta();
                i += di;
                j += dj;
                assert!((0..2).contains(&i) && (0..2).contains(&j));
                cells.push((i, j));
            }
            cells.sort();
            cells.dedup();
            assert_eq!(cells.len(), 4);
            let (ei, ej) = exit_corner(s, 2);
            assert_eq!((i, j), (ei as i32, ej as i32));
        }
    }
}
