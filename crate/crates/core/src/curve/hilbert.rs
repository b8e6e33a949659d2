//! Hilbert order values through a four-state Mealy automaton.
//!
//! Each state is one of the basic traversal patterns of a 2x2 block. Feeding
//! a bit pair `(i_l, j_l)` emits one four-adic digit of the order value and
//! selects the pattern of the chosen sub-quadrant.

use super::{CoordPair, OrderValue};

/// Basic traversal patterns, doubling as automaton states.
///
/// `U` and `D` enter a block at its upper-left corner and leave at the
/// upper-right and lower-left corner respectively. `A` and `C` enter at the
/// lower-right corner and leave at the lower-left and upper-right corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HilbertState {
    U = 0,
    D = 1,
    A = 2,
    C = 3,
}

use HilbertState::{A, C, D, U};

impl HilbertState {
    pub const ALL: [HilbertState; 4] = [U, D, A, C];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(idx: usize) -> HilbertState {
        Self::ALL[idx & 3]
    }

    /// Start pattern for a `2^level` square, chosen so that the resulting
    /// order agrees with the even-padded automaton.
    pub const fn start_for_level(level: u32) -> HilbertState {
        if level.is_multiple_of(2) {
            U
        } else {
            D
        }
    }

    /// One automaton step: bit pair in, digit and follow-up state out.
    #[inline]
    pub const fn encode_step(self, bi: u32, bj: u32) -> (u64, HilbertState) {
        ENCODE[self as usize][((bi << 1) | bj) as usize]
    }

    /// Inverse step: digit in, bit pair `(i_l, j_l)` and follow-up state out.
    #[inline]
    pub const fn decode_step(self, digit: u64) -> (u32, u32, HilbertState) {
        let (quad, next) = DECODE[self as usize][(digit & 3) as usize];
        (quad >> 1, quad & 1, next)
    }
}

// Indexed by [state][(i_l << 1) | j_l].
const ENCODE: [[(u64, HilbertState); 4]; 4] = [
    // U: (0,0)->0/D  (0,1)->3/C  (1,0)->1/U  (1,1)->2/U
    [(0, D), (3, C), (1, U), (2, U)],
    // D: (0,0)->0/U  (0,1)->1/D  (1,0)->3/A  (1,1)->2/D
    [(0, U), (1, D), (3, A), (2, D)],
    // A: (0,0)->2/A  (0,1)->1/A  (1,0)->3/D  (1,1)->0/C
    [(2, A), (1, A), (3, D), (0, C)],
    // C: (0,0)->2/C  (0,1)->3/U  (1,0)->1/C  (1,1)->0/A
    [(2, C), (3, U), (1, C), (0, A)],
];

// Indexed by [state][digit], yields ((i_l << 1) | j_l, next).
const DECODE: [[(u32, HilbertState); 4]; 4] = invert(ENCODE);

const fn invert(table: [[(u64, HilbertState); 4]; 4]) -> [[(u32, HilbertState); 4]; 4] {
    let mut out = [[(0u32, U); 4]; 4];
    let mut s = 0;
    while s < 4 {
        let mut quad = 0;
        while quad < 4 {
            let (digit, next) = table[s][quad];
            out[s][digit as usize] = (quad as u32, next);
            quad += 1;
        }
        s += 1;
    }
    out
}

/// Smallest even number of bits per coordinate that represents both
/// coordinates, never less than 2.
///
/// Encoding with any larger even bit count gives the same order value,
/// because a leading `(0,0)` pair only toggles between `U` and `D`.
pub fn effective_length(p: CoordPair) -> u32 {
    let bits = 32 - (p.i | p.j).leading_zeros();
    (bits + (bits & 1)).max(2)
}

/// Runs the automaton over the lowest `bits` bit pairs of `p`, starting in
/// `start`. Returns the emitted order value and the state reached, which is
/// the pattern a further subdivision of the addressed cell would follow.
pub fn hilbert_walk(p: CoordPair, bits: u32, start: HilbertState) -> (OrderValue, HilbertState) {
    debug_assert!(bits <= 32);
    let mut state = start;
    let mut h = 0u64;
    for level in (0..bits).rev() {
        let (digit, next) = state.encode_step((p.i >> level) & 1, (p.j >> level) & 1);
        h = (h << 2) | digit;
        state = next;
    }
    (h, state)
}

pub fn hilbert_encode(p: CoordPair) -> OrderValue {
    hilbert_walk(p, effective_length(p), U).0
}

pub fn hilbert_decode(h: OrderValue) -> CoordPair {
    let digits = 32 - h.leading_zeros() / 2;
    let digits = (digits + (digits & 1)).max(2);
    hilbert_decode_from(h, digits, U)
}

/// Decodes the lowest `digits` four-adic digits of `h` starting in `start`.
pub fn hilbert_decode_from(h: OrderValue, digits: u32, start: HilbertState) -> CoordPair {
    debug_assert!(digits <= 32);
    let mut state = start;
    let (mut i, mut j) = (0u32, 0u32);
    for level in (0..digits).rev() {
        let (bi, bj, next) = state.decode_step(h >> (2 * level));
        i = (i << 1) | bi;
        j = (j << 1) | bj;
        state = next;
    }
    CoordPair::new(i, j)
}
