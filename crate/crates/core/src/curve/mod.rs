//! Stateless coordinate <-> order value conversions.
//!
//! Coordinates follow the matrix convention: `i` is the row and grows
//! downward, `j` is the column and grows to the right. Every curve here maps
//! a [`CoordPair`] onto a 64-bit order value and back.

mod hilbert;
mod zorder;

pub use hilbert::{effective_length, hilbert_decode, hilbert_decode_from, hilbert_encode, hilbert_walk, HilbertState};
pub use zorder::{z_decode, z_encode, z_encode_automaton};

use thiserror::Error;

/// Position along a curve.
pub type OrderValue = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("coordinate {value} does not fit in 32 bits")]
    Overflow { value: u64 },
    #[error("column {j} is outside a row of width {n}")]
    ColumnOutOfRange { j: u64, n: u64 },
    #[error("order value overflows 64 bits")]
    OrderOverflow,
}

/// A pair of grid indices: `i` is the row, `j` the column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordPair {
    pub i: u32,
    pub j: u32,
}

impl CoordPair {
    pub const fn new(i: u32, j: u32) -> Self {
        CoordPair { i, j }
    }

    /// Builds a pair from wide integers, rejecting anything that would push
    /// an interleaved order value past 64 bits.
    pub fn try_new(i: u64, j: u64) -> Result<Self, CurveError> {
        let narrow = |v: u64| u32::try_from(v).map_err(|_| CurveError::Overflow { value: v });
        Ok(CoordPair::new(narrow(i)?, narrow(j)?))
    }

    pub const fn transposed(self) -> Self {
        CoordPair { i: self.j, j: self.i }
    }
}

impl From<(u32, u32)> for CoordPair {
    fn from((i, j): (u32, u32)) -> Self {
        CoordPair::new(i, j)
    }
}

/// Row-major position `i * n + j`.
pub fn canonic_order(p: CoordPair, n: u64) -> Result<OrderValue, CurveError> {
    let j = u64::from(p.j);
    if j >= n {
        return Err(CurveError::ColumnOutOfRange { j, n });
    }
    u64::from(p.i)
        .checked_mul(n)
        .and_then(|v| v.checked_add(j))
        .ok_or(CurveError::OrderOverflow)
}

/// Inverse of [`canonic_order`].
pub fn canonic_decode(h: OrderValue, n: u64) -> Result<CoordPair, CurveError> {
    if n == 0 {
        return Err(CurveError::ColumnOutOfRange { j: 0, n });
    }
    CoordPair::try_new(h / n, h % n)
}

/// Evaluates `curve` with the indices exchanged.
pub fn transposed_encode<F>(curve: F, p: CoordPair) -> OrderValue
where
    F: Fn(CoordPair) -> OrderValue,
{
    curve(p.transposed())
}
