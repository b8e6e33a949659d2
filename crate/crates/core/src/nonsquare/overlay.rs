use super::NonsquareError;

/// `K x K` grid of elementary cells covering an `n x m` rectangle.
///
/// Row extents sum to `n`, column extents to `m`. When `K >= 2` every
/// extent is 2, 3 or 4. Horizontally adjacent cells share their rows and
/// vertically adjacent cells share their columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlayGrid {
    side: u32,
    row_extents: Vec<u32>,
    col_extents: Vec<u32>,
    row_offsets: Vec<u32>,
    col_offsets: Vec<u32>,
}

impl OverlayGrid {
    pub fn side(&self) -> u32 {
        self.side
    }

    /// `log2` of the side.
    pub fn levels(&self) -> u32 {
        self.side.trailing_zeros()
    }

    pub fn rows(&self) -> u32 {
        self.row_offsets[self.side as usize - 1] + self.row_extents[self.side as usize - 1]
    }

    pub fn cols(&self) -> u32 {
        self.col_offsets[self.side as usize - 1] + self.col_extents[self.side as usize - 1]
    }

    pub fn row_extents(&self) -> &[u32] {
        &self.row_extents
    }

    pub fn col_extents(&self) -> &[u32] {
        &self.col_extents
    }

    pub fn row_offsets(&self) -> &[u32] {
        &self.row_offsets
    }

    pub fn col_offsets(&self) -> &[u32] {
        &self.col_offsets
    }

    /// `(row offset, col offset, height, width)` of overlay cell `(ci, cj)`.
    pub fn cell(&self, ci: u32, cj: u32) -> (u32, u32, u32, u32) {
        let (ci, cj) = (ci as usize, cj as usize);
        (
            self.row_offsets[ci],
            self.col_offsets[cj],
            self.row_extents[ci],
            self.col_extents[cj],
        )
    }
}

fn spread(total: u32, parts: u32) -> Vec<u32> {
    let base = total / parts;
    let extra = total % parts;
    (0..parts).map(|p| base + u32::from(p < extra)).collect()
}

fn offsets(extents: &[u32]) -> Vec<u32> {
    extents
        .iter()
        .scan(0, |acc, &e| {
            let start = *acc;
            *acc += e;
            Some(start)
        })
        .collect()
}

/// Picks the largest power-of-two `K` with `2K <= min(n, m)` and
/// `4K >= max(n, m)`; grids with both sides at most 4 that admit no such `K`
/// become a single `n x m` cell.
pub fn overlay_plan(n: u32, m: u32) -> Result<OverlayGrid, NonsquareError> {
    if n == 0 || m == 0 {
        return Err(NonsquareError::EmptyGrid { n, m });
    }
    let (lo, hi) = (n.min(m), n.max(m));
    let side = if lo >= 2 {
        // Shrinking K only tightens 4K >= hi, so the largest candidate decides.
        let k = 1u32 << (lo / 2).ilog2();
        (u64::from(k) * 4 >= u64::from(hi)).then_some(k)
    } else {
        None
    };
    let side = match side {
        Some(k) => k,
        None if hi <= 4 => 1,
        None => return Err(NonsquareError::AspectRatio { n, m }),
    };
    let row_extents = spread(n, side);
    let col_extents = spread(m, side);
    Ok(OverlayGrid::from_extents(side, row_extents, col_extents))
}

impl OverlayGrid {
    fn from_extents(side: u32, row_extents: Vec<u32>, col_extents: Vec<u32>) -> Self {
        OverlayGrid {
            side,
            row_offsets: offsets(&row_extents),
            col_offsets: offsets(&col_extents),
            row_extents,
            col_extents,
        }
    }

    /// Same side and totals with other extent layouts: 2s and 4s only plus at
    /// most one 3 per dimension, the 3 tried at every position. Used when the
    /// balanced layout admits no unit-step plan.
    pub fn variants(&self) -> impl Iterator<Item = OverlayGrid> + '_ {
        let rows = sparse_odd_layouts(self.rows(), self.side);
        let cols = sparse_odd_layouts(self.cols(), self.side);
        let side = self.side;
        rows.into_iter().flat_map(move |r| {
            cols.clone()
                .into_iter()
                .map(move |c| OverlayGrid::from_extents(side, r.clone(), c))
        })
    }
}

// Layouts of `total` over `parts` using 4s then 2s, with a single 3 inserted
// at each possible position when `total` is odd.
fn sparse_odd_layouts(total: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let odd = total % 2;
    let even_parts = parts - odd;
    let fours = (total - 3 * odd - 2 * even_parts) / 2;
    let base: Vec<u32> = (0..even_parts).map(|p| if p < fours { 4 } else { 2 }).collect();
    if odd == 0 {
        return vec![base];
    }
    (0..parts as usize)
        .map(|pos| {
            let mut v = base.clone();
            v.insert(pos, 3);
            v
        })
        .collect()
}
