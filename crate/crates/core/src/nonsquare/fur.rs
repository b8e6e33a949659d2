//! Overlay-grid Hilbert loops over arbitrary `n x m` rectangles.
//!
//! Overlay cells are visited in Hilbert order and each cell is walked by a
//! packed nano-program. Which cell of the shared edge hands over to the next
//! overlay cell is fixed once per grid by a backward feasibility pass, so
//! consecutive visits are always one unit step apart. Cells keep the
//! orientation's corner-to-corner program whenever that stays feasible; with
//! 2x2 cells this reproduces the plain Hilbert curve.

use super::nano::{orientation_exit, path_table, Moves, PathTable};
use super::overlay::{overlay_plan, OverlayGrid};
use super::NonsquareError;
use crate::curve::{hilbert_walk, CoordPair, HilbertState};
use crate::lindenmayer::{Direction, HilbertLoop};

/// Precomputed traversal plan for one rectangle.
#[derive(Clone, Debug)]
pub struct FurLoop {
    grid: OverlayGrid,
    // Packed nano-program of each overlay cell, indexed by overlay order.
    programs: Vec<u64>,
}

// Overlay cells in traversal order. The overlay walks the coarse level of a
// curve one level deeper than itself, which is the transpose of the plain
// K x K loop.
fn overlay_order(side: u32) -> impl Iterator<Item = (u32, u32)> {
    HilbertLoop::new(u64::from(side))
        .expect("overlay side is a power of two")
        .map(|(i, j, _)| (j, i))
}

struct CellGeom {
    height: u32,
    width: u32,
    orientation: HilbertState,
    // Direction towards the next overlay cell, if any.
    next: Option<Direction>,
}

impl CellGeom {
    fn local(&self, r: u32, c: u32) -> usize {
        (r * self.width + c) as usize
    }

    fn coords(&self, idx: usize) -> (u32, u32) {
        (idx as u32 / self.width, idx as u32 % self.width)
    }

    // Local cells that may hand over to the next cell.
    fn exits(&self) -> Vec<usize> {
        let all = || 0..(self.height * self.width) as usize;
        match self.next {
            None => all().collect(),
            Some(Direction::Right) => all().filter(|&x| self.coords(x).1 == self.width - 1).collect(),
            Some(Direction::Left) => all().filter(|&x| self.coords(x).1 == 0).collect(),
            Some(Direction::Down) => all().filter(|&x| self.coords(x).0 == self.height - 1).collect(),
            Some(Direction::Up) => all().filter(|&x| self.coords(x).0 == 0).collect(),
        }
    }

    // Exits ordered by preference: nearest to the orientation's exit corner.
    fn ranked_exits(&self) -> Vec<usize> {
        let (xr, xc) = orientation_exit(self.orientation, self.height, self.width);
        let mut exits = self.exits();
        exits.sort_by_key(|&x| {
            let (r, c) = self.coords(x);
            (r.abs_diff(xr) + c.abs_diff(xc), x)
        });
        exits
    }

    // Entry cell in `next_cell` reached by stepping out of local cell `exit`.
    fn cross(&self, exit: usize, next_cell: &CellGeom) -> usize {
        let (r, c) = self.coords(exit);
        match self.next.expect("not the last cell") {
            Direction::Right => next_cell.local(r, 0),
            Direction::Left => next_cell.local(r, next_cell.width - 1),
            Direction::Down => next_cell.local(0, c),
            Direction::Up => next_cell.local(next_cell.height - 1, c),
        }
    }
}

impl FurLoop {
    pub fn new(n: u32, m: u32) -> Result<Self, NonsquareError> {
        let grid = overlay_plan(n, m)?;
        let table = path_table();
        if let Ok(programs) = plan_programs(&grid, table) {
            return Ok(FurLoop { grid, programs });
        }
        let found = grid.variants().find_map(|g| {
            plan_programs(&g, table)
                .ok()
                .map(|programs| FurLoop { grid: g, programs })
        });
        found.ok_or(NonsquareError::NoContinuousPlan { n, m })
    }

    pub fn grid(&self) -> &OverlayGrid {
        &self.grid
    }

    /// Number of visited cells.
    pub fn len(&self) -> usize {
        self.grid.rows() as usize * self.grid.cols() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Packed program of every overlay cell, in overlay order.
    pub fn programs(&self) -> &[u64] {
        &self.programs
    }

    pub fn iter(&self) -> FurIter<'_> {
        let mut overlay = HilbertLoop::new(u64::from(self.grid.side())).expect("power of two");
        overlay.next();
        FurIter {
            plan: self,
            overlay,
            cell: (0, 0),
            index: 0,
            moves: Moves::new(self.programs[0]),
            i: 0,
            j: 0,
            fresh: true,
        }
    }
}

impl<'a> IntoIterator for &'a FurLoop {
    type Item = (u32, u32);
    type IntoIter = FurIter<'a>;

    fn into_iter(self) -> FurIter<'a> {
        self.iter()
    }
}

fn plan_programs(grid: &OverlayGrid, table: &PathTable) -> Result<Vec<u64>, NonsquareError> {
    let levels = grid.levels();
    let start = HilbertState::start_for_level(levels + 1);
    let order: Vec<(u32, u32)> = overlay_order(grid.side()).collect();
    let cells: Vec<CellGeom> = order
        .iter()
        .enumerate()
        .map(|(t, &(ci, cj))| {
            let (_, _, height, width) = grid.cell(ci, cj);
            let orientation = hilbert_walk(CoordPair::new(ci, cj), levels, start).1;
            let next = order.get(t + 1).map(|&(ni, nj)| {
                Direction::from_delta(i64::from(ni) - i64::from(ci), i64::from(nj) - i64::from(cj))
                    .expect("overlay cells are adjacent")
            });
            CellGeom {
                height,
                width,
                orientation,
                next,
            }
        })
        .collect();

    // feasible[t]: entries of cell t from which the rest of the grid can be
    // completed.
    let count = cells.len();
    let mut feasible = vec![0u16; count];
    for t in (0..count).rev() {
        let cell = &cells[t];
        let mut mask = 0u16;
        for entry in 0..(cell.height * cell.width) as usize {
            let ok = cell.exits().into_iter().any(|x| {
                table.path(cell.height, cell.width, entry, x).is_some()
                    && (t + 1 == count || feasible[t + 1] & (1 << cell.cross(x, &cells[t + 1])) != 0)
            });
            if ok {
                mask |= 1 << entry;
            }
        }
        feasible[t] = mask;
    }
    if feasible[0] & 1 == 0 {
        return Err(NonsquareError::NoContinuousPlan {
            n: grid.rows(),
            m: grid.cols(),
        });
    }

    let mut programs = Vec::with_capacity(count);
    let mut entry = 0usize;
    for t in 0..count {
        let cell = &cells[t];
        let (exit, word) = cell
            .ranked_exits()
            .into_iter()
            .filter(|&x| t + 1 == count || feasible[t + 1] & (1 << cell.cross(x, &cells[t + 1])) != 0)
            .find_map(|x| table.path(cell.height, cell.width, entry, x).map(|w| (x, w)))
            .expect("entry is feasible");
        programs.push(word);
        if t + 1 < count {
            entry = cell.cross(exit, &cells[t + 1]);
        }
    }
    Ok(programs)
}

/// Iterator over `(i, j)` of a [`FurLoop`].
pub struct FurIter<'a> {
    plan: &'a FurLoop,
    // Walked transposed, see `overlay_order`.
    overlay: HilbertLoop,
    cell: (u32, u32),
    index: usize,
    moves: Moves,
    i: u32,
    j: u32,
    fresh: bool,
}

impl Iterator for FurIter<'_> {
    type Item = (u32, u32);

    #[inline]
    fn next(&mut self) -> Option<(u32, u32)> {
        if self.fresh {
            self.fresh = false;
            return Some((self.i, self.j));
        }
        let mv = match self.moves.next() {
            Some(mv) => mv,
            None => {
                let (oj, oi, _) = self.overlay.next()?;
                let next = (oi, oj);
                let mv = Direction::from_delta(
                    i64::from(next.0) - i64::from(self.cell.0),
                    i64::from(next.1) - i64::from(self.cell.1),
                )?;
                self.cell = next;
                self.index += 1;
                self.moves = Moves::new(self.plan.programs[self.index]);
                mv
            }
        };
        let (di, dj) = mv.delta();
        self.i = self.i.wrapping_add_signed(di);
        self.j = self.j.wrapping_add_signed(dj);
        Some((self.i, self.j))
    }
}

/// Visits every cell of `[0, n) x [0, m)` once, one unit step at a time.
pub fn iter_fur<F>(n: u32, m: u32, mut visit: F) -> Result<(), NonsquareError>
where
    F: FnMut(u32, u32),
{
    for (i, j) in &FurLoop::new(n, m)? {
        visit(i, j);
    }
    Ok(())
}

/// Sub-rectangle of a tiled traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tile {
    pub row: u32,
    pub col: u32,
    pub rows: u32,
    pub cols: u32,
}

fn feasible(n: u32, m: u32) -> bool {
    overlay_plan(n, m).is_ok()
}

// Largest cut along a side of length `len` (the other side being `other`)
// that admits an overlay, preferring cuts whose remainder does too.
fn best_cut(len: u32, other: u32, fits: impl Fn(u32, u32) -> bool) -> Option<u32> {
    let candidates = (1..len).rev().filter(|&w| fits(other, w));
    let mut fallback = None;
    for w in candidates {
        if fits(other, len - w) {
            return Some(w);
        }
        fallback.get_or_insert(w);
    }
    fallback
}

fn tile_into(row: u32, col: u32, n: u32, m: u32, out: &mut Vec<Tile>) {
    if n == 0 || m == 0 {
        return;
    }
    if feasible(n, m) {
        out.push(Tile {
            row,
            col,
            rows: n,
            cols: m,
        });
        return;
    }
    let by_cols = || best_cut(m, n, feasible);
    let by_rows = || best_cut(n, m, |a, b| feasible(b, a));
    let (cut_cols, w) = if m >= n {
        match by_cols() {
            Some(w) => (true, w),
            None => (false, by_rows().unwrap_or(n / 2)),
        }
    } else {
        match by_rows() {
            Some(h) => (false, h),
            None => (true, by_cols().unwrap_or(m / 2)),
        }
    };
    if cut_cols {
        tile_into(row, col, n, w, out);
        tile_into(row, col + w, n, m - w, out);
    } else {
        tile_into(row, col, w, m, out);
        tile_into(row + w, col, n - w, m, out);
    }
}

/// Splits `n x m` into rectangles that each admit an overlay grid.
pub fn tile_plan(n: u32, m: u32) -> Vec<Tile> {
    let mut out = Vec::new();
    tile_into(0, 0, n, m, &mut out);
    out
}

/// Like [`iter_fur`] but accepts any aspect ratio by iterating independent
/// tiles one after another. Locality, and the unit-step property, are lost
/// at the seams between tiles.
pub fn iter_fur_tiled<F>(n: u32, m: u32, mut visit: F) -> Result<(), NonsquareError>
where
    F: FnMut(u32, u32),
{
    for tile in tile_plan(n, m) {
        for (i, j) in &FurLoop::new(tile.rows, tile.cols)? {
            visit(tile.row + i, tile.col + j);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindenmayer::hilbert;

    fn collect(n: u32, m: u32) -> Vec<(u32, u32)> {
        FurLoop::new(n, m).unwrap().iter().collect()
    }

    fn assert_covering_walk(n: u32, m: u32, seq: &[(u32, u32)]) {
        assert_eq!(seq.len(), (n * m) as usize, "{n}x{m}");
        let mut seen = vec![false; (n * m) as usize];
        for &(i, j) in seq {
            assert!(i < n && j < m, "{n}x{m}: ({i},{j}) outside");
            assert!(!seen[(i * m + j) as usize], "{n}x{m}: ({i},{j}) twice");
            seen[(i * m + j) as usize] = true;
        }
        for w in seq.windows(2) {
            let d = w[0].0.abs_diff(w[1].0) + w[0].1.abs_diff(w[1].1);
            assert_eq!(d, 1, "{n}x{m}: jump {:?} -> {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn examples() {
        assert_covering_walk(3, 3, &collect(3, 3));
        assert_covering_walk(6, 5, &collect(6, 5));
        let std: Vec<_> = hilbert(4).unwrap().map(|(i, j, _)| (i, j)).collect();
        assert_eq!(collect(4, 4), std);
    }

    #[test]
    fn thin_and_tiny_grids() {
        for n in 1..=4 {
            for m in 1..=4 {
                assert_covering_walk(n, m, &collect(n, m));
            }
        }
        assert_eq!(collect(1, 1), vec![(0, 0)]);
    }

    #[test]
    fn powers_of_two_degenerate() {
        for level in 0..=6 {
            let n = 1u32 << level;
            let std: Vec<_> = hilbert(u64::from(n)).unwrap().map(|(i, j, _)| (i, j)).collect();
            assert_eq!(collect(n, n), std, "n = {n}");
        }
    }

    #[test]
    fn aspect_errors_propagate() {
        assert!(matches!(
            iter_fur(4, 9, |_, _| {}),
            Err(NonsquareError::AspectRatio { n: 4, m: 9 })
        ));
    }

    #[test]
    fn tiled_covers_any_rectangle() {
        for (n, m) in [(4, 9), (1, 10), (64, 10), (7, 13), (3, 40), (33, 5), (64, 129)] {
            let mut seen = vec![0u8; (n * m) as usize];
            iter_fur_tiled(n, m, |i, j| seen[(i * m + j) as usize] += 1).unwrap();
            assert!(seen.iter().all(|&c| c == 1), "{n}x{m}");
            for t in tile_plan(n, m) {
                assert!(overlay_plan(t.rows, t.cols).is_ok());
            }
        }
        assert_eq!(
            tile_plan(6, 6),
            vec![Tile {
                row: 0,
                col: 0,
                rows: 6,
                cols: 6
            }]
        );
    }
}
