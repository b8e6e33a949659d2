//! Jump-over Hilbert loops over predicate-defined regions.
//!
//! The caller classifies aligned `2^l x 2^l` quadrants. Skipped quadrants
//! cost nothing beyond the query, full ones are expanded without further
//! queries, partial ones are split in Hilbert digit order. Visits carry the
//! true Hilbert value of every pair.

use super::NonsquareError;
use crate::curve::{CoordPair, HilbertState, OrderValue};
use crate::lindenmayer::expand_pattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Skip,
    Partial,
    Full,
}

/// An aligned quadrant: `2^level` cells on a side, upper-left cell `anchor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadrantQuery {
    pub level: u32,
    pub anchor: CoordPair,
}

impl QuadrantQuery {
    pub fn side(&self) -> u32 {
        1 << self.level
    }
}

/// Verdict for the strict upper triangle `i < j`.
pub fn triangle_query(q: QuadrantQuery) -> Verdict {
    let last = u64::from(q.side()) - 1;
    let (i0, j0) = (u64::from(q.anchor.i), u64::from(q.anchor.j));
    if i0 + last < j0 {
        Verdict::Full
    } else if i0 >= j0 + last {
        Verdict::Skip
    } else {
        Verdict::Partial
    }
}

struct Walker<Q, V> {
    query: Q,
    visit: V,
    verify: bool,
}

impl<Q, V> Walker<Q, V>
where
    Q: FnMut(QuadrantQuery) -> Verdict,
    V: FnMut(u32, u32, OrderValue),
{
    fn descend(
        &mut self,
        state: HilbertState,
        q: QuadrantQuery,
        base: OrderValue,
        verdict: Verdict,
    ) -> Result<(), NonsquareError> {
        match verdict {
            Verdict::Skip if !self.verify => Ok(()),
            Verdict::Full if !self.verify => {
                expand_pattern(state, q.level, q.anchor, base, &mut self.visit);
                Ok(())
            }
            _ if q.level == 0 => {
                if verdict != Verdict::Skip {
                    (self.visit)(q.anchor.i, q.anchor.j, base);
                }
                Ok(())
            }
            _ => {
                let half = q.level - 1;
                let mut children = [(state, q, 0, Verdict::Skip); 4];
                for (digit, slot) in children.iter_mut().enumerate() {
                    let (bi, bj, next) = state.decode_step(digit as u64);
                    let child = QuadrantQuery {
                        level: half,
                        anchor: CoordPair::new(q.anchor.i + (bi << half), q.anchor.j + (bj << half)),
                    };
                    let v = (self.query)(child);
                    let contradicts = matches!(
                        (verdict, v),
                        (Verdict::Full, Verdict::Skip | Verdict::Partial)
                            | (Verdict::Skip, Verdict::Full | Verdict::Partial)
                    );
                    if contradicts {
                        return Err(NonsquareError::InconsistentPredicate {
                            level: half,
                            anchor: child.anchor,
                        });
                    }
                    *slot = (next, child, base + ((digit as u64) << (2 * half)), v);
                }
                if verdict == Verdict::Partial
                    && children.iter().all(|c| c.3 == children[0].3)
                    && children[0].3 != Verdict::Partial
                {
                    // A partial quadrant made of only skipped or only full
                    // children is not partial.
                    return Err(NonsquareError::InconsistentPredicate {
                        level: q.level,
                        anchor: q.anchor,
                    });
                }
                for (next, child, child_base, v) in children {
                    self.descend(next, child, child_base, v)?;
                }
                Ok(())
            }
        }
    }
}

fn run<Q, V>(level: u32, mut query: Q, visit: V, verify: bool) -> Result<(), NonsquareError>
where
    Q: FnMut(QuadrantQuery) -> Verdict,
    V: FnMut(u32, u32, OrderValue),
{
    if level > 31 {
        return Err(NonsquareError::LevelTooLarge(level));
    }
    let root = QuadrantQuery {
        level,
        anchor: CoordPair::new(0, 0),
    };
    let verdict = query(root);
    let mut walker = Walker { query, visit, verify };
    walker.descend(HilbertState::start_for_level(level), root, 0, verdict)
}

/// Visits the cells of `[0, 2^level)^2` not excluded by `query`, in
/// increasing Hilbert order, passing each cell's Hilbert value.
///
/// Inconsistent answers are reported when they are noticed: a partial
/// quadrant whose four children are all skipped or all full.
pub fn iter_fgf<Q, V>(level: u32, query: Q, visit: V) -> Result<(), NonsquareError>
where
    Q: FnMut(QuadrantQuery) -> Verdict,
    V: FnMut(u32, u32, OrderValue),
{
    run(level, query, visit, false)
}

/// Like [`iter_fgf`] but also queries inside skipped and full quadrants to
/// check that the predicate never contradicts a parent verdict. Costs a
/// query per quadrant of the whole grid.
pub fn iter_fgf_verified<Q, V>(level: u32, query: Q, visit: V) -> Result<(), NonsquareError>
where
    Q: FnMut(QuadrantQuery) -> Verdict,
    V: FnMut(u32, u32, OrderValue),
{
    run(level, query, visit, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::hilbert_encode;

    fn collect(level: u32, query: impl FnMut(QuadrantQuery) -> Verdict) -> Vec<(u32, u32, u64)> {
        let mut out = Vec::new();
        iter_fgf(level, query, |i, j, h| out.push((i, j, h))).unwrap();
        out
    }

    #[test]
    fn triangle_examples() {
        let q = |level, i, j| QuadrantQuery {
            level,
            anchor: CoordPair::new(i, j),
        };
        assert_eq!(triangle_query(q(1, 0, 2)), Verdict::Full);
        assert_eq!(triangle_query(q(1, 2, 0)), Verdict::Skip);
        assert_eq!(triangle_query(q(2, 0, 0)), Verdict::Partial);
        assert_eq!(triangle_query(q(0, 1, 1)), Verdict::Skip);
        assert_eq!(triangle_query(q(0, 1, 2)), Verdict::Full);
    }

    #[test]
    fn full_query_is_plain_hilbert() {
        let all = collect(2, |_| Verdict::Full);
        let mut expect = Vec::new();
        crate::lindenmayer::generate_recursive(2, |i, j, h| expect.push((i, j, h)));
        assert_eq!(all, expect);
    }

    #[test]
    fn triangle_level_two() {
        let tri = collect(2, triangle_query);
        let mut pairs: Vec<_> = tri.iter().map(|&(i, j, _)| (i, j)).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(tri.windows(2).all(|w| w[0].2 < w[1].2));
        for (i, j, h) in tri {
            assert_eq!(hilbert_encode(CoordPair::new(i, j)), h);
        }
    }

    #[test]
    fn skip_everything() {
        assert!(collect(3, |_| Verdict::Skip).is_empty());
    }

    #[test]
    fn skipped_quadrants_are_not_entered() {
        let mut queries = 0;
        let out = collect(6, |q| {
            queries += 1;
            if q.anchor.i >= 32 {
                Verdict::Skip
            } else if q.level <= 5 && q.anchor.i < 32 {
                Verdict::Full
            } else {
                Verdict::Partial
            }
        });
        assert_eq!(out.len(), 32 * 64);
        assert_eq!(queries, 5);
    }

    #[test]
    fn contradictions_are_reported() {
        // Partial root over four full children.
        let err = iter_fgf(
            2,
            |q| if q.level == 2 { Verdict::Partial } else { Verdict::Full },
            |_, _, _| {},
        );
        assert!(matches!(
            err,
            Err(NonsquareError::InconsistentPredicate { level: 2, .. })
        ));

        // Full root hiding a skipped cell, caught only by the verifying walk.
        let liar = |q: QuadrantQuery| {
            if q.level == 0 && q.anchor == CoordPair::new(1, 1) {
                Verdict::Skip
            } else {
                Verdict::Full
            }
        };
        assert!(iter_fgf(2, liar, |_, _, _| {}).is_ok());
        assert!(matches!(
            iter_fgf_verified(2, liar, |_, _, _| {}),
            Err(NonsquareError::InconsistentPredicate { level: 0, .. })
        ));

        let mut n = 0;
        iter_fgf_verified(4, triangle_query, |_, _, _| n += 1).unwrap();
        assert_eq!(n, 16 * 15 / 2);
    }
}
