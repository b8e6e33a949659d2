use super::{pair_order, DenseMatrix, KernelError, TraversalOrder};
use crate::cache_sim::AccessTrace;

/// Distance sentinel for "no path".
pub const INF: f64 = f64::MAX;

fn add(a: f64, b: f64) -> f64 {
    if a == INF || b == INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

fn square(d: &DenseMatrix) -> Result<usize, KernelError> {
    if d.rows() != d.cols() {
        return Err(KernelError::NotSquare {
            rows: d.rows(),
            cols: d.cols(),
        });
    }
    Ok(d.rows())
}

fn relax(d: &mut DenseMatrix, i: usize, j: usize, k: usize) {
    let via = add(d[(i, k)], d[(k, j)]);
    if via < d[(i, j)] {
        d[(i, j)] = via;
    }
}

fn negative_diagonal(d: &DenseMatrix) -> Result<(), KernelError> {
    match (0..d.rows()).find(|&v| d[(v, v)] < 0.0) {
        Some(v) => Err(KernelError::NegativeCycle(v)),
        None => Ok(()),
    }
}

/// All-pairs shortest paths. For each `k`, row `k` and column `k` are
/// updated first; the remaining pairs only read them, so they are visited
/// in `order`.
pub fn floyd_warshall(d: &DenseMatrix, order: TraversalOrder) -> Result<DenseMatrix, KernelError> {
    let n = square(d)?;
    let rest = pair_order(n, n, order)?;
    let mut d = d.clone();
    for k in 0..n {
        for x in 0..n {
            relax(&mut d, k, x, k);
            relax(&mut d, x, k, k);
        }
        for &(i, j) in &rest {
            if i != k && j != k {
                relax(&mut d, i, j, k);
            }
        }
        negative_diagonal(&d)?;
    }
    Ok(d)
}

/// The classic in-place triple loop.
pub fn floyd_warshall_classic(d: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
    let n = square(d)?;
    let mut d = d.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                relax(&mut d, i, j, k);
            }
        }
    }
    negative_diagonal(&d)?;
    Ok(d)
}

/// Addresses `i * n + j` read by [`floyd_warshall`]: `d[i][k]`, `d[k][j]`,
/// `d[i][j]` per relaxation.
pub fn floyd_trace(n: usize, order: TraversalOrder) -> Result<AccessTrace, KernelError> {
    let rest = pair_order(n, n, order)?;
    let at = |i: usize, j: usize| (i * n + j) as u64;
    let mut addrs = Vec::with_capacity(3 * n * n * n);
    let mut touch = |i: usize, j: usize, k: usize| addrs.extend([at(i, k), at(k, j), at(i, j)]);
    for k in 0..n {
        for x in 0..n {
            touch(k, x, k);
            touch(x, k, k);
        }
        for &(i, j) in &rest {
            if i != k && j != k {
                touch(i, j, k);
            }
        }
    }
    Ok(AccessTrace::new(addrs, (n * n) as u64).expect("addresses stay in the footprint"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_graph(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else if rng.gen_bool(0.3) {
                f64::from(rng.gen_range(1..100))
            } else {
                INF
            }
        })
    }

    #[test]
    fn single_vertex() {
        let d = DenseMatrix::zeros(1, 1);
        assert_eq!(floyd_warshall(&d, TraversalOrder::Hilbert).unwrap(), d);
    }

    #[test]
    fn unit_cycle() {
        let mut d = DenseMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { INF });
        for v in 0..3 {
            d[(v, (v + 1) % 3)] = 1.0;
        }
        let r = floyd_warshall(&d, TraversalOrder::Nested).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = ((j + 3 - i) % 3) as f64;
                assert_eq!(r[(i, j)], expect);
            }
        }
    }

    #[test]
    fn matches_classic() {
        for (n, seed) in [(64, 1), (17, 2), (5, 3)] {
            let d = random_graph(n, seed);
            let reference = floyd_warshall_classic(&d).unwrap();
            for order in [
                TraversalOrder::Nested,
                TraversalOrder::Blocked(3),
                TraversalOrder::Hilbert,
            ] {
                assert_eq!(floyd_warshall(&d, order).unwrap(), reference, "{order} n={n}");
            }
        }
    }

    #[test]
    fn negative_cycle() {
        let d = DenseMatrix::new(2, 2, vec![0.0, 1.0, -2.0, 0.0]).unwrap();
        assert!(matches!(
            floyd_warshall(&d, TraversalOrder::Hilbert),
            Err(KernelError::NegativeCycle(_))
        ));
        assert!(matches!(floyd_warshall_classic(&d), Err(KernelError::NegativeCycle(_))));
        assert!(matches!(
            floyd_warshall(&DenseMatrix::zeros(2, 3), TraversalOrder::Nested),
            Err(KernelError::NotSquare { .. })
        ));
    }

    #[test]
    fn sentinel_never_overflows() {
        assert_eq!(add(INF, 5.0), INF);
        assert_eq!(add(INF, -5.0), INF);
        assert_eq!(add(f64::MAX / 2.0 * 1.5, f64::MAX / 2.0), INF);
    }

    #[test]
    fn trace_lengths_match() {
        let a = floyd_trace(9, TraversalOrder::Nested).unwrap();
        let b = floyd_trace(9, TraversalOrder::Hilbert).unwrap();
        assert_eq!(a.len(), b.len());
        assert_eq!(a.len(), 3 * 9 * (2 * 9 + 8 * 8));
    }
}
