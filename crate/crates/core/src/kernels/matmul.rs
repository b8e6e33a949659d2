use super::{for_each_pair, DenseMatrix, KernelError, TraversalOrder};
use crate::cache_sim::AccessTrace;

fn dot(b: &[f64], ct: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in b.iter().zip(ct) {
        acc += x * y;
    }
    acc
}

fn check(b: &DenseMatrix, c: &DenseMatrix) -> Result<(), KernelError> {
    if b.cols() != c.rows() {
        return Err(KernelError::DimensionMismatch {
            b_rows: b.rows(),
            b_cols: b.cols(),
            c_rows: c.rows(),
            c_cols: c.cols(),
        });
    }
    Ok(())
}

/// `B * C`, computed as dot products of rows of `B` with rows of `C^T`.
/// Every dot product sums in increasing `k`, so the result does not depend
/// on `order`.
pub fn matmul(b: &DenseMatrix, c: &DenseMatrix, order: TraversalOrder) -> Result<DenseMatrix, KernelError> {
    check(b, c)?;
    let ct = c.transpose();
    let mut a = DenseMatrix::zeros(b.rows(), c.cols());
    for_each_pair(b.rows(), c.cols(), order, |i, j| {
        a[(i, j)] = dot(b.row(i), ct.row(j));
    })?;
    Ok(a)
}

/// Textbook triple loop with the same summation order as [`matmul`].
pub fn matmul_naive(b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
    check(b, c)?;
    let mut a = DenseMatrix::zeros(b.rows(), c.cols());
    for i in 0..b.rows() {
        for j in 0..c.cols() {
            let mut acc = 0.0;
            for k in 0..b.cols() {
                acc += b[(i, k)] * c[(k, j)];
            }
            a[(i, j)] = acc;
        }
    }
    Ok(a)
}

/// Reads of `B` (addresses `[0, nk)`) and `C^T` (addresses `[nk, nk + mk)`)
/// issued by [`matmul`] under `order`, interleaved per `k`.
pub fn matmul_trace(n: usize, k: usize, m: usize, order: TraversalOrder) -> Result<AccessTrace, KernelError> {
    let base = (n * k) as u64;
    let mut addrs = Vec::with_capacity(2 * n * m * k);
    for_each_pair(n, m, order, |i, j| {
        let (bi, cj) = ((i * k) as u64, base + (j * k) as u64);
        for kk in 0..k as u64 {
            addrs.push(bi + kk);
            addrs.push(cj + kk);
        }
    })?;
    Ok(AccessTrace::new(addrs, base + (m * k) as u64).expect("addresses stay in the footprint"))
}
