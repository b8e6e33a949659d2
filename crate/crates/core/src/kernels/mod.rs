//! Matrix multiplication and Floyd-Warshall under selectable pair orders,
//! with address-trace generators for the cache simulator.

mod floyd;
mod matmul;

pub use floyd::{floyd_trace, floyd_warshall, floyd_warshall_classic, INF};
pub use matmul::{matmul, matmul_naive, matmul_trace};

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use thiserror::Error;

use crate::nonsquare::{iter_fur, iter_fur_tiled, NonsquareError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("cannot multiply {b_rows}x{b_cols} by {c_rows}x{c_cols}")]
    DimensionMismatch {
        b_rows: usize,
        b_cols: usize,
        c_rows: usize,
        c_cols: usize,
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {} values, got {len}", rows * cols)]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("negative cycle through vertex {0}")]
    NegativeCycle(usize),
    #[error("block size {s} not in 1..={n}")]
    BlockSize { s: usize, n: usize },
    #[error("unknown traversal order {0:?} (nested, hilbert, blocked:S)")]
    UnknownOrder(String),
    #[error("dimension {0} exceeds the curve range")]
    TooLarge(usize),
    #[error("matrix csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Curve(#[from] NonsquareError),
}

/// Row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, KernelError> {
        if values.len() != rows * cols {
            return Err(KernelError::BadShape {
                rows,
                cols,
                len: values.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for v in 0..n {
            m[(v, v)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let values = (0..rows * cols).map(|x| f(x / cols, x % cols)).collect();
        DenseMatrix { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// One row per line, comma separated. `inf` marks the distance sentinel.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, KernelError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut values = Vec::new();
        let (mut rows, mut cols) = (0, 0);
        for record in rdr.records() {
            let record = record.map_err(|e| KernelError::Csv(e.to_string()))?;
            if rows == 0 {
                cols = record.len();
            }
            for field in &record {
                let v = match field {
                    "inf" | "INF" | "Inf" => INF,
                    _ => field
                        .parse()
                        .map_err(|_| KernelError::Csv(format!("row {}: bad number {field:?}", rows + 1)))?,
                };
                values.push(v);
            }
            rows += 1;
        }
        DenseMatrix::new(rows, cols, values)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .map(|&v| if v == INF { "inf".to_string() } else { v.to_string() })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.values[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.values[i * self.cols + j]
    }
}

/// Order in which the `(i, j)` pairs of an `n x m` result are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraversalOrder {
    /// `i` outer, `j` inner.
    Nested,
    /// Row bands of `s`: `I` steps by `s`, then `j`, then `i` within the band.
    Blocked(usize),
    /// Unit-step Hilbert loop over the rectangle, split into tiles when its
    /// aspect ratio is too extreme for a single overlay.
    Hilbert,
}

impl fmt::Display for TraversalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraversalOrder::Nested => f.write_str("nested"),
            TraversalOrder::Blocked(s) => write!(f, "blocked:{s}"),
            TraversalOrder::Hilbert => f.write_str("hilbert"),
        }
    }
}

impl FromStr for TraversalOrder {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "nested" => Ok(TraversalOrder::Nested),
            "hilbert" => Ok(TraversalOrder::Hilbert),
            _ => lower
                .strip_prefix("blocked:")
                .and_then(|n| n.parse().ok())
                .map(TraversalOrder::Blocked)
                .ok_or_else(|| KernelError::UnknownOrder(s.to_string())),
        }
    }
}

/// Calls `visit(i, j)` once for every pair of `[0, n) x [0, m)`.
pub fn for_each_pair<F>(n: usize, m: usize, order: TraversalOrder, mut visit: F) -> Result<(), KernelError>
where
    F: FnMut(usize, usize),
{
    if n == 0 || m == 0 {
        return Ok(());
    }
    match order {
        TraversalOrder::Nested => {
            for i in 0..n {
                for j in 0..m {
                    visit(i, j);
                }
            }
        }
        TraversalOrder::Blocked(s) => {
            if s == 0 || s > n {
                return Err(KernelError::BlockSize { s, n });
            }
            for band in (0..n).step_by(s) {
                for j in 0..m {
                    for i in band..(band + s).min(n) {
                        visit(i, j);
                    }
                }
            }
        }
        TraversalOrder::Hilbert => {
            let (n32, m32) = (dim(n)?, dim(m)?);
            let mut f = |i: u32, j: u32| visit(i as usize, j as usize);
            match iter_fur(n32, m32, &mut f) {
                Err(NonsquareError::AspectRatio { .. }) => iter_fur_tiled(n32, m32, f)?,
                other => other?,
            }
        }
    }
    Ok(())
}

/// The pairs of [`for_each_pair`] collected in visit order.
pub fn pair_order(n: usize, m: usize, order: TraversalOrder) -> Result<Vec<(usize, usize)>, KernelError> {
    let mut out = Vec::with_capacity(n * m);
    for_each_pair(n, m, order, |i, j| out.push((i, j)))?;
    Ok(out)
}

fn dim(x: usize) -> Result<u32, KernelError> {
    u32::try_from(x).map_err(|_| KernelError::TooLarge(x))
}
