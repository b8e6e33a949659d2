//! Command-line front end: order-value conversions, curve generation and the
//! cache-miss benchmark.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::cache_sim::{sweep, CacheConfig, CacheError, DEFAULT_BLOCK_SIZE};
use crate::curve::{
    canonic_decode, canonic_order, hilbert_decode, hilbert_encode, z_decode, z_encode, CoordPair, CurveError,
};
use crate::kernels::{floyd_trace, matmul_trace, KernelError, TraversalOrder};
use crate::nonsquare::{iter_fgf, iter_fur, iter_fur_tiled, triangle_query, NonsquareError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Nonsquare(#[from] NonsquareError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sfcurve",
    version,
    about = "Space-filling curve loops and cache-miss benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveName {
    Hilbert,
    Z,
    Canonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Rect,
    Tri,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kernel {
    Matmul,
    Floyd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the order value of cell (i, j).
    Encode {
        #[arg(long, value_enum, default_value = "hilbert")]
        curve: CurveName,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        /// Row length, required by the canonic curve.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Print the cell "i,j" at order value h.
    Decode {
        #[arg(long, value_enum, default_value = "hilbert")]
        curve: CurveName,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Emit the visit order over an n x m grid.
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "rect")]
        shape: Shape,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Split rectangles too elongated for one overlay into tiles.
        #[arg(long)]
        tiled: bool,
    },
    /// Simulated cache misses per traversal order and capacity fraction.
    Bench {
        #[arg(value_enum)]
        kernel: Kernel,
        #[arg(long)]
        n: usize,
        /// Comma-separated: nested, hilbert, blocked:S.
        #[arg(long, value_delimiter = ',', default_value = "nested,hilbert")]
        orders: Vec<TraversalOrder>,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.15,0.2")]
        fractions: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
        block_size: u64,
    },
}

fn row_length(curve: &str, n: Option<u64>) -> Result<u64, CliError> {
    n.ok_or_else(|| CliError::Usage(format!("--n is required for the {curve} curve")))
}

pub fn encode(curve: CurveName, p: CoordPair, n: Option<u64>) -> Result<u64, CliError> {
    Ok(match curve {
        CurveName::Hilbert => hilbert_encode(p),
        CurveName::Z => z_encode(p),
        CurveName::Canonic => canonic_order(p, row_length("canonic", n)?)?,
    })
}

pub fn decode(curve: CurveName, h: u64, n: Option<u64>) -> Result<CoordPair, CliError> {
    Ok(match curve {
        CurveName::Hilbert => hilbert_decode(h),
        CurveName::Z => z_decode(h),
        CurveName::Canonic => canonic_decode(h, row_length("canonic", n)?)?,
    })
}

/// Cells of the requested shape as `(h, i, j)` in visit order.
pub fn generate(n: u32, m: u32, shape: Shape, tiled: bool) -> Result<Vec<(u64, u32, u32)>, CliError> {
    let mut cells = Vec::new();
    match shape {
        Shape::Rect => {
            let mut push = |i, j| cells.push((cells.len() as u64, i, j));
            if tiled {
                iter_fur_tiled(n, m, &mut push)?;
            } else {
                iter_fur(n, m, &mut push)?;
            }
        }
        Shape::Tri => {
            if n != m || !n.is_power_of_two() {
                return Err(CliError::Usage(format!(
                    "--shape tri needs n = m, a power of two (got {n}x{m})"
                )));
            }
            iter_fgf(n.trailing_zeros(), triangle_query, |i, j, h| cells.push((h, i, j)))?;
        }
    }
    Ok(cells)
}

pub fn write_csv(out: &mut impl Write, cells: &[(u64, u32, u32)]) -> std::io::Result<()> {
    writeln!(out, "h,i,j")?;
    for (h, i, j) in cells {
        writeln!(out, "{h},{i},{j}")?;
    }
    Ok(())
}

const SVG_CELL: u32 = 10;

pub fn write_svg(out: &mut impl Write, n: u32, m: u32, cells: &[(u64, u32, u32)]) -> std::io::Result<()> {
    let points: Vec<String> = cells
        .iter()
        .map(|&(_, i, j)| format!("{},{}", j * SVG_CELL + SVG_CELL / 2, i * SVG_CELL + SVG_CELL / 2))
        .collect();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = m * SVG_CELL,
        h = n * SVG_CELL
    )?;
    writeln!(
        out,
        r#"<polyline fill="none" stroke="black" points="{}"/>"#,
        points.join(" ")
    )?;
    writeln!(out, "</svg>")
}

pub fn bench(
    out: &mut impl Write,
    kernel: Kernel,
    n: usize,
    orders: &[TraversalOrder],
    fractions: &[f64],
    block_size: u64,
) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2 (got {n})")));
    }
    let template = CacheConfig::new(1, block_size)?;
    writeln!(out, "order,fraction,misses,accesses")?;
    for &order in orders {
        let trace = match kernel {
            Kernel::Matmul => matmul_trace(n, n, n, order)?,
            Kernel::Floyd => floyd_trace(n, order)?,
        };
        let report = sweep(template, &trace, fractions)?;
        for p in &report.points {
            writeln!(out, "{order},{},{},{}", p.fraction, p.misses, report.accesses)?;
        }
    }
    Ok(())
}

pub fn execute(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Encode { curve, i, j, n } => {
            writeln!(out, "{}", encode(curve, CoordPair::new(i, j), n)?)?;
        }
        Command::Decode { curve, h, n } => {
            let p = decode(curve, h, n)?;
            writeln!(out, "{},{}", p.i, p.j)?;
        }
        Command::Generate {
            n,
            m,
            shape,
            format,
            tiled,
        } => {
            let cells = generate(n, m, shape, tiled)?;
            match format {
                Format::Csv => write_csv(out, &cells)?,
                Format::Svg => write_svg(out, n, m, &cells)?,
            }
        }
        Command::Bench {
            kernel,
            n,
            orders,
            fractions,
            block_size,
        } => {
            bench(out, kernel, n, &orders, &fractions, block_size)?;
        }
    }
    Ok(())
}

/// Parses `std::env::args`, runs, and maps failures to exit codes: 2 for
/// usage errors, 1 for domain errors.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = execute(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
