//! Space-filling curve loops for cache-oblivious nested iteration.
//!
//! - [`curve`]: Z-order and Hilbert encode/decode.
//! - [`lindenmayer`]: recursive and constant-overhead Hilbert loops over
//!   power-of-two squares.
//! - [`nonsquare`]: overlay-grid loops over arbitrary rectangles and
//!   jump-over loops over predicate-defined regions.
//! - [`cache_sim`]: fully associative LRU simulation of access traces.
//! - [`kernels`]: matrix multiplication and Floyd-Warshall parameterised by
//!   traversal order, with trace generators.
//! - [`cli`]: the `sfcurve` command-line front end.

pub mod cache_sim;
pub mod cli;
pub mod curve;
pub mod kernels;
pub mod lindenmayer;
pub mod nonsquare;

pub use curve::{CoordPair, HilbertState, OrderValue};
pub use lindenmayer::{hilbert, Direction, HilbertLoop};
