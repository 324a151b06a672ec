//! Exact computation of the grid-homology Upsilon invariant of knots.
//!
//! The pipeline runs grid diagram -> quotient complex over `F[U]` ->
//! filtered cancellation -> t-modification at rational `t` -> graded
//! elimination over the valuation ring -> the piecewise-linear function
//! `Υ(t)` on `[0, 2]`. Everything is exact; no floating point is involved.
//!
//! ```
//! use gridups::{grid::parse_grid, pipeline, upsilon::tau};
//!
//! let g = parse_grid("O: 1 2 3 4 0\nX: 4 0 1 2 3\n").unwrap();
//! let f = pipeline::upsilon(&g, pipeline::Options::default()).unwrap();
//! assert_eq!(tau(&f), -1);
//! ```

pub mod chain;
pub mod checks;
pub mod dataset;
pub mod error;
pub mod grid;
pub mod io;
pub mod limits;
pub mod oracle;
pub mod pipeline;
pub mod rational;
pub mod tmod;
pub mod upsilon;

pub use error::{Error, ErrorKind};
