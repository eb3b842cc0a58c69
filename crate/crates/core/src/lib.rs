//! Recursive certificates for the existence of a heavy column (a column with
//! at least as many ones as zeros) in a binary matrix, and the machinery to
//! check their guarantees exhaustively on small matrices.
//!
//! - [`matrix`]: the matrix type, text format and the direct heavy-column scan.
//! - [`structure`]: reductions, branch sets, conjugate/unpaired rows and
//!   sequential reduction.
//! - [`algorithms`]: the two recursive certificates, plain and memoized.
//! - [`verification`]: exhaustive and seeded-random scans over row-subset
//!   universes.
//! - [`profiler`]: call-count growth tables and baseline comparison.
//! - [`report`]: the JSON report emitted for single-matrix runs.

pub mod algorithms;
pub mod matrix;
pub mod profiler;
pub mod report;
pub mod structure;
pub mod verification;

pub use algorithms::{
    run_a1, run_a2, run_memoized, AlgoConfig, Algorithm, ColumnOrder, LineTag, RecursionStats,
    Verdict,
};
pub use matrix::{parse_matrix, BinaryMatrix, MatrixError, MatrixProperties};
