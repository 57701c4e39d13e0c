//! File formats and the `advseq` command line over [`advseq_core`].
//!
//! Exit statuses: 0 success, 1 usage, 2 validation (bad problem file,
//! overlapping sets, bad parameters), 3 infeasible test specification,
//! 4 state budget exceeded, 5 a certificate failed.

pub mod cli;
pub mod error;
pub mod problem;
pub mod records;
pub mod runner;

pub use cli::run;
