//! Adversarial binary hypothesis testing over finite alphabets.
//!
//! Under `H0` every observation is drawn from a distribution that an adaptive
//! adversary picks out of the convex set `P`; under `H1` out of `Q`. The crate
//! provides:
//!
//! - [`prob`]: validated distributions, KL divergence, `psi_lambda`, log-ratio
//!   tables and vertex polytopes.
//! - [`geometry`]: forward/reverse KL closest pairs between two polytopes, the
//!   support constants, and the fixed-length Hoeffding machinery (hardest
//!   pair, `lambda*`, `s*`), plus the vertex-level inequality checks.
//! - [`detector`]: the two-statistic sequential tests (expectation, stopping
//!   probability and error-probability constrained) and the fixed-length
//!   likelihood-ratio test, as deterministic state machines.
//! - [`adversary`]: static, pair-based, greedy and DP-optimal strategies.
//! - [`oracle`]: exact worst-case values over all adaptive adversaries by
//!   backward induction over the sequence-type lattice, brute-force closest
//!   pairs and the certificate suite.
//! - [`sim`]: a seeded, order-independent Monte Carlo engine and exponent
//!   sweeps.
//!
//! All logarithms are base 2 and every exponent is in bits.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the CLI live in
//! the `advseq` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adversary;
pub mod defaults;
pub mod detector;
mod error;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod prob;
pub mod sim;

pub use error::{Error, Result};

/// Which hypothesis generated the data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hypothesis {
    /// Observations come from `P`.
    H0,
    /// Observations come from `Q`.
    H1,
}

impl Hypothesis {
    pub fn index(self) -> u8 {
        match self {
            Hypothesis::H0 => 0,
            Hypothesis::H1 => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            0 => Some(Hypothesis::H0),
            1 => Some(Hypothesis::H1),
            _ => None,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Hypothesis::H0 => Hypothesis::H1,
            Hypothesis::H1 => Hypothesis::H0,
        }
    }
}
