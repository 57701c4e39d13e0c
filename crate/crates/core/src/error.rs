use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Two objects disagree on the alphabet size.
    Dimension { expected: usize, found: usize },
    /// An argument lies outside its mathematical domain.
    Domain(String),
    /// A probability vector violates the distribution invariants.
    InvalidDistribution(String),
    /// The two sets intersect (closest-pair divergence at or below tolerance).
    SetsOverlap { divergence: f64 },
    /// The operation does not apply to this kind of test.
    Kind(String),
    /// The test specification cannot be realized for this instance.
    InfeasibleSpec(String),
    /// The type lattice would exceed the configured state budget.
    Resource { required: u64, budget: u64 },
    /// A DP policy was queried at a state it does not cover.
    PolicyDomain { t: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "alphabet mismatch: expected {expected} symbols, found {found}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::SetsOverlap { divergence } => {
                write!(f, "sets overlap: closest-pair divergence {divergence:e} is not positive")
            }
            Error::Kind(msg) => write!(f, "wrong test kind: {msg}"),
            Error::InfeasibleSpec(msg) => write!(f, "infeasible test specification: {msg}"),
            Error::Resource { required, budget } => {
                write!(f, "state budget exceeded: type lattice needs {required} states, budget is {budget}")
            }
            Error::PolicyDomain { t } => write!(f, "policy has no entry at time {t}"),
        }
    }
}

impl core::error::Error for Error {}
