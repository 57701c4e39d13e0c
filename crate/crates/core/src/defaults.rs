//! Every tolerance, budget and iteration cap used by the library.
//!
//! | constant | value | used by |
//! |---|---|---|
//! | [`MIN_MASS`] | 1e-9 | smallest admissible probability mass |
//! | [`SUM_TOL`] | 1e-9 | allowed deviation of a mass vector's sum from 1 |
//! | [`SOLVER_TOL`] | 1e-10 | closest-pair / hardest-pair tolerance, overlap threshold |
//! | [`OUTER_ITER_CAP`] | 10 000 | alternating / coordinate descent sweeps |
//! | [`INNER_ITER_CAP`] | 50 | Frank-Wolfe iterations per inner solve |
//! | [`LINE_SEARCH_ITERS`] | 64 | bisection (or golden-section) steps per line search |
//! | [`LAMBDA_EPS`] | 1e-6 | clamp of the `lambda` search interval |
//! | [`LAMBDA_SEARCH_ITERS`] | 80 | golden-section steps for `lambda*` |
//! | [`STATE_BUDGET`] | 5 000 000 | type-lattice states allowed in one DP |
//! | [`HORIZON_FACTOR`] | 20 | default horizon multiplier |
//! | [`WILSON_Z`] | 1.959964 | two-sided 95% normal quantile |
//! | [`CERT_SLACK`] | 1e-9 | allowance on probability certificates |
//! | [`TAU_SLACK`] | 1e-6 | allowance on expected-stopping-time certificates |
//! | [`HOEFFDING_SLACK`] | 1e-6 | allowance on the fixed-length vertex inequality |
//! | [`RNG_NAME`] | `ChaCha8` | per-trial generator |

pub const MIN_MASS: f64 = 1e-9;
pub const SUM_TOL: f64 = 1e-9;
pub const SOLVER_TOL: f64 = 1e-10;
pub const OUTER_ITER_CAP: usize = 10_000;
pub const INNER_ITER_CAP: usize = 50;
pub const LINE_SEARCH_ITERS: usize = 64;
pub const LAMBDA_EPS: f64 = 1e-6;
pub const LAMBDA_SEARCH_ITERS: usize = 80;
pub const STATE_BUDGET: u64 = 5_000_000;
pub const HORIZON_FACTOR: f64 = 20.0;
pub const WILSON_Z: f64 = 1.959_963_984_540_054;
pub const CERT_SLACK: f64 = 1e-9;
pub const TAU_SLACK: f64 = 1e-6;
pub const HOEFFDING_SLACK: f64 = 1e-6;
/// Name of the per-trial random generator (ChaCha with 8 rounds, seeded from
/// a SplitMix64 hash of `(master_seed, trial, hypothesis)`).
pub const RNG_NAME: &str = "ChaCha8";
