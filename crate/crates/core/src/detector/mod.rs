//! Test specifications, the two-statistic sequential state machine, the
//! fixed-length likelihood-ratio test and the achievable exponent regions.

mod region;
mod state;

use alloc::format;

use crate::defaults::HORIZON_FACTOR;
use crate::geometry::{HoeffdingSolution, ProblemInstance};
use crate::numerics::{ceil, log2};
use crate::prob::LogRatioTable;
use crate::{Error, Hypothesis, Result};

pub use region::{exponent_region, Regime, Region};
pub use state::{check_stop, fixed_length_decide, init_state, step, SequentialState, StopCause, Verdict};

/// A test family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestSpec {
    /// Stop when `s0 >= alpha0 * n` or `s1 >= alpha1 * n`.
    Expectation { alpha0: f64, alpha1: f64, n: u32 },
    /// Stop when `s0 >= n (D_fwd - delta)` or `s1 >= n (D_rev - delta)`.
    ProbConstraint { delta: f64, n: u32 },
    /// Stop when either statistic reaches `-log2(beta)`.
    ErrorConstraint { beta: f64 },
    /// Exactly `n` samples, likelihood ratio of the hardest pair against `2^{n (r - s*)}`.
    FixedLength { n: u32, r: f64 },
}

impl TestSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TestSpec::Expectation { .. } => "expectation",
            TestSpec::ProbConstraint { .. } => "prob_constraint",
            TestSpec::ErrorConstraint { .. } => "error_constraint",
            TestSpec::FixedLength { .. } => "fixed_length",
        }
    }

    pub fn is_sequential(&self) -> bool {
        !matches!(self, TestSpec::FixedLength { .. })
    }

    /// Sample-size parameter `n`, if the family has one.
    pub fn n(&self) -> Option<u32> {
        match *self {
            TestSpec::Expectation { n, .. } | TestSpec::ProbConstraint { n, .. } | TestSpec::FixedLength { n, .. } => {
                Some(n)
            }
            TestSpec::ErrorConstraint { .. } => None,
        }
    }

    /// Checks parameter domains that do not depend on an instance.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Domain(format!("{}: {what}", self.kind_name())));
        match *self {
            TestSpec::Expectation { alpha0, alpha1, n } => {
                if !(alpha0 > 0.0 && alpha0.is_finite() && alpha1 > 0.0 && alpha1.is_finite()) {
                    return bad("alpha0 and alpha1 must be positive and finite");
                }
                if n == 0 {
                    return bad("n must be >= 1");
                }
            }
            TestSpec::ProbConstraint { delta, n } => {
                if !(delta > 0.0 && delta.is_finite()) {
                    return bad("delta must be positive");
                }
                if n == 0 {
                    return bad("n must be >= 1");
                }
            }
            TestSpec::ErrorConstraint { beta } => {
                if !(beta > 0.0 && beta < 1.0) {
                    return bad("beta must lie in (0, 1)");
                }
            }
            TestSpec::FixedLength { n, r } => {
                if !(r >= 0.0 && r.is_finite()) {
                    return bad("r must be >= 0");
                }
                if n == 0 {
                    return bad("n must be >= 1");
                }
            }
        }
        Ok(())
    }
}

/// `(theta0, theta1)`: the levels `s0` and `s1` must reach to decide `H0`
/// and `H1` respectively.
pub fn thresholds(spec: &TestSpec, instance: &ProblemInstance) -> Result<(f64, f64)> {
    spec.validate()?;
    match *spec {
        TestSpec::Expectation { alpha0, alpha1, n } => Ok((alpha0 * n as f64, alpha1 * n as f64)),
        TestSpec::ProbConstraint { delta, n } => {
            let (d0, d1) = (instance.d_fwd(), instance.d_rev());
            if delta >= d0 || delta >= d1 {
                return Err(Error::InfeasibleSpec(format!(
                    "delta = {delta} must be below both divergences ({d0}, {d1})"
                )));
            }
            Ok((n as f64 * (d0 - delta), n as f64 * (d1 - delta)))
        }
        TestSpec::ErrorConstraint { beta } => {
            let t = -log2(beta);
            Ok((t, t))
        }
        TestSpec::FixedLength { .. } => Err(Error::Kind("fixed_length has no sequential thresholds".into())),
    }
}

/// Horizon used when none is given.
///
/// Sequential tests get `ceil(20 * m / min(D_fwd, D_rev))` where `m` is the
/// largest of `n` and the two thresholds (`-log2(beta)` for the error
/// constraint). Fixed-length tests stop at `n`.
pub fn default_horizon(spec: &TestSpec, instance: &ProblemInstance) -> Result<u32> {
    if let TestSpec::FixedLength { n, .. } = *spec {
        spec.validate()?;
        return Ok(n);
    }
    let (t0, t1) = thresholds(spec, instance)?;
    let m = t0.max(t1).max(spec.n().unwrap_or(0) as f64);
    let h = ceil(HORIZON_FACTOR * m / instance.d_fwd().min(instance.d_rev()));
    Ok(h.clamp(1.0, u32::MAX as f64) as u32)
}

/// A test reduced to a function of the sample type `(t, counts)`.
///
/// Both statistics are linear in the counts, so evaluating them through
/// [`LogRatioTable::statistic`] makes the verdict depend on the type alone.
/// The simulator and the DP oracle both go through [`CompiledTest::status`].
#[derive(Clone, Debug, PartialEq)]
pub enum CompiledTest {
    Sequential { theta0: f64, theta1: f64, s0: LogRatioTable, s1: LogRatioTable },
    FixedLength { n: u32, threshold: f64, table: LogRatioTable },
}

impl CompiledTest {
    /// Compiles `spec`. Fixed-length specs need the hardest-pair solution for
    /// the same `r`.
    pub fn new(spec: &TestSpec, instance: &ProblemInstance, hoeffding: Option<&HoeffdingSolution>) -> Result<Self> {
        match *spec {
            TestSpec::FixedLength { n, r } => {
                spec.validate()?;
                let sol = hoeffding.ok_or_else(|| Error::Kind("fixed_length needs a hardest-pair solution".into()))?;
                if (sol.r - r).abs() > 1e-12 {
                    return Err(Error::Domain(format!("hardest pair solved for r = {}, spec has r = {r}", sol.r)));
                }
                Ok(CompiledTest::FixedLength {
                    n,
                    threshold: n as f64 * (r - sol.s_star),
                    table: LogRatioTable::new(&sol.p_h, &sol.q_h)?,
                })
            }
            _ => {
                let (theta0, theta1) = thresholds(spec, instance)?;
                Ok(CompiledTest::Sequential {
                    theta0,
                    theta1,
                    s0: instance.s0_table.clone(),
                    s1: instance.s1_table.clone(),
                })
            }
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            CompiledTest::Sequential { s0, .. } => s0.values.len(),
            CompiledTest::FixedLength { table, .. } => table.values.len(),
        }
    }

    /// Verdict after `t` samples with symbol counts `counts`. A sequential
    /// test still running at `t >= horizon` is reported as truncated.
    pub fn status(&self, t: u32, counts: &[u32], horizon: u32) -> Verdict {
        match self {
            CompiledTest::Sequential { theta0, theta1, s0, s1 } => {
                let v = state::sequential_verdict(s0.statistic(counts), s1.statistic(counts), *theta0, *theta1, t);
                if v.cause.is_none() && t >= horizon {
                    Verdict::truncated()
                } else {
                    v
                }
            }
            CompiledTest::FixedLength { n, threshold, table } => {
                if t < *n {
                    Verdict::running()
                } else {
                    state::fixed_length_verdict(table.statistic(counts), *threshold, *n)
                }
            }
        }
    }
}

/// True when `verdict` is an error under hypothesis `h`. Truncation counts
/// as an error when `truncation_is_error` is set.
pub fn is_error(verdict: &Verdict, h: Hypothesis, truncation_is_error: bool) -> bool {
    match verdict.decision {
        Some(d) => d != h,
        None => truncation_is_error && verdict.cause == Some(StopCause::HorizonTruncated),
    }
}
