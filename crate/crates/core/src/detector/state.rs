use alloc::format;
use alloc::vec;

use super::{thresholds, TestSpec};
use crate::geometry::{HoeffdingSolution, ProblemInstance};
use crate::prob::LogRatioTable;
use crate::{Error, Hypothesis, Result};

/// Running statistics after `t` observations.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SequentialState {
    pub t: u32,
    /// `sum log2(p0*(x_i) / q0*(x_i))`.
    pub s0: f64,
    /// `sum log2(q1*(x_i) / p1*(x_i))`.
    pub s1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopCause {
    S0Crossed,
    S1Crossed,
    BothCrossed,
    HorizonTruncated,
    FixedLength,
}

impl StopCause {
    pub fn name(self) -> &'static str {
        match self {
            StopCause::S0Crossed => "s0_crossed",
            StopCause::S1Crossed => "s1_crossed",
            StopCause::BothCrossed => "both_crossed",
            StopCause::HorizonTruncated => "horizon_truncated",
            StopCause::FixedLength => "fixed_length",
        }
    }
}

/// Outcome of a test. `decision` is set exactly when `stopped_at` is; a
/// truncated run has cause [`StopCause::HorizonTruncated`] and no decision;
/// a run still in progress has no cause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Option<Hypothesis>,
    pub stopped_at: Option<u32>,
    pub cause: Option<StopCause>,
}

impl Verdict {
    pub fn running() -> Self {
        Verdict { decision: None, stopped_at: None, cause: None }
    }

    pub fn truncated() -> Self {
        Verdict { decision: None, stopped_at: None, cause: Some(StopCause::HorizonTruncated) }
    }

    fn decided(decision: Hypothesis, t: u32, cause: StopCause) -> Self {
        Verdict { decision: Some(decision), stopped_at: Some(t), cause: Some(cause) }
    }

    pub fn is_stopped(&self) -> bool {
        self.decision.is_some()
    }

    /// Stopped or truncated.
    pub fn is_final(&self) -> bool {
        self.cause.is_some()
    }
}

pub fn init_state() -> SequentialState {
    SequentialState::default()
}

/// Consumes one symbol.
pub fn step(state: SequentialState, symbol: usize, instance: &ProblemInstance) -> Result<SequentialState> {
    let k = instance.alphabet_size();
    if symbol >= k {
        return Err(Error::Domain(format!("symbol {symbol} outside alphabet of size {k}")));
    }
    Ok(SequentialState {
        t: state.t + 1,
        s0: state.s0 + instance.s0_table.values[symbol],
        s1: state.s1 + instance.s1_table.values[symbol],
    })
}

impl SequentialState {
    pub fn advance(&mut self, symbol: usize, instance: &ProblemInstance) -> Result<()> {
        *self = step(*self, symbol, instance)?;
        Ok(())
    }
}

pub(crate) fn sequential_verdict(s0: f64, s1: f64, theta0: f64, theta1: f64, t: u32) -> Verdict {
    match (s0 >= theta0, s1 >= theta1) {
        (false, false) => Verdict::running(),
        (true, false) => Verdict::decided(Hypothesis::H0, t, StopCause::S0Crossed),
        (false, true) => Verdict::decided(Hypothesis::H1, t, StopCause::S1Crossed),
        (true, true) => Verdict::decided(Hypothesis::H1, t, StopCause::BothCrossed),
    }
}

pub(crate) fn fixed_length_verdict(statistic: f64, threshold: f64, n: u32) -> Verdict {
    let d = if statistic > threshold { Hypothesis::H0 } else { Hypothesis::H1 };
    Verdict::decided(d, n, StopCause::FixedLength)
}

/// Evaluates the stopping and decision rules of a sequential spec on `state`.
pub fn check_stop(state: &SequentialState, spec: &TestSpec, instance: &ProblemInstance) -> Result<Verdict> {
    let (theta0, theta1) = thresholds(spec, instance)?;
    Ok(sequential_verdict(state.s0, state.s1, theta0, theta1, state.t))
}

/// Fixed-length test on exactly `n` observations: decide `H0` iff
/// `sum log2(p_H(x_i) / q_H(x_i)) > n (r - s*)`.
pub fn fixed_length_decide(solution: &HoeffdingSolution, n: u32, observations: &[usize]) -> Result<Verdict> {
    if observations.len() != n as usize {
        return Err(Error::Domain(format!("fixed-length test needs {n} observations, got {}", observations.len())));
    }
    let table = LogRatioTable::new(&solution.p_h, &solution.q_h)?;
    let k = table.values.len();
    let mut counts = vec![0u32; k];
    for &x in observations {
        if x >= k {
            return Err(Error::Domain(format!("symbol {x} outside alphabet of size {k}")));
        }
        counts[x] += 1;
    }
    let threshold = n as f64 * (solution.r - solution.s_star);
    Ok(fixed_length_verdict(table.statistic(&counts), threshold, n))
}
