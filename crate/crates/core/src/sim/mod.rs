//! Seeded Monte Carlo runs of a test against adversary strategies.
//!
//! Trials are independent: trial `i` under hypothesis `h` draws from its own
//! generator (see [`rng`]), and per-trial outcomes are folded into integer
//! tallies whose merge is exact. Results therefore do not depend on how
//! trials are split across workers.

pub mod rng;
mod sweep;

use alloc::string::String;
use alloc::vec;
use core::ops::Range;

use crate::adversary::AdversaryStrategy;
use crate::defaults::WILSON_Z;
use crate::detector::{is_error, CompiledTest, StopCause, TestSpec, Verdict};
use crate::geometry::ProblemInstance;
use crate::numerics::{log2, sqrt};
use crate::{Error, Hypothesis, Result};

pub use sweep::{exponent_sweep, SweepRow, SweepSchedule};

/// Integer summaries of a batch of trials under one hypothesis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialTally {
    pub trials: u64,
    /// Wrong decisions plus truncated runs.
    pub errors: u64,
    pub truncations: u64,
    pub tau_sum: u64,
    pub tau_sq_sum: u128,
}

impl TrialTally {
    pub fn merge(&mut self, other: &TrialTally) {
        self.trials += other.trials;
        self.errors += other.errors;
        self.truncations += other.truncations;
        self.tau_sum += other.tau_sum;
        self.tau_sq_sum += other.tau_sq_sum;
    }

    fn record(&mut self, verdict: &Verdict, tau: u32, h: Hypothesis) {
        self.trials += 1;
        self.errors += u64::from(is_error(verdict, h, true));
        self.truncations += u64::from(verdict.cause == Some(StopCause::HorizonTruncated));
        self.tau_sum += tau as u64;
        self.tau_sq_sum += (tau as u128) * (tau as u128);
    }
}

/// One trial: returns the verdict and `tau ^ horizon`.
pub fn run_trial(
    test: &CompiledTest,
    instance: &ProblemInstance,
    strategy: &AdversaryStrategy,
    master_seed: u64,
    trial: u64,
    horizon: u32,
) -> Result<(Verdict, u32)> {
    let mut rng = rng::TrialRng::new(master_seed, trial, strategy.hypothesis);
    let mut counts = vec![0u32; instance.alphabet_size()];
    let mut t = 0u32;
    loop {
        let v = test.status(t, &counts, horizon);
        if v.is_final() {
            return Ok((v, t));
        }
        let d = strategy.choose_by_type(t, &counts, instance)?;
        counts[d.sample_index(rng.uniform())] += 1;
        t += 1;
    }
}

/// The work a [`TrialRunner`] is asked to do.
#[derive(Clone, Copy, Debug)]
pub struct TrialJob<'a> {
    pub test: &'a CompiledTest,
    pub instance: &'a ProblemInstance,
    pub strategy: &'a AdversaryStrategy,
    pub master_seed: u64,
    pub horizon: u32,
    pub trials: u64,
}

impl TrialJob<'_> {
    /// Runs the trials with indices in `range`.
    pub fn run_range(&self, range: Range<u64>) -> Result<TrialTally> {
        let mut tally = TrialTally::default();
        for i in range {
            let (v, tau) = run_trial(self.test, self.instance, self.strategy, self.master_seed, i, self.horizon)?;
            tally.record(&v, tau, self.strategy.hypothesis);
        }
        Ok(tally)
    }
}

/// Executes a [`TrialJob`]; implementations may split the trial range.
pub trait TrialRunner {
    fn run(&self, job: &TrialJob<'_>) -> Result<TrialTally>;
}

/// Runs every trial on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct SerialRunner;

impl TrialRunner for SerialRunner {
    fn run(&self, job: &TrialJob<'_>) -> Result<TrialTally> {
        job.run_range(0..job.trials)
    }
}

/// Wilson score interval for `errors` out of `trials` at the 95% level.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Error rate with zero counts replaced by `1 / (trials + 1)`.
pub fn floored_rate(errors: u64, trials: u64) -> f64 {
    if errors == 0 {
        1.0 / (trials as f64 + 1.0)
    } else {
        errors as f64 / trials as f64
    }
}

/// Empirical exponent (bits) from a worst error rate (already floored) and
/// a worst mean stopping time.
///
/// Expectation-constrained tests divide by the mean stopping time; tests
/// with a deadline `n` (stopping-probability and fixed-length) divide by
/// `n`; error-constrained tests use `-log2(beta) / mean tau`.
pub fn empirical_exponent(spec: &TestSpec, worst_rate: f64, worst_mean_tau: f64) -> f64 {
    match *spec {
        TestSpec::Expectation { .. } => -log2(worst_rate) / worst_mean_tau,
        TestSpec::ProbConstraint { n, .. } | TestSpec::FixedLength { n, .. } => -log2(worst_rate) / n as f64,
        TestSpec::ErrorConstraint { beta } => -log2(beta) / worst_mean_tau,
    }
}

/// Summary of one hypothesis's trials.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisStats {
    pub strategy: String,
    pub tally: TrialTally,
    pub err_rate: f64,
    pub wilson: (f64, f64),
    pub mean_tau: f64,
    pub se_tau: f64,
}

impl HypothesisStats {
    pub fn new(strategy: String, tally: TrialTally) -> Self {
        let n = tally.trials as f64;
        let mean = tally.tau_sum as f64 / n;
        let var = (tally.tau_sq_sum as f64 / n - mean * mean).max(0.0);
        let se = if tally.trials > 1 { sqrt(var * n / (n - 1.0) / n) } else { 0.0 };
        HypothesisStats {
            strategy,
            err_rate: tally.errors as f64 / n,
            wilson: wilson_interval(tally.errors, tally.trials),
            mean_tau: mean,
            se_tau: se,
            tally,
        }
    }

    pub fn floored_rate(&self) -> f64 {
        floored_rate(self.tally.errors, self.tally.trials)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationResult {
    pub spec: TestSpec,
    pub horizon: u32,
    pub master_seed: u64,
    pub trials: u64,
    pub h0: HypothesisStats,
    pub h1: HypothesisStats,
    /// Fraction of all runs (both hypotheses) cut off at the horizon.
    pub truncation_rate: f64,
    /// Type-I exponent estimate (errors under `H0`).
    pub empirical_e0: f64,
    /// Type-II exponent estimate (errors under `H1`).
    pub empirical_e1: f64,
}

impl SimulationResult {
    pub fn from_tallies(
        spec: TestSpec,
        horizon: u32,
        master_seed: u64,
        h0: HypothesisStats,
        h1: HypothesisStats,
    ) -> Self {
        let trials = h0.tally.trials;
        let truncation_rate =
            (h0.tally.truncations + h1.tally.truncations) as f64 / (h0.tally.trials + h1.tally.trials) as f64;
        SimulationResult {
            empirical_e0: empirical_exponent(&spec, h0.floored_rate(), h0.mean_tau),
            empirical_e1: empirical_exponent(&spec, h1.floored_rate(), h1.mean_tau),
            spec,
            horizon,
            master_seed,
            trials,
            h0,
            h1,
            truncation_rate,
        }
    }
}

/// Runs `trials` trials under each hypothesis and summarizes them.
#[allow(clippy::too_many_arguments)]
pub fn run_trials_with(
    runner: &dyn TrialRunner,
    spec: &TestSpec,
    test: &CompiledTest,
    instance: &ProblemInstance,
    strategy_h0: &AdversaryStrategy,
    strategy_h1: &AdversaryStrategy,
    trials: u64,
    master_seed: u64,
    horizon: u32,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    if horizon == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    if strategy_h0.hypothesis != Hypothesis::H0 || strategy_h1.hypothesis != Hypothesis::H1 {
        return Err(Error::Domain("strategies must be given for H0 then H1".into()));
    }
    let mut stats = [None, None];
    for (slot, strategy) in stats.iter_mut().zip([strategy_h0, strategy_h1]) {
        let job = TrialJob { test, instance, strategy, master_seed, horizon, trials };
        *slot = Some(HypothesisStats::new(strategy.id(), runner.run(&job)?));
    }
    let [h0, h1] = stats.map(Option::unwrap);
    Ok(SimulationResult::from_tallies(*spec, horizon, master_seed, h0, h1))
}

/// Serial [`run_trials_with`] that compiles `spec` itself (fixed-length specs
/// get their hardest pair solved here).
pub fn run_trials(
    spec: &TestSpec,
    instance: &ProblemInstance,
    strategy_h0: &AdversaryStrategy,
    strategy_h1: &AdversaryStrategy,
    trials: u64,
    master_seed: u64,
    horizon: u32,
) -> Result<SimulationResult> {
    let test = crate::oracle::compile_spec(spec, instance)?;
    run_trials_with(&SerialRunner, spec, &test, instance, strategy_h0, strategy_h1, trials, master_seed, horizon)
}

#[cfg(test)]
mod tests;
