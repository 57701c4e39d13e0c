use alloc::string::String;
use alloc::vec::Vec;

use super::{empirical_exponent, floored_rate, TrialJob, TrialRunner};
use crate::adversary::sweep_family;
use crate::defaults::SOLVER_TOL;
use crate::detector::{default_horizon, CompiledTest, Regime, TestSpec};
use crate::geometry::{hardest_pair, HoeffdingSolution, ProblemInstance};
use crate::numerics::exp2;
use crate::{Error, Hypothesis, Result};

/// Parameter points visited at every `n` of the ladder.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepSchedule {
    /// Expectation test with these `(alpha0, alpha1)`.
    Alphas(Vec<(f64, f64)>),
    /// Stopping-probability test with these `delta`.
    Deltas(Vec<f64>),
    /// Error-constrained test with `beta = 2^{-rate * n}`.
    BetaRates(Vec<f64>),
    /// Fixed-length test with these floors `r`.
    FixedRates(Vec<f64>),
}

impl SweepSchedule {
    pub fn regime(&self) -> Option<Regime> {
        match self {
            SweepSchedule::Alphas(_) => Some(Regime::Theorem1),
            SweepSchedule::Deltas(_) => Some(Regime::Theorem2),
            SweepSchedule::BetaRates(_) => Some(Regime::Theorem3),
            SweepSchedule::FixedRates(_) => None,
        }
    }

    fn len(&self) -> usize {
        match self {
            SweepSchedule::Alphas(v) => v.len(),
            SweepSchedule::Deltas(v) | SweepSchedule::BetaRates(v) | SweepSchedule::FixedRates(v) => v.len(),
        }
    }

    fn spec(&self, i: usize, n: u32) -> TestSpec {
        match self {
            SweepSchedule::Alphas(v) => TestSpec::Expectation { alpha0: v[i].0, alpha1: v[i].1, n },
            SweepSchedule::Deltas(v) => TestSpec::ProbConstraint { delta: v[i], n },
            SweepSchedule::BetaRates(v) => TestSpec::ErrorConstraint { beta: exp2(-v[i] * n as f64) },
            SweepSchedule::FixedRates(v) => TestSpec::FixedLength { n, r: v[i] },
        }
    }
}

/// One `(n, parameter)` point: worst case over the strategy family.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub spec: TestSpec,
    pub horizon: u32,
    pub trials: u64,
    pub err_h0: f64,
    pub err_h1: f64,
    pub mean_tau_h0: f64,
    pub mean_tau_h1: f64,
    pub worst_h0: String,
    pub worst_h1: String,
    pub truncation_rate: f64,
    pub empirical_e0: f64,
    pub empirical_e1: f64,
}

struct Worst {
    rate: f64,
    raw_rate: f64,
    tau: f64,
    id: String,
    truncations: u64,
}

fn worst_over_family(
    runner: &dyn TrialRunner,
    test: &CompiledTest,
    instance: &ProblemInstance,
    h: Hypothesis,
    trials: u64,
    seed: u64,
    horizon: u32,
) -> Result<Worst> {
    let mut w = Worst { rate: -1.0, raw_rate: 0.0, tau: 0.0, id: String::new(), truncations: 0 };
    for strategy in sweep_family(h) {
        let job = TrialJob { test, instance, strategy: &strategy, master_seed: seed, horizon, trials };
        let tally = runner.run(&job)?;
        let rate = floored_rate(tally.errors, tally.trials);
        if rate > w.rate {
            w.rate = rate;
            w.raw_rate = tally.errors as f64 / tally.trials as f64;
            w.id = strategy.id();
        }
        w.tau = w.tau.max(tally.tau_sum as f64 / tally.trials as f64);
        w.truncations += tally.truncations;
    }
    Ok(w)
}

/// Empirical exponents along an `n` ladder, each point maximized over the
/// family `{optimal_pair_forward, optimal_pair_reverse, greedy_drift}`.
///
/// `horizon` overrides the per-spec default.
#[allow(clippy::too_many_arguments)]
pub fn exponent_sweep(
    runner: &dyn TrialRunner,
    instance: &ProblemInstance,
    schedule: &SweepSchedule,
    n_ladder: &[u32],
    trials: u64,
    seed: u64,
    horizon: Option<u32>,
) -> Result<Vec<SweepRow>> {
    if n_ladder.is_empty() || schedule.len() == 0 {
        return Err(Error::Domain("sweep needs a non-empty ladder and schedule".into()));
    }
    if trials == 0 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let mut solutions: Vec<Option<HoeffdingSolution>> = Vec::new();
    if let SweepSchedule::FixedRates(rs) = schedule {
        for &r in rs {
            solutions.push(Some(hardest_pair(&instance.p_set, &instance.q_set, r, SOLVER_TOL)?));
        }
    }
    let mut rows = Vec::new();
    for &n in n_ladder {
        for i in 0..schedule.len() {
            let spec = schedule.spec(i, n);
            let sol = solutions.get(i).and_then(Option::as_ref);
            let test = CompiledTest::new(&spec, instance, sol)?;
            let h = match horizon {
                Some(h) if h >= 1 => h,
                Some(_) => return Err(Error::Domain("horizon must be >= 1".into())),
                None => default_horizon(&spec, instance)?,
            };
            let w0 = worst_over_family(runner, &test, instance, Hypothesis::H0, trials, seed, h)?;
            let w1 = worst_over_family(runner, &test, instance, Hypothesis::H1, trials, seed, h)?;
            rows.push(SweepRow {
                n,
                spec,
                horizon: h,
                trials,
                err_h0: w0.raw_rate,
                err_h1: w1.raw_rate,
                mean_tau_h0: w0.tau,
                mean_tau_h1: w1.tau,
                truncation_rate: (w0.truncations + w1.truncations) as f64
                    / (2 * sweep_family(Hypothesis::H0).len() as u64 * trials) as f64,
                empirical_e0: empirical_exponent(&spec, w0.rate, w0.tau),
                empirical_e1: empirical_exponent(&spec, w1.rate, w1.tau),
                worst_h0: w0.id,
                worst_h1: w1.id,
            });
        }
    }
    Ok(rows)
}
