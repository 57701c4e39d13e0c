use super::*;
use crate::fixtures::{interval, singleton};

fn pair() -> (AdversaryStrategy, AdversaryStrategy) {
    (AdversaryStrategy::optimal_pair_forward(Hypothesis::H0), AdversaryStrategy::optimal_pair_forward(Hypothesis::H1))
}

#[test]
fn unreachable_thresholds_truncate_everything() {
    let inst = interval();
    let spec = TestSpec::Expectation { alpha0: 100.0, alpha1: 100.0, n: 10 };
    let (a, b) = pair();
    let r = run_trials(&spec, &inst, &a, &b, 200, 1, 5).unwrap();
    assert_eq!(r.truncation_rate, 1.0);
    assert_eq!(r.h0.err_rate, 1.0);
    assert_eq!(r.h1.err_rate, 1.0);
    assert_eq!(r.h0.mean_tau, 5.0);
}

#[test]
fn replay_is_bit_identical() {
    let inst = interval();
    let spec = TestSpec::Expectation { alpha0: 0.5, alpha1: 0.5, n: 8 };
    let a = AdversaryStrategy::greedy_drift(Hypothesis::H0);
    let b = AdversaryStrategy::optimal_pair_reverse(Hypothesis::H1);
    let r1 = run_trials(&spec, &inst, &a, &b, 500, 42, 100).unwrap();
    let r2 = run_trials(&spec, &inst, &a, &b, 500, 42, 100).unwrap();
    assert_eq!(r1, r2);
    let r3 = run_trials(&spec, &inst, &a, &b, 500, 43, 100).unwrap();
    assert_ne!(r1.h0.tally, r3.h0.tally);
}

#[test]
fn split_ranges_merge_to_the_whole() {
    let inst = interval();
    let spec = TestSpec::Expectation { alpha0: 0.5, alpha1: 0.5, n: 8 };
    let test = CompiledTest::new(&spec, &inst, None).unwrap();
    let s = AdversaryStrategy::greedy_drift(Hypothesis::H1);
    let job = TrialJob { test: &test, instance: &inst, strategy: &s, master_seed: 9, horizon: 80, trials: 300 };
    let whole = job.run_range(0..300).unwrap();
    let mut parts = job.run_range(200..300).unwrap();
    parts.merge(&job.run_range(0..77).unwrap());
    parts.merge(&job.run_range(77..200).unwrap());
    assert_eq!(whole, parts);
}

#[test]
fn longer_horizon_only_resolves_truncations() {
    let inst = interval();
    let spec = TestSpec::Expectation { alpha0: 0.5, alpha1: 0.5, n: 12 };
    let test = CompiledTest::new(&spec, &inst, None).unwrap();
    let s = AdversaryStrategy::optimal_pair_forward(Hypothesis::H0);
    for trial in 0..300 {
        let (short, _) = run_trial(&test, &inst, &s, 5, trial, 20).unwrap();
        let (long, _) = run_trial(&test, &inst, &s, 5, trial, 200).unwrap();
        if short.is_stopped() {
            assert_eq!(short, long);
        } else {
            assert_eq!(short.cause, Some(StopCause::HorizonTruncated));
        }
    }
}

#[test]
fn singleton_sprt_small_run() {
    let inst = singleton();
    let spec = TestSpec::Expectation { alpha0: 1.0, alpha1: 1.0, n: 6 };
    let (a, b) = pair();
    let r = run_trials(&spec, &inst, &a, &b, 20_000, 3, 200).unwrap();
    assert!(r.h0.err_rate <= 3.0 * 2f64.powi(-6));
    assert!((r.h0.mean_tau - 5.0).abs() < 0.5, "{}", r.h0.mean_tau);
    assert!(r.h0.wilson.0 <= r.h0.err_rate && r.h0.err_rate <= r.h0.wilson.1);
}

#[test]
fn argument_checks() {
    let inst = interval();
    let spec = TestSpec::Expectation { alpha0: 1.0, alpha1: 1.0, n: 4 };
    let (a, b) = pair();
    assert!(run_trials(&spec, &inst, &a, &b, 0, 1, 10).is_err());
    assert!(run_trials(&spec, &inst, &a, &b, 10, 1, 0).is_err());
    assert!(run_trials(&spec, &inst, &b, &a, 10, 1, 10).is_err());
}

#[test]
fn wilson_and_floor() {
    let (lo, hi) = wilson_interval(0, 100);
    assert_eq!(lo, 0.0);
    assert!((hi - 0.036995).abs() < 1e-5, "{hi}");
    let (lo, hi) = wilson_interval(50, 100);
    assert!((lo - 0.403832).abs() < 1e-5 && (hi - 0.596168).abs() < 1e-5);
    assert_eq!(floored_rate(0, 99), 0.01);
    assert_eq!(floored_rate(3, 100), 0.03);
}

#[test]
fn sweep_rows() {
    let inst = singleton();
    let rows =
        exponent_sweep(&SerialRunner, &inst, &SweepSchedule::Alphas(alloc::vec![(1.0, 1.0)]), &[4], 2000, 1, None)
            .unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].empirical_e0.is_finite() && rows[0].empirical_e0 > 0.0);
    assert_eq!(rows[0].horizon, 67);
    let rows =
        exponent_sweep(&SerialRunner, &inst, &SweepSchedule::FixedRates(alloc::vec![0.3]), &[6, 8], 500, 1, None)
            .unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].mean_tau_h0, 8.0);
}
