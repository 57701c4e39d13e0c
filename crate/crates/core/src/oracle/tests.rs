use super::*;
use crate::adversary::AdversaryStrategy;
use crate::detector::{CompiledTest, TestSpec};
use crate::fixtures::{interval, interval_sets, singleton};
use crate::geometry::Direction;
use crate::{Error, Hypothesis};

fn t1(a0: f64, a1: f64, n: u32) -> TestSpec {
    TestSpec::Expectation { alpha0: a0, alpha1: a1, n }
}

#[test]
fn theorem1_error_and_moment_examples() {
    let inst = interval();
    let spec = t1(0.5, 0.5, 8);
    let opts = DpOptions::default();
    let r = dp_worst_case(&spec, &inst, Hypothesis::H0, Objective::ErrorProb, 40, &opts).unwrap();
    assert!(r.value <= 0.0625 + 1e-9, "{}", r.value);
    assert!(r.value > 0.0);
    let m = dp_worst_case(&spec, &inst, Hypothesis::H0, Objective::ExpMomentS1, 40, &opts).unwrap();
    assert!(m.value <= 1.0 + 1e-9, "{}", m.value);
}

#[test]
fn truncation_rules_bracket() {
    let inst = interval();
    let spec = t1(0.5, 0.5, 12);
    let lo = dp_worst_case(&spec, &inst, Hypothesis::H0, Objective::ErrorProb, 30, &DpOptions::default()).unwrap();
    let hi_opts = DpOptions { truncation: TruncationRule::CountAsError, ..DpOptions::default() };
    let hi = dp_worst_case(&spec, &inst, Hypothesis::H0, Objective::ErrorProb, 30, &hi_opts).unwrap();
    assert!(lo.value <= hi.value);
    assert!(hi.value <= lo.value + 1.0);
    assert!(lo.truncated_mass > 0.0);
}

#[test]
fn tau_bound_examples() {
    let tb = dp_expected_tau_bound_check(&t1(1.0, 1.0, 6), &singleton(), Hypothesis::H0, 60).unwrap();
    assert!((tb.bound - 8.0 / 1.2).abs() < 1e-9);
    assert!(tb.worst_tau <= tb.bound);
    assert!(tb.worst_tau >= 1.0);
    let tb = dp_expected_tau_bound_check(&t1(0.5, 0.5, 8), &interval(), Hypothesis::H0, 60).unwrap();
    assert!(tb.slack >= -1e-6);
    // a threshold far beyond the horizon saturates at the horizon
    let tb = dp_expected_tau_bound_check(&t1(50.0, 50.0, 10), &singleton(), Hypothesis::H0, 20).unwrap();
    assert_eq!(tb.worst_tau, 20.0);
}

#[test]
fn stop_prob_examples() {
    let inst = interval();
    let (worst, azuma) =
        dp_stop_prob_exceeds_n(&TestSpec::ProbConstraint { delta: 0.1, n: 30 }, &inst, Hypothesis::H0).unwrap();
    assert!((azuma - (-30.0f64 * 0.01 / 8.0).exp()).abs() < 1e-12);
    assert!((azuma - 0.9632).abs() < 1e-4);
    assert!(worst <= azuma + 1e-9);
    // delta just under the divergence: thresholds near zero, stops at once
    let d = inst.d_fwd().min(inst.d_rev());
    let (worst, _) =
        dp_stop_prob_exceeds_n(&TestSpec::ProbConstraint { delta: d - 1e-6, n: 30 }, &inst, Hypothesis::H0).unwrap();
    assert!(worst < 1e-6, "{worst}");
    assert!(matches!(dp_stop_prob_exceeds_n(&t1(1.0, 1.0, 3), &inst, Hypothesis::H0), Err(Error::Kind(_))));
}

#[test]
fn submartingale_examples() {
    let inst = interval();
    assert!((check_submartingale_step(&inst, Hypothesis::H0, 0).unwrap() - 0.361471).abs() < 1e-5);
    assert!(check_submartingale_step(&inst, Hypothesis::H0, 1).unwrap().abs() < 1e-9);
    let s = singleton();
    assert!(check_submartingale_step(&s, Hypothesis::H0, 0).unwrap().abs() < 1e-12);
    assert!(check_submartingale_step(&s, Hypothesis::H1, 0).unwrap().abs() < 1e-12);
    assert!(check_submartingale_step(&s, Hypothesis::H1, 1).is_err());
}

#[test]
fn brute_force_examples() {
    let (p, q) = interval_sets();
    let g = brute_force_closest_pair(&p, &q, Direction::Forward, 1e-3).unwrap();
    assert!((g.divergence - 0.265148).abs() < 1e-3);
    let s = singleton();
    let g = brute_force_closest_pair(&s.p_set, &s.q_set, Direction::Forward, 0.1).unwrap();
    assert!((g.divergence - 1.2).abs() < 1e-12);
    assert!(matches!(
        brute_force_closest_pair_with_budget(&p, &q, Direction::Forward, 1e-3, 1000),
        Err(Error::Resource { .. })
    ));
}

#[test]
fn budget_and_policy_domain() {
    let inst = interval();
    let opts = DpOptions { state_budget: 100, ..DpOptions::default() };
    let e = dp_worst_case(&t1(1.0, 1.0, 4), &inst, Hypothesis::H0, Objective::ErrorProb, 60, &opts);
    assert_eq!(e, Err(Error::Resource { required: 1891, budget: 100 }));

    let r = dp_worst_case(&t1(1.0, 1.0, 4), &inst, Hypothesis::H0, Objective::ErrorProb, 10, &DpOptions::default())
        .unwrap();
    assert!(matches!(r.policy.choice(10, &[5, 5]), Err(Error::PolicyDomain { t: 10 })));
    assert!(r.policy.choice(0, &[0, 0]).unwrap().is_some());
}

#[test]
fn policy_replay_reproduces_value() {
    let inst = interval();
    let spec = t1(0.5, 0.25, 8);
    let test = CompiledTest::new(&spec, &inst, None).unwrap();
    let opts = DpOptions::default();
    for obj in [Objective::ErrorProb, Objective::ExpectedTau, Objective::ExpMomentS0] {
        let r = dp_worst_case_compiled(&test, &inst, Hypothesis::H1, obj, 30, &opts).unwrap();
        let strat = AdversaryStrategy::dp_policy(r.policy.clone());
        let v = dp_evaluate_strategy(&test, &inst, &strat, obj, 30, &opts).unwrap();
        assert!((v - r.value).abs() < 1e-12, "{obj:?}: {v} vs {}", r.value);
        // any static strategy does no better
        for i in 0..2 {
            let s = AdversaryStrategy::static_vertex(Hypothesis::H1, i, &inst).unwrap();
            assert!(dp_evaluate_strategy(&test, &inst, &s, obj, 30, &opts).unwrap() <= r.value + 1e-12);
        }
    }
}

#[test]
fn certify_interval_fixture_passes() {
    let report = certify(&interval(), &CertifyConfig::default()).unwrap();
    for c in &report.certificates {
        assert!(c.pass, "{c:?}");
    }
    assert!(report.certificates.len() > 50);
}
