//! The certificate suite: every inequality the tests rely on, evaluated
//! exactly on one instance.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::brute::{brute_force_closest_pair, check_submartingale_step};
use super::dp::{dp_expected_tau_bound_check, dp_stop_prob_exceeds_n, dp_worst_case_compiled, DpOptions, Objective};
use crate::defaults::{CERT_SLACK, HOEFFDING_SLACK, SOLVER_TOL, TAU_SLACK};
use crate::detector::{CompiledTest, TestSpec};
use crate::geometry::{
    check_hoeffding_vertex_inequality, check_likelihood_ratio_bound, check_pythagorean, check_pythagorean_reverse,
    hardest_pair, Direction, ProblemInstance,
};
use crate::numerics::exp2;
use crate::{Error, Hypothesis, Result};

/// `value <= bound + allowance`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub group: &'static str,
    pub params: String,
    pub value: f64,
    pub bound: f64,
    pub allowance: f64,
    pub pass: bool,
}

impl Certificate {
    pub fn new(group: &'static str, params: String, value: f64, bound: f64, allowance: f64) -> Self {
        Certificate { group, params, value, bound, allowance, pass: value <= bound + allowance }
    }

    pub fn slack(&self) -> f64 {
        self.bound - self.value
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyConfig {
    /// Values used for both `alpha0` and `alpha1` of the expectation test.
    pub alphas: Vec<f64>,
    pub ns: Vec<u32>,
    pub horizon: u32,
    pub deltas: Vec<f64>,
    pub prob_ns: Vec<u32>,
    /// Fixed-length floors as fractions of `D(p0*||q0*)`.
    pub fixed_r_fractions: Vec<f64>,
    pub fixed_ns: Vec<u32>,
    /// Grid spacing of the brute-force closest-pair cross-check.
    pub grid_step: f64,
    pub dp: DpOptions,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            alphas: vec![0.25, 0.5],
            ns: vec![4, 8, 12],
            horizon: 60,
            deltas: vec![0.05, 0.1],
            prob_ns: vec![20, 30],
            fixed_r_fractions: vec![0.25, 0.5],
            fixed_ns: vec![6, 10],
            grid_step: 1e-2,
            dp: DpOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CertifyReport {
    pub certificates: Vec<Certificate>,
    /// Checks that were not run, with the reason.
    pub skipped: Vec<String>,
}

impl CertifyReport {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }
}

fn vertex_suite(instance: &ProblemInstance, out: &mut Vec<Certificate>) -> Result<()> {
    for (i, p) in instance.p_set.vertices().iter().enumerate() {
        let s = check_pythagorean(instance, p)?;
        out.push(Certificate::new("pythagorean", format!("P vertex {i}"), -s, 0.0, CERT_SLACK));
        let s = check_submartingale_step(instance, Hypothesis::H0, i)?;
        out.push(Certificate::new("submartingale_step", format!("P vertex {i}"), -s, 0.0, CERT_SLACK));
        let e = check_likelihood_ratio_bound(instance, Hypothesis::H0, i)?;
        out.push(Certificate::new("likelihood_ratio", format!("P vertex {i}"), e, 1.0, CERT_SLACK));
    }
    for (i, q) in instance.q_set.vertices().iter().enumerate() {
        let s = check_pythagorean_reverse(instance, q)?;
        out.push(Certificate::new("pythagorean_reverse", format!("Q vertex {i}"), -s, 0.0, CERT_SLACK));
        let s = check_submartingale_step(instance, Hypothesis::H1, i)?;
        out.push(Certificate::new("submartingale_step", format!("Q vertex {i}"), -s, 0.0, CERT_SLACK));
        let e = check_likelihood_ratio_bound(instance, Hypothesis::H1, i)?;
        out.push(Certificate::new("likelihood_ratio", format!("Q vertex {i}"), e, 1.0, CERT_SLACK));
    }
    let s = check_pythagorean(instance, instance.p0())?;
    out.push(Certificate::new("pythagorean_equality", "p0*".into(), s.abs(), 0.0, CERT_SLACK));
    let s = check_pythagorean_reverse(instance, instance.q1())?;
    out.push(Certificate::new("pythagorean_equality", "q1*".into(), s.abs(), 0.0, CERT_SLACK));
    Ok(())
}

fn expectation_suite(instance: &ProblemInstance, cfg: &CertifyConfig, out: &mut Vec<Certificate>) -> Result<()> {
    let h = cfg.horizon;
    for &a0 in &cfg.alphas {
        for &a1 in &cfg.alphas {
            for &n in &cfg.ns {
                let spec = TestSpec::Expectation { alpha0: a0, alpha1: a1, n };
                let test = CompiledTest::new(&spec, instance, None)?;
                let params = format!("alpha0={a0} alpha1={a1} n={n} horizon={h}");
                let worst = |hyp, obj| dp_worst_case_compiled(&test, instance, hyp, obj, h, &cfg.dp);
                let e0 = worst(Hypothesis::H0, Objective::ErrorProb)?;
                out.push(Certificate::new("type1_error", params.clone(), e0.value, exp2(-a1 * n as f64), CERT_SLACK));
                let e1 = worst(Hypothesis::H1, Objective::ErrorProb)?;
                out.push(Certificate::new("type2_error", params.clone(), e1.value, exp2(-a0 * n as f64), CERT_SLACK));
                for hyp in [Hypothesis::H0, Hypothesis::H1] {
                    let tb = dp_expected_tau_bound_check(&spec, instance, hyp, h)?;
                    let group = if hyp == Hypothesis::H0 { "expected_tau_h0" } else { "expected_tau_h1" };
                    out.push(Certificate::new(group, params.clone(), tb.worst_tau, tb.bound, TAU_SLACK));
                }
                let m = worst(Hypothesis::H0, Objective::ExpMomentS1)?;
                out.push(Certificate::new("exp_moment_s1_h0", params.clone(), m.value, 1.0, CERT_SLACK));
                let m = worst(Hypothesis::H1, Objective::ExpMomentS0)?;
                out.push(Certificate::new("exp_moment_s0_h1", params, m.value, 1.0, CERT_SLACK));
            }
        }
    }
    Ok(())
}

fn prob_constraint_suite(
    instance: &ProblemInstance,
    cfg: &CertifyConfig,
    out: &mut Vec<Certificate>,
    skipped: &mut Vec<String>,
) -> Result<()> {
    for &delta in &cfg.deltas {
        for &n in &cfg.prob_ns {
            let spec = TestSpec::ProbConstraint { delta, n };
            for hyp in [Hypothesis::H0, Hypothesis::H1] {
                match dp_stop_prob_exceeds_n(&spec, instance, hyp) {
                    Ok((worst, azuma)) => out.push(Certificate::new(
                        if hyp == Hypothesis::H0 { "stop_prob_h0" } else { "stop_prob_h1" },
                        format!("delta={delta} n={n}"),
                        worst,
                        azuma,
                        CERT_SLACK,
                    )),
                    Err(Error::InfeasibleSpec(msg)) => {
                        skipped.push(format!("stop_prob delta={delta} n={n}: {msg}"));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(())
}

fn fixed_length_suite(instance: &ProblemInstance, cfg: &CertifyConfig, out: &mut Vec<Certificate>) -> Result<()> {
    for &frac in &cfg.fixed_r_fractions {
        let r = frac * instance.d_fwd();
        let sol = hardest_pair(&instance.p_set, &instance.q_set, r, SOLVER_TOL)?;
        for (side, set) in [(Hypothesis::H1, &instance.q_set), (Hypothesis::H0, &instance.p_set)] {
            for i in 0..set.num_vertices() {
                let s = check_hoeffding_vertex_inequality(&sol, set, side, i)?;
                let label = if side == Hypothesis::H1 { "Q" } else { "P" };
                out.push(Certificate::new(
                    "hoeffding_vertex",
                    format!("r={r:.6} {label} vertex {i}"),
                    -s,
                    0.0,
                    HOEFFDING_SLACK,
                ));
            }
        }
        for &n in &cfg.fixed_ns {
            let spec = TestSpec::FixedLength { n, r };
            let test = CompiledTest::new(&spec, instance, Some(&sol))?;
            let params = format!("r={r:.6} s*={:.6} n={n}", sol.s_star);
            let e1 = dp_worst_case_compiled(&test, instance, Hypothesis::H1, Objective::ErrorProb, n, &cfg.dp)?;
            out.push(Certificate::new(
                "fixed_type2_error",
                params.clone(),
                e1.value,
                exp2(-(n as f64) * r),
                CERT_SLACK,
            ));
            let e0 = dp_worst_case_compiled(&test, instance, Hypothesis::H0, Objective::ErrorProb, n, &cfg.dp)?;
            out.push(Certificate::new(
                "fixed_type1_error",
                params,
                e0.value,
                exp2(-(n as f64) * sol.s_star),
                CERT_SLACK,
            ));
        }
    }
    Ok(())
}

fn closest_pair_suite(
    instance: &ProblemInstance,
    cfg: &CertifyConfig,
    out: &mut Vec<Certificate>,
    skipped: &mut Vec<String>,
) -> Result<()> {
    for (dir, pair, name) in [
        (Direction::Forward, &instance.forward_pair, "closest_pair_forward"),
        (Direction::Reverse, &instance.reverse_pair, "closest_pair_reverse"),
    ] {
        match brute_force_closest_pair(&instance.p_set, &instance.q_set, dir, cfg.grid_step) {
            Ok(grid) => out.push(Certificate::new(
                name,
                format!("grid_step={}", cfg.grid_step),
                pair.divergence,
                grid.divergence,
                CERT_SLACK,
            )),
            Err(Error::Resource { required, budget }) => {
                skipped.push(format!("{name}: grid needs {required} points, budget {budget}"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Runs the whole suite. Infeasible or oversized sub-checks are listed in
/// [`CertifyReport::skipped`]; DP budget errors are propagated.
pub fn certify(instance: &ProblemInstance, cfg: &CertifyConfig) -> Result<CertifyReport> {
    let mut report = CertifyReport::default();
    let out = &mut report.certificates;
    closest_pair_suite(instance, cfg, out, &mut report.skipped)?;
    vertex_suite(instance, out)?;
    expectation_suite(instance, cfg, out)?;
    prob_constraint_suite(instance, cfg, out, &mut report.skipped)?;
    fixed_length_suite(instance, cfg, out)?;
    Ok(report)
}
