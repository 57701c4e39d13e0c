//! Serialized forms of results.
//!
//! CSV column orders are fixed by the `*_HEADER` constants; JSON objects
//! carry a `"kind"` tag so `report` can recognize them.

use std::collections::BTreeMap;

use advseq_core::defaults;
use advseq_core::detector::{exponent_region, Regime, Region, TestSpec};
use advseq_core::geometry::{ClosestPairResult, Direction, HoeffdingSolution, ProblemInstance};
use advseq_core::oracle::{Certificate, CertifyReport};
use advseq_core::prob::Distribution;
use advseq_core::sim::{HypothesisStats, SimulationResult, SweepRow};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::problem::ProblemFile;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub direction: String,
    pub p_star: Vec<f64>,
    pub q_star: Vec<f64>,
    pub p_weights: Vec<f64>,
    pub q_weights: Vec<f64>,
    pub divergence: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl PairRecord {
    fn from_pair(r: &ClosestPairResult) -> Self {
        PairRecord {
            direction: match r.direction {
                Direction::Forward => "forward".into(),
                Direction::Reverse => "reverse".into(),
            },
            p_star: r.p_star.probs().to_vec(),
            q_star: r.q_star.probs().to_vec(),
            p_weights: r.p_weights.clone(),
            q_weights: r.q_weights.clone(),
            divergence: r.divergence,
            converged: r.converged,
            iterations: r.iterations,
        }
    }

    fn to_pair(&self) -> CliResult<ClosestPairResult> {
        let direction = match self.direction.as_str() {
            "forward" => Direction::Forward,
            "reverse" => Direction::Reverse,
            d => return Err(CliError::Validation(format!("unknown pair direction {d:?}"))),
        };
        Ok(ClosestPairResult {
            p_star: Distribution::new(self.p_star.clone())?,
            q_star: Distribution::new(self.q_star.clone())?,
            p_weights: self.p_weights.clone(),
            q_weights: self.q_weights.clone(),
            divergence: self.divergence,
            direction,
            converged: self.converged,
            iterations: self.iterations,
            objective_trace: vec![self.divergence],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionRecord {
    Hyperbola { product: f64 },
    Rectangle { e0_max: f64, e1_max: f64 },
}

impl From<Region> for RegionRecord {
    fn from(r: Region) -> Self {
        match r {
            Region::Hyperbola { product } => RegionRecord::Hyperbola { product },
            Region::Rectangle { e0_max, e1_max } => RegionRecord::Rectangle { e0_max, e1_max },
        }
    }
}

/// Output of `solve`; reloads into a [`ProblemInstance`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub kind: String,
    #[serde(flatten)]
    pub problem: ProblemFile,
    pub forward_pair: PairRecord,
    pub reverse_pair: PairRecord,
    pub d_fwd: f64,
    pub d_rev: f64,
    pub c_fwd: f64,
    pub c_rev: f64,
    pub s0_table: Vec<f64>,
    pub s1_table: Vec<f64>,
    pub regions: BTreeMap<String, RegionRecord>,
}

impl InstanceRecord {
    pub fn new(inst: &ProblemInstance) -> Self {
        let regions = [Regime::Theorem1, Regime::Theorem2, Regime::Theorem3]
            .into_iter()
            .map(|r| (r.name().to_string(), exponent_region(inst, r).into()))
            .collect();
        InstanceRecord {
            kind: "instance".into(),
            problem: ProblemFile::from_sets(&inst.p_set, &inst.q_set),
            forward_pair: PairRecord::from_pair(&inst.forward_pair),
            reverse_pair: PairRecord::from_pair(&inst.reverse_pair),
            d_fwd: inst.d_fwd(),
            d_rev: inst.d_rev(),
            c_fwd: inst.c_fwd,
            c_rev: inst.c_rev,
            s0_table: inst.s0_table.values.clone(),
            s1_table: inst.s1_table.values.clone(),
            regions,
        }
    }

    pub fn to_instance(&self) -> CliResult<ProblemInstance> {
        let (p, q) = self.problem.to_sets()?;
        Ok(ProblemInstance::from_parts(p, q, self.forward_pair.to_pair()?, self.reverse_pair.to_pair()?)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub r: f64,
    pub s_star: f64,
    pub lambda_star: f64,
}

/// Output of `hoeffding`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingRecord {
    pub kind: String,
    pub r: f64,
    pub p_h: Vec<f64>,
    pub q_h: Vec<f64>,
    pub p_weights: Vec<f64>,
    pub q_weights: Vec<f64>,
    pub lambda_star: f64,
    pub s_star: f64,
    pub psi_star: f64,
    pub converged: bool,
    /// `n (r - s*)` when `--n` was given.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    /// Fixed-length tradeoff: type-I exponent `s*` against the type-II floor `r`.
    pub curve: Vec<TradeoffPoint>,
}

impl HoeffdingRecord {
    pub fn new(sol: &HoeffdingSolution, n: Option<u32>, curve: Vec<TradeoffPoint>) -> Self {
        HoeffdingRecord {
            kind: "hoeffding".into(),
            r: sol.r,
            p_h: sol.p_h.probs().to_vec(),
            q_h: sol.q_h.probs().to_vec(),
            p_weights: sol.p_weights.clone(),
            q_weights: sol.q_weights.clone(),
            lambda_star: sol.lambda_star,
            s_star: sol.s_star,
            psi_star: sol.psi_star(),
            converged: sol.converged,
            n,
            threshold: n.map(|n| n as f64 * (sol.r - sol.s_star)),
            curve,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub group: String,
    pub params: String,
    pub value: f64,
    pub bound: f64,
    pub allowance: f64,
    pub slack: f64,
    pub pass: bool,
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        CertificateRecord {
            group: c.group.to_string(),
            params: c.params.clone(),
            value: c.value,
            bound: c.bound,
            allowance: c.allowance,
            slack: c.slack(),
            pass: c.pass,
        }
    }
}

/// Output of `certify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyRecord {
    pub kind: String,
    pub all_pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub truncation_rule: String,
    pub certificates: Vec<CertificateRecord>,
    pub skipped: Vec<String>,
}

impl CertifyRecord {
    pub fn new(report: &CertifyReport, truncation_rule: &str) -> Self {
        let passed = report.certificates.iter().filter(|c| c.pass).count();
        CertifyRecord {
            kind: "certify".into(),
            all_pass: report.all_pass(),
            passed,
            failed: report.certificates.len() - passed,
            truncation_rule: truncation_rule.into(),
            certificates: report.certificates.iter().map(Into::into).collect(),
            skipped: report.skipped.clone(),
        }
    }
}

pub const CERTIFY_HEADER: [&str; 7] = ["group", "params", "value", "bound", "allowance", "slack", "pass"];

/// Test parameters flattened into fixed columns; absent ones are empty.
fn spec_fields(spec: &TestSpec) -> [String; 6] {
    let f = |x: f64| x.to_string();
    let mut out: [String; 6] = Default::default();
    out[0] = spec.n().map(|n| n.to_string()).unwrap_or_default();
    match *spec {
        TestSpec::Expectation { alpha0, alpha1, .. } => {
            out[1] = f(alpha0);
            out[2] = f(alpha1);
        }
        TestSpec::ProbConstraint { delta, .. } => out[3] = f(delta),
        TestSpec::ErrorConstraint { beta } => out[4] = f(beta),
        TestSpec::FixedLength { r, .. } => out[5] = f(r),
    }
    out
}

pub fn regime_of(spec: &TestSpec) -> &'static str {
    match spec {
        TestSpec::Expectation { .. } => "theorem1",
        TestSpec::ProbConstraint { .. } => "theorem2",
        TestSpec::ErrorConstraint { .. } => "theorem3",
        TestSpec::FixedLength { .. } => "fixed",
    }
}

pub const SIMULATE_HEADER: [&str; 29] = [
    "regime",
    "kind",
    "n",
    "alpha0",
    "alpha1",
    "delta",
    "beta",
    "r",
    "horizon",
    "trials",
    "seed",
    "rng",
    "strategy_h0",
    "strategy_h1",
    "errors_h0",
    "err_rate_h0",
    "wilson_lo_h0",
    "wilson_hi_h0",
    "mean_tau_h0",
    "se_tau_h0",
    "errors_h1",
    "err_rate_h1",
    "wilson_lo_h1",
    "wilson_hi_h1",
    "mean_tau_h1",
    "se_tau_h1",
    "truncation_rate",
    "empirical_e0",
    "empirical_e1",
];

fn stats_fields(s: &HypothesisStats) -> [String; 6] {
    [
        s.tally.errors.to_string(),
        s.err_rate.to_string(),
        s.wilson.0.to_string(),
        s.wilson.1.to_string(),
        s.mean_tau.to_string(),
        s.se_tau.to_string(),
    ]
}

pub fn simulate_row(r: &SimulationResult) -> Vec<String> {
    let mut row = vec![regime_of(&r.spec).to_string(), r.spec.kind_name().to_string()];
    row.extend(spec_fields(&r.spec));
    row.extend([
        r.horizon.to_string(),
        r.trials.to_string(),
        r.master_seed.to_string(),
        defaults::RNG_NAME.to_string(),
        r.h0.strategy.clone(),
        r.h1.strategy.clone(),
    ]);
    row.extend(stats_fields(&r.h0));
    row.extend(stats_fields(&r.h1));
    row.extend([r.truncation_rate.to_string(), r.empirical_e0.to_string(), r.empirical_e1.to_string()]);
    row
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecRecord {
    pub regime: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
}

impl From<&TestSpec> for SpecRecord {
    fn from(spec: &TestSpec) -> Self {
        let mut rec = SpecRecord {
            regime: regime_of(spec).into(),
            kind: spec.kind_name().into(),
            n: spec.n(),
            alpha0: None,
            alpha1: None,
            delta: None,
            beta: None,
            r: None,
        };
        match *spec {
            TestSpec::Expectation { alpha0, alpha1, .. } => {
                rec.alpha0 = Some(alpha0);
                rec.alpha1 = Some(alpha1);
            }
            TestSpec::ProbConstraint { delta, .. } => rec.delta = Some(delta),
            TestSpec::ErrorConstraint { beta } => rec.beta = Some(beta),
            TestSpec::FixedLength { r, .. } => rec.r = Some(r),
        }
        rec
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub strategy: String,
    pub trials: u64,
    pub errors: u64,
    pub truncations: u64,
    pub err_rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_tau: f64,
    pub se_tau: f64,
}

impl From<&HypothesisStats> for StatsRecord {
    fn from(s: &HypothesisStats) -> Self {
        StatsRecord {
            strategy: s.strategy.clone(),
            trials: s.tally.trials,
            errors: s.tally.errors,
            truncations: s.tally.truncations,
            err_rate: s.err_rate,
            wilson_lo: s.wilson.0,
            wilson_hi: s.wilson.1,
            mean_tau: s.mean_tau,
            se_tau: s.se_tau,
        }
    }
}

/// JSON form of a [`SimulationResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub kind: String,
    pub spec: SpecRecord,
    pub horizon: u32,
    pub seed: u64,
    pub rng: String,
    pub h0: StatsRecord,
    pub h1: StatsRecord,
    pub truncation_rate: f64,
    pub empirical_e0: f64,
    pub empirical_e1: f64,
}

impl SimulationRecord {
    pub fn new(r: &SimulationResult) -> Self {
        SimulationRecord {
            kind: "simulation".into(),
            spec: (&r.spec).into(),
            horizon: r.horizon,
            seed: r.master_seed,
            rng: defaults::RNG_NAME.into(),
            h0: (&r.h0).into(),
            h1: (&r.h1).into(),
            truncation_rate: r.truncation_rate,
            empirical_e0: r.empirical_e0,
            empirical_e1: r.empirical_e1,
        }
    }
}

pub const SWEEP_HEADER: [&str; 22] = [
    "regime",
    "kind",
    "n",
    "alpha0",
    "alpha1",
    "delta",
    "beta",
    "r",
    "horizon",
    "trials",
    "seed",
    "family",
    "worst_h0",
    "worst_h1",
    "err_h0",
    "err_h1",
    "mean_tau_h0",
    "mean_tau_h1",
    "truncation_rate",
    "empirical_e0",
    "empirical_e1",
    "rng",
];

pub const SWEEP_FAMILY: &str = "optimal_pair_forward|optimal_pair_reverse|greedy_drift";

pub fn sweep_row(r: &SweepRow, seed: u64) -> Vec<String> {
    let mut row = vec![regime_of(&r.spec).to_string(), r.spec.kind_name().to_string()];
    row.extend(spec_fields(&r.spec));
    row.extend([
        r.horizon.to_string(),
        r.trials.to_string(),
        seed.to_string(),
        SWEEP_FAMILY.to_string(),
        r.worst_h0.clone(),
        r.worst_h1.clone(),
        r.err_h0.to_string(),
        r.err_h1.to_string(),
        r.mean_tau_h0.to_string(),
        r.mean_tau_h1.to_string(),
        r.truncation_rate.to_string(),
        r.empirical_e0.to_string(),
        r.empirical_e1.to_string(),
        defaults::RNG_NAME.to_string(),
    ]);
    row
}

pub const REPORT_HEADER: [&str; 6] = ["curve", "source", "n", "param", "e0", "e1"];

pub fn certificate_row(c: &CertificateRecord) -> Vec<String> {
    vec![
        c.group.clone(),
        c.params.clone(),
        c.value.to_string(),
        c.bound.to_string(),
        c.allowance.to_string(),
        c.slack.to_string(),
        c.pass.to_string(),
    ]
}
