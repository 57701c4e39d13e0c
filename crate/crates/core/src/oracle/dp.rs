//! Worst case over all adaptive adversaries by backward induction on the
//! type lattice.
//!
//! Both statistics are linear in the symbol counts, so the test's verdict
//! and every payoff used here depend on a history only through `(t, counts)`.
//! Given the continuation values, the conditional expectation of the payoff
//! is linear in the next sampling distribution, so a vertex attains the
//! per-state maximum.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::lattice::{total_states, Lattice};
use crate::adversary::AdversaryStrategy;
use crate::defaults::{SOLVER_TOL, STATE_BUDGET};
use crate::detector::{CompiledTest, StopCause, TestSpec, Verdict};
use crate::geometry::{hardest_pair, ProblemInstance};
use crate::numerics::{exp2, NeumaierSum};
use crate::{Error, Hypothesis, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Probability of deciding for the other hypothesis.
    ErrorProb,
    /// `E[tau ^ horizon]`.
    ExpectedTau,
    /// `E[2^{s1}]` at `tau ^ horizon`.
    ExpMomentS1,
    /// `E[2^{s0}]` at `tau ^ horizon`.
    ExpMomentS0,
    /// Probability that the test has not stopped by the horizon.
    StopProbExceedsN,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::ErrorProb => "error_prob",
            Objective::ExpectedTau => "expected_tau",
            Objective::ExpMomentS1 => "exp_moment_s1",
            Objective::ExpMomentS0 => "exp_moment_s0",
            Objective::StopProbExceedsN => "stop_prob_exceeds_n",
        }
    }
}

/// How [`Objective::ErrorProb`] scores runs cut off at the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationRule {
    /// A truncated run is an error (an upper bound on the untruncated test).
    CountAsError,
    /// A truncated run is not an error (the probability of a wrong decision
    /// within the horizon, a lower bound on the untruncated test).
    Exclude,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpOptions {
    pub truncation: TruncationRule,
    pub state_budget: u64,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { truncation: TruncationRule::Exclude, state_budget: STATE_BUDGET }
    }
}

const NO_CHOICE: u16 = u16::MAX;

/// The adversary's maximizing vertex at every non-final type below the horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct Policy {
    hypothesis: Hypothesis,
    lattice: Lattice,
    levels: Vec<Vec<u16>>,
}

impl Policy {
    pub fn hypothesis(&self) -> Hypothesis {
        self.hypothesis
    }

    pub fn horizon(&self) -> u32 {
        self.lattice.horizon()
    }

    /// Vertex to play after `t` samples with type `counts`; `None` where the
    /// test has already stopped.
    pub fn choice(&self, t: u32, counts: &[u32]) -> Result<Option<usize>> {
        if t >= self.horizon() {
            return Err(Error::PolicyDomain { t: t as usize });
        }
        if counts.len() != self.lattice.alphabet_size() {
            return Err(Error::Dimension { expected: self.lattice.alphabet_size(), found: counts.len() });
        }
        if counts.iter().sum::<u32>() != t {
            return Err(Error::Domain(format!("counts do not sum to t = {t}")));
        }
        let c = self.levels[t as usize][self.lattice.rank(counts)];
        Ok((c != NO_CHOICE).then_some(c as usize))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DPResult {
    pub objective: Objective,
    pub hypothesis: Hypothesis,
    pub horizon: u32,
    pub value: f64,
    /// Probability of reaching the horizon undecided under the returned policy.
    pub truncated_mass: f64,
    pub states: u64,
    pub policy: Arc<Policy>,
}

fn payoff(
    objective: Objective,
    verdict: &Verdict,
    h: Hypothesis,
    t: u32,
    counts: &[u32],
    test: &CompiledTest,
    rule: TruncationRule,
) -> f64 {
    let truncated = verdict.cause == Some(StopCause::HorizonTruncated);
    match objective {
        Objective::ErrorProb => {
            let err = match verdict.decision {
                Some(d) => d != h,
                None => truncated && rule == TruncationRule::CountAsError,
            };
            if err {
                1.0
            } else {
                0.0
            }
        }
        Objective::ExpectedTau => t as f64,
        Objective::StopProbExceedsN => {
            if truncated {
                1.0
            } else {
                0.0
            }
        }
        Objective::ExpMomentS1 | Objective::ExpMomentS0 => match test {
            CompiledTest::Sequential { s0, s1, .. } => {
                let table = if objective == Objective::ExpMomentS1 { s1 } else { s0 };
                exp2(table.statistic(counts))
            }
            CompiledTest::FixedLength { .. } => 0.0,
        },
    }
}

fn check_budget(k: usize, horizon: u32, budget: u64) -> Result<u64> {
    let required = total_states(k, horizon);
    if required > budget {
        return Err(Error::Resource { required, budget });
    }
    Ok(required)
}

fn check_test(test: &CompiledTest, instance: &ProblemInstance, objective: Objective, horizon: u32) -> Result<()> {
    if test.alphabet_size() != instance.alphabet_size() {
        return Err(Error::Dimension { expected: instance.alphabet_size(), found: test.alphabet_size() });
    }
    if horizon == 0 {
        return Err(Error::Domain("horizon must be >= 1".into()));
    }
    if let CompiledTest::FixedLength { n, .. } = test {
        if matches!(objective, Objective::ExpMomentS0 | Objective::ExpMomentS1 | Objective::StopProbExceedsN) {
            return Err(Error::Kind(format!("{} needs a sequential test", objective.name())));
        }
        if horizon < *n {
            return Err(Error::Domain(format!("fixed-length test needs horizon >= n = {n}")));
        }
    }
    Ok(())
}

/// Backward induction with the choice at each state made by `choose`, which
/// sees the per-vertex continuation values and returns `(vertex, value)`.
fn induction<C>(
    test: &CompiledTest,
    instance: &ProblemInstance,
    h: Hypothesis,
    objective: Objective,
    horizon: u32,
    rule: TruncationRule,
    mut choose: C,
) -> (f64, f64, Vec<Vec<u16>>, Lattice)
where
    C: FnMut(u32, &[u32], &[f64]) -> usize,
{
    let k = instance.alphabet_size();
    let vertices = instance.set(h).vertices();
    let lattice = Lattice::new(k, horizon);
    let mut next_val: Vec<f64> = Vec::new();
    let mut next_trunc: Vec<f64> = Vec::new();
    let mut levels: Vec<Vec<u16>> = vec![Vec::new(); horizon as usize];
    let mut child = vec![0u32; k];
    let mut child_val = vec![0.0f64; k];
    let mut child_trunc = vec![0.0f64; k];
    let mut per_vertex = vec![0.0f64; vertices.len()];

    for t in (0..=horizon).rev() {
        let size = lattice.level_size(t);
        let mut val = vec![0.0f64; size];
        let mut trunc = vec![0.0f64; size];
        let mut pol = if t < horizon { vec![NO_CHOICE; size] } else { Vec::new() };
        let mut counts = lattice.first(t);
        let mut idx = 0usize;
        loop {
            let verdict = test.status(t, &counts, horizon);
            if verdict.is_final() || t == horizon {
                val[idx] = payoff(objective, &verdict, h, t, &counts, test, rule);
                trunc[idx] = if verdict.cause == Some(StopCause::HorizonTruncated) { 1.0 } else { 0.0 };
            } else {
                for x in 0..k {
                    child.copy_from_slice(&counts);
                    child[x] += 1;
                    let r = lattice.rank(&child);
                    child_val[x] = next_val[r];
                    child_trunc[x] = next_trunc[r];
                }
                for (pv, v) in per_vertex.iter_mut().zip(vertices) {
                    let mut acc = NeumaierSum::new();
                    for (p, cv) in v.probs().iter().zip(&child_val) {
                        acc.add(p * cv);
                    }
                    *pv = acc.value();
                }
                let best = choose(t, &counts, &per_vertex);
                let mut acc = NeumaierSum::new();
                for (p, ct) in vertices[best].probs().iter().zip(&child_trunc) {
                    acc.add(p * ct);
                }
                val[idx] = per_vertex[best];
                trunc[idx] = acc.value();
                pol[idx] = best as u16;
            }
            idx += 1;
            if !lattice.advance(&mut counts) {
                break;
            }
        }
        if t < horizon {
            levels[t as usize] = pol;
        }
        next_val = val;
        next_trunc = trunc;
    }
    (next_val[0], next_trunc[0], levels, lattice)
}

/// Exact supremum of `objective` over all adaptive adversaries drawing from
/// the set of `hypothesis`, for `test` cut off at `horizon`.
pub fn dp_worst_case_compiled(
    test: &CompiledTest,
    instance: &ProblemInstance,
    hypothesis: Hypothesis,
    objective: Objective,
    horizon: u32,
    options: &DpOptions,
) -> Result<DPResult> {
    check_test(test, instance, objective, horizon)?;
    let states = check_budget(instance.alphabet_size(), horizon, options.state_budget)?;
    let m = instance.set(hypothesis).num_vertices();
    if m >= NO_CHOICE as usize {
        return Err(Error::Domain(format!("{m} vertices exceed the policy table range")));
    }
    let (value, truncated_mass, levels, lattice) =
        induction(test, instance, hypothesis, objective, horizon, options.truncation, |_, _, pv| {
            let mut best = 0;
            for i in 1..pv.len() {
                if pv[i] > pv[best] {
                    best = i;
                }
            }
            best
        });
    Ok(DPResult {
        objective,
        hypothesis,
        horizon,
        value,
        truncated_mass,
        states,
        policy: Arc::new(Policy { hypothesis, lattice, levels }),
    })
}

/// [`dp_worst_case_compiled`] for a spec; fixed-length specs are compiled
/// with their hardest pair.
pub fn dp_worst_case(
    spec: &TestSpec,
    instance: &ProblemInstance,
    hypothesis: Hypothesis,
    objective: Objective,
    horizon: u32,
    options: &DpOptions,
) -> Result<DPResult> {
    let test = compile_spec(spec, instance)?;
    dp_worst_case_compiled(&test, instance, hypothesis, objective, horizon, options)
}

/// Compiles `spec`, solving the hardest pair for fixed-length specs.
pub fn compile_spec(spec: &TestSpec, instance: &ProblemInstance) -> Result<CompiledTest> {
    match *spec {
        TestSpec::FixedLength { r, .. } => {
            spec.validate()?;
            let sol = hardest_pair(&instance.p_set, &instance.q_set, r, SOLVER_TOL)?;
            CompiledTest::new(spec, instance, Some(&sol))
        }
        _ => CompiledTest::new(spec, instance, None),
    }
}

/// Exact value of `objective` when the adversary plays `strategy`.
///
/// The strategy may return any member of the set, not only vertices.
pub fn dp_evaluate_strategy(
    test: &CompiledTest,
    instance: &ProblemInstance,
    strategy: &AdversaryStrategy,
    objective: Objective,
    horizon: u32,
    options: &DpOptions,
) -> Result<f64> {
    check_test(test, instance, objective, horizon)?;
    check_budget(instance.alphabet_size(), horizon, options.state_budget)?;
    let h = strategy.hypothesis;
    let k = instance.alphabet_size();
    let lattice = Lattice::new(k, horizon);
    let mut next: Vec<f64> = Vec::new();
    let mut child = vec![0u32; k];
    for t in (0..=horizon).rev() {
        let mut val = vec![0.0f64; lattice.level_size(t)];
        let mut counts = lattice.first(t);
        let mut idx = 0usize;
        loop {
            let verdict = test.status(t, &counts, horizon);
            if verdict.is_final() || t == horizon {
                val[idx] = payoff(objective, &verdict, h, t, &counts, test, options.truncation);
            } else {
                let d = strategy.choose_by_type(t, &counts, instance)?;
                let mut acc = NeumaierSum::new();
                for x in 0..k {
                    child.copy_from_slice(&counts);
                    child[x] += 1;
                    acc.add(d.prob(x) * next[lattice.rank(&child)]);
                }
                val[idx] = acc.value();
            }
            idx += 1;
            if !lattice.advance(&mut counts) {
                break;
            }
        }
        next = val;
    }
    Ok(next[0])
}

/// Worst-case `E[tau ^ horizon]` against `(theta + c) / D` of the hypothesis's statistic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauBound {
    pub worst_tau: f64,
    pub bound: f64,
    pub slack: f64,
}

pub fn dp_expected_tau_bound_check(
    spec: &TestSpec,
    instance: &ProblemInstance,
    hypothesis: Hypothesis,
    horizon: u32,
) -> Result<TauBound> {
    let (theta0, theta1) = crate::detector::thresholds(spec, instance)?;
    let r = dp_worst_case(spec, instance, hypothesis, Objective::ExpectedTau, horizon, &DpOptions::default())?;
    let bound = match hypothesis {
        Hypothesis::H0 => (theta0 + instance.c_fwd) / instance.d_fwd(),
        Hypothesis::H1 => (theta1 + instance.c_rev) / instance.d_rev(),
    };
    Ok(TauBound { worst_tau: r.value, bound, slack: bound - r.value })
}

/// Worst-case `P(tau > n)` for a stopping-probability spec and the bound
/// `exp(-n delta^2 / (8 c^2))`, `c` being the support constant of the
/// statistic that drifts upward under `hypothesis`.
pub fn dp_stop_prob_exceeds_n(
    spec: &TestSpec,
    instance: &ProblemInstance,
    hypothesis: Hypothesis,
) -> Result<(f64, f64)> {
    let TestSpec::ProbConstraint { delta, n } = *spec else {
        return Err(Error::Kind(format!("{} is not prob_constraint", spec.kind_name())));
    };
    let r = dp_worst_case(spec, instance, hypothesis, Objective::StopProbExceedsN, n, &DpOptions::default())?;
    let c = match hypothesis {
        Hypothesis::H0 => instance.c_fwd,
        Hypothesis::H1 => instance.c_rev,
    };
    let azuma = crate::numerics::exp(-(n as f64) * delta * delta / (8.0 * c * c));
    Ok((r.value, azuma))
}
