//! Adversary strategies: rules choosing the next sampling distribution from
//! the hypothesis's set given the observations so far.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::ProblemInstance;
use crate::oracle::Policy;
use crate::prob::Distribution;
use crate::{Error, Hypothesis, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum StrategyKind {
    StaticVertex(usize),
    /// Fixed mixture; the distribution is precomputed from the weights.
    StaticMixture {
        weights: Vec<f64>,
        dist: Distribution,
    },
    /// `p0*` under `H0`, `q0*` under `H1`.
    OptimalPairForward,
    /// `p1*` under `H0`, `q1*` under `H1`.
    OptimalPairReverse,
    /// The vertex maximizing the expected one-step increment of the statistic
    /// that decides for the wrong hypothesis.
    GreedyDrift,
    /// Vertex choices read off a worst-case DP solution.
    DpPolicy(Arc<Policy>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryStrategy {
    pub hypothesis: Hypothesis,
    pub kind: StrategyKind,
}

impl AdversaryStrategy {
    pub fn static_vertex(hypothesis: Hypothesis, index: usize, instance: &ProblemInstance) -> Result<Self> {
        let m = instance.set(hypothesis).num_vertices();
        if index >= m {
            return Err(Error::Domain(format!("vertex index {index} out of range ({m} vertices)")));
        }
        Ok(AdversaryStrategy { hypothesis, kind: StrategyKind::StaticVertex(index) })
    }

    pub fn static_mixture(hypothesis: Hypothesis, weights: Vec<f64>, instance: &ProblemInstance) -> Result<Self> {
        let dist = instance.set(hypothesis).mix(&weights)?;
        Ok(AdversaryStrategy { hypothesis, kind: StrategyKind::StaticMixture { weights, dist } })
    }

    pub fn optimal_pair_forward(hypothesis: Hypothesis) -> Self {
        AdversaryStrategy { hypothesis, kind: StrategyKind::OptimalPairForward }
    }

    pub fn optimal_pair_reverse(hypothesis: Hypothesis) -> Self {
        AdversaryStrategy { hypothesis, kind: StrategyKind::OptimalPairReverse }
    }

    pub fn greedy_drift(hypothesis: Hypothesis) -> Self {
        AdversaryStrategy { hypothesis, kind: StrategyKind::GreedyDrift }
    }

    pub fn dp_policy(policy: Arc<Policy>) -> Self {
        AdversaryStrategy { hypothesis: policy.hypothesis(), kind: StrategyKind::DpPolicy(policy) }
    }

    /// Builds a named strategy: `static_vertex:<i>`, `optimal_pair_forward`,
    /// `optimal_pair_reverse` or `greedy_drift`.
    pub fn from_name(name: &str, hypothesis: Hypothesis, instance: &ProblemInstance) -> Result<Self> {
        match name {
            "optimal_pair_forward" => Ok(Self::optimal_pair_forward(hypothesis)),
            "optimal_pair_reverse" => Ok(Self::optimal_pair_reverse(hypothesis)),
            "greedy_drift" => Ok(Self::greedy_drift(hypothesis)),
            _ => match name.strip_prefix("static_vertex:").map(str::parse::<usize>) {
                Some(Ok(i)) => Self::static_vertex(hypothesis, i, instance),
                _ => Err(Error::Domain(format!("unknown strategy {name:?}"))),
            },
        }
    }

    /// Stable identifier used in reports.
    pub fn id(&self) -> String {
        match &self.kind {
            StrategyKind::StaticVertex(i) => format!("static_vertex:{i}"),
            StrategyKind::StaticMixture { .. } => "static_mixture".into(),
            StrategyKind::OptimalPairForward => "optimal_pair_forward".into(),
            StrategyKind::OptimalPairReverse => "optimal_pair_reverse".into(),
            StrategyKind::GreedyDrift => "greedy_drift".into(),
            StrategyKind::DpPolicy(_) => "dp_policy".into(),
        }
    }

    /// The distribution of the next observation given `history`.
    pub fn choose(&self, history: &[usize], instance: &ProblemInstance) -> Result<Distribution> {
        let k = instance.alphabet_size();
        let mut counts = vec![0u32; k];
        for &x in history {
            if x >= k {
                return Err(Error::Domain(format!("symbol {x} outside alphabet of size {k}")));
            }
            counts[x] += 1;
        }
        self.choose_by_type(history.len() as u32, &counts, instance).cloned()
    }

    /// Same as [`Self::choose`] for a history summarized by its type. Every
    /// strategy here depends on the history through its type at most.
    pub fn choose_by_type<'a>(
        &'a self,
        t: u32,
        counts: &[u32],
        instance: &'a ProblemInstance,
    ) -> Result<&'a Distribution> {
        let h = self.hypothesis;
        let set = instance.set(h);
        match &self.kind {
            StrategyKind::StaticVertex(i) => {
                set.vertex(*i).ok_or_else(|| Error::Domain(format!("vertex index {i} out of range")))
            }
            StrategyKind::StaticMixture { dist, .. } => Ok(dist),
            StrategyKind::OptimalPairForward => Ok(match h {
                Hypothesis::H0 => instance.p0(),
                Hypothesis::H1 => instance.q0(),
            }),
            StrategyKind::OptimalPairReverse => Ok(match h {
                Hypothesis::H0 => instance.p1(),
                Hypothesis::H1 => instance.q1(),
            }),
            StrategyKind::GreedyDrift => Ok(&set.vertices()[greedy_vertex(instance, h)]),
            StrategyKind::DpPolicy(policy) => match policy.choice(t, counts)? {
                Some(i) => Ok(&set.vertices()[i]),
                // the test has already stopped here; any member of the set will do
                None => Ok(&set.vertices()[0]),
            },
        }
    }
}

/// Index of the vertex of the set under `h` maximizing the expected increment
/// of the opposing statistic (`s1` under `H0`, `s0` under `H1`); lowest index
/// wins ties.
pub fn greedy_vertex(instance: &ProblemInstance, h: Hypothesis) -> usize {
    let table = match h {
        Hypothesis::H0 => &instance.s1_table.values,
        Hypothesis::H1 => &instance.s0_table.values,
    };
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, v) in instance.set(h).vertices().iter().enumerate() {
        let val = v.expect(table);
        if val > best_val {
            best = i;
            best_val = val;
        }
    }
    best
}

/// The family the Monte Carlo exponent estimates maximize over.
pub fn sweep_family(h: Hypothesis) -> [AdversaryStrategy; 3] {
    [
        AdversaryStrategy::optimal_pair_forward(h),
        AdversaryStrategy::optimal_pair_reverse(h),
        AdversaryStrategy::greedy_drift(h),
    ]
}
