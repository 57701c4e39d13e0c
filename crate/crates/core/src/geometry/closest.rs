use alloc::vec::Vec;

use super::simplex;
use crate::defaults::{INNER_ITER_CAP, OUTER_ITER_CAP};
use crate::prob::{kl_slices, ConvexSet, Distribution, LogRatioTable};
use crate::{Error, Hypothesis, Result};

const LN2: f64 = core::f64::consts::LN_2;

/// Which KL orientation a closest pair minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `min D(p||q)` over `p in P`, `q in Q`.
    Forward,
    /// `min D(q||p)` over `p in P`, `q in Q`.
    Reverse,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosestPairResult {
    pub p_star: Distribution,
    pub q_star: Distribution,
    pub p_weights: Vec<f64>,
    pub q_weights: Vec<f64>,
    /// `D(p*||q*)` for [`Direction::Forward`], `D(q*||p*)` for [`Direction::Reverse`].
    pub divergence: f64,
    pub direction: Direction,
    pub converged: bool,
    pub iterations: usize,
    /// Objective after each full alternating sweep, starting with the initial point.
    pub objective_trace: Vec<f64>,
}

/// Frank-Wolfe gap of the second argument's weights at `(a, b)`.
fn second_gap(first: &ConvexSet, second: &ConvexSet, a: &[f64], b: &[f64]) -> f64 {
    let p = first.mix_unchecked(a);
    let q = second.mix_unchecked(b);
    let dq: Vec<f64> = p.probs().iter().zip(q.probs()).map(|(pp, qq)| -pp / (qq * LN2)).collect();
    let g: Vec<f64> = second.vertices().iter().map(|v| v.expect(&dq)).collect();
    let inner: f64 = b.iter().zip(&g).map(|(w, gi)| w * gi).sum();
    let best = g.iter().copied().fold(f64::INFINITY, f64::min);
    inner - best
}

/// Minimizes `D(mix(first, a) || mix(second, b))` by alternating Frank-Wolfe
/// solves over `a` and `b`. Returns `(a, b, value, converged, trace)`.
fn alternating_kl(first: &ConvexSet, second: &ConvexSet, tol: f64) -> (Vec<f64>, Vec<f64>, f64, bool, Vec<f64>) {
    let mut a = alloc::vec![1.0 / first.num_vertices() as f64; first.num_vertices()];
    let mut b = alloc::vec![1.0 / second.num_vertices() as f64; second.num_vertices()];
    let objective = |a: &[f64], b: &[f64]| kl_slices(first.mix_unchecked(a).probs(), second.mix_unchecked(b).probs());
    let mut value = objective(&a, &b);
    let mut trace = alloc::vec![value];
    let mut converged = false;
    let gap_tol = tol * 1e-3;

    for _ in 0..OUTER_ITER_CAP {
        // b first so the final update is the best response of the first argument
        let p = first.mix_unchecked(&a);
        simplex::minimize(
            &mut b,
            |b| kl_slices(p.probs(), second.mix_unchecked(b).probs()),
            |b| {
                let q = second.mix_unchecked(b);
                let dq: Vec<f64> = p.probs().iter().zip(q.probs()).map(|(pp, qq)| -pp / (qq * LN2)).collect();
                second.vertices().iter().map(|v| v.expect(&dq)).collect()
            },
            INNER_ITER_CAP,
            gap_tol,
        );
        let q = second.mix_unchecked(&b);
        let report = simplex::minimize(
            &mut a,
            |a| kl_slices(first.mix_unchecked(a).probs(), q.probs()),
            |a| {
                let p = first.mix_unchecked(a);
                let dp: Vec<f64> = p
                    .probs()
                    .iter()
                    .zip(q.probs())
                    .map(|(pp, qq)| crate::numerics::log2(pp / qq) + 1.0 / LN2)
                    .collect();
                first.vertices().iter().map(|v| v.expect(&dp)).collect()
            },
            INNER_ITER_CAP,
            gap_tol,
        );
        let improvement = value - report.value;
        value = report.value.min(value);
        trace.push(value);
        // the b block was solved against the previous a, so its gap is checked too
        if improvement < tol / 10.0 && second_gap(first, second, &a, &b) < tol / 10.0 {
            converged = true;
            break;
        }
    }
    (a, b, value, converged, trace)
}

/// Closest pair between `p_set` and `q_set` in the given KL orientation.
///
/// Errors with [`Error::SetsOverlap`] when the minimum divergence is `<= tol`.
pub fn closest_pair(p_set: &ConvexSet, q_set: &ConvexSet, direction: Direction, tol: f64) -> Result<ClosestPairResult> {
    p_set.check_alphabet(q_set)?;
    let (p_weights, q_weights, divergence, converged, trace) = match direction {
        Direction::Forward => {
            let (a, b, v, c, t) = alternating_kl(p_set, q_set, tol);
            (a, b, v, c, t)
        }
        Direction::Reverse => {
            let (a, b, v, c, t) = alternating_kl(q_set, p_set, tol);
            (b, a, v, c, t)
        }
    };
    if divergence <= tol {
        return Err(Error::SetsOverlap { divergence });
    }
    Ok(ClosestPairResult {
        p_star: p_set.mix_unchecked(&p_weights),
        q_star: q_set.mix_unchecked(&q_weights),
        p_weights,
        q_weights,
        divergence,
        direction,
        converged,
        iterations: trace.len() - 1,
        objective_trace: trace,
    })
}

/// `(P, Q)` together with both solved closest pairs and their support constants.
///
/// The statistic `s0` accumulates `log2(p0*/q0*)` (table [`Self::s0_table`]) and
/// `s1` accumulates `log2(q1*/p1*)` (table [`Self::s1_table`]).
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub p_set: ConvexSet,
    pub q_set: ConvexSet,
    /// `(p0*, q0*)`, minimizing `D(p||q)`.
    pub forward_pair: ClosestPairResult,
    /// `(p1*, q1*)`, minimizing `D(q||p)`.
    pub reverse_pair: ClosestPairResult,
    /// `max_x |log2(p0*(x)/q0*(x))|`.
    pub c_fwd: f64,
    /// `max_x |log2(q1*(x)/p1*(x))|`.
    pub c_rev: f64,
    pub s0_table: LogRatioTable,
    pub s1_table: LogRatioTable,
}

impl ProblemInstance {
    /// Assembles an instance from already solved pairs (for example, pairs
    /// reloaded from disk). Both divergences must be positive.
    pub fn from_parts(
        p_set: ConvexSet,
        q_set: ConvexSet,
        forward_pair: ClosestPairResult,
        reverse_pair: ClosestPairResult,
    ) -> Result<Self> {
        p_set.check_alphabet(&q_set)?;
        for pair in [&forward_pair, &reverse_pair] {
            if pair.divergence.is_nan() || pair.divergence <= 0.0 {
                return Err(Error::SetsOverlap { divergence: pair.divergence });
            }
        }
        let s0_table = LogRatioTable::new(&forward_pair.p_star, &forward_pair.q_star)?;
        let s1_table = LogRatioTable::new(&reverse_pair.q_star, &reverse_pair.p_star)?;
        Ok(ProblemInstance {
            c_fwd: s0_table.max_abs,
            c_rev: s1_table.max_abs,
            p_set,
            q_set,
            forward_pair,
            reverse_pair,
            s0_table,
            s1_table,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.p_set.alphabet().size()
    }

    /// `D(p0*||q0*)`.
    pub fn d_fwd(&self) -> f64 {
        self.forward_pair.divergence
    }

    /// `D(q1*||p1*)`.
    pub fn d_rev(&self) -> f64 {
        self.reverse_pair.divergence
    }

    pub fn p0(&self) -> &Distribution {
        &self.forward_pair.p_star
    }

    pub fn q0(&self) -> &Distribution {
        &self.forward_pair.q_star
    }

    pub fn p1(&self) -> &Distribution {
        &self.reverse_pair.p_star
    }

    pub fn q1(&self) -> &Distribution {
        &self.reverse_pair.q_star
    }

    /// The set the adversary draws from under `h`.
    pub fn set(&self, h: Hypothesis) -> &ConvexSet {
        match h {
            Hypothesis::H0 => &self.p_set,
            Hypothesis::H1 => &self.q_set,
        }
    }
}

/// Solves both closest pairs and derives the support constants.
pub fn build_instance(p_set: &ConvexSet, q_set: &ConvexSet, tol: f64) -> Result<ProblemInstance> {
    let forward = closest_pair(p_set, q_set, Direction::Forward, tol)?;
    let reverse = closest_pair(p_set, q_set, Direction::Reverse, tol)?;
    ProblemInstance::from_parts(p_set.clone(), q_set.clone(), forward, reverse)
}
