//! Fixed-length tradeoff: the Hoeffding exponent in its dual (`psi`) form and
//! the hardest pair of the two sets.

use alloc::format;
use alloc::vec::Vec;

use super::closest::{closest_pair, Direction};
use super::simplex;
use crate::defaults::{INNER_ITER_CAP, LAMBDA_EPS, LAMBDA_SEARCH_ITERS, OUTER_ITER_CAP};
use crate::numerics::{exp2, golden_section_max, log2, powf};
use crate::prob::{kl_slices, psi_slices, ConvexSet, Distribution};
use crate::{Error, Hypothesis, Result};

const LN2: f64 = core::f64::consts::LN_2;

/// `(-lambda r - psi_lambda(p||q)) / (1 - lambda)` for `lambda < 1`.
pub fn hoeffding_objective(p: &Distribution, q: &Distribution, r: f64, lambda: f64) -> f64 {
    objective(p.probs(), q.probs(), r, lambda)
}

fn objective(p: &[f64], q: &[f64], r: f64, lambda: f64) -> f64 {
    (-lambda * r - psi_slices(p, q, lambda)) / (1.0 - lambda)
}

/// Returns `(lambda*, s)` with `s = sup_{0<=lambda<=1} (-lambda r - psi_lambda(p||q)) / (1 - lambda)`.
///
/// `r = 0` gives `(1, D(q||p))` (the limit at `lambda -> 1`); `r >= D(p||q)`
/// gives `(0, 0)`. Otherwise `lambda*` is found by golden-section search on
/// `[LAMBDA_EPS, 1 - LAMBDA_EPS]`.
pub fn hoeffding_exponent_pair(p: &Distribution, q: &Distribution, r: f64) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return Err(Error::Dimension { expected: p.len(), found: q.len() });
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("type-II exponent floor r = {r} must be >= 0")));
    }
    Ok(exponent_slices(p.probs(), q.probs(), r))
}

fn exponent_slices(p: &[f64], q: &[f64], r: f64) -> (f64, f64) {
    if r == 0.0 {
        return (1.0, kl_slices(q, p));
    }
    if r >= kl_slices(p, q) {
        return (0.0, 0.0);
    }
    let (lambda, s) = golden_section_max(|l| objective(p, q, r, l), LAMBDA_EPS, 1.0 - LAMBDA_EPS, LAMBDA_SEARCH_ITERS);
    (lambda, s.max(0.0))
}

/// Gradient of the exponent with respect to `p` and `q` at a fixed `lambda`
/// (envelope theorem: `lambda*` does not move to first order).
fn exponent_gradient(p: &[f64], q: &[f64], lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let k = p.len();
    if lambda == 0.0 {
        return (alloc::vec![0.0; k], alloc::vec![0.0; k]);
    }
    if lambda == 1.0 {
        // exponent is D(q||p)
        let gp = p.iter().zip(q).map(|(a, b)| -b / (a * LN2)).collect();
        let gq = p.iter().zip(q).map(|(a, b)| log2(b / a) + 1.0 / LN2).collect();
        return (gp, gq);
    }
    let z = exp2(psi_slices(p, q, lambda));
    let gp = p.iter().zip(q).map(|(&a, &b)| -powf(a, -lambda) * powf(b, lambda) / (z * LN2)).collect();
    let gq = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| -(lambda / (1.0 - lambda)) * powf(a, 1.0 - lambda) * powf(b, lambda - 1.0) / (z * LN2))
        .collect();
    (gp, gq)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HoeffdingSolution {
    /// Type-II exponent floor (bits).
    pub r: f64,
    pub p_h: Distribution,
    pub q_h: Distribution,
    pub p_weights: Vec<f64>,
    pub q_weights: Vec<f64>,
    pub lambda_star: f64,
    /// Hoeffding exponent of `(p_h, q_h)` at `r` (bits).
    pub s_star: f64,
    pub converged: bool,
}

impl HoeffdingSolution {
    /// `psi_{lambda*}(p_h || q_h)`.
    pub fn psi_star(&self) -> f64 {
        psi_slices(self.p_h.probs(), self.q_h.probs(), self.lambda_star)
    }
}

/// Minimizes the Hoeffding exponent over `P x Q`.
///
/// Coordinate descent alternates Frank-Wolfe solves over the `p` and `q`
/// weights, restarted from every vertex pair; the lowest objective wins with
/// ties going to the earliest start. When the minimum is zero (`r` at or
/// above the forward closest-pair divergence) the forward closest pair is
/// returned with `lambda* = 0`.
pub fn hardest_pair(p_set: &ConvexSet, q_set: &ConvexSet, r: f64, tol: f64) -> Result<HoeffdingSolution> {
    p_set.check_alphabet(q_set)?;
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("type-II exponent floor r = {r} must be >= 0")));
    }
    let forward = closest_pair(p_set, q_set, Direction::Forward, tol)?;

    let value = |a: &[f64], b: &[f64]| {
        let p = p_set.mix_unchecked(a);
        let q = q_set.mix_unchecked(b);
        exponent_slices(p.probs(), q.probs(), r).1
    };
    let gap_tol = tol * 1e-3;

    let mut best: Option<(f64, Vec<f64>, Vec<f64>, bool)> = None;
    for i in 0..p_set.num_vertices() {
        for j in 0..q_set.num_vertices() {
            let mut a = alloc::vec![0.0; p_set.num_vertices()];
            let mut b = alloc::vec![0.0; q_set.num_vertices()];
            a[i] = 1.0;
            b[j] = 1.0;
            let mut current = value(&a, &b);
            let mut converged = false;
            for _ in 0..OUTER_ITER_CAP {
                let q = q_set.mix_unchecked(&b);
                simplex::minimize(
                    &mut a,
                    |a| exponent_slices(p_set.mix_unchecked(a).probs(), q.probs(), r).1,
                    |a| {
                        let p = p_set.mix_unchecked(a);
                        let (lambda, _) = exponent_slices(p.probs(), q.probs(), r);
                        let (gp, _) = exponent_gradient(p.probs(), q.probs(), lambda);
                        p_set.vertices().iter().map(|v| v.expect(&gp)).collect()
                    },
                    INNER_ITER_CAP,
                    gap_tol,
                );
                let p = p_set.mix_unchecked(&a);
                let report = simplex::minimize(
                    &mut b,
                    |b| exponent_slices(p.probs(), q_set.mix_unchecked(b).probs(), r).1,
                    |b| {
                        let q = q_set.mix_unchecked(b);
                        let (lambda, _) = exponent_slices(p.probs(), q.probs(), r);
                        let (_, gq) = exponent_gradient(p.probs(), q.probs(), lambda);
                        q_set.vertices().iter().map(|v| v.expect(&gq)).collect()
                    },
                    INNER_ITER_CAP,
                    gap_tol,
                );
                let improvement = current - report.value;
                current = report.value.min(current);
                if improvement < tol / 10.0 {
                    converged = true;
                    break;
                }
            }
            if best.as_ref().is_none_or(|(v, ..)| current < *v) {
                best = Some((current, a, b, converged));
            }
        }
    }
    let (s_star, p_weights, q_weights, converged) = best.expect("at least one vertex pair");

    if s_star <= tol {
        return Ok(HoeffdingSolution {
            r,
            p_h: forward.p_star,
            q_h: forward.q_star,
            p_weights: forward.p_weights,
            q_weights: forward.q_weights,
            lambda_star: 0.0,
            s_star: 0.0,
            converged: forward.converged,
        });
    }
    let p_h = p_set.mix_unchecked(&p_weights);
    let q_h = q_set.mix_unchecked(&q_weights);
    let (lambda_star, s_star) = exponent_slices(p_h.probs(), q_h.probs(), r);
    Ok(HoeffdingSolution { r, p_h, q_h, p_weights, q_weights, lambda_star, s_star, converged })
}

/// Slack of the fixed-length vertex inequality at one vertex.
///
/// With `side = H1` the vertex `v` is taken from `set` (meant to be `Q`) and
/// the slack is `2^psi* - sum_x v(x) (p_h(x)/q_h(x))^(1-lambda*)`; with
/// `side = H0` (`set` meant to be `P`) it is
/// `2^psi* - sum_x v(x) (q_h(x)/p_h(x))^lambda*`. Linearity in `v` extends a
/// non-negative slack at every vertex to the whole hull.
pub fn check_hoeffding_vertex_inequality(
    sol: &HoeffdingSolution,
    set: &ConvexSet,
    side: Hypothesis,
    vertex_index: usize,
) -> Result<f64> {
    let v =
        set.vertex(vertex_index).ok_or_else(|| Error::Domain(format!("vertex index {vertex_index} out of range")))?;
    if v.len() != sol.p_h.len() {
        return Err(Error::Dimension { expected: sol.p_h.len(), found: v.len() });
    }
    let lambda = sol.lambda_star;
    let ratio: Vec<f64> = match side {
        Hypothesis::H1 => {
            sol.p_h.probs().iter().zip(sol.q_h.probs()).map(|(&a, &b)| powf(a / b, 1.0 - lambda)).collect()
        }
        Hypothesis::H0 => sol.p_h.probs().iter().zip(sol.q_h.probs()).map(|(&a, &b)| powf(b / a, lambda)).collect(),
    };
    Ok(exp2(sol.psi_star()) - v.expect(&ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::kl_divergence;

    fn bern(p: f64) -> Distribution {
        Distribution::bernoulli(p).unwrap()
    }

    #[test]
    fn zero_floor_gives_reverse_divergence() {
        let (p, q) = (bern(0.2), bern(0.7));
        let (lambda, s) = hoeffding_exponent_pair(&p, &q, 0.0).unwrap();
        assert_eq!(lambda, 1.0);
        assert!((s - kl_divergence(&q, &p).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn floor_above_forward_divergence_gives_zero() {
        let (p, q) = (bern(0.2), bern(0.7));
        let d = kl_divergence(&p, &q).unwrap();
        assert_eq!(hoeffding_exponent_pair(&p, &q, d).unwrap(), (0.0, 0.0));
        assert_eq!(hoeffding_exponent_pair(&p, &q, d + 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn rejects_negative_floor() {
        assert!(matches!(hoeffding_exponent_pair(&bern(0.2), &bern(0.7), -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn small_floor_approaches_reverse_divergence() {
        let (p, q) = (bern(0.2), bern(0.8));
        let (_, s) = hoeffding_exponent_pair(&p, &q, 1e-4).unwrap();
        let d_rev = kl_divergence(&q, &p).unwrap();
        assert!(s < d_rev && s > d_rev - 0.05, "s = {s}");
    }

    #[test]
    fn singleton_sets_force_the_pair() {
        let (p, q) = (bern(0.2), bern(0.8));
        let sol = hardest_pair(&ConvexSet::singleton(p.clone()), &ConvexSet::singleton(q.clone()), 0.3, 1e-10).unwrap();
        let (lambda, s) = hoeffding_exponent_pair(&p, &q, 0.3).unwrap();
        assert_eq!(sol.s_star, s);
        assert_eq!(sol.lambda_star, lambda);
        assert_eq!(sol.p_h, p);
        for side in [Hypothesis::H0, Hypothesis::H1] {
            let set =
                if side == Hypothesis::H0 { ConvexSet::singleton(p.clone()) } else { ConvexSet::singleton(q.clone()) };
            let slack = check_hoeffding_vertex_inequality(&sol, &set, side, 0).unwrap();
            assert!(slack.abs() < 1e-12, "slack {slack}");
        }
    }
}
