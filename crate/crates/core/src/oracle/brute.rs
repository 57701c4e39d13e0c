use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::lattice::{compositions, Lattice};
use crate::geometry::{ClosestPairResult, Direction, ProblemInstance};
use crate::prob::{kl_slices, ConvexSet};
use crate::{Error, Hypothesis, Result};

/// Grid points allowed in one brute-force closest-pair search.
pub const BRUTE_FORCE_BUDGET: u64 = 50_000_000;

/// Every weight vector on the simplex grid with spacing `1/steps`.
fn weight_grid(m: usize, steps: u32) -> Vec<Vec<f64>> {
    let lat = Lattice::new(m, steps);
    let mut out = Vec::with_capacity(lat.level_size(steps));
    let mut c = lat.first(steps);
    loop {
        out.push(c.iter().map(|&x| x as f64 / steps as f64).collect());
        if !lat.advance(&mut c) {
            break;
        }
    }
    out
}

/// Exhaustive closest pair over the weight grids of both sets.
pub fn brute_force_closest_pair(
    p_set: &ConvexSet,
    q_set: &ConvexSet,
    direction: Direction,
    grid_step: f64,
) -> Result<ClosestPairResult> {
    brute_force_closest_pair_with_budget(p_set, q_set, direction, grid_step, BRUTE_FORCE_BUDGET)
}

pub fn brute_force_closest_pair_with_budget(
    p_set: &ConvexSet,
    q_set: &ConvexSet,
    direction: Direction,
    grid_step: f64,
    budget: u64,
) -> Result<ClosestPairResult> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::Domain(format!("grid step {grid_step} must lie in (0, 1]")));
    }
    if p_set.alphabet() != q_set.alphabet() {
        return Err(Error::Dimension { expected: p_set.alphabet().size(), found: q_set.alphabet().size() });
    }
    let steps = libm::round(1.0 / grid_step).max(1.0) as u32;
    let np = compositions(steps as u64, p_set.num_vertices() as u64);
    let nq = compositions(steps as u64, q_set.num_vertices() as u64);
    let required = np.saturating_mul(nq);
    if required > budget {
        return Err(Error::Resource { required, budget });
    }
    let pw = weight_grid(p_set.num_vertices(), steps);
    let qw = weight_grid(q_set.num_vertices(), steps);
    let pm: Vec<_> = pw.iter().map(|w| p_set.mix_unchecked(w)).collect();
    let qm: Vec<_> = qw.iter().map(|w| q_set.mix_unchecked(w)).collect();
    let mut best = (f64::INFINITY, 0usize, 0usize);
    for (i, p) in pm.iter().enumerate() {
        for (j, q) in qm.iter().enumerate() {
            let d = match direction {
                Direction::Forward => kl_slices(p.probs(), q.probs()),
                Direction::Reverse => kl_slices(q.probs(), p.probs()),
            };
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let (divergence, i, j) = best;
    Ok(ClosestPairResult {
        p_star: pm[i].clone(),
        q_star: qm[j].clone(),
        p_weights: pw[i].clone(),
        q_weights: qw[j].clone(),
        divergence,
        direction,
        converged: true,
        iterations: 0,
        objective_trace: vec![divergence],
    })
}

/// One-step drift slack of a statistic at a vertex: under `H0`,
/// `E_v[log2(p0*/q0*)] - D(p0*||q0*)` for vertex `v` of `P`; under `H1`,
/// `E_v[log2(q1*/p1*)] - D(q1*||p1*)` for vertex `v` of `Q`.
pub fn check_submartingale_step(
    instance: &ProblemInstance,
    hypothesis: Hypothesis,
    vertex_index: usize,
) -> Result<f64> {
    let v = instance
        .set(hypothesis)
        .vertex(vertex_index)
        .ok_or_else(|| Error::Domain(format!("vertex index {vertex_index} out of range")))?;
    Ok(match hypothesis {
        Hypothesis::H0 => v.expect(&instance.s0_table.values) - instance.d_fwd(),
        Hypothesis::H1 => v.expect(&instance.s1_table.values) - instance.d_rev(),
    })
}
