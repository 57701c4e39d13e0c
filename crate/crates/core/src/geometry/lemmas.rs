//! Vertex-level checks of the inequalities the achievability arguments rely on.

use alloc::format;
use alloc::vec::Vec;

use super::closest::ProblemInstance;
use crate::prob::Distribution;
use crate::{Error, Hypothesis, Result};

fn same_alphabet(instance: &ProblemInstance, d: &Distribution) -> Result<()> {
    if d.len() != instance.alphabet_size() {
        return Err(Error::Dimension { expected: instance.alphabet_size(), found: d.len() });
    }
    Ok(())
}

/// `E_p[log2(p0*(X)/q0*(X))] - D(p0*||q0*)` for `p` in `P`.
///
/// Non-negative for every member of `P` and zero at `p0*`.
pub fn check_pythagorean(instance: &ProblemInstance, p: &Distribution) -> Result<f64> {
    same_alphabet(instance, p)?;
    Ok(p.expect(&instance.s0_table.values) - instance.d_fwd())
}

/// `E_q[log2(q1*(X)/p1*(X))] - D(q1*||p1*)` for `q` in `Q`.
pub fn check_pythagorean_reverse(instance: &ProblemInstance, q: &Distribution) -> Result<f64> {
    same_alphabet(instance, q)?;
    Ok(q.expect(&instance.s1_table.values) - instance.d_rev())
}

/// Linear-scale likelihood-ratio expectation at one vertex.
///
/// `sampled = H1` draws `X` from vertex `vertex_index` of `Q` and returns
/// `E[p0*(X)/q0*(X)]`; `sampled = H0` draws from `P` and returns
/// `E[q1*(X)/p1*(X)]`. Both are at most one.
pub fn check_likelihood_ratio_bound(
    instance: &ProblemInstance,
    sampled: Hypothesis,
    vertex_index: usize,
) -> Result<f64> {
    let v = instance
        .set(sampled)
        .vertex(vertex_index)
        .ok_or_else(|| Error::Domain(format!("vertex index {vertex_index} out of range")))?;
    let (num, den) = match sampled {
        Hypothesis::H1 => (instance.p0(), instance.q0()),
        Hypothesis::H0 => (instance.q1(), instance.p1()),
    };
    let ratio: Vec<f64> = num.probs().iter().zip(den.probs()).map(|(a, b)| a / b).collect();
    Ok(v.expect(&ratio))
}
