//! Finite-alphabet probability primitives.

use alloc::format;
use alloc::vec::Vec;

use crate::defaults::{MIN_MASS, SUM_TOL};
use crate::numerics::{self, log2, powf, NeumaierSum};
use crate::{Error, Result};

/// A finite alphabet `{0, .., size - 1}` with at least two symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::Domain(format!("alphabet needs at least 2 symbols, got {size}")));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }
}

/// A probability vector whose entries are all at least [`MIN_MASS`].
///
/// Strict positivity keeps every pair of distributions mutually absolutely
/// continuous, so every log-likelihood ratio used downstream is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `probs` and renormalizes it if the sum is within [`SUM_TOL`]
    /// of one. Anything else is rejected, never clipped.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Alphabet::new(probs.len())
            .map_err(|_| Error::InvalidDistribution(format!("needs at least 2 entries, got {}", probs.len())))?;
        for (x, &m) in probs.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::InvalidDistribution(format!("entry {x} is not finite")));
            }
            if m < MIN_MASS {
                return Err(Error::InvalidDistribution(format!(
                    "entry {x} = {m:e} is below the minimum mass {MIN_MASS:e} (all distributions must be mutually absolutely continuous)"
                )));
            }
        }
        let total = numerics::sum(probs.iter().copied());
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}, not 1 (tolerance {SUM_TOL:e})")));
        }
        let probs = probs.into_iter().map(|m| m / total).collect();
        Ok(Distribution { probs })
    }

    /// `Bern(p)`: symbol 1 has mass `p`, symbol 0 has mass `1 - p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(alloc::vec![1.0 - p, p])
    }

    pub fn uniform(k: usize) -> Result<Self> {
        Alphabet::new(k)?;
        Self::new(alloc::vec![1.0 / k as f64; k])
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.probs.len())
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// Expectation of `f` under this distribution.
    pub fn expect(&self, f: &[f64]) -> f64 {
        numerics::dot(&self.probs, f)
    }

    /// Inverse-CDF sample for a uniform draw `u` in `[0, 1)`.
    pub fn sample_index(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (x, &m) in self.probs.iter().enumerate() {
            acc += m;
            if u < acc {
                return x;
            }
        }
        self.probs.len() - 1
    }

    pub(crate) fn from_mixture(vertices: &[Distribution], weights: &[f64]) -> Self {
        let k = vertices[0].len();
        let mut probs = alloc::vec![0.0; k];
        for (x, slot) in probs.iter_mut().enumerate() {
            let mut acc = NeumaierSum::new();
            for (v, &w) in vertices.iter().zip(weights) {
                acc.add(w.max(0.0) * v.probs[x]);
            }
            *slot = acc.value();
        }
        let total = numerics::sum(probs.iter().copied());
        for m in &mut probs {
            *m = (*m / total).max(MIN_MASS);
        }
        Distribution { probs }
    }

    fn check_same_alphabet(&self, other: &Distribution) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension { expected: self.len(), found: other.len() });
        }
        Ok(())
    }
}

/// `D(p||q) = sum_x p(x) log2(p(x)/q(x))`, in bits.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    p.check_same_alphabet(q)?;
    Ok(kl_slices(p.probs(), q.probs()))
}

pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> f64 {
    let d = numerics::sum(p.iter().zip(q).map(|(&a, &b)| a * log2(a / b)));
    d.max(0.0)
}

/// `psi_lambda(p||q) = log2 sum_x p(x)^(1-lambda) q(x)^lambda`, in bits.
///
/// Equals `-lambda` times the Renyi divergence of order `1 - lambda`.
pub fn renyi_psi(p: &Distribution, q: &Distribution, lambda: f64) -> Result<f64> {
    p.check_same_alphabet(q)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda = {lambda} is outside [0, 1]")));
    }
    Ok(psi_slices(p.probs(), q.probs(), lambda))
}

pub(crate) fn psi_slices(p: &[f64], q: &[f64], lambda: f64) -> f64 {
    if lambda == 0.0 || lambda == 1.0 {
        return 0.0;
    }
    log2(numerics::sum(p.iter().zip(q).map(|(&a, &b)| powf(a, 1.0 - lambda) * powf(b, lambda))))
}

/// Per-symbol `log2(numerator(x) / denominator(x))` and its largest magnitude.
#[derive(Clone, Debug, PartialEq)]
pub struct LogRatioTable {
    pub numerator: Distribution,
    pub denominator: Distribution,
    pub values: Vec<f64>,
    /// `max_x |values[x]|`, the support constant of the pair (bits).
    pub max_abs: f64,
}

impl LogRatioTable {
    pub fn new(numerator: &Distribution, denominator: &Distribution) -> Result<Self> {
        numerator.check_same_alphabet(denominator)?;
        let values: Vec<f64> = numerator.probs().iter().zip(denominator.probs()).map(|(&a, &b)| log2(a / b)).collect();
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(LogRatioTable { numerator: numerator.clone(), denominator: denominator.clone(), values, max_abs })
    }

    /// `sum_x counts[x] * values[x]`, the statistic of a sequence with this type.
    #[inline]
    pub fn statistic(&self, counts: &[u32]) -> f64 {
        let mut acc = NeumaierSum::new();
        for (&c, &v) in counts.iter().zip(&self.values) {
            acc.add(c as f64 * v);
        }
        acc.value()
    }
}

/// `log_ratio_table(num, den)`.
pub fn log_ratio_table(num: &Distribution, den: &Distribution) -> Result<LogRatioTable> {
    LogRatioTable::new(num, den)
}

/// The convex hull of a non-empty list of distributions on one alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexSet {
    vertices: Vec<Distribution>,
}

impl ConvexSet {
    pub fn new(vertices: Vec<Distribution>) -> Result<Self> {
        let first = vertices.first().ok_or_else(|| Error::Domain("a convex set needs at least one vertex".into()))?;
        let k = first.len();
        for v in &vertices {
            if v.len() != k {
                return Err(Error::Dimension { expected: k, found: v.len() });
            }
        }
        Ok(ConvexSet { vertices })
    }

    pub fn singleton(d: Distribution) -> Self {
        ConvexSet { vertices: alloc::vec![d] }
    }

    pub fn vertices(&self) -> &[Distribution] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Option<&Distribution> {
        self.vertices.get(i)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.vertices[0].alphabet()
    }

    /// The convex combination `sum_i weights[i] * vertex_i`.
    pub fn mix(&self, weights: &[f64]) -> Result<Distribution> {
        if weights.len() != self.vertices.len() {
            return Err(Error::Domain(format!("expected {} weights, got {}", self.vertices.len(), weights.len())));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Domain(format!("weight {i} = {w} is negative or not finite")));
            }
        }
        let total = numerics::sum(weights.iter().copied());
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::Domain(format!("weights sum to {total}, not 1")));
        }
        Ok(self.mix_unchecked(weights))
    }

    pub(crate) fn mix_unchecked(&self, weights: &[f64]) -> Distribution {
        Distribution::from_mixture(&self.vertices, weights)
    }

    pub(crate) fn check_alphabet(&self, other: &ConvexSet) -> Result<()> {
        let (a, b) = (self.alphabet().size(), other.alphabet().size());
        if a != b {
            return Err(Error::Dimension { expected: a, found: b });
        }
        Ok(())
    }
}

/// `mix(set, weights)`.
pub fn mix(set: &ConvexSet, weights: &[f64]) -> Result<Distribution> {
    set.mix(weights)
}
