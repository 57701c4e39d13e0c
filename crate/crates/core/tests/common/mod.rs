#![allow(dead_code)]

use advseq_core::defaults::SOLVER_TOL;
use advseq_core::geometry::{build_instance, ProblemInstance};
use advseq_core::prob::{ConvexSet, Distribution};

pub fn bern(p: f64) -> Distribution {
    Distribution::bernoulli(p).unwrap()
}

pub fn dist(v: &[f64]) -> Distribution {
    Distribution::new(v.to_vec()).unwrap()
}

/// `hull{Bern(0.1), Bern(0.3)}` against `hull{Bern(0.6), Bern(0.8)}`.
pub fn interval_sets() -> (ConvexSet, ConvexSet) {
    (ConvexSet::new(vec![bern(0.1), bern(0.3)]).unwrap(), ConvexSet::new(vec![bern(0.6), bern(0.8)]).unwrap())
}

pub fn singleton_sets() -> (ConvexSet, ConvexSet) {
    (ConvexSet::singleton(bern(0.2)), ConvexSet::singleton(bern(0.8)))
}

pub fn ternary_sets() -> (ConvexSet, ConvexSet) {
    (
        ConvexSet::new(vec![dist(&[0.6, 0.3, 0.1]), dist(&[0.5, 0.2, 0.3])]).unwrap(),
        ConvexSet::new(vec![dist(&[0.1, 0.3, 0.6]), dist(&[0.2, 0.5, 0.3])]).unwrap(),
    )
}

pub fn instance(sets: (ConvexSet, ConvexSet)) -> ProblemInstance {
    build_instance(&sets.0, &sets.1, SOLVER_TOL).unwrap()
}

pub fn interval() -> ProblemInstance {
    instance(interval_sets())
}

pub fn singleton() -> ProblemInstance {
    instance(singleton_sets())
}

/// Plain `D(p||q)` in bits.
pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).log2()).sum()
}

pub fn kl_bern(a: f64, b: f64) -> f64 {
    kl(&[1.0 - a, a], &[1.0 - b, b])
}

/// Mixture of two vectors, `(1 - t) u + t v`.
pub fn lerp(u: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| (1.0 - t) * a + t * b).collect()
}

pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

/// `sup_{lambda in [0,1)} (-lambda r - log2 sum p^(1-lambda) q^lambda) / (1 - lambda)`
/// by a coarse grid followed by a fine grid around the coarse winner.
pub fn hoeffding_by_lambda_grid(p: &[f64], q: &[f64], r: f64) -> (f64, f64) {
    let f = |l: f64| {
        let psi: f64 = p.iter().zip(q).map(|(a, b)| a.powf(1.0 - l) * b.powf(l)).sum::<f64>().log2();
        (-l * r - psi) / (1.0 - l)
    };
    let top = 1.0 - 1e-7;
    let mut best = (0.0, f(0.0));
    for l in grid(0.0, top, 1e-2) {
        let v = f(l);
        if v > best.1 {
            best = (l, v);
        }
    }
    let (lo, hi) = ((best.0 - 1e-2).max(0.0), (best.0 + 1e-2).min(top));
    for l in grid(lo, hi, 1e-5) {
        let v = f(l);
        if v > best.1 {
            best = (l, v);
        }
    }
    best
}
