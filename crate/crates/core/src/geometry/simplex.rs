//! Away-step Frank-Wolfe over mixture weights on the probability simplex.

use alloc::vec::Vec;

use crate::defaults::LINE_SEARCH_ITERS;
use crate::numerics::golden_section_min;

/// Relative slack for accepting a step whose value ties the current one up
/// to rounding.
const ROUNDING: f64 = 4.0 * f64::EPSILON;

pub(crate) struct FwReport {
    pub value: f64,
    #[allow(dead_code)]
    pub gap: f64,
}

/// Minimizes `f` over the simplex starting from `weights` (updated in place).
///
/// The linear minimization oracle is a vertex of the simplex, so each step
/// moves toward the best vertex or away from the worst active one. Steps are
/// sized by bisection on the directional derivative (golden section on `f`
/// as a fallback) and only accepted when `f` does not increase beyond
/// rounding.
pub(crate) fn minimize<F, G>(weights: &mut [f64], mut f: F, mut grad: G, max_iters: usize, gap_tol: f64) -> FwReport
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> Vec<f64>,
{
    let m = weights.len();
    let mut value = f(weights);
    let mut gap = 0.0;
    if m == 1 {
        return FwReport { value, gap };
    }
    let mut trial = alloc::vec![0.0; m];
    for _ in 0..max_iters {
        let g = grad(weights);
        let inner: f64 = weights.iter().zip(&g).map(|(w, gi)| w * gi).sum();
        let mut fw = 0;
        for i in 1..m {
            if g[i] < g[fw] {
                fw = i;
            }
        }
        let mut away = None::<usize>;
        for i in 0..m {
            if weights[i] > 0.0 && away.is_none_or(|a| g[i] > g[a]) {
                away = Some(i);
            }
        }
        let fw_gap = inner - g[fw];
        gap = fw_gap.max(0.0);
        if fw_gap.is_nan() || fw_gap <= gap_tol {
            break;
        }
        let away = away.unwrap_or(fw);
        let away_gap = g[away] - inner;
        let use_away = away_gap > fw_gap && weights[away] < 1.0;

        let (gamma_max, dir): (f64, Vec<f64>) = if use_away {
            let wa = weights[away];
            let mut d: Vec<f64> = weights.to_vec();
            d[away] -= 1.0;
            (wa / (1.0 - wa), d)
        } else {
            let mut d: Vec<f64> = weights.iter().map(|w| -w).collect();
            d[fw] += 1.0;
            (1.0, d)
        };

        let (gamma, best) = {
            let at = |gamma: f64, trial: &mut [f64]| {
                for i in 0..m {
                    trial[i] = (weights[i] + gamma * dir[i]).max(0.0);
                }
            };
            // bisection on the sign of the directional derivative resolves the
            // step far below the sqrt(eps) floor of value comparisons
            let mut slope = |gamma: f64| {
                at(gamma, &mut trial);
                let g = grad(&trial);
                g.iter().zip(&dir).map(|(a, b)| a * b).sum::<f64>()
            };
            let gamma = if slope(gamma_max) <= 0.0 {
                gamma_max
            } else {
                let (mut lo, mut hi) = (0.0, gamma_max);
                for _ in 0..LINE_SEARCH_ITERS {
                    let mid = 0.5 * (lo + hi);
                    if slope(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            };
            at(gamma, &mut trial);
            let v = f(&trial);
            if v <= value + ROUNDING * value.abs() && gamma > 0.0 {
                (gamma, v)
            } else {
                let mut eval = |gamma: f64| {
                    at(gamma, &mut trial);
                    f(&trial)
                };
                golden_section_min(&mut eval, 0.0, gamma_max, LINE_SEARCH_ITERS)
            }
        };
        if best.is_nan() || best > value + ROUNDING * value.abs() || gamma <= 0.0 {
            break;
        }
        for i in 0..m {
            weights[i] = (weights[i] + gamma * dir[i]).max(0.0);
        }
        if gamma == gamma_max {
            if use_away {
                weights[away] = 0.0;
            } else {
                weights.iter_mut().for_each(|w| *w = 0.0);
                weights[fw] = 1.0;
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        value = f(weights);
    }
    FwReport { value, gap }
}
