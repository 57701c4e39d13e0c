//! The lattice of sequence types: count vectors of length `k` summing to `t`,
//! ranked lexicographically within each level.

use alloc::vec;
use alloc::vec::Vec;

/// Number of compositions of `m` into `parts` non-negative parts, saturating.
pub fn compositions(m: u64, parts: u64) -> u64 {
    if parts == 0 {
        return u64::from(m == 0);
    }
    binomial(m + parts - 1, parts - 1)
}

/// `C(n, r)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Total number of types with `t <= horizon` over `k` symbols, `C(horizon + k, k)`.
pub fn total_states(k: usize, horizon: u32) -> u64 {
    binomial(horizon as u64 + k as u64, k as u64)
}

/// Ranking tables for one alphabet size and horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    k: usize,
    horizon: u32,
    /// `table[parts][m]` = compositions of `m` into `parts` parts.
    table: Vec<Vec<u64>>,
}

impl Lattice {
    pub fn new(k: usize, horizon: u32) -> Self {
        let h = horizon as usize;
        let mut table = vec![vec![0u64; h + 1]; k + 1];
        table[0][0] = 1;
        for (parts, row) in table.iter_mut().enumerate().skip(1) {
            for (m, cell) in row.iter_mut().enumerate() {
                *cell = compositions(m as u64, parts as u64);
            }
        }
        Lattice { k, horizon, table }
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Number of types at level `t`.
    pub fn level_size(&self, t: u32) -> usize {
        self.table[self.k][t as usize] as usize
    }

    /// Lexicographic rank of `counts` among the types of its level.
    pub fn rank(&self, counts: &[u32]) -> usize {
        let mut remaining: u32 = counts.iter().sum();
        let mut r = 0u64;
        for (i, &c) in counts.iter().enumerate().take(self.k - 1) {
            let parts = self.k - i - 1;
            for v in 0..c {
                r += self.table[parts][(remaining - v) as usize];
            }
            remaining -= c;
        }
        r as usize
    }

    /// First type of level `t` in rank order: all mass on the last symbol.
    pub fn first(&self, t: u32) -> Vec<u32> {
        let mut c = vec![0u32; self.k];
        c[self.k - 1] = t;
        c
    }

    /// Advances `counts` to the next type of the same level; false at the last one.
    pub fn advance(&self, counts: &mut [u32]) -> bool {
        let k = self.k;
        let mut tail = 0u32;
        for j in (0..k - 1).rev() {
            tail += counts[j + 1];
            if tail > 0 {
                counts[j] += 1;
                for c in counts[j + 1..].iter_mut() {
                    *c = 0;
                }
                counts[k - 1] = tail - 1;
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_follow_enumeration_order() {
        for k in 2..=4 {
            let lat = Lattice::new(k, 7);
            for t in 0..=7 {
                let mut c = lat.first(t);
                let mut n = 0;
                loop {
                    assert_eq!(lat.rank(&c), n);
                    assert_eq!(c.iter().sum::<u32>(), t);
                    n += 1;
                    if !lat.advance(&mut c) {
                        break;
                    }
                }
                assert_eq!(n, lat.level_size(t));
            }
        }
    }

    #[test]
    fn totals() {
        assert_eq!(total_states(2, 60), 1891);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(total_states(40, 10_000), u64::MAX);
    }
}
