//! Retrograde P-position sieve over all sorted `k`-jar positions with every
//! jar at most `limit`.
//!
//! Sorted positions are visited in lexicographic order. Every successor of a
//! position is componentwise smaller once sorted, hence lexicographically
//! earlier, so a position still unmarked when visited has no P successor and
//! is itself P. Each P-position then marks all of its predecessors
//! (`pos + t * subset`) as N.

use crate::error::{Error, Result};

/// Largest cube `(limit + 1)^jars` the sieve will allocate, in bits.
pub const MAX_CUBE_BITS: u64 = 1 << 30;

#[derive(Clone, Debug)]
pub struct Sieve {
    jars: usize,
    limit: u64,
    /// Bit per cell of the `(limit+1)^jars` cube; only sorted cells are used.
    n_bits: Vec<u64>,
    p_count: usize,
}

impl Sieve {
    pub fn build(jars: usize, limit: u64) -> Result<Self> {
        let side = limit + 1;
        let cube = (0..jars).try_fold(1u64, |acc, _| acc.checked_mul(side));
        let cube = match cube {
            Some(c) if c <= MAX_CUBE_BITS => c,
            _ => {
                return Err(Error::limit(
                    "sieve cells",
                    cube.unwrap_or(u64::MAX),
                    MAX_CUBE_BITS,
                ))
            }
        };
        let mut sieve = Sieve {
            jars,
            limit,
            n_bits: vec![0u64; cube.div_ceil(64) as usize],
            p_count: 0,
        };
        sieve.run();
        Ok(sieve)
    }

    pub fn jars(&self) -> usize {
        self.jars
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Number of sorted P-positions inside the cube.
    pub fn p_count(&self) -> usize {
        self.p_count
    }

    fn index(&self, sorted: &[u64]) -> usize {
        let side = self.limit + 1;
        sorted.iter().fold(0u64, |acc, &v| acc * side + v) as usize
    }

    fn is_marked(&self, idx: usize) -> bool {
        self.n_bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn mark(&mut self, idx: usize) {
        self.n_bits[idx / 64] |= 1 << (idx % 64);
    }

    fn run(&mut self) {
        let k = self.jars;
        let limit = self.limit;
        let mut pos = vec![0u64; k];
        let mut scratch = vec![0u64; k];
        loop {
            if !self.is_marked(self.index(&pos)) {
                self.p_count += 1;
                for mask in 1u32..(1u32 << k) {
                    let top = (0..k)
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| pos[i])
                        .max()
                        .unwrap();
                    for t in 1..=limit - top {
                        for i in 0..k {
                            scratch[i] = pos[i] + if mask >> i & 1 == 1 { t } else { 0 };
                        }
                        insertion_sort(&mut scratch);
                        let idx = self.index(&scratch);
                        self.mark(idx);
                    }
                }
            }
            if !next_sorted(&mut pos, limit) {
                break;
            }
        }
    }

    /// P status of a sorted position inside the cube.
    pub fn is_p(&self, sorted: &[u64]) -> Result<bool> {
        if sorted.len() != self.jars {
            return Err(Error::InvalidParameter(format!(
                "sieve covers {} jars, position has {}",
                self.jars,
                sorted.len()
            )));
        }
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        if let Some(&m) = sorted.last().filter(|&&m| m > self.limit) {
            return Err(Error::limit("jar value", m, self.limit));
        }
        Ok(!self.is_marked(self.index(sorted)))
    }

    /// All sorted P-positions in lexicographic order.
    pub fn p_positions(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.p_count);
        let mut pos = vec![0u64; self.jars];
        loop {
            if !self.is_marked(self.index(&pos)) {
                out.push(pos.clone());
            }
            if !next_sorted(&mut pos, self.limit) {
                break;
            }
        }
        out
    }
}

fn insertion_sort(v: &mut [u64]) {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Advances a nondecreasing tuple to its lexicographic successor.
fn next_sorted(pos: &mut [u64], limit: u64) -> bool {
    let Some(i) = (0..pos.len()).rev().find(|&i| pos[i] < limit) else {
        return false;
    };
    pos[i] += 1;
    let v = pos[i];
    for x in &mut pos[i + 1..] {
        *x = v;
    }
    true
}
