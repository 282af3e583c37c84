//! Structural tests that predict or bound `CM(S)` without running the
//! solver: the size-three rule, the linear equation systems that describe
//! the sets of size 4 through 7 coverable by three amounts, and disjoint
//! subsets with equal sums.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jars::JarSet;
use crate::solver::{self, solve};

/// Largest set [`find_equal_sum_pairs`] scans (it walks all `2^n` subsets).
pub const EQUAL_SUM_MAX_LEN: usize = 20;
/// At most this many pairs are listed in a report; `x` is unaffected.
pub const MAX_REPORTED_PAIRS: usize = 1024;

/// One linear equality over `k1..kn` (1-based indices into ascending `S`).
#[derive(Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: &'static [(u64, usize)],
    pub rhs: &'static [(u64, usize)],
}

impl Equation {
    fn side(terms: &[(u64, usize)], ks: &[u64]) -> u64 {
        terms.iter().map(|&(c, i)| c * ks[i - 1]).sum()
    }

    pub fn holds(&self, ks: &[u64]) -> bool {
        Self::side(self.lhs, ks) == Self::side(self.rhs, ks)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn side(f: &mut fmt::Formatter<'_>, terms: &[(u64, usize)]) -> fmt::Result {
            for (n, &(c, i)) in terms.iter().enumerate() {
                if n > 0 {
                    f.write_str(" + ")?;
                }
                if c != 1 {
                    write!(f, "{c}")?;
                }
                write!(f, "k{i}")?;
            }
            Ok(())
        }
        side(f, self.lhs)?;
        f.write_str(" = ")?;
        side(f, self.rhs)
    }
}

/// The equations satisfied by ascending `S` when it equals a given set of
/// sums of three amounts (the `id`, written over `a1, a2, a3`).
#[derive(Debug, PartialEq, Eq)]
pub struct EquationSystem {
    pub id: &'static str,
    pub size: usize,
    pub equations: &'static [Equation],
}

impl EquationSystem {
    /// All equations hold on `ks` (ascending, length `self.size`).
    pub fn matches(&self, ks: &[u64]) -> bool {
        ks.len() == self.size && self.equations.iter().all(|e| e.holds(ks))
    }

    pub fn summary(&self) -> SystemMatch {
        SystemMatch {
            id: self.id.to_string(),
            equations: self.equations.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemMatch {
    pub id: String,
    pub equations: Vec<String>,
}

const fn eq(lhs: &'static [(u64, usize)], rhs: &'static [(u64, usize)]) -> Equation {
    Equation { lhs, rhs }
}

pub static CM3_SYSTEMS: &[EquationSystem] = &[
    // |S| = 4
    EquationSystem {
        id: "{a1, a2, a1+a2, a1+a3}",
        size: 4,
        equations: &[eq(&[(1, 1), (1, 2)], &[(1, 3)])],
    },
    EquationSystem {
        id: "{a1, a2, a3, a1+a2+a3}",
        size: 4,
        equations: &[eq(&[(1, 1), (1, 2), (1, 3)], &[(1, 4)])],
    },
    EquationSystem {
        id: "{a1, a3, a1+a2, a2+a3}",
        size: 4,
        equations: &[eq(&[(1, 1), (1, 4)], &[(1, 2), (1, 3)])],
    },
    EquationSystem {
        id: "{a1, a1+a2, a1+a3, a2+a3}",
        size: 4,
        equations: &[eq(&[(2, 1), (1, 4)], &[(1, 2), (1, 3)])],
    },
    EquationSystem {
        id: "{a1+a2, a1+a3, a2+a3, a1+a2+a3}",
        size: 4,
        equations: &[eq(&[(1, 1), (1, 2), (1, 3)], &[(2, 4)])],
    },
    // |S| = 5
    EquationSystem {
        id: "{a1, a2, a3, a1+a3, a2+a3}",
        size: 5,
        equations: &[
            eq(&[(1, 1), (1, 3)], &[(1, 4)]),
            eq(&[(1, 2), (1, 3)], &[(1, 5)]),
        ],
    },
    EquationSystem {
        id: "{a1, a2, a3, a1+a3, a1+a2+a3}",
        size: 5,
        equations: &[
            eq(&[(1, 1), (1, 3)], &[(1, 4)]),
            eq(&[(1, 1), (1, 2), (1, 3)], &[(1, 5)]),
        ],
    },
    EquationSystem {
        id: "{a1, a2, a1+a2, a1+a3, a2+a3}",
        size: 5,
        equations: &[
            eq(&[(1, 1), (1, 2)], &[(1, 3)]),
            eq(&[(1, 2), (1, 4)], &[(1, 1), (1, 5)]),
        ],
    },
    EquationSystem {
        id: "{a1, a2, a1+a2, a1+a3, a1+a2+a3}",
        size: 5,
        equations: &[
            eq(&[(1, 1), (1, 2)], &[(1, 3)]),
            eq(&[(1, 2), (1, 4)], &[(1, 5)]),
        ],
    },
    EquationSystem {
        id: "{a1, a1+a2, a1+a3, a2+a3, a1+a2+a3}",
        size: 5,
        equations: &[
            eq(&[(1, 1), (1, 4)], &[(1, 5)]),
            eq(&[(1, 2), (1, 3)], &[(1, 1), (1, 5)]),
        ],
    },
    EquationSystem {
        id: "{a1, a2, a1+a3, a2+a3, a1+a2+a3}",
        size: 5,
        equations: &[
            eq(&[(1, 1), (1, 4)], &[(1, 5)]),
            eq(&[(1, 2), (1, 3)], &[(1, 5)]),
        ],
    },
    // |S| = 6
    EquationSystem {
        id: "{a1, a2, a3, a1+a2, a1+a3, a2+a3}",
        size: 6,
        equations: &[
            eq(&[(1, 1), (1, 2)], &[(1, 4)]),
            eq(&[(1, 1), (1, 3)], &[(1, 5)]),
            eq(&[(1, 2), (1, 3)], &[(1, 6)]),
        ],
    },
    EquationSystem {
        id: "{a1, a2, a3, a1+a3, a2+a3, a1+a2+a3}",
        size: 6,
        equations: &[
            eq(&[(1, 1), (1, 3)], &[(1, 4)]),
            eq(&[(1, 2), (1, 3)], &[(1, 5)]),
            eq(&[(1, 1), (1, 2), (1, 3)], &[(1, 6)]),
        ],
    },
    EquationSystem {
        id: "{a1, a2, a1+a2, a1+a3, a2+a3, a1+a2+a3}",
        size: 6,
        equations: &[
            eq(&[(1, 1), (1, 2)], &[(1, 3)]),
            eq(&[(1, 2), (1, 4)], &[(1, 6)]),
            eq(&[(1, 1), (1, 5)], &[(1, 6)]),
        ],
    },
    // |S| = 7
    EquationSystem {
        id: "{a1, a2, a3, a1+a2, a1+a3, a2+a3, a1+a2+a3}",
        size: 7,
        equations: &[
            eq(&[(1, 1), (1, 2)], &[(1, 4)]),
            eq(&[(1, 1), (1, 3)], &[(1, 5)]),
            eq(&[(1, 2), (1, 3)], &[(1, 6)]),
            eq(&[(1, 1), (1, 2), (1, 3)], &[(1, 7)]),
        ],
    },
];

/// `CM(S)` for `|S| = 3`: 2 when the largest jar is the sum of the other
/// two, otherwise 3.
pub fn classify_size3(set: &JarSet) -> Result<usize> {
    match set.values() {
        &[k1, k2, k3] => Ok(if k1 + k2 == k3 { 2 } else { 3 }),
        other => Err(Error::WrongSize {
            expected: "3".into(),
            got: other.len(),
        }),
    }
}

fn check_cm3_size(set: &JarSet) -> Result<()> {
    if (4..=7).contains(&set.len()) {
        Ok(())
    } else {
        Err(Error::WrongSize {
            expected: "4..=7".into(),
            got: set.len(),
        })
    }
}

/// Every equation system for `|S|` that ascending `S` satisfies.
pub fn matching_cm3_systems(set: &JarSet) -> Result<Vec<&'static EquationSystem>> {
    check_cm3_size(set)?;
    Ok(CM3_SYSTEMS
        .iter()
        .filter(|sys| sys.matches(set.values()))
        .collect())
}

/// The first equation system for `|S|` that ascending `S` satisfies.
pub fn match_cm3_systems(set: &JarSet) -> Result<Option<&'static EquationSystem>> {
    check_cm3_size(set)?;
    Ok(CM3_SYSTEMS.iter().find(|sys| sys.matches(set.values())))
}

/// Two disjoint nonempty subsets of `S` with the same sum. `left` holds the
/// smallest element of the two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualSumPair {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    pub sum: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualSumPairs {
    /// Pairs ordered by total size, capped at [`MAX_REPORTED_PAIRS`].
    pub equal_sum_pairs: Vec<EqualSumPair>,
    pub pairs_truncated: bool,
    /// A collection of pairwise-disjoint pairs, chosen greedily.
    pub disjoint_pairs: Vec<EqualSumPair>,
    pub x: usize,
    pub bound_from_x: usize,
}

struct PairScan<'a> {
    values: &'a [u64],
    sums: Vec<u64>,
}

impl<'a> PairScan<'a> {
    fn new(values: &'a [u64]) -> Self {
        let n = values.len();
        let mut sums = vec![0u64; 1 << n];
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + values[low];
        }
        PairScan { values, sums }
    }

    fn pair(&self, b: u32, c: u32) -> EqualSumPair {
        let pick = |m: u32| -> Vec<u64> {
            (0..self.values.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| self.values[i])
                .collect()
        };
        EqualSumPair {
            left: pick(b),
            right: pick(c),
            sum: self.sums[b as usize],
        }
    }

    /// Visits disjoint equal-sum pairs `(B, C)` inside `allowed`, ordered by
    /// `|B| + |C|`, then `B`, then `C`. Stops when `visit` returns false.
    fn for_each(&self, allowed: u32, mut visit: impl FnMut(u32, u32) -> bool) {
        let mut by_sum: HashMap<u64, Vec<u32>> = HashMap::new();
        let mut masks = Vec::new();
        for mask in 1u32..(1u32 << self.values.len()) {
            if mask & !allowed == 0 {
                by_sum
                    .entry(self.sums[mask as usize])
                    .or_default()
                    .push(mask);
                masks.push(mask);
            }
        }
        for total in 3..=allowed.count_ones() {
            for &b in &masks {
                let bsize = b.count_ones();
                if bsize >= total {
                    continue;
                }
                let need = total - bsize;
                for &c in &by_sum[&self.sums[b as usize]] {
                    if c & b != 0 || c.count_ones() != need {
                        continue;
                    }
                    // Each unordered pair once: B holds the lowest element.
                    if (b | c).trailing_zeros() != b.trailing_zeros() {
                        continue;
                    }
                    if !visit(b, c) {
                        return;
                    }
                }
            }
        }
    }

    fn first_in(&self, allowed: u32) -> Option<(u32, u32)> {
        let mut found = None;
        self.for_each(allowed, |b, c| {
            found = Some((b, c));
            false
        });
        found
    }
}

/// Scans all pairs of disjoint subsets with equal sums, then greedily picks
/// a pairwise-disjoint collection: repeatedly the smallest pair among the
/// jars not yet used. Each such pair saves a move, so `CM(S) <= n - x`.
pub fn find_equal_sum_pairs(set: &JarSet) -> Result<EqualSumPairs> {
    let n = set.len();
    if n > EQUAL_SUM_MAX_LEN {
        return Err(Error::limit("set size", n, EQUAL_SUM_MAX_LEN));
    }
    let scan = PairScan::new(set.values());
    let all = if n == 0 { 0 } else { u32::MAX >> (32 - n) };

    let mut equal_sum_pairs = Vec::new();
    let mut pairs_truncated = false;
    scan.for_each(all, |b, c| {
        if equal_sum_pairs.len() == MAX_REPORTED_PAIRS {
            pairs_truncated = true;
            return false;
        }
        equal_sum_pairs.push(scan.pair(b, c));
        true
    });

    let mut disjoint_pairs = Vec::new();
    let mut free = all;
    while let Some((b, c)) = scan.first_in(free) {
        disjoint_pairs.push(scan.pair(b, c));
        free &= !(b | c);
    }
    let x = disjoint_pairs.len();
    Ok(EqualSumPairs {
        equal_sum_pairs,
        pairs_truncated,
        disjoint_pairs,
        x,
        bound_from_x: n - x,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub set: JarSet,
    pub n: usize,
    /// Present for `|S| = 3`: whether `k3 = k1 + k2`.
    pub size3_rule: Option<bool>,
    /// Present for `4 <= |S| <= 7`: the first matching equation system.
    pub cm3_match: Option<SystemMatch>,
    #[serde(flatten)]
    pub equal_sums: EqualSumPairs,
}

pub fn classify(set: &JarSet) -> Result<ClassificationReport> {
    let size3_rule = (set.len() == 3).then(|| classify_size3(set) == Ok(2));
    let cm3_match = if (4..=7).contains(&set.len()) {
        match_cm3_systems(set)?.map(EquationSystem::summary)
    } else {
        None
    };
    Ok(ClassificationReport {
        set: set.clone(),
        n: set.len(),
        size3_rule,
        cm3_match,
        equal_sums: find_equal_sum_pairs(set)?,
    })
}

/// Whether `CM(S) = n` implies no disjoint equal-sum subsets, for this `S`.
pub fn check_corollary_nosum(set: &JarSet) -> Result<bool> {
    if set.len() > solver::ORACLE_MAX_LEN {
        return Err(Error::limit("set size", set.len(), solver::ORACLE_MAX_LEN));
    }
    if let Some(max) = set.max().filter(|&m| m > solver::ORACLE_MAX_VALUE) {
        return Err(Error::limit("jar value", max, solver::ORACLE_MAX_VALUE));
    }
    let at_upper = solve(set)?.cm == set.len();
    Ok(!at_upper || find_equal_sum_pairs(set)?.x == 0)
}
