//! Jar sets, move multisets, single moves and the universal bounds.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on a single jar value accepted by the parsers.
pub const DEFAULT_MAX_VALUE: u64 = 1_000_000;

/// A problem instance: distinct positive jar counts in ascending order.
///
/// Construction canonicalises: zeros are dropped and equal counts merged,
/// since jars holding the same number of cookies behave as one jar.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct JarSet(Vec<u64>);

impl JarSet {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().filter(|&x| x > 0).collect();
        v.sort_unstable();
        v.dedup();
        JarSet(v)
    }

    /// Like [`JarSet::new`] but rejects any value above `limit`.
    pub fn with_limit(values: impl IntoIterator<Item = u64>, limit: u64) -> Result<Self> {
        let set = Self::new(values);
        match JarSet::max(&set) {
            Some(m) if m > limit => Err(Error::limit("jar value", m, limit)),
            _ => Ok(set),
        }
    }

    pub fn empty() -> Self {
        JarSet(Vec::new())
    }

    /// Parses a set literal such as `"13,10,7,6"`, with the default value limit.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_limit(text, DEFAULT_MAX_VALUE)
    }

    /// Comma and/or whitespace separated non-negative integers. Surrounding
    /// `{}` or `[]` are tolerated; ordering, duplicates and zeros are
    /// canonicalised away.
    pub fn parse_with_limit(text: &str, limit: u64) -> Result<Self> {
        let values = parse_uint_list(text)?;
        Self::with_limit(values, limit)
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.0.binary_search(&value).is_ok()
    }

    /// Every element multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        for &v in &self.0 {
            out.push(
                v.checked_mul(factor)
                    .ok_or_else(|| Error::InvalidParameter(format!("{v} * {factor} overflows")))?,
            );
        }
        Ok(JarSet::new(out))
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::for_size(self.len())
    }

    /// Applies `mv` and re-canonicalises the result.
    pub fn apply(&self, mv: &Move) -> Result<JarSet> {
        if mv.amount == 0 {
            return Err(Error::InvalidMove("amount must be positive".into()));
        }
        if mv.targets.is_empty() {
            return Err(Error::InvalidMove("no jars selected".into()));
        }
        let mut next = self.0.clone();
        for &t in &mv.targets {
            let jar = next.get_mut(t).ok_or_else(|| {
                Error::InvalidMove(format!(
                    "jar index {t} out of range for {} jars",
                    self.len()
                ))
            })?;
            if *jar < mv.amount {
                return Err(Error::InvalidMove(format!(
                    "cannot take {} from jar {t} holding {}",
                    mv.amount, *jar
                )));
            }
            *jar -= mv.amount;
        }
        Ok(JarSet::new(next))
    }
}

impl From<Vec<u64>> for JarSet {
    fn from(v: Vec<u64>) -> Self {
        JarSet::new(v)
    }
}

impl From<JarSet> for Vec<u64> {
    fn from(s: JarSet) -> Self {
        s.0
    }
}

impl FromStr for JarSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        JarSet::parse(s)
    }
}

impl fmt::Display for JarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, "{", &self.0, "}")
    }
}

/// Parses `"1, 2 3"`, `"[1,2,3]"` or `"{1,2,3}"` into raw integers.
pub fn parse_uint_list(text: &str) -> Result<Vec<u64>> {
    let trimmed = text
        .trim()
        .trim_start_matches(['{', '['])
        .trim_end_matches(['}', ']']);
    trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| Error::Parse(format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

fn write_list(f: &mut fmt::Formatter<'_>, open: &str, items: &[u64], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str(close)
}

/// A candidate solution: positive amounts in nondecreasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct MoveMultiset(Vec<u64>);

impl MoveMultiset {
    pub fn new(amounts: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = amounts.into_iter().collect();
        if v.contains(&0) {
            return Err(Error::InvalidParameter(
                "move amounts must be positive".into(),
            ));
        }
        v.sort_unstable();
        Ok(MoveMultiset(v))
    }

    pub fn amounts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All sums of nonempty sub-multisets, deduplicated.
    pub fn subset_sums(&self) -> BTreeSet<u64> {
        let mut sums = BTreeSet::new();
        for &a in &self.0 {
            let shifted: Vec<u64> = sums.iter().map(|&s| s + a).collect();
            sums.extend(shifted);
            sums.insert(a);
        }
        sums
    }

    /// True iff every jar of `set` is a subset sum of `self`.
    pub fn covers(&self, set: &JarSet) -> bool {
        let sums = self.subset_sums();
        set.values().iter().all(|v| sums.contains(v))
    }
}

impl TryFrom<Vec<u64>> for MoveMultiset {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        MoveMultiset::new(v)
    }
}

impl From<MoveMultiset> for Vec<u64> {
    fn from(m: MoveMultiset) -> Self {
        m.0
    }
}

impl fmt::Display for MoveMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, "<", &self.0, ">")
    }
}

/// Remove `amount` cookies from each jar at `targets` (indices into the
/// current state, kept sorted and deduplicated).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub amount: u64,
    pub targets: Vec<usize>,
}

impl Move {
    pub fn new(amount: u64, targets: impl IntoIterator<Item = usize>) -> Self {
        let mut targets: Vec<usize> = targets.into_iter().collect();
        targets.sort_unstable();
        targets.dedup();
        Move { amount, targets }
    }

    /// Takes `amount` from every jar of `state` holding at least that many.
    pub fn from_all_at_least(state: &JarSet, amount: u64) -> Self {
        let start = state.values().partition_point(|&v| v < amount);
        Move::new(amount, start..state.len())
    }

    pub fn removed(&self) -> u64 {
        self.amount * self.targets.len() as u64
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "take {} from jars {:?}", self.amount, self.targets)
    }
}

/// `ceil(log2(n + 1)) <= CM(S) <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
}

impl Bounds {
    pub fn for_size(n: usize) -> Self {
        Bounds {
            lower: ceil_log2_plus_one(n),
            upper: n,
        }
    }

    pub fn contains(&self, cm: usize) -> bool {
        self.lower <= cm && cm <= self.upper
    }
}

/// `ceil(log2(n + 1))`, which is the bit length of `n`.
pub fn ceil_log2_plus_one(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    ceil_log2_plus_one(n - 1)
}

/// The Cookie Monster number of a set with a witness and a replayable trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub set: JarSet,
    pub cm: usize,
    pub witness: MoveMultiset,
    pub trace: Vec<Move>,
    pub lower_bound: usize,
    pub upper_bound: usize,
}
