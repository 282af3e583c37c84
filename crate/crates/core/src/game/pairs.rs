//! Losing triples `{fixed, p, q}` for `fixed` in {0, 1} and the diagnostics
//! comparing the two families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sieve::Sieve;
use super::wythoff::wythoff_recurrence;
use super::DEFAULT_GAME_LIMIT;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `{0, p, q}`.
    Wythoff,
    /// `{1, p, q}`.
    One,
}

impl Family {
    pub fn fixed(self) -> u64 {
        match self {
            Family::Wythoff => 0,
            Family::One => 1,
        }
    }

    pub fn from_fixed(fixed: u64) -> Result<Self> {
        match fixed {
            0 => Ok(Family::Wythoff),
            1 => Ok(Family::One),
            _ => Err(Error::InvalidParameter(format!(
                "fixed jar must be 0 or 1, got {fixed}"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Wythoff => "wythoff",
            Family::One => "one",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wythoff" | "zero" | "0" => Ok(Family::Wythoff),
            "one" | "fixed-one" | "1" => Ok(Family::One),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRow {
    pub i: usize,
    pub p: u64,
    pub q: u64,
    pub d: u64,
}

impl PairRow {
    pub fn new(i: usize, p: u64, q: u64) -> Self {
        PairRow { i, p, q, d: q - p }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LosingPairTable {
    pub family: Family,
    pub rows: Vec<PairRow>,
    pub phi: f64,
}

impl LosingPairTable {
    /// The golden ratio, for display only.
    pub const PHI: f64 = 1.618_033_988_749_895;

    pub fn new(family: Family, rows: Vec<PairRow>) -> Self {
        LosingPairTable {
            family,
            rows,
            phi: Self::PHI,
        }
    }

    pub fn truncated(mut self, count: usize) -> Self {
        self.rows.truncate(count);
        self
    }

    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.rows.iter().map(|r| (r.p, r.q)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,p,q,d\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.i, r.p, r.q, r.d));
        }
        out
    }

    pub fn from_csv(family: Family, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "i,p,q,d" => {}
            other => return Err(Error::Parse(format!("bad CSV header {other:?}"))),
        }
        let mut rows = Vec::new();
        for line in lines {
            let f: Vec<u64> = line
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("{line:?}: {e}")))?;
            let [i, p, q, d] = f[..] else {
                return Err(Error::Parse(format!("{line:?}: expected 4 fields")));
            };
            if q < p || q - p != d {
                return Err(Error::Parse(format!("{line:?}: d must equal q - p")));
            }
            rows.push(PairRow::new(i as usize, p, q));
        }
        Ok(LosingPairTable::new(family, rows))
    }
}

/// All P-positions `{fixed, p, q}` with `fixed <= p <= q <= limit` and
/// `p >= 1`, sorted by `p` then `q`.
pub fn losing_pairs_search(fixed: u64, limit: u64) -> Result<LosingPairTable> {
    let family = Family::from_fixed(fixed)?;
    if limit > DEFAULT_GAME_LIMIT {
        return Err(Error::limit("search limit", limit, DEFAULT_GAME_LIMIT));
    }
    let sieve = Sieve::build(3, limit)?;
    let mut rows = Vec::new();
    for p in fixed.max(1)..=limit {
        for q in p..=limit {
            if sieve.is_p(&[fixed, p, q])? {
                rows.push(PairRow::new(rows.len() + 1, p, q));
            }
        }
    }
    Ok(LosingPairTable::new(family, rows))
}

/// Bounds observed on `p1 - p0`.
pub const P_DIFF_BOUNDS: (i64, i64) = (-1, 2);
/// Bounds observed on `(q1 - p1) - (q0 - p0)`.
pub const D_DIFF_BOUNDS: (i64, i64) = (-4, 3);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub count: usize,
    pub search_limit: u64,
    /// Mean of `q0 / p0` over the prefix (report only).
    pub mean_ratio_wythoff: f64,
    /// Mean of `q1 / p1` over the prefix (report only).
    pub mean_ratio_one: f64,
    pub p_diffs: Vec<i64>,
    pub d_diffs: Vec<i64>,
    pub p_diff_range: (i64, i64),
    pub d_diff_range: (i64, i64),
    pub p_diff_bounds: (i64, i64),
    pub d_diff_bounds: (i64, i64),
    pub p_diff_within_bounds: bool,
    pub d_diff_within_bounds: bool,
    /// Indices (1-based) whose differences leave the bounds.
    pub violations: Vec<usize>,
}

impl ConjectureReport {
    pub fn bounds_hold(&self) -> bool {
        self.p_diff_within_bounds && self.d_diff_within_bounds
    }
}

/// Search limit used for a prefix of `count` rows.
pub fn default_search_limit(count: usize) -> u64 {
    (3 * count as u64 + 16).min(DEFAULT_GAME_LIMIT)
}

pub fn conjecture_report(count: usize) -> Result<ConjectureReport> {
    conjecture_report_with_limit(count, default_search_limit(count))
}

pub fn conjecture_report_with_limit(count: usize, limit: u64) -> Result<ConjectureReport> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be >= 1".into()));
    }
    let zero = wythoff_recurrence(count);
    let one = losing_pairs_search(1, limit)?;
    if one.rows.len() < count {
        return Err(Error::limit("pair count", count, one.rows.len()));
    }
    let one = one.truncated(count);

    let mean = |t: &LosingPairTable| {
        t.rows.iter().map(|r| r.q as f64 / r.p as f64).sum::<f64>() / count as f64
    };
    let mut p_diffs = Vec::with_capacity(count);
    let mut d_diffs = Vec::with_capacity(count);
    let mut violations = Vec::new();
    for (a, b) in zero.rows.iter().zip(&one.rows) {
        let pd = b.p as i64 - a.p as i64;
        let dd = b.d as i64 - a.d as i64;
        let inside = |v: i64, (lo, hi): (i64, i64)| lo <= v && v <= hi;
        if !inside(pd, P_DIFF_BOUNDS) || !inside(dd, D_DIFF_BOUNDS) {
            violations.push(a.i);
        }
        p_diffs.push(pd);
        d_diffs.push(dd);
    }
    let range = |v: &[i64]| (*v.iter().min().unwrap(), *v.iter().max().unwrap());
    let p_diff_range = range(&p_diffs);
    let d_diff_range = range(&d_diffs);
    Ok(ConjectureReport {
        count,
        search_limit: limit,
        mean_ratio_wythoff: mean(&zero),
        mean_ratio_one: mean(&one),
        p_diff_within_bounds: P_DIFF_BOUNDS.0 <= p_diff_range.0
            && p_diff_range.1 <= P_DIFF_BOUNDS.1,
        d_diff_within_bounds: D_DIFF_BOUNDS.0 <= d_diff_range.0
            && d_diff_range.1 <= D_DIFF_BOUNDS.1,
        p_diffs,
        d_diffs,
        p_diff_range,
        d_diff_range,
        p_diff_bounds: P_DIFF_BOUNDS,
        d_diff_bounds: D_DIFF_BOUNDS,
        violations,
    })
}
