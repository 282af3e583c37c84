//! Structured jar sets and their closed-form move counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jars::{ceil_log2, ceil_log2_plus_one, JarSet, DEFAULT_MAX_VALUE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceSpec {
    /// `k_i = y*i + z` for `i = 1..=n`.
    Arithmetic { y: u64, z: u64, n: usize },
    /// `k_i = w * y^(i-1)` for `i = 1..=n`.
    Geometric { w: u64, y: u64, n: usize },
    /// `{F_2, ..., F_n}` with `F_0 = 0`, `F_1 = 1`; this has `n - 1` jars.
    Fibonacci { n: usize },
}

impl SequenceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        match *self {
            SequenceSpec::Arithmetic { y, .. } if y < 1 => bad("arithmetic step y must be >= 1"),
            SequenceSpec::Geometric { w, .. } if w < 1 => bad("geometric scale w must be >= 1"),
            SequenceSpec::Geometric { y, .. } if y < 2 => bad("geometric ratio y must be >= 2"),
            SequenceSpec::Fibonacci { n } if n < 2 => bad("fibonacci needs n >= 2"),
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<JarSet> {
        self.generate_with_limit(DEFAULT_MAX_VALUE)
    }

    pub fn generate_with_limit(&self, limit: u64) -> Result<JarSet> {
        self.validate()?;
        let too_big = || Error::limit("sequence value", u64::MAX, limit);
        let mut values = Vec::new();
        match *self {
            SequenceSpec::Arithmetic { y, z, n } => {
                for i in 1..=n as u64 {
                    values.push(
                        y.checked_mul(i)
                            .and_then(|v| v.checked_add(z))
                            .ok_or_else(too_big)?,
                    );
                }
            }
            SequenceSpec::Geometric { w, y, n } => {
                let mut term = w;
                for i in 0..n {
                    if i > 0 {
                        term = term.checked_mul(y).ok_or_else(too_big)?;
                    }
                    values.push(term);
                }
            }
            SequenceSpec::Fibonacci { n } => {
                let (mut prev, mut cur) = (0u64, 1u64); // F_0, F_1
                for _ in 2..=n {
                    let next = prev.checked_add(cur).ok_or_else(too_big)?;
                    prev = cur;
                    cur = next;
                    values.push(cur);
                }
            }
        }
        JarSet::with_limit(values, limit)
    }

    /// The move count the closed forms predict.
    pub fn predicted_cm(&self) -> Result<usize> {
        self.validate()?;
        Ok(match *self {
            SequenceSpec::Arithmetic { n: 0, .. } => 0,
            SequenceSpec::Arithmetic { z: 0, n, .. } => ceil_log2_plus_one(n),
            SequenceSpec::Arithmetic { n, .. } => ceil_log2(n) + 1,
            SequenceSpec::Geometric { n, .. } => n,
            SequenceSpec::Fibonacci { n } => n.div_ceil(2),
        })
    }
}

/// Each element exceeds the sum of all smaller ones.
pub fn is_superincreasing(set: &JarSet) -> bool {
    let mut prefix = 0u64;
    for &v in set.values() {
        if v <= prefix {
            return false;
        }
        prefix = prefix.saturating_add(v);
    }
    true
}
