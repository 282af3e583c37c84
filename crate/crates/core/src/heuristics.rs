//! The three greedy strategies: empty the most jars (EMJA), take the most
//! cookies (TMCA) and the binary algorithm (BA).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jars::{JarSet, Move};

/// EMJA scans every subset of jars, so it is capped at this many jars.
pub const EMJA_MAX_JARS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Emja,
    Tmca,
    Ba,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Emja, Algorithm::Tmca, Algorithm::Ba];

    pub fn step(self, state: &JarSet) -> Result<Move> {
        match self {
            Algorithm::Emja => emja_step(state),
            Algorithm::Tmca => tmca_step(state),
            Algorithm::Ba => ba_step(state),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Emja => "EMJA",
            Algorithm::Tmca => "TMCA",
            Algorithm::Ba => "BA",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "emja" => Ok(Algorithm::Emja),
            "tmca" => Ok(Algorithm::Tmca),
            "ba" => Ok(Algorithm::Ba),
            other => Err(Error::Parse(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicRun {
    pub algorithm: Algorithm,
    pub trace: Vec<Move>,
    pub move_count: usize,
}

/// Empty the most jars: the move leaving the fewest distinct nonzero values.
///
/// Every nonempty subset and every amount up to its minimum is tried. Ties
/// go to the most cookies removed, then the smallest amount, then the
/// lexicographically smallest target list.
pub fn emja_step(state: &JarSet) -> Result<Move> {
    let values = state.values();
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyState);
    }
    if n > EMJA_MAX_JARS {
        return Err(Error::limit("EMJA jar count", n, EMJA_MAX_JARS));
    }

    // (distinct left, -removed, amount, targets)
    let mut best: Option<(usize, std::cmp::Reverse<u64>, u64, Vec<usize>)> = None;
    for mask in 1u32..(1u32 << n) {
        let targets: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let min = targets.iter().map(|&i| values[i]).min().unwrap();
        for amount in 1..=min {
            // Untouched jars stay distinct among themselves, and so do the
            // reduced ones; only collisions between the two groups merge.
            let mut left = n - targets.len();
            for &i in &targets {
                let v = values[i] - amount;
                if v == 0 {
                    continue;
                }
                let merges = values.binary_search(&v).is_ok_and(|j| mask >> j & 1 == 0);
                if !merges {
                    left += 1;
                }
            }
            let removed = amount * targets.len() as u64;
            let key = (left, std::cmp::Reverse(removed), amount, targets.clone());
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    let (_, _, amount, targets) = best.unwrap();
    Ok(Move::new(amount, targets))
}

/// Take the most cookies: maximise `amount * |targets|`.
///
/// For a fixed amount the best targets are all jars holding at least that
/// much, and raising the amount to the next jar value never hurts, so only
/// distinct values need scanning. Ties go to the larger amount.
pub fn tmca_step(state: &JarSet) -> Result<Move> {
    let values = state.values();
    if values.is_empty() {
        return Err(Error::EmptyState);
    }
    let n = values.len() as u64;
    let (_, amount) = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (v * (n - i as u64), v))
        .max()
        .unwrap();
    Ok(Move::from_all_at_least(state, amount))
}

/// Reference TMCA over every (subset, amount) pair, for cross-checking the
/// distinct-value scan.
pub fn tmca_step_exhaustive(state: &JarSet) -> Result<Move> {
    let values = state.values();
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyState);
    }
    if n > EMJA_MAX_JARS {
        return Err(Error::limit("exhaustive scan jar count", n, EMJA_MAX_JARS));
    }
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    for mask in 1u32..(1u32 << n) {
        let targets: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let min = targets.iter().map(|&i| values[i]).min().unwrap();
        for amount in 1..=min {
            let removed = amount * targets.len() as u64;
            let better = match &best {
                None => true,
                Some((r, a, _)) => (removed, amount) > (*r, *a),
            };
            if better {
                best = Some((removed, amount, targets.clone()));
            }
        }
    }
    let (_, amount, targets) = best.unwrap();
    Ok(Move::new(amount, targets))
}

/// Binary algorithm: take the largest power of two not exceeding the
/// biggest jar from every jar that can afford it.
pub fn ba_step(state: &JarSet) -> Result<Move> {
    let max = state.max().ok_or(Error::EmptyState)?;
    let amount = 1u64 << max.ilog2();
    Ok(Move::from_all_at_least(state, amount))
}

/// Repeats the algorithm's step until every jar is empty.
pub fn run(algorithm: Algorithm, set: &JarSet) -> Result<HeuristicRun> {
    let mut state = set.clone();
    let mut trace = Vec::new();
    while !state.is_empty() {
        let mv = algorithm.step(&state)?;
        state = state.apply(&mv)?;
        trace.push(mv);
    }
    Ok(HeuristicRun {
        algorithm,
        move_count: trace.len(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, verify_trace};

    fn set(v: &[u64]) -> JarSet {
        JarSet::new(v.iter().copied())
    }

    fn after(alg: Algorithm, s: &JarSet) -> JarSet {
        s.apply(&alg.step(s).unwrap()).unwrap()
    }

    #[test]
    fn first_moves_on_worked_example() {
        let s = set(&[15, 13, 12, 4, 2, 1]);

        let mv = emja_step(&s).unwrap();
        assert_eq!(mv, Move::new(11, [3, 4, 5]));
        assert_eq!(after(Algorithm::Emja, &s), set(&[4, 2, 1]));

        let mv = tmca_step(&s).unwrap();
        assert_eq!(mv, Move::new(12, [3, 4, 5]));
        assert_eq!(after(Algorithm::Tmca, &s), set(&[4, 3, 2, 1]));

        let mv = ba_step(&s).unwrap();
        assert_eq!(mv, Move::new(8, [3, 4, 5]));
        assert_eq!(after(Algorithm::Ba, &s), set(&[7, 5, 4, 2, 1]));
    }

    #[test]
    fn singleton_steps() {
        let s = set(&[9]);
        for alg in Algorithm::ALL {
            if alg == Algorithm::Ba {
                assert_eq!(alg.step(&s).unwrap(), Move::new(8, [0]));
            } else {
                assert_eq!(alg.step(&s).unwrap(), Move::new(9, [0]), "{alg}");
            }
        }
        assert_eq!(ba_step(&set(&[1])).unwrap(), Move::new(1, [0]));
    }

    #[test]
    fn emja_on_one_two_three() {
        let s = set(&[1, 2, 3]);
        let next = after(Algorithm::Emja, &s);
        assert_eq!(next.len(), 1);
        // One value left is reachable several ways (1 from {1,3} leaves {2});
        // taking 2 from {2,3} removes the most.
        let mv = emja_step(&s).unwrap();
        assert_eq!(mv, Move::new(2, [1, 2]));
    }

    #[test]
    fn tmca_small_example() {
        assert_eq!(tmca_step(&set(&[3, 5])).unwrap(), Move::new(3, [0, 1]));
    }

    #[test]
    fn empty_state_errors() {
        let e = JarSet::empty();
        assert_eq!(emja_step(&e), Err(Error::EmptyState));
        assert_eq!(tmca_step(&e), Err(Error::EmptyState));
        assert_eq!(ba_step(&e), Err(Error::EmptyState));
        for alg in Algorithm::ALL {
            assert_eq!(run(alg, &e).unwrap().move_count, 0);
        }
    }

    #[test]
    fn ba_reproduces_binary_schedule() {
        let s = set(&(1..=15).collect::<Vec<_>>());
        let r = run(Algorithm::Ba, &s).unwrap();
        assert_eq!(r.move_count, 4);
        let amounts: Vec<u64> = r.trace.iter().map(|m| m.amount).collect();
        assert_eq!(amounts, vec![8, 4, 2, 1]);
        assert!(verify_trace(&s, &r.trace));
    }

    #[test]
    fn runs_are_valid_and_never_beat_optimum() {
        let s = set(&[15, 13, 12, 4, 2, 1]);
        let cm = solve(&s).unwrap().cm;
        for alg in Algorithm::ALL {
            let r = run(alg, &s).unwrap();
            assert!(verify_trace(&s, &r.trace));
            assert_eq!(r.move_count, r.trace.len());
            assert!(r.move_count >= cm, "{alg}: {} < {cm}", r.move_count);
        }
    }

    #[test]
    fn tmca_matches_exhaustive_scan() {
        // Every subset of {1..9} with up to five elements.
        for mask in 1u32..(1 << 9) {
            if mask.count_ones() > 5 {
                continue;
            }
            let s = JarSet::new((0..9).filter(|i| mask >> i & 1 == 1).map(|i| i as u64 + 1));
            assert_eq!(
                tmca_step(&s).unwrap(),
                tmca_step_exhaustive(&s).unwrap(),
                "{s}"
            );
        }
    }

    #[test]
    fn emja_rejects_huge_states() {
        let s = JarSet::new(1..=17);
        assert!(emja_step(&s).unwrap_err().is_limit());
    }

    #[test]
    fn algorithm_parsing() {
        assert_eq!("EMJA".parse::<Algorithm>().unwrap(), Algorithm::Emja);
        assert_eq!("ba".parse::<Algorithm>().unwrap(), Algorithm::Ba);
        assert!("greedy".parse::<Algorithm>().is_err());
    }
}
