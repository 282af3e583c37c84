//! Exact computation of `CM(S)`.
//!
//! [`solve`] searches move multisets `a1 <= a2 <= ... <= am` of increasing
//! size `m`, starting at the lower bound, and returns the lexicographically
//! smallest cover of the first feasible size. Reachable subset sums are kept
//! as a bitset truncated at `max(S)`, so adding an amount is a shift-or.
//!
//! Two prunes keep the search small:
//!
//! - amounts never exceed the smallest still-uncovered jar `u`, because every
//!   later amount is at least as large and `u` must still be expressed;
//! - with `r` amounts left and `R` reachable sums (counting 0), at most
//!   `|R| * (2^r - 1)` new sums can appear, which must be enough for the
//!   uncovered jars.
//!
//! [`oracle_solve`] is an independent breadth-limited search over raw game
//! states, used to cross-check the multiset search at small scale.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::jars::{ceil_log2_plus_one, JarSet, Move, MoveMultiset, SolveResult};

/// Largest jar value [`solve`] accepts by default.
pub const DEFAULT_SOLVE_LIMIT: u64 = 10_000;
/// Largest jar value [`oracle_solve`] accepts.
pub const ORACLE_MAX_VALUE: u64 = 24;
/// Largest set size [`oracle_solve`] accepts.
pub const ORACLE_MAX_LEN: usize = 6;

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_value: u64,
    /// Parallelism across the leading amount `a1`.
    pub exec: Exec,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_value: DEFAULT_SOLVE_LIMIT,
            exec: Exec::Sequential,
        }
    }
}

pub fn solve(set: &JarSet) -> Result<SolveResult> {
    solve_with(set, &SolveOptions::default())
}

pub fn solve_with(set: &JarSet, opts: &SolveOptions) -> Result<SolveResult> {
    if let Some(max) = set.max() {
        if max > opts.max_value {
            return Err(Error::limit("jar value", max, opts.max_value));
        }
    }
    let bounds = set.bounds();
    let witness = if set.is_empty() {
        Vec::new()
    } else {
        let search = CoverSearch::new(set);
        (bounds.lower..=bounds.upper)
            .find_map(|m| search.find(m, opts.exec))
            .expect("one amount per jar always covers the set")
    };
    let witness = MoveMultiset::new(witness).expect("search only emits positive amounts");
    let trace = synthesize_trace(set, &witness);
    debug_assert_eq!(explain_trace(set, &trace), Ok(()));
    Ok(SolveResult {
        set: set.clone(),
        cm: witness.len(),
        witness,
        trace,
        lower_bound: bounds.lower,
        upper_bound: bounds.upper,
    })
}

/// Fixed-width bitset over `0..=max`.
#[derive(Clone, Debug)]
struct SumBits {
    words: Vec<u64>,
    top_mask: u64,
}

impl SumBits {
    fn zero_only(max: u64) -> Self {
        let bits = max as usize + 1;
        let len = bits.div_ceil(64);
        let rem = bits % 64;
        let top_mask = if rem == 0 {
            u64::MAX
        } else {
            (1u64 << rem) - 1
        };
        let mut words = vec![0u64; len];
        words[0] = 1;
        SumBits { words, top_mask }
    }

    #[inline]
    fn has(&self, v: u64) -> bool {
        let v = v as usize;
        self.words
            .get(v / 64)
            .is_some_and(|w| (w >> (v % 64)) & 1 == 1)
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Members below `bound`, ascending.
    fn members_below(&self, bound: u64) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let v = i as u64 * 64 + w.trailing_zeros() as u64;
                if v >= bound {
                    return out;
                }
                out.push(v);
                w &= w - 1;
            }
        }
        out
    }

    /// `self | (self << shift)`, truncated.
    fn with_added(&self, shift: u64) -> Self {
        let ws = (shift / 64) as usize;
        let bs = (shift % 64) as u32;
        let mut words = self.words.clone();
        for i in (ws..words.len()).rev() {
            let src = i - ws;
            let mut v = self.words[src] << bs;
            if bs > 0 && src > 0 {
                v |= self.words[src - 1] >> (64 - bs);
            }
            words[i] |= v;
        }
        if let Some(last) = words.last_mut() {
            *last &= self.top_mask;
        }
        SumBits {
            words,
            top_mask: self.top_mask,
        }
    }
}

struct CoverSearch<'a> {
    targets: &'a [u64],
}

impl<'a> CoverSearch<'a> {
    fn new(set: &'a JarSet) -> Self {
        CoverSearch {
            targets: set.values(),
        }
    }

    fn max(&self) -> u64 {
        *self.targets.last().unwrap()
    }

    /// Lexicographically smallest nondecreasing cover of exactly `m` amounts.
    fn find(&self, m: usize, exec: Exec) -> Option<Vec<u64>> {
        let root = SumBits::zero_only(self.max());
        let first: Vec<u64> = (1..=self.targets[0]).collect();
        exec.find_map_first(&first, |&a| {
            let mut prefix = vec![a];
            let reach = root.with_added(a);
            self.extend(&mut prefix, &reach, m).then_some(prefix)
        })
    }

    fn extend(&self, prefix: &mut Vec<u64>, reach: &SumBits, m: usize) -> bool {
        let mut uncovered = 0u64;
        let mut first_uncovered = None;
        for &s in self.targets {
            if !reach.has(s) {
                uncovered += 1;
                first_uncovered.get_or_insert(s);
            }
        }
        let Some(u) = first_uncovered else {
            return true;
        };
        let used = prefix.len();
        if used >= m {
            return false;
        }
        let left = (m - used) as u32;
        if left < 63 {
            let capacity = reach.count().saturating_mul((1u64 << left) - 1);
            if uncovered > capacity {
                return false;
            }
        }
        let last = *prefix.last().unwrap_or(&1);
        if left == 2 {
            let open: Vec<u64> = self
                .targets
                .iter()
                .copied()
                .filter(|&s| !reach.has(s))
                .collect();
            return match last_two(last, reach, &open) {
                Some((a, b)) => {
                    prefix.extend([a, b]);
                    true
                }
                None => false,
            };
        }
        if left == 1 {
            // Final amount: every uncovered jar must be a reachable sum plus it.
            for a in last..=u {
                let ok = self
                    .targets
                    .iter()
                    .filter(|&&s| !reach.has(s))
                    .all(|&s| s >= a && reach.has(s - a));
                if ok {
                    prefix.push(a);
                    return true;
                }
            }
            return false;
        }
        for a in last..=u {
            let next = reach.with_added(a);
            prefix.push(a);
            if self.extend(prefix, &next, m) {
                return true;
            }
            prefix.pop();
        }
        false
    }
}

/// Smallest pair `last <= a <= b` with every `open` jar in
/// `reach + {a, b, a + b}`.
///
/// The smallest open jar `u` is `r + a`, `r + b` or `r + a + b` for some
/// reachable `r`, which fixes one of `a`, `b`, `a + b`. The smallest jar left
/// open by that value then fixes the other the same way, so only
/// `O(|reach|^2)` pairs need checking instead of every pair up to `u`.
fn last_two(last: u64, reach: &SumBits, open: &[u64]) -> Option<(u64, u64)> {
    let u = open[0];
    let sums = reach.members_below(*open.last().unwrap());
    let hit = |s: u64, x: u64| s >= x && reach.has(s - x);
    let first_missed = |x: u64| open.iter().copied().find(|&s| !hit(s, x));
    let mut best: Option<(u64, u64)> = None;
    let mut consider = |a: u64, b: u64| {
        if a >= last
            && b >= a
            && best.is_none_or(|x| (a, b) < x)
            && open
                .iter()
                .all(|&s| hit(s, a) || hit(s, b) || hit(s, a + b))
        {
            best = Some((a, b));
        }
    };
    for &r in sums.iter().take_while(|&&r| r < u) {
        let d = u - r;
        // u = r + a
        match first_missed(d) {
            None => consider(d, d),
            Some(v) => {
                for &r2 in sums.iter().take_while(|&&x| x < v) {
                    let e = v - r2;
                    consider(d, e);
                    if e > d {
                        consider(d, e - d);
                    }
                }
            }
        }
        // u = r + b
        match first_missed(d) {
            None => consider(last, d),
            Some(v) => {
                for &r2 in sums.iter().take_while(|&&x| x < v) {
                    let e = v - r2;
                    consider(e, d);
                    if e > d {
                        consider(e - d, d);
                    }
                }
            }
        }
        // u = r + a + b
        match first_missed(d) {
            None if d > last => consider(last, d - last),
            None => {}
            Some(v) => {
                for &r2 in sums.iter().take_while(|&&x| x < v) {
                    let e = v - r2;
                    if e < d {
                        consider(e, d - e);
                        consider(d - e, e);
                    }
                }
            }
        }
    }
    best
}

/// Indices of `amounts` whose values sum to `value`, if any.
fn decompose(amounts: &[u64], value: u64) -> Option<Vec<usize>> {
    fn go(amounts: &[u64], i: usize, left: u64, picked: &mut Vec<usize>) -> bool {
        if left == 0 {
            return true;
        }
        if i == amounts.len() {
            return false;
        }
        if amounts[i] <= left {
            picked.push(i);
            if go(amounts, i + 1, left - amounts[i], picked) {
                return true;
            }
            picked.pop();
        }
        go(amounts, i + 1, left, picked)
    }
    let mut picked = Vec::new();
    go(amounts, 0, value, &mut picked).then_some(picked)
}

/// Turns a covering multiset into moves. Amounts are applied largest first;
/// move `j` hits exactly the jars whose remaining decomposition uses `a_j`.
/// Jars that merge keep either decomposition, both being valid.
fn synthesize_trace(set: &JarSet, witness: &MoveMultiset) -> Vec<Move> {
    let amounts = witness.amounts();
    let mut state: BTreeMap<u64, Vec<usize>> = set
        .values()
        .iter()
        .map(|&v| {
            let dec = decompose(amounts, v).expect("witness covers every jar");
            (v, dec)
        })
        .collect();

    let mut order: Vec<usize> = (0..amounts.len()).collect();
    order.sort_by(|&x, &y| amounts[y].cmp(&amounts[x]).then(y.cmp(&x)));

    let mut trace = Vec::with_capacity(amounts.len());
    for j in order {
        let amount = amounts[j];
        let targets: Vec<usize> = state
            .values()
            .enumerate()
            .filter(|(_, dec)| dec.contains(&j))
            .map(|(pos, _)| pos)
            .collect();
        // An unused amount would give a shorter cover, contradicting minimality.
        assert!(!targets.is_empty(), "amount {amount} unused by every jar");
        trace.push(Move::new(amount, targets));

        let mut next: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (v, mut dec) in std::mem::take(&mut state) {
            let v = if let Some(k) = dec.iter().position(|&d| d == j) {
                dec.remove(k);
                assert!(v >= amount, "jar {v} would go negative taking {amount}");
                v - amount
            } else {
                v
            };
            if v == 0 {
                debug_assert!(dec.is_empty());
                continue;
            }
            next.entry(v).or_insert(dec);
        }
        state = next;
    }
    debug_assert!(state.is_empty());
    trace
}

/// Replays `trace` from `set`; `Ok` iff every move is valid and the final
/// state is empty, otherwise a description of the first problem.
pub fn explain_trace(set: &JarSet, trace: &[Move]) -> std::result::Result<(), String> {
    let mut state = set.clone();
    for (i, mv) in trace.iter().enumerate() {
        state = state
            .apply(mv)
            .map_err(|e| format!("move {} ({mv}) on {state}: {e}", i + 1))?;
    }
    if state.is_empty() {
        Ok(())
    } else {
        Err(format!("trace ends at {state}, not the empty set"))
    }
}

pub fn verify_trace(set: &JarSet, trace: &[Move]) -> bool {
    explain_trace(set, trace).is_ok()
}

/// Minimum number of raw moves to empty `set`, by iterative deepening over
/// game states. Only for small instances (`n <= 6`, values `<= 24`).
pub fn oracle_solve(set: &JarSet) -> Result<usize> {
    if set.len() > ORACLE_MAX_LEN {
        return Err(Error::limit("set size", set.len(), ORACLE_MAX_LEN));
    }
    if let Some(max) = set.max() {
        if max > ORACLE_MAX_VALUE {
            return Err(Error::limit("jar value", max, ORACLE_MAX_VALUE));
        }
    }
    // Bit v set <=> a jar holds v cookies. Merging and dropping zeros come free.
    let start: u32 = set.values().iter().fold(0, |acc, &v| acc | 1 << v);
    let mut failed: HashMap<u32, usize> = HashMap::new();
    let mut budget = ceil_log2_plus_one(set.len());
    while !oracle_dfs(start, budget, &mut failed) {
        budget += 1;
    }
    Ok(budget)
}

fn oracle_dfs(state: u32, budget: usize, failed: &mut HashMap<u32, usize>) -> bool {
    if state == 0 {
        return true;
    }
    if ceil_log2_plus_one(state.count_ones() as usize) > budget {
        return false;
    }
    if failed.get(&state).is_some_and(|&b| b >= budget) {
        return false;
    }
    let mut chosen = state;
    while chosen != 0 {
        let smallest = chosen.trailing_zeros();
        for take in 1..=smallest {
            let next = ((state & !chosen) | (chosen >> take)) & !1;
            if oracle_dfs(next, budget - 1, failed) {
                return true;
            }
        }
        chosen = (chosen - 1) & state;
    }
    failed.insert(state, budget);
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u64]) -> JarSet {
        JarSet::new(v.iter().copied())
    }

    fn check_result(s: &JarSet, r: &SolveResult) {
        assert_eq!(r.witness.len(), r.cm);
        assert!(r.witness.covers(s), "{} does not cover {s}", r.witness);
        assert_eq!(r.trace.len(), r.cm);
        assert_eq!(explain_trace(s, &r.trace), Ok(()));
        if !s.is_empty() {
            assert!(r.lower_bound <= r.cm && r.cm <= r.upper_bound);
            assert!(r.witness.amounts().iter().all(|&a| a <= s.max().unwrap()));
        }
    }

    #[test]
    fn one_to_fifteen() {
        let s = set(&(1..=15).collect::<Vec<_>>());
        let r = solve(&s).unwrap();
        assert_eq!(r.cm, 4);
        assert_eq!(r.witness.amounts(), &[1, 2, 4, 8]);
        check_result(&s, &r);
    }

    #[test]
    fn worked_example_sets() {
        let s = set(&[13, 10, 7, 6]);
        let r = solve(&s).unwrap();
        assert_eq!(r.cm, 3);
        check_result(&s, &r);

        let s = set(&[5, 9, 12, 13]);
        let r = solve(&s).unwrap();
        assert_eq!(r.cm, 3);
        check_result(&s, &r);
    }

    #[test]
    fn singleton_and_empty() {
        let r = solve(&set(&[42])).unwrap();
        assert_eq!(r.cm, 1);
        assert_eq!(r.witness.amounts(), &[42]);
        let r = solve(&JarSet::empty()).unwrap();
        assert_eq!(r.cm, 0);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // <1,1,1> covers {1,2,3} only with 3 moves; <1,2> is the 2-move cover.
        let r = solve(&set(&[1, 2, 3])).unwrap();
        assert_eq!(r.witness.amounts(), &[1, 2]);
        // Several 3-covers exist for {6,7,10,13}, e.g. <3,3,7> and <3,4,6>.
        let r = solve(&set(&[6, 7, 10, 13])).unwrap();
        let brute = brute_smallest_cover(&set(&[6, 7, 10, 13]), 3);
        assert_eq!(r.witness.amounts(), brute.as_slice());
    }

    fn brute_smallest_cover(s: &JarSet, m: usize) -> Vec<u64> {
        let max = s.max().unwrap();
        let mut best: Option<Vec<u64>> = None;
        let mut cur = vec![1u64; m];
        loop {
            if cur.windows(2).all(|w| w[0] <= w[1])
                && MoveMultiset::new(cur.clone()).unwrap().covers(s)
                && best.as_ref().is_none_or(|b| cur < *b)
            {
                best = Some(cur.clone());
            }
            let mut i = m;
            loop {
                if i == 0 {
                    return best.unwrap();
                }
                i -= 1;
                if cur[i] < max {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn parallel_split_matches_sequential() {
        for v in [
            &[3u64, 5, 7, 9, 11][..],
            &[2, 4, 8, 16, 32],
            &[6, 7, 10, 13],
        ] {
            let s = set(v);
            let seq = solve(&s).unwrap();
            let par = solve_with(
                &s,
                &SolveOptions {
                    exec: Exec::Parallel,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn limit_is_enforced() {
        let err = solve(&set(&[1, 10_001])).unwrap_err();
        assert!(err.is_limit());
        let ok = solve_with(
            &set(&[1, 10_001]),
            &SolveOptions {
                max_value: 20_000,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(ok.cm, 2);
    }

    #[test]
    fn sum_bits_shift_across_words() {
        let b = SumBits::zero_only(200).with_added(70).with_added(65);
        for v in [0, 65, 70, 135] {
            assert!(b.has(v), "{v}");
        }
        assert_eq!(b.count(), 4);
        let b = b.with_added(100);
        assert!(b.has(170) && b.has(165) && b.has(100));
        assert!(!b.has(235));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_solve(&set(&[1, 2, 3])).unwrap(), 2);
        assert_eq!(oracle_solve(&JarSet::empty()).unwrap(), 0);
        assert_eq!(oracle_solve(&set(&[2, 4, 8])).unwrap(), 3);
        assert!(oracle_solve(&set(&[25])).unwrap_err().is_limit());
        assert!(oracle_solve(&set(&[1, 2, 3, 4, 5, 6, 7]))
            .unwrap_err()
            .is_limit());
    }

    #[test]
    fn verify_trace_examples() {
        let s = set(&[13, 10, 7, 6]);
        // {6,7,10,13} -> 7 from {7,10,13} -> {3,6} -> 3 from both -> {3} -> 3.
        let trace = vec![
            Move::new(7, [1, 2, 3]),
            Move::new(3, [0, 1]),
            Move::new(3, [0]),
        ];
        assert!(verify_trace(&s, &trace));
        assert!(verify_trace(&JarSet::empty(), &[]));
        let err = explain_trace(&set(&[5]), &[Move::new(3, [0])]).unwrap_err();
        assert!(err.contains("{2}"), "{err}");
        assert!(!verify_trace(&set(&[5]), &[Move::new(6, [0])]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn solve_agrees_with_oracle(values in prop::collection::vec(1u64..=24, 0..=6)) {
            let s = JarSet::new(values);
            let r = solve(&s).unwrap();
            check_result(&s, &r);
            prop_assert_eq!(r.cm, oracle_solve(&s).unwrap());
        }

        #[test]
        fn witness_matches_brute_force(values in prop::collection::vec(1u64..=14, 1..=5)) {
            let s = JarSet::new(values);
            let r = solve(&s).unwrap();
            let brute = brute_smallest_cover(&s, r.cm);
            prop_assert_eq!(r.witness.amounts(), brute.as_slice());
        }

        #[test]
        fn last_two_matches_naive_scan(
            base in prop::collection::vec(1u64..=12, 0..=3),
            open in prop::collection::btree_set(1u64..=60, 1..=6),
            last in 1u64..=6,
        ) {
            let max = 60;
            let mut reach = SumBits::zero_only(max);
            for &a in &base {
                reach = reach.with_added(a);
            }
            let open: Vec<u64> = open.into_iter().filter(|&s| !reach.has(s)).collect();
            prop_assume!(!open.is_empty());
            let hit = |s: u64, x: u64| s >= x && reach.has(s - x);
            let mut naive = None;
            'outer: for a in last..=max {
                for b in a..=max {
                    if open.iter().all(|&s| hit(s, a) || hit(s, b) || hit(s, a + b)) {
                        naive = Some((a, b));
                        break 'outer;
                    }
                }
            }
            prop_assert_eq!(last_two(last, &reach, &open), naive);
        }

        #[test]
        fn scaling_preserves_cm(values in prop::collection::vec(1u64..=30, 1..=6), c in 2u64..=5) {
            let s = JarSet::new(values);
            let scaled = s.scaled(c).unwrap();
            prop_assert_eq!(solve(&s).unwrap().cm, solve(&scaled).unwrap().cm);
        }
    }
}
