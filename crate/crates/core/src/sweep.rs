//! Exhaustive cross-checks between the exact solver and the closed-form
//! classifiers, heuristics and invariants.

use serde::{Deserialize, Serialize};

use crate::classifier::{classify_size3, find_equal_sum_pairs, match_cm3_systems};
use crate::error::Result;
use crate::exec::Exec;
use crate::heuristics::{self, Algorithm};
use crate::jars::JarSet;
use crate::solver::{oracle_solve, solve, verify_trace};

/// All `size`-element subsets of `{1..=max}` in lexicographic order.
pub fn subsets(max: u64, size: usize) -> Vec<JarSet> {
    let mut out = Vec::new();
    let mut cur: Vec<u64> = (1..=size as u64).collect();
    if size as u64 > max {
        return out;
    }
    loop {
        out.push(JarSet::new(cur.iter().copied()));
        // rightmost element that can still move up
        let Some(i) = (0..size)
            .rev()
            .find(|&i| cur[i] < max - (size - 1 - i) as u64)
        else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// All subsets of `{1..=max}` with between 1 and `max_len` elements.
pub fn subsets_up_to(max: u64, max_len: usize) -> Vec<JarSet> {
    (1..=max_len).flat_map(|k| subsets(max, k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub set: JarSet,
    pub predicted: String,
    pub solved: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn collect(
    exec: Exec,
    sets: &[JarSet],
    f: impl Fn(&JarSet) -> Result<Option<Mismatch>> + Sync + Send,
) -> Result<SweepReport> {
    let results = exec.map(sets, f);
    let mut mismatches = Vec::new();
    for r in results {
        if let Some(m) = r? {
            mismatches.push(m);
        }
    }
    Ok(SweepReport {
        checked: sets.len(),
        mismatches,
    })
}

/// The size-three rule against the solver on every 3-subset of `{1..=max}`.
pub fn size3_sweep(max: u64, exec: Exec) -> Result<SweepReport> {
    collect(exec, &subsets(max, 3), |s| {
        let predicted = classify_size3(s)?;
        let solved = solve(s)?.cm;
        Ok((predicted != solved).then(|| Mismatch {
            set: s.clone(),
            predicted: predicted.to_string(),
            solved,
        }))
    })
}

/// "Some system matches" against "CM = 3" on every `size`-subset of
/// `{1..=max}`. A mismatch's `predicted` names the matched system or says
/// that none matched.
pub fn cm3_sweep(max: u64, size: usize, exec: Exec) -> Result<SweepReport> {
    collect(exec, &subsets(max, size), |s| {
        let matched = match_cm3_systems(s)?;
        let solved = solve(s)?.cm;
        Ok((matched.is_some() != (solved == 3)).then(|| Mismatch {
            set: s.clone(),
            predicted: match matched {
                Some(sys) => format!("CM = 3 via {}", sys.summary().id),
                None => "no system matches".into(),
            },
            solved,
        }))
    })
}

/// Only the sound direction: a match implies `CM <= 3`.
pub fn cm3_soundness_sweep(max: u64, size: usize, exec: Exec) -> Result<SweepReport> {
    collect(exec, &subsets(max, size), |s| {
        let Some(sys) = match_cm3_systems(s)? else {
            return Ok(None);
        };
        let solved = solve(s)?.cm;
        Ok((solved > 3).then(|| Mismatch {
            set: s.clone(),
            predicted: format!("CM = 3 via {}", sys.summary().id),
            solved,
        }))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicGap {
    pub set: JarSet,
    pub cm: usize,
    pub counts: Vec<(Algorithm, usize)>,
}

/// Sets where at least one heuristic needs more moves than the optimum.
pub fn heuristic_gaps(sets: &[JarSet], exec: Exec) -> Result<Vec<HeuristicGap>> {
    let rows = exec.map(sets, |s| -> Result<Option<HeuristicGap>> {
        let cm = solve(s)?.cm;
        let mut counts = Vec::with_capacity(3);
        for alg in Algorithm::ALL {
            counts.push((alg, heuristics::run(alg, s)?.move_count));
        }
        Ok(counts.iter().any(|&(_, c)| c > cm).then(|| HeuristicGap {
            set: s.clone(),
            cm,
            counts,
        }))
    });
    rows.into_iter().filter_map(Result::transpose).collect()
}

/// Checks the invariants that tie the modules together on one set and
/// returns a description of each violation.
pub fn check_properties(set: &JarSet) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let r = solve(set)?;
    if !r.witness.covers(set) {
        bad.push(format!("witness {} does not cover {set}", r.witness));
    }
    if !verify_trace(set, &r.trace) || r.trace.len() != r.cm {
        bad.push(format!("trace for {set} does not replay in {} moves", r.cm));
    }
    if !set.bounds().contains(r.cm) {
        bad.push(format!("CM {} outside bounds {:?}", r.cm, set.bounds()));
    }
    let oracle = oracle_solve(set)?;
    if oracle != r.cm {
        bad.push(format!("oracle {oracle} != solver {}", r.cm));
    }
    for alg in Algorithm::ALL {
        let run = heuristics::run(alg, set)?;
        if run.move_count < r.cm || !verify_trace(set, &run.trace) {
            bad.push(format!(
                "{alg} used {} moves against optimum {}",
                run.move_count, r.cm
            ));
        }
    }
    for c in [2, 3] {
        let scaled = solve(&set.scaled(c)?)?.cm;
        if scaled != r.cm {
            bad.push(format!("CM({c}S) = {scaled} != {}", r.cm));
        }
    }
    if r.cm == set.len() && find_equal_sum_pairs(set)?.x != 0 {
        bad.push(format!("{set} has CM = n but disjoint equal-sum subsets"));
    }
    Ok(bad)
}

/// Runs [`check_properties`] over many sets; returns `(set, violations)`
/// for each failing set.
pub fn property_sweep(sets: &[JarSet], exec: Exec) -> Result<Vec<(JarSet, Vec<String>)>> {
    let rows = exec.map(sets, |s| check_properties(s).map(|v| (s.clone(), v)));
    let mut out = Vec::new();
    for r in rows {
        let (s, v) = r?;
        if !v.is_empty() {
            out.push((s, v));
        }
    }
    Ok(out)
}
