use cookie_core::heuristics::Algorithm;
use cookie_core::sweep::{
    cm3_soundness_sweep, cm3_sweep, heuristic_gaps, size3_sweep, subsets_up_to,
};
use cookie_core::{Exec, JarSet};

#[test]
fn cm3_match_is_sound_for_every_size() {
    for (max, size) in [(16, 4), (13, 5), (12, 6), (12, 7)] {
        let r = cm3_soundness_sweep(max, size, Exec::Parallel).unwrap();
        assert!(r.is_clean(), "size {size}: {:?}", r.mismatches);
    }
}

#[test]
fn cm3_mismatches_are_all_missed_three_move_sets() {
    let r = cm3_sweep(16, 4, Exec::Parallel).unwrap();
    assert_eq!(r.checked, 1820);
    assert_eq!(r.mismatches.len(), 463);
    assert!(r
        .mismatches
        .iter()
        .all(|m| m.solved == 3 && m.predicted == "no system matches"));
    assert!(r
        .mismatches
        .iter()
        .any(|m| m.set == JarSet::new([6, 7, 10, 13])));
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    assert_eq!(
        size3_sweep(12, Exec::Sequential).unwrap(),
        size3_sweep(12, Exec::Parallel).unwrap()
    );
    assert_eq!(
        cm3_sweep(12, 5, Exec::Sequential).unwrap(),
        cm3_sweep(12, 5, Exec::Parallel).unwrap()
    );
}

/// Each greedy strategy is beaten by the exact solver somewhere in the
/// subsets of {1..16} with at most five jars.
#[test]
fn every_heuristic_is_sometimes_suboptimal() {
    let sets = subsets_up_to(16, 5);
    let gaps = heuristic_gaps(&sets, Exec::Parallel).unwrap();
    for alg in Algorithm::ALL {
        let example = gaps
            .iter()
            .find(|g| g.counts.iter().any(|&(a, c)| a == alg && c > g.cm))
            .unwrap_or_else(|| panic!("{alg} always optimal"));
        assert!(example.counts.iter().all(|&(_, c)| c >= example.cm));
    }
    assert!(gaps.len() < sets.len());
}
