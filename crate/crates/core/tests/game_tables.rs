use std::collections::HashMap;

use cookie_core::game::{
    classify_position, is_p_recursive, losing_pairs_search, wythoff_closed_form,
    wythoff_recurrence, Family, GamePosition, LosingPairTable, Sieve, Status,
};
use cookie_core::Move;

const TABLE2: &str = include_str!("fixtures/table2_wythoff.csv");
const TABLE3: &str = include_str!("fixtures/table3_paper.csv");
const ONE_40: &str = include_str!("fixtures/one_family_40.csv");

#[test]
fn wythoff_golden_table() {
    let t = LosingPairTable::from_csv(Family::Wythoff, TABLE2).unwrap();
    assert_eq!(wythoff_recurrence(10), t);
    assert_eq!(wythoff_closed_form(10).unwrap(), t);
    assert_eq!(losing_pairs_search(0, 30).unwrap().truncated(10), t);
    assert_eq!(wythoff_recurrence(10).to_csv(), TABLE2);
}

#[test]
fn wythoff_three_way_agreement_to_forty() {
    let rec = wythoff_recurrence(40);
    assert_eq!(wythoff_closed_form(40).unwrap(), rec);
    assert_eq!(losing_pairs_search(0, 110).unwrap().truncated(40), rec);
    assert!(rec.rows.iter().all(|r| r.d == r.i as u64));
}

#[test]
fn one_family_golden_table() {
    let golden = LosingPairTable::from_csv(Family::One, ONE_40).unwrap();
    let found = losing_pairs_search(1, 110).unwrap().truncated(40);
    assert_eq!(found, golden);
    assert_eq!(found.to_csv(), ONE_40);
}

#[test]
fn one_family_stable_under_larger_limit() {
    let small = losing_pairs_search(1, 110).unwrap().truncated(40);
    let large = losing_pairs_search(1, 300).unwrap().truncated(40);
    assert_eq!(small, large);
}

/// Rows of the reference table that disagree with the search are not
/// losing positions: each has a move to a P-position.
#[test]
fn reference_one_family_rows_checked_by_classification() {
    let reference = LosingPairTable::from_csv(Family::One, TABLE3).unwrap();
    let golden = LosingPairTable::from_csv(Family::One, ONE_40).unwrap();
    assert_eq!(reference.rows[..3], golden.rows[..3]);
    let mut not_losing = 0;
    for r in &reference.rows {
        let pos = GamePosition::new([1, r.p, r.q]);
        let class = classify_position(&pos).unwrap();
        if golden.rows.iter().any(|g| g.p == r.p && g.q == r.q) {
            assert_eq!(class.status, Status::P, "{pos}");
        } else {
            assert_eq!(class.status, Status::N, "{pos}");
            let mv = &class.winning_moves[0];
            assert!(classify_position(&pos.apply(mv).unwrap()).unwrap().status == Status::P);
            not_losing += 1;
        }
    }
    assert_eq!(not_losing, 29);
    // {1, 7, 9}: take 7 from the two larger jars.
    let pos = GamePosition::new([1, 7, 9]);
    assert_eq!(
        pos.apply(&Move::new(7, [1, 2])).unwrap(),
        GamePosition::new([0, 1, 2])
    );
}

#[test]
fn sieve_equals_recursion_at_limit_64() {
    let sieve = Sieve::build(3, 64).unwrap();
    let mut memo = HashMap::new();
    for p in 0..=64u64 {
        for q in p..=64 {
            for fixed in [0, 1] {
                if fixed > p {
                    continue;
                }
                let pos = GamePosition::new([fixed, p, q]);
                assert_eq!(
                    sieve.is_p(pos.jars()).unwrap(),
                    is_p_recursive(&pos, &mut memo),
                    "{pos}"
                );
            }
        }
    }
}

#[test]
fn four_jar_positions_are_supported() {
    // {1,1,4} plus an empty jar is still P; {1,1,1,1} is N (take all).
    assert_eq!(
        classify_position(&GamePosition::new([0, 1, 1, 4]))
            .unwrap()
            .status,
        Status::P
    );
    let c = classify_position(&GamePosition::new([1, 1, 1, 1])).unwrap();
    assert_eq!(c.status, Status::N);
    assert!(c.winning_moves.contains(&Move::new(1, [0, 1, 2, 3])));
}
