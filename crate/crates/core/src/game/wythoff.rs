use crate::error::{Error, Result};

use super::pairs::{Family, LosingPairTable, PairRow};

pub const CLOSED_FORM_MAX_COUNT: usize = 1_000_000;

/// `q_i = p_i + i` with `p_i` the smallest positive integer not yet used.
pub fn wythoff_recurrence(count: usize) -> LosingPairTable {
    let mut used = vec![false; 3 * count + 3];
    let mut rows = Vec::with_capacity(count);
    let mut p = 1usize;
    for i in 1..=count {
        while used[p] {
            p += 1;
        }
        let q = p + i;
        used[p] = true;
        used[q] = true;
        rows.push(PairRow::new(i, p as u64, q as u64));
    }
    LosingPairTable::new(Family::Wythoff, rows)
}

/// `p_i = floor(i * phi) = floor((i + isqrt(5 i^2)) / 2)`, `q_i = p_i + i`.
pub fn wythoff_closed_form(count: usize) -> Result<LosingPairTable> {
    if count > CLOSED_FORM_MAX_COUNT {
        return Err(Error::limit("pair count", count, CLOSED_FORM_MAX_COUNT));
    }
    let rows = (1..=count as u64)
        .map(|i| {
            let p = (i + (5 * i * i).isqrt()) / 2;
            PairRow::new(i as usize, p, p + i)
        })
        .collect();
    Ok(LosingPairTable::new(Family::Wythoff, rows))
}
