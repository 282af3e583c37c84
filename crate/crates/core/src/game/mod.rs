//! The two-player game: players alternate choosing a nonempty subset of
//! jars and taking the same nonzero amount from each. Whoever empties the
//! last jar wins (normal play), so the all-zero position is P.

mod pairs;
mod sieve;
mod wythoff;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jars::{parse_uint_list, Move};

pub use pairs::{
    conjecture_report, conjecture_report_with_limit, default_search_limit, losing_pairs_search,
    ConjectureReport, Family, LosingPairTable, PairRow, D_DIFF_BOUNDS, P_DIFF_BOUNDS,
};
pub use sieve::{Sieve, MAX_CUBE_BITS};
pub use wythoff::{wythoff_closed_form, wythoff_recurrence, CLOSED_FORM_MAX_COUNT};

/// Largest jar value the engine accepts by default.
pub const DEFAULT_GAME_LIMIT: u64 = 512;

/// Game positions keep duplicates and zeros, unlike [`crate::JarSet`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct GamePosition(Vec<u64>);

impl GamePosition {
    pub fn new(jars: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = jars.into_iter().collect();
        v.sort_unstable();
        GamePosition(v)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(GamePosition::new(parse_uint_list(text)?))
    }

    pub fn jars(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    /// No jar holds a cookie, so no move exists.
    pub fn is_terminal(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// Applies a move whose targets index the canonical order.
    pub fn apply(&self, mv: &Move) -> Result<GamePosition> {
        if mv.amount == 0 {
            return Err(Error::InvalidMove("amount must be positive".into()));
        }
        if mv.targets.is_empty() {
            return Err(Error::InvalidMove("no jars chosen".into()));
        }
        let mut next = self.0.clone();
        for &i in &mv.targets {
            let Some(v) = next.get_mut(i) else {
                return Err(Error::InvalidMove(format!("jar index {i} out of range")));
            };
            if *v < mv.amount {
                return Err(Error::InvalidMove(format!(
                    "jar {i} holds {} cookies, cannot take {}",
                    *v, mv.amount
                )));
            }
            *v -= mv.amount;
        }
        Ok(GamePosition::new(next))
    }

    /// One representative per move class. Equal-valued jars are
    /// interchangeable; a class takes the rightmost jars of each value run.
    pub fn moves(&self) -> Vec<Move> {
        // (value, start, count) for each run of equal nonzero values
        let mut runs: Vec<(u64, usize, usize)> = Vec::new();
        for (i, &v) in self.0.iter().enumerate() {
            if v == 0 {
                continue;
            }
            match runs.last_mut() {
                Some(r) if r.0 == v => r.2 += 1,
                _ => runs.push((v, i, 1)),
            }
        }
        let mut out = Vec::new();
        let mut take = vec![0usize; runs.len()];
        // odometer over how many jars of each run are chosen
        while let Some(pos) = (0..runs.len()).find(|&r| take[r] < runs[r].2) {
            take[pos] += 1;
            for t in &mut take[..pos] {
                *t = 0;
            }
            let mut targets = Vec::new();
            let mut min = u64::MAX;
            for (r, &(v, start, count)) in runs.iter().enumerate() {
                if take[r] > 0 {
                    min = min.min(v);
                    targets.extend(start + count - take[r]..start + count);
                }
            }
            for amount in 1..=min {
                out.push(Move::new(amount, targets.iter().copied()));
            }
        }
        out.sort();
        out
    }
}

impl From<Vec<u64>> for GamePosition {
    fn from(v: Vec<u64>) -> Self {
        GamePosition::new(v)
    }
}

impl From<GamePosition> for Vec<u64> {
    fn from(p: GamePosition) -> Self {
        p.0
    }
}

impl fmt::Display for GamePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// The player to move loses.
    P,
    N,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::P => "P",
            Status::N => "N",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PositionClass {
    pub status: Status,
    pub winning_moves: Vec<Move>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestMove {
    #[serde(rename = "move")]
    pub mv: Move,
    pub successor: GamePosition,
    /// False when the mover is in a P-position and can only delay.
    pub winning: bool,
}

/// Classifies positions against cached sieves, one per jar count.
///
/// Readers share a sieve through an `Arc`; a query needing a larger cube
/// builds one outside the lock and replaces the entry if it is still the
/// largest. Any sieve covering a position gives the same answer.
#[derive(Debug)]
pub struct GameEngine {
    limit: u64,
    sieves: RwLock<HashMap<usize, Arc<Sieve>>>,
}

impl Default for GameEngine {
    fn default() -> Self {
        GameEngine::new(DEFAULT_GAME_LIMIT)
    }
}

impl GameEngine {
    pub fn new(limit: u64) -> Self {
        GameEngine {
            limit,
            sieves: RwLock::new(HashMap::new()),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    fn check(&self, pos: &GamePosition) -> Result<()> {
        if pos.largest() > self.limit {
            return Err(Error::limit("jar value", pos.largest(), self.limit));
        }
        Ok(())
    }

    /// A sieve for `jars` jars covering values up to at least `needed`.
    pub fn sieve(&self, jars: usize, needed: u64) -> Result<Arc<Sieve>> {
        if needed > self.limit {
            return Err(Error::limit("jar value", needed, self.limit));
        }
        if let Some(s) = self.sieves.read().unwrap().get(&jars) {
            if s.limit() >= needed {
                return Ok(Arc::clone(s));
            }
        }
        let size = needed
            .max(15)
            .saturating_add(1)
            .next_power_of_two()
            .min(self.limit + 1)
            - 1;
        let size = size.max(needed);
        let built = Arc::new(Sieve::build(jars, size)?);
        let mut map = self.sieves.write().unwrap();
        let entry = map.entry(jars).or_insert_with(|| Arc::clone(&built));
        if entry.limit() < built.limit() {
            *entry = Arc::clone(&built);
        }
        Ok(built)
    }

    pub fn is_p(&self, pos: &GamePosition) -> Result<bool> {
        self.check(pos)?;
        self.sieve(pos.len(), pos.largest())?.is_p(pos.jars())
    }

    pub fn classify(&self, pos: &GamePosition) -> Result<PositionClass> {
        self.check(pos)?;
        let sieve = self.sieve(pos.len(), pos.largest())?;
        let mut winning_moves = Vec::new();
        for mv in pos.moves() {
            let next = pos.apply(&mv)?;
            if sieve.is_p(next.jars())? {
                winning_moves.push(mv);
            }
        }
        let status = if winning_moves.is_empty() {
            Status::P
        } else {
            Status::N
        };
        Ok(PositionClass {
            status,
            winning_moves,
        })
    }

    /// Winning move to the smallest-total P successor, or from a
    /// P-position the move leaving the smallest total. Ties go to the
    /// lexicographically smallest successor, then the fewest jars touched.
    pub fn best_move(&self, pos: &GamePosition) -> Result<BestMove> {
        self.check(pos)?;
        if pos.is_terminal() {
            return Err(Error::NoMoves);
        }
        let sieve = self.sieve(pos.len(), pos.largest())?;
        let mut best: Option<(bool, u64, GamePosition, usize, Move)> = None;
        for mv in pos.moves() {
            let next = pos.apply(&mv)?;
            // false sorts first, so winning moves are preferred
            let key = (
                !sieve.is_p(next.jars())?,
                next.total(),
                next,
                mv.targets.len(),
                mv,
            );
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        let (losing, _, successor, _, mv) = best.unwrap();
        Ok(BestMove {
            mv,
            successor,
            winning: !losing,
        })
    }
}

fn shared_engine() -> &'static GameEngine {
    static ENGINE: std::sync::OnceLock<GameEngine> = std::sync::OnceLock::new();
    ENGINE.get_or_init(GameEngine::default)
}

/// Classifies with the process-wide engine (default limit).
pub fn classify_position(pos: &GamePosition) -> Result<PositionClass> {
    shared_engine().classify(pos)
}

pub fn best_move(pos: &GamePosition) -> Result<BestMove> {
    shared_engine().best_move(pos)
}

/// Memoized top-down P test, independent of the sieve.
pub fn is_p_recursive(pos: &GamePosition, memo: &mut HashMap<GamePosition, bool>) -> bool {
    if let Some(&p) = memo.get(pos) {
        return p;
    }
    let p = !pos
        .moves()
        .iter()
        .any(|mv| is_p_recursive(&pos.apply(mv).expect("generated move is legal"), memo));
    memo.insert(pos.clone(), p);
    p
}

/// Sorted P-positions of `jars` jars up to `limit` by plain recursion.
pub fn p_positions_recursive(jars: usize, limit: u64) -> Vec<Vec<u64>> {
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    let mut pos = vec![0u64; jars];
    loop {
        if is_p_recursive(&GamePosition::new(pos.iter().copied()), &mut memo) {
            out.push(pos.clone());
        }
        let Some(i) = (0..jars).rev().find(|&i| pos[i] < limit) else {
            break;
        };
        pos[i] += 1;
        let v = pos[i];
        for x in &mut pos[i + 1..] {
            *x = v;
        }
    }
    out
}
