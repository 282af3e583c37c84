//! Exact solver, classifier and game engine for the Cookie Monster problem.
//!
//! A set of cookie jars `S = {k1 < k2 < ... < kn}` is emptied by moves that
//! each pick some jars and remove the same number of cookies from every one
//! of them. The minimum number of moves, `CM(S)`, equals the size of the
//! smallest multiset `A` whose subset sums contain every element of `S`.
//!
//! The crate is organised as follows:
//!
//! - [`jars`]: canonical jar sets, move multisets, moves and universal bounds.
//! - [`solver`]: the exact multiset search with witnesses and replayable
//!   traces, plus an independent state-space oracle.
//! - [`heuristics`]: the three classic greedy strategies.
//! - [`classifier`]: size-three rule, the `CM(S) = 3` equation systems and
//!   equal-sum disjoint subsets.
//! - [`sequences`]: arithmetic, geometric and Fibonacci families with their
//!   closed-form predictions.
//! - [`game`]: the two-player take-from-a-subset game, P-position search and
//!   Wythoff pairs.
//! - [`sweep`]: exhaustive cross-check harnesses built on the above.

pub mod classifier;
pub mod error;
pub mod exec;
pub mod game;
pub mod heuristics;
pub mod jars;
pub mod sequences;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Exec;
pub use jars::{Bounds, JarSet, Move, MoveMultiset, SolveResult};
