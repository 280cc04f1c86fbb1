//! Exact generating functions for the number of 123-patterns in
//! 132-avoiding permutations, and in permutations with exactly one 132-pattern.
//!
//! - [`series`]: truncated power series in `z`, `t`, `q` over big integers
//! - [`genfun`]: `P`, `Q`, `B` via functional equations, the continued
//!   fraction and the explicit lattice sum for `B`
//! - [`oracle`]: brute-force permutation enumeration
//! - [`ratrec`]: closed forms `N(z) / (1 - 2z)^k` from truncated series
//! - [`verify`]: the exact identity suite behind the `verify` command
//! - [`par`]: rayon-backed map/reduce with a sequential fallback

pub mod genfun;
pub mod oracle;
pub mod par;
pub mod ratrec;
pub mod series;
pub mod verify;

pub use genfun::{GenfunError, SolverConfig};
pub use oracle::{OracleError, PatternTable, Permutation};
pub use par::Strategy;
pub use ratrec::{RationalFn, RatrecError, ZPoly};
pub use series::{ExponentTriple, SeriesError, TriSeries, TruncationOrder, ZSeries};
