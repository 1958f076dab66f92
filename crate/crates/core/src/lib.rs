//! Burning numbers of Hamming graphs.
//!
//! * [`linrat`]: exact rationals, RREF and deterministic kernel vectors.
//! * [`hamming`]: vertices, distances, staggered-ball coverage and exact
//!   burning numbers by exhaustive search.
//! * [`colorcode`]: the simplex vector-coloring `φ : [q]^n → Q^n`.
//! * [`floatvar`]: multicolor floating-variable rounding, producing
//!   `x ∈ Q^n` with `|a_i·x| < i`.
//! * [`adversary`]: evader construction behind `b(H(n,q)) >= ⌊(1-1/q)n⌋ + 1`
//!   and the closed-form bounds.
//! * [`experiments`]: alphabet monotonicity, a two-color existence oracle and
//!   the q = 3 shifted-distance search.

pub mod adversary;
pub mod colorcode;
pub mod error;
pub mod experiments;
pub mod floatvar;
pub mod hamming;
pub mod linrat;
pub mod report;
pub mod selfcheck;

pub use adversary::{canonical_sequence, evade, lower_bound, upper_bound, EvaderCertificate};
pub use colorcode::{decode, encode, Block, CodeVector};
pub use error::{Error, Result};
pub use floatvar::FvCertificate;
pub use hamming::{burning_number, burns, hdist, uncovered, BurnSequence, SearchLimits, Vertex};
pub use linrat::{RatMatrix, Rational};
