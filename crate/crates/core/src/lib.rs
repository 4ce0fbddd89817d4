//! Exact computations around root data of split reductive groups over local
//! fields: root-system combinatorics, Weyl groups, truncated series fields in
//! positive characteristic, Moy-Prasad-style torus filtrations, and the
//! extraction of good semisimple elements together with the tameness criteria
//! that make the extraction work.
//!
//! Everything is exact: integer lattices, rationals, finite residue fields and
//! truncated series with rational exponents. No floating point anywhere.

pub mod error;
pub mod good;
pub mod jsonio;
pub mod linalg;
pub mod localfield;
pub mod oracle;
pub mod rootsys;
pub mod suite;
pub mod torus;
pub mod weyl;

/// Integer scalar used throughout the lattice-theoretic core.
pub type Int = i64;

/// Exact rational scalar (coweight coordinates, valuations, precision caps).
pub type Rat = num_rational::Ratio<Int>;

pub use error::{Error, Result};
