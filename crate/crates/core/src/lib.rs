//! Formal matrix rings `M(n, R, Σ)` over a commutative base ring `R`.
//!
//! The crate covers the full path from a table of factors to an isomorphism
//! verdict:
//!
//! - [`ring`]: exact arithmetic in `Z` and `Z/mZ`, units, nilpotents.
//! - [`factor`]: factor systems, their validation, constructions and
//!   permutations, and the factor matrices `S` and `S_k`.
//! - [`matrix`]: the twisted product and the transport isomorphism `A ↦ τA`.
//! - [`canonical`]: block canonical forms of the principal factor matrix and
//!   the isomorphism decision for rings with binary factor systems.
//! - [`finite`]: exhaustive tables for small rings, prime radicals,
//!   quotients, central idempotents and a backtracking isomorphism oracle.
//! - [`format`]: the JSON file formats used by the command-line tool.

pub mod canonical;
pub mod factor;
pub mod finite;
pub mod format;
pub mod matrix;
pub mod ring;

pub use canonical::{
    canonicalize, decide_isomorphism, quotient_descriptor, same_canonical_form,
    similarity_partition, trichotomy_check, Canonical, CanonicalDescriptor, EquivalencePartition,
    IsoOutcome, IsoVerdict,
};
pub use factor::{
    binary_uniqueness_check, ExponentMatrix, FactorError, FactorSystem, Permutation, Uniqueness,
};
pub use finite::{FiniteRingTable, IdealSet};
pub use matrix::{transport, FormalMatrix, FormalMatrixRing};
pub use ring::{BaseRing, RingElement, RingError};
