//! Vector space partitions of V(n,q): which types can exist, and how to
//! build some of them.
//!
//! A partition of V(n,q) is a set of nonzero subspaces covering every
//! nonzero vector exactly once.  Its type records how many members of each
//! dimension occur.  This crate decides feasibility of a type through a
//! chain of necessary conditions (packing identities, dimension and tail
//! constraints, counting polytopes over hyperplane section types, numeric
//! bounds on spread completions) and, independently, constructs explicit
//! partitions for a family of parameters and verifies them vector by
//! vector.
//!
//! The crates split roughly into arithmetic (`gfq`), the partition model
//! and its direct checks (`partition`), hyperplane counting and the
//! resulting linear systems (`hyperplane`), an exact rational integer
//! feasibility solver (`intfeas`), closed-form bounds (`bounds`), explicit
//! constructions (`construct`), and the recursive classifier gluing it all
//! together (`derive`).

pub mod bounds;
pub mod construct;
pub mod derive;
pub mod gfq;
pub mod hyperplane;
pub mod intfeas;
pub mod jsonio;
pub mod partition;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field too large: {0} elements (limit {1})")]
    FieldTooLarge(u64, u64),
    #[error("no irreducible polynomial found for q={q}, degree {degree}")]
    NoIrreducible { q: u64, degree: usize },
    #[error("vector has length {got}, ambient dimension is {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("invalid partition type: {0}")]
    InvalidType(String),
    #[error("{0}")]
    BadParameter(String),
    #[error("ambient space too large to verify: q^n = {0}")]
    SpaceTooLarge(u64),
    #[error("member index {0} out of range")]
    NoSuchMember(usize),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
