//! Arithmetic over GF(q) and the small amount of linear algebra the rest
//! of the crate needs: canonical subspaces of V(n,q), and extension
//! fields GF(q^m) with discrete log tables for the spread constructions.

pub mod field;
pub mod linalg;
pub mod tower;

pub use field::{prime_power, FieldElement, FieldSpec};
pub use linalg::{dot, index_to_vector, projective_reps, rref, vector_to_index, Subspace, Vector};
pub use tower::{make_tower, TowerMap};
