//! Pairs of quadratic forms in characteristic two.
//!
//! Given two quadratic forms `q0, q1` on an odd-dimensional space
//! `E = k^(2m+1)` over `k = GF(2^d)`, the crate computes the half-discriminant
//! binary form, a Kronecker normal form, the invariant `r` in the étale
//! algebra `k[T]/(f)` modulo `k + ℘(A)`, automorphism groups, the linear
//! generators of the intersection `X = {q0 = q1 = 0}`, and their intersection
//! lattice.

pub mod algebra;
pub mod autos;
pub mod error;
pub mod exec;
pub mod field;
pub mod geometry;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod normalform;
pub mod oracle;
pub mod pencil;
pub mod poly;
pub mod quadform;
pub mod random;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Embedding, Fe, Gf};
pub use linalg::Matrix;
pub use pencil::Pencil;
pub use poly::{BinaryForm, Polynomial};
pub use quadform::{AlternatingForm, QuadraticForm};
