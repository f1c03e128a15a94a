//! Finite-algebra toolkit for Jónsson-type term systems, constructive witness
//! chains for congruence identities, and brute-force checking of those
//! identities on small algebras.

pub mod algebra;
pub mod catalog;
pub mod chains;
pub mod cli;
pub mod error;
pub mod maltsev;
pub mod relations;
pub mod verifier;

pub use algebra::{Assignment, Elem, FiniteAlgebra, Term};
pub use error::{Error, Result};
pub use relations::{BinRel, Congruence};
