//! Exact computations with restricted Lie algebras over `F_p`: Witt, special and
//! Hamiltonian algebras, `sl_n`/`gl_n`, generalized Witt algebras and their p-envelopes,
//! automorphisms induced from truncated polynomial rings, tori and weight decompositions.

pub mod autos;
pub mod cartan;
pub mod catalog;
pub mod error;
pub mod ffla;
pub mod io;
pub mod liecore;
pub mod report;
pub mod restrict;
pub mod suites;
pub mod weights;
pub mod wittemb;

pub use error::{Error, Result};
pub use ffla::{FVector, Matrix, PrimeField};
pub use liecore::{LieAlgebra, Subspace};
