//! Truncated Fock spaces, mode operators, and the graded sparse matrices
//! that realize them over either coefficient backend.

pub mod halfint;
pub mod operator;
pub mod space;

pub use halfint::HalfInt;
pub use operator::{embed_ns, embed_r, identity_op, psi_matrix, scalar_op, GradedOperator};
pub use space::{Convention, FockSpace, FockState, PairedFockSpace, PsiImage, Sector};
