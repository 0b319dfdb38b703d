//! Well-scoped abstract syntax with variable binding, parametrised by a
//! structural mode (cartesian, linear, affine, relevant).
//!
//! Terms over a binding signature are generated exhaustively at small sizes
//! and single-variable substitution is checked against the substitution
//! algebra axioms of each mode.

pub mod contexts;
pub mod enumeration;
pub mod exec;
pub mod fold;
pub mod laws;
pub mod sexpr;
pub mod signature;
pub mod substitution;
pub mod term;

pub use contexts::{Mode, Renaming};
pub use signature::{OpId, Signature};
pub use term::{Term, TermError};
