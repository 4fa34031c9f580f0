//! Word equations `w(X, A) = B` over uniquely divisible groups.
//!
//! The crate decides total decomposability of words, builds radical
//! solutions for decomposable ones, computes word polynomials and scans
//! them over prime fields, constructs finite groups in which an equation
//! has no solution, and solves product equations exactly in unipotent
//! matrix and truncated power-series groups.

pub mod arith;
pub mod backends;
pub mod certificates;
pub mod error;
pub mod gp;
pub mod modp;
pub mod par;
pub mod poly;
pub mod radical;
pub mod survey;
pub mod word;
pub mod wordpoly;

pub use error::{Error, ParseError, Result};
pub use poly::{BivarPoly, UnivarPoly};
pub use word::{decompose, parse_word, DecompositionWitness, Morphism, Word};
