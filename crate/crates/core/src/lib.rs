//! Trace algebras of generic matrices: exact linear algebra, cyclic words,
//! formal trace polynomials and their images under evaluation, the
//! fundamental trace identity, the reduction system, and the presentation
//! machinery for small cases.

pub mod error;
pub mod eval;
pub mod generators;
pub mod identities;
pub mod linalg;
pub mod modp;
pub mod par;
pub mod poly;
pub mod presentation;
pub mod rational;
pub mod reduction;
pub mod tpoly;
pub mod trace;
pub mod words;

pub use error::{Error, Result};
pub use rational::Rational;
