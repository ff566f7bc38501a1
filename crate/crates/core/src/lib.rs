//! Invariants of virtual, flat and long knots given as oriented Gauss codes.

pub mod arrow;
pub mod bracket;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod gauss;
pub mod homology;
pub mod moves;
pub mod parity_bracket;
pub mod poly;
pub mod state;
pub mod tangle;

pub use error::{Error, Result};
pub use gauss::{GaussCode, Parity, PassKind, Passage, Shape, Sign};
pub use poly::{Laurent, Monomial, MultiPoly, Substitution};
