//! SL_k frieze patterns: exact arithmetic, classification, transfer
//! matrices, wild continuation graphs, an unbounded construction and
//! enumeration of tame integral positive friezes.

pub mod arith;
pub mod classify;
pub mod document;
pub mod enumerate;
pub mod fixtures;
pub mod pattern;
pub mod printed;
pub mod unbounded;
pub mod wild;
pub mod xi;

pub use arith::{ArithError, ExactMatrix, QuadNumber, Rational};
pub use classify::{classify, verify_slk, ClassificationReport};
pub use pattern::{Array, FriezePattern, PatternError, Position, Vertical};
