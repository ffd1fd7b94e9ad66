//! Membership testing and finite-quotient separation for word-quasiconvex
//! subgroups of right-angled Artin groups.

pub mod bench;
pub mod completion;
pub mod complex;
pub mod error;
pub mod folding;
pub mod graph;
pub mod matrix;
pub mod membership;
pub mod representation;
pub mod separation;
pub mod word;

pub use graph::DefiningGraph;
pub use word::{Letter, Word};
