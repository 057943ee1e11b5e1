//! Finite truth values algebras, deduction modulo rewriting, and the
//! model and proof-term machinery built on them.

pub mod algebra;
pub mod completion;
pub mod logic;
pub mod proofterms;
pub mod semantics;
mod report;
mod subset;

pub use report::{CheckReport, TriState, Violation};
pub use subset::Subset;
