//! Natural deduction proof terms checked modulo a theory, their
//! reduction, and strong normalization analysis.

mod check;
mod parse;
mod reduce;
mod syntax;

pub use check::{
    check_proof, format_path, infer_proof, scope_check, ProofPath, ProofVerdict, Sequent,
};
pub use parse::{parse_proof, parse_proof_file, ProofFile};
pub use reduce::{is_neutral, reduce_step, root_reduct, sn_status, verify_loop, ReductionOutcome};
pub use syntax::Proof;

use crate::logic::ParseError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("unbound proof variable `{0}`")]
    UnboundProofVar(String),
    #[error("unbound term variable `{0}`")]
    UnboundTermVar(String),
    #[error("ill-sorted: {0}")]
    IllSorted(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
