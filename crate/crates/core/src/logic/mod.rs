//! Many-sorted syntax, theory files and rewriting.

mod analysis;
pub(crate) mod parse;
mod rewrite;
mod syntax;

pub use analysis::{
    atom_polarities, check_deterministic, check_positive, check_quantifier_free, unify_all,
    Polarity,
};
pub use parse::{parse_formula, parse_open_formula, parse_term, parse_theory, ParseError};
pub use rewrite::{
    atom_reducts, congruent, congruent_terms, match_term, normalize_formula, normalize_term,
    rewrite_atom, rewrite_term_root, step_formula, step_term, whnf, NormalizationOutcome,
    Strategy,
};
pub use syntax::{fresh_name, FunDecl, Formula, RewriteRule, Signature, Subst, Term, Theory, Var};
