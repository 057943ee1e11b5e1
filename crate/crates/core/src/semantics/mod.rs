//! Algebra-valued structures, denotation and model construction.

mod eval;
mod fixpoint;
mod io;
mod model;
mod qf;
mod search;
pub mod stt;

pub use eval::{denote, denote_term, Assignment, Denotation};
pub use fixpoint::{fixpoint_model, fixpoint_model_deterministic, FixpointOutcome};
pub use io::{parse_structure, render_structure, structure_algebra_path};
pub use model::{check_model, AxiomCheck, ModelReport, ModelWitness, RuleCheck};
pub use qf::{quantifier_free_model, QuantifierFreeModel};
pub use search::{
    find_model, probe_super_consistency, LibraryAlgebra, ModelSearch, ProbeEntry, ProbeOutcome,
    ProbeReport, DEFAULT_SEARCH_BOUND,
};

use crate::algebra::TruthValueAlgebra;
use crate::logic::Signature;
use indexmap::IndexMap;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown function symbol `{0}`")]
    UnknownFunction(String),
    #[error("unknown predicate symbol `{0}`")]
    UnknownPredicate(String),
    #[error("no domain for sort `{0}`")]
    MissingDomain(String),
    #[error("variable `{0}` has no value")]
    UnassignedVariable(String),
    #[error("`{symbol}` applied to {got} arguments, expected {expected}")]
    Arity {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("search space of {size} candidates exceeds the bound {bound}")]
    SearchTooLarge { size: String, bound: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Construction(String),
    #[error("invalid structure: {0}")]
    Parse(String),
}

/// An interpretation of a signature over some domains, valued in a truth
/// values algebra. Symbols are resolved to handles once, then applied.
pub trait Interpretation {
    type Elem: Clone + PartialEq + Debug;

    fn algebra(&self) -> &TruthValueAlgebra;
    fn domain(&self, sort: &str) -> Result<Vec<Self::Elem>, SemanticsError>;
    fn fun_handle(&self, name: &str) -> Result<usize, SemanticsError>;
    fn pred_handle(&self, name: &str) -> Result<usize, SemanticsError>;
    fn apply_fun(&self, h: usize, args: &[Self::Elem]) -> Result<Self::Elem, SemanticsError>;
    fn apply_pred(&self, h: usize, args: &[Self::Elem]) -> Result<usize, SemanticsError>;
    /// A printable name for an element.
    fn describe(&self, e: &Self::Elem) -> String;
}

/// A structure with finite domains `{s0, .., s(n-1)}` per sort and explicit
/// tables for every symbol.
///
/// Tables are indexed by argument tuples in mixed radix, first argument
/// most significant, so table order is lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BStructure {
    pub algebra: TruthValueAlgebra,
    pub signature: Signature,
    /// Domain size of every sort, in signature order.
    pub domains: IndexMap<String, usize>,
    /// Function tables, in signature order; entries are domain elements.
    pub funs: Vec<Vec<usize>>,
    /// Predicate tables, in signature order; entries are truth values.
    pub preds: Vec<Vec<usize>>,
}

impl BStructure {
    /// A structure whose function tables map everything to element 0 and
    /// whose predicate tables are constantly `fill`.
    pub fn constant(
        signature: &Signature,
        algebra: &TruthValueAlgebra,
        domains: &IndexMap<String, usize>,
        fill: usize,
    ) -> Result<Self, SemanticsError> {
        let mut sizes = IndexMap::new();
        for s in &signature.sorts {
            let n = *domains
                .get(s)
                .ok_or_else(|| SemanticsError::MissingDomain(s.clone()))?;
            if n == 0 {
                return Err(SemanticsError::Construction(format!(
                    "domain of sort `{s}` is empty"
                )));
            }
            sizes.insert(s.clone(), n);
        }
        let mut st = BStructure {
            algebra: algebra.clone(),
            signature: signature.clone(),
            domains: sizes,
            funs: Vec::new(),
            preds: Vec::new(),
        };
        st.funs = signature
            .funs
            .values()
            .map(|d| vec![0; st.table_len(&d.args)])
            .collect();
        st.preds = signature
            .preds
            .values()
            .map(|args| vec![fill; st.table_len(args)])
            .collect();
        Ok(st)
    }

    pub fn domain_size(&self, sort: &str) -> usize {
        self.domains[sort]
    }

    pub fn table_len(&self, sorts: &[String]) -> usize {
        sorts.iter().map(|s| self.domains[s.as_str()]).product()
    }

    /// Position of `args` in a table over `sorts`.
    pub fn tuple_index(&self, sorts: &[String], args: &[usize]) -> usize {
        sorts
            .iter()
            .zip(args)
            .fold(0, |acc, (s, &a)| acc * self.domains[s.as_str()] + a)
    }

    /// The argument tuple at position `index` of a table over `sorts`.
    pub fn tuple_at(&self, sorts: &[String], mut index: usize) -> Vec<usize> {
        let mut out = vec![0; sorts.len()];
        for (i, s) in sorts.iter().enumerate().rev() {
            let n = self.domains[s.as_str()];
            out[i] = index % n;
            index /= n;
        }
        out
    }

    pub fn pred_table(&self, name: &str) -> Option<&[usize]> {
        let i = self.signature.preds.get_index_of(name)?;
        Some(&self.preds[i])
    }

    pub fn fun_table(&self, name: &str) -> Option<&[usize]> {
        let i = self.signature.funs.get_index_of(name)?;
        Some(&self.funs[i])
    }

    /// `P̂(args)`.
    pub fn pred_value(&self, name: &str, args: &[usize]) -> Option<usize> {
        let i = self.signature.preds.get_index_of(name)?;
        let sorts = &self.signature.preds[i];
        Some(self.preds[i][self.tuple_index(sorts, args)])
    }

    /// The same structure with every predicate value sent through `map`.
    pub fn map_values(&self, target: &TruthValueAlgebra, map: impl Fn(usize) -> usize) -> Self {
        BStructure {
            algebra: target.clone(),
            preds: self
                .preds
                .iter()
                .map(|t| t.iter().map(|&v| map(v)).collect())
                .collect(),
            ..self.clone()
        }
    }
}

pub fn element_name(e: usize) -> String {
    format!("s{e}")
}

impl Interpretation for BStructure {
    type Elem = usize;

    fn algebra(&self) -> &TruthValueAlgebra {
        &self.algebra
    }

    fn domain(&self, sort: &str) -> Result<Vec<usize>, SemanticsError> {
        self.domains
            .get(sort)
            .map(|&n| (0..n).collect())
            .ok_or_else(|| SemanticsError::MissingDomain(sort.to_string()))
    }

    fn fun_handle(&self, name: &str) -> Result<usize, SemanticsError> {
        self.signature
            .funs
            .get_index_of(name)
            .ok_or_else(|| SemanticsError::UnknownFunction(name.to_string()))
    }

    fn pred_handle(&self, name: &str) -> Result<usize, SemanticsError> {
        self.signature
            .preds
            .get_index_of(name)
            .ok_or_else(|| SemanticsError::UnknownPredicate(name.to_string()))
    }

    fn apply_fun(&self, h: usize, args: &[usize]) -> Result<usize, SemanticsError> {
        let (name, decl) = self.signature.funs.get_index(h).expect("valid handle");
        if args.len() != decl.args.len() {
            return Err(SemanticsError::Arity {
                symbol: name.clone(),
                expected: decl.args.len(),
                got: args.len(),
            });
        }
        Ok(self.funs[h][self.tuple_index(&decl.args, args)])
    }

    fn apply_pred(&self, h: usize, args: &[usize]) -> Result<usize, SemanticsError> {
        let (name, sorts) = self.signature.preds.get_index(h).expect("valid handle");
        if args.len() != sorts.len() {
            return Err(SemanticsError::Arity {
                symbol: name.clone(),
                expected: sorts.len(),
                got: args.len(),
            });
        }
        Ok(self.preds[h][self.tuple_index(sorts, args)])
    }

    fn describe(&self, e: &usize) -> String {
        element_name(*e)
    }
}

/// Domain sizes for every sort of `sig`: the given ones, others `default`.
pub fn domain_sizes(
    sig: &Signature,
    given: &IndexMap<String, usize>,
    default: usize,
) -> IndexMap<String, usize> {
    sig.sorts
        .iter()
        .map(|s| (s.clone(), given.get(s).copied().unwrap_or(default)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, t1};
    use crate::logic::{parse_formula, parse_theory, Formula};

    #[test]
    fn denotation_examples() {
        let th = parse_theory("sort d\npred P\npred Q\npred R : d").unwrap();
        let dom = IndexMap::from([("d".to_string(), 1)]);
        let mut st = BStructure::constant(&th.signature, &boolean(), &dom, 0).unwrap();
        assert_eq!(
            denote(&st, &Formula::Top, &Assignment::new()).unwrap(),
            Denotation::Defined(1)
        );
        st.preds[0] = vec![1];
        let pq = parse_formula("P => Q", &th.signature).unwrap();
        assert_eq!(denote(&st, &pq, &Assignment::new()).unwrap().value(), Some(0));

        let mut s1 = BStructure::constant(&th.signature, &t1(), &dom, 0).unwrap();
        s1.preds[2] = vec![1];
        let all = parse_formula("forall x:d. R(x)", &th.signature).unwrap();
        assert_eq!(denote(&s1, &all, &Assignment::new()).unwrap().value(), Some(2));
    }

    #[test]
    fn tuple_indexing_is_lexicographic() {
        let th = parse_theory("sort a\nsort b\npred P : a b").unwrap();
        let dom = IndexMap::from([("a".to_string(), 2), ("b".to_string(), 3)]);
        let st = BStructure::constant(&th.signature, &boolean(), &dom, 0).unwrap();
        let sorts = &th.signature.preds["P"];
        assert_eq!(st.tuple_index(sorts, &[1, 2]), 5);
        assert_eq!(st.tuple_at(sorts, 4), vec![1, 1]);
        assert_eq!(st.table_len(sorts), 6);
    }
}
