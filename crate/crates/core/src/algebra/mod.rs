//! Finite truth values algebras and the checks on them.

mod builtin;
mod check;
mod io;
mod morphism;
mod order;

pub use builtin::{boolean, t1, t2, trivial};
pub use check::{
    check_pseudo_heyting, check_pseudo_heyting_laws, check_tva, derive_preorder, is_heyting,
    DerivedPreorder, HeytingVerdict,
};
pub use io::{parse_algebra, render_algebra, AlgebraDocument};
pub use morphism::{
    check_morphism, find_isomorphism, quotient_by_equiv, AlgebraMorphism, MorphismKind,
};
pub use order::{
    check_complete, check_ordered, find_complete_order, Bounds, OrderSpec, Relation,
    DEFAULT_ORDER_SEARCH_BOUND,
};

use crate::Subset;
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest carrier the library will build. Completions of file algebras
/// stay well below this.
pub const MAX_CARRIER: usize = 16;
/// Largest carrier accepted from algebra files.
pub const MAX_FILE_CARRIER: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("carrier has {size} elements, limit is {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("duplicate truth value name `{0}`")]
    DuplicateName(String),
    #[error("unknown truth value `{0}`")]
    UnknownName(String),
    #[error("table `{table}` has {got} entries, expected {expected}")]
    TableShape {
        table: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("table `{table}` entry {index} is {value}, outside the carrier")]
    EntryOutOfRange {
        table: &'static str,
        index: usize,
        value: usize,
    },
    #[error("`{table}` lists the subset {subset} twice")]
    DuplicateQuantifierEntry { table: &'static str, subset: String },
    #[error("`{table}` has no value for {subset}, but the algebra is full")]
    MissingQuantifierEntry { table: &'static str, subset: String },
    #[error("operation `{op}` is not compatible with the equivalence at {witness}")]
    Incompatible { op: &'static str, witness: String },
    #[error("search over orders on {size} elements exceeds the bound {bound}")]
    SearchTooLarge { size: usize, bound: usize },
    #[error("invalid algebra document: {0}")]
    Parse(String),
}

/// Raw tables used to build a [`TruthValueAlgebra`].
///
/// Binary tables are row-major: entry `a * n + b` is the value at `(a, b)`.
/// The keys of `forall` and `exists` are the quantifier domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraTables {
    pub names: Vec<String>,
    pub positives: Subset,
    pub top: usize,
    pub bot: usize,
    pub imp: Vec<usize>,
    pub and: Vec<usize>,
    pub or: Vec<usize>,
    pub full: bool,
    pub forall: BTreeMap<Subset, usize>,
    pub exists: BTreeMap<Subset, usize>,
}

/// A finite truth values algebra. Elements are carrier indices.
///
/// Construction only checks the shape of the data; whether the tables obey
/// the deduction conditions is the job of [`check_tva`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthValueAlgebra {
    t: AlgebraTables,
}

impl TruthValueAlgebra {
    pub fn new(tables: AlgebraTables) -> Result<Self, AlgebraError> {
        let n = tables.names.len();
        if n == 0 {
            return Err(AlgebraError::EmptyCarrier);
        }
        if n > MAX_CARRIER {
            return Err(AlgebraError::CarrierTooLarge {
                size: n,
                max: MAX_CARRIER,
            });
        }
        for (i, name) in tables.names.iter().enumerate() {
            if tables.names[..i].contains(name) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        let carrier = Subset::full(n);
        if !tables.positives.is_subset_of(carrier) {
            return Err(AlgebraError::EntryOutOfRange {
                table: "positives",
                index: 0,
                value: tables.positives.iter().max().unwrap_or(0),
            });
        }
        for (table, value) in [("top", tables.top), ("bot", tables.bot)] {
            if value >= n {
                return Err(AlgebraError::EntryOutOfRange {
                    table,
                    index: 0,
                    value,
                });
            }
        }
        for (table, data) in [("imp", &tables.imp), ("and", &tables.and), ("or", &tables.or)] {
            if data.len() != n * n {
                return Err(AlgebraError::TableShape {
                    table,
                    expected: n * n,
                    got: data.len(),
                });
            }
            if let Some(index) = data.iter().position(|&v| v >= n) {
                return Err(AlgebraError::EntryOutOfRange {
                    table,
                    index,
                    value: data[index],
                });
            }
        }
        for (table, map) in [("forall", &tables.forall), ("exists", &tables.exists)] {
            for (&subset, &value) in map {
                if !subset.is_subset_of(carrier) || value >= n {
                    return Err(AlgebraError::EntryOutOfRange {
                        table,
                        index: subset.0 as usize,
                        value,
                    });
                }
            }
            if tables.full && map.len() != 1 << n {
                let missing = Subset::all(n).find(|s| !map.contains_key(s)).unwrap();
                return Err(AlgebraError::MissingQuantifierEntry {
                    table,
                    subset: subset_label(&tables.names, missing),
                });
            }
        }
        Ok(TruthValueAlgebra { t: tables })
    }

    pub fn size(&self) -> usize {
        self.t.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn carrier(&self) -> Subset {
        Subset::full(self.size())
    }

    pub fn names(&self) -> &[String] {
        &self.t.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.t.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.t.names.iter().position(|n| n == name)
    }

    pub fn positives(&self) -> Subset {
        self.t.positives
    }

    pub fn is_positive(&self, a: usize) -> bool {
        self.t.positives.contains(a)
    }

    pub fn top(&self) -> usize {
        self.t.top
    }

    pub fn bot(&self) -> usize {
        self.t.bot
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.t.imp[a * self.size() + b]
    }

    pub fn and(&self, a: usize, b: usize) -> usize {
        self.t.and[a * self.size() + b]
    }

    pub fn or(&self, a: usize, b: usize) -> usize {
        self.t.or[a * self.size() + b]
    }

    pub fn is_full(&self) -> bool {
        self.t.full
    }

    pub fn is_trivial(&self) -> bool {
        self.t.positives == self.carrier()
    }

    /// `∀̃ A`, or `None` when `A` is outside the universal domain.
    pub fn forall(&self, a: Subset) -> Option<usize> {
        self.t.forall.get(&a).copied()
    }

    /// `∃̃ E`, or `None` when `E` is outside the existential domain.
    pub fn exists(&self, e: Subset) -> Option<usize> {
        self.t.exists.get(&e).copied()
    }

    pub fn forall_domain(&self) -> impl Iterator<Item = Subset> + '_ {
        self.t.forall.keys().copied()
    }

    pub fn exists_domain(&self) -> impl Iterator<Item = Subset> + '_ {
        self.t.exists.keys().copied()
    }

    pub fn forall_table(&self) -> &BTreeMap<Subset, usize> {
        &self.t.forall
    }

    pub fn exists_table(&self) -> &BTreeMap<Subset, usize> {
        &self.t.exists
    }

    pub fn tables(&self) -> &AlgebraTables {
        &self.t
    }

    pub fn into_tables(self) -> AlgebraTables {
        self.t
    }

    /// `{a ⇒̃ e | e ∈ A}`.
    pub fn imp_left(&self, a: usize, set: Subset) -> Subset {
        set.map(|e| self.imp(a, e))
    }

    /// `{e ⇒̃ a | e ∈ E}`.
    pub fn imp_right(&self, set: Subset, a: usize) -> Subset {
        set.map(|e| self.imp(e, a))
    }

    /// Renders a subset as `{a,b}` with names in carrier order.
    pub fn subset_name(&self, set: Subset) -> String {
        subset_label(&self.t.names, set)
    }
}

pub(crate) fn subset_label(names: &[String], set: Subset) -> String {
    let inner: Vec<&str> = set.iter().map(|i| names[i].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}
