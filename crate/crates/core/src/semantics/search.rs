//! Brute-force model search and the super-consistency probe.

use super::fixpoint::fixpoint_model;
use super::model::CompiledTheory;
use super::{domain_sizes, BStructure, SemanticsError};
use crate::algebra::{
    check_complete, check_ordered, find_complete_order, OrderSpec, TruthValueAlgebra,
    DEFAULT_ORDER_SEARCH_BOUND,
};
use crate::logic::{check_positive, Theory};
use indexmap::IndexMap;

/// Default bound on the number of candidate structures `find_model` may
/// enumerate.
pub const DEFAULT_SEARCH_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSearch {
    /// The first model in enumeration order, if any.
    pub model: Option<BStructure>,
    /// Number of candidate structures checked.
    pub examined: u64,
}

/// Number of candidate structures over the given domains, or `None` on
/// overflow.
pub fn search_space_size(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    domains: &IndexMap<String, usize>,
) -> Option<u128> {
    let sig = &theory.signature;
    let len = |sorts: &[String]| -> Option<u32> {
        let mut n: u128 = 1;
        for s in sorts {
            n = n.checked_mul(*domains.get(s)? as u128)?;
        }
        u32::try_from(n).ok()
    };
    let mut total: u128 = 1;
    for d in sig.funs.values() {
        let radix = *domains.get(&d.result)? as u128;
        total = total.checked_mul(radix.checked_pow(len(&d.args)?)?)?;
    }
    for args in sig.preds.values() {
        total = total.checked_mul((algebra.size() as u128).checked_pow(len(args)?)?)?;
    }
    Some(total)
}

/// Enumerates every structure over `domains` and returns the first one
/// that is a model of `theory`.
///
/// Candidates are ordered lexicographically by their tables: function
/// tables before predicate tables, symbols in declaration order, argument
/// tuples in lexicographic order, values in carrier order.
pub fn find_model(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    domains: &IndexMap<String, usize>,
    bound: u64,
) -> Result<ModelSearch, SemanticsError> {
    let domains = domain_sizes(&theory.signature, domains, 1);
    let size = search_space_size(theory, algebra, &domains);
    match size {
        Some(n) if n <= bound as u128 => {}
        _ => {
            return Err(SemanticsError::SearchTooLarge {
                size: size.map_or_else(|| "too many".to_string(), |n| n.to_string()),
                bound,
            })
        }
    }
    let mut st = BStructure::constant(&theory.signature, algebra, &domains, 0)?;
    let compiled = CompiledTheory::new(theory, &st)?;
    // (is a function table, table, entry, radix), most significant first
    let mut digits = Vec::new();
    for (i, d) in theory.signature.funs.values().enumerate() {
        let radix = domains[d.result.as_str()];
        digits.extend((0..st.funs[i].len()).map(|e| (true, i, e, radix)));
    }
    for (i, t) in st.preds.iter().enumerate() {
        digits.extend((0..t.len()).map(|e| (false, i, e, algebra.size())));
    }
    let mut examined = 0;
    loop {
        examined += 1;
        if compiled.holds(&st)? {
            return Ok(ModelSearch {
                model: Some(st),
                examined,
            });
        }
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(ModelSearch {
                    model: None,
                    examined,
                });
            }
            k -= 1;
            let (is_fun, t, e, radix) = digits[k];
            let cell = if is_fun {
                &mut st.funs[t][e]
            } else {
                &mut st.preds[t][e]
            };
            *cell += 1;
            if *cell < radix {
                break;
            }
            *cell = 0;
        }
    }
}

/// An algebra of a probe library, optionally with a known order.
#[derive(Debug, Clone)]
pub struct LibraryAlgebra {
    pub name: String,
    pub algebra: TruthValueAlgebra,
    pub order: Option<OrderSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    ModelFound {
        structure: BStructure,
        method: &'static str,
    },
    /// No structure at all is a model (only claimed for theories without
    /// sorts, where the enumeration covers every structure).
    NoModel,
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeEntry {
    pub name: String,
    pub full: bool,
    pub ordered_complete: bool,
    pub outcome: ProbeOutcome,
}

impl ProbeEntry {
    /// Whether this entry shows that the theory is not super-consistent.
    pub fn falsifies(&self) -> bool {
        self.full && self.ordered_complete && self.outcome == ProbeOutcome::NoModel
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub entries: Vec<ProbeEntry>,
}

impl ProbeReport {
    pub fn falsified(&self) -> bool {
        self.entries.iter().any(ProbeEntry::falsifies)
    }

    pub fn all_models_found(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.outcome, ProbeOutcome::ModelFound { .. }))
    }

    pub fn conclusion(&self) -> String {
        if let Some(e) = self.entries.iter().find(|e| e.falsifies()) {
            format!(
                "not super-consistent: {} is full, ordered and complete and has no model",
                e.name
            )
        } else if self.all_models_found() {
            "a model exists over every library algebra; this is evidence of \
             super-consistency, not a proof"
                .to_string()
        } else {
            "inconclusive: no falsifying algebra found".to_string()
        }
    }
}

fn ordered_complete(entry: &LibraryAlgebra) -> Option<OrderSpec> {
    match &entry.order {
        Some(ord) => (check_ordered(&entry.algebra, ord).passed()
            && check_complete(&entry.algebra, ord).0.passed())
        .then(|| ord.clone()),
        None => find_complete_order(&entry.algebra, DEFAULT_ORDER_SEARCH_BOUND)
            .ok()
            .flatten(),
    }
}

/// Looks for a model of `theory` over every library algebra.
///
/// Each algebra is first searched exhaustively with one element per sort
/// when the space is within `bound`; otherwise, for positive theories over
/// ordered complete algebras, a fixed point construction is tried.
pub fn probe_super_consistency(
    theory: &Theory,
    library: &[LibraryAlgebra],
    bound: u64,
    fuel: usize,
) -> ProbeReport {
    let domains = domain_sizes(&theory.signature, &IndexMap::new(), 1);
    let exhaustive = theory.signature.sorts.is_empty();
    let mut entries = Vec::new();
    for lib in library {
        let order = ordered_complete(lib);
        let outcome = match find_model(theory, &lib.algebra, &domains, bound) {
            Ok(ModelSearch {
                model: Some(structure),
                ..
            }) => ProbeOutcome::ModelFound {
                structure,
                method: "exhaustive search",
            },
            Ok(ModelSearch { model: None, .. }) if exhaustive => ProbeOutcome::NoModel,
            Ok(ModelSearch { model: None, .. }) => ProbeOutcome::Inconclusive(
                "no model with one element per sort; larger domains were not searched".into(),
            ),
            Err(e) => match (&order, check_positive(theory).passed()) {
                (Some(ord), true) => {
                    match fixpoint_model(theory, &lib.algebra, ord, &domains, fuel) {
                        Ok(out) if out.report.passed() => ProbeOutcome::ModelFound {
                            structure: out.structure,
                            method: "fixed point",
                        },
                        Ok(_) => ProbeOutcome::Inconclusive(format!(
                            "{e}; the fixed point construction did not give a model"
                        )),
                        Err(f) => ProbeOutcome::Inconclusive(format!("{e}; {f}")),
                    }
                }
                _ => ProbeOutcome::Inconclusive(e.to_string()),
            },
        };
        entries.push(ProbeEntry {
            name: lib.name.clone(),
            full: lib.algebra.is_full(),
            ordered_complete: order.is_some(),
            outcome,
        });
    }
    ProbeReport { entries }
}
