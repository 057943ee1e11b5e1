//! Models of quantifier free, terminating and confluent theories, built on
//! normal closed terms.

use super::model::{check_model, ModelReport};
use super::{BStructure, SemanticsError};
use crate::algebra::TruthValueAlgebra;
use crate::logic::{
    check_quantifier_free, normalize_formula, normalize_term, Formula, NormalizationOutcome,
    Strategy, Term, Theory,
};
use indexmap::{IndexMap, IndexSet};

/// Largest number of normal closed terms per sort.
pub const MAX_UNIVERSE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifierFreeModel {
    pub structure: BStructure,
    /// For each sort, the normal closed term behind each element `s<i>`.
    pub universe: IndexMap<String, Vec<Term>>,
    pub report: ModelReport,
}

/// Value of a quantifier free formula with every atom read as `⊤`.
fn atoms_true(alg: &TruthValueAlgebra, f: &Formula) -> Result<usize, SemanticsError> {
    Ok(match f {
        Formula::Atom(..) | Formula::Top => alg.top(),
        Formula::Bot => alg.bot(),
        Formula::Imp(a, b) => alg.imp(atoms_true(alg, a)?, atoms_true(alg, b)?),
        Formula::And(a, b) => alg.and(atoms_true(alg, a)?, atoms_true(alg, b)?),
        Formula::Or(a, b) => alg.or(atoms_true(alg, a)?, atoms_true(alg, b)?),
        Formula::Forall(..) | Formula::Exists(..) => {
            return Err(SemanticsError::Precondition(format!(
                "normal form `{f}` contains a quantifier"
            )))
        }
    })
}

fn normal_term(theory: &Theory, t: &Term, fuel: usize) -> Result<Term, SemanticsError> {
    normalize_term(theory, t, fuel, Strategy::Innermost)
        .normal()
        .ok_or_else(|| SemanticsError::Construction(format!("no normal form for `{t}` within fuel")))
}

/// Builds the structure whose domains are the normal closed terms of depth
/// at most `max_depth`, with `f̂(t..) = f(t..)↓` and `P̂(t..)` the value of
/// `P(t..)↓` when its atoms are read as `⊤`.
pub fn quantifier_free_model(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    max_depth: usize,
    fuel: usize,
) -> Result<QuantifierFreeModel, SemanticsError> {
    if !check_quantifier_free(theory) {
        return Err(SemanticsError::Precondition(
            "a rule's right-hand side contains a quantifier".into(),
        ));
    }
    if !(theory.claimed_terminating && theory.claimed_confluent) {
        return Err(SemanticsError::Precondition(
            "the theory must be declared terminating and confluent".into(),
        ));
    }
    let sig = &theory.signature;
    let mut universe: IndexMap<String, IndexSet<Term>> = sig
        .sorts
        .iter()
        .map(|s| (s.clone(), IndexSet::new()))
        .collect();
    for _ in 0..=max_depth {
        let mut grown = false;
        for (f, decl) in &sig.funs {
            let pools: Vec<Vec<Term>> = decl
                .args
                .iter()
                .map(|s| universe[s.as_str()].iter().cloned().collect())
                .collect();
            for args in product(&pools) {
                let t = normal_term(theory, &Term::App(f.clone(), args), fuel)?;
                if t.depth() > max_depth {
                    continue;
                }
                let set = &mut universe[decl.result.as_str()];
                if set.insert(t) {
                    grown = true;
                    if set.len() > MAX_UNIVERSE {
                        return Err(SemanticsError::Construction(format!(
                            "more than {MAX_UNIVERSE} normal closed terms of sort `{}`",
                            decl.result
                        )));
                    }
                }
            }
        }
        if !grown {
            break;
        }
    }
    let mut sizes = IndexMap::new();
    for (s, set) in &universe {
        if set.is_empty() {
            return Err(SemanticsError::Construction(format!(
                "sort `{s}` has no closed terms"
            )));
        }
        sizes.insert(s.clone(), set.len());
    }
    let mut st = BStructure::constant(sig, algebra, &sizes, algebra.top())?;
    for (i, (f, decl)) in sig.funs.iter().enumerate() {
        for e in 0..st.funs[i].len() {
            let args = st.tuple_at(&decl.args, e);
            let terms = args
                .iter()
                .zip(&decl.args)
                .map(|(&a, s)| universe[s.as_str()][a].clone())
                .collect();
            let t = normal_term(theory, &Term::App(f.clone(), terms), fuel)?;
            st.funs[i][e] = universe[decl.result.as_str()].get_index_of(&t).ok_or_else(|| {
                SemanticsError::Construction(format!(
                    "`{t}` is deeper than {max_depth}; the term universe is not closed"
                ))
            })?;
        }
    }
    for (i, (p, sorts)) in sig.preds.iter().enumerate() {
        for e in 0..st.preds[i].len() {
            let args = st.tuple_at(sorts, e);
            let terms = args
                .iter()
                .zip(sorts)
                .map(|(&a, s)| universe[s.as_str()][a].clone())
                .collect();
            let atom = Formula::Atom(p.clone(), terms);
            let nf = match normalize_formula(theory, &atom, fuel, Strategy::Innermost) {
                NormalizationOutcome::Normal { value, .. } => value,
                NormalizationOutcome::FuelExhausted { .. }
                | NormalizationOutcome::Diverges { .. } => {
                    return Err(SemanticsError::Construction(format!(
                        "no normal form for `{atom}` within fuel, or none at all"
                    )))
                }
            };
            st.preds[i][e] = atoms_true(algebra, &nf)?;
        }
    }
    let report = check_model(theory, &st)?;
    Ok(QuantifierFreeModel {
        structure: st,
        universe: universe
            .into_iter()
            .map(|(s, set)| (s, set.into_iter().collect()))
            .collect(),
        report,
    })
}

fn product(pools: &[Vec<Term>]) -> Vec<Vec<Term>> {
    pools.iter().fold(vec![Vec::new()], |acc, pool| {
        acc.iter()
            .flat_map(|prefix| {
                pool.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect()
    })
}
