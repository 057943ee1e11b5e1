//! Least fixed point models of positive theories over ordered complete
//! algebras.

use super::eval::{compile_formula, compile_term, eval_formula, eval_term, CForm, CTerm, EvalError};
use super::model::{check_model, for_each_instance, ModelReport};
use super::{domain_sizes, BStructure, Interpretation, SemanticsError};
use crate::algebra::{check_complete, check_ordered, OrderSpec, TruthValueAlgebra};
use crate::logic::{
    check_deterministic, check_positive, normalize_formula, NormalizationOutcome, RewriteRule,
    Strategy, Theory,
};
use crate::Subset;
use indexmap::IndexMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointOutcome {
    pub structure: BStructure,
    /// Rounds until the tables stopped changing.
    pub iterations: usize,
    /// Predicate tables after every round, starting with the bottom
    /// interpretation and ending with the fixed point (listed twice).
    pub trace: Vec<Vec<Vec<usize>>>,
    /// Rules whose right-hand side has no normal form, or none within the
    /// fuel, and was used as is.
    pub unnormalized_rules: Vec<usize>,
    pub report: ModelReport,
}

/// For one predicate entry: the rhs to evaluate and the instance under
/// which the rule's left-hand side denotes that entry.
struct Source {
    rule: usize,
    env: Vec<usize>,
}

fn preconditions(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    order: &OrderSpec,
) -> Result<usize, SemanticsError> {
    let positive = check_positive(theory);
    if let Some(v) = positive.violations().first() {
        return Err(SemanticsError::Precondition(format!(
            "theory is not positive ({}: {})",
            v.condition,
            v.witness.join(", ")
        )));
    }
    if !check_ordered(algebra, order).passed() {
        return Err(SemanticsError::Precondition(
            "the algebra is not ordered by the given relation".into(),
        ));
    }
    let (complete, bounds) = check_complete(algebra, order);
    if !complete.passed() {
        return Err(SemanticsError::Precondition(
            "the given order is not complete".into(),
        ));
    }
    if theory.term_rules().next().is_some() && !theory.claimed_terminating {
        return Err(SemanticsError::Precondition(
            "term rules are only allowed in theories declared terminating".into(),
        ));
    }
    Ok(bounds.glb[&Subset::full(algebra.size())])
}

/// Iterates `P̂(e..) := ⟦P(e..)↓⟧` from the bottom interpretation.
///
/// An entry `P(e..)` is rewritten by the first rule, and the first
/// instance of its variables, whose left-hand side denotes it; entries no
/// rule reaches keep their value. The right-hand side is normalized within
/// `fuel` steps, and used as is when it has no normal form in reach or
/// provably none.
/// Function symbols are interpreted by constant tables.
pub fn fixpoint_model(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    order: &OrderSpec,
    domains: &IndexMap<String, usize>,
    fuel: usize,
) -> Result<FixpointOutcome, SemanticsError> {
    let bottom = preconditions(theory, algebra, order)?;
    run(theory, algebra, order, domains, bottom, Some(fuel))
}

/// Iterates `P̂(e..) := ⟦P(e..)+⟧` where `A+` is the unique one-step
/// reduct of `A`, or `A` itself.
pub fn fixpoint_model_deterministic(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    order: &OrderSpec,
    domains: &IndexMap<String, usize>,
) -> Result<FixpointOutcome, SemanticsError> {
    let bottom = preconditions(theory, algebra, order)?;
    if !check_deterministic(theory) {
        return Err(SemanticsError::Precondition(
            "theory is not deterministic".into(),
        ));
    }
    run(theory, algebra, order, domains, bottom, None)
}

fn run(
    theory: &Theory,
    algebra: &TruthValueAlgebra,
    order: &OrderSpec,
    domains: &IndexMap<String, usize>,
    bottom: usize,
    fuel: Option<usize>,
) -> Result<FixpointOutcome, SemanticsError> {
    let domains = domain_sizes(&theory.signature, domains, 1);
    let mut st = BStructure::constant(&theory.signature, algebra, &domains, bottom)?;

    let mut rhs: Vec<Option<CForm<usize>>> = Vec::new();
    let mut lhs_args: Vec<Vec<CTerm>> = Vec::new();
    let mut rule_domains = Vec::new();
    let mut unnormalized_rules = Vec::new();
    for (i, rule) in theory.rules.iter().enumerate() {
        let RewriteRule::Prop { args, rhs: body, .. } = rule else {
            rhs.push(None);
            lhs_args.push(Vec::new());
            rule_domains.push(Vec::new());
            continue;
        };
        let vars = rule.vars();
        let mut names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
        let body = match fuel {
            Some(fuel) => match normalize_formula(theory, body, fuel, Strategy::Innermost) {
                NormalizationOutcome::Normal { value, .. } => value,
                NormalizationOutcome::FuelExhausted { .. }
                | NormalizationOutcome::Diverges { .. } => {
                    unnormalized_rules.push(i);
                    body.clone()
                }
            },
            None => body.clone(),
        };
        lhs_args.push(
            args.iter()
                .map(|a| compile_term(&st, a, &names))
                .collect::<Result<_, _>>()?,
        );
        rhs.push(Some(compile_formula(&st, &body, &mut names)?));
        rule_domains.push(
            vars.iter()
                .map(|v| st.domain(&v.sort))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }

    // Semantic matching is fixed once the function tables are.
    let mut sources: Vec<Vec<Option<Source>>> = st
        .preds
        .iter()
        .map(|t| t.iter().map(|_| None).collect())
        .collect();
    for (i, rule) in theory.rules.iter().enumerate() {
        let RewriteRule::Prop { pred, .. } = rule else {
            continue;
        };
        let p = st.pred_handle(pred)?;
        let sorts = theory.signature.preds[p].clone();
        for_each_instance(&rule_domains[i], |env| {
            let args = lhs_args[i]
                .iter()
                .map(|a| eval_term(&st, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            let slot = &mut sources[p][st.tuple_index(&sorts, &args)];
            if slot.is_none() {
                *slot = Some(Source {
                    rule: i,
                    env: env.clone(),
                });
            }
            Ok(true)
        })?;
    }

    let entries: usize = st.preds.iter().map(Vec::len).sum();
    let guard = entries * algebra.size() + 2;
    let mut trace = vec![st.preds.clone()];
    for round in 1..=guard {
        let mut next = st.preds.clone();
        for (p, row) in sources.iter().enumerate() {
            for (e, src) in row.iter().enumerate() {
                let Some(src) = src else { continue };
                let body = rhs[src.rule].as_ref().expect("proposition rule");
                let v = match eval_formula(&st, body, &mut src.env.clone()) {
                    Ok(v) => v,
                    Err(EvalError::Undefined(f)) => {
                        return Err(SemanticsError::Construction(format!(
                            "denotation undefined at `{f}`"
                        )))
                    }
                    Err(EvalError::Fail(e)) => return Err(e),
                };
                if !order.leq(st.preds[p][e], v) {
                    let name = theory.signature.preds.get_index(p).unwrap().0;
                    return Err(SemanticsError::Construction(format!(
                        "iteration decreased the value of {name} at entry {e}"
                    )));
                }
                next[p][e] = v;
            }
        }
        let done = next == st.preds;
        st.preds = next;
        trace.push(st.preds.clone());
        if done {
            let report = check_model(theory, &st)?;
            return Ok(FixpointOutcome {
                structure: st,
                iterations: round,
                trace,
                unnormalized_rules,
                report,
            });
        }
    }
    Err(SemanticsError::Construction(format!(
        "no fixed point after {guard} rounds"
    )))
}
