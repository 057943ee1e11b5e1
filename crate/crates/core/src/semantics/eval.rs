//! Denotations, evaluated through formulas compiled against an
//! interpretation so that repeated evaluation avoids name lookups.

use super::{Interpretation, SemanticsError};
use crate::logic::{Formula, Term};
use crate::Subset;
use std::collections::BTreeMap;

/// A variable assignment, keyed by variable name.
pub type Assignment<E> = BTreeMap<String, E>;

/// The value of a formula, or the quantified subformula whose value set
/// falls outside the quantifier's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Denotation {
    Defined(usize),
    Undefined(Formula),
}

impl Denotation {
    pub fn value(&self) -> Option<usize> {
        match self {
            Denotation::Defined(v) => Some(*v),
            Denotation::Undefined(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Debug, Clone)]
pub(crate) enum CForm<E> {
    Atom(usize, Vec<CTerm>),
    Top,
    Bot,
    Imp(Box<CForm<E>>, Box<CForm<E>>),
    And(Box<CForm<E>>, Box<CForm<E>>),
    Or(Box<CForm<E>>, Box<CForm<E>>),
    Forall(Vec<E>, Box<CForm<E>>, Formula),
    Exists(Vec<E>, Box<CForm<E>>, Formula),
}

pub(crate) enum EvalError {
    Undefined(Formula),
    Fail(SemanticsError),
}

impl From<SemanticsError> for EvalError {
    fn from(e: SemanticsError) -> Self {
        EvalError::Fail(e)
    }
}

/// Compiles a term; `slots` lists the variables in scope, innermost last.
pub(crate) fn compile_term<I: Interpretation>(
    interp: &I,
    t: &Term,
    slots: &[String],
) -> Result<CTerm, SemanticsError> {
    match t {
        Term::Var(v) => slots
            .iter()
            .rposition(|s| *s == v.name)
            .map(CTerm::Var)
            .ok_or_else(|| SemanticsError::UnassignedVariable(v.name.clone())),
        Term::App(f, args) => {
            let h = interp.fun_handle(f)?;
            let args = args
                .iter()
                .map(|a| compile_term(interp, a, slots))
                .collect::<Result<_, _>>()?;
            Ok(CTerm::App(h, args))
        }
    }
}

pub(crate) fn compile_formula<I: Interpretation>(
    interp: &I,
    f: &Formula,
    slots: &mut Vec<String>,
) -> Result<CForm<I::Elem>, SemanticsError> {
    let bin = |a: &Formula, b: &Formula, slots: &mut Vec<String>| {
        Ok::<_, SemanticsError>((
            Box::new(compile_formula(interp, a, slots)?),
            Box::new(compile_formula(interp, b, slots)?),
        ))
    };
    Ok(match f {
        Formula::Atom(p, args) => {
            let h = interp.pred_handle(p)?;
            let args = args
                .iter()
                .map(|a| compile_term(interp, a, slots))
                .collect::<Result<_, _>>()?;
            CForm::Atom(h, args)
        }
        Formula::Top => CForm::Top,
        Formula::Bot => CForm::Bot,
        Formula::Imp(a, b) => {
            let (a, b) = bin(a, b, slots)?;
            CForm::Imp(a, b)
        }
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, slots)?;
            CForm::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, slots)?;
            CForm::Or(a, b)
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let domain = interp.domain(&x.sort)?;
            slots.push(x.name.clone());
            let body = compile_formula(interp, body, slots);
            slots.pop();
            let body = Box::new(body?);
            if matches!(f, Formula::Forall(..)) {
                CForm::Forall(domain, body, f.clone())
            } else {
                CForm::Exists(domain, body, f.clone())
            }
        }
    })
}

pub(crate) fn eval_term<I: Interpretation>(
    interp: &I,
    t: &CTerm,
    env: &[I::Elem],
) -> Result<I::Elem, SemanticsError> {
    match t {
        CTerm::Var(i) => Ok(env[*i].clone()),
        CTerm::App(h, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(interp, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            interp.apply_fun(*h, &vals)
        }
    }
}

pub(crate) fn eval_formula<I: Interpretation>(
    interp: &I,
    f: &CForm<I::Elem>,
    env: &mut Vec<I::Elem>,
) -> Result<usize, EvalError> {
    let alg = interp.algebra();
    Ok(match f {
        CForm::Atom(h, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(interp, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            interp.apply_pred(*h, &vals)?
        }
        CForm::Top => alg.top(),
        CForm::Bot => alg.bot(),
        CForm::Imp(a, b) => alg.imp(eval_formula(interp, a, env)?, eval_formula(interp, b, env)?),
        CForm::And(a, b) => alg.and(eval_formula(interp, a, env)?, eval_formula(interp, b, env)?),
        CForm::Or(a, b) => alg.or(eval_formula(interp, a, env)?, eval_formula(interp, b, env)?),
        CForm::Forall(domain, body, src) | CForm::Exists(domain, body, src) => {
            let mut values = Subset::EMPTY;
            for e in domain {
                env.push(e.clone());
                let v = eval_formula(interp, body, env);
                env.pop();
                values = values.with(v?);
            }
            let result = if matches!(f, CForm::Forall(..)) {
                alg.forall(values)
            } else {
                alg.exists(values)
            };
            result.ok_or_else(|| EvalError::Undefined(src.clone()))?
        }
    })
}

/// `⟦t⟧_φ`.
pub fn denote_term<I: Interpretation>(
    interp: &I,
    t: &Term,
    phi: &Assignment<I::Elem>,
) -> Result<I::Elem, SemanticsError> {
    let slots: Vec<String> = phi.keys().cloned().collect();
    let env: Vec<I::Elem> = phi.values().cloned().collect();
    let c = compile_term(interp, t, &slots)?;
    eval_term(interp, &c, &env)
}

/// `⟦A⟧_φ`.
pub fn denote<I: Interpretation>(
    interp: &I,
    f: &Formula,
    phi: &Assignment<I::Elem>,
) -> Result<Denotation, SemanticsError> {
    let mut slots: Vec<String> = phi.keys().cloned().collect();
    let mut env: Vec<I::Elem> = phi.values().cloned().collect();
    let c = compile_formula(interp, f, &mut slots)?;
    match eval_formula(interp, &c, &mut env) {
        Ok(v) => Ok(Denotation::Defined(v)),
        Err(EvalError::Undefined(g)) => Ok(Denotation::Undefined(g)),
        Err(EvalError::Fail(e)) => Err(e),
    }
}
