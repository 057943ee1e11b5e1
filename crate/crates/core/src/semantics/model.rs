//! Model checking of theories modulo against an interpretation.

use super::eval::{compile_formula, compile_term, eval_formula, eval_term, CForm, CTerm, EvalError};
use super::{Interpretation, SemanticsError};
use crate::logic::{RewriteRule, Theory};
use serde::Serialize;
use std::collections::BTreeMap;

pub(crate) const REDUCTION_NOTE: &str = "rewrite rules are checked on every instance of their \
variables over the finite domains; denotation is compositional and commutes with substitution, \
so equal values on all rule instances give equal values on all congruent terms and formulas";

/// One failing axiom or rule instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelWitness {
    /// `axiom <n>` or `rule <n>`, counted from 1.
    pub item: String,
    pub assignment: BTreeMap<String, String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    /// Name of the value, absent when the denotation is undefined.
    pub value: Option<String>,
    pub positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undefined_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCheck {
    pub rule: String,
    pub instances: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ModelWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub verdict: &'static str,
    #[serde(rename = "perAxiom")]
    pub axioms: Vec<AxiomCheck>,
    #[serde(rename = "perRuleInstance")]
    pub rules: Vec<RuleCheck>,
    /// The first failure, axioms before rules.
    pub witness: Option<ModelWitness>,
    pub note: &'static str,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

enum Body<E> {
    Term(CTerm, CTerm),
    Prop(CForm<E>, CForm<E>),
}

pub(crate) struct CompiledRule<E> {
    names: Vec<String>,
    domains: Vec<Vec<E>>,
    body: Body<E>,
}

/// A theory compiled against an interpretation's handles and domains. It
/// stays valid while the interpretation's tables change.
pub(crate) struct CompiledTheory<E> {
    axioms: Vec<CForm<E>>,
    rules: Vec<CompiledRule<E>>,
}

/// Outcome of one instance: `None` when both sides agree.
type Mismatch = Option<String>;

impl<E: Clone + PartialEq> CompiledTheory<E> {
    pub(crate) fn new<I>(theory: &Theory, interp: &I) -> Result<Self, SemanticsError>
    where
        I: Interpretation<Elem = E>,
    {
        let axioms = theory
            .axioms
            .iter()
            .map(|a| compile_formula(interp, a, &mut Vec::new()))
            .collect::<Result<_, _>>()?;
        let mut rules = Vec::new();
        for rule in &theory.rules {
            let vars = rule.vars();
            let mut names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
            let domains = vars
                .iter()
                .map(|v| interp.domain(&v.sort))
                .collect::<Result<_, _>>()?;
            let body = match rule {
                RewriteRule::Term { lhs, rhs } => Body::Term(
                    compile_term(interp, lhs, &names)?,
                    compile_term(interp, rhs, &names)?,
                ),
                RewriteRule::Prop { rhs, .. } => {
                    let lhs = rule.lhs_formula().expect("proposition rule");
                    Body::Prop(
                        compile_formula(interp, &lhs, &mut names)?,
                        compile_formula(interp, rhs, &mut names)?,
                    )
                }
            };
            rules.push(CompiledRule {
                names,
                domains,
                body,
            });
        }
        Ok(CompiledTheory { axioms, rules })
    }

    /// Whether every axiom is positive and every rule instance holds,
    /// stopping at the first failure.
    pub(crate) fn holds<I>(&self, interp: &I) -> Result<bool, SemanticsError>
    where
        I: Interpretation<Elem = E>,
    {
        for ax in &self.axioms {
            match eval_formula(interp, ax, &mut Vec::new()) {
                Ok(v) if interp.algebra().is_positive(v) => {}
                Ok(_) | Err(EvalError::Undefined(_)) => return Ok(false),
                Err(EvalError::Fail(e)) => return Err(e),
            }
        }
        for rule in &self.rules {
            let mut ok = true;
            for_each_instance(&rule.domains, |env| {
                if instance_mismatch(interp, &rule.body, env)?.is_some() {
                    ok = false;
                }
                Ok(ok)
            })?;
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn instance_mismatch<I: Interpretation>(
    interp: &I,
    body: &Body<I::Elem>,
    env: &mut Vec<I::Elem>,
) -> Result<Mismatch, SemanticsError> {
    match body {
        Body::Term(l, r) => {
            let a = eval_term(interp, l, env)?;
            let b = eval_term(interp, r, env)?;
            Ok((a != b).then(|| {
                format!("lhs = {}, rhs = {}", interp.describe(&a), interp.describe(&b))
            }))
        }
        Body::Prop(l, r) => {
            let alg = interp.algebra();
            let show = |v: Result<usize, EvalError>| match v {
                Ok(v) => Ok((Some(v), alg.name(v).to_string())),
                Err(EvalError::Undefined(f)) => Ok((None, format!("undefined at `{f}`"))),
                Err(EvalError::Fail(e)) => Err(e),
            };
            let (a, sa) = show(eval_formula(interp, l, env))?;
            let (b, sb) = show(eval_formula(interp, r, env))?;
            Ok((a.is_none() || a != b).then(|| format!("lhs = {sa}, rhs = {sb}")))
        }
    }
}

/// Runs `f` on every tuple of the product of `domains`, last position
/// fastest, until it returns `false`.
pub(crate) fn for_each_instance<E: Clone>(
    domains: &[Vec<E>],
    mut f: impl FnMut(&mut Vec<E>) -> Result<bool, SemanticsError>,
) -> Result<(), SemanticsError> {
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(());
    }
    let mut idx = vec![0usize; domains.len()];
    let mut env: Vec<E> = domains.iter().map(|d| d[0].clone()).collect();
    loop {
        if !f(&mut env)? {
            return Ok(());
        }
        let mut k = domains.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                env[k] = domains[k][idx[k]].clone();
                break;
            }
            idx[k] = 0;
            env[k] = domains[k][0].clone();
        }
    }
}

/// Checks that every axiom denotes a positive value and that both sides
/// of every rule instance denote the same value.
pub fn check_model<I: Interpretation>(
    theory: &Theory,
    interp: &I,
) -> Result<ModelReport, SemanticsError> {
    let compiled = CompiledTheory::new(theory, interp)?;
    let alg = interp.algebra();
    let mut first: Option<ModelWitness> = None;
    let mut axioms = Vec::new();
    for (i, (src, ax)) in theory.axioms.iter().zip(&compiled.axioms).enumerate() {
        let (value, undefined_at) = match eval_formula(interp, ax, &mut Vec::new()) {
            Ok(v) => (Some(v), None),
            Err(EvalError::Undefined(f)) => (None, Some(f.to_string())),
            Err(EvalError::Fail(e)) => return Err(e),
        };
        let positive = value.is_some_and(|v| alg.is_positive(v));
        if !positive && first.is_none() {
            let detail = match (&value, &undefined_at) {
                (Some(v), _) => format!("value {} is not positive", alg.name(*v)),
                (None, Some(f)) => format!("undefined at `{f}`"),
                (None, None) => unreachable!(),
            };
            first = Some(ModelWitness {
                item: format!("axiom {}", i + 1),
                assignment: BTreeMap::new(),
                detail,
            });
        }
        axioms.push(AxiomCheck {
            axiom: src.to_string(),
            value: value.map(|v| alg.name(v).to_string()),
            positive,
            undefined_at,
        });
    }
    let mut rules = Vec::new();
    for (i, (src, rule)) in theory.rules.iter().zip(&compiled.rules).enumerate() {
        let mut check = RuleCheck {
            rule: src.to_string(),
            instances: 0,
            failures: 0,
            witness: None,
        };
        for_each_instance(&rule.domains, |env| {
            check.instances += 1;
            if let Some(detail) = instance_mismatch(interp, &rule.body, env)? {
                check.failures += 1;
                if check.witness.is_none() {
                    check.witness = Some(ModelWitness {
                        item: format!("rule {}", i + 1),
                        assignment: rule
                            .names
                            .iter()
                            .cloned()
                            .zip(env.iter().map(|e| interp.describe(e)))
                            .collect(),
                        detail,
                    });
                }
            }
            Ok(true)
        })?;
        if first.is_none() {
            first = check.witness.clone();
        }
        rules.push(check);
    }
    Ok(ModelReport {
        verdict: if first.is_none() { "pass" } else { "fail" },
        axioms,
        rules,
        witness: first,
        note: REDUCTION_NOTE,
    })
}

/// Whether `f` denotes a defined value under every assignment of its free
/// variables. Used by tests of fullness.
#[cfg(test)]
pub(crate) fn always_defined<I: Interpretation>(interp: &I, f: &crate::logic::Formula) -> bool {
    let vars: Vec<_> = f.free_vars().into_iter().collect();
    let mut names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let domains: Vec<Vec<I::Elem>> = vars.iter().map(|v| interp.domain(&v.sort).unwrap()).collect();
    let c = compile_formula(interp, f, &mut names).unwrap();
    let mut ok = true;
    for_each_instance(&domains, |env| {
        ok = eval_formula(interp, &c, env).is_ok();
        Ok(ok)
    })
    .unwrap();
    ok
}
