//! Bidirectional proof checking modulo a theory.

use super::{Proof, ProofError};
use crate::logic::{congruent, whnf, Formula, Term, Theory, Var};
use crate::TriState;
use indexmap::IndexMap;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Named hypotheses and a conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub hyps: IndexMap<String, Formula>,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(goal: Formula) -> Self {
        Sequent {
            hyps: IndexMap::new(),
            goal,
        }
    }

    pub fn with_hyp(mut self, name: impl Into<String>, f: Formula) -> Self {
        self.hyps.insert(name.into(), f);
        self
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hyps: Vec<String> = self.hyps.iter().map(|(a, h)| format!("{a}: {h}")).collect();
        if hyps.is_empty() {
            write!(f, "|- {}", self.goal)
        } else {
            write!(f, "{} |- {}", hyps.join(", "), self.goal)
        }
    }
}

/// Position of a subproof: child indices from the root.
pub type ProofPath = Vec<usize>;

pub fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ProofVerdict {
    Valid,
    Invalid { path: ProofPath, message: String },
    /// Some congruence needed for the derivation could not be decided.
    Unknown { path: ProofPath, message: String },
}

impl ProofVerdict {
    pub fn is_valid(&self) -> bool {
        *self == ProofVerdict::Valid
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProofVerdict::Valid => "valid",
            ProofVerdict::Invalid { .. } => "invalid",
            ProofVerdict::Unknown { .. } => "unknown",
        }
    }
}

impl fmt::Display for ProofVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofVerdict::Valid => write!(f, "Valid"),
            ProofVerdict::Invalid { path, message } => {
                write!(f, "Invalid at {}: {message}", format_path(path))
            }
            ProofVerdict::Unknown { path, message } => {
                write!(f, "Unknown at {}: {message}", format_path(path))
            }
        }
    }
}

/// Checks that every variable of `proof` is bound or declared and that
/// annotations and terms are well-sorted.
pub fn scope_check(theory: &Theory, sequent: &Sequent, proof: &Proof) -> Result<(), ProofError> {
    let sig = &theory.signature;
    let wf = |f: &Formula| sig.check_formula(f).map_err(ProofError::IllSorted);
    for h in sequent.hyps.values() {
        wf(h)?;
    }
    wf(&sequent.goal)?;
    let mut term_scope: BTreeSet<String> = sequent.goal.free_var_names();
    for h in sequent.hyps.values() {
        term_scope.extend(h.free_var_names());
    }
    let mut proof_scope: Vec<String> = sequent.hyps.keys().cloned().collect();
    scope_rec(theory, proof, &mut proof_scope, &mut term_scope.into_iter().collect())
}

fn scope_rec(
    theory: &Theory,
    p: &Proof,
    proofs: &mut Vec<String>,
    terms: &mut Vec<String>,
) -> Result<(), ProofError> {
    let sig = &theory.signature;
    let term_ok = |t: &Term, terms: &Vec<String>| -> Result<(), ProofError> {
        for v in t.free_vars() {
            if !terms.contains(&v.name) {
                return Err(ProofError::UnboundTermVar(v.name));
            }
        }
        let sort = sig
            .sort_of(t)
            .ok_or_else(|| ProofError::IllSorted(format!("cannot type the term `{t}`")))?;
        sig.check_term(t, &sort).map_err(ProofError::IllSorted)
    };
    let formula_ok = |f: &Formula, terms: &Vec<String>| -> Result<(), ProofError> {
        sig.check_formula(f).map_err(ProofError::IllSorted)?;
        match f.free_var_names().into_iter().find(|x| !terms.contains(x)) {
            Some(x) => Err(ProofError::UnboundTermVar(x)),
            None => Ok(()),
        }
    };
    let sort_ok = |x: &Var| {
        if sig.has_sort(&x.sort) {
            Ok(())
        } else {
            Err(ProofError::IllSorted(format!("unknown sort `{}`", x.sort)))
        }
    };
    match p {
        Proof::Var(a) => {
            if proofs.contains(a) {
                Ok(())
            } else {
                Err(ProofError::UnboundProofVar(a.clone()))
            }
        }
        Proof::Unit => Ok(()),
        Proof::Lam(a, ty, body) => {
            formula_ok(ty, terms)?;
            proofs.push(a.clone());
            let r = scope_rec(theory, body, proofs, terms);
            proofs.pop();
            r
        }
        Proof::Exfalso(q, ty) => {
            formula_ok(ty, terms)?;
            scope_rec(theory, q, proofs, terms)
        }
        Proof::TApp(q, t) | Proof::Wit(t, q) => {
            term_ok(t, terms)?;
            scope_rec(theory, q, proofs, terms)
        }
        Proof::TLam(x, body) => {
            sort_ok(x)?;
            terms.push(x.name.clone());
            let r = scope_rec(theory, body, proofs, terms);
            terms.pop();
            r
        }
        Proof::Case(q, a, l, b, r) => {
            scope_rec(theory, q, proofs, terms)?;
            for (name, branch) in [(a, l), (b, r)] {
                proofs.push(name.clone());
                let res = scope_rec(theory, branch, proofs, terms);
                proofs.pop();
                res?;
            }
            Ok(())
        }
        Proof::Dest(q, x, a, body) => {
            sort_ok(x)?;
            scope_rec(theory, q, proofs, terms)?;
            terms.push(x.name.clone());
            proofs.push(a.clone());
            let r = scope_rec(theory, body, proofs, terms);
            proofs.pop();
            terms.pop();
            r
        }
        _ => p
            .children()
            .into_iter()
            .try_for_each(|c| scope_rec(theory, c, proofs, terms)),
    }
}

/// Checks `proof` against `sequent`, deciding every conversion with
/// `congruent` within `fuel` rewrite steps.
///
/// Errors only for ill-scoped or ill-sorted input; typing failures are
/// reported in the verdict with the position of the offending subproof.
pub fn check_proof(
    theory: &Theory,
    sequent: &Sequent,
    proof: &Proof,
    fuel: usize,
) -> Result<ProofVerdict, ProofError> {
    scope_check(theory, sequent, proof)?;
    let mut ck = Checker {
        theory,
        fuel,
        ctx: sequent
            .hyps
            .iter()
            .map(|(a, f)| (a.clone(), f.clone()))
            .collect(),
        path: Vec::new(),
    };
    Ok(match ck.check(proof, &sequent.goal) {
        Ok(()) => ProofVerdict::Valid,
        Err(v) => v,
    })
}

/// The formula proved by `proof` under `hyps`, when it can be inferred.
pub fn infer_proof(
    theory: &Theory,
    hyps: &IndexMap<String, Formula>,
    proof: &Proof,
    fuel: usize,
) -> Result<Result<Formula, ProofVerdict>, ProofError> {
    let sequent = Sequent {
        hyps: hyps.clone(),
        goal: Formula::Top,
    };
    scope_check(theory, &sequent, proof)?;
    let mut ck = Checker {
        theory,
        fuel,
        ctx: hyps.iter().map(|(a, f)| (a.clone(), f.clone())).collect(),
        path: Vec::new(),
    };
    Ok(ck.infer(proof))
}

struct Checker<'a> {
    theory: &'a Theory,
    fuel: usize,
    /// Hypotheses, innermost last.
    ctx: Vec<(String, Formula)>,
    path: ProofPath,
}

type Step<T> = Result<T, ProofVerdict>;

impl Checker<'_> {
    fn invalid(&self, message: impl Into<String>) -> ProofVerdict {
        ProofVerdict::Invalid {
            path: self.path.clone(),
            message: message.into(),
        }
    }

    fn unknown(&self, message: impl Into<String>) -> ProofVerdict {
        ProofVerdict::Unknown {
            path: self.path.clone(),
            message: message.into(),
        }
    }

    fn whnf(&self, f: &Formula) -> Step<Formula> {
        let mut budget = self.fuel;
        whnf(self.theory, f, &mut budget)
            .ok_or_else(|| self.unknown(format!("fuel exhausted while rewriting {f}")))
    }

    fn convertible(&self, a: &Formula, b: &Formula) -> Step<()> {
        match congruent(self.theory, a, b, self.fuel) {
            TriState::Yes => Ok(()),
            TriState::No => Err(self.invalid(format!("{a} is not congruent to {b}"))),
            TriState::Unknown => Err(self.unknown(format!(
                "could not decide whether {a} is congruent to {b}"
            ))),
        }
    }

    fn sort_matches(&self, t: &Term, x: &Var) -> Step<()> {
        match self.theory.signature.sort_of(t) {
            Some(s) if s == x.sort => Ok(()),
            other => Err(self.invalid(format!(
                "the term {t} has sort {} but {} is expected",
                other.unwrap_or_else(|| "?".into()),
                x.sort
            ))),
        }
    }

    fn ctx_mentions(&self, x: &str) -> bool {
        self.ctx.iter().any(|(_, f)| f.free_var_names().contains(x))
    }

    fn child<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Step<T>) -> Step<T> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn with_hyp<T>(&mut self, a: &str, h: Formula, f: impl FnOnce(&mut Self) -> Step<T>) -> Step<T> {
        self.ctx.push((a.to_string(), h));
        let r = f(self);
        self.ctx.pop();
        r
    }

    fn check(&mut self, p: &Proof, target: &Formula) -> Step<()> {
        match p {
            Proof::Lam(a, ty, body) => {
                let Formula::Imp(ante, cons) = self.whnf(target)? else {
                    return Err(self.invalid(format!("an abstraction cannot prove {target}")));
                };
                self.convertible(ty, &ante)?;
                self.with_hyp(a, ty.clone(), |c| c.child(0, |c| c.check(body, &cons)))
            }
            Proof::Pair(l, r) => {
                let Formula::And(a, b) = self.whnf(target)? else {
                    return Err(self.invalid(format!("a pair cannot prove {target}")));
                };
                self.child(0, |c| c.check(l, &a))?;
                self.child(1, |c| c.check(r, &b))
            }
            Proof::Inl(q) | Proof::Inr(q) => {
                let Formula::Or(a, b) = self.whnf(target)? else {
                    return Err(self.invalid(format!("an injection cannot prove {target}")));
                };
                let side = if matches!(p, Proof::Inl(_)) { a } else { b };
                self.child(0, |c| c.check(q, &side))
            }
            Proof::Unit => match self.whnf(target)? {
                Formula::Top => Ok(()),
                _ => Err(self.invalid(format!("unit cannot prove {target}"))),
            },
            Proof::TLam(x, body) => {
                let Formula::Forall(y, b) = self.whnf(target)? else {
                    return Err(self.invalid(format!("a term abstraction cannot prove {target}")));
                };
                if x.sort != y.sort {
                    return Err(self.invalid(format!(
                        "the variable {} has sort {} but {} is expected",
                        x.name, x.sort, y.sort
                    )));
                }
                self.eigenvariable(x, target)?;
                let b = b.instantiate(&y, &Term::Var(x.clone()));
                self.child(0, |c| c.check(body, &b))
            }
            Proof::Wit(t, q) => {
                let Formula::Exists(y, b) = self.whnf(target)? else {
                    return Err(self.invalid(format!("a witness pair cannot prove {target}")));
                };
                self.sort_matches(t, &y)?;
                let b = b.instantiate(&y, t);
                self.child(0, |c| c.check(q, &b))
            }
            Proof::Case(q, a, l, b, r) => {
                let Formula::Or(fa, fb) = self.child(0, |c| c.infer_whnf(q))? else {
                    return Err(self.invalid("the scrutinee does not prove a disjunction"));
                };
                self.with_hyp(a, *fa, |c| c.child(1, |c| c.check(l, target)))?;
                self.with_hyp(b, *fb, |c| c.child(2, |c| c.check(r, target)))
            }
            Proof::Dest(q, x, a, body) => {
                let (y, b) = self.destruct(q, x)?;
                self.eigenvariable(x, target)?;
                let hyp = b.instantiate(&y, &Term::Var(x.clone()));
                self.with_hyp(a, hyp, |c| c.child(1, |c| c.check(body, target)))
            }
            Proof::Exfalso(q, ty) => {
                self.child(0, |c| c.check(q, &Formula::Bot))?;
                self.convertible(ty, target)
            }
            _ => {
                let got = self.infer(p)?;
                self.convertible(&got, target)
            }
        }
    }

    /// The eigenvariable condition for `x` under the current hypotheses and
    /// `target`.
    fn eigenvariable(&self, x: &Var, target: &Formula) -> Step<()> {
        if self.ctx_mentions(&x.name) || target.free_var_names().contains(&x.name) {
            Err(self.invalid(format!(
                "the variable {} occurs free in the hypotheses or the conclusion",
                x.name
            )))
        } else {
            Ok(())
        }
    }

    fn infer_whnf(&mut self, p: &Proof) -> Step<Formula> {
        let f = self.infer(p)?;
        self.whnf(&f)
    }

    /// Infers the scrutinee of a `dest` and checks the binder's sort.
    fn destruct(&mut self, q: &Proof, x: &Var) -> Step<(Var, Formula)> {
        let Formula::Exists(y, b) = self.child(0, |c| c.infer_whnf(q))? else {
            return Err(self.invalid("the destructed proof does not prove an existential"));
        };
        if x.sort != y.sort {
            return Err(self.invalid(format!(
                "the variable {} has sort {} but {} is expected",
                x.name, x.sort, y.sort
            )));
        }
        Ok((y, *b))
    }

    fn infer(&mut self, p: &Proof) -> Step<Formula> {
        match p {
            Proof::Var(a) => Ok(self
                .ctx
                .iter()
                .rev()
                .find(|(b, _)| b == a)
                .map(|(_, f)| f.clone())
                .expect("scope checked")),
            Proof::Lam(a, ty, body) => {
                let b = self.with_hyp(a, ty.clone(), |c| c.child(0, |c| c.infer(body)))?;
                Ok(Formula::imp(ty.clone(), b))
            }
            Proof::App(f, q) => {
                let head = self.child(0, |c| c.infer_whnf(f))?;
                let Formula::Imp(a, b) = head else {
                    return Err(self.invalid(format!("the function proves {head}, not an implication")));
                };
                self.child(1, |c| c.check(q, &a))?;
                Ok(*b)
            }
            Proof::Pair(l, r) => {
                let a = self.child(0, |c| c.infer(l))?;
                let b = self.child(1, |c| c.infer(r))?;
                Ok(Formula::and(a, b))
            }
            Proof::Fst(q) | Proof::Snd(q) => {
                let f = self.child(0, |c| c.infer_whnf(q))?;
                let Formula::And(a, b) = f else {
                    return Err(self.invalid(format!("a projection of a proof of {f}")));
                };
                Ok(if matches!(p, Proof::Fst(_)) { *a } else { *b })
            }
            Proof::TApp(q, t) => {
                let f = self.child(0, |c| c.infer_whnf(q))?;
                let Formula::Forall(y, b) = f else {
                    return Err(self.invalid(format!("instantiating a proof of {f}")));
                };
                self.sort_matches(t, &y)?;
                Ok(b.instantiate(&y, t))
            }
            Proof::Exfalso(q, ty) => {
                self.child(0, |c| c.check(q, &Formula::Bot))?;
                Ok(ty.clone())
            }
            Proof::Unit => Ok(Formula::Top),
            Proof::TLam(x, body) => {
                if self.ctx_mentions(&x.name) {
                    return Err(self.invalid(format!(
                        "the variable {} occurs free in the hypotheses",
                        x.name
                    )));
                }
                let b = self.child(0, |c| c.infer(body))?;
                Ok(Formula::forall(x.clone(), b))
            }
            Proof::Case(q, a, l, b, r) => {
                let Formula::Or(fa, fb) = self.child(0, |c| c.infer_whnf(q))? else {
                    return Err(self.invalid("the scrutinee does not prove a disjunction"));
                };
                let out = self.with_hyp(a, *fa, |c| c.child(1, |c| c.infer(l)))?;
                self.with_hyp(b, *fb, |c| c.child(2, |c| c.check(r, &out)))?;
                Ok(out)
            }
            Proof::Dest(q, x, a, body) => {
                let (y, b) = self.destruct(q, x)?;
                if self.ctx_mentions(&x.name) {
                    return Err(self.invalid(format!(
                        "the variable {} occurs free in the hypotheses",
                        x.name
                    )));
                }
                let hyp = b.instantiate(&y, &Term::Var(x.clone()));
                let out = self.with_hyp(a, hyp, |c| c.child(1, |c| c.infer(body)))?;
                if out.free_var_names().contains(&x.name) {
                    return Err(self.invalid(format!(
                        "the variable {} escapes its scope in {out}",
                        x.name
                    )));
                }
                Ok(out)
            }
            Proof::Inl(_) | Proof::Inr(_) | Proof::Wit(..) => Err(self.invalid(
                "cannot infer the formula proved by an injection or witness pair; \
                 use it where the expected formula is known",
            )),
        }
    }
}
