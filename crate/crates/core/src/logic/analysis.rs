//! Syntactic conditions on rewrite systems.

use super::syntax::{Formula, RewriteRule, Subst, Term, Theory, Var};
use crate::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// Every atomic subformula of `f` with its polarity, left to right.
/// Polarity flips on the left of `=>` and is kept by the other connectives
/// and by quantifiers.
pub fn atom_polarities(f: &Formula) -> Vec<(Formula, Polarity)> {
    let mut out = Vec::new();
    collect_polarities(f, Polarity::Positive, &mut out);
    out
}

fn collect_polarities(f: &Formula, pol: Polarity, out: &mut Vec<(Formula, Polarity)>) {
    match f {
        Formula::Atom(..) => out.push((f.clone(), pol)),
        Formula::Top | Formula::Bot => {}
        Formula::Imp(a, b) => {
            collect_polarities(a, pol.flip(), out);
            collect_polarities(b, pol, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_polarities(a, pol, out);
            collect_polarities(b, pol, out);
        }
        Formula::Forall(_, body) | Formula::Exists(_, body) => collect_polarities(body, pol, out),
    }
}

/// Checks that every atom in the right-hand side of every proposition rule
/// occurs positively. Each offending rule is reported as `rule <n>` with the
/// first negative atom.
pub fn check_positive(theory: &Theory) -> CheckReport {
    let mut r = CheckReport::new();
    for (i, rule) in theory.rules.iter().enumerate() {
        if let RewriteRule::Prop { rhs, .. } = rule {
            if let Some((atom, _)) = atom_polarities(rhs)
                .into_iter()
                .find(|(_, p)| *p == Polarity::Negative)
            {
                r.fail_with(
                    format!("rule {}", i + 1),
                    vec![atom.to_string()],
                    Some(format!("negative occurrence in `{rule}`")),
                );
            }
        }
    }
    r
}

/// Whether no rule's right-hand side contains a quantifier.
pub fn check_quantifier_free(theory: &Theory) -> bool {
    theory.rules.iter().all(|r| match r {
        RewriteRule::Prop { rhs, .. } => !rhs.has_quantifier(),
        RewriteRule::Term { .. } => true,
    })
}

/// Whether every atom has at most one one-step reduct.
///
/// Requires that no two proposition rules have unifiable left-hand sides
/// and that there are no term rules, since a term rule could rewrite inside
/// an atom's arguments and give it a second reduct.
pub fn check_deterministic(theory: &Theory) -> bool {
    if theory.term_rules().next().is_some() {
        return false;
    }
    let lhss: Vec<(&str, &[Term])> = theory
        .rules
        .iter()
        .filter_map(|r| match r {
            RewriteRule::Prop { pred, args, .. } => Some((pred.as_str(), args.as_slice())),
            RewriteRule::Term { .. } => None,
        })
        .collect();
    for i in 0..lhss.len() {
        for j in i + 1..lhss.len() {
            let (p, xs) = lhss[i];
            let (q, ys) = lhss[j];
            if p != q {
                continue;
            }
            let xs: Vec<Term> = xs.iter().map(|t| rename(t, "#l")).collect();
            let ys: Vec<Term> = ys.iter().map(|t| rename(t, "#r")).collect();
            if unify_all(&xs, &ys).is_some() {
                return false;
            }
        }
    }
    true
}

fn rename(t: &Term, suffix: &str) -> Term {
    match t {
        Term::Var(v) => Term::Var(Var::new(format!("{}{suffix}", v.name), v.sort.clone())),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename(a, suffix)).collect()),
    }
}

/// Most general unifier of two term lists, if any.
pub fn unify_all(xs: &[Term], ys: &[Term]) -> Option<Subst> {
    if xs.len() != ys.len() {
        return None;
    }
    let mut s = Subst::new();
    let mut work: Vec<(Term, Term)> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
    while let Some((a, b)) = work.pop() {
        let a = resolve(&a, &s);
        let b = resolve(&b, &s);
        match (a, b) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.free_vars().contains(&v) {
                    return None;
                }
                let single = Subst::from([(v.name.clone(), t.clone())]);
                for val in s.values_mut() {
                    *val = val.subst(&single);
                }
                s.insert(v.name, t);
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                work.extend(fa.into_iter().zip(ga));
            }
        }
    }
    Some(s)
}

fn resolve(t: &Term, s: &Subst) -> Term {
    t.subst(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_theory;

    fn th(text: &str) -> Theory {
        parse_theory(text).unwrap()
    }

    #[test]
    fn positivity() {
        assert!(check_positive(&th("pred P\nrule P --> bot => P")).passed());
        let r = check_positive(&th("pred P\npred Q\nrule P --> P => Q"));
        assert_eq!(r.violation("rule 1").unwrap().witness, vec!["P"]);
        let r = check_positive(&th("pred P\npred Q\nrule P --> Q => P"));
        assert_eq!(r.violation("rule 1").unwrap().witness, vec!["Q"]);
        let p0 = "sort nat\nfun 0 : -> nat\npred P : nat\nrule P(0) --> forall x:nat. P(x)";
        assert!(check_positive(&th(p0)).passed());
        assert!(!check_quantifier_free(&th(p0)));
    }

    #[test]
    fn quantifier_freedom() {
        assert!(check_quantifier_free(&th("pred P\npred Q\npred R\nrule P --> Q => R")));
        assert!(check_quantifier_free(&th("pred P")));
    }

    #[test]
    fn determinism() {
        assert!(check_deterministic(&th("pred P\nrule P --> P /\\ P")));
        assert!(!check_deterministic(&th("pred P\npred Q\npred R\nrule P --> Q\nrule P --> R")));
        let t = th("sort s\nfun 0 : -> s\npred P : s\nrule P(x) --> top\nrule P(0) --> bot");
        assert!(!check_deterministic(&t));
        let t = th("sort s\nfun 0 : -> s\nfun 1 : -> s\npred P : s\nrule P(1) --> top\nrule P(0) --> bot");
        assert!(check_deterministic(&t));
    }

    #[test]
    fn unification_occurs_check() {
        let x = Term::var("x", "s");
        let fx = Term::app("f", vec![x.clone()]);
        assert!(unify_all(&[x.clone()], &[fx]).is_none());
        let y = Term::var("y", "s");
        let s = unify_all(&[x.clone(), y.clone()], &[y.clone(), Term::constant("c")]).unwrap();
        assert_eq!(x.subst(&s), Term::constant("c"));
        assert_eq!(y.subst(&s), Term::constant("c"));
    }
}
