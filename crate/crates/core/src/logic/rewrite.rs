//! Rewriting of terms and formulas, and the congruence it generates.

use super::analysis::check_deterministic;
use super::syntax::{Formula, RewriteRule, Subst, Term, Theory, Var};
use crate::TriState;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

/// Where the next redex is looked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Leftmost-innermost: arguments and subformulas before the enclosing
    /// position.
    #[default]
    Innermost,
    /// Leftmost-outermost.
    Outermost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizationOutcome<T> {
    Normal { value: T, steps: usize },
    /// Fuel ran out; `partial` is the expression reached.
    FuelExhausted { partial: T, steps: usize },
    /// The strategy reached `partial`, which contains an earlier formula
    /// of the sequence as a subformula. Rewriting never happens at
    /// connectives, so that copy replays the whole sequence and the
    /// strategy cannot terminate.
    Diverges { partial: T, steps: usize },
}

impl<T> NormalizationOutcome<T> {
    pub fn normal(self) -> Option<T> {
        match self {
            NormalizationOutcome::Normal { value, .. } => Some(value),
            NormalizationOutcome::FuelExhausted { .. } | NormalizationOutcome::Diverges { .. } => {
                None
            }
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            NormalizationOutcome::Normal { steps, .. }
            | NormalizationOutcome::FuelExhausted { steps, .. }
            | NormalizationOutcome::Diverges { steps, .. } => *steps,
        }
    }
}

/// First-order matching of `pattern` against `t`, extending `s`.
pub fn match_term(pattern: &Term, t: &Term, s: &mut Subst) -> bool {
    match (pattern, t) {
        (Term::Var(v), _) => {
            if let Term::Var(w) = t {
                if w.sort != v.sort {
                    return false;
                }
            }
            match s.get(&v.name) {
                Some(bound) => bound == t,
                None => {
                    s.insert(v.name.clone(), t.clone());
                    true
                }
            }
        }
        (Term::App(f, ps), Term::App(g, ts)) => {
            f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| match_term(p, t, s))
        }
        _ => false,
    }
}

fn match_args(patterns: &[Term], args: &[Term]) -> Option<Subst> {
    let mut s = Subst::new();
    (patterns.len() == args.len()
        && patterns
            .iter()
            .zip(args)
            .all(|(p, t)| match_term(p, t, &mut s)))
    .then_some(s)
}

/// Rewrites `t` at its root with the first matching term rule.
pub fn rewrite_term_root(theory: &Theory, t: &Term) -> Option<Term> {
    theory.rules.iter().find_map(|r| match r {
        RewriteRule::Term { lhs, rhs } => {
            let mut s = Subst::new();
            match_term(lhs, t, &mut s).then(|| rhs.subst(&s))
        }
        RewriteRule::Prop { .. } => None,
    })
}

/// Rewrites the atom `P(args)` with the first matching proposition rule.
pub fn rewrite_atom(theory: &Theory, pred: &str, args: &[Term]) -> Option<Formula> {
    theory.rules.iter().find_map(|r| match r {
        RewriteRule::Prop {
            pred: p,
            args: pats,
            rhs,
        } if p == pred => match_args(pats, args).map(|s| rhs.subst(&s)),
        _ => None,
    })
}

/// All one-step reducts of the atom `P(args)` at its root, one per
/// matching proposition rule.
pub fn atom_reducts(theory: &Theory, pred: &str, args: &[Term]) -> Vec<Formula> {
    theory
        .rules
        .iter()
        .filter_map(|r| match r {
            RewriteRule::Prop {
                pred: p,
                args: pats,
                rhs,
            } if p == pred => match_args(pats, args).map(|s| rhs.subst(&s)),
            _ => None,
        })
        .collect()
}

fn step_terms(theory: &Theory, ts: &[Term], strategy: Strategy) -> Option<Vec<Term>> {
    for (i, t) in ts.iter().enumerate() {
        if let Some(u) = step_term(theory, t, strategy) {
            let mut out = ts.to_vec();
            out[i] = u;
            return Some(out);
        }
    }
    None
}

/// One rewrite step on a term, or `None` if it is normal.
pub fn step_term(theory: &Theory, t: &Term, strategy: Strategy) -> Option<Term> {
    let Term::App(f, args) = t else {
        return None;
    };
    let inside = |th| step_terms(th, args, strategy).map(|a| Term::App(f.clone(), a));
    match strategy {
        Strategy::Innermost => inside(theory).or_else(|| rewrite_term_root(theory, t)),
        Strategy::Outermost => rewrite_term_root(theory, t).or_else(|| inside(theory)),
    }
}

/// One rewrite step on a formula, or `None` if it is normal.
pub fn step_formula(theory: &Theory, f: &Formula, strategy: Strategy) -> Option<Formula> {
    match f {
        Formula::Atom(p, args) => {
            let inside = || step_terms(theory, args, strategy).map(|a| Formula::Atom(p.clone(), a));
            match strategy {
                Strategy::Innermost => inside().or_else(|| rewrite_atom(theory, p, args)),
                Strategy::Outermost => rewrite_atom(theory, p, args).or_else(inside),
            }
        }
        Formula::Top | Formula::Bot => None,
        Formula::Imp(a, b) => step_pair(theory, a, b, strategy).map(|(a, b)| Formula::imp(a, b)),
        Formula::And(a, b) => step_pair(theory, a, b, strategy).map(|(a, b)| Formula::and(a, b)),
        Formula::Or(a, b) => step_pair(theory, a, b, strategy).map(|(a, b)| Formula::or(a, b)),
        Formula::Forall(x, body) => {
            step_formula(theory, body, strategy).map(|b| Formula::forall(x.clone(), b))
        }
        Formula::Exists(x, body) => {
            step_formula(theory, body, strategy).map(|b| Formula::exists(x.clone(), b))
        }
    }
}

fn step_pair(
    theory: &Theory,
    a: &Formula,
    b: &Formula,
    strategy: Strategy,
) -> Option<(Formula, Formula)> {
    if let Some(a2) = step_formula(theory, a, strategy) {
        return Some((a2, b.clone()));
    }
    step_formula(theory, b, strategy).map(|b2| (a.clone(), b2))
}

fn iterate<T: Clone>(
    start: &T,
    fuel: usize,
    step: impl Fn(&T) -> Option<T>,
) -> NormalizationOutcome<T> {
    let mut cur = start.clone();
    let mut steps = 0;
    loop {
        match step(&cur) {
            None => return NormalizationOutcome::Normal { value: cur, steps },
            Some(_) if steps == fuel => {
                return NormalizationOutcome::FuelExhausted {
                    partial: cur,
                    steps,
                }
            }
            Some(next) => {
                cur = next;
                steps += 1;
            }
        }
    }
}

/// Structural hash of `f`, pushing every subformula with its hash.
/// Linear in the size of `f`.
fn subformula_hashes<'a>(f: &'a Formula, out: &mut Vec<(u64, &'a Formula)>) -> u64 {
    let mut h = DefaultHasher::new();
    std::mem::discriminant(f).hash(&mut h);
    match f {
        Formula::Atom(..) | Formula::Top | Formula::Bot => f.hash(&mut h),
        Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            subformula_hashes(a, out).hash(&mut h);
            subformula_hashes(b, out).hash(&mut h);
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            x.hash(&mut h);
            subformula_hashes(b, out).hash(&mut h);
        }
    }
    let v = h.finish();
    out.push((v, f));
    v
}

/// Rewrites a formula to normal form, taking at most `fuel` steps.
/// Rewriting also happens under quantifiers. Stops early with `Diverges`
/// when a formula of the sequence reappears inside a later one.
pub fn normalize_formula(
    theory: &Theory,
    f: &Formula,
    fuel: usize,
    strategy: Strategy,
) -> NormalizationOutcome<Formula> {
    let mut seen: HashMap<u64, Vec<Formula>> = HashMap::new();
    let root = subformula_hashes(f, &mut Vec::new());
    seen.entry(root).or_default().push(f.clone());
    let mut cur = f.clone();
    let mut steps = 0;
    while let Some(next) = step_formula(theory, &cur, strategy) {
        if steps == fuel {
            return NormalizationOutcome::FuelExhausted { partial: cur, steps };
        }
        steps += 1;
        let mut subs = Vec::new();
        let root = subformula_hashes(&next, &mut subs);
        let repeated = subs
            .iter()
            .any(|(h, g)| seen.get(h).is_some_and(|fs| fs.iter().any(|e| e == *g)));
        if repeated {
            return NormalizationOutcome::Diverges { partial: next, steps };
        }
        seen.entry(root).or_default().push(next.clone());
        cur = next;
    }
    NormalizationOutcome::Normal { value: cur, steps }
}

pub fn normalize_term(
    theory: &Theory,
    t: &Term,
    fuel: usize,
    strategy: Strategy,
) -> NormalizationOutcome<Term> {
    iterate(t, fuel, |x| step_term(theory, x, strategy))
}

/// Rewrites an atom at its head until the result is not an atom or no
/// proposition rule applies even after normalizing the arguments.
/// `fuel` is decremented by every step taken.
pub fn whnf(theory: &Theory, f: &Formula, fuel: &mut usize) -> Option<Formula> {
    let mut cur = f.clone();
    loop {
        let Formula::Atom(p, args) = &cur else {
            return Some(cur);
        };
        if let Some(next) = rewrite_atom(theory, p, args) {
            if *fuel == 0 {
                return None;
            }
            *fuel -= 1;
            cur = next;
            continue;
        }
        let mut changed = false;
        let mut new_args = Vec::with_capacity(args.len());
        for a in args {
            match normalize_term(theory, a, *fuel, Strategy::Innermost) {
                NormalizationOutcome::Normal { value, steps } => {
                    *fuel -= steps;
                    changed |= steps > 0;
                    new_args.push(value);
                }
                _ => return None,
            }
        }
        if !changed {
            return Some(cur);
        }
        cur = Formula::Atom(p.clone(), new_args);
    }
}

/// Decides `A ≡ B` as far as `fuel` allows.
///
/// `Yes` when the formulas are alpha-equivalent, when a lazy comparison
/// (head rewriting, then comparing components) joins them, or when both have
/// equal normal forms up to bound variable names. `No` when both normalize
/// to different forms and the theory is known to be confluent, either
/// declared so or deterministic. `Unknown` otherwise.
pub fn congruent(theory: &Theory, a: &Formula, b: &Formula, fuel: usize) -> TriState {
    if a.alpha_eq(b) {
        return TriState::Yes;
    }
    let mut budget = fuel;
    if lazy_conv(theory, a, b, &mut budget) {
        return TriState::Yes;
    }
    let na = normalize_formula(theory, a, fuel, Strategy::Innermost).normal();
    let nb = normalize_formula(theory, b, fuel, Strategy::Innermost).normal();
    match (na, nb) {
        (Some(x), Some(y)) if x.alpha_eq(&y) => TriState::Yes,
        (Some(_), Some(_)) if theory.claimed_confluent || check_deterministic(theory) => {
            TriState::No
        }
        _ => TriState::Unknown,
    }
}

/// Term equality modulo the term rules. `No` needs a theory declared
/// confluent.
pub fn congruent_terms(theory: &Theory, s: &Term, t: &Term, fuel: usize) -> TriState {
    if s == t {
        return TriState::Yes;
    }
    let ns = normalize_term(theory, s, fuel, Strategy::Innermost).normal();
    let nt = normalize_term(theory, t, fuel, Strategy::Innermost).normal();
    match (ns, nt) {
        (Some(x), Some(y)) if x == y => TriState::Yes,
        (Some(_), Some(_)) if theory.claimed_confluent || theory.term_rules().next().is_none() => {
            TriState::No
        }
        _ => TriState::Unknown,
    }
}

/// Whether `a` and `b` can be shown convertible by rewriting heads and
/// comparing components. A `false` result proves nothing.
fn lazy_conv(theory: &Theory, a: &Formula, b: &Formula, fuel: &mut usize) -> bool {
    if a.alpha_eq(b) {
        return true;
    }
    let (Some(wa), Some(wb)) = (whnf(theory, a, fuel), whnf(theory, b, fuel)) else {
        return false;
    };
    match (&wa, &wb) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    let r = congruent_terms(theory, x, y, *fuel) == TriState::Yes;
                    *fuel = fuel.saturating_sub(1);
                    r
                })
        }
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::Imp(a1, a2), Formula::Imp(b1, b2))
        | (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            lazy_conv(theory, a1, b1, fuel) && lazy_conv(theory, a2, b2, fuel)
        }
        (Formula::Forall(x, ba), Formula::Forall(y, bb))
        | (Formula::Exists(x, ba), Formula::Exists(y, bb)) => {
            if x.sort != y.sort {
                return false;
            }
            let mut avoid = ba.free_var_names();
            avoid.extend(bb.free_var_names());
            let z = Var::new(super::syntax::fresh_name(&x.name, &avoid), x.sort.clone());
            let zt = Term::Var(z);
            lazy_conv(theory, &ba.instantiate(x, &zt), &bb.instantiate(y, &zt), fuel)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, parse_theory};

    fn th(text: &str) -> Theory {
        parse_theory(text).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let t = th("pred P\npred Q\npred R\nrule P --> Q => R");
        let p = Formula::prop("P");
        let out = normalize_formula(&t, &p, 10, Strategy::Innermost);
        assert_eq!(out.normal().unwrap().to_string(), "Q => R");
        let qr = parse_formula("Q => R", &t.signature).unwrap();
        assert_eq!(
            normalize_formula(&t, &qr, 10, Strategy::Innermost),
            NormalizationOutcome::Normal {
                value: qr.clone(),
                steps: 0
            }
        );
        assert_eq!(congruent(&t, &p, &qr, 10), TriState::Yes);
        assert_eq!(congruent(&t, &qr, &qr, 10), TriState::Yes);

        let looping = th("pred P\npred Q\nrule P --> Q => P");
        let out = normalize_formula(&looping, &p, 10, Strategy::Innermost);
        assert!(matches!(out, NormalizationOutcome::Diverges { steps: 1, .. }));
        assert_eq!(congruent(&looping, &p, &Formula::Top, 10), TriState::Unknown);

        let climbing = th("sort n\nfun z : -> n\nfun s : n -> n\npred E : n\nrule E(x) --> E(s(x))");
        let e = parse_formula("E(z)", &climbing.signature).unwrap();
        let out = normalize_formula(&climbing, &e, 10, Strategy::Innermost);
        assert!(matches!(out, NormalizationOutcome::FuelExhausted { steps: 10, .. }));
    }

    #[test]
    fn distinct_normal_forms_only_separate_confluent_theories() {
        // Q and R are both reducts of P
        let forked = th("pred P\npred Q\npred R\nrule P --> Q\nrule P --> R");
        let q = Formula::prop("Q");
        let r = Formula::prop("R");
        assert_eq!(congruent(&forked, &q, &r, 10), TriState::Unknown);
        let single = th("pred P\npred Q\npred R\nrule P --> Q");
        assert_eq!(congruent(&single, &q, &r, 10), TriState::No);
    }

    #[test]
    fn self_embedding_is_reported_as_divergence() {
        let t = th("pred P\nrule P --> bot => P");
        let out = normalize_formula(&t, &Formula::prop("P"), 10_000, Strategy::Innermost);
        assert_eq!(
            out,
            NormalizationOutcome::Diverges {
                partial: Formula::imp(Formula::Bot, Formula::prop("P")),
                steps: 1
            }
        );
        let t = th("pred P\npred Q\nrule P --> Q\nrule Q --> P");
        let out = normalize_formula(&t, &Formula::prop("P"), 10_000, Strategy::Outermost);
        assert!(matches!(out, NormalizationOutcome::Diverges { steps: 2, .. }));
        let t = th("pred P\npred Q\nrule P --> Q /\\ Q");
        let out = normalize_formula(&t, &Formula::prop("P"), 10_000, Strategy::Innermost);
        assert_eq!(out.steps(), 1);
        assert!(out.normal().is_some());
    }

    #[test]
    fn rewriting_under_binders_avoids_capture() {
        let t = th("sort s\npred P : s\npred Q : s s\nrule P(x) --> forall y:s. Q(x, y)");
        let f = parse_formula("forall y:s. P(y)", &t.signature).unwrap();
        let n = normalize_formula(&t, &f, 10, Strategy::Innermost).normal().unwrap();
        let expected = parse_formula("forall y:s. forall z:s. Q(y, z)", &t.signature).unwrap();
        assert!(n.alpha_eq(&expected), "{n}");
    }

    #[test]
    fn term_rules_and_strategies_agree() {
        let t = th("sort n\nfun z : -> n\nfun s : n -> n\nfun add : n n -> n\npred E : n\n\
                    rule add(z, y) --> y\nrule add(s(x), y) --> s(add(x, y))\n\
                    rule E(s(s(x))) --> E(x)\nrule E(z) --> top");
        let f = parse_formula("E(add(s(z), add(s(z), s(s(z)))))", &t.signature).unwrap();
        for strategy in [Strategy::Innermost, Strategy::Outermost] {
            let n = normalize_formula(&t, &f, 100, strategy).normal().unwrap();
            assert_eq!(n, Formula::Top);
        }
    }
}
