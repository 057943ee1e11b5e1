//! Proof terms of natural deduction modulo.

use crate::logic::{fresh_name, Formula, Subst, Term, Var};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Proof {
    Var(String),
    /// `lam a:A. p`
    Lam(String, Formula, Box<Proof>),
    /// `p q`
    App(Box<Proof>, Box<Proof>),
    /// `pair(p, q)`
    Pair(Box<Proof>, Box<Proof>),
    Fst(Box<Proof>),
    Snd(Box<Proof>),
    Inl(Box<Proof>),
    Inr(Box<Proof>),
    /// `case p of a. q | b. r`
    Case(Box<Proof>, String, Box<Proof>, String, Box<Proof>),
    Unit,
    /// `exfalso(p, A)`
    Exfalso(Box<Proof>, Formula),
    /// `Lam x:s. p`
    TLam(Var, Box<Proof>),
    /// `p @ t`
    TApp(Box<Proof>, Term),
    /// `wit(t, p)`
    Wit(Term, Box<Proof>),
    /// `dest p as x:s. a. q`
    Dest(Box<Proof>, Var, String, Box<Proof>),
}

fn bx(p: Proof) -> Box<Proof> {
    Box::new(p)
}

impl Proof {
    pub fn var(a: impl Into<String>) -> Proof {
        Proof::Var(a.into())
    }

    pub fn lam(a: impl Into<String>, ty: Formula, body: Proof) -> Proof {
        Proof::Lam(a.into(), ty, bx(body))
    }

    pub fn app(p: Proof, q: Proof) -> Proof {
        Proof::App(bx(p), bx(q))
    }

    pub fn pair(p: Proof, q: Proof) -> Proof {
        Proof::Pair(bx(p), bx(q))
    }

    pub fn fst(p: Proof) -> Proof {
        Proof::Fst(bx(p))
    }

    pub fn snd(p: Proof) -> Proof {
        Proof::Snd(bx(p))
    }

    pub fn inl(p: Proof) -> Proof {
        Proof::Inl(bx(p))
    }

    pub fn inr(p: Proof) -> Proof {
        Proof::Inr(bx(p))
    }

    pub fn case(
        p: Proof,
        a: impl Into<String>,
        q: Proof,
        b: impl Into<String>,
        r: Proof,
    ) -> Proof {
        Proof::Case(bx(p), a.into(), bx(q), b.into(), bx(r))
    }

    pub fn exfalso(p: Proof, ty: Formula) -> Proof {
        Proof::Exfalso(bx(p), ty)
    }

    pub fn tlam(x: Var, body: Proof) -> Proof {
        Proof::TLam(x, bx(body))
    }

    pub fn tapp(p: Proof, t: Term) -> Proof {
        Proof::TApp(bx(p), t)
    }

    pub fn wit(t: Term, p: Proof) -> Proof {
        Proof::Wit(t, bx(p))
    }

    pub fn dest(p: Proof, x: Var, a: impl Into<String>, q: Proof) -> Proof {
        Proof::Dest(bx(p), x, a.into(), bx(q))
    }

    /// Direct subterms, left to right.
    pub fn children(&self) -> Vec<&Proof> {
        match self {
            Proof::Var(_) | Proof::Unit => vec![],
            Proof::Lam(_, _, p)
            | Proof::Fst(p)
            | Proof::Snd(p)
            | Proof::Inl(p)
            | Proof::Inr(p)
            | Proof::Exfalso(p, _)
            | Proof::TLam(_, p)
            | Proof::TApp(p, _)
            | Proof::Wit(_, p) => vec![p],
            Proof::App(p, q) | Proof::Pair(p, q) | Proof::Dest(p, _, _, q) => vec![p, q],
            Proof::Case(p, _, q, _, r) => vec![p, q, r],
        }
    }

    /// A copy with child `i` replaced.
    pub(crate) fn with_child(&self, i: usize, c: Proof) -> Proof {
        let mut out = self.clone();
        let slot: &mut Box<Proof> = match (&mut out, i) {
            (Proof::Lam(_, _, p), 0)
            | (Proof::Fst(p), 0)
            | (Proof::Snd(p), 0)
            | (Proof::Inl(p), 0)
            | (Proof::Inr(p), 0)
            | (Proof::Exfalso(p, _), 0)
            | (Proof::TLam(_, p), 0)
            | (Proof::TApp(p, _), 0)
            | (Proof::Wit(_, p), 0)
            | (Proof::App(p, _), 0)
            | (Proof::Pair(p, _), 0)
            | (Proof::Dest(p, _, _, _), 0)
            | (Proof::Case(p, _, _, _, _), 0) => p,
            (Proof::App(_, q), 1)
            | (Proof::Pair(_, q), 1)
            | (Proof::Dest(_, _, _, q), 1)
            | (Proof::Case(_, _, q, _, _), 1) => q,
            (Proof::Case(_, _, _, _, r), 2) => r,
            _ => panic!("no child {i}"),
        };
        **slot = c;
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Free proof variables.
    pub fn free_proof_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_proof_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_proof_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let under = |p: &Proof, a: &str, bound: &mut Vec<String>, out: &mut BTreeSet<String>| {
            bound.push(a.to_string());
            p.collect_proof_vars(bound, out);
            bound.pop();
        };
        match self {
            Proof::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Proof::Lam(a, _, p) => under(p, a, bound, out),
            Proof::Case(p, a, q, b, r) => {
                p.collect_proof_vars(bound, out);
                under(q, a, bound, out);
                under(r, b, bound, out);
            }
            Proof::Dest(p, _, a, q) => {
                p.collect_proof_vars(bound, out);
                under(q, a, bound, out);
            }
            _ => {
                for c in self.children() {
                    c.collect_proof_vars(bound, out);
                }
            }
        }
    }

    /// Names of free term variables, in terms and in formula annotations.
    pub fn free_term_vars(&self) -> BTreeSet<String> {
        let names = |vs: BTreeSet<Var>| vs.into_iter().map(|v| v.name).collect::<BTreeSet<_>>();
        match self {
            Proof::Var(_) | Proof::Unit => BTreeSet::new(),
            Proof::Lam(_, a, p) | Proof::Exfalso(p, a) => {
                let mut s = a.free_var_names();
                s.extend(p.free_term_vars());
                s
            }
            Proof::TApp(p, t) | Proof::Wit(t, p) => {
                let mut s = names(t.free_vars());
                s.extend(p.free_term_vars());
                s
            }
            Proof::TLam(x, p) => {
                let mut s = p.free_term_vars();
                s.remove(&x.name);
                s
            }
            Proof::Dest(p, x, _, q) => {
                let mut s = q.free_term_vars();
                s.remove(&x.name);
                s.extend(p.free_term_vars());
                s
            }
            _ => self
                .children()
                .into_iter()
                .flat_map(|c| c.free_term_vars())
                .collect(),
        }
    }

    /// `(q/a)self`, renaming binders that would capture free variables of
    /// `q`.
    pub fn subst_proof(&self, a: &str, q: &Proof) -> Proof {
        let q_proofs = q.free_proof_vars();
        let q_terms = q.free_term_vars();
        self.subst_proof_with(a, q, &q_proofs, &q_terms)
    }

    fn subst_proof_with(
        &self,
        a: &str,
        q: &Proof,
        qp: &BTreeSet<String>,
        qt: &BTreeSet<String>,
    ) -> Proof {
        let go = |p: &Proof| p.subst_proof_with(a, q, qp, qt);
        // Substitutes under a proof binder `b`, renaming it if it would
        // capture a free proof variable of `q`.
        let under = |b: &str, body: &Proof| -> (String, Proof) {
            if b == a || !body.free_proof_vars().contains(a) {
                return (b.to_string(), body.clone());
            }
            if qp.contains(b) {
                let mut avoid = qp.clone();
                avoid.extend(body.free_proof_vars());
                avoid.insert(a.to_string());
                let c = fresh_name(b, &avoid);
                let body = body.subst_proof(b, &Proof::Var(c.clone()));
                let out = body.subst_proof_with(a, q, qp, qt);
                return (c, out);
            }
            (b.to_string(), body.subst_proof_with(a, q, qp, qt))
        };
        match self {
            Proof::Var(b) if b == a => q.clone(),
            Proof::Var(_) | Proof::Unit => self.clone(),
            Proof::Lam(b, ty, body) => {
                let (b, body) = under(b, body);
                Proof::Lam(b, ty.clone(), bx(body))
            }
            Proof::Case(p, b, l, c, r) => {
                let p = go(p);
                let (b, l) = under(b, l);
                let (c, r) = under(c, r);
                Proof::Case(bx(p), b, bx(l), c, bx(r))
            }
            Proof::TLam(x, body) => {
                let (x, body) = rename_term_binder(x, body, qt);
                Proof::TLam(x, bx(go(&body)))
            }
            Proof::Dest(p, x, b, body) => {
                let p = go(p);
                let (x, body) = rename_term_binder(x, body, qt);
                let (b, body) = under(b, &body);
                Proof::Dest(bx(p), x, b, bx(body))
            }
            _ => {
                let mut out = self.clone();
                for (i, c) in self.children().into_iter().enumerate() {
                    out = out.with_child(i, go(c));
                }
                out
            }
        }
    }

    /// Capture-avoiding substitution of term variables.
    pub fn subst_term(&self, s: &Subst) -> Proof {
        if s.is_empty() {
            return self.clone();
        }
        let range: BTreeSet<String> = s
            .values()
            .flat_map(|t| t.free_vars())
            .map(|v| v.name)
            .collect();
        let go = |p: &Proof| p.subst_term(s);
        match self {
            Proof::Var(_) | Proof::Unit => self.clone(),
            Proof::Lam(a, ty, p) => Proof::Lam(a.clone(), ty.subst(s), bx(go(p))),
            Proof::Exfalso(p, ty) => Proof::Exfalso(bx(go(p)), ty.subst(s)),
            Proof::TApp(p, t) => Proof::TApp(bx(go(p)), t.subst(s)),
            Proof::Wit(t, p) => Proof::Wit(t.subst(s), bx(go(p))),
            Proof::TLam(x, body) => {
                let (x, body, inner) = term_binder_subst(x, body, s, &range);
                Proof::TLam(x, bx(body.subst_term(&inner)))
            }
            Proof::Dest(p, x, a, body) => {
                let (x, body, inner) = term_binder_subst(x, body, s, &range);
                Proof::Dest(bx(go(p)), x, a.clone(), bx(body.subst_term(&inner)))
            }
            _ => {
                let mut out = self.clone();
                for (i, c) in self.children().into_iter().enumerate() {
                    out = out.with_child(i, go(c));
                }
                out
            }
        }
    }

    /// A copy with every bound variable renamed by binding depth, so that
    /// alpha-equivalent proofs become equal.
    pub fn canonical(&self) -> Proof {
        self.canonical_at(0, 0)
    }

    fn canonical_at(&self, pd: usize, td: usize) -> Proof {
        let pname = |d: usize| format!("#p{d}");
        let tname = |d: usize| format!("#t{d}");
        match self {
            Proof::Var(_) | Proof::Unit => self.clone(),
            Proof::Lam(a, ty, body) => {
                let body = body.subst_proof(a, &Proof::Var(pname(pd)));
                Proof::Lam(pname(pd), ty.canonical(), bx(body.canonical_at(pd + 1, td)))
            }
            Proof::Case(p, a, q, b, r) => {
                let q = q.subst_proof(a, &Proof::Var(pname(pd)));
                let r = r.subst_proof(b, &Proof::Var(pname(pd)));
                Proof::Case(
                    bx(p.canonical_at(pd, td)),
                    pname(pd),
                    bx(q.canonical_at(pd + 1, td)),
                    pname(pd),
                    bx(r.canonical_at(pd + 1, td)),
                )
            }
            Proof::TLam(x, body) => {
                let y = Var::new(tname(td), x.sort.clone());
                let body = body.subst_term(&Subst::from([(x.name.clone(), Term::Var(y.clone()))]));
                Proof::TLam(y, bx(body.canonical_at(pd, td + 1)))
            }
            Proof::Dest(p, x, a, body) => {
                let y = Var::new(tname(td), x.sort.clone());
                let body = body
                    .subst_term(&Subst::from([(x.name.clone(), Term::Var(y.clone()))]))
                    .subst_proof(a, &Proof::Var(pname(pd)));
                Proof::Dest(
                    bx(p.canonical_at(pd, td)),
                    y,
                    pname(pd),
                    bx(body.canonical_at(pd + 1, td + 1)),
                )
            }
            Proof::Exfalso(p, ty) => Proof::Exfalso(bx(p.canonical_at(pd, td)), ty.canonical()),
            _ => {
                let mut out = self.clone();
                for (i, c) in self.children().into_iter().enumerate() {
                    out = out.with_child(i, c.canonical_at(pd, td));
                }
                out
            }
        }
    }

    pub fn alpha_eq(&self, other: &Proof) -> bool {
        self == other || self.canonical() == other.canonical()
    }
}

/// Renames the term binder `x` of `body` when it occurs free in `avoid`.
fn rename_term_binder(x: &Var, body: &Proof, avoid: &BTreeSet<String>) -> (Var, Proof) {
    if !avoid.contains(&x.name) {
        return (x.clone(), body.clone());
    }
    let mut all = avoid.clone();
    all.extend(body.free_term_vars());
    let y = Var::new(fresh_name(&x.name, &all), x.sort.clone());
    let body = body.subst_term(&Subst::from([(x.name.clone(), Term::Var(y.clone()))]));
    (y, body)
}

/// Prepares substitution `s` under the term binder `x`: drops `x` from it
/// and renames `x` if it would capture a variable of the range.
fn term_binder_subst(
    x: &Var,
    body: &Proof,
    s: &Subst,
    range: &BTreeSet<String>,
) -> (Var, Proof, Subst) {
    let mut inner = s.clone();
    inner.remove(&x.name);
    if inner.is_empty() {
        return (x.clone(), body.clone(), inner);
    }
    let mut avoid = range.clone();
    avoid.extend(inner.keys().cloned());
    let (y, body) = rename_term_binder(x, body, &avoid);
    (y, body, inner)
}

impl Proof {
    /// 0: anything; 1: application head; 2: atom.
    fn level(&self) -> u8 {
        match self {
            Proof::Lam(..) | Proof::TLam(..) | Proof::Case(..) | Proof::Dest(..) => 0,
            Proof::App(..) | Proof::TApp(..) => 1,
            _ => 2,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Proof::Var(a) => write!(f, "{a}"),
            Proof::Lam(a, ty, p) => {
                write!(f, "lam {a}:{ty}. ")?;
                p.write_at(f, 0)
            }
            Proof::App(p, q) => {
                p.write_at(f, 1)?;
                write!(f, " ")?;
                q.write_at(f, 2)
            }
            Proof::Pair(p, q) => write!(f, "pair({p}, {q})"),
            Proof::Fst(p) | Proof::Snd(p) | Proof::Inl(p) | Proof::Inr(p) => {
                let kw = match self {
                    Proof::Fst(_) => "fst",
                    Proof::Snd(_) => "snd",
                    Proof::Inl(_) => "inl",
                    _ => "inr",
                };
                write!(f, "{kw} ")?;
                p.write_at(f, 2)
            }
            Proof::Case(p, a, q, b, r) => {
                write!(f, "case ")?;
                p.write_at(f, 1)?;
                write!(f, " of {a}. ")?;
                q.write_at(f, 1)?;
                write!(f, " | {b}. ")?;
                r.write_at(f, 0)
            }
            Proof::Unit => write!(f, "unit"),
            Proof::Exfalso(p, ty) => write!(f, "exfalso({p}, {ty})"),
            Proof::TLam(x, p) => {
                write!(f, "Lam {}:{}. ", x.name, x.sort)?;
                p.write_at(f, 0)
            }
            Proof::TApp(p, t) => {
                p.write_at(f, 1)?;
                write!(f, " @ {t}")
            }
            Proof::Wit(t, p) => write!(f, "wit({t}, {p})"),
            Proof::Dest(p, x, a, q) => {
                write!(f, "dest ")?;
                p.write_at(f, 1)?;
                write!(f, " as {}:{}. {a}. ", x.name, x.sort)?;
                q.write_at(f, 0)
            }
        }
    }
}

/// Prints in the syntax accepted by the proof parser.
impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam_aa() -> Proof {
        Proof::lam("a", Formula::prop("P"), Proof::app(Proof::var("a"), Proof::var("a")))
    }

    #[test]
    fn printing() {
        let p = Proof::app(lam_aa(), lam_aa());
        assert_eq!(p.to_string(), "(lam a:P. a a) (lam a:P. a a)");
        let q = Proof::case(Proof::var("h"), "a", Proof::inl(Proof::var("a")), "b", Proof::inr(Proof::var("b")));
        assert_eq!(q.to_string(), "case h of a. inl a | b. inr b");
    }

    #[test]
    fn substitution_avoids_capture() {
        // (b / a) (lam b:P. a) must not capture b
        let p = Proof::lam("b", Formula::prop("P"), Proof::var("a"));
        let r = p.subst_proof("a", &Proof::var("b"));
        let Proof::Lam(c, _, body) = &r else { panic!() };
        assert_ne!(c, "b");
        assert_eq!(**body, Proof::var("b"));
        assert!(lam_aa().alpha_eq(&Proof::lam(
            "z",
            Formula::prop("P"),
            Proof::app(Proof::var("z"), Proof::var("z"))
        )));
    }

    #[test]
    fn free_variables() {
        let p = Proof::app(lam_aa(), Proof::var("h"));
        assert_eq!(p.free_proof_vars(), BTreeSet::from(["h".to_string()]));
        let t = Proof::tlam(
            Var::new("x", "s"),
            Proof::tapp(Proof::var("h"), Term::var("x", "s")),
        );
        assert!(t.free_term_vars().is_empty());
    }
}
