//! One-step reduction and strong normalization analysis.

use super::Proof;
use crate::logic::Subst;
use std::collections::HashMap;

/// The reduct of `p` at its root, if `p` is a redex.
pub fn root_reduct(p: &Proof) -> Option<Proof> {
    match p {
        Proof::App(f, q) => match &**f {
            Proof::Lam(a, _, body) => Some(body.subst_proof(a, q)),
            _ => None,
        },
        Proof::Fst(q) | Proof::Snd(q) => match &**q {
            Proof::Pair(l, r) => Some(if matches!(p, Proof::Fst(_)) { l } else { r }.as_ref().clone()),
            _ => None,
        },
        Proof::Case(q, a, l, b, r) => match &**q {
            Proof::Inl(v) => Some(l.subst_proof(a, v)),
            Proof::Inr(v) => Some(r.subst_proof(b, v)),
            _ => None,
        },
        Proof::TApp(f, t) => match &**f {
            Proof::TLam(x, body) => Some(body.subst_term(&Subst::from([(x.name.clone(), t.clone())]))),
            _ => None,
        },
        Proof::Dest(q, x, a, body) => match &**q {
            Proof::Wit(t, v) => Some(
                body.subst_term(&Subst::from([(x.name.clone(), t.clone())]))
                    .subst_proof(a, v),
            ),
            _ => None,
        },
        _ => None,
    }
}

/// Every one-step reduct of `p`, in pre-order of the contracted redex
/// (the root first, then left to right).
pub fn reduce_step(p: &Proof) -> Vec<Proof> {
    let mut out = Vec::new();
    reducts_into(p, &mut out);
    out
}

fn reducts_into(p: &Proof, out: &mut Vec<Proof>) {
    if let Some(r) = root_reduct(p) {
        out.push(r);
    }
    for (i, c) in p.children().into_iter().enumerate() {
        let mut inner = Vec::new();
        reducts_into(c, &mut inner);
        out.extend(inner.into_iter().map(|r| p.with_child(i, r)));
    }
}

/// Whether `p` is not an introduction form.
pub fn is_neutral(p: &Proof) -> bool {
    !matches!(
        p,
        Proof::Lam(..)
            | Proof::Pair(..)
            | Proof::Inl(_)
            | Proof::Inr(_)
            | Proof::Unit
            | Proof::TLam(..)
            | Proof::Wit(..)
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOutcome {
    /// Every reduction path terminates. `value` is reached by always
    /// contracting the first redex; `steps` is the length of the longest
    /// path.
    Normal { value: Proof, steps: usize },
    /// A reachable cycle: consecutive entries are one-step reducts and the
    /// last entry is alpha-equivalent to the first.
    Loop { cycle: Vec<Proof> },
    /// The node budget ran out; `frontier` reducts were left unexplored.
    FuelExhausted { frontier: usize },
}

impl ReductionOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionOutcome::Normal { .. } => "Normal",
            ReductionOutcome::Loop { .. } => "Loop",
            ReductionOutcome::FuelExhausted { .. } => "FuelExhausted",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Done(usize),
}

/// Explores the whole reduction graph of `p`, identifying alpha-equivalent
/// proofs, visiting at most `fuel` distinct proofs.
///
/// Proofs are keyed by their canonical form; traces show the first proof
/// met in each class, so they keep the user's variable names.
pub fn sn_status(p: &Proof, fuel: usize) -> ReductionOutcome {
    if fuel == 0 {
        return ReductionOutcome::FuelExhausted { frontier: 1 };
    }
    let mut marks: HashMap<Proof, Mark> = HashMap::new();
    let mut stack: Vec<Frame> = Vec::new();
    let root = p.canonical();
    marks.insert(root.clone(), Mark::Open);
    stack.push(Frame::new(root, p.clone()));
    while let Some(top) = stack.last_mut() {
        if top.next == top.reducts.len() {
            let frame = stack.pop().unwrap();
            marks.insert(frame.key, Mark::Done(frame.longest));
            if let Some(parent) = stack.last_mut() {
                parent.longest = parent.longest.max(frame.longest + 1);
            }
            continue;
        }
        let (key, proof) = top.reducts[top.next].clone();
        top.next += 1;
        match marks.get(&key) {
            Some(Mark::Done(n)) => {
                top.longest = top.longest.max(n + 1);
            }
            Some(Mark::Open) => {
                let start = stack.iter().position(|f| f.key == key).unwrap();
                let mut cycle: Vec<Proof> = stack[start..].iter().map(|f| f.proof.clone()).collect();
                cycle.push(proof);
                return ReductionOutcome::Loop { cycle };
            }
            None => {
                if marks.len() >= fuel {
                    let frontier = stack
                        .iter()
                        .map(|f| f.reducts.len() - f.next)
                        .sum::<usize>()
                        + 1;
                    return ReductionOutcome::FuelExhausted { frontier };
                }
                marks.insert(key.clone(), Mark::Open);
                stack.push(Frame::new(key, proof));
            }
        }
    }
    let Some(Mark::Done(steps)) = marks.get(&p.canonical()).copied() else {
        unreachable!("the root is finished last")
    };
    let mut value = p.clone();
    while let Some(r) = reduce_step(&value).into_iter().next() {
        value = r;
    }
    ReductionOutcome::Normal { value, steps }
}

struct Frame {
    key: Proof,
    proof: Proof,
    /// Distinct reducts as (canonical form, reduct).
    reducts: Vec<(Proof, Proof)>,
    next: usize,
    /// Longest path found so far from this proof.
    longest: usize,
}

impl Frame {
    fn new(key: Proof, proof: Proof) -> Frame {
        let mut reducts: Vec<(Proof, Proof)> = Vec::new();
        for r in reduce_step(&proof) {
            let c = r.canonical();
            if !reducts.iter().any(|(k, _)| *k == c) {
                reducts.push((c, r));
            }
        }
        Frame {
            key,
            proof,
            reducts,
            next: 0,
            longest: 0,
        }
    }
}

/// Whether `trace` is a reduction cycle: at least one step, each entry a
/// one-step reduct of the previous one up to alpha-equivalence, and the
/// last entry alpha-equivalent to the first.
pub fn verify_loop(trace: &[Proof]) -> bool {
    trace.len() >= 2
        && trace[0].alpha_eq(&trace[trace.len() - 1])
        && trace
            .windows(2)
            .all(|w| reduce_step(&w[0]).iter().any(|r| r.alpha_eq(&w[1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Formula, Term, Var};

    fn id() -> Proof {
        Proof::lam("a", Formula::prop("A"), Proof::var("a"))
    }

    fn omega() -> Proof {
        let d = Proof::lam("a", Formula::prop("P"), Proof::app(Proof::var("a"), Proof::var("a")));
        Proof::app(d.clone(), d)
    }

    #[test]
    fn one_step_reducts() {
        assert_eq!(reduce_step(&Proof::app(id(), Proof::Unit)), vec![Proof::Unit]);
        assert_eq!(
            reduce_step(&Proof::fst(Proof::pair(Proof::Unit, Proof::Unit))),
            vec![Proof::Unit]
        );
        let r = reduce_step(&omega());
        assert_eq!(r.len(), 1);
        assert!(r[0].alpha_eq(&omega()));
        assert!(reduce_step(&Proof::Unit).is_empty());
    }

    #[test]
    fn witness_elimination() {
        let x = Var::new("x", "s");
        let body = Proof::tapp(Proof::var("h"), Term::Var(x.clone()));
        let p = Proof::dest(
            Proof::wit(Term::constant("c"), Proof::var("u")),
            x,
            "a",
            Proof::pair(body, Proof::var("a")),
        );
        let expected = Proof::pair(Proof::tapp(Proof::var("h"), Term::constant("c")), Proof::var("u"));
        assert_eq!(reduce_step(&p), vec![expected]);
    }

    #[test]
    fn strong_normalization_status() {
        assert_eq!(
            sn_status(&Proof::Unit, 10),
            ReductionOutcome::Normal {
                value: Proof::Unit,
                steps: 0
            }
        );
        let k = Proof::lam("a", Formula::prop("A"), Proof::Unit);
        assert_eq!(
            sn_status(&Proof::app(k, Proof::Unit), 10),
            ReductionOutcome::Normal {
                value: Proof::Unit,
                steps: 1
            }
        );
        let ReductionOutcome::Loop { cycle } = sn_status(&omega(), 10) else {
            panic!("expected a loop")
        };
        assert_eq!(cycle.len(), 2);
        assert!(verify_loop(&cycle));
        assert!(!verify_loop(&[Proof::Unit, Proof::Unit]));
    }

    #[test]
    fn longest_path_is_reported() {
        // (lam a. unit) ((lam b. b) unit): 1 step outside-in, 2 steps inside-out
        let k = Proof::lam("a", Formula::prop("A"), Proof::Unit);
        let p = Proof::app(k, Proof::app(id(), Proof::Unit));
        let ReductionOutcome::Normal { value, steps } = sn_status(&p, 100) else { panic!() };
        assert_eq!(value, Proof::Unit);
        assert_eq!(steps, 2);
        assert!(matches!(sn_status(&p, 1), ReductionOutcome::FuelExhausted { .. }));
    }

    #[test]
    fn neutrality() {
        assert!(is_neutral(&Proof::var("a")));
        assert!(!is_neutral(&id()));
        assert!(is_neutral(&Proof::fst(Proof::pair(Proof::Unit, Proof::Unit))));
    }
}
