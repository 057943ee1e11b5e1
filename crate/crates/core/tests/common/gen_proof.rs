//! Random well-typed proofs in the theory `P --> Q => P`.
//!
//! The root context is `h:P, k:Q`, sometimes with `d:P \/ Q`. Every goal is
//! built from `P`, `Q` and `top` with the binary connectives, so it is
//! provable there and generation never gets stuck.
//!
//! The checker is bidirectional and cannot infer injections, so proofs in
//! inference positions (function parts of applications, arguments of
//! projections, scrutinees) are built by `gen_infer`, which only aims at
//! goals without disjunctions.

use rand::Rng;
use tva_core::logic::{parse_theory, Formula, Theory};
use tva_core::proofterms::{Proof, Sequent};

pub const THEORY: &str = "pred P\npred Q\nrule P --> Q => P\n";

pub fn theory() -> Theory {
    parse_theory(THEORY).expect("theory parses")
}

fn p() -> Formula {
    Formula::prop("P")
}

fn q() -> Formula {
    Formula::prop("Q")
}

fn has_or(f: &Formula) -> bool {
    match f {
        Formula::Or(..) => true,
        Formula::Imp(a, b) | Formula::And(a, b) => has_or(a) || has_or(b),
        _ => false,
    }
}

pub struct ProofGen<'r, R: Rng> {
    rng: &'r mut R,
    ctx: Vec<(String, Formula)>,
    with_disjunction: bool,
    counter: usize,
}

impl<'r, R: Rng> ProofGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        let with_disjunction = rng.gen_bool(0.5);
        let mut ctx = vec![("h".to_string(), p()), ("k".to_string(), q())];
        if with_disjunction {
            ctx.push(("d".to_string(), Formula::or(p(), q())));
        }
        ProofGen {
            rng,
            ctx,
            with_disjunction,
            counter: 0,
        }
    }

    pub fn root_sequent(&self, goal: Formula) -> Sequent {
        self.ctx
            .iter()
            .fold(Sequent::new(goal), |s, (a, f)| s.with_hyp(a.clone(), f.clone()))
    }

    pub fn goal(&mut self, depth: usize, allow_or: bool) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return match self.rng.gen_range(0..5) {
                0 => Formula::Top,
                1 | 2 => p(),
                _ => q(),
            };
        }
        let a = self.goal(depth - 1, allow_or);
        let b = self.goal(depth - 1, allow_or);
        match self.rng.gen_range(0..if allow_or { 3 } else { 2 }) {
            0 => Formula::imp(a, b),
            1 => Formula::and(a, b),
            _ => Formula::or(a, b),
        }
    }

    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("a{}", self.counter)
    }

    fn hyp_for(&mut self, goal: &Formula) -> Option<Proof> {
        let names: Vec<&String> = self
            .ctx
            .iter()
            .enumerate()
            .filter(|(i, (a, f))| {
                f == goal && !self.ctx[i + 1..].iter().any(|(b, _)| b == a)
            })
            .map(|(_, (a, _))| a)
            .collect();
        if names.is_empty() {
            None
        } else {
            let i = self.rng.gen_range(0..names.len());
            Some(Proof::var(names[i].clone()))
        }
    }

    fn under<T>(&mut self, a: &str, f: Formula, k: impl FnOnce(&mut Self) -> T) -> T {
        self.ctx.push((a.to_string(), f));
        let out = k(self);
        self.ctx.pop();
        out
    }

    fn case_on_d(&mut self, goal: &Formula, depth: usize, infer_first: bool) -> Proof {
        let (a, b) = (self.fresh(), self.fresh());
        let left = self.under(&a, p(), |g| {
            if infer_first {
                g.infer(goal, depth - 1)
            } else {
                g.check(goal, depth - 1)
            }
        });
        let right = self.under(&b, q(), |g| g.check(goal, depth - 1));
        Proof::case(Proof::var("d"), a, left, b, right)
    }

    /// A proof checking against `goal`.
    pub fn check(&mut self, goal: &Formula, depth: usize) -> Proof {
        if depth == 0 {
            return self.shape(goal, 0);
        }
        match self.rng.gen_range(0..10) {
            0..=3 => self.shape(goal, depth),
            4 | 5 if self.with_disjunction => self.case_on_d(goal, depth, false),
            _ if !has_or(goal) => self.infer(goal, depth),
            _ => self.shape(goal, depth),
        }
    }

    /// A proof following the shape of `goal`; atoms are hypotheses or, for
    /// `P`, an abstraction over `Q`.
    fn shape(&mut self, goal: &Formula, depth: usize) -> Proof {
        let d = depth.saturating_sub(1);
        match goal {
            Formula::Top => Proof::Unit,
            Formula::Imp(a, b) => {
                let x = self.fresh();
                let body = self.under(&x, (**a).clone(), |g| g.check(b, d));
                Proof::lam(x, (**a).clone(), body)
            }
            Formula::And(a, b) => Proof::pair(self.check(a, d), self.check(b, d)),
            Formula::Or(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Proof::inl(self.check(a, d))
                } else {
                    Proof::inr(self.check(b, d))
                }
            }
            _ if *goal == p() && depth > 0 && self.rng.gen_bool(0.3) => {
                let x = self.fresh();
                let body = self.under(&x, q(), |g| g.check(&p(), d));
                Proof::lam(x, q(), body)
            }
            _ => self.hyp_for(goal).expect("P and Q are always in scope"),
        }
    }

    /// A proof whose inferred type is congruent to `goal`, which must not
    /// contain a disjunction.
    pub fn infer(&mut self, goal: &Formula, depth: usize) -> Proof {
        assert!(!has_or(goal));
        let d = depth.saturating_sub(1);
        if depth == 0 {
            return self.infer_shape(goal, 0);
        }
        match self.rng.gen_range(0..12) {
            0..=3 => self.infer_shape(goal, depth),
            4 | 5 => {
                let arg_ty = self.goal(1, false);
                let x = self.fresh();
                let body = self.under(&x, arg_ty.clone(), |g| g.infer(goal, d));
                let arg = self.check(&arg_ty, d);
                Proof::app(Proof::lam(x, arg_ty, body), arg)
            }
            6 => {
                let other = self.goal(1, false);
                let pair = Proof::pair(self.infer(goal, d), self.infer(&other, d));
                Proof::fst(pair)
            }
            7 => {
                let other = self.goal(1, false);
                let pair = Proof::pair(self.infer(&other, d), self.infer(goal, d));
                Proof::snd(pair)
            }
            8 | 9 if *goal == p() => Proof::app(self.infer(&p(), d), self.check(&q(), d)),
            10 if self.with_disjunction => self.case_on_d(goal, depth, true),
            _ => self.infer_shape(goal, depth),
        }
    }

    fn infer_shape(&mut self, goal: &Formula, depth: usize) -> Proof {
        let d = depth.saturating_sub(1);
        match goal {
            Formula::Top => Proof::Unit,
            Formula::Imp(a, b) => {
                let x = self.fresh();
                let body = self.under(&x, (**a).clone(), |g| g.infer(b, d));
                Proof::lam(x, (**a).clone(), body)
            }
            Formula::And(a, b) => Proof::pair(self.infer(a, d), self.infer(b, d)),
            _ if *goal == p() && depth > 0 && self.rng.gen_bool(0.3) => {
                let x = self.fresh();
                let body = self.under(&x, q(), |g| g.infer(&p(), d));
                Proof::lam(x, q(), body)
            }
            _ => self.hyp_for(goal).expect("P and Q are always in scope"),
        }
    }
}

/// A random sequent and a proof of it.
pub fn random_proof(rng: &mut impl Rng, depth: usize) -> (Sequent, Proof) {
    let mut g = ProofGen::new(rng);
    let goal = g.goal(2, true);
    let proof = g.check(&goal, depth);
    (g.root_sequent(goal), proof)
}
