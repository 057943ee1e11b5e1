//! A brute-force model checker that shares no code with the library's
//! evaluator: it walks formulas directly with a name-keyed environment and
//! enumerates structures by counting through all table contents.

use std::collections::HashMap;
use tva_core::algebra::TruthValueAlgebra;
use tva_core::logic::{Formula, RewriteRule, Term, Theory, Var};
use tva_core::Subset;

/// Tables for every symbol, in signature order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveStructure {
    pub funs: Vec<Vec<usize>>,
    pub preds: Vec<Vec<usize>>,
}

pub struct Oracle<'a> {
    pub theory: &'a Theory,
    pub alg: &'a TruthValueAlgebra,
    pub domains: HashMap<String, usize>,
}

type Env = HashMap<String, usize>;

impl<'a> Oracle<'a> {
    pub fn new(theory: &'a Theory, alg: &'a TruthValueAlgebra, domains: &[(&str, usize)]) -> Self {
        let mut d: HashMap<String, usize> =
            theory.signature.sorts.iter().map(|s| (s.clone(), 1)).collect();
        for (s, n) in domains {
            d.insert(s.to_string(), *n);
        }
        Oracle {
            theory,
            alg,
            domains: d,
        }
    }

    fn tuples(&self, sorts: &[String]) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for s in sorts {
            let n = self.domains[s];
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |e| {
                        let mut t = t.clone();
                        t.push(e);
                        t
                    })
                })
                .collect();
        }
        out
    }

    fn lookup(&self, sorts: &[String], args: &[usize]) -> usize {
        self.tuples(sorts)
            .iter()
            .position(|t| t == args)
            .expect("tuple in range")
    }

    fn term(&self, st: &NaiveStructure, t: &Term, env: &Env) -> usize {
        match t {
            Term::Var(v) => env[&v.name],
            Term::App(f, args) => {
                let (i, _, decl) = self.theory.signature.funs.get_full(f).expect("declared");
                let vals: Vec<usize> = args.iter().map(|a| self.term(st, a, env)).collect();
                st.funs[i][self.lookup(&decl.args, &vals)]
            }
        }
    }

    /// The value of `f`, or `None` if some quantifier is undefined on the
    /// set it meets.
    pub fn eval(&self, st: &NaiveStructure, f: &Formula, env: &Env) -> Option<usize> {
        let a = self.alg;
        Some(match f {
            Formula::Atom(p, args) => {
                let (i, _, sorts) = self.theory.signature.preds.get_full(p).expect("declared");
                let vals: Vec<usize> = args.iter().map(|t| self.term(st, t, env)).collect();
                st.preds[i][self.lookup(sorts, &vals)]
            }
            Formula::Top => a.top(),
            Formula::Bot => a.bot(),
            Formula::Imp(x, y) => a.imp(self.eval(st, x, env)?, self.eval(st, y, env)?),
            Formula::And(x, y) => a.and(self.eval(st, x, env)?, self.eval(st, y, env)?),
            Formula::Or(x, y) => a.or(self.eval(st, x, env)?, self.eval(st, y, env)?),
            Formula::Forall(x, body) => a.forall(self.value_set(st, x, body, env)?)?,
            Formula::Exists(x, body) => a.exists(self.value_set(st, x, body, env)?)?,
        })
    }

    fn value_set(&self, st: &NaiveStructure, x: &Var, body: &Formula, env: &Env) -> Option<Subset> {
        let mut set = Subset::EMPTY;
        for e in 0..self.domains[&x.sort] {
            let mut env = env.clone();
            env.insert(x.name.clone(), e);
            set = set.with(self.eval(st, body, &env)?);
        }
        Some(set)
    }

    fn assignments(&self, vars: &[Var]) -> Vec<Env> {
        let sorts: Vec<String> = vars.iter().map(|v| v.sort.clone()).collect();
        self.tuples(&sorts)
            .into_iter()
            .map(|t| vars.iter().map(|v| v.name.clone()).zip(t).collect())
            .collect()
    }

    pub fn is_model(&self, st: &NaiveStructure) -> bool {
        for ax in &self.theory.axioms {
            match self.eval(st, ax, &Env::new()) {
                Some(v) if self.alg.is_positive(v) => {}
                _ => return false,
            }
        }
        for rule in &self.theory.rules {
            for env in self.assignments(&rule.vars()) {
                let same = match rule {
                    RewriteRule::Term { lhs, rhs } => {
                        self.term(st, lhs, &env) == self.term(st, rhs, &env)
                    }
                    RewriteRule::Prop { pred, args, rhs } => {
                        let lhs = Formula::Atom(pred.clone(), args.clone());
                        match (self.eval(st, &lhs, &env), self.eval(st, rhs, &env)) {
                            (Some(l), Some(r)) => l == r,
                            _ => false,
                        }
                    }
                };
                if !same {
                    return false;
                }
            }
        }
        true
    }

    /// Every structure, in lexicographic order of the concatenated tables
    /// (functions first).
    pub fn structures(&self) -> Vec<NaiveStructure> {
        let sig = &self.theory.signature;
        let mut shapes: Vec<(usize, usize)> = Vec::new();
        for d in sig.funs.values() {
            shapes.push((self.tuples(&d.args).len(), self.domains[&d.result]));
        }
        for sorts in sig.preds.values() {
            shapes.push((self.tuples(sorts).len(), self.alg.size()));
        }
        let mut tables: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for (len, radix) in shapes {
            let mut all: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..len {
                all = all
                    .into_iter()
                    .flat_map(|t| {
                        (0..radix).map(move |v| {
                            let mut t = t.clone();
                            t.push(v);
                            t
                        })
                    })
                    .collect();
            }
            tables = tables
                .into_iter()
                .flat_map(|ts| {
                    all.iter().map(move |t| {
                        let mut ts = ts.clone();
                        ts.push(t.clone());
                        ts
                    })
                })
                .collect();
        }
        let nf = sig.funs.len();
        tables
            .into_iter()
            .map(|mut ts| {
                let preds = ts.split_off(nf);
                NaiveStructure { funs: ts, preds }
            })
            .collect()
    }

    /// The first model and the number of structures looked at.
    pub fn first_model(&self) -> (Option<NaiveStructure>, u64) {
        let mut n = 0;
        for st in self.structures() {
            n += 1;
            if self.is_model(&st) {
                return (Some(st), n);
            }
        }
        (None, n)
    }
}
