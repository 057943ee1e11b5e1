//! The standard model of simple type theory over a full algebra.
//!
//! Sorts are `i`, `o` and arrows, written in prefix form: `Aoo` is `o -> o`
//! and `AAooo` is `(o -> o) -> o`. Elements of an arrow sort `T -> U` whose
//! size fits the domain cap are numbered by their graph: the element `a`
//! sends `e` to digit `e` of `a` written in base `|U|`, least significant
//! digit first. Values of larger sorts (the combinators, mostly) are kept as
//! partial applications and only tabulated once their sort is small enough.

use super::model::{check_model, ModelReport};
use super::{Interpretation, SemanticsError};
use crate::algebra::TruthValueAlgebra;
use crate::logic::{Formula, FunDecl, RewriteRule, Signature, Term, Theory, Var};
use crate::Subset;
use serde::Serialize;
use std::collections::HashMap;

/// Default upper bound on the size of a domain that gets enumerated.
pub const DEFAULT_MAX_DOMAIN: usize = 1 << 15;
/// Default upper bound on the number of instances of one rule.
pub const DEFAULT_MAX_INSTANCES: u64 = 1 << 23;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SttCaps {
    pub max_domain: usize,
    pub max_instances: u64,
}

impl Default for SttCaps {
    fn default() -> Self {
        SttCaps {
            max_domain: DEFAULT_MAX_DOMAIN,
            max_instances: DEFAULT_MAX_INSTANCES,
        }
    }
}

/// The nine rule schemas, in order.
pub const SCHEMAS: [&str; 9] = [
    "S", "K", "eps-top", "eps-bot", "eps-imp", "eps-and", "eps-or", "eps-forall", "eps-exists",
];

const I: usize = 0;
const O: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
struct SortInfo {
    name: String,
    arrow: Option<(usize, usize)>,
    depth: usize,
    /// `None` when the sort has more than `max_domain` elements.
    size: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Head {
    S { x: usize, y: usize, uv: usize },
    K,
    Imp,
    And,
    Or,
    Forall { t: usize, to: usize },
    Exists { t: usize, to: usize },
}

impl Head {
    fn arity(self) -> usize {
        match self {
            Head::S { .. } => 3,
            Head::K | Head::Imp | Head::And | Head::Or => 2,
            Head::Forall { .. } | Head::Exists { .. } => 1,
        }
    }
}

/// An element of some sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SttValue {
    /// Element number `n` of a sort that fits the cap.
    Elem(usize),
    /// A combinator applied to fewer arguments than it takes.
    Partial(PartialApp),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialApp {
    head: Head,
    args: Vec<SttValue>,
}

#[derive(Debug, Clone)]
enum Symbol {
    App { fun: usize },
    Const(SttValue),
}

/// The interpretation: `M_i = {0}`, `M_o` the carrier, `M_(T->U)` all
/// functions, `α̂(a, b) = a(b)`, `ε̂(a) = a` and the connective constants
/// interpreted by the algebra operations.
#[derive(Debug, Clone)]
pub struct SttModel {
    algebra: TruthValueAlgebra,
    sorts: Vec<SortInfo>,
    theory: Theory,
    symbols: Vec<Symbol>,
    max_domain: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaSummary {
    pub schema: &'static str,
    /// Sort instantiations that were checked.
    pub instantiations: usize,
    pub instances: u64,
    pub failures: u64,
}

#[derive(Debug, Clone)]
pub struct SttOutcome {
    pub model: SttModel,
    pub report: ModelReport,
    pub schemas: Vec<SchemaSummary>,
    /// Sort instantiations left out because a variable's domain or the
    /// instance count exceeds the caps.
    pub skipped: Vec<String>,
}

impl SttOutcome {
    /// Whether every checked instance holds and every schema was checked at
    /// least once.
    pub fn passed(&self) -> bool {
        self.report.passed() && self.schemas.iter().all(|s| s.instantiations > 0)
    }
}

struct Builder {
    sorts: Vec<SortInfo>,
    arrows: HashMap<(usize, usize), usize>,
    max_domain: usize,
}

impl Builder {
    fn arrow(&mut self, t: usize, u: usize) -> usize {
        if let Some(&id) = self.arrows.get(&(t, u)) {
            return id;
        }
        let (a, b) = (&self.sorts[t], &self.sorts[u]);
        let size = match (a.size, b.size) {
            (_, Some(1)) => Some(1),
            (Some(n), Some(m)) => u32::try_from(n)
                .ok()
                .and_then(|n| m.checked_pow(n))
                .filter(|&s| s <= self.max_domain),
            _ => None,
        };
        let info = SortInfo {
            name: format!("A{}{}", a.name, b.name),
            arrow: Some((t, u)),
            depth: 1 + a.depth.max(b.depth),
            size,
        };
        self.sorts.push(info);
        let id = self.sorts.len() - 1;
        self.arrows.insert((t, u), id);
        id
    }

    fn depth(&self, s: usize) -> usize {
        self.sorts[s].depth
    }

    fn name(&self, s: usize) -> &str {
        &self.sorts[s].name
    }
}

struct Generated {
    sig: Signature,
    symbols: Vec<Symbol>,
    rules: Vec<RewriteRule>,
    schema_of_rule: Vec<usize>,
    skipped: Vec<String>,
    instantiations: [usize; 9],
}

impl Generated {
    fn declare_sort(&mut self, b: &Builder, s: usize) {
        let name = b.name(s).to_string();
        if !self.sig.sorts.contains(&name) {
            self.sig.sorts.push(name);
        }
    }

    fn app_symbol(&mut self, b: &Builder, fun: usize) -> String {
        let (t, u) = b.sorts[fun].arrow.expect("arrow sort");
        let name = format!("app_{}_{}", b.name(t), b.name(u));
        if !self.sig.funs.contains_key(&name) {
            for s in [fun, t, u] {
                self.declare_sort(b, s);
            }
            self.sig.funs.insert(
                name.clone(),
                FunDecl {
                    args: vec![b.name(fun).to_string(), b.name(t).to_string()],
                    result: b.name(u).to_string(),
                },
            );
            self.symbols.push(Symbol::App { fun });
        }
        name
    }

    fn constant(&mut self, b: &Builder, name: String, sort: usize, value: SttValue) -> String {
        if !self.sig.funs.contains_key(&name) {
            self.declare_sort(b, sort);
            self.sig.funs.insert(
                name.clone(),
                FunDecl {
                    args: Vec::new(),
                    result: b.name(sort).to_string(),
                },
            );
            self.symbols.push(Symbol::Const(value));
        }
        name
    }

    fn app(&mut self, b: &Builder, f: Term, f_sort: usize, a: Term) -> Term {
        let name = self.app_symbol(b, f_sort);
        Term::app(name, vec![f, a])
    }

    /// Adds a rule when its variables' domains and instance count fit.
    fn push(
        &mut self,
        b: &Builder,
        schema: usize,
        vars: &[(usize, &str)],
        caps: SttCaps,
        rule: impl FnOnce(&mut Self) -> RewriteRule,
    ) {
        let at = vars
            .iter()
            .map(|(s, v)| format!("{v}:{}", b.name(*s)))
            .collect::<Vec<_>>()
            .join(", ");
        let mut count: u64 = 1;
        for (s, v) in vars {
            let Some(n) = b.sorts[*s].size else {
                self.skipped.push(format!(
                    "{} with {at}: the domain of `{v}` has more than {} elements",
                    SCHEMAS[schema], caps.max_domain
                ));
                return;
            };
            count = count.saturating_mul(n as u64);
        }
        if count > caps.max_instances {
            self.skipped.push(format!(
                "{} with {at}: {count} instances exceed the cap of {}",
                SCHEMAS[schema], caps.max_instances
            ));
            return;
        }
        for (s, _) in vars {
            self.declare_sort(b, *s);
        }
        let r = rule(self);
        self.rules.push(r);
        self.schema_of_rule.push(schema);
        self.instantiations[schema] += 1;
    }
}

fn var(b: &Builder, name: &str, s: usize) -> Term {
    Term::var(name, b.name(s))
}

/// Sorts of depth at most `max_depth`, by depth.
fn universe(b: &mut Builder, max_depth: usize) -> Vec<usize> {
    let mut all = vec![I, O];
    for d in 1..=max_depth {
        let prev = all.clone();
        for &t in &prev {
            for &u in &prev {
                if 1 + b.depth(t).max(b.depth(u)) == d {
                    all.push(b.arrow(t, u));
                }
            }
        }
    }
    all
}

/// Builds the model over a full algebra and checks every instance of the
/// nine rule schemas at the sorts of depth at most `max_depth`.
///
/// A schema is instantiated when the sorts of its left-hand side's proper
/// subterms stay within that depth; the combinator constants themselves may
/// be deeper. Instantiations whose variable domains exceed the caps are
/// skipped and listed.
pub fn build_stt_model(
    algebra: &TruthValueAlgebra,
    max_depth: usize,
    caps: SttCaps,
) -> Result<SttOutcome, SemanticsError> {
    if !algebra.is_full() {
        return Err(SemanticsError::Precondition(
            "the algebra must be full".into(),
        ));
    }
    let mut b = Builder {
        sorts: vec![
            SortInfo {
                name: "i".into(),
                arrow: None,
                depth: 0,
                size: Some(1),
            },
            SortInfo {
                name: "o".into(),
                arrow: None,
                depth: 0,
                size: Some(algebra.size()).filter(|&n| n <= caps.max_domain),
            },
        ],
        arrows: HashMap::new(),
        max_domain: caps.max_domain,
    };
    let sorts = universe(&mut b, max_depth);
    let mut g = Generated {
        sig: Signature::default(),
        symbols: Vec::new(),
        rules: Vec::new(),
        schema_of_rule: Vec::new(),
        skipped: Vec::new(),
        instantiations: [0; 9],
    };
    for &s in &sorts {
        g.declare_sort(&b, s);
    }
    g.sig.preds.insert("eps".into(), vec!["o".into()]);
    let within = |b: &Builder, s: usize| b.depth(s) <= max_depth;

    // S x y z --> (x z) (y z)
    for &t in &sorts {
        for &u in &sorts {
            for &v in &sorts {
                if 2 + b.depth(t).max(b.depth(u)).max(b.depth(v)) > max_depth {
                    continue;
                }
                let uv = b.arrow(u, v);
                let tuv = b.arrow(t, uv);
                let tu = b.arrow(t, u);
                let tv = b.arrow(t, v);
                let sx = b.arrow(tu, tv);
                let s_sort = b.arrow(tuv, sx);
                debug_assert!(within(&b, sx));
                let name = format!("S_{}_{}_{}", b.name(t), b.name(u), b.name(v));
                let head = Head::S { x: tuv, y: tu, uv };
                let (x, y, z) = (var(&b, "x", tuv), var(&b, "y", tu), var(&b, "z", t));
                let vars = [(tuv, "x"), (tu, "y"), (t, "z")];
                g.push(&b, 0, &vars, caps, |g| {
                    let c = g.constant(&b, name, s_sort, partial(head));
                    let lhs = g.app(&b, Term::constant(c), s_sort, x.clone());
                    let lhs = g.app(&b, lhs, sx, y.clone());
                    let lhs = g.app(&b, lhs, tv, z.clone());
                    let xz = g.app(&b, x, tuv, z.clone());
                    let yz = g.app(&b, y, tu, z);
                    let rhs = g.app(&b, xz, uv, yz);
                    RewriteRule::Term { lhs, rhs }
                });
            }
        }
    }
    // K x y --> x
    for &t in &sorts {
        for &u in &sorts {
            let ut = b.arrow(u, t);
            if !within(&b, ut) {
                continue;
            }
            let k_sort = b.arrow(t, ut);
            let name = format!("K_{}_{}", b.name(t), b.name(u));
            let (x, y) = (var(&b, "x", t), var(&b, "y", u));
            g.push(&b, 1, &[(t, "x"), (u, "y")], caps, |g| {
                let c = g.constant(&b, name, k_sort, partial(Head::K));
                let lhs = g.app(&b, Term::constant(c), k_sort, x.clone());
                let lhs = g.app(&b, lhs, ut, y);
                RewriteRule::Term { lhs, rhs: x }
            });
        }
    }
    let eps = |t: Term| Formula::atom("eps", vec![t]);
    let top = algebra.top();
    let bot = algebra.bot();
    g.push(&b, 2, &[], caps, |g| {
        let c = g.constant(&b, "dtop".into(), O, SttValue::Elem(top));
        RewriteRule::Prop {
            pred: "eps".into(),
            args: vec![Term::constant(c)],
            rhs: Formula::Top,
        }
    });
    g.push(&b, 3, &[], caps, |g| {
        let c = g.constant(&b, "dbot".into(), O, SttValue::Elem(bot));
        RewriteRule::Prop {
            pred: "eps".into(),
            args: vec![Term::constant(c)],
            rhs: Formula::Bot,
        }
    });
    let oo = b.arrow(O, O);
    let ooo = b.arrow(O, oo);
    let binary: [(usize, &str, Head, fn(Formula, Formula) -> Formula); 3] = [
        (4, "dimp", Head::Imp, Formula::imp),
        (5, "dand", Head::And, Formula::and),
        (6, "dor", Head::Or, Formula::or),
    ];
    for (schema, name, head, conn) in binary {
        let (x, y) = (var(&b, "x", O), var(&b, "y", O));
        g.push(&b, schema, &[(O, "x"), (O, "y")], caps, |g| {
            let c = g.constant(&b, name.into(), ooo, partial(head));
            let lhs = g.app(&b, Term::constant(c), ooo, x.clone());
            let lhs = g.app(&b, lhs, oo, y.clone());
            RewriteRule::Prop {
                pred: "eps".into(),
                args: vec![lhs],
                rhs: conn(eps(x), eps(y)),
            }
        });
    }
    for &t in &sorts {
        let to = b.arrow(t, O);
        if !within(&b, to) {
            continue;
        }
        let q_sort = b.arrow(to, O);
        for (schema, prefix) in [(7, "dforall"), (8, "dexists")] {
            let name = format!("{prefix}_{}", b.name(t));
            let head = if schema == 7 {
                Head::Forall { t, to }
            } else {
                Head::Exists { t, to }
            };
            let x = var(&b, "x", to);
            let y = Var::new("y", b.name(t));
            g.push(&b, schema, &[(to, "x")], caps, |g| {
                let c = g.constant(&b, name, q_sort, partial(head));
                let lhs = g.app(&b, Term::constant(c), q_sort, x.clone());
                let body = eps(g.app(&b, x, to, Term::Var(y.clone())));
                RewriteRule::Prop {
                    pred: "eps".into(),
                    args: vec![lhs],
                    rhs: if schema == 7 {
                        Formula::forall(y, body)
                    } else {
                        Formula::exists(y, body)
                    },
                }
            });
        }
    }

    let theory = Theory {
        signature: g.sig,
        rules: g.rules,
        axioms: Vec::new(),
        claimed_terminating: false,
        claimed_confluent: false,
    };
    let mut model = SttModel {
        algebra: algebra.clone(),
        sorts: b.sorts,
        theory,
        symbols: Vec::new(),
        max_domain: caps.max_domain,
    };
    // Constants are tabulated once, now that every sort is known.
    let mut symbols = Vec::with_capacity(g.symbols.len());
    for (sym, decl) in g.symbols.into_iter().zip(model.theory.signature.funs.values()) {
        symbols.push(match sym {
            Symbol::Const(v) => {
                let sort = model.sort_id(&decl.result)?;
                Symbol::Const(model.settle(v, sort)?)
            }
            app => app,
        });
    }
    model.symbols = symbols;

    let report = check_model(&model.theory, &model)?;
    let mut schemas: Vec<SchemaSummary> = SCHEMAS
        .iter()
        .zip(g.instantiations)
        .map(|(&schema, instantiations)| SchemaSummary {
            schema,
            instantiations,
            instances: 0,
            failures: 0,
        })
        .collect();
    for (check, &schema) in report.rules.iter().zip(&g.schema_of_rule) {
        schemas[schema].instances += check.instances;
        schemas[schema].failures += check.failures;
    }
    Ok(SttOutcome {
        model,
        report,
        schemas,
        skipped: g.skipped,
    })
}

fn partial(head: Head) -> SttValue {
    SttValue::Partial(PartialApp {
        head,
        args: Vec::new(),
    })
}

impl SttModel {
    /// The theory of all generated rule instances.
    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    /// Every sort that was generated, with its size when it fits the cap.
    pub fn sorts(&self) -> Vec<(String, Option<usize>)> {
        self.sorts.iter().map(|s| (s.name.clone(), s.size)).collect()
    }

    fn sort_id(&self, name: &str) -> Result<usize, SemanticsError> {
        self.sorts
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| SemanticsError::MissingDomain(name.to_string()))
    }

    fn size(&self, sort: usize) -> Result<usize, SemanticsError> {
        self.sorts[sort].size.ok_or_else(|| {
            SemanticsError::Construction(format!(
                "sort `{}` has more than {} elements",
                self.sorts[sort].name, self.max_domain
            ))
        })
    }

    fn arrow_of(&self, sort: usize) -> (usize, usize) {
        self.sorts[sort].arrow.expect("arrow sort")
    }

    /// The element number of `v`, a value of `sort`.
    fn index(&self, v: &SttValue, sort: usize) -> Result<usize, SemanticsError> {
        match v {
            SttValue::Elem(i) => Ok(*i),
            SttValue::Partial(_) => self.tabulate(v, sort),
        }
    }

    fn tabulate(&self, v: &SttValue, sort: usize) -> Result<usize, SemanticsError> {
        let (dom, cod) = self.arrow_of(sort);
        let base = self.size(cod)?;
        if base == 1 {
            return Ok(0);
        }
        let mut index = 0;
        let mut weight = 1;
        for e in 0..self.size(dom)? {
            let r = self.apply(v, sort, &SttValue::Elem(e))?;
            index += self.index(&r, cod)? * weight;
            weight *= base;
        }
        Ok(index)
    }

    /// Replaces a partial application by its element number when its sort
    /// fits the cap, so that equal values compare equal.
    fn settle(&self, v: SttValue, sort: usize) -> Result<SttValue, SemanticsError> {
        match v {
            SttValue::Partial(_) if self.sorts[sort].size.is_some() => {
                Ok(SttValue::Elem(self.tabulate(&v, sort)?))
            }
            v => Ok(v),
        }
    }

    fn apply(&self, f: &SttValue, f_sort: usize, a: &SttValue) -> Result<SttValue, SemanticsError> {
        let (dom, cod) = self.arrow_of(f_sort);
        let out = match f {
            SttValue::Elem(idx) => {
                let base = self.size(cod)?;
                if base == 1 {
                    SttValue::Elem(0)
                } else {
                    let e = self.index(a, dom)?;
                    SttValue::Elem(idx / base.pow(e as u32) % base)
                }
            }
            SttValue::Partial(p) => {
                let mut args = p.args.clone();
                args.push(a.clone());
                if args.len() < p.head.arity() {
                    SttValue::Partial(PartialApp { head: p.head, args })
                } else {
                    self.saturate(p.head, &args)?
                }
            }
        };
        self.settle(out, cod)
    }

    fn truth(&self, v: &SttValue) -> Result<usize, SemanticsError> {
        self.index(v, O)
    }

    fn saturate(&self, head: Head, args: &[SttValue]) -> Result<SttValue, SemanticsError> {
        let alg = &self.algebra;
        Ok(match head {
            Head::S { x, y, uv } => {
                let xz = self.apply(&args[0], x, &args[2])?;
                let yz = self.apply(&args[1], y, &args[2])?;
                self.apply(&xz, uv, &yz)?
            }
            Head::K => args[0].clone(),
            Head::Imp => SttValue::Elem(alg.imp(self.truth(&args[0])?, self.truth(&args[1])?)),
            Head::And => SttValue::Elem(alg.and(self.truth(&args[0])?, self.truth(&args[1])?)),
            Head::Or => SttValue::Elem(alg.or(self.truth(&args[0])?, self.truth(&args[1])?)),
            Head::Forall { t, to } | Head::Exists { t, to } => {
                let mut range = Subset::EMPTY;
                for e in 0..self.size(t)? {
                    let v = self.apply(&args[0], to, &SttValue::Elem(e))?;
                    range = range.with(self.truth(&v)?);
                }
                let value = if matches!(head, Head::Forall { .. }) {
                    alg.forall(range)
                } else {
                    alg.exists(range)
                };
                SttValue::Elem(value.expect("full algebra"))
            }
        })
    }
}

impl Interpretation for SttModel {
    type Elem = SttValue;

    fn algebra(&self) -> &TruthValueAlgebra {
        &self.algebra
    }

    fn domain(&self, sort: &str) -> Result<Vec<SttValue>, SemanticsError> {
        let n = self.size(self.sort_id(sort)?)?;
        Ok((0..n).map(SttValue::Elem).collect())
    }

    fn fun_handle(&self, name: &str) -> Result<usize, SemanticsError> {
        self.theory
            .signature
            .funs
            .get_index_of(name)
            .ok_or_else(|| SemanticsError::UnknownFunction(name.to_string()))
    }

    fn pred_handle(&self, name: &str) -> Result<usize, SemanticsError> {
        self.theory
            .signature
            .preds
            .get_index_of(name)
            .ok_or_else(|| SemanticsError::UnknownPredicate(name.to_string()))
    }

    fn apply_fun(&self, h: usize, args: &[SttValue]) -> Result<SttValue, SemanticsError> {
        match &self.symbols[h] {
            Symbol::Const(v) => Ok(v.clone()),
            Symbol::App { fun } => self.apply(&args[0], *fun, &args[1]),
        }
    }

    fn apply_pred(&self, _h: usize, args: &[SttValue]) -> Result<usize, SemanticsError> {
        self.truth(&args[0])
    }

    fn describe(&self, e: &SttValue) -> String {
        match e {
            SttValue::Elem(i) => format!("#{i}"),
            SttValue::Partial(p) => format!("{:?}/{}", p.head, p.args.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, t1, t2};
    use crate::semantics::{denote, Assignment, Denotation};

    #[test]
    fn depth_two_over_small_algebras() {
        for alg in [boolean(), t1()] {
            let out = build_stt_model(&alg, 2, SttCaps::default()).unwrap();
            assert!(out.report.passed(), "{:?}", out.report.witness);
            assert!(out.passed());
            assert!(out.schemas.iter().all(|s| s.instances > 0 && s.failures == 0));
            out.model.theory().validate().unwrap();
        }
    }

    #[test]
    fn requires_full_algebra() {
        let mut tables = t2().into_tables();
        tables.full = false;
        tables.forall.clear();
        tables.exists.clear();
        for s in [Subset::singleton(0), Subset::singleton(1), Subset::singleton(2)] {
            tables.forall.insert(s, s.iter().next().unwrap());
            tables.exists.insert(s, s.iter().next().unwrap());
        }
        if let Ok(partial) = TruthValueAlgebra::new(tables) {
            assert!(build_stt_model(&partial, 1, SttCaps::default()).is_err());
        }
    }

    #[test]
    fn implication_constant() {
        let alg = t1();
        let out = build_stt_model(&alg, 2, SttCaps::default()).unwrap();
        let f = Formula::atom(
            "eps",
            vec![Term::app(
                "app_o_o",
                vec![
                    Term::app("app_o_Aoo", vec![Term::constant("dimp"), Term::var("x", "o")]),
                    Term::var("y", "o"),
                ],
            )],
        );
        let phi: Assignment<SttValue> = [
            ("x".to_string(), SttValue::Elem(alg.top())),
            ("y".to_string(), SttValue::Elem(alg.bot())),
        ]
        .into();
        assert_eq!(
            denote(&out.model, &f, &phi).unwrap(),
            Denotation::Defined(alg.imp(alg.top(), alg.bot()))
        );
    }

    #[test]
    fn caps_skip_instantiations() {
        let caps = SttCaps {
            max_domain: 8,
            max_instances: 1000,
        };
        let out = build_stt_model(&t1(), 2, caps).unwrap();
        assert!(out.report.passed());
        assert!(!out.skipped.is_empty());
    }
}
