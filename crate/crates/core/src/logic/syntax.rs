use indexmap::IndexMap;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A sorted variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: String,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort: sort.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Top,
    Bot,
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Simultaneous substitution of terms for variables, keyed by name.
pub type Subst = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunDecl {
    pub args: Vec<String>,
    pub result: String,
}

/// Sorts, function symbols and predicate symbols, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub funs: IndexMap<String, FunDecl>,
    pub preds: IndexMap<String, Vec<String>>,
}

impl Signature {
    pub fn has_sort(&self, s: &str) -> bool {
        self.sorts.iter().any(|x| x == s)
    }

    /// Whether `name` is already used by a sort, function or predicate.
    pub fn is_symbol(&self, name: &str) -> bool {
        self.funs.contains_key(name) || self.preds.contains_key(name)
    }

    /// Sort of a term, assuming variables carry their own sorts.
    pub fn sort_of(&self, t: &Term) -> Option<String> {
        match t {
            Term::Var(v) => Some(v.sort.clone()),
            Term::App(f, _) => self.funs.get(f).map(|d| d.result.clone()),
        }
    }

    pub fn check_term(&self, t: &Term, expected: &str) -> Result<(), String> {
        match t {
            Term::Var(v) if v.sort == expected => Ok(()),
            Term::Var(v) => Err(format!(
                "variable `{}` has sort {} but {} is expected",
                v.name, v.sort, expected
            )),
            Term::App(f, args) => {
                let decl = self
                    .funs
                    .get(f)
                    .ok_or_else(|| format!("unknown function symbol `{f}`"))?;
                if decl.result != expected {
                    return Err(format!(
                        "`{f}` has sort {} but {} is expected",
                        decl.result, expected
                    ));
                }
                self.check_args(f, &decl.args, args)
            }
        }
    }

    fn check_args(&self, head: &str, sorts: &[String], args: &[Term]) -> Result<(), String> {
        if sorts.len() != args.len() {
            return Err(format!(
                "`{head}` expects {} arguments, got {}",
                sorts.len(),
                args.len()
            ));
        }
        sorts
            .iter()
            .zip(args)
            .try_for_each(|(s, a)| self.check_term(a, s))
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), String> {
        match f {
            Formula::Atom(p, args) => {
                let sorts = self
                    .preds
                    .get(p)
                    .ok_or_else(|| format!("unknown predicate `{p}`"))?;
                self.check_args(p, sorts, args)
            }
            Formula::Top | Formula::Bot => Ok(()),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                if !self.has_sort(&x.sort) {
                    return Err(format!("unknown sort `{}`", x.sort));
                }
                self.check_formula(body)
            }
        }
    }
}

impl Term {
    pub fn var(name: impl Into<String>, sort: impl Into<String>) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(f.into(), args)
    }

    pub fn constant(f: impl Into<String>) -> Term {
        Term::App(f.into(), vec![])
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence, left to right.
    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_in_order(out)),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn subst(&self, s: &Subst) -> Term {
        match self {
            Term::Var(v) => s.get(&v.name).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst(s)).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl Formula {
    pub fn atom(p: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(p.into(), args)
    }

    /// A nullary atom.
    pub fn prop(p: impl Into<String>) -> Formula {
        Formula::Atom(p.into(), vec![])
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: Var, body: Formula) -> Formula {
        Formula::Forall(x, Box::new(body))
    }

    pub fn exists(x: Var, body: Formula) -> Formula {
        Formula::Exists(x, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Top | Formula::Bot => {}
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                out.extend(inner.into_iter().filter(|v| v.name != x.name));
            }
        }
    }

    pub fn free_var_names(&self) -> BTreeSet<String> {
        self.free_vars().into_iter().map(|v| v.name).collect()
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..))
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot => false,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.has_quantifier() || b.has_quantifier()
            }
            Formula::Forall(..) | Formula::Exists(..) => true,
        }
    }

    /// Capture-avoiding substitution.
    pub fn subst(&self, s: &Subst) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(p, args) => {
                Formula::Atom(p.clone(), args.iter().map(|a| a.subst(s)).collect())
            }
            Formula::Top | Formula::Bot => self.clone(),
            Formula::Imp(a, b) => Formula::imp(a.subst(s), b.subst(s)),
            Formula::And(a, b) => Formula::and(a.subst(s), b.subst(s)),
            Formula::Or(a, b) => Formula::or(a.subst(s), b.subst(s)),
            Formula::Forall(x, body) => {
                let (x, body) = subst_under_binder(x, body, s);
                Formula::forall(x, body)
            }
            Formula::Exists(x, body) => {
                let (x, body) = subst_under_binder(x, body, s);
                Formula::exists(x, body)
            }
        }
    }

    /// Substitutes a single variable.
    pub fn instantiate(&self, x: &Var, t: &Term) -> Formula {
        self.subst(&Subst::from([(x.name.clone(), t.clone())]))
    }

    /// A copy with bound variables renamed to a canonical scheme, so that
    /// alpha-equivalent formulas become equal.
    pub fn canonical(&self) -> Formula {
        self.canonical_at(0)
    }

    fn canonical_at(&self, depth: usize) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Imp(a, b) => Formula::imp(a.canonical_at(depth), b.canonical_at(depth)),
            Formula::And(a, b) => Formula::and(a.canonical_at(depth), b.canonical_at(depth)),
            Formula::Or(a, b) => Formula::or(a.canonical_at(depth), b.canonical_at(depth)),
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let y = Var::new(canonical_name(depth), x.sort.clone());
                let body = body
                    .instantiate(x, &Term::Var(y.clone()))
                    .canonical_at(depth + 1);
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(y, body)
                } else {
                    Formula::exists(y, body)
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Top | Formula::Bot => 1,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.size(),
        }
    }
}

/// Name used for the bound variable at binding depth `depth` in canonical
/// forms. It cannot be produced by the parser, so it never clashes with a
/// free variable.
pub(crate) fn canonical_name(depth: usize) -> String {
    format!("#{depth}")
}

fn subst_under_binder(x: &Var, body: &Formula, s: &Subst) -> (Var, Formula) {
    let mut inner = s.clone();
    inner.remove(&x.name);
    let body_free = body.free_var_names();
    inner.retain(|k, _| body_free.contains(k));
    if inner.is_empty() {
        return (x.clone(), body.clone());
    }
    let mut range_free = BTreeSet::new();
    for t in inner.values() {
        for v in t.free_vars() {
            range_free.insert(v.name);
        }
    }
    if !range_free.contains(&x.name) {
        return (x.clone(), body.subst(&inner));
    }
    let mut avoid = range_free;
    avoid.extend(body_free);
    avoid.extend(inner.keys().cloned());
    let y = Var::new(fresh_name(&x.name, &avoid), x.sort.clone());
    inner.insert(x.name.clone(), Term::Var(y.clone()));
    (y, body.subst(&inner))
}

/// A name built from `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() || stem.starts_with('#') {
        "v"
    } else {
        stem
    };
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| !avoid.contains(n))
        .unwrap()
}

/// An oriented rewrite rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteRule {
    Term { lhs: Term, rhs: Term },
    Prop { pred: String, args: Vec<Term>, rhs: Formula },
}

impl RewriteRule {
    /// Variables of the left-hand side in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        match self {
            RewriteRule::Term { lhs, .. } => lhs.vars_in_order(&mut out),
            RewriteRule::Prop { args, .. } => args.iter().for_each(|a| a.vars_in_order(&mut out)),
        }
        out
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, RewriteRule::Prop { .. })
    }

    /// The left-hand side of a proposition rule as a formula.
    pub fn lhs_formula(&self) -> Option<Formula> {
        match self {
            RewriteRule::Prop { pred, args, .. } => Some(Formula::Atom(pred.clone(), args.clone())),
            RewriteRule::Term { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub rules: Vec<RewriteRule>,
    pub axioms: Vec<Formula>,
    pub claimed_terminating: bool,
    pub claimed_confluent: bool,
}

impl Theory {
    pub fn prop_rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.iter().filter(|r| r.is_prop())
    }

    pub fn term_rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.iter().filter(|r| !r.is_prop())
    }

    /// Re-checks sorts and variable conditions of every component.
    pub fn validate(&self) -> Result<(), String> {
        let sig = &self.signature;
        for (name, decl) in &sig.funs {
            for s in decl.args.iter().chain([&decl.result]) {
                if !sig.has_sort(s) {
                    return Err(format!("`{name}` uses undeclared sort `{s}`"));
                }
            }
        }
        for (name, sorts) in &sig.preds {
            if let Some(s) = sorts.iter().find(|s| !sig.has_sort(s)) {
                return Err(format!("`{name}` uses undeclared sort `{s}`"));
            }
        }
        for (i, rule) in self.rules.iter().enumerate() {
            let lhs_vars: BTreeSet<Var> = rule.vars().into_iter().collect();
            let rhs_vars = match rule {
                RewriteRule::Term { lhs, rhs } => {
                    if matches!(lhs, Term::Var(_)) {
                        return Err(format!("rule {}: left-hand side is a variable", i + 1));
                    }
                    let s = sig
                        .sort_of(lhs)
                        .ok_or_else(|| format!("rule {}: unknown head", i + 1))?;
                    sig.check_term(lhs, &s)
                        .and_then(|_| sig.check_term(rhs, &s))
                        .map_err(|e| format!("rule {}: {e}", i + 1))?;
                    rhs.free_vars()
                }
                RewriteRule::Prop { rhs, .. } => {
                    sig.check_formula(&rule.lhs_formula().unwrap())
                        .and_then(|_| sig.check_formula(rhs))
                        .map_err(|e| format!("rule {}: {e}", i + 1))?;
                    rhs.free_vars()
                }
            };
            if let Some(v) = rhs_vars.iter().find(|v| !lhs_vars.contains(v)) {
                return Err(format!(
                    "rule {}: variable `{}` of the right-hand side is not bound by the left",
                    i + 1,
                    v.name
                ));
            }
        }
        for (i, ax) in self.axioms.iter().enumerate() {
            sig.check_formula(ax)
                .map_err(|e| format!("axiom {}: {e}", i + 1))?;
            if !ax.is_closed() {
                return Err(format!("axiom {} is not closed", i + 1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Term]) -> fmt::Result {
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl Formula {
    /// Binding strength used by the printer: quantifiers 0, `=>` 1, `\/` 2,
    /// `/\` 3, atoms 4.
    fn prec(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Atom(p, args) if args.is_empty() => write!(f, "{p}"),
            Formula::Atom(p, args) => {
                write!(f, "{p}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
            Formula::Top => write!(f, "top"),
            Formula::Bot => write!(f, "bot"),
            Formula::Imp(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " => ")?;
                b.write_at(f, 1)
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                write!(f, " \\/ ")?;
                b.write_at(f, 3)
            }
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                write!(f, " /\\ ")?;
                b.write_at(f, 4)
            }
            Formula::Forall(x, body) => {
                write!(f, "forall {}:{}. ", x.name, x.sort)?;
                body.write_at(f, 0)
            }
            Formula::Exists(x, body) => {
                write!(f, "exists {}:{}. ", x.name, x.sort)?;
                body.write_at(f, 0)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteRule::Term { lhs, rhs } => write!(f, "{lhs} --> {rhs}"),
            RewriteRule::Prop { rhs, .. } => {
                write!(f, "{} --> {rhs}", self.lhs_formula().unwrap())
            }
        }
    }
}

/// Prints the theory in the syntax accepted by the theory parser.
impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.signature;
        for s in &sig.sorts {
            writeln!(f, "sort {s}")?;
        }
        for (name, d) in &sig.funs {
            let args: String = d.args.iter().map(|a| format!("{a} ")).collect();
            writeln!(f, "fun {name} : {args}-> {}", d.result)?;
        }
        for (name, args) in &sig.preds {
            if args.is_empty() {
                writeln!(f, "pred {name}")?;
            } else {
                writeln!(f, "pred {name} : {}", args.join(" "))?;
            }
        }
        for r in &self.rules {
            writeln!(f, "rule {r}")?;
        }
        for a in &self.axioms {
            writeln!(f, "axiom {a}")?;
        }
        let mut flags = Vec::new();
        if self.claimed_terminating {
            flags.push("terminating");
        }
        if self.claimed_confluent {
            flags.push("confluent");
        }
        if !flags.is_empty() {
            writeln!(f, "flags {}", flags.join(" "))?;
        }
        Ok(())
    }
}
