//! Lexer and parser for theory files and the formula/term syntax shared
//! with proof files.

use super::syntax::{FunDecl, Formula, RewriteRule, Signature, Term, Theory, Var};
use indexmap::IndexMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Dot,
    Imp,
    And,
    Or,
    Rewrite,
    Arrow,
    Bar,
    At,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::Dot => "`.`",
            Tok::Imp => "`=>`",
            Tok::And => "`/\\`",
            Tok::Or => "`\\/`",
            Tok::Rewrite => "`-->`",
            Tok::Arrow => "`->`",
            Tok::Bar => "`|`",
            Tok::At => "`@`",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes `text`, numbering lines from `first_line`. `#` starts a
/// comment running to the end of the line.
pub(crate) fn lex(text: &str, first_line: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, first_line, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if rest.starts_with("-->") {
            (Tok::Rewrite, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("=>") {
            (Tok::Imp, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                ':' => (Tok::Colon, 1),
                '.' => (Tok::Dot, 1),
                '|' => (Tok::Bar, 1),
                '@' => (Tok::At, 1),
                c if is_ident_char(c) => {
                    let start = i;
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    out.push(Spanned {
                        tok: Tok::Ident(word),
                        line,
                        col,
                    });
                    col += i - start;
                    continue;
                }
                other => {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push(Spanned { tok, line, col });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

pub(crate) const KEYWORDS: &[&str] = &[
    "forall", "exists", "top", "bot", "lam", "Lam", "fst", "snd", "inl", "inr", "case", "of",
    "unit", "exfalso", "pair", "wit", "dest", "as", "sort", "fun", "pred", "rule", "axiom",
    "flags",
];

/// How identifiers that are neither bound nor function symbols are read.
#[derive(Debug, Clone)]
pub(crate) enum FreeVars {
    /// They are errors.
    Forbidden,
    /// They become free variables whose sort is taken from their position.
    Infer(IndexMap<String, String>),
}

pub(crate) struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    pub sig: &'a Signature,
    /// Bound term variables, innermost last.
    pub scope: Vec<Var>,
    pub free: FreeVars,
}

impl<'a> Parser<'a> {
    pub fn new(toks: Vec<Spanned>, sig: &'a Signature) -> Self {
        Parser {
            toks,
            pos: 0,
            sig,
            scope: Vec::new(),
            free: FreeVars::Forbidden,
        }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    pub fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(w) => {
                self.next();
                Ok(w)
            }
            other => Err(self.error(format!("expected an identifier, found {other}"))),
        }
    }

    /// An identifier usable as a variable name.
    pub fn binder_name(&mut self) -> Result<String, ParseError> {
        let name = self.ident()?;
        if KEYWORDS.contains(&name.as_str()) || self.sig.is_symbol(&name) {
            return Err(self.error(format!("`{name}` cannot be used as a variable")));
        }
        Ok(name)
    }

    pub fn sort_name(&mut self) -> Result<String, ParseError> {
        let s = self.ident()?;
        if !self.sig.has_sort(&s) {
            return Err(self.error(format!("unknown sort `{s}`")));
        }
        Ok(s)
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn lookup(&self, name: &str) -> Option<&Var> {
        self.scope.iter().rev().find(|v| v.name == name)
    }

    /// Parses a term. With `expected` set, the term must have that sort.
    pub fn term(&mut self, expected: Option<&str>) -> Result<Term, ParseError> {
        let name = self.ident()?;
        let t = if let Some(decl) = self.sig.funs.get(&name).cloned() {
            let mut args = Vec::new();
            if self.eat(&Tok::LParen) {
                if *self.peek() != Tok::RParen {
                    loop {
                        let i = args.len();
                        let s = decl.args.get(i).map(String::as_str);
                        if s.is_none() {
                            return Err(self.error(format!("too many arguments for `{name}`")));
                        }
                        args.push(self.term(s)?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen)?;
            }
            if args.len() != decl.args.len() {
                return Err(self.error(format!(
                    "`{name}` expects {} arguments, got {}",
                    decl.args.len(),
                    args.len()
                )));
            }
            if let Some(e) = expected {
                if decl.result != e {
                    return Err(self.error(format!(
                        "`{name}` has sort {} but {e} is expected",
                        decl.result
                    )));
                }
            }
            Term::App(name, args)
        } else if let Some(v) = self.lookup(&name).cloned() {
            if let Some(e) = expected {
                if v.sort != e {
                    return Err(self.error(format!(
                        "`{name}` has sort {} but {e} is expected",
                        v.sort
                    )));
                }
            }
            Term::Var(v)
        } else {
            if KEYWORDS.contains(&name.as_str()) || self.sig.preds.contains_key(&name) {
                return Err(self.error(format!("`{name}` cannot appear in a term")));
            }
            let sort = match (&mut self.free, expected) {
                (FreeVars::Forbidden, _) => {
                    return Err(self.error(format!("unbound variable `{name}`")));
                }
                (FreeVars::Infer(_), None) => {
                    return Err(self.error(format!("cannot infer the sort of `{name}`")));
                }
                (FreeVars::Infer(seen), Some(e)) => match seen.get(&name) {
                    Some(s) if s != e => {
                        let msg = format!("`{name}` is used with sorts {s} and {e}");
                        return Err(self.error(msg));
                    }
                    Some(s) => s.clone(),
                    None => {
                        seen.insert(name.clone(), e.to_string());
                        e.to_string()
                    }
                },
            };
            Term::Var(Var::new(name, sort))
        };
        Ok(t)
    }

    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.primary()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.primary()?);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(w) if w == "top" => {
                self.next();
                Ok(Formula::Top)
            }
            Tok::Ident(w) if w == "bot" => {
                self.next();
                Ok(Formula::Bot)
            }
            Tok::Ident(w) if w == "forall" || w == "exists" => {
                self.next();
                let name = self.binder_name()?;
                self.expect(Tok::Colon)?;
                let sort = self.sort_name()?;
                self.expect(Tok::Dot)?;
                let x = Var::new(name, sort);
                self.scope.push(x.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                Ok(if w == "forall" {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                })
            }
            Tok::Ident(p) => {
                let Some(sorts) = self.sig.preds.get(&p).cloned() else {
                    return Err(self.error(format!("unknown predicate `{p}`")));
                };
                self.next();
                let args = self.args(&p, &sorts)?;
                Ok(Formula::Atom(p, args))
            }
            other => Err(self.error(format!("expected a formula, found {other}"))),
        }
    }

    fn args(&mut self, head: &str, sorts: &[String]) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            if *self.peek() != Tok::RParen {
                loop {
                    let Some(s) = sorts.get(args.len()).cloned() else {
                        return Err(self.error(format!("too many arguments for `{head}`")));
                    };
                    args.push(self.term(Some(&s))?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
        }
        if args.len() != sorts.len() {
            return Err(self.error(format!(
                "`{head}` expects {} arguments, got {}",
                sorts.len(),
                args.len()
            )));
        }
        Ok(args)
    }
}

/// Parses a theory file.
///
/// Each non-blank line is one declaration: `sort s`, `fun f : s1 s2 -> s`
/// (argument sorts may also be separated by commas), `pred P : s1 s2` or
/// `pred P`, `rule lhs --> rhs`, `axiom A`, `flags terminating confluent`.
/// Identifiers in rules that are not function symbols are variables, with
/// sorts inferred from where they occur.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut th = Theory::default();
    for (i, line) in text.lines().enumerate() {
        let toks = lex(line, i + 1)?;
        if toks.len() == 1 {
            continue;
        }
        let sig = th.signature.clone();
        let mut p = Parser::new(toks, &sig);
        let kw = p.ident()?;
        match kw.as_str() {
            "sort" => {
                let s = p.ident()?;
                if sig.has_sort(&s) || KEYWORDS.contains(&s.as_str()) {
                    return Err(p.error(format!("sort `{s}` is already declared")));
                }
                th.signature.sorts.push(s);
            }
            "fun" | "pred" => {
                let name = p.ident()?;
                if sig.is_symbol(&name) || KEYWORDS.contains(&name.as_str()) {
                    return Err(p.error(format!("symbol `{name}` is already declared")));
                }
                let mut sorts = Vec::new();
                if p.eat(&Tok::Colon) {
                    while let Tok::Ident(_) = p.peek() {
                        sorts.push(p.sort_name()?);
                        p.eat(&Tok::Comma);
                    }
                }
                if kw == "fun" {
                    p.expect(Tok::Arrow)?;
                    let result = p.sort_name()?;
                    th.signature.funs.insert(
                        name,
                        FunDecl {
                            args: sorts,
                            result,
                        },
                    );
                } else {
                    th.signature.preds.insert(name, sorts);
                }
            }
            "rule" => {
                p.free = FreeVars::Infer(IndexMap::new());
                let rule = parse_rule(&mut p)?;
                th.rules.push(rule);
            }
            "axiom" => {
                let f = p.formula()?;
                th.axioms.push(f);
            }
            "flags" => {
                while let Tok::Ident(flag) = p.peek().clone() {
                    match flag.as_str() {
                        "terminating" => th.claimed_terminating = true,
                        "confluent" => th.claimed_confluent = true,
                        _ => return Err(p.error(format!("unknown flag `{flag}`"))),
                    }
                    p.next();
                }
            }
            other => {
                return Err(ParseError {
                    line: i + 1,
                    col: 1,
                    message: format!("unknown declaration `{other}`"),
                })
            }
        }
        if !p.at_end() {
            return Err(p.error(format!("unexpected {}", p.peek())));
        }
    }
    th.validate().map_err(|message| ParseError {
        line: 0,
        col: 0,
        message,
    })?;
    Ok(th)
}

fn parse_rule(p: &mut Parser<'_>) -> Result<RewriteRule, ParseError> {
    let head = match p.peek() {
        Tok::Ident(w) => w.clone(),
        other => return Err(p.error(format!("expected a rule, found {other}"))),
    };
    if let Some(decl) = p.sig.funs.get(&head).cloned() {
        let lhs = p.term(Some(&decl.result))?;
        p.expect(Tok::Rewrite)?;
        let lhs_vars = free_names(p);
        let rhs = p.term(Some(&decl.result))?;
        check_rhs_vars(p, &lhs_vars)?;
        Ok(RewriteRule::Term { lhs, rhs })
    } else if p.sig.preds.contains_key(&head) {
        let lhs = p.formula()?;
        let Formula::Atom(pred, args) = lhs else {
            return Err(p.error("the left-hand side of a rule must be atomic"));
        };
        p.expect(Tok::Rewrite)?;
        let lhs_vars = free_names(p);
        let rhs = p.formula()?;
        check_rhs_vars(p, &lhs_vars)?;
        Ok(RewriteRule::Prop { pred, args, rhs })
    } else {
        Err(p.error(format!(
            "`{head}` is not a declared function or predicate symbol"
        )))
    }
}

fn free_names(p: &Parser<'_>) -> Vec<String> {
    match &p.free {
        FreeVars::Infer(m) => m.keys().cloned().collect(),
        FreeVars::Forbidden => Vec::new(),
    }
}

fn check_rhs_vars(p: &Parser<'_>, lhs_vars: &[String]) -> Result<(), ParseError> {
    if let Some(extra) = free_names(p).into_iter().find(|v| !lhs_vars.contains(v)) {
        return Err(p.error(format!(
            "variable `{extra}` does not occur on the left-hand side"
        )));
    }
    Ok(())
}

/// Parses a closed formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(lex(text, 1)?, sig);
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    Ok(f)
}

/// Parses a formula whose free variables get sorts from their positions.
pub fn parse_open_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(lex(text, 1)?, sig);
    p.free = FreeVars::Infer(IndexMap::new());
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    Ok(f)
}

/// Parses a term of sort `sort`, inferring sorts of free variables.
pub fn parse_term(text: &str, sig: &Signature, sort: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(lex(text, 1)?, sig);
    p.free = FreeVars::Infer(IndexMap::new());
    let t = p.term(Some(sort))?;
    if !p.at_end() {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PQR: &str = "pred P\npred Q\npred R\nrule P --> Q => R\n";

    #[test]
    fn proposition_rule() {
        let th = parse_theory(PQR).unwrap();
        assert_eq!(
            th.rules,
            vec![RewriteRule::Prop {
                pred: "P".into(),
                args: vec![],
                rhs: Formula::imp(Formula::prop("Q"), Formula::prop("R")),
            }]
        );
    }

    #[test]
    fn empty_rule_section() {
        let th = parse_theory("# nothing but symbols\nsort s\npred P : s\n").unwrap();
        assert!(th.rules.is_empty());
    }

    #[test]
    fn self_referential_rule() {
        let th = parse_theory("pred P\npred Q\nrule P --> P => Q").unwrap();
        assert_eq!(th.rules[0].to_string(), "P --> P => Q");
    }

    #[test]
    fn sorts_are_inferred_for_rule_variables() {
        let text = "sort nat\nfun 0 : -> nat\nfun s : nat -> nat\npred P : nat\n\
                    rule P(0) --> forall x:nat. P(x)\nrule P(s(y)) --> P(y)\n";
        let th = parse_theory(text).unwrap();
        assert_eq!(th.rules[1].vars(), vec![Var::new("y", "nat")]);
        let printed = th.to_string();
        assert_eq!(parse_theory(&printed).unwrap(), th);
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = parse_theory("pred A\npred B\npred C\n").unwrap().signature;
        let f = parse_formula("A => B => C", &sig).unwrap();
        assert_eq!(
            f,
            Formula::imp(
                Formula::prop("A"),
                Formula::imp(Formula::prop("B"), Formula::prop("C"))
            )
        );
        let g = parse_formula("A \\/ B /\\ C => A", &sig).unwrap();
        assert_eq!(g.to_string(), "A \\/ B /\\ C => A");
        let Formula::Imp(l, _) = g else { panic!() };
        assert!(matches!(*l, Formula::Or(..)));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_theory("pred P\nrule P --> Q").unwrap_err();
        assert_eq!((e.line, e.col), (2, 12));
        let e = parse_theory("pred P\nrule P --> P(").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_theory("sort s\npred P : s\nrule P(x) --> P(y)").unwrap_err();
        assert!(e.message.contains("`y`"), "{e}");
    }
}
