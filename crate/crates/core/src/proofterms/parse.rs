//! Proof-term syntax and proof files.
//!
//! ```text
//! # the self-application
//! goal Q
//! proof (lam a:P. a a) (lam a:P. a a)
//! ```
//!
//! A proof file has any number of `hyp <name> : <formula>` lines, one
//! `goal <formula>` line and a final `proof` section that runs to the end
//! of the file.

use super::{Proof, ProofError, Sequent};
use crate::logic::parse::{lex, FreeVars, Parser, Tok, KEYWORDS};
use crate::logic::{ParseError, Signature, Var};
use indexmap::IndexMap;

/// A parsed proof file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofFile {
    pub sequent: Sequent,
    pub proof: Proof,
}

/// Parses a closed proof term.
pub fn parse_proof(text: &str, sig: &Signature) -> Result<Proof, ProofError> {
    parse_proof_at(text, 1, sig)
}

fn parse_proof_at(text: &str, first_line: usize, sig: &Signature) -> Result<Proof, ProofError> {
    let mut p = Parser::new(lex(text, first_line)?, sig);
    p.free = FreeVars::Forbidden;
    let proof = proof(&mut p)?;
    if !p.at_end() {
        return Err(p.error(format!("unexpected {} after the proof", p.peek())).into());
    }
    Ok(proof)
}

fn formula_at(text: &str, line: usize, sig: &Signature) -> Result<crate::logic::Formula, ParseError> {
    let mut p = Parser::new(lex(text, line)?, sig);
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.error(format!("unexpected {} after the formula", p.peek())));
    }
    Ok(f)
}

pub fn parse_proof_file(text: &str, sig: &Signature) -> Result<ProofFile, ProofError> {
    let mut hyps = IndexMap::new();
    let mut goal = None;
    let lines: Vec<&str> = text.lines().collect();
    let err = |line: usize, message: String| ParseError {
        line,
        col: 1,
        message,
    };
    for (i, raw) in lines.iter().enumerate() {
        let n = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "hyp" => {
                let (name, f) = rest
                    .split_once(':')
                    .ok_or_else(|| err(n, "expected `hyp <name> : <formula>`".into()))?;
                let name = name.trim();
                if name.is_empty() || KEYWORDS.contains(&name) {
                    return Err(err(n, format!("bad hypothesis name `{name}`")).into());
                }
                let f = formula_at(f, n, sig)?;
                if hyps.insert(name.to_string(), f).is_some() {
                    return Err(err(n, format!("second hypothesis named `{name}`")).into());
                }
            }
            "goal" => {
                if goal.is_some() {
                    return Err(err(n, "second `goal` line".into()).into());
                }
                goal = Some(formula_at(rest, n, sig)?);
            }
            "proof" => {
                let Some(goal) = goal else {
                    return Err(err(n, "the `goal` line must come before the proof".into()).into());
                };
                // the rest of this line after the keyword, then every later line
                let start = raw.find("proof").unwrap() + "proof".len();
                let mut body = raw[start..].to_string();
                for later in &lines[i + 1..] {
                    body.push('\n');
                    body.push_str(later);
                }
                let proof = parse_proof_at(&body, n, sig)?;
                return Ok(ProofFile {
                    sequent: Sequent { hyps, goal },
                    proof,
                });
            }
            other => return Err(err(n, format!("unknown line kind `{other}`")).into()),
        }
    }
    Err(err(lines.len().max(1), "missing `proof` section".into()).into())
}

fn proof(p: &mut Parser) -> Result<Proof, ParseError> {
    let Tok::Ident(w) = p.peek().clone() else {
        return application(p);
    };
    match w.as_str() {
        "lam" => {
            p.next();
            let a = p.binder_name()?;
            p.expect(Tok::Colon)?;
            let ty = p.formula()?;
            p.expect(Tok::Dot)?;
            Ok(Proof::lam(a, ty, proof(p)?))
        }
        "Lam" => {
            p.next();
            let x = Var::new(p.binder_name()?, {
                p.expect(Tok::Colon)?;
                p.sort_name()?
            });
            p.expect(Tok::Dot)?;
            let body = scoped(p, &x, proof)?;
            Ok(Proof::tlam(x, body))
        }
        "case" => {
            p.next();
            let scrutinee = application(p)?;
            expect_word(p, "of")?;
            let a = p.binder_name()?;
            p.expect(Tok::Dot)?;
            let left = proof(p)?;
            p.expect(Tok::Bar)?;
            let b = p.binder_name()?;
            p.expect(Tok::Dot)?;
            let right = proof(p)?;
            Ok(Proof::case(scrutinee, a, left, b, right))
        }
        "dest" => {
            p.next();
            let scrutinee = application(p)?;
            expect_word(p, "as")?;
            let name = p.binder_name()?;
            let sort = if p.eat(&Tok::Colon) {
                p.sort_name()?
            } else if p.sig.sorts.len() == 1 {
                p.sig.sorts[0].clone()
            } else {
                return Err(p.error(format!("give the sort of `{name}` as `{name}:<sort>`")));
            };
            let x = Var::new(name, sort);
            p.expect(Tok::Dot)?;
            let a = p.binder_name()?;
            p.expect(Tok::Dot)?;
            let body = scoped(p, &x, proof)?;
            Ok(Proof::dest(scrutinee, x, a, body))
        }
        _ => application(p),
    }
}

fn scoped(
    p: &mut Parser,
    x: &Var,
    f: impl FnOnce(&mut Parser) -> Result<Proof, ParseError>,
) -> Result<Proof, ParseError> {
    p.scope.push(x.clone());
    let r = f(p);
    p.scope.pop();
    r
}

fn expect_word(p: &mut Parser, word: &str) -> Result<(), ParseError> {
    if p.at_ident(word) {
        p.next();
        Ok(())
    } else {
        Err(p.error(format!("expected `{word}`, found {}", p.peek())))
    }
}

const ATOM_KEYWORDS: &[&str] = &["unit", "pair", "exfalso", "wit", "fst", "snd", "inl", "inr"];

fn at_atom(p: &Parser) -> bool {
    match p.peek() {
        Tok::LParen => true,
        Tok::Ident(w) => ATOM_KEYWORDS.contains(&w.as_str()) || !KEYWORDS.contains(&w.as_str()),
        _ => false,
    }
}

/// Left-associated applications of atoms to proofs (`p q`) and terms
/// (`p @ t`).
fn application(p: &mut Parser) -> Result<Proof, ParseError> {
    if !at_atom(p) {
        return Err(p.error(format!("expected a proof, found {}", p.peek())));
    }
    let mut acc = atom(p)?;
    loop {
        if p.eat(&Tok::At) {
            let t = p.term(None)?;
            acc = Proof::tapp(acc, t);
        } else if at_atom(p) {
            acc = Proof::app(acc, atom(p)?);
        } else {
            return Ok(acc);
        }
    }
}

fn atom(p: &mut Parser) -> Result<Proof, ParseError> {
    if p.eat(&Tok::LParen) {
        let inner = proof(p)?;
        p.expect(Tok::RParen)?;
        return Ok(inner);
    }
    let w = p.ident()?;
    match w.as_str() {
        "unit" => Ok(Proof::Unit),
        "pair" => {
            p.expect(Tok::LParen)?;
            let l = proof(p)?;
            p.expect(Tok::Comma)?;
            let r = proof(p)?;
            p.expect(Tok::RParen)?;
            Ok(Proof::pair(l, r))
        }
        "exfalso" => {
            p.expect(Tok::LParen)?;
            let q = proof(p)?;
            p.expect(Tok::Comma)?;
            let f = p.formula()?;
            p.expect(Tok::RParen)?;
            Ok(Proof::exfalso(q, f))
        }
        "wit" => {
            p.expect(Tok::LParen)?;
            let t = p.term(None)?;
            p.expect(Tok::Comma)?;
            let q = proof(p)?;
            p.expect(Tok::RParen)?;
            Ok(Proof::wit(t, q))
        }
        "fst" => Ok(Proof::fst(atom(p)?)),
        "snd" => Ok(Proof::snd(atom(p)?)),
        "inl" => Ok(Proof::inl(atom(p)?)),
        "inr" => Ok(Proof::inr(atom(p)?)),
        _ => Ok(Proof::Var(w)),
    }
}
