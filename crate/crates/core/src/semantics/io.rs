//! Structure files.
//!
//! ```text
//! algebra t1.alg
//! domain nat = 2
//! fun 0 : () -> s0
//! fun S : (s0) -> s1
//! fun S : (s1) -> s1
//! pred P : (s0) -> I
//! pred P : (s1) -> 1
//! ```
//!
//! Every sort needs a `domain` line, every table entry exactly one line.
//! Elements of each sort are named `s0, s1, ...`; truth values by their
//! name in the algebra. `#` starts a comment.

use super::{element_name, BStructure, SemanticsError};
use crate::algebra::TruthValueAlgebra;
use crate::logic::Signature;
use indexmap::IndexMap;
use std::fmt::Write;

fn err(line: usize, msg: impl std::fmt::Display) -> SemanticsError {
    SemanticsError::Parse(format!("line {line}: {msg}"))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// The path given by the `algebra` line, if any.
pub fn structure_algebra_path(text: &str) -> Option<String> {
    lines(text).find_map(|(_, l)| {
        l.strip_prefix("algebra")
            .filter(|rest| rest.starts_with(char::is_whitespace))
            .map(|rest| rest.trim().to_string())
    })
}

fn element(line: usize, s: &str, size: usize) -> Result<usize, SemanticsError> {
    s.strip_prefix('s')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n < size)
        .ok_or_else(|| err(line, format!("`{s}` is not an element of a domain of size {size}")))
}

pub fn parse_structure(
    text: &str,
    sig: &Signature,
    algebra: &TruthValueAlgebra,
) -> Result<BStructure, SemanticsError> {
    let mut domains = IndexMap::new();
    let mut entries = Vec::new();
    for (n, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match kw {
            "algebra" => {}
            "domain" => {
                let (sort, size) = rest
                    .split_once('=')
                    .ok_or_else(|| err(n, "expected `domain <sort> = <size>`"))?;
                let sort = sort.trim();
                if !sig.has_sort(sort) {
                    return Err(err(n, format!("unknown sort `{sort}`")));
                }
                let size: usize = size
                    .trim()
                    .parse()
                    .map_err(|_| err(n, format!("bad domain size `{}`", size.trim())))?;
                if domains.insert(sort.to_string(), size).is_some() {
                    return Err(err(n, format!("second domain line for `{sort}`")));
                }
            }
            "fun" | "pred" => entries.push((n, kw == "fun", rest)),
            other => return Err(err(n, format!("unknown line kind `{other}`"))),
        }
    }
    if let Some(s) = sig.sorts.iter().find(|s| !domains.contains_key(*s)) {
        return Err(SemanticsError::MissingDomain(s.clone()));
    }
    let mut st = BStructure::constant(sig, algebra, &domains, 0)
        .map_err(|e| SemanticsError::Parse(e.to_string()))?;
    let mut seen_f: Vec<Vec<bool>> = st.funs.iter().map(|t| vec![false; t.len()]).collect();
    let mut seen_p: Vec<Vec<bool>> = st.preds.iter().map(|t| vec![false; t.len()]).collect();
    for (n, is_fun, rest) in entries {
        let (name, rest) = rest
            .split_once(':')
            .ok_or_else(|| err(n, "expected `<name> : (<elements>) -> <value>`"))?;
        let name = name.trim();
        let (tuple, value) = rest
            .split_once("->")
            .ok_or_else(|| err(n, "missing `->`"))?;
        let tuple = tuple.trim();
        let inner = tuple
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err(n, "the arguments must be in parentheses"))?;
        let args: Vec<&str> = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        let value = value.trim();
        let (sorts, idx) = if is_fun {
            let i = sig
                .funs
                .get_index_of(name)
                .ok_or_else(|| err(n, format!("unknown function symbol `{name}`")))?;
            (sig.funs[i].args.clone(), i)
        } else {
            let i = sig
                .preds
                .get_index_of(name)
                .ok_or_else(|| err(n, format!("unknown predicate symbol `{name}`")))?;
            (sig.preds[i].clone(), i)
        };
        if args.len() != sorts.len() {
            return Err(err(
                n,
                format!("`{name}` takes {} arguments, got {}", sorts.len(), args.len()),
            ));
        }
        let tuple: Vec<usize> = args
            .iter()
            .zip(&sorts)
            .map(|(a, s)| element(n, a, domains[s.as_str()]))
            .collect::<Result<_, _>>()?;
        let pos = st.tuple_index(&sorts, &tuple);
        let table = if is_fun {
            let result = &sig.funs[idx].result;
            st.funs[idx][pos] = element(n, value, domains[result.as_str()])?;
            &mut seen_f
        } else {
            st.preds[idx][pos] = algebra
                .index_of(value)
                .ok_or_else(|| err(n, format!("unknown truth value `{value}`")))?;
            &mut seen_p
        };
        if std::mem::replace(&mut table[idx][pos], true) {
            return Err(err(n, format!("second entry for `{name}` at `{tuple}`", tuple = inner.trim())));
        }
    }
    for (kind, seen, names) in [
        ("function", &seen_f, sig.funs.keys().collect::<Vec<_>>()),
        ("predicate", &seen_p, sig.preds.keys().collect::<Vec<_>>()),
    ] {
        for (i, row) in seen.iter().enumerate() {
            if let Some(pos) = row.iter().position(|s| !s) {
                let sorts = if kind == "function" {
                    &sig.funs[i].args
                } else {
                    &sig.preds[i]
                };
                let tuple = st.tuple_at(sorts, pos);
                return Err(SemanticsError::Parse(format!(
                    "{kind} `{}` has no entry for ({})",
                    names[i],
                    tuple.iter().map(|&e| element_name(e)).collect::<Vec<_>>().join(", ")
                )));
            }
        }
    }
    Ok(st)
}

/// Writes a structure; the output parses back to the same structure.
pub fn render_structure(st: &BStructure, algebra_path: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(p) = algebra_path {
        writeln!(out, "algebra {p}").unwrap();
    }
    for (s, n) in &st.domains {
        writeln!(out, "domain {s} = {n}").unwrap();
    }
    let tuple = |sorts: &[String], pos: usize| {
        st.tuple_at(sorts, pos)
            .into_iter()
            .map(element_name)
            .collect::<Vec<_>>()
            .join(", ")
    };
    for (i, (f, decl)) in st.signature.funs.iter().enumerate() {
        for (pos, &v) in st.funs[i].iter().enumerate() {
            writeln!(out, "fun {f} : ({}) -> {}", tuple(&decl.args, pos), element_name(v)).unwrap();
        }
    }
    for (i, (p, sorts)) in st.signature.preds.iter().enumerate() {
        for (pos, &v) in st.preds[i].iter().enumerate() {
            writeln!(out, "pred {p} : ({}) -> {}", tuple(sorts, pos), st.algebra.name(v)).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::t1;
    use crate::logic::parse_theory;

    const THEORY: &str = "sort nat\nfun 0 : -> nat\nfun S : nat -> nat\npred P : nat\npred Q";

    #[test]
    fn round_trip() {
        let th = parse_theory(THEORY).unwrap();
        let text = "algebra t1.alg\ndomain nat = 2\nfun 0 : () -> s0\nfun S : (s0) -> s1\n\
                    fun S : (s1) -> s1\npred P : (s0) -> I\npred P : (s1) -> 1 # comment\n\
                    pred Q : () -> 0\n";
        assert_eq!(structure_algebra_path(text).as_deref(), Some("t1.alg"));
        let st = parse_structure(text, &th.signature, &t1()).unwrap();
        assert_eq!(st.funs, vec![vec![0], vec![1, 1]]);
        assert_eq!(st.preds, vec![vec![1, 2], vec![0]]);
        let again = render_structure(&st, Some("t1.alg"));
        assert_eq!(parse_structure(&again, &th.signature, &t1()).unwrap(), st);
    }

    #[test]
    fn missing_and_duplicate_entries() {
        let th = parse_theory(THEORY).unwrap();
        let missing = "domain nat = 1\nfun 0 : () -> s0\nfun S : (s0) -> s0\npred P : (s0) -> I\n";
        assert!(parse_structure(missing, &th.signature, &t1()).is_err());
        let dup = format!("{missing}pred Q : () -> 1\npred Q : () -> 0\n");
        assert!(parse_structure(&dup, &th.signature, &t1()).is_err());
        let out_of_range = "domain nat = 1\nfun 0 : () -> s1\n";
        assert!(parse_structure(out_of_range, &th.signature, &t1()).is_err());
    }
}
