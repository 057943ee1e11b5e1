//! JSON algebra documents.

use super::{
    AlgebraError, AlgebraTables, OrderSpec, Relation, TruthValueAlgebra, MAX_FILE_CARRIER,
};
use crate::Subset;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An algebra together with the optional order and free-form note stored
/// alongside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDocument {
    pub algebra: TruthValueAlgebra,
    pub order: Option<OrderSpec>,
    pub note: Option<String>,
}

impl AlgebraDocument {
    pub fn new(algebra: TruthValueAlgebra) -> Self {
        AlgebraDocument {
            algebra,
            order: None,
            note: None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    carrier: Vec<String>,
    positives: Vec<String>,
    top: String,
    bot: String,
    imp: Vec<Vec<String>>,
    and: Vec<Vec<String>>,
    or: Vec<Vec<String>>,
    full: bool,
    forall: Vec<(Vec<String>, String)>,
    exists: Vec<(Vec<String>, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

pub fn parse_algebra(text: &str) -> Result<AlgebraDocument, AlgebraError> {
    let raw: RawAlgebra =
        serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
    let n = raw.carrier.len();
    if n > MAX_FILE_CARRIER {
        return Err(AlgebraError::CarrierTooLarge {
            size: n,
            max: MAX_FILE_CARRIER,
        });
    }
    let names = raw.carrier.clone();
    let idx = |name: &str| -> Result<usize, AlgebraError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    };
    let set = |list: &[String]| -> Result<Subset, AlgebraError> {
        let mut s = Subset::EMPTY;
        for name in list {
            let i = idx(name)?;
            if s.contains(i) {
                return Err(AlgebraError::Parse(format!("`{name}` repeated in a subset")));
            }
            s = s.with(i);
        }
        Ok(s)
    };
    let matrix = |table: &'static str, rows: &[Vec<String>]| -> Result<Vec<usize>, AlgebraError> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::TableShape {
                table,
                expected: n * n,
                got: rows.iter().map(Vec::len).sum(),
            });
        }
        rows.iter().flatten().map(|v| idx(v)).collect()
    };
    let quant = |table: &'static str,
                 entries: &[(Vec<String>, String)]|
     -> Result<BTreeMap<Subset, usize>, AlgebraError> {
        let mut out = BTreeMap::new();
        for (members, value) in entries {
            let s = set(members)?;
            if out.insert(s, idx(value)?).is_some() {
                return Err(AlgebraError::DuplicateQuantifierEntry {
                    table,
                    subset: super::subset_label(&names, s),
                });
            }
        }
        Ok(out)
    };
    let algebra = TruthValueAlgebra::new(AlgebraTables {
        names: names.clone(),
        positives: set(&raw.positives)?,
        top: idx(&raw.top)?,
        bot: idx(&raw.bot)?,
        imp: matrix("imp", &raw.imp)?,
        and: matrix("and", &raw.and)?,
        or: matrix("or", &raw.or)?,
        full: raw.full,
        forall: quant("forall", &raw.forall)?,
        exists: quant("exists", &raw.exists)?,
    })?;
    let order = match &raw.order {
        None => None,
        Some(pairs) => {
            let pairs = pairs
                .iter()
                .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            Some(OrderSpec::new(Relation::reflexive_from_pairs(n, &pairs)))
        }
    };
    Ok(AlgebraDocument {
        algebra,
        order,
        note: raw.note,
    })
}

/// Pretty-printed JSON. Quantifier entries are listed in mask order and
/// order pairs lexicographically, without the reflexive ones.
pub fn render_algebra(doc: &AlgebraDocument) -> String {
    let alg = &doc.algebra;
    let n = alg.size();
    let nm = |a: usize| alg.name(a).to_string();
    let members = |s: Subset| s.iter().map(nm).collect::<Vec<_>>();
    let matrix = |f: &dyn Fn(usize, usize) -> usize| {
        (0..n)
            .map(|a| (0..n).map(|b| nm(f(a, b))).collect())
            .collect()
    };
    let quant = |t: &BTreeMap<Subset, usize>| {
        t.iter()
            .map(|(&s, &v)| (members(s), nm(v)))
            .collect::<Vec<_>>()
    };
    let raw = RawAlgebra {
        carrier: alg.names().to_vec(),
        positives: members(alg.positives()),
        top: nm(alg.top()),
        bot: nm(alg.bot()),
        imp: matrix(&|a, b| alg.imp(a, b)),
        and: matrix(&|a, b| alg.and(a, b)),
        or: matrix(&|a, b| alg.or(a, b)),
        full: alg.is_full(),
        forall: quant(alg.forall_table()),
        exists: quant(alg.exists_table()),
        order: doc
            .order
            .as_ref()
            .map(|o| o.strict_pairs().into_iter().map(|(a, b)| (nm(a), nm(b))).collect()),
        note: doc.note.clone(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("algebra documents serialize");
    text.push('\n');
    text
}
