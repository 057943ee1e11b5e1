//! The small algebras used throughout the examples and tests.

use super::{AlgebraTables, TruthValueAlgebra};
use crate::Subset;
use std::collections::BTreeMap;

/// The two-element boolean algebra `{0, 1}` with `B⁺ = {1}`.
pub fn boolean() -> TruthValueAlgebra {
    like_bool(&["0", "1"], &[1, 1, 0, 1], |a| a == 1)
}

/// `T1`: carrier `{0, I, 1}`, `B⁺ = {I, 1}`. Every operation but `⇒̃`
/// treats `I` as `1`.
pub fn t1() -> TruthValueAlgebra {
    #[rustfmt::skip]
    let imp = [
        2, 2, 2,
        0, 2, 2,
        0, 1, 1,
    ];
    like_bool(&["0", "I", "1"], &imp, |a| a != 0)
}

/// `T2`: as `T1` with a different implication table.
pub fn t2() -> TruthValueAlgebra {
    #[rustfmt::skip]
    let imp = [
        2, 2, 1,
        0, 2, 1,
        0, 2, 1,
    ];
    like_bool(&["0", "I", "1"], &imp, |a| a != 0)
}

/// A full algebra on `n` elements named `a0, a1, ...` where every element
/// is positive. The operations are arbitrary but fixed.
pub fn trivial(n: usize) -> TruthValueAlgebra {
    let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let table = |f: fn(usize, usize) -> usize| -> Vec<usize> {
        (0..n * n).map(|i| f(i / n, i % n)).collect()
    };
    let pick = |s: Subset| s.iter().next().unwrap_or(0);
    let quant: BTreeMap<Subset, usize> = Subset::all(n).map(|s| (s, pick(s))).collect();
    TruthValueAlgebra::new(AlgebraTables {
        names,
        positives: Subset::full(n),
        top: 0,
        bot: n - 1,
        imp: table(|_, b| b),
        and: table(|a, _| a),
        or: table(|a, b| a.max(b)),
        full: true,
        forall: quant.clone(),
        exists: quant,
    })
    .expect("trivial algebra tables are well formed")
}

/// Builds a full algebra whose carrier is `names`, whose implication is
/// `imp`, and whose other operations are the boolean ones read through
/// `truthy`. Results land on the first element (false) or the last (true),
/// so the last element must be truthy and the first must not.
fn like_bool(
    names: &[&str],
    imp: &[usize],
    truthy: impl Fn(usize) -> bool,
) -> TruthValueAlgebra {
    let n = names.len();
    let (f, t) = (0, n - 1);
    let val = |b: bool| if b { t } else { f };
    let binary = |op: &dyn Fn(bool, bool) -> bool| -> Vec<usize> {
        (0..n * n)
            .map(|i| val(op(truthy(i / n), truthy(i % n))))
            .collect()
    };
    let forall = Subset::all(n)
        .map(|s| (s, val(s.iter().all(&truthy))))
        .collect();
    let exists = Subset::all(n)
        .map(|s| (s, val(s.iter().any(&truthy))))
        .collect();
    TruthValueAlgebra::new(AlgebraTables {
        names: names.iter().map(|s| s.to_string()).collect(),
        positives: Subset::from_elems((0..n).filter(|&a| truthy(a))),
        top: t,
        bot: f,
        imp: imp.to_vec(),
        and: binary(&|a, b| a && b),
        or: binary(&|a, b| a || b),
        full: true,
        forall,
        exists,
    })
    .expect("built-in tables are well formed")
}
