use super::{Relation, TruthValueAlgebra};
use crate::{CheckReport, Subset};
use std::ops::Deref;

/// Checks the seventeen closure conditions on `B⁺`.
///
/// Every condition is examined; each failing one is reported with the first
/// witness in enumeration order (elements in carrier order, subsets in mask
/// order, witness components left to right). Condition 12 is vacuous for
/// full algebras. Conditions 14 and 17 are only evaluated where the implied
/// set lies in the universal domain; when it does not, condition 12 already
/// fails.
pub fn check_tva(alg: &TruthValueAlgebra) -> CheckReport {
    let mut r = CheckReport::new();
    let n = alg.size();
    let pos = |a: usize| alg.is_positive(a);
    let imp = |a, b| alg.imp(a, b);
    let nm = |a: usize| alg.name(a).to_string();
    let sn = |s: Subset| alg.subset_name(s);

    for a in 0..n {
        for b in 0..n {
            if pos(imp(a, b)) && pos(a) && !pos(b) {
                r.fail("1", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !pos(imp(a, imp(b, a))) {
                r.fail("2", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = imp(a, imp(b, c));
                let rhs = imp(imp(a, b), imp(a, c));
                if !pos(imp(lhs, rhs)) {
                    r.fail("3", vec![nm(a), nm(b), nm(c)]);
                }
            }
        }
    }
    if !pos(alg.top()) {
        r.fail("4", vec![nm(alg.top())]);
    }
    for a in 0..n {
        if !pos(imp(alg.bot(), a)) {
            r.fail("5", vec![nm(a)]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !pos(imp(a, imp(b, alg.and(a, b)))) {
                r.fail("6", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !pos(imp(alg.and(a, b), a)) {
                r.fail("7", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !pos(imp(alg.and(a, b), b)) {
                r.fail("8", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !pos(imp(a, alg.or(a, b))) {
                r.fail("9", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !pos(imp(b, alg.or(a, b))) {
                r.fail("10", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = imp(alg.or(a, b), imp(imp(a, c), imp(imp(b, c), c)));
                if !pos(v) {
                    r.fail("11", vec![nm(a), nm(b), nm(c)]);
                }
            }
        }
    }
    if !alg.is_full() {
        for a in 0..n {
            for set in alg.forall_domain() {
                let image = alg.imp_left(a, set);
                if alg.forall(image).is_none() {
                    r.fail_with(
                        "12",
                        vec![nm(a), sn(set)],
                        Some(format!("a ⇒ A = {} is not in the universal domain", sn(image))),
                    );
                }
            }
        }
        for set in alg.exists_domain() {
            for a in 0..n {
                let image = alg.imp_right(set, a);
                if alg.forall(image).is_none() {
                    r.fail_with(
                        "12",
                        vec![sn(set), nm(a)],
                        Some(format!("E ⇒ a = {} is not in the universal domain", sn(image))),
                    );
                }
            }
        }
    }
    for (&set, &v) in alg.forall_table() {
        if set.is_subset_of(alg.positives()) && !pos(v) {
            r.fail("13", vec![sn(set)]);
        }
    }
    for a in 0..n {
        for (&set, &all) in alg.forall_table() {
            if let Some(lhs) = alg.forall(alg.imp_left(a, set)) {
                if !pos(imp(lhs, imp(a, all))) {
                    r.fail("14", vec![nm(a), sn(set)]);
                }
            }
        }
    }
    for (&set, &all) in alg.forall_table() {
        for a in set.iter() {
            if !pos(imp(all, a)) {
                r.fail("15", vec![sn(set), nm(a)]);
            }
        }
    }
    for (&set, &ex) in alg.exists_table() {
        for a in set.iter() {
            if !pos(imp(a, ex)) {
                r.fail("16", vec![sn(set), nm(a)]);
            }
        }
    }
    for (&set, &ex) in alg.exists_table() {
        for a in 0..n {
            if let Some(all) = alg.forall(alg.imp_right(set, a)) {
                if !pos(imp(ex, imp(all, a))) {
                    r.fail("17", vec![sn(set), nm(a)]);
                }
            }
        }
    }
    r
}

/// The pre-order `a ≤ b ⟺ a ⇒̃ b ∈ B⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedPreorder(Relation);

impl Deref for DerivedPreorder {
    type Target = Relation;
    fn deref(&self) -> &Relation {
        &self.0
    }
}

impl DerivedPreorder {
    pub fn relation(&self) -> &Relation {
        &self.0
    }
}

pub fn derive_preorder(alg: &TruthValueAlgebra) -> DerivedPreorder {
    let n = alg.size();
    DerivedPreorder(Relation::from_fn(n, |a, b| alg.is_positive(alg.imp(a, b))))
}

/// Checks the pseudo-Heyting laws for `rel`, plus the requirement that the
/// algebra's positives are exactly `{x | ⊤̃ ≤ x}` (reported as condition
/// `positives`). Without that clause the laws alone say nothing about
/// `B⁺`; see [`check_pseudo_heyting_laws`].
pub fn check_pseudo_heyting(alg: &TruthValueAlgebra, rel: &Relation) -> CheckReport {
    let mut r = check_pseudo_heyting_laws(alg, rel);
    let n = alg.size();
    for x in 0..n {
        if alg.is_positive(x) != rel.leq(alg.top(), x) {
            r.fail_with(
                "positives",
                vec![alg.name(x).to_string()],
                Some("B⁺ differs from the set of elements above ⊤"),
            );
        }
    }
    r
}

/// Checks only the order-theoretic laws of a pseudo-Heyting algebra.
pub fn check_pseudo_heyting_laws(alg: &TruthValueAlgebra, rel: &Relation) -> CheckReport {
    let mut r = CheckReport::new();
    let n = alg.size();
    let le = |a, b| rel.leq(a, b);
    let nm = |a: usize| alg.name(a).to_string();
    let sn = |s: Subset| alg.subset_name(s);

    for a in 0..n {
        if !le(a, a) {
            r.fail("reflexive", vec![nm(a)]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(a, b) && le(b, c) && !le(a, c) {
                    r.fail("transitive", vec![nm(a), nm(b), nm(c)]);
                }
            }
        }
    }
    for a in 0..n {
        if !le(a, alg.top()) {
            r.fail("top-maximum", vec![nm(a)]);
        }
    }
    for a in 0..n {
        if !le(alg.bot(), a) {
            r.fail("bot-minimum", vec![nm(a)]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let and = alg.and(a, b);
            if !le(and, a) {
                r.fail("and-lower-left", vec![nm(a), nm(b)]);
            }
            if !le(and, b) {
                r.fail("and-lower-right", vec![nm(a), nm(b)]);
            }
            let or = alg.or(a, b);
            if !le(a, or) {
                r.fail("or-upper-left", vec![nm(a), nm(b)]);
            }
            if !le(b, or) {
                r.fail("or-upper-right", vec![nm(a), nm(b)]);
            }
            for c in 0..n {
                if le(c, a) && le(c, b) && !le(c, and) {
                    r.fail("and-greatest", vec![nm(a), nm(b), nm(c)]);
                }
                if le(a, c) && le(b, c) && !le(or, c) {
                    r.fail("or-least", vec![nm(a), nm(b), nm(c)]);
                }
            }
        }
    }
    if !alg.is_full() {
        for a in 0..n {
            for set in alg.forall_domain() {
                if alg.forall(alg.imp_left(a, set)).is_none() {
                    r.fail("closure", vec![nm(a), sn(set)]);
                }
            }
        }
        for set in alg.exists_domain() {
            for a in 0..n {
                if alg.forall(alg.imp_right(set, a)).is_none() {
                    r.fail("closure", vec![sn(set), nm(a)]);
                }
            }
        }
    }
    for (&set, &all) in alg.forall_table() {
        for a in set.iter() {
            if !le(all, a) {
                r.fail("forall-lower", vec![sn(set), nm(a)]);
            }
        }
        for b in 0..n {
            if set.iter().all(|a| le(b, a)) && !le(b, all) {
                r.fail("forall-greatest", vec![sn(set), nm(b)]);
            }
        }
    }
    for (&set, &ex) in alg.exists_table() {
        for a in set.iter() {
            if !le(a, ex) {
                r.fail("exists-upper", vec![sn(set), nm(a)]);
            }
        }
        for b in 0..n {
            if set.iter().all(|a| le(a, b)) && !le(ex, b) {
                r.fail("exists-least", vec![sn(set), nm(b)]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(a, alg.imp(b, c)) != le(alg.and(a, b), c) {
                    r.fail("adjunction", vec![nm(a), nm(b), nm(c)]);
                }
            }
        }
    }
    r
}

/// Result of the antisymmetry test on the derived pre-order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeytingVerdict {
    Heyting,
    /// Distinct `a < b` (carrier order) with `a ≤ b` and `b ≤ a`, the first
    /// such pair found.
    NotHeyting(usize, usize),
}

impl HeytingVerdict {
    pub fn is_heyting(self) -> bool {
        self == HeytingVerdict::Heyting
    }
}

pub fn is_heyting(alg: &TruthValueAlgebra) -> HeytingVerdict {
    let le = derive_preorder(alg);
    let n = alg.size();
    for a in 0..n {
        for b in a + 1..n {
            if le.leq(a, b) && le.leq(b, a) {
                return HeytingVerdict::NotHeyting(a, b);
            }
        }
    }
    HeytingVerdict::Heyting
}
