//! Completion of a finite algebra into the algebra of its closed sets.

use crate::algebra::{
    check_complete, check_morphism, check_ordered, check_tva, derive_preorder, is_heyting,
    AlgebraError, AlgebraMorphism, AlgebraTables, DerivedPreorder, HeytingVerdict, MorphismKind,
    OrderSpec, TruthValueAlgebra, MAX_CARRIER,
};
use crate::{CheckReport, Subset};
use std::collections::BTreeMap;

/// `u(X)`: elements above every member of `X` in the derived pre-order.
pub fn upper_set(alg: &TruthValueAlgebra, x: Subset) -> Subset {
    derive_preorder(alg).upper_bounds(x)
}

/// `l(X)`: elements below every member of `X` in the derived pre-order.
pub fn lower_set(alg: &TruthValueAlgebra, x: Subset) -> Subset {
    derive_preorder(alg).lower_bounds(x)
}

/// `C(X) = l(u(X))`.
pub fn closure(alg: &TruthValueAlgebra, x: Subset) -> Subset {
    close(&derive_preorder(alg), x)
}

fn close(le: &DerivedPreorder, x: Subset) -> Subset {
    le.lower_bounds(le.upper_bounds(x))
}

/// Whether `C(X) = X`.
pub fn is_closed(alg: &TruthValueAlgebra, x: Subset) -> bool {
    closure(alg, x) == x
}

/// The algebra of closed subsets of a base algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSetAlgebra {
    pub base: TruthValueAlgebra,
    /// Closed sets, ordered by size and then by mask. Element `i` of
    /// `algebra` is `closed_sets[i]`.
    pub closed_sets: Vec<Subset>,
    pub algebra: TruthValueAlgebra,
    /// Inclusion between closed sets.
    pub order: OrderSpec,
}

impl ClosedSetAlgebra {
    pub fn index_of(&self, set: Subset) -> Option<usize> {
        self.closed_sets.iter().position(|&s| s == set)
    }
}

/// Results of re-checking a completion after it is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionChecks {
    pub closed: CheckReport,
    pub tva: CheckReport,
    pub heyting: HeytingVerdict,
    pub ordered: CheckReport,
    pub complete: CheckReport,
    pub adjunction: CheckReport,
    pub embedding_pseudo_heyting: CheckReport,
    pub embedding_truth_values: CheckReport,
}

impl CompletionChecks {
    pub fn all_passed(&self) -> bool {
        self.closed.passed()
            && self.tva.passed()
            && self.heyting.is_heyting()
            && self.ordered.passed()
            && self.complete.passed()
            && self.adjunction.passed()
            && self.embedding_pseudo_heyting.passed()
            && self.embedding_truth_values.passed()
    }
}

/// Builds the full algebra of closed sets and the map `a ↦ C({a})`.
///
/// Implication is the intersection of `C({x ⇒̃ y})` over all `x, y` with
/// `C({x}) ⊆ X` and `Y ⊆ C({y})`, with an empty intersection giving the
/// whole carrier. Conjunction and `∀` are intersections, disjunction and `∃`
/// the closure of unions. The only positive element is `C({⊤̃})`.
pub fn complete_algebra(
    alg: &TruthValueAlgebra,
) -> Result<(ClosedSetAlgebra, AlgebraMorphism), AlgebraError> {
    let n = alg.size();
    let le = derive_preorder(alg);
    let mut closed: Vec<Subset> = Subset::all(n).map(|x| close(&le, x)).collect();
    closed.sort_by_key(|s| (s.len(), s.0));
    closed.dedup();
    let k = closed.len();
    if k > MAX_CARRIER {
        return Err(AlgebraError::CarrierTooLarge {
            size: k,
            max: MAX_CARRIER,
        });
    }
    let index: BTreeMap<Subset, usize> = closed.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let id = |s: Subset| -> usize {
        *index
            .get(&s)
            .expect("operations on closed sets yield closed sets")
    };
    let single: Vec<Subset> = (0..n).map(|a| close(&le, Subset::singleton(a))).collect();
    let whole = alg.carrier();

    let imp_sets = |x: Subset, y: Subset| -> Subset {
        let mut acc = whole;
        for a in 0..n {
            if !single[a].is_subset_of(x) {
                continue;
            }
            for b in 0..n {
                if y.is_subset_of(single[b]) {
                    acc = acc.intersection(single[alg.imp(a, b)]);
                }
            }
        }
        acc
    };
    let table = |f: &dyn Fn(Subset, Subset) -> Subset| -> Vec<usize> {
        (0..k * k).map(|i| id(f(closed[i / k], closed[i % k]))).collect()
    };
    let imp = table(&|x, y| imp_sets(x, y));
    let and = table(&|x, y| x.intersection(y));
    let or = table(&|x, y| close(&le, x.union(y)));

    let members = |s: Subset| s.iter().map(|i| closed[i]);
    let forall = Subset::all(k)
        .map(|s| (s, id(members(s).fold(whole, Subset::intersection))))
        .collect();
    let exists = Subset::all(k)
        .map(|s| {
            let union = members(s).fold(Subset::EMPTY, Subset::union);
            (s, id(close(&le, union)))
        })
        .collect();

    let top = id(single[alg.top()]);
    let algebra = TruthValueAlgebra::new(AlgebraTables {
        names: closed.iter().map(|&s| alg.subset_name(s)).collect(),
        positives: Subset::singleton(top),
        top,
        bot: id(single[alg.bot()]),
        imp,
        and,
        or,
        full: true,
        forall,
        exists,
    })?;
    let map = single.iter().map(|&s| id(s)).collect();
    let embedding = AlgebraMorphism::new(alg.clone(), algebra.clone(), map)?;
    let order = OrderSpec::inclusion(&closed);
    Ok((
        ClosedSetAlgebra {
            base: alg.clone(),
            closed_sets: closed,
            algebra,
            order,
        },
        embedding,
    ))
}

/// Re-checks everything a completion is supposed to satisfy.
pub fn verify_completion(c: &ClosedSetAlgebra, embedding: &AlgebraMorphism) -> CompletionChecks {
    let mut closed = CheckReport::new();
    for &s in &c.closed_sets {
        if !is_closed(&c.base, s) {
            closed.fail("closed", vec![c.base.subset_name(s)]);
        }
    }
    let alg = &c.algebra;
    let k = alg.size();
    let mut adjunction = CheckReport::new();
    for x in 0..k {
        for a in 0..k {
            for b in 0..k {
                let left = c.closed_sets[x].is_subset_of(c.closed_sets[alg.imp(a, b)]);
                let right = c.closed_sets[alg.and(x, a)].is_subset_of(c.closed_sets[b]);
                if left != right {
                    adjunction.fail(
                        "adjunction",
                        vec![alg.name(x).into(), alg.name(a).into(), alg.name(b).into()],
                    );
                }
            }
        }
    }
    CompletionChecks {
        closed,
        tva: check_tva(alg),
        heyting: is_heyting(alg),
        ordered: check_ordered(alg, &c.order),
        complete: check_complete(alg, &c.order).0,
        adjunction,
        embedding_pseudo_heyting: check_morphism(embedding, MorphismKind::PseudoHeyting),
        embedding_truth_values: check_morphism(embedding, MorphismKind::TruthValues),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{boolean, find_isomorphism, t1, t2};

    fn s(v: &[usize]) -> Subset {
        Subset::from_elems(v.iter().copied())
    }

    #[test]
    fn upper_lower_closure_examples() {
        assert_eq!(upper_set(&boolean(), s(&[0])), s(&[0, 1]));
        assert_eq!(upper_set(&t1(), Subset::EMPTY), s(&[0, 1, 2]));
        assert_eq!(upper_set(&t1(), s(&[1])), s(&[1, 2]));
        assert_eq!(lower_set(&boolean(), s(&[1])), s(&[0, 1]));
        assert_eq!(lower_set(&t1(), s(&[1, 2])), s(&[0, 1, 2]));
        assert_eq!(closure(&t1(), s(&[1])), s(&[0, 1, 2]));
        assert_eq!(closure(&boolean(), s(&[0])), s(&[0]));
    }

    #[test]
    fn completions_of_the_small_algebras() {
        for base in [boolean(), t1(), t2()] {
            let (c, m) = complete_algebra(&base).unwrap();
            assert_eq!(c.closed_sets.len(), 2);
            assert_eq!(c.closed_sets[0], s(&[0]));
            assert_eq!(c.closed_sets[1], base.carrier());
            assert!(find_isomorphism(&c.algebra, &boolean()).is_some());
            assert_eq!(m.is_injective(), base.size() == 2);
            let checks = verify_completion(&c, &m);
            assert!(checks.all_passed(), "{checks:?}");
        }
    }
}
