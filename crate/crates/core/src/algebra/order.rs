use super::{AlgebraError, TruthValueAlgebra};
use crate::{CheckReport, Subset};
use std::collections::BTreeMap;
use std::ops::Deref;

/// Carriers larger than this are refused by [`find_complete_order`] unless
/// the caller raises the bound.
pub const DEFAULT_ORDER_SEARCH_BOUND: usize = 6;

/// A binary relation on `{0, .., n-1}` as a boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let bits = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Relation { n, bits }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |a, b| a == b)
    }

    /// The reflexive relation containing `pairs`.
    pub fn reflexive_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = Self::identity(n);
        for &(a, b) in pairs {
            r.set(a, b, true);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, value: bool) {
        self.bits[a * self.n + b] = value;
    }

    /// Related pairs with distinct components, in lexicographic order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n * n)
            .map(|i| (i / n, i % n))
            .filter(|&(a, b)| a != b && self.leq(a, b))
            .collect()
    }

    pub fn non_reflexive_at(&self) -> Option<usize> {
        (0..self.n).find(|&a| !self.leq(a, a))
    }

    pub fn non_antisymmetric_at(&self) -> Option<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.leq(a, b) && self.leq(b, a))
    }

    pub fn non_transitive_at(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_partial_order(&self) -> bool {
        self.non_reflexive_at().is_none()
            && self.non_antisymmetric_at().is_none()
            && self.non_transitive_at().is_none()
    }

    /// Lower bounds of `set` among all elements.
    pub fn lower_bounds(&self, set: Subset) -> Subset {
        Subset::from_elems((0..self.n).filter(|&y| set.iter().all(|x| self.leq(y, x))))
    }

    /// Upper bounds of `set` among all elements.
    pub fn upper_bounds(&self, set: Subset) -> Subset {
        Subset::from_elems((0..self.n).filter(|&y| set.iter().all(|x| self.leq(x, y))))
    }

    /// The element of `set` above every other member, if any.
    pub fn greatest(&self, set: Subset) -> Option<usize> {
        set.iter().find(|&g| set.iter().all(|y| self.leq(y, g)))
    }

    /// The element of `set` below every other member, if any.
    pub fn least(&self, set: Subset) -> Option<usize> {
        set.iter().find(|&l| set.iter().all(|y| self.leq(l, y)))
    }

    /// Set extension used for quantifier monotonicity: every member of `a`
    /// lies below some member of `b`, and every member of `b` lies above
    /// some member of `a`.
    pub fn set_leq(&self, a: Subset, b: Subset) -> bool {
        a.iter().all(|x| b.iter().any(|y| self.leq(x, y)))
            && b.iter().all(|y| a.iter().any(|x| self.leq(x, y)))
    }
}

/// An order `⊑` supplied for an algebra. Whether it really is a partial
/// order is checked by [`check_ordered`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderSpec(Relation);

impl OrderSpec {
    pub fn new(relation: Relation) -> Self {
        OrderSpec(relation)
    }

    /// The total order listing `chain` from bottom to top.
    pub fn chain(chain: &[usize]) -> Self {
        let pos = |a: usize| chain.iter().position(|&x| x == a).unwrap();
        OrderSpec(Relation::from_fn(chain.len(), |a, b| pos(a) <= pos(b)))
    }

    /// Set inclusion on a list of subsets.
    pub fn inclusion(sets: &[Subset]) -> Self {
        OrderSpec(Relation::from_fn(sets.len(), |a, b| {
            sets[a].is_subset_of(sets[b])
        }))
    }

    pub fn relation(&self) -> &Relation {
        &self.0
    }
}

impl Deref for OrderSpec {
    type Target = Relation;
    fn deref(&self) -> &Relation {
        &self.0
    }
}

/// Checks the ordered-algebra conditions.
///
/// Quantifier monotonicity compares sets with [`Relation::set_leq`]. The
/// one-sided extension (only "every member of the smaller set lies below
/// some member of the larger one") would reject `T1` with its chain order,
/// because `{1} ⊑ {0,1}` would then force `∀̃{1} ⊑ ∀̃{0,1}`, that is `1 ⊑ 0`.
pub fn check_ordered(alg: &TruthValueAlgebra, ord: &OrderSpec) -> CheckReport {
    let mut r = CheckReport::new();
    let n = alg.size();
    let nm = |a: usize| alg.name(a).to_string();
    let sn = |s: Subset| alg.subset_name(s);
    if ord.size() != n {
        r.fail_with(
            "order-size",
            vec![],
            Some(format!("order has {} elements, carrier {}", ord.size(), n)),
        );
        return r;
    }
    let le = |a, b| ord.leq(a, b);

    if let Some(a) = ord.non_reflexive_at() {
        r.fail("reflexive", vec![nm(a)]);
    }
    if let Some((a, b)) = ord.non_antisymmetric_at() {
        r.fail("antisymmetric", vec![nm(a), nm(b)]);
    }
    if let Some((a, b, c)) = ord.non_transitive_at() {
        r.fail("transitive", vec![nm(a), nm(b), nm(c)]);
    }
    for a in 0..n {
        for b in 0..n {
            if le(a, b) && alg.is_positive(a) && !alg.is_positive(b) {
                r.fail("upward-closed", vec![nm(a), nm(b)]);
            }
        }
    }
    for a in 0..n {
        if a != alg.top() && le(alg.top(), a) {
            r.fail("top-maximal", vec![nm(a)]);
        }
    }
    // (a, a') with a ⊑ a', then the fixed argument c.
    for a in 0..n {
        for a2 in 0..n {
            if !le(a, a2) {
                continue;
            }
            for c in 0..n {
                let w = || vec![nm(a), nm(a2), nm(c)];
                if !le(alg.and(a, c), alg.and(a2, c)) || !le(alg.and(c, a), alg.and(c, a2)) {
                    r.fail("and-monotone", w());
                }
                if !le(alg.or(a, c), alg.or(a2, c)) || !le(alg.or(c, a), alg.or(c, a2)) {
                    r.fail("or-monotone", w());
                }
                if !le(alg.imp(a2, c), alg.imp(a, c)) {
                    r.fail("imp-left-antitone", w());
                }
                if !le(alg.imp(c, a), alg.imp(c, a2)) {
                    r.fail("imp-right-monotone", w());
                }
            }
        }
    }
    for (name, table) in [
        ("forall-monotone", alg.forall_table()),
        ("exists-monotone", alg.exists_table()),
    ] {
        for (&x, &vx) in table {
            for (&y, &vy) in table {
                if ord.set_leq(x, y) && !le(vx, vy) {
                    r.fail(name, vec![sn(x), sn(y)]);
                }
            }
        }
    }
    r
}

/// Greatest lower and least upper bounds of every subset that has them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    pub glb: BTreeMap<Subset, usize>,
    pub lub: BTreeMap<Subset, usize>,
}

/// Checks that every subset of the carrier has a greatest lower bound (and,
/// as a consequence, a least upper bound) under `ord`.
pub fn check_complete(alg: &TruthValueAlgebra, ord: &OrderSpec) -> (CheckReport, Bounds) {
    let mut r = CheckReport::new();
    let mut bounds = Bounds::default();
    let n = alg.size();
    if ord.size() != n {
        r.fail_with("order-size", vec![], Some("order does not match the carrier"));
        return (r, bounds);
    }
    for set in Subset::all(n) {
        match ord.greatest(ord.lower_bounds(set)) {
            Some(g) => {
                bounds.glb.insert(set, g);
            }
            None => r.fail("glb", vec![alg.subset_name(set)]),
        }
        match ord.least(ord.upper_bounds(set)) {
            Some(l) => {
                bounds.lub.insert(set, l);
            }
            None => r.fail("lub", vec![alg.subset_name(set)]),
        }
    }
    (r, bounds)
}

/// Searches all partial orders on the carrier for one that makes the
/// algebra ordered and complete.
///
/// Orders are generated directly as antisymmetric reflexive relations (each
/// unordered pair is incomparable, ascending or descending) and filtered for
/// transitivity, in a fixed order, so the first hit is reproducible.
pub fn find_complete_order(
    alg: &TruthValueAlgebra,
    bound: usize,
) -> Result<Option<OrderSpec>, AlgebraError> {
    let n = alg.size();
    if n > bound {
        return Err(AlgebraError::SearchTooLarge { size: n, bound });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut digits = vec![0u8; pairs.len()];
    loop {
        let mut rel = Relation::identity(n);
        for (&(a, b), &d) in pairs.iter().zip(&digits) {
            match d {
                1 => rel.set(a, b, true),
                2 => rel.set(b, a, true),
                _ => {}
            }
        }
        if rel.non_transitive_at().is_none() {
            let ord = OrderSpec(rel);
            if check_ordered(alg, &ord).passed() && check_complete(alg, &ord).0.passed() {
                return Ok(Some(ord));
            }
        }
        // Advance the base-3 counter; the last pair varies fastest.
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{boolean, t1, t2};
    use super::*;

    #[test]
    fn t1_chain_is_ordered_and_complete() {
        let ord = OrderSpec::chain(&[0, 1, 2]);
        assert!(check_ordered(&t1(), &ord).passed());
        let (r, b) = check_complete(&t1(), &ord);
        assert!(r.passed());
        assert_eq!(b.glb[&Subset::EMPTY], 2);
        assert_eq!(b.lub[&Subset::EMPTY], 0);
    }

    #[test]
    fn t2_chain_is_rejected() {
        let r = check_ordered(&t2(), &OrderSpec::chain(&[0, 1, 2]));
        assert!(!r.passed());
    }

    #[test]
    fn reversed_boolean_order_breaks_upward_closure() {
        let r = check_ordered(&boolean(), &OrderSpec::chain(&[1, 0]));
        assert_eq!(r.violation("upward-closed").unwrap().witness, vec!["1", "0"]);
    }

    #[test]
    fn missing_glb_is_reported() {
        // a ⊑ c, b ⊑ c only.
        let ord = OrderSpec::new(Relation::reflexive_from_pairs(3, &[(0, 2), (1, 2)]));
        let alg = super::super::trivial(3);
        let (r, _) = check_complete(&alg, &ord);
        assert!(r.violates("glb"));
        assert!(!ord.greatest(ord.lower_bounds(Subset::from_elems([0, 1]))).is_some());
    }

    #[test]
    fn order_search() {
        assert_eq!(
            find_complete_order(&t1(), DEFAULT_ORDER_SEARCH_BOUND).unwrap(),
            Some(OrderSpec::chain(&[0, 1, 2]))
        );
        assert_eq!(find_complete_order(&t2(), DEFAULT_ORDER_SEARCH_BOUND).unwrap(), None);
        assert_eq!(
            find_complete_order(&boolean(), DEFAULT_ORDER_SEARCH_BOUND).unwrap(),
            Some(OrderSpec::chain(&[0, 1]))
        );
        assert!(find_complete_order(&t1(), 2).is_err());
    }
}
