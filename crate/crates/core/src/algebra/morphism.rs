use super::{derive_preorder, subset_label, AlgebraError, AlgebraTables, TruthValueAlgebra};
use crate::{CheckReport, Subset};
use std::collections::BTreeMap;

/// A map between the carriers of two algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism {
    pub source: TruthValueAlgebra,
    pub target: TruthValueAlgebra,
    map: Vec<usize>,
}

impl AlgebraMorphism {
    pub fn new(
        source: TruthValueAlgebra,
        target: TruthValueAlgebra,
        map: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        if map.len() != source.size() {
            return Err(AlgebraError::TableShape {
                table: "morphism",
                expected: source.size(),
                got: map.len(),
            });
        }
        if let Some(index) = map.iter().position(|&v| v >= target.size()) {
            return Err(AlgebraError::EntryOutOfRange {
                table: "morphism",
                index,
                value: map[index],
            });
        }
        Ok(AlgebraMorphism {
            source,
            target,
            map,
        })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn apply_set(&self, set: Subset) -> Subset {
        set.map(|a| self.map[a])
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let image = Subset::from_elems(self.map.iter().copied());
        image.len() == self.map.len()
    }

    /// Pairs of names `(a, F(a))` in source carrier order.
    pub fn named_pairs(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.source.name(a).into(), self.target.name(b).into()))
            .collect()
    }
}

/// Which first clause a morphism must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    /// `x ∈ B⁺₁ ⟺ F(x) ∈ B⁺₂`.
    TruthValues,
    /// `x ≤₁ y ⟺ F(x) ≤₂ F(y)` for the derived pre-orders.
    PseudoHeyting,
}

pub fn check_morphism(m: &AlgebraMorphism, kind: MorphismKind) -> CheckReport {
    let mut r = CheckReport::new();
    let (s, t) = (&m.source, &m.target);
    let f = |a: usize| m.apply(a);
    let nm = |a: usize| s.name(a).to_string();
    let sn = |x: Subset| s.subset_name(x);
    let n = s.size();

    match kind {
        MorphismKind::TruthValues => {
            for x in 0..n {
                if s.is_positive(x) != t.is_positive(f(x)) {
                    r.fail("positives", vec![nm(x)]);
                }
            }
        }
        MorphismKind::PseudoHeyting => {
            let (le1, le2) = (derive_preorder(s), derive_preorder(t));
            for x in 0..n {
                for y in 0..n {
                    if le1.leq(x, y) != le2.leq(f(x), f(y)) {
                        r.fail("order-reflecting", vec![nm(x), nm(y)]);
                    }
                }
            }
        }
    }
    for set in s.forall_domain() {
        if t.forall(m.apply_set(set)).is_none() {
            r.fail("forall-domain", vec![sn(set)]);
        }
    }
    for set in s.exists_domain() {
        if t.exists(m.apply_set(set)).is_none() {
            r.fail("exists-domain", vec![sn(set)]);
        }
    }
    if f(s.top()) != t.top() {
        r.fail("top", vec![nm(s.top())]);
    }
    if f(s.bot()) != t.bot() {
        r.fail("bot", vec![nm(s.bot())]);
    }
    for a in 0..n {
        for b in 0..n {
            if f(s.imp(a, b)) != t.imp(f(a), f(b)) {
                r.fail("imp", vec![nm(a), nm(b)]);
            }
            if f(s.and(a, b)) != t.and(f(a), f(b)) {
                r.fail("and", vec![nm(a), nm(b)]);
            }
            if f(s.or(a, b)) != t.or(f(a), f(b)) {
                r.fail("or", vec![nm(a), nm(b)]);
            }
        }
    }
    for (&set, &v) in s.forall_table() {
        if let Some(w) = t.forall(m.apply_set(set)) {
            if f(v) != w {
                r.fail("forall", vec![sn(set)]);
            }
        }
    }
    for (&set, &v) in s.exists_table() {
        if let Some(w) = t.exists(m.apply_set(set)) {
            if f(v) != w {
                r.fail("exists", vec![sn(set)]);
            }
        }
    }
    r
}

/// Quotient of `alg` by `a ≃ b ⟺ a ≤ b ∧ b ≤ a`, with the projection.
///
/// Classes are numbered by their least member and named after their members,
/// e.g. `{I,1}`. Every operation, the positives and both quantifiers are
/// checked for compatibility with `≃`; the first incompatibility is an
/// error.
pub fn quotient_by_equiv(
    alg: &TruthValueAlgebra,
) -> Result<(TruthValueAlgebra, AlgebraMorphism), AlgebraError> {
    let n = alg.size();
    let le = derive_preorder(alg);
    let equiv = |a: usize, b: usize| le.leq(a, b) && le.leq(b, a);
    if let Some((a, b, c)) = le.non_transitive_at() {
        return Err(AlgebraError::Incompatible {
            op: "transitivity",
            witness: format!("({}, {}, {})", alg.name(a), alg.name(b), alg.name(c)),
        });
    }
    if let Some(a) = le.non_reflexive_at() {
        return Err(AlgebraError::Incompatible {
            op: "reflexivity",
            witness: alg.name(a).to_string(),
        });
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut class = vec![0; n];
    for a in 0..n {
        match reps.iter().position(|&r| equiv(r, a)) {
            Some(c) => class[a] = c,
            None => {
                class[a] = reps.len();
                reps.push(a);
            }
        }
    }
    let k = reps.len();
    let names: Vec<String> = (0..k)
        .map(|c| subset_label(alg.names(), Subset::from_elems((0..n).filter(|&a| class[a] == c))))
        .collect();

    let name2 = |a: usize, b: usize| format!("({}, {})", alg.name(a), alg.name(b));
    let binary = |op: &'static str, f: &dyn Fn(usize, usize) -> usize| {
        let mut table = vec![0; k * k];
        for a in 0..n {
            for b in 0..n {
                let v = class[f(a, b)];
                let expected = class[f(reps[class[a]], reps[class[b]])];
                if v != expected {
                    return Err(AlgebraError::Incompatible {
                        op,
                        witness: name2(a, b),
                    });
                }
                table[class[a] * k + class[b]] = v;
            }
        }
        Ok(table)
    };
    let imp = binary("imp", &|a, b| alg.imp(a, b))?;
    let and = binary("and", &|a, b| alg.and(a, b))?;
    let or = binary("or", &|a, b| alg.or(a, b))?;

    let mut positives = Subset::EMPTY;
    for a in 0..n {
        if alg.is_positive(a) != alg.is_positive(reps[class[a]]) {
            return Err(AlgebraError::Incompatible {
                op: "positives",
                witness: alg.name(a).to_string(),
            });
        }
        if alg.is_positive(a) {
            positives = positives.with(class[a]);
        }
    }

    let quant = |op: &'static str, table: &BTreeMap<Subset, usize>| {
        let mut out: BTreeMap<Subset, usize> = BTreeMap::new();
        for (&set, &v) in table {
            let image = set.map(|a| class[a]);
            match out.get(&image) {
                Some(&w) if w != class[v] => {
                    return Err(AlgebraError::Incompatible {
                        op,
                        witness: alg.subset_name(set),
                    })
                }
                _ => {
                    out.insert(image, class[v]);
                }
            }
        }
        Ok(out)
    };
    let forall = quant("forall", alg.forall_table())?;
    let exists = quant("exists", alg.exists_table())?;
    let full = forall.len() == 1 << k && exists.len() == 1 << k;

    let quotient = TruthValueAlgebra::new(AlgebraTables {
        names,
        positives,
        top: class[alg.top()],
        bot: class[alg.bot()],
        imp,
        and,
        or,
        full,
        forall,
        exists,
    })?;
    let projection = AlgebraMorphism::new(alg.clone(), quotient.clone(), class)?;
    Ok((quotient, projection))
}

/// Finds a bijection `a → b` that is a truth values morphism, trying
/// permutations in lexicographic order.
pub fn find_isomorphism(a: &TruthValueAlgebra, b: &TruthValueAlgebra) -> Option<Vec<usize>> {
    let n = a.size();
    if n != b.size() || a.is_full() != b.is_full() {
        return None;
    }
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search_bijection(a, b, &mut perm, &mut used)
}

fn search_bijection(
    a: &TruthValueAlgebra,
    b: &TruthValueAlgebra,
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<Vec<usize>> {
    let n = a.size();
    let i = perm.len();
    if i == n {
        let m = AlgebraMorphism::new(a.clone(), b.clone(), perm.clone()).ok()?;
        let ok = check_morphism(&m, MorphismKind::TruthValues).passed()
            && a.forall_table().len() == b.forall_table().len()
            && a.exists_table().len() == b.exists_table().len();
        return ok.then(|| perm.clone());
    }
    for j in 0..n {
        if used[j] || a.is_positive(i) != b.is_positive(j) {
            continue;
        }
        used[j] = true;
        perm.push(j);
        if let Some(found) = search_bijection(a, b, perm, used) {
            return Some(found);
        }
        perm.pop();
        used[j] = false;
    }
    None
}
