//! Random finite algebras.
//!
//! Valid ones are built by inflating a small Heyting algebra `H` along a
//! random surjection `π : B → H`: every operation picks an arbitrary
//! preimage of the result in `H`, and the positive values are the preimage
//! of the top. Invalid ones come from changing one entry of a valid one, or
//! from filling the tables at random.

use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;
use tva_core::algebra::{AlgebraTables, TruthValueAlgebra};
use tva_core::Subset;

/// A finite Heyting algebra given by its order.
pub struct Heyting {
    pub leq: Vec<Vec<bool>>,
}

impl Heyting {
    pub fn chain(k: usize) -> Heyting {
        Heyting {
            leq: (0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect(),
        }
    }

    /// The four-element Boolean lattice, elements as bit masks.
    pub fn square() -> Heyting {
        Heyting {
            leq: (0..4).map(|a| (0..4).map(|b| a & b == a).collect()).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    fn greatest(&self, set: &[usize]) -> usize {
        *set.iter()
            .find(|&&g| set.iter().all(|&x| self.leq[x][g]))
            .expect("lattice")
    }

    fn least(&self, set: &[usize]) -> usize {
        *set.iter()
            .find(|&&l| set.iter().all(|&x| self.leq[l][x]))
            .expect("lattice")
    }

    pub fn top(&self) -> usize {
        self.greatest(&(0..self.size()).collect::<Vec<_>>())
    }

    pub fn bot(&self) -> usize {
        self.least(&(0..self.size()).collect::<Vec<_>>())
    }

    pub fn meet_all(&self, xs: &[usize]) -> usize {
        let lower: Vec<usize> = (0..self.size())
            .filter(|&c| xs.iter().all(|&x| self.leq[c][x]))
            .collect();
        self.greatest(&lower)
    }

    pub fn join_all(&self, xs: &[usize]) -> usize {
        let upper: Vec<usize> = (0..self.size())
            .filter(|&c| xs.iter().all(|&x| self.leq[x][c]))
            .collect();
        self.least(&upper)
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        let ok: Vec<usize> = (0..self.size())
            .filter(|&c| self.leq[self.meet_all(&[c, a])][b])
            .collect();
        self.greatest(&ok)
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// An inflation of `h` with `n >= h.size()` elements.
pub fn inflate(rng: &mut impl Rng, h: &Heyting, n: usize) -> TruthValueAlgebra {
    let m = h.size();
    assert!(n >= m);
    let mut pi: Vec<usize> = (0..m).collect();
    pi.extend((m..n).map(|_| rng.gen_range(0..m)));
    pi.shuffle(rng);
    let pre: Vec<Vec<usize>> = (0..m)
        .map(|v| (0..n).filter(|&a| pi[a] == v).collect())
        .collect();
    let mut pick = |v: usize| *pre[v].choose(rng).unwrap();
    let mut table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                out.push(pick(f(pi[a], pi[b])));
            }
        }
        out
    };
    let imp = table(&|x, y| h.imp(x, y));
    let and = table(&|x, y| h.meet_all(&[x, y]));
    let or = table(&|x, y| h.join_all(&[x, y]));
    let mut pick = |v: usize| *pre[v].choose(rng).unwrap();
    let mut forall = BTreeMap::new();
    let mut exists = BTreeMap::new();
    for s in Subset::all(n) {
        let image: Vec<usize> = s.iter().map(|a| pi[a]).collect();
        forall.insert(s, pick(h.meet_all(&image)));
        exists.insert(s, pick(h.join_all(&image)));
    }
    let top = pick(h.top());
    let bot = pick(h.bot());
    let positives = Subset::from_elems(pre[h.top()].iter().copied());
    TruthValueAlgebra::new(AlgebraTables {
        names: names(n),
        positives,
        top,
        bot,
        imp,
        and,
        or,
        full: true,
        forall,
        exists,
    })
    .expect("well-formed tables")
}

/// A random inflation with 3 or 4 elements.
pub fn random_valid(rng: &mut impl Rng) -> TruthValueAlgebra {
    let n = rng.gen_range(3..=4);
    let h = match rng.gen_range(0..5) {
        4 if n == 4 => Heyting::square(),
        k => Heyting::chain(1 + k.min(n - 1)),
    };
    inflate(rng, &h, n)
}

/// `alg` with one entry changed at random.
pub fn perturb(rng: &mut impl Rng, alg: &TruthValueAlgebra) -> TruthValueAlgebra {
    let mut t: AlgebraTables = alg.tables().clone();
    let n = t.names.len();
    let v = rng.gen_range(0..n);
    match rng.gen_range(0..8) {
        0 => t.imp[rng.gen_range(0..n * n)] = v,
        1 => t.and[rng.gen_range(0..n * n)] = v,
        2 => t.or[rng.gen_range(0..n * n)] = v,
        3 => t.top = v,
        4 => t.bot = v,
        5 => t.positives = Subset(t.positives.0 ^ (1 << v)),
        6 => {
            let s = Subset(rng.gen_range(0..1u32 << n));
            t.forall.insert(s, v);
        }
        _ => {
            let s = Subset(rng.gen_range(0..1u32 << n));
            t.exists.insert(s, v);
        }
    }
    TruthValueAlgebra::new(t).expect("well-formed tables")
}

/// Tables filled uniformly at random.
pub fn random_tables(rng: &mut impl Rng) -> TruthValueAlgebra {
    let n = rng.gen_range(3..=4);
    let mut square = || (0..n * n).map(|_| rng.gen_range(0..n)).collect::<Vec<_>>();
    let (imp, and, or) = (square(), square(), square());
    let forall = Subset::all(n).map(|s| (s, rng.gen_range(0..n))).collect();
    let exists = Subset::all(n).map(|s| (s, rng.gen_range(0..n))).collect();
    TruthValueAlgebra::new(AlgebraTables {
        names: names(n),
        positives: Subset(rng.gen_range(1..1u32 << n)),
        top: rng.gen_range(0..n),
        bot: rng.gen_range(0..n),
        imp,
        and,
        or,
        full: true,
        forall,
        exists,
    })
    .expect("well-formed tables")
}

/// A mix of the three kinds, so that both verdicts occur.
pub fn random_algebra(rng: &mut impl Rng) -> TruthValueAlgebra {
    match rng.gen_range(0..10) {
        0..=4 => random_valid(rng),
        5..=8 => {
            let base = random_valid(rng);
            perturb(rng, &base)
        }
        _ => random_tables(rng),
    }
}
