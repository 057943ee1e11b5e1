use std::fmt;

/// A subset of a small carrier `{0, .., n-1}`, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n < 32);
        Subset((1u32 << n) - 1)
    }

    pub fn singleton(a: usize) -> Subset {
        Subset(1 << a)
    }

    pub fn from_elems(elems: impl IntoIterator<Item = usize>) -> Subset {
        elems.into_iter().fold(Subset::EMPTY, |s, a| s.with(a))
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> a & 1 == 1
    }

    pub fn with(self, a: usize) -> Subset {
        Subset(self.0 | 1 << a)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    /// Image of the subset under `f`.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Subset {
        Subset::from_elems(self.iter().map(f))
    }

    /// All subsets of an `n`-element carrier, in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..1u32 << n).map(Subset)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_operations() {
        let a = Subset::from_elems([0, 2]);
        assert!(a.contains(0) && a.contains(2) && !a.contains(1));
        assert_eq!(a.len(), 2);
        assert!(Subset::singleton(2).is_subset_of(a));
        assert!(!Subset::singleton(1).is_subset_of(a));
        assert_eq!(a.union(Subset::singleton(1)), Subset::full(3));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(a.map(|x| x / 2), Subset::from_elems([0, 1]));
        assert_eq!(Subset::all(3).count(), 8);
    }
}
