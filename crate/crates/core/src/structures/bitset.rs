//! A small fixed-capacity bit set used for search domains.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    /// The empty set over `0..len`.
    pub fn empty(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// The full set `0..len`.
    pub fn full(len: usize) -> Self {
        let mut s = BitSet::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.words[i / 64] &= !(1 << (i % 64));
        had
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The unique member, if the set is a singleton.
    pub fn single(&self) -> Option<usize> {
        let mut found = None;
        for (wi, &w) in self.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            if found.is_some() || w.count_ones() > 1 {
                return None;
            }
            found = Some(wi * 64 + w.trailing_zeros() as usize);
        }
        found
    }

    /// Intersects in place; returns whether anything was removed.
    pub fn intersect_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            let n = *w & *o;
            changed |= n != *w;
            *w = n;
        }
        changed
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_operations() {
        let mut s = BitSet::full(70);
        assert_eq!(s.count(), 70);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert!(!s.contains(3));
        assert!(!s.contains(70));
        let mut t = BitSet::empty(70);
        t.insert(65);
        assert_eq!(t.single(), Some(65));
        assert!(s.intersect_with(&t));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![65]);
        assert!(!s.intersect_with(&t));
        t.insert(1);
        assert_eq!(t.single(), None);
        assert!(BitSet::empty(0).is_empty());
    }
}
