//! Small fixed-capacity bit sets, used for element sets and subgroup sets.

/// A fixed-capacity set of small integers backed by `u64` words.
///
/// Ordering and hashing are word-lexicographic, which is deterministic and
/// therefore usable as a canonical map key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(nbits: usize) -> Self {
        BitSet {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(nbits: usize, it: I) -> Self {
        let mut s = BitSet::new(nbits);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.nbits
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
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

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Dense boolean matrix with `u64`-packed rows; row-to-row queries only.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let stride = n.div_ceil(64);
        BitMatrix {
            n,
            stride,
            words: vec![0; n * stride],
        }
    }

    pub fn set(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.n && j < self.n);
        self.words[i * self.stride + j / 64] |= 1u64 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let mut a = BitSet::from_iter(100, [1, 5, 64, 99]);
        assert_eq!(a.len(), 4);
        assert!(a.contains(64));
        assert!(!a.contains(63));
        let b = BitSet::from_iter(100, [5, 64]);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        a.intersect_with(&b);
        assert_eq!(a.to_vec(), vec![5, 64]);
        a.remove(5);
        assert_eq!(a.to_vec(), vec![64]);
    }

    #[test]
    fn iter_roundtrip() {
        let v = vec![0, 3, 63, 64, 65, 127];
        let s = BitSet::from_iter(128, v.iter().copied());
        assert_eq!(s.to_vec(), v);
    }
}
