/// Dense bitset over element indices 0..n of a fixed group enumeration.
///
/// This is the currency of the set-product and width machinery, so it is a
/// plain u64 block vector with the handful of operations those loops need.
#[derive(Clone, PartialEq, Eq)]
pub struct ElementSet {
    n: usize,
    bits: Vec<u64>,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet {
            n,
            bits: vec![0; (n + 63) / 64],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = ElementSet {
            n,
            bits: vec![u64::MAX; (n + 63) / 64],
        };
        let tail = n % 64;
        if tail != 0 {
            *s.bits.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = u32>>(n: usize, iter: I) -> Self {
        let mut s = Self::empty(n);
        for x in iter {
            s.insert(x);
        }
        s
    }

    pub fn singleton(n: usize, x: u32) -> Self {
        let mut s = Self::empty(n);
        s.insert(x);
        s
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, x: u32) -> bool {
        let (w, b) = (x as usize / 64, x as usize % 64);
        let had = self.bits[w] >> b & 1;
        self.bits[w] |= 1 << b;
        had == 0
    }

    #[inline]
    pub fn remove(&mut self, x: u32) {
        self.bits[x as usize / 64] &= !(1 << (x as usize % 64));
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits[x as usize / 64] >> (x as usize % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        assert_eq!(self.n, other.n);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros();
                    word &= word - 1;
                    Some((w * 64) as u32 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ElementSet({} of {})", self.len(), self.n)
    }
}
