use std::cmp::Ordering;
use std::fmt;

/// A subset of frame indices `0..size`, stored as a bitset.
///
/// Ordering is lexicographic on the ascending index sequence, so `{0,1}`
/// sorts before `{0,2}` and `{1}` before `{1,2}` before `{2}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    words: Vec<u64>,
    size: usize,
}

impl Subset {
    pub fn empty(size: usize) -> Self {
        Subset { words: vec![0; size.div_ceil(64)], size }
    }

    pub fn full(size: usize) -> Self {
        let mut s = Self::empty(size);
        for i in 0..size {
            s.insert(i);
        }
        s
    }

    /// Panics if an index is `>= size`.
    pub fn from_indices(size: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(size);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Contiguous index range `lo..=hi`.
    pub fn range(size: usize, lo: usize, hi: usize) -> Self {
        Self::from_indices(size, lo..=hi)
    }

    /// Size of the underlying frame, not the number of members.
    pub fn universe(&self) -> usize {
        self.size
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.size, "index {index} outside subset universe {}", self.size);
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.size && self.words[index / 64] & (1 << (index % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.size, other.size);
        Subset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            size: self.size,
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.size, other.size);
        Subset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            size: self.size,
        }
    }

    pub fn complement(&self) -> Subset {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.size % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Subset { words, size: self.size }
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// True when the members form one run `lo..=hi` of consecutive indices.
    pub fn is_contiguous(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(lo), Some(hi)) => hi - lo + 1 == self.len(),
            _ => false,
        }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.size.cmp(&other.size))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
