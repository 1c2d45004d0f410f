use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Maximum number of vertices a [`VertexSet`] (and therefore a `Graph`) can hold.
pub const MAX_VERTICES: usize = 64;

/// A set of vertex indices in `0..64`, stored as a single machine word.
///
/// Iteration is always in increasing vertex order. The derived `Ord` compares
/// the raw bit patterns; use [`VertexSet::lex_cmp`] when the lexicographic order
/// of the sorted vertex lists is what matters.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, 1, ..., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        *self = self.without(v);
    }

    #[inline]
    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[inline]
    pub fn without(self, v: usize) -> Self {
        // removing something that cannot be a member is a no-op
        VertexSet(self.0 & !1u64.checked_shl(v as u32).unwrap_or(0))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest vertex in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compares the sorted vertex lists lexicographically.
    pub fn lex_cmp(self, other: VertexSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn not(self) -> VertexSet {
        VertexSet(!self.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let vs = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&v) = vs.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(vs.into_iter().collect())
    }
}

/// Iterates over all `k`-subsets of `pool` in lexicographic order of their sorted vertex lists.
pub fn subsets_of_size(pool: VertexSet, k: usize) -> impl Iterator<Item = VertexSet> {
    let items = pool.to_vec();
    let m = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > m;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out: VertexSet = idx.iter().map(|&i| items[i]).collect();
        // advance to next combination
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] != i + m - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_is_sorted() {
        let s: VertexSet = [9, 3, 63, 0].into_iter().collect();
        assert_eq!(s.to_vec(), vec![0, 3, 9, 63]);
        assert_eq!(s.first(), Some(0));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn lex_order_differs_from_bit_order() {
        let a: VertexSet = [0, 5].into_iter().collect();
        let b: VertexSet = [1, 2].into_iter().collect();
        assert_eq!(a.lex_cmp(b), std::cmp::Ordering::Less);
        assert!(a.bits() > b.bits());
    }

    #[test]
    fn subsets_enumerate_binomial_counts_in_order() {
        let pool = VertexSet::full(6);
        let all: Vec<_> = subsets_of_size(pool, 3).collect();
        assert_eq!(all.len(), 20);
        assert!(all.windows(2).all(|w| w[0].lex_cmp(w[1]).is_lt()));
        assert_eq!(subsets_of_size(pool, 0).count(), 1);
        assert_eq!(subsets_of_size(pool, 7).count(), 0);
        let sparse: VertexSet = [2, 7, 11].into_iter().collect();
        let pairs: Vec<_> = subsets_of_size(sparse, 2).map(|s| s.to_vec()).collect();
        assert_eq!(pairs, vec![vec![2, 7], vec![2, 11], vec![7, 11]]);
    }

    #[test]
    fn serde_as_sorted_list() {
        let s: VertexSet = [4, 1].into_iter().collect();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,4]");
        let back: VertexSet = serde_json::from_str("[4,1]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<VertexSet>("[64]").is_err());
    }
}
