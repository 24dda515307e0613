//! Small subsets of the ground set `{1..n}` packed into a bitmask.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported ground-set size.
pub const MAX_GROUND: usize = 63;

/// A subset of `{1..n}`; element `e` lives in bit `e - 1`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1..n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        Subset((1u64 << n) - 1)
    }

    pub fn singleton(e: usize) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&e));
        Subset(1 << (e - 1))
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_GROUND).contains(&e) && self.0 & (1 << (e - 1)) != 0
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1 << (e - 1);
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1 << (e - 1));
    }

    pub fn with(mut self, e: usize) -> Self {
        self.insert(e);
        self
    }

    pub fn without(mut self, e: usize) -> Self {
        self.remove(e);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest element, or 0 for the empty set.
    pub fn max_element(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Elements sorted in the cyclic order `shift < shift+1 < ... < shift-1` of `{1..n}`.
    pub fn sorted_from(self, shift: usize, n: usize) -> Vec<usize> {
        let mut v = self.to_vec();
        v.sort_by_key(|&e| cyclic_position(e, shift, n));
        v
    }

    /// 0/1 indicator vector of length `n`.
    pub fn indicator(self, n: usize) -> Vec<u8> {
        (1..=n).map(|e| self.contains(e) as u8).collect()
    }
}

/// Position of `e` in the cyclic order starting at `shift` (0-based).
pub fn cyclic_position(e: usize, shift: usize, n: usize) -> usize {
    (e + n - shift) % n
}

/// The set `{a, a+1, .., b}` reduced cyclically into `{1..n}`.
pub fn cyclic_interval(a: usize, b: usize, n: usize) -> Subset {
    let mut s = Subset::EMPTY;
    for t in a..=b {
        s.insert((t - 1) % n + 1);
    }
    s
}

/// All `k`-subsets of `{1..n}` in increasing bitmask order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    let limit = 1u64 << n;
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0u64)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ < limit).then_some(succ)
        };
        Some(Subset(cur))
    })
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = Subset::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the sorted element lists, so `{1,3} < {1,4} < {2,3}`.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elems = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = elems.iter().find(|&&e| e == 0 || e > MAX_GROUND) {
            return Err(serde::de::Error::custom(format!(
                "subset element {bad} outside 1..={MAX_GROUND}"
            )));
        }
        Ok(elems.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(4, 2).count(), 6);
        assert_eq!(k_subsets(5, 0).collect::<Vec<_>>(), vec![Subset::EMPTY]);
        assert_eq!(k_subsets(3, 3).count(), 1);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert_eq!(k_subsets(8, 4).count(), 70);
        assert!(k_subsets(6, 3).all(|s| s.len() == 3 && s.is_subset(Subset::full(6))));
    }

    #[test]
    fn cyclic_helpers() {
        assert_eq!(cyclic_interval(3, 5, 4).to_vec(), vec![1, 3, 4]);
        assert_eq!(cyclic_interval(2, 6, 4), Subset::full(4));
        let s: Subset = [1, 3].into_iter().collect();
        assert_eq!(s.sorted_from(3, 4), vec![3, 1]);
        assert_eq!(s.to_string(), "{1,3}");
    }

    #[test]
    fn lexicographic_order() {
        let a: Subset = [1, 4].into_iter().collect();
        let b: Subset = [2, 3].into_iter().collect();
        assert!(a < b);
    }
}
