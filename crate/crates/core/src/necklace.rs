//! Grassmann necklaces and their bijection with decorated permutations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::perm::{Color, DecoratedPermutation, Permutation};
use crate::subset::{cyclic_interval, cyclic_position, Subset, MAX_GROUND};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("ground set size {0} unsupported (1..={MAX_GROUND})")]
    GroundSize(usize),
    #[error("expected {expected} terms, got {found}")]
    TermCount { expected: usize, found: usize },
    #[error("necklace is invalid: {0}")]
    Invalid(Violation),
    #[error("interval [{a}, {b}] out of range for n = {n}")]
    IntervalOutOfRange { a: usize, b: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// `I_i` does not have the common size `k`.
    WrongSize { expected: usize, found: usize },
    /// `I_i` contains something outside `{1..n}`.
    OutOfRange,
    /// `i ∈ I_i` but `I_{i+1}` is not `I_i \ {i} ∪ {j}`.
    BadExchange,
    /// `i ∉ I_i` but `I_{i+1} != I_i`.
    Changed,
}

/// First failing index (1-based) of a necklace check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match &self.kind {
            ViolationKind::WrongSize { expected, found } => {
                format!("has {found} elements, expected {expected}")
            }
            ViolationKind::OutOfRange => "has an element outside 1..=n".to_string(),
            ViolationKind::BadExchange => {
                "contains i but the next term is not I_i - i + j".to_string()
            }
            ViolationKind::Changed => "omits i but the next term differs".to_string(),
        };
        write!(f, "term I_{} {what}", self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GrassmannNecklace {
    n: usize,
    k: usize,
    terms: Vec<Subset>,
}

impl GrassmannNecklace {
    /// Wraps `terms` without checking the necklace axiom; `k` is `|I_1|`.
    /// Run [`GrassmannNecklace::validate`] before trusting the result.
    pub fn new(n: usize, terms: Vec<Subset>) -> Result<Self, NecklaceError> {
        if n == 0 || n > MAX_GROUND {
            return Err(NecklaceError::GroundSize(n));
        }
        if terms.len() != n {
            return Err(NecklaceError::TermCount {
                expected: n,
                found: terms.len(),
            });
        }
        let k = terms[0].len();
        Ok(GrassmannNecklace { n, k, terms })
    }

    /// `I_i = { j : π⁻¹(j) comes after j in the order starting at i }`,
    /// together with every fixed point coloured `Left`.
    pub fn from_decorated(dp: &DecoratedPermutation) -> Self {
        let n = dp.n();
        let inv = dp.perm().inverse();
        let terms: Vec<Subset> = (1..=n)
            .map(|i| {
                (1..=n)
                    .filter(|&j| {
                        let src = inv.apply(j);
                        if src == j {
                            dp.color(j) == Some(Color::Left)
                        } else {
                            cyclic_position(src, i, n) > cyclic_position(j, i, n)
                        }
                    })
                    .collect()
            })
            .collect();
        let k = terms.first().map_or(0, |t| t.len());
        GrassmannNecklace { n, k, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[Subset] {
        &self.terms
    }

    /// `I_i`, cyclic in `i`.
    pub fn term(&self, i: usize) -> Subset {
        self.terms[(i - 1) % self.n]
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.n;
        let ground = Subset::full(n);
        for i in 1..=n {
            let t = self.term(i);
            if !t.is_subset(ground) {
                return Err(Violation {
                    index: i,
                    kind: ViolationKind::OutOfRange,
                });
            }
            if t.len() != self.k {
                return Err(Violation {
                    index: i,
                    kind: ViolationKind::WrongSize {
                        expected: self.k,
                        found: t.len(),
                    },
                });
            }
        }
        for i in 1..=n {
            let cur = self.term(i);
            let next = self.term(i + 1);
            let ok = if cur.contains(i) {
                // next = cur - i + j for some j, possibly j = i
                cur.without(i).is_subset(next) && next.len() == cur.len()
            } else {
                next == cur
            };
            if !ok {
                let kind = if cur.contains(i) {
                    ViolationKind::BadExchange
                } else {
                    ViolationKind::Changed
                };
                return Err(Violation { index: i, kind });
            }
        }
        Ok(())
    }

    /// Inverse of [`GrassmannNecklace::from_decorated`]: `π(i) = j` where
    /// `I_{i+1} = I_i \ {i} ∪ {j}`; `i ∉ I_i` makes `i` a `Right` fixed point
    /// and `j = i` a `Left` one.
    pub fn to_decorated(&self) -> Result<DecoratedPermutation, NecklaceError> {
        self.validate().map_err(NecklaceError::Invalid)?;
        let n = self.n;
        let mut images = vec![0; n];
        let mut colors = BTreeMap::new();
        for i in 1..=n {
            let cur = self.term(i);
            if !cur.contains(i) {
                images[i - 1] = i;
                colors.insert(i, Color::Right);
                continue;
            }
            let added = self.term(i + 1).difference(cur.without(i));
            let j = added
                .iter()
                .next()
                .expect("validated exchange adds one element");
            images[i - 1] = j;
            if j == i {
                colors.insert(i, Color::Left);
            }
        }
        let perm = Permutation::new(images).expect("valid necklace yields a permutation");
        Ok(DecoratedPermutation::new(perm, colors).expect("colours sit on fixed points"))
    }

    /// `|I_a ∩ [a..b]|` with the interval read cyclically; `a <= b <= a + n`.
    pub fn cyclic_interval_rank(&self, a: usize, b: usize) -> Result<usize, NecklaceError> {
        let n = self.n;
        if a == 0 || a > n || b < a || b > a + n {
            return Err(NecklaceError::IntervalOutOfRange { a, b, n });
        }
        Ok(self.term(a).intersection(cyclic_interval(a, b, n)).len())
    }
}

impl fmt::Display for GrassmannNecklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> Subset {
        v.iter().copied().collect()
    }

    fn necklace(n: usize, terms: &[&[usize]]) -> GrassmannNecklace {
        GrassmannNecklace::new(n, terms.iter().map(|t| set(t)).collect()).unwrap()
    }

    fn dp(images: &[usize]) -> DecoratedPermutation {
        DecoratedPermutation::uniform(Permutation::new(images.to_vec()).unwrap(), Color::Right)
    }

    #[test]
    fn market_necklace() {
        // 1=AXP 2=HD 3=WMT 4=PG: (AXP WMT), (HD WMT), (WMT PG), (PG AXP)
        let nk = GrassmannNecklace::from_decorated(&dp(&[2, 4, 1, 3]));
        assert_eq!(nk, necklace(4, &[&[1, 3], &[2, 3], &[3, 4], &[1, 4]]));
        assert_eq!(nk.k(), 2);
        assert_eq!(nk.validate(), Ok(()));
    }

    #[test]
    fn loops_and_two_swaps() {
        let nk = GrassmannNecklace::from_decorated(&dp(&[1, 2, 3, 4]));
        assert!(nk.terms().iter().all(|t| t.is_empty()));
        assert_eq!(nk.k(), 0);
        let nk = GrassmannNecklace::from_decorated(&dp(&[2, 1, 4, 3]));
        assert_eq!(nk, necklace(4, &[&[1, 3], &[2, 3], &[1, 3], &[1, 4]]));
    }

    #[test]
    fn validation_reports_first_violation() {
        assert_eq!(necklace(4, &[&[], &[], &[], &[]]).validate(), Ok(()));
        // 1 ∈ I_1 but I_2 does not contain I_1 \ {1}
        let bad = necklace(4, &[&[1, 2], &[1, 3], &[1, 3], &[1, 3]]);
        assert_eq!(
            bad.validate(),
            Err(Violation {
                index: 1,
                kind: ViolationKind::BadExchange
            })
        );
        let bad = necklace(4, &[&[2, 3], &[2, 3], &[2, 3], &[1, 4]]);
        assert_eq!(bad.validate().unwrap_err().index, 3);
        let bad = necklace(3, &[&[1], &[2, 3], &[3]]);
        assert_eq!(
            bad.validate().unwrap_err().kind,
            ViolationKind::WrongSize {
                expected: 1,
                found: 2
            }
        );
        let bad = necklace(2, &[&[1], &[2, 3]]);
        assert_eq!(bad.validate().unwrap_err().kind, ViolationKind::OutOfRange);
    }

    #[test]
    fn repeated_pair_is_two_coloops() {
        // keeping 1 after stepping past it is the j = i case of the axiom
        let nk = necklace(4, &[&[1, 2], &[1, 2], &[1, 2], &[1, 2]]);
        assert_eq!(nk.validate(), Ok(()));
        let dp = nk.to_decorated().unwrap();
        assert!(dp.perm().is_identity());
        assert_eq!(dp.color(1), Some(Color::Left));
        assert_eq!(dp.color(2), Some(Color::Left));
        assert_eq!(dp.color(3), Some(Color::Right));
    }

    #[test]
    fn inversion_examples() {
        let nk = necklace(4, &[&[1, 3], &[2, 3], &[3, 4], &[1, 4]]);
        assert_eq!(nk.to_decorated().unwrap(), dp(&[2, 4, 1, 3]));
        let nk = necklace(4, &[&[], &[], &[], &[]]);
        assert_eq!(nk.to_decorated().unwrap(), dp(&[1, 2, 3, 4]));
        let full = &[1, 2, 3, 4][..];
        let nk = necklace(4, &[full, full, full, full]);
        let back = nk.to_decorated().unwrap();
        assert!(back.perm().is_identity());
        assert!(back.colors().values().all(|&c| c == Color::Left));
        let bad = necklace(4, &[&[1, 2], &[3, 4], &[3, 4], &[3, 4]]);
        assert!(matches!(bad.to_decorated(), Err(NecklaceError::Invalid(_))));
    }

    #[test]
    fn interval_ranks() {
        let nk = necklace(4, &[&[1, 3], &[2, 3], &[3, 4], &[1, 4]]);
        assert_eq!(nk.cyclic_interval_rank(1, 2), Ok(1));
        assert_eq!(nk.cyclic_interval_rank(2, 4), Ok(2));
        for a in 1..=4 {
            assert_eq!(nk.cyclic_interval_rank(a, a + 3), Ok(2));
            assert_eq!(nk.cyclic_interval_rank(a, a + 4), Ok(2));
        }
        assert!(nk.cyclic_interval_rank(0, 1).is_err());
        assert!(nk.cyclic_interval_rank(2, 7).is_err());
        assert!(nk.cyclic_interval_rank(3, 2).is_err());
    }

    #[test]
    fn term_count_checked() {
        assert_eq!(
            GrassmannNecklace::new(3, vec![Subset::EMPTY; 2]),
            Err(NecklaceError::TermCount {
                expected: 3,
                found: 2
            })
        );
    }
}
