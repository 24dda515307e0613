//! Permutations in one-line notation, their two-coloured decorations, wiring
//! words and the bounded affine lift.
//!
//! Everything is 1-based: `Permutation::images()[i - 1]` is `π(i)`.
//!
//! A [`WiringWord`] is read in time order. Letter `p` swaps whatever sits at
//! positions `p` and `p + 1`; the permutation of a word is the rank map of the
//! diagram's right edge, `π(i)` being the final position of the wire that
//! started at position `i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("one-line notation {0:?} is not a bijection on 1..=n")]
    NotBijection(Vec<usize>),
    #[error("colour given for {0}, which is not a fixed point")]
    ColorOnMovedPoint(usize),
    #[error("fixed point {0} has no colour")]
    MissingColor(usize),
    #[error("letter s{letter} out of range for n = {n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("cannot remove a letter from an empty word")]
    EmptyWord,
    #[error("letter index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("value f({i}) = {value} violates i <= f(i) <= i + n")]
    NotBounded { i: usize, value: usize },
    #[error("f mod n is not a bijection")]
    NotAffineBijection,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotBijection(images));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `π(i)` for `i` in `1..=n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: other.images.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &v)| v == i + 1)
            .map(|(i, _)| i + 1)
    }

    /// Number of pairs `i < j` with `π(i) > π(j)`.
    pub fn inversions(&self) -> usize {
        let imgs = &self.images;
        let mut count = 0;
        for i in 0..imgs.len() {
            for j in i + 1..imgs.len() {
                if imgs[i] > imgs[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Colour of a fixed point. `Right` is a loop (the stock is up or flat),
/// `Left` a coloop (the stock is down).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Right,
    Left,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Right => "right",
            Color::Left => "left",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDecorated")]
pub struct DecoratedPermutation {
    #[serde(rename = "permutation")]
    perm: Permutation,
    colors: BTreeMap<usize, Color>,
}

#[derive(Deserialize)]
struct RawDecorated {
    permutation: Permutation,
    colors: BTreeMap<usize, Color>,
}

impl TryFrom<RawDecorated> for DecoratedPermutation {
    type Error = PermError;

    fn try_from(raw: RawDecorated) -> Result<Self, Self::Error> {
        DecoratedPermutation::new(raw.permutation, raw.colors)
    }
}

impl DecoratedPermutation {
    pub fn new(perm: Permutation, colors: BTreeMap<usize, Color>) -> Result<Self, PermError> {
        if let Some(&bad) = colors
            .keys()
            .find(|&&i| i == 0 || i > perm.n() || perm.apply(i) != i)
        {
            return Err(PermError::ColorOnMovedPoint(bad));
        }
        if let Some(missing) = perm.fixed_points().find(|i| !colors.contains_key(i)) {
            return Err(PermError::MissingColor(missing));
        }
        Ok(DecoratedPermutation { perm, colors })
    }

    /// Colours every fixed point with `color_of`.
    pub fn with_colors(perm: Permutation, mut color_of: impl FnMut(usize) -> Color) -> Self {
        let colors = perm.fixed_points().map(|i| (i, color_of(i))).collect();
        DecoratedPermutation { perm, colors }
    }

    pub fn uniform(perm: Permutation, color: Color) -> Self {
        Self::with_colors(perm, |_| color)
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    pub fn colors(&self) -> &BTreeMap<usize, Color> {
        &self.colors
    }

    pub fn color(&self, i: usize) -> Option<Color> {
        self.colors.get(&i).copied()
    }

    /// `k`: points with `π(i) < i` plus fixed points coloured `Left`.
    pub fn anti_exceedance_count(&self) -> usize {
        let moved_left = (1..=self.n()).filter(|&i| self.perm.apply(i) < i).count();
        let coloops = self.colors.values().filter(|&&c| c == Color::Left).count();
        moved_left + coloops
    }

    pub fn affine_lift(&self) -> BoundedAffinePermutation {
        let n = self.n();
        let values = (1..=n)
            .map(|i| {
                let v = self.perm.apply(i);
                match v.cmp(&i) {
                    std::cmp::Ordering::Greater => v,
                    std::cmp::Ordering::Less => v + n,
                    std::cmp::Ordering::Equal => match self.colors[&i] {
                        Color::Right => i,
                        Color::Left => i + n,
                    },
                }
            })
            .collect();
        BoundedAffinePermutation { values }
    }

    /// Conjugation by the cycle `i ↦ i + 1`: point `i` moves to `i + 1 (mod n)`.
    pub fn rotate(&self) -> DecoratedPermutation {
        let n = self.n();
        let up = |i: usize| i % n + 1;
        let mut images = vec![0; n];
        for i in 1..=n {
            images[up(i) - 1] = up(self.perm.apply(i));
        }
        let colors = self.colors.iter().map(|(&i, &c)| (up(i), c)).collect();
        DecoratedPermutation {
            perm: Permutation { images },
            colors,
        }
    }

    /// Every decorated permutation of size `n`, in a fixed order.
    pub fn all(n: usize) -> Vec<DecoratedPermutation> {
        let mut out = Vec::new();
        for perm in all_permutations(n) {
            let fixed: Vec<usize> = perm.fixed_points().collect();
            for mask in 0u32..(1 << fixed.len()) {
                let colors = fixed
                    .iter()
                    .enumerate()
                    .map(|(b, &i)| {
                        let c = if mask & (1 << b) != 0 {
                            Color::Left
                        } else {
                            Color::Right
                        };
                        (i, c)
                    })
                    .collect();
                out.push(DecoratedPermutation {
                    perm: perm.clone(),
                    colors,
                });
            }
        }
        out
    }
}

impl fmt::Display for DecoratedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for i in 1..=self.n() {
            if i > 1 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.perm.apply(i))?;
            match self.colors.get(&i) {
                Some(Color::Right) => write!(f, "R")?,
                Some(Color::Left) => write!(f, "L")?,
                None => {}
            }
        }
        write!(f, "}}")
    }
}

/// All permutations of `{1..n}` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![Permutation {
        images: cur.clone(),
    }];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation {
            images: cur.clone(),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WiringWord {
    n: usize,
    letters: Vec<usize>,
}

impl WiringWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self, PermError> {
        if let Some(&letter) = letters.iter().find(|&&p| p == 0 || p >= n) {
            return Err(PermError::LetterOutOfRange { letter, n });
        }
        Ok(WiringWord { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        WiringWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn prefix(&self, len: usize) -> WiringWord {
        WiringWord {
            n: self.n,
            letters: self.letters[..len].to_vec(),
        }
    }

    /// Wire labels by position after every letter has been applied, starting
    /// from the identity arrangement.
    pub fn arrangement(&self) -> Vec<usize> {
        let mut arr: Vec<usize> = (1..=self.n).collect();
        for &p in &self.letters {
            arr.swap(p - 1, p);
        }
        arr
    }

    /// Rank map of the right edge.
    pub fn to_permutation(&self) -> Permutation {
        Permutation {
            images: self.arrangement(),
        }
        .inverse()
    }

    pub fn is_reduced(&self) -> bool {
        self.to_permutation().inversions() == self.len()
    }

    pub fn remove_letter(&self, index: usize) -> Result<WiringWord, PermError> {
        if self.letters.is_empty() {
            return Err(PermError::EmptyWord);
        }
        if index >= self.letters.len() {
            return Err(PermError::IndexOutOfRange {
                index,
                len: self.letters.len(),
            });
        }
        let mut letters = self.letters.clone();
        letters.remove(index);
        Ok(WiringWord { n: self.n, letters })
    }
}

impl fmt::Display for WiringWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "s{p}")?;
        }
        write!(f, ")")
    }
}

/// `f : {1..n} → {1..2n}` with `i <= f(i) <= i + n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BoundedAffinePermutation {
    values: Vec<usize>,
}

impl BoundedAffinePermutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        for (idx, &v) in values.iter().enumerate() {
            let i = idx + 1;
            if v < i || v > i + n {
                return Err(PermError::NotBounded { i, value: v });
            }
        }
        let mut seen = vec![false; n];
        for &v in &values {
            let r = (v - 1) % n;
            if seen[r] {
                return Err(PermError::NotAffineBijection);
            }
            seen[r] = true;
        }
        Ok(BoundedAffinePermutation { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    /// `#{i : f(i) > n}`.
    pub fn k(&self) -> usize {
        let n = self.n();
        self.values.iter().filter(|&&v| v > n).count()
    }

    pub fn to_decorated(&self) -> DecoratedPermutation {
        let n = self.n();
        let images = self.values.iter().map(|&v| (v - 1) % n + 1).collect();
        let colors = self
            .values
            .iter()
            .enumerate()
            .filter_map(|(idx, &v)| {
                let i = idx + 1;
                if v == i {
                    Some((i, Color::Right))
                } else if v == i + n {
                    Some((i, Color::Left))
                } else {
                    None
                }
            })
            .collect();
        DecoratedPermutation {
            perm: Permutation { images },
            colors,
        }
    }
}

impl TryFrom<Vec<usize>> for BoundedAffinePermutation {
    type Error = PermError;

    fn try_from(values: Vec<usize>) -> Result<Self, Self::Error> {
        BoundedAffinePermutation::new(values)
    }
}

impl From<BoundedAffinePermutation> for Vec<usize> {
    fn from(f: BoundedAffinePermutation) -> Self {
        f.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn word(n: usize, letters: &[usize]) -> WiringWord {
        WiringWord::new(n, letters.to_vec()).unwrap()
    }

    // Rank map computed by tracking each wire's position letter by letter.
    fn track_wires(n: usize, letters: &[usize]) -> Vec<usize> {
        let mut pos: Vec<usize> = (1..=n).collect();
        for &p in letters {
            for q in pos.iter_mut() {
                if *q == p {
                    *q = p + 1;
                } else if *q == p + 1 {
                    *q = p;
                }
            }
        }
        pos
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1, 3]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 4, 2]).is_err());
    }

    #[test]
    fn word_products() {
        assert!(word(4, &[]).to_permutation().is_identity());
        assert!(word(4, &[1, 1]).to_permutation().is_identity());
        // market order HD/WMT, then HD/PG, then AXP/WMT
        assert_eq!(word(4, &[2, 3, 1]).to_permutation(), perm(&[2, 4, 1, 3]));
        assert_eq!(word(4, &[2, 3, 1]).arrangement(), vec![3, 1, 4, 2]);
        // the same letters read in the opposite order give the inverse
        assert_eq!(word(4, &[1, 3, 2]).to_permutation(), perm(&[3, 1, 4, 2]));
        assert_eq!(track_wires(4, &[1, 3, 2]), vec![3, 1, 4, 2]);
    }

    #[test]
    fn word_letters_checked() {
        assert_eq!(
            WiringWord::new(4, vec![4]),
            Err(PermError::LetterOutOfRange { letter: 4, n: 4 })
        );
        assert!(WiringWord::new(4, vec![0]).is_err());
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(Permutation::identity(5).inversions(), 0);
        assert_eq!(perm(&[2, 4, 1, 3]).inversions(), 3);
        assert_eq!(perm(&[4, 3, 2, 1]).inversions(), 6);
    }

    #[test]
    fn anti_exceedances() {
        let dp = DecoratedPermutation::uniform(perm(&[2, 4, 1, 3]), Color::Right);
        assert_eq!(dp.anti_exceedance_count(), 2);
        let id = Permutation::identity(4);
        assert_eq!(
            DecoratedPermutation::uniform(id.clone(), Color::Right).anti_exceedance_count(),
            0
        );
        assert_eq!(
            DecoratedPermutation::uniform(id, Color::Left).anti_exceedance_count(),
            4
        );
    }

    #[test]
    fn affine_lifts() {
        let dp = DecoratedPermutation::uniform(perm(&[2, 4, 1, 3]), Color::Right);
        assert_eq!(dp.affine_lift().values(), &[2, 4, 5, 7]);
        let id = DecoratedPermutation::uniform(Permutation::identity(4), Color::Right);
        assert_eq!(id.affine_lift().values(), &[1, 2, 3, 4]);
        let colors = BTreeMap::from([(1, Color::Right), (4, Color::Left)]);
        let dp = DecoratedPermutation::new(perm(&[1, 3, 2, 4]), colors).unwrap();
        assert_eq!(dp.affine_lift().values(), &[1, 3, 6, 8]);
        assert_eq!(dp.affine_lift().k(), dp.anti_exceedance_count());
        assert_eq!(dp.affine_lift().to_decorated(), dp);
    }

    #[test]
    fn decoration_must_match_fixed_points() {
        let p = perm(&[1, 3, 2, 4]);
        assert_eq!(
            DecoratedPermutation::new(p.clone(), BTreeMap::from([(1, Color::Right)])),
            Err(PermError::MissingColor(4))
        );
        let colors = BTreeMap::from([(1, Color::Right), (2, Color::Left), (4, Color::Left)]);
        assert_eq!(
            DecoratedPermutation::new(p, colors),
            Err(PermError::ColorOnMovedPoint(2))
        );
    }

    #[test]
    fn bounded_affine_validation() {
        assert!(BoundedAffinePermutation::new(vec![2, 4, 5, 7]).is_ok());
        assert!(BoundedAffinePermutation::new(vec![2, 4, 6, 7]).is_err());
        assert!(BoundedAffinePermutation::new(vec![1, 7, 3, 4]).is_err());
    }

    #[test]
    fn removing_letters() {
        let w = word(4, &[2, 3, 1]);
        let shorter = w.remove_letter(0).unwrap();
        assert_eq!(shorter.letters(), &[3, 1]);
        assert_eq!(shorter.to_permutation(), perm(&[2, 1, 4, 3]));
        let w = word(4, &[1, 3, 2]);
        assert_eq!(
            w.remove_letter(2).unwrap().to_permutation(),
            perm(&[2, 1, 4, 3])
        );
        assert!(word(4, &[1])
            .remove_letter(0)
            .unwrap()
            .to_permutation()
            .is_identity());
        assert_eq!(word(4, &[]).remove_letter(0), Err(PermError::EmptyWord));
        assert_eq!(
            word(4, &[1]).remove_letter(1),
            Err(PermError::IndexOutOfRange { index: 1, len: 1 })
        );
    }

    #[test]
    fn counts_of_decorated_permutations() {
        // sum over permutations of 2^(fixed points): 1, 2, 5, 16, 65, 326
        let counts: Vec<usize> = (1..=5)
            .map(|n| DecoratedPermutation::all(n).len())
            .collect();
        assert_eq!(counts, vec![2, 5, 16, 65, 326]);
    }
}
