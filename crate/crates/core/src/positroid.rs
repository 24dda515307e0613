//! Positroids from Grassmann necklaces: Gale order, bases, rank, cell
//! dimension and connected components.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::necklace::{GrassmannNecklace, NecklaceError};
use crate::perm::DecoratedPermutation;
use crate::subset::{cyclic_interval, cyclic_position, k_subsets, Subset, MAX_GROUND};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PositroidError {
    #[error("cannot compare sets of sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("a matroid needs at least one basis")]
    NoBases,
    #[error("basis {basis} has {found} elements, expected {expected}")]
    RaggedBases {
        basis: Subset,
        expected: usize,
        found: usize,
    },
    #[error("basis {0} is not a subset of the ground set")]
    OutsideGround(Subset),
    #[error("ground set size {0} unsupported (1..={MAX_GROUND})")]
    GroundSize(usize),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

/// `H ≥_shift I`: sort both sets in the cyclic order starting at `shift`
/// and compare them entry by entry.
pub fn gale_geq(h: Subset, i: Subset, shift: usize, n: usize) -> Result<bool, PositroidError> {
    if h.len() != i.len() {
        return Err(PositroidError::SizeMismatch(h.len(), i.len()));
    }
    Ok(gale_geq_unchecked(h, i, shift, n))
}

fn gale_geq_unchecked(h: Subset, i: Subset, shift: usize, n: usize) -> bool {
    let hs = h.sorted_from(shift, n);
    let is = i.sorted_from(shift, n);
    hs.iter()
        .zip(&is)
        .all(|(&a, &b)| cyclic_position(a, shift, n) >= cyclic_position(b, shift, n))
}

/// A rank-`k` basis system on `{1..n}`. Built from a necklace it is always a
/// positroid; [`Positroid::from_bases`] accepts arbitrary uniform families so
/// that [`Positroid::verify_exchange_axiom`] can reject non-matroids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Positroid {
    n: usize,
    k: usize,
    bases: BTreeSet<Subset>,
}

/// Witness that the exchange axiom fails: no `j ∈ J \ I` makes
/// `I \ {element} ∪ {j}` a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeCounterexample {
    pub first: Subset,
    pub second: Subset,
    pub element: usize,
}

impl fmt::Display for ExchangeCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no exchange for I = {}, J = {}, i = {}",
            self.first, self.second, self.element
        )
    }
}

impl Positroid {
    pub fn from_bases(
        n: usize,
        bases: impl IntoIterator<Item = Subset>,
    ) -> Result<Self, PositroidError> {
        if n == 0 || n > MAX_GROUND {
            return Err(PositroidError::GroundSize(n));
        }
        let bases: BTreeSet<Subset> = bases.into_iter().collect();
        let k = bases.iter().next().ok_or(PositroidError::NoBases)?.len();
        let ground = Subset::full(n);
        for &b in &bases {
            if !b.is_subset(ground) {
                return Err(PositroidError::OutsideGround(b));
            }
            if b.len() != k {
                return Err(PositroidError::RaggedBases {
                    basis: b,
                    expected: k,
                    found: b.len(),
                });
            }
        }
        Ok(Positroid { n, k, bases })
    }

    /// `{ H : H ≥_i I_i for every i }`, by filtering all `k`-subsets.
    pub fn from_necklace(nk: &GrassmannNecklace) -> Result<Self, PositroidError> {
        nk.validate().map_err(NecklaceError::Invalid)?;
        let (n, k) = (nk.n(), nk.k());
        let bases: BTreeSet<Subset> = k_subsets(n, k)
            .filter(|&h| (1..=n).all(|i| gale_geq_unchecked(h, nk.term(i), i, n)))
            .collect();
        debug_assert!(bases.contains(&nk.term(1)));
        Ok(Positroid { n, k, bases })
    }

    pub fn from_decorated(dp: &DecoratedPermutation) -> Self {
        Positroid::from_necklace(&GrassmannNecklace::from_decorated(dp))
            .expect("necklaces of decorated permutations are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bases(&self) -> &BTreeSet<Subset> {
        &self.bases
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.bases.contains(&s)
    }

    pub fn verify_exchange_axiom(&self) -> Result<(), ExchangeCounterexample> {
        for &first in &self.bases {
            for &second in &self.bases {
                for element in first.difference(second).iter() {
                    let base = first.without(element);
                    let found = second
                        .difference(first)
                        .iter()
                        .any(|j| self.bases.contains(&base.with(j)));
                    if !found {
                        return Err(ExchangeCounterexample {
                            first,
                            second,
                            element,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `max |S ∩ B|` over all bases.
    pub fn rank(&self, s: Subset) -> usize {
        self.bases
            .iter()
            .map(|b| b.intersection(s).len())
            .max()
            .unwrap_or(0)
    }

    /// The basis below every other basis in the Gale order starting at
    /// `shift`, if there is one. For a matroid there always is.
    pub fn gale_minimum(&self, shift: usize) -> Option<Subset> {
        self.bases.iter().copied().find(|&b| {
            self.bases
                .iter()
                .all(|&other| gale_geq_unchecked(other, b, shift, self.n))
        })
    }

    pub fn is_independent(&self, s: Subset) -> bool {
        self.bases.iter().any(|b| s.is_subset(*b))
    }

    /// Connected components, each sorted, blocks ordered by least element.
    ///
    /// `i` and `j` share a component when `B - i + j` is a basis for some
    /// basis `B ∋ i` with `j ∉ B`; the transitive closure of that relation
    /// is the circuit relation. Loops and coloops stay singletons.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        let outside = |b: Subset| Subset::full(n).difference(b);
        for &b in &self.bases {
            for i in b.iter() {
                for j in outside(b).iter() {
                    if self.bases.contains(&b.without(i).with(j)) {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of_root = vec![usize::MAX; n + 1];
        for e in 1..=n {
            let r = find(&mut parent, e);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of_root[r]].push(e);
        }
        blocks
    }
}

/// Summands of the cell dimension: `r[i, f(i)] = |I_i ∩ [i..f(i)]|` for each
/// `i`, where `f` is the affine lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionTerms {
    pub lift: Vec<usize>,
    pub ranks: Vec<usize>,
    pub k: usize,
}

impl DimensionTerms {
    pub fn of(dp: &DecoratedPermutation) -> Self {
        let lift = dp.affine_lift();
        let nk = GrassmannNecklace::from_decorated(dp);
        let ranks = (1..=dp.n())
            .map(|i| {
                nk.cyclic_interval_rank(i, lift.apply(i))
                    .expect("lift stays within i..=i+n")
            })
            .collect();
        DimensionTerms {
            lift: lift.values().to_vec(),
            ranks,
            k: nk.k(),
        }
    }

    pub fn rank_sum(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn dimension(&self) -> usize {
        self.rank_sum() - self.k * self.k
    }
}

/// `Σ r[i, f(i)] − k²`.
pub fn cell_dimension(dp: &DecoratedPermutation) -> usize {
    DimensionTerms::of(dp).dimension()
}

/// Rank of each cyclic interval `[i..f(i)]` computed from the bases rather
/// than the necklace.
pub fn interval_ranks_from_bases(m: &Positroid, lift: &[usize]) -> Vec<usize> {
    lift.iter()
        .enumerate()
        .map(|(idx, &f)| m.rank(cyclic_interval(idx + 1, f, m.n())))
        .collect()
}

/// True when no two blocks interleave as `a < b < c < d` with `a, c` in one
/// block and `b, d` in the other.
pub fn is_non_crossing(blocks: &[Vec<usize>]) -> bool {
    let mut owner = std::collections::BTreeMap::new();
    for (idx, block) in blocks.iter().enumerate() {
        for &e in block {
            owner.insert(e, idx);
        }
    }
    let elems: Vec<(usize, usize)> = owner.into_iter().collect();
    let m = elems.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                for d in c + 1..m {
                    let (x, y) = (elems[a].1, elems[b].1);
                    if x != y && elems[c].1 == x && elems[d].1 == y {
                        return false;
                    }
                }
            }
        }
    }
    true
}
