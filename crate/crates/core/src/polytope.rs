//! Positroid polytopes: vertices, the cyclic-interval description, affine
//! dimension, facets, and the cells met while gluing crossings one by one.
//!
//! All arithmetic is exact.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::decoration::DecorationRule;
use crate::linalg::{self, rat, Echelon, Rational};
use crate::perm::{DecoratedPermutation, PermError, WiringWord};
use crate::positroid::{cell_dimension, Positroid};
use crate::subset::{cyclic_interval, Subset};

/// Ground sets larger than this are refused by facet enumeration.
pub const MAX_FACET_GROUND: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("facet enumeration supports n <= {MAX_FACET_GROUND}, got n = {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `Σ_{i ∈ [start..end]} x_i <= bound`, the interval read cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalInequality {
    pub start: usize,
    pub end: usize,
    pub members: Subset,
    pub bound: usize,
}

/// A linear constraint `coeffs · x <= rhs`, or `= rhs` for the level equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
    pub equality: bool,
}

impl Constraint {
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (&c, v)| acc + rat(c) * v)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.value(x);
        if self.equality {
            v == rat(self.rhs)
        } else {
            v <= rat(self.rhs)
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.value(x) == rat(self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositroidPolytope {
    n: usize,
    k: usize,
    vertices: Vec<Subset>,
    intervals: Vec<IntervalInequality>,
}

/// A facet: `normal · x <= rhs` with equality exactly on `vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub rhs: i64,
    pub vertices: Vec<Subset>,
}

impl PositroidPolytope {
    pub fn from_positroid(m: &Positroid) -> Self {
        let n = m.n();
        let mut intervals = Vec::new();
        for start in 1..=n {
            for len in 1..n {
                let end = start + len - 1;
                let members = cyclic_interval(start, end, n);
                intervals.push(IntervalInequality {
                    start,
                    end,
                    members,
                    bound: m.rank(members),
                });
            }
        }
        PositroidPolytope {
            n,
            k: m.k(),
            vertices: m.bases().iter().copied().collect(),
            intervals,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Vertices as the bases they indicate.
    pub fn vertices(&self) -> &[Subset] {
        &self.vertices
    }

    pub fn vertex_vectors(&self) -> Vec<Vec<u8>> {
        self.vertices.iter().map(|v| v.indicator(self.n)).collect()
    }

    pub fn interval_inequalities(&self) -> &[IntervalInequality] {
        &self.intervals
    }

    /// Level equation first, then `x_i >= 0`, `x_i <= 1`, then the interval cuts.
    pub fn constraints(&self) -> Vec<Constraint> {
        let n = self.n;
        let mut out = vec![Constraint {
            coeffs: vec![1; n],
            rhs: self.k as i64,
            equality: true,
        }];
        for i in 0..n {
            let mut c = vec![0; n];
            c[i] = -1;
            out.push(Constraint {
                coeffs: c,
                rhs: 0,
                equality: false,
            });
        }
        for i in 0..n {
            let mut c = vec![0; n];
            c[i] = 1;
            out.push(Constraint {
                coeffs: c,
                rhs: 1,
                equality: false,
            });
        }
        for iv in &self.intervals {
            out.push(Constraint {
                coeffs: (1..=n).map(|e| iv.members.contains(e) as i64).collect(),
                rhs: iv.bound as i64,
                equality: false,
            });
        }
        out
    }

    /// Dimension of the affine hull of the vertices.
    pub fn dimension(&self) -> usize {
        let vs = self.vertex_vectors();
        let Some(first) = vs.first() else { return 0 };
        let diffs: Vec<Vec<i64>> = vs[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(first)
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect()
            })
            .collect();
        linalg::rank(&diffs)
    }

    /// Facets of the convex hull of the vertices, by the double description
    /// method on the cone of valid inequalities.
    pub fn facets(&self) -> Result<Vec<Facet>, PolytopeError> {
        if self.n > MAX_FACET_GROUND {
            return Err(PolytopeError::TooLarge(self.n));
        }
        let vs = self.vertex_vectors();
        let points: Vec<Vec<i64>> = vs
            .iter()
            .map(|v| v.iter().map(|&x| x as i64).collect())
            .collect();
        let mut facets: Vec<Facet> = hull_facets(&points)
            .into_iter()
            .map(|(normal, rhs, tight)| Facet {
                normal,
                rhs,
                vertices: tight.into_iter().map(|i| self.vertices[i]).collect(),
            })
            .collect();
        facets.sort_by(|a, b| {
            a.vertices
                .cmp(&b.vertices)
                .then_with(|| a.normal.cmp(&b.normal))
        });
        Ok(facets)
    }

    /// Vertices of `{x : constraints()}` found by brute force: every choice of
    /// `n` linearly independent tight constraints containing the level
    /// equation, solved exactly and kept when feasible.
    pub fn vertices_from_inequalities(&self) -> Vec<Vec<Rational>> {
        let all = self.constraints();
        let (level, rest) = all.split_first().expect("level equation present");
        let ineqs: Vec<Constraint> = rest
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let to_rat =
            |c: &Constraint| -> Vec<Rational> { c.coeffs.iter().map(|&v| rat(v)).collect() };
        let mut start = Echelon::new();
        start.push(&to_rat(level), rat(level.rhs));

        let mut found = BTreeSet::new();
        let mut stack = vec![(start, 0usize)];
        while let Some((ech, from)) = stack.pop() {
            if ech.rank() == self.n {
                let x = ech.solution(self.n).expect("full rank");
                if all.iter().all(|c| c.holds(&x)) {
                    found.insert(x);
                }
                continue;
            }
            let needed = self.n - ech.rank();
            for idx in from..ineqs.len() {
                if ineqs.len() - idx < needed {
                    break;
                }
                let mut next = ech.clone();
                if next.push(&to_rat(&ineqs[idx]), rat(ineqs[idx].rhs)) {
                    stack.push((next, idx + 1));
                }
            }
        }
        found.into_iter().collect()
    }
}

/// Facets of `conv(points)` as `(normal, rhs, tight point indices)` with
/// `normal · x <= rhs`. Normals are supported on a set of coordinates that
/// parametrise the affine hull, and are primitive integer vectors.
pub fn hull_facets(points: &[Vec<i64>]) -> Vec<(Vec<i64>, i64, Vec<usize>)> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let dim_ambient = first.len();

    // pick coordinates on which the affine hull projects bijectively
    let mut ech = Echelon::new();
    let mut basis_pts = vec![0usize];
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff: Vec<Rational> = p.iter().zip(first).map(|(&a, &b)| rat(a - b)).collect();
        if ech.push(&diff, Rational::zero()) {
            basis_pts.push(i);
        }
    }
    let d = ech.rank();
    if d == 0 {
        return Vec::new();
    }
    let mut coords = ech.pivots();
    coords.sort_unstable();
    let project = |p: &[i64]| -> Vec<i128> {
        let mut v: Vec<i128> = coords.iter().map(|&c| p[c] as i128).collect();
        v.push(1);
        v
    };
    let lifted: Vec<Vec<i128>> = points.iter().map(|p| project(p)).collect();
    let m = lifted.len();
    assert!(m <= 128, "tight sets are tracked in a u128");

    let dot = |a: &[i128], b: &[i128]| -> i128 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    // initial simplicial cone from d + 1 affinely independent points
    let square: Vec<Vec<Rational>> = basis_pts
        .iter()
        .map(|&i| lifted[i].iter().map(|&v| rat(v as i64)).collect())
        .collect();
    let inv = linalg::inverse(&square).expect("affinely independent points");
    let mut rays: Vec<(Vec<i128>, u128)> = (0..=d)
        .map(|j| {
            let col: Vec<Rational> = inv.iter().map(|row| row[j]).collect();
            let ray: Vec<i128> = linalg::primitive(&col)
                .into_iter()
                .map(i128::from)
                .collect();
            (ray, 0u128)
        })
        .collect();
    let mut processed: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = basis_pts.clone();
    order.extend((0..m).filter(|i| !basis_pts.contains(i)));

    for &c in &order {
        let row = &lifted[c];
        let bit = 1u128 << c;
        let vals: Vec<i128> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let mut next: Vec<(Vec<i128>, u128)> = Vec::new();
        for (idx, (r, z)) in rays.iter().enumerate() {
            match vals[idx].signum() {
                1 => next.push((r.clone(), *z)),
                0 => next.push((r.clone(), *z | bit)),
                _ => {}
            }
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1 & rays[q].1;
                if (common.count_ones() as usize) + 1 < d {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != q)
                    .all(|o| rays[o].1 & common != common);
                if !adjacent {
                    continue;
                }
                let (vp, vq) = (vals[p], vals[q]);
                let combo: Vec<i128> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(&a, &b)| vp * a - vq * b)
                    .collect();
                next.push((linalg::primitive_int(&combo), common | bit));
            }
        }
        rays = next;
        processed.push(c);
    }

    rays.into_iter()
        .map(|(ray, tight)| {
            // ray = (a, b) with a·q + b >= 0  <=>  -a·q <= b
            let mut normal = vec![0i64; dim_ambient];
            for (slot, &c) in coords.iter().enumerate() {
                normal[c] = -(ray[slot] as i64);
            }
            let rhs = ray[d] as i64;
            let members = (0..m).filter(|&i| tight & (1u128 << i) != 0).collect();
            (normal, rhs, members)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub label: String,
    /// Number of letters glued so far.
    pub step: usize,
    pub word: WiringWord,
    pub decorated: DecoratedPermutation,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellChain {
    pub steps: Vec<ChainStep>,
}

impl CellChain {
    pub fn dimensions(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.dimension).collect()
    }

    /// Steps whose dimension does not exceed the previous one.
    pub fn non_increasing_steps(&self) -> Vec<usize> {
        self.steps
            .windows(2)
            .filter(|w| w[1].dimension <= w[0].dimension)
            .map(|w| w[1].step)
            .collect()
    }
}

/// One step per prefix of `word`, from the empty word up to the whole word.
pub fn decomposition_chain(word: &WiringWord, rule: &dyn DecorationRule) -> CellChain {
    let steps = (0..=word.len())
        .map(|t| {
            let prefix = word.prefix(t);
            let decorated = rule.decorate(prefix.to_permutation(), t);
            ChainStep {
                label: format!("t={t}"),
                step: t,
                dimension: cell_dimension(&decorated),
                word: prefix,
                decorated,
            }
        })
        .collect();
    CellChain { steps }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRemoval {
    pub word: WiringWord,
    pub decorated: DecoratedPermutation,
    pub dimension: usize,
    pub original_dimension: usize,
    /// Bases of the new positroid are a subset of the original's.
    pub contained: bool,
}

/// Deletes letter `index` and compares the resulting cell with the original.
/// Both are decorated by `rule` at the step of the full word.
pub fn face_of_removal(
    word: &WiringWord,
    index: usize,
    rule: &dyn DecorationRule,
) -> Result<FaceRemoval, PolytopeError> {
    let shorter = word.remove_letter(index)?;
    let step = word.len();
    let original = rule.decorate(word.to_permutation(), step);
    let decorated = rule.decorate(shorter.to_permutation(), step);
    let before = Positroid::from_decorated(&original);
    let after = Positroid::from_decorated(&decorated);
    Ok(FaceRemoval {
        dimension: cell_dimension(&decorated),
        original_dimension: cell_dimension(&original),
        contained: after.bases().is_subset(before.bases()),
        word: shorter,
        decorated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoration::Uniform;
    use crate::perm::{Color, Permutation};

    fn set(v: &[usize]) -> Subset {
        v.iter().copied().collect()
    }

    fn polytope_of(images: &[usize]) -> PositroidPolytope {
        let dp =
            DecoratedPermutation::uniform(Permutation::new(images.to_vec()).unwrap(), Color::Right);
        PositroidPolytope::from_positroid(&Positroid::from_decorated(&dp))
    }

    fn word(n: usize, letters: &[usize]) -> WiringWord {
        WiringWord::new(n, letters.to_vec()).unwrap()
    }

    const RIGHT: Uniform = Uniform(Color::Right);

    #[test]
    fn market_polytope() {
        let p = polytope_of(&[2, 4, 1, 3]);
        assert_eq!(p.vertices().len(), 5);
        assert!(p
            .vertex_vectors()
            .iter()
            .all(|v| v.iter().map(|&x| x as usize).sum::<usize>() == 2));
        let cut = p
            .interval_inequalities()
            .iter()
            .find(|iv| iv.start == 1 && iv.end == 2)
            .unwrap();
        assert_eq!(cut.bound, 1);
        assert_eq!(p.dimension(), 3);
    }

    #[test]
    fn market_facets_form_a_square_pyramid() {
        let facets = polytope_of(&[2, 4, 1, 3]).facets().unwrap();
        assert_eq!(facets.len(), 5);
        let mut sizes: Vec<usize> = facets.iter().map(|f| f.vertices.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 3, 3, 4]);
        let square = facets.iter().find(|f| f.vertices.len() == 4).unwrap();
        assert_eq!(
            square.vertices,
            vec![set(&[1, 3]), set(&[1, 4]), set(&[2, 3]), set(&[2, 4])]
        );
        let apex = set(&[3, 4]);
        assert!(facets
            .iter()
            .filter(|f| f.vertices.len() == 3)
            .all(|f| f.vertices.contains(&apex)));
    }

    #[test]
    fn octahedron() {
        let p = polytope_of(&[3, 4, 1, 2]);
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.dimension(), 3);
        let facets = p.facets().unwrap();
        assert_eq!(facets.len(), 8);
        assert!(facets.iter().all(|f| f.vertices.len() == 3));
    }

    #[test]
    fn point_polytope() {
        let p = polytope_of(&[1, 2, 3, 4]);
        assert_eq!(p.vertices(), &[Subset::EMPTY]);
        assert_eq!(p.dimension(), 0);
        assert!(p.facets().unwrap().is_empty());
    }

    #[test]
    fn facet_inequalities_are_valid() {
        let p = polytope_of(&[2, 4, 1, 3]);
        for f in p.facets().unwrap() {
            for v in p.vertex_vectors() {
                let lhs: i64 = f.normal.iter().zip(&v).map(|(&a, &x)| a * x as i64).sum();
                let on = f.vertices.iter().any(|s| s.indicator(4) == v);
                assert!(lhs <= f.rhs);
                assert_eq!(lhs == f.rhs, on);
            }
        }
    }

    #[test]
    fn h_description_vertices() {
        let p = polytope_of(&[2, 4, 1, 3]);
        let got = p.vertices_from_inequalities();
        let want: Vec<Vec<Rational>> = p
            .vertex_vectors()
            .iter()
            .map(|v| v.iter().map(|&x| rat(x as i64)).collect())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn too_large_for_facets() {
        let dp = DecoratedPermutation::uniform(Permutation::identity(9), Color::Right);
        let p = PositroidPolytope::from_positroid(&Positroid::from_decorated(&dp));
        assert_eq!(p.facets(), Err(PolytopeError::TooLarge(9)));
    }

    #[test]
    fn market_chain() {
        let chain = decomposition_chain(&word(4, &[2, 3, 1]), &RIGHT);
        assert_eq!(chain.dimensions(), vec![0, 1, 2, 3]);
        assert_eq!(chain.steps[3].decorated.perm().images(), &[2, 4, 1, 3]);
        let empty = decomposition_chain(&word(4, &[]), &RIGHT);
        assert_eq!(empty.dimensions(), vec![0]);
        let twice = decomposition_chain(&word(4, &[1, 1]), &RIGHT);
        assert_eq!(twice.dimensions(), vec![0, 1, 0]);
        assert_eq!(twice.non_increasing_steps(), vec![2]);
    }

    #[test]
    fn removing_a_crossing() {
        let face = face_of_removal(&word(4, &[2, 3, 1]), 0, &RIGHT).unwrap();
        assert_eq!(face.decorated.perm().images(), &[2, 1, 4, 3]);
        assert_eq!(face.dimension, 2);
        assert_eq!(face.original_dimension, 3);
        assert!(face.contained);
        let single = face_of_removal(&word(4, &[1]), 0, &RIGHT).unwrap();
        assert!(single.decorated.perm().is_identity());
        assert_eq!(single.dimension, 0);
        // {∅} is not a subset of {{1},{2}}: the rank drops from 1 to 0
        assert!(!single.contained);
        assert!(face_of_removal(&word(4, &[]), 0, &RIGHT).is_err());
        assert!(face_of_removal(&word(4, &[1]), 3, &RIGHT).is_err());
    }

    #[test]
    fn non_reduced_removal_reports_actual_values() {
        // (s1, s1, s2): removing the first s1 leaves (s1, s2)
        let face = face_of_removal(&word(3, &[1, 1, 2]), 0, &RIGHT).unwrap();
        assert_eq!(face.original_dimension, 1);
        assert_eq!(face.dimension, 2);
    }
}
