//! Conversions between library types and the oracle crate's plain vectors.

#![allow(dead_code)]

use stockpoly_core::perm::{Color, DecoratedPermutation, Permutation};
use stockpoly_core::subset::Subset;

pub fn decorated(p: &[usize], left: &[usize]) -> DecoratedPermutation {
    let perm = Permutation::new(p.to_vec()).unwrap();
    DecoratedPermutation::with_colors(perm, |i| {
        if left.contains(&i) {
            Color::Left
        } else {
            Color::Right
        }
    })
}

pub fn subset(v: &[usize]) -> Subset {
    v.iter().copied().collect()
}

pub fn sets(v: impl IntoIterator<Item = Subset>) -> Vec<Vec<usize>> {
    v.into_iter().map(Subset::to_vec).collect()
}

/// Every decorated permutation of size `n`, paired with its oracle form.
pub fn cells(n: usize) -> Vec<(DecoratedPermutation, Vec<usize>, Vec<usize>)> {
    stockpoly_oracles::decorated_permutations(n)
        .into_iter()
        .map(|(p, left)| (decorated(&p, &left), p, left))
        .collect()
}
