//! Slow, direct reference implementations for tests.
//!
//! Nothing here depends on `stockpoly-core`. Everything is 1-based: a
//! permutation is its one-line notation, a set is a sorted `Vec<usize>`, and
//! a decoration is the list of fixed points coloured left (coloops).

pub type Set = Vec<usize>;

/// All permutations of `1..=n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v - 1] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every permutation with every left/right colouring of its fixed points,
/// as `(perm, left fixed points)`.
pub fn decorated_permutations(n: usize) -> Vec<(Vec<usize>, Set)> {
    let mut out = Vec::new();
    for p in permutations(n) {
        let fixed: Vec<usize> = (1..=n).filter(|&i| p[i - 1] == i).collect();
        for mask in 0u32..(1 << fixed.len()) {
            let left = fixed
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &i)| i)
                .collect();
            out.push((p.clone(), left));
        }
    }
    out
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    inv
}

/// Grassmann necklace, term `i` computed by relabelling so that `i` becomes
/// 1 and taking the anti-exceedance values plus the coloops.
pub fn necklace(p: &[usize], left: &[usize]) -> Vec<Set> {
    let n = p.len();
    let mut terms = Vec::with_capacity(n);
    for i in 1..=n {
        let to = |x: usize| (x + n - i) % n + 1;
        let from = |y: usize| (y + i - 2) % n + 1;
        // conjugate: q(y) = to(p(from(y)))
        let q: Vec<usize> = (1..=n).map(|y| to(p[from(y) - 1])).collect();
        let q_inv = inverse(&q);
        let mut term: Set = (1..=n)
            .filter(|&y| q_inv[y - 1] > y)
            .map(from)
            .chain(left.iter().copied())
            .collect();
        term.sort_unstable();
        terms.push(term);
    }
    terms
}

pub fn affine_lift(p: &[usize], left: &[usize]) -> Vec<usize> {
    let n = p.len();
    (1..=n)
        .map(|i| {
            let v = p[i - 1];
            if v > i {
                v
            } else if v < i || left.contains(&i) {
                v + n
            } else {
                i
            }
        })
        .collect()
}

/// `#{i ∈ [n], j > i : f(i) > f(j)}` for the periodic extension of `f`.
pub fn affine_length(lift: &[usize]) -> usize {
    let n = lift.len();
    let f = |j: usize| lift[(j - 1) % n] + n * ((j - 1) / n);
    let mut count = 0;
    for i in 1..=n {
        for j in i + 1..=i + n {
            if f(i) > f(j) {
                count += 1;
            }
        }
    }
    count
}

/// `k(n - k)` minus the length of the affine lift.
pub fn cell_dimension(p: &[usize], left: &[usize]) -> usize {
    let n = p.len();
    let lift = affine_lift(p, left);
    let k = (1..=n).map(|i| lift[i - 1] - i).sum::<usize>() / n;
    k * (n - k) - affine_length(&lift)
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Set> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Set, out: &mut Vec<Set>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..=n {
            cur.push(e);
            go(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Elements `a, a+1, ..., a+len-1` read mod `n`.
pub fn cyclic_interval(a: usize, len: usize, n: usize) -> Set {
    let mut s: Set = (0..len).map(|t| (a - 1 + t) % n + 1).collect();
    s.sort_unstable();
    s
}

fn meet(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

/// Bases as the 0/1 points of the cyclic-interval inequality system whose
/// right-hand sides are read off the necklace.
pub fn bases_from_necklace(terms: &[Set]) -> Vec<Set> {
    let n = terms.len();
    let k = terms[0].len();
    let mut cuts = Vec::new();
    for a in 1..=n {
        for len in 1..n {
            let j = cyclic_interval(a, len, n);
            cuts.push((meet(&terms[a - 1], &j), j));
        }
    }
    k_subsets(n, k)
        .into_iter()
        .filter(|b| cuts.iter().all(|(r, j)| meet(b, j) <= *r))
        .collect()
}

pub fn rank(bases: &[Set], s: &[usize]) -> usize {
    bases.iter().map(|b| meet(b, s)).max().unwrap_or(0)
}

/// Basis exchange: for all `A, B` and `a ∈ A \ B` some `b ∈ B \ A` has
/// `A - a + b` a basis.
pub fn satisfies_exchange(bases: &[Set]) -> bool {
    let is_basis = |s: &Set| bases.contains(s);
    bases.iter().all(|a| {
        bases.iter().all(|b| {
            a.iter().filter(|x| !b.contains(x)).all(|&x| {
                b.iter().filter(|y| !a.contains(y)).any(|&y| {
                    let mut c: Set = a.iter().copied().filter(|&e| e != x).collect();
                    c.push(y);
                    c.sort_unstable();
                    is_basis(&c)
                })
            })
        })
    })
}

/// The basis that is componentwise smallest in the order starting at `shift`.
pub fn gale_minimum(bases: &[Set], shift: usize, n: usize) -> Option<Set> {
    let key = |s: &Set| {
        let mut v: Vec<usize> = s.iter().map(|&e| (e + n - shift) % n).collect();
        v.sort_unstable();
        v
    };
    bases
        .iter()
        .find(|b| {
            let kb = key(b);
            bases
                .iter()
                .all(|c| kb.iter().zip(key(c)).all(|(x, y)| *x <= y))
        })
        .cloned()
}

/// Connected components from the circuits: minimal subsets contained in no
/// basis.
pub fn components(bases: &[Set], n: usize) -> Vec<Set> {
    let subsets: Vec<Set> = (0u32..1 << n)
        .map(|m| (1..=n).filter(|e| m & (1 << (e - 1)) != 0).collect())
        .collect();
    let independent = |s: &Set| bases.iter().any(|b| s.iter().all(|e| b.contains(e)));
    let dependent: Vec<&Set> = subsets.iter().filter(|s| !independent(s)).collect();
    let circuits = dependent.iter().filter(|s| {
        s.iter().all(|&e| {
            let smaller: Set = s.iter().copied().filter(|&x| x != e).collect();
            independent(&smaller)
        })
    });
    let mut block: Vec<usize> = (0..=n).collect();
    for c in circuits {
        let target = block[c[0]];
        for &e in c.iter() {
            let old = block[e];
            for b in block.iter_mut() {
                if *b == old {
                    *b = target;
                }
            }
        }
    }
    let mut out: Vec<Set> = Vec::new();
    for e in 1..=n {
        match out.iter_mut().find(|s| block[s[0]] == block[e]) {
            Some(s) => s.push(e),
            None => out.push(vec![e]),
        }
    }
    out
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another.
pub fn is_non_crossing(blocks: &[Set]) -> bool {
    for (x, a) in blocks.iter().enumerate() {
        for (y, b) in blocks.iter().enumerate() {
            if x == y {
                continue;
            }
            for &p in a {
                for &q in b.iter().filter(|&&q| q > p) {
                    for &r in a.iter().filter(|&&r| r > q) {
                        if b.iter().any(|&s| s > r) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Follows each wire through the crossings. Returns `π` with `π(w)` the final
/// position of the wire that starts at position `w`, and whether no two wires
/// cross twice.
pub fn track_wires(n: usize, letters: &[usize]) -> (Vec<usize>, bool) {
    let mut at: Vec<usize> = (1..=n).collect(); // at[pos - 1] = wire
    let mut crossed = vec![vec![false; n + 1]; n + 1];
    let mut reduced = true;
    for &p in letters {
        let (u, v) = (at[p - 1], at[p]);
        if crossed[u][v] {
            reduced = false;
        }
        crossed[u][v] = true;
        crossed[v][u] = true;
        at.swap(p - 1, p);
    }
    (inverse(&at), reduced)
}

pub fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

/// Rank of integer vectors by fraction-free elimination.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = *x * a - *y * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn affine_dimension(points: &[Vec<i64>]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    int_rank(&diffs)
}

/// Facets as sets of point indices, given inequalities `a · x <= b` known to
/// include every facet: the proper tight sets of affine dimension one less
/// than the polytope's. Panics if a candidate is violated.
pub fn facets_among(points: &[Vec<i64>], candidates: &[(Vec<i64>, i64)]) -> Vec<Set> {
    let d = affine_dimension(points);
    let mut out: Vec<Set> = Vec::new();
    for (a, b) in candidates {
        let value = |p: &Vec<i64>| a.iter().zip(p).map(|(x, y)| x * y).sum::<i64>();
        assert!(
            points.iter().all(|p| value(p) <= *b),
            "candidate is not valid"
        );
        let tight: Set = (0..points.len())
            .filter(|&i| value(&points[i]) == *b)
            .collect();
        if tight.len() == points.len() || tight.is_empty() || d == 0 {
            continue;
        }
        let pts: Vec<Vec<i64>> = tight.iter().map(|&i| points[i].clone()).collect();
        if affine_dimension(&pts) + 1 == d && !out.contains(&tight) {
            out.push(tight);
        }
    }
    out.sort();
    out
}
