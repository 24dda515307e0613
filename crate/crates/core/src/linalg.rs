//! Exact rational linear algebra for the small systems the polytope code needs.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Rows kept in reduced echelon form as they are added.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Rational>, Rational)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `coeffs · x = rhs`. Returns false, leaving `self` unchanged, when
    /// the row is a combination of the rows already present.
    pub fn push(&mut self, coeffs: &[Rational], rhs: Rational) -> bool {
        let mut row = coeffs.to_vec();
        let mut b = rhs;
        for (pivot, prow, prhs) in &self.rows {
            let factor = row[*pivot];
            if !factor.is_zero() {
                for (x, p) in row.iter_mut().zip(prow) {
                    *x -= factor * p;
                }
                b -= factor * prhs;
            }
        }
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = row[pivot];
        for x in row.iter_mut() {
            *x /= lead;
        }
        b /= lead;
        for (_, prow, prhs) in self.rows.iter_mut() {
            let factor = prow[pivot];
            if !factor.is_zero() {
                for (x, r) in prow.iter_mut().zip(&row) {
                    *x -= factor * r;
                }
                *prhs -= factor * b;
            }
        }
        self.rows.push((pivot, row, b));
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _, _)| *p).collect()
    }

    /// The unique solution once the rank equals the number of unknowns.
    pub fn solution(&self, unknowns: usize) -> Option<Vec<Rational>> {
        if self.rows.len() != unknowns {
            return None;
        }
        let mut x = vec![Rational::zero(); unknowns];
        for (pivot, _, b) in &self.rows {
            x[*pivot] = *b;
        }
        Some(x)
    }
}

/// Rank of a set of integer vectors.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        let coeffs: Vec<Rational> = r.iter().map(|&v| rat(v)).collect();
        e.push(&coeffs, Rational::zero());
    }
    e.rank()
}

/// Scales a rational vector to the primitive integer vector pointing the same way.
pub fn primitive(v: &[Rational]) -> Vec<i64> {
    let lcm = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * rat(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g <= 1 {
        ints
    } else {
        ints.iter().map(|x| x / g).collect()
    }
}

pub fn primitive_int(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let size = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..size).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let lead = a[col][col];
        for x in a[col].iter_mut() {
            *x /= lead;
        }
        for r in 0..size {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[size..].to_vec()).collect())
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}
