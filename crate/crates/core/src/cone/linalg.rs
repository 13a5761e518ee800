//! Exact rank and kernel computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank(rows: &[&[BigInt]]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.to_vec()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                row[j] = &row[j] * &prow[c] - &factor * &prow[j];
            }
            reduce_content(row);
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn reduce_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g > BigInt::from(1) {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{x : A x = 0}` for integer `A` with `cols` columns.
pub fn kernel(rows: &[&[BigInt]], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::from_integer(BigInt::from(1));
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            crate::rational::to_primitive(&v)
        })
        .collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rational(a: &[BigInt], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| y * x).sum()
}

pub fn is_positive(x: &BigInt) -> bool {
    x.is_positive()
}
