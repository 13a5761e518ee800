//! Phase-one simplex over the rationals for conic feasibility.
//!
//! Solves `G x = v, x ≥ 0`. On failure the final simplex multipliers give a
//! Farkas certificate `w` with `w·G_j ≥ 0` for every column and `w·v < 0`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

/// `columns[j]` is the `j`-th generator, of the same length as `target`.
pub fn conic_combination(target: &[Rational], columns: &[Vec<Rational>]) -> LpOutcome {
    let m = target.len();
    let k = columns.len();
    let width = k + m + 1;
    let rhs = width - 1;
    let flip: Vec<bool> = target.iter().map(|v| v.is_negative()).collect();
    let signed = |i: usize, x: &Rational| if flip[i] { -x } else { x.clone() };

    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            for (j, col) in columns.iter().enumerate() {
                row[j] = signed(i, &col[i]);
            }
            row[k + i] = Rational::one();
            row[rhs] = signed(i, &target[i]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();
    let mut z = vec![Rational::zero(); width];
    for row in &t {
        for j in (0..k).chain(std::iter::once(rhs)) {
            z[j] -= &row[j];
        }
    }

    // Bland's rule: lowest-index entering column, lowest-index leaving variable on ties.
    while let Some(e) = (0..k + m).find(|&j| z[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][e].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][e];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            unreachable!("phase-one objective is bounded below");
        };
        let inv = t[r][e].recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[e].is_zero() {
                let f = row[e].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        let f = z[e].clone();
        for (x, y) in z.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
        basis[r] = e;
    }

    if z[rhs].is_zero() {
        let mut x = vec![Rational::zero(); k];
        for (i, &b) in basis.iter().enumerate() {
            if b < k {
                x[b] = t[i][rhs].clone();
            }
        }
        LpOutcome::Feasible(x)
    } else {
        let w = (0..m)
            .map(|i| {
                let y = Rational::one() - &z[k + i];
                if flip[i] {
                    y
                } else {
                    -y
                }
            })
            .collect();
        LpOutcome::Infeasible(w)
    }
}
