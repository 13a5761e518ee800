//! Incremental double description for pointed cones `{x : A x ≥ 0}`.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{dot, kernel, rank};
use crate::error::{Error, Result};
use crate::rational::primitive;

struct Candidate {
    dir: Vec<BigInt>,
    zeros: FixedBitSet,
}

/// Extreme rays of `{x : rows · x ≥ 0}`, each primitive, sorted lexicographically.
pub fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>> {
    let refs: Vec<&[BigInt]> = rows.iter().map(Vec::as_slice).collect();
    if rank(&refs) < dim {
        let line = kernel(&refs, dim).into_iter().next().expect("rank deficit implies a kernel");
        return Err(Error::NotPointed { direction: line.iter().map(|x| x.to_string()).collect() });
    }

    let basis = independent_rows(&refs, dim);
    let mut processed = FixedBitSet::with_capacity(rows.len());
    for &b in &basis {
        processed.insert(b);
    }
    let mut rays: Vec<Candidate> = basis
        .iter()
        .map(|&j| {
            let others: Vec<&[BigInt]> = basis.iter().filter(|&&b| b != j).map(|&b| refs[b]).collect();
            let mut dir = kernel(&others, dim).pop().expect("d-1 independent rows leave a line");
            if dot(refs[j], &dir).is_negative() {
                dir.iter_mut().for_each(|x| *x = -x.clone());
            }
            let mut zeros = FixedBitSet::with_capacity(rows.len());
            basis.iter().filter(|&&b| b != j).for_each(|&b| zeros.insert(b));
            Candidate { dir, zeros }
        })
        .collect();

    let mut pending: Vec<usize> = (0..rows.len()).filter(|r| !processed.contains(*r)).collect();
    while !pending.is_empty() {
        let values: Vec<Vec<BigInt>> =
            pending.iter().map(|&r| rays.iter().map(|c| dot(refs[r], &c.dir)).collect()).collect();
        let pick = (0..pending.len())
            .min_by_key(|&i| (values[i].iter().filter(|v| v.is_zero()).count(), pending[i]))
            .expect("pending is nonempty");
        let row = pending.remove(pick);
        let vals = &values[pick];

        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Candidate> = Vec::with_capacity(rays.len());
        for &i in &pos {
            next.push(Candidate { dir: rays[i].dir.clone(), zeros: rays[i].zeros.clone() });
        }
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let tight: Vec<&[BigInt]> = common.ones().map(|r| refs[r]).collect();
                if rank(&tight) + 2 != dim {
                    continue;
                }
                let dir: Vec<BigInt> = rays[q]
                    .dir
                    .iter()
                    .zip(&rays[p].dir)
                    .map(|(xq, xp)| &vals[p] * xq - &vals[q] * xp)
                    .collect();
                common.insert(row);
                next.push(Candidate { dir: primitive(dir), zeros: common });
            }
        }
        for (i, c) in rays.iter().enumerate() {
            if vals[i].is_zero() {
                let mut zeros = c.zeros.clone();
                zeros.insert(row);
                next.push(Candidate { dir: c.dir.clone(), zeros });
            }
        }
        processed.insert(row);
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|c| primitive(c.dir)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Indices of the first `dim` linearly independent rows, scanning in order.
fn independent_rows(rows: &[&[BigInt]], dim: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    for i in 0..rows.len() {
        let mut trial: Vec<&[BigInt]> = chosen.iter().map(|&c| rows[c]).collect();
        trial.push(rows[i]);
        if rank(&trial) == trial.len() {
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    chosen
}
