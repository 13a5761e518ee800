//! Seeded random generators for polymatroids and symmetric set functions.

use num_bigint::BigInt;
use rand::Rng;

use crate::partition::Partition;
use crate::rational::{int, Rational};
use crate::setfn::{GroundSet, SetFunction, SubsetMask};
use crate::symmetry::{from_sym, symmetrize, SymIndexSet, SymVector};

/// A random nonnegative combination of truncated rank functions `min(k, |A ∩ S|)`.
pub fn random_polymatroid<R: Rng>(ground: GroundSet, rng: &mut R) -> SetFunction {
    let n = ground.size();
    let terms = rng.gen_range(1..=n + 2);
    let mut acc = SetFunction::zero(ground);
    for _ in 0..terms {
        let support = SubsetMask(rng.gen_range(1..(1u32 << n)));
        let k = rng.gen_range(1..=support.len()) as i64;
        let c = Rational::new(BigInt::from(rng.gen_range(1..=6)), BigInt::from(rng.gen_range(1..=3)));
        let f = SetFunction::from_fn(ground, |a| int(k.min(a.intersection(support).len() as i64)));
        acc = acc.plus(&f.scaled(&c)).expect("same ground set");
    }
    acc
}

/// A random `p`-symmetric polymatroid.
pub fn random_symmetric_polymatroid<R: Rng>(p: &Partition, rng: &mut R) -> SetFunction {
    symmetrize(&random_polymatroid(p.ground(), rng), p).expect("same ground set")
}

/// A random `p`-symmetric function that is a polymatroid about half the time.
///
/// The other half perturbs one `s`-coordinate of a symmetric polymatroid, which
/// usually lands just outside the cone.
pub fn random_symmetric<R: Rng>(p: &Partition, rng: &mut R) -> SetFunction {
    let h = random_symmetric_polymatroid(p, rng);
    if rng.gen_bool(0.5) {
        return h;
    }
    let index = SymIndexSet::new(p);
    let target = rng.gen_range(1..index.len());
    let delta = Rational::new(BigInt::from(rng.gen_range(-4..=4)), BigInt::from(rng.gen_range(1..=2)));
    let s = crate::symmetry::to_sym(&h, p).expect("symmetrized input");
    let values: Vec<Rational> = s
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| if i == target { v + &delta } else { v.clone() })
        .collect();
    from_sym(&SymVector::new(index, values).expect("origin untouched"))
}

/// A random set function with small rational values, not necessarily monotone.
pub fn random_function<R: Rng>(ground: GroundSet, rng: &mut R) -> SetFunction {
    SetFunction::from_fn(ground, |a| {
        if a.is_empty() {
            int(0)
        } else {
            Rational::new(BigInt::from(rng.gen_range(-5..=9)), BigInt::from(rng.gen_range(1..=4)))
        }
    })
}
