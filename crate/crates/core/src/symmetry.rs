//! Block permutations, the symmetrization map, `s`-coordinates and facet-orbit labels.
//!
//! A set function is `p`-symmetric when its value depends only on the
//! partition vector of the argument. Such functions are described by one
//! value per tuple `(k_1..k_t)` with `0 ≤ k_i ≤ n_i`; tuples are indexed in
//! lexicographic order, so `k_1` is the most significant digit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{invalid, parse_err, Error, Result};
use crate::partition::{partition_vector, Partition, PartitionVector};
use crate::rational::{self, Rational};
use crate::setfn::{elemental_facets, FacetId, SetFunction, SubsetMask};

/// Upper bound on `|Σ_p|` for explicit enumeration.
pub const MAX_GROUP_ORDER: u128 = 1_000_000;

/// A bijection of `1..n` that maps each block of a partition onto itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockPermutation {
    mapping: Vec<usize>,
}

impl BlockPermutation {
    /// `mapping[i - 1]` is the image of element `i`.
    pub fn new(p: &Partition, mapping: Vec<usize>) -> Result<Self> {
        let n = p.n();
        if mapping.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: mapping.len() });
        }
        let mut seen = vec![false; n + 1];
        for (idx, &img) in mapping.iter().enumerate() {
            if img == 0 || img > n || seen[img] {
                return Err(invalid(format!("{mapping:?} is not a permutation of 1..{n}")));
            }
            seen[img] = true;
            if p.block_of(idx + 1) != p.block_of(img) {
                return Err(invalid(format!("{} -> {img} leaves its block", idx + 1)));
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self { mapping: (1..=n).collect() }
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn image(&self, i: usize) -> usize {
        self.mapping[i - 1]
    }

    pub fn apply_to_mask(&self, a: SubsetMask) -> SubsetMask {
        SubsetMask::from_elements(a.elements().map(|i| self.image(i)))
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self { mapping: other.mapping.iter().map(|&i| self.image(i)).collect() }
    }
}

/// `|Σ_p| = Π n_i!`.
pub fn group_order(p: &Partition) -> u128 {
    p.block_sizes().iter().map(|&s| (1..=s as u128).product::<u128>()).product()
}

/// Every element of `Σ_p`.
pub fn block_permutations(p: &Partition) -> Result<Vec<BlockPermutation>> {
    let order = group_order(p);
    if order > MAX_GROUP_ORDER {
        return Err(Error::Unsupported(format!("|Σ_p| = {order} is too large to enumerate")));
    }
    let mut out = vec![BlockPermutation::identity(p.n())];
    for &block in p.blocks() {
        let elems: Vec<usize> = block.elements().collect();
        let perms = permutations(&elems);
        let mut next = Vec::with_capacity(out.len() * perms.len());
        for base in &out {
            for perm in &perms {
                let mut mapping = base.mapping.clone();
                for (src, dst) in elems.iter().zip(perm) {
                    mapping[src - 1] = *dst;
                }
                next.push(BlockPermutation { mapping });
            }
        }
        out = next;
    }
    Ok(out)
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// `σ'(h)(A) = h(σ(A))`.
pub fn apply_to_function(sigma: &BlockPermutation, h: &SetFunction) -> Result<SetFunction> {
    if sigma.mapping.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), actual: sigma.mapping.len() });
    }
    Ok(SetFunction::from_fn(h.ground(), |a| h.get(sigma.apply_to_mask(a)).clone()))
}

/// The tuples `(k_1..k_t)`, `0 ≤ k_i ≤ n_i`, of a partition in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymIndexSet {
    partition: Partition,
    sizes: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl SymIndexSet {
    pub fn new(p: &Partition) -> Self {
        let sizes = p.block_sizes();
        let mut strides = vec![1; sizes.len()];
        for l in (0..sizes.len().saturating_sub(1)).rev() {
            strides[l] = strides[l + 1] * (sizes[l + 1] + 1);
        }
        let len = sizes.iter().map(|s| s + 1).product();
        Self { partition: p.clone(), sizes, strides, len }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `n_p = Π(n_i + 1)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.sizes.len() || tuple.iter().zip(&self.sizes).any(|(k, n)| k > n) {
            return None;
        }
        Some(tuple.iter().zip(&self.strides).map(|(k, s)| k * s).sum())
    }

    pub fn tuple_at(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|s| {
                let k = idx / s;
                idx %= s;
                k
            })
            .collect()
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len).map(|i| self.tuple_at(i))
    }

    pub fn index_of_mask(&self, a: SubsetMask) -> usize {
        self.partition
            .blocks()
            .iter()
            .zip(&self.strides)
            .map(|(b, s)| a.intersection(*b).len() * s)
            .sum()
    }

    /// The first `k_i` elements of each block.
    pub fn representative(&self, tuple: &[usize]) -> SubsetMask {
        let mut m = SubsetMask::EMPTY;
        for (b, &k) in self.partition.blocks().iter().zip(tuple) {
            m = b.elements().take(k).fold(m, |m, e| m.with(e));
        }
        m
    }

    pub fn format_tuple(tuple: &[usize]) -> String {
        tuple.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Values of a `p`-symmetric function, one per tuple; zero at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymVector {
    index: SymIndexSet,
    values: Vec<Rational>,
}

impl SymVector {
    pub fn new(index: SymIndexSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != index.len() {
            return Err(Error::DimensionMismatch { expected: index.len(), actual: values.len() });
        }
        if !values[0].is_zero() {
            return Err(invalid("the value at the all-zero tuple must be 0"));
        }
        Ok(Self { index, values })
    }

    /// Builds from the `n_p − 1` coordinates following the origin.
    pub fn from_free(index: SymIndexSet, free: &[Rational]) -> Result<Self> {
        let mut values = Vec::with_capacity(free.len() + 1);
        values.push(Rational::zero());
        values.extend_from_slice(free);
        Self::new(index, values)
    }

    pub fn from_fn(index: SymIndexSet, mut f: impl FnMut(&[usize]) -> Rational) -> Result<Self> {
        let values = (0..index.len()).map(|i| f(&index.tuple_at(i))).collect();
        Self::new(index, values)
    }

    pub fn index(&self) -> &SymIndexSet {
        &self.index
    }

    pub fn partition(&self) -> &Partition {
        &self.index.partition
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Coordinates without the origin entry.
    pub fn free(&self) -> &[Rational] {
        &self.values[1..]
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&Rational> {
        self.index.index_of(tuple).map(|i| &self.values[i])
    }

    /// One line `k1,...,kt value` per tuple.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.values.iter().enumerate() {
            let tuple = self.index.tuple_at(i);
            out.push_str(&format!("{} {}\n", SymIndexSet::format_tuple(&tuple), rational::format(v)));
        }
        out
    }

    pub fn parse_text(s: &str, p: &Partition) -> Result<Self> {
        let index = SymIndexSet::new(p);
        let mut values: Vec<Option<Rational>> = vec![None; index.len()];
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (t, v) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(format!("expected `k1,...,kt value`, got {line:?}")))?;
            let tuple = t
                .split(',')
                .map(|k| k.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| parse_err(format!("bad tuple {t:?}")))?;
            let idx = index
                .index_of(&tuple)
                .ok_or_else(|| parse_err(format!("tuple {t:?} out of range for {p}")))?;
            if values[idx].replace(rational::parse(v)?).is_some() {
                return Err(parse_err(format!("tuple {t:?} repeated")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    parse_err(format!("missing tuple {}", SymIndexSet::format_tuple(&index.tuple_at(i))))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(index, values)
    }
}

/// `ψ_p(h)(A)`: the mean of `h(B)` over all `B` with the same partition vector as `A`.
pub fn symmetrize(h: &SetFunction, p: &Partition) -> Result<SetFunction> {
    check_ground(h, p)?;
    let index = SymIndexSet::new(p);
    let mut sums = vec![Rational::zero(); index.len()];
    for a in h.ground().subsets() {
        sums[index.index_of_mask(a)] += h.get(a);
    }
    let means: Vec<Rational> = sums
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let tuple = index.tuple_at(i);
            let count: BigInt = index.sizes().iter().zip(&tuple).map(|(&n, &k)| binomial(n, k)).product();
            s / Rational::from_integer(count)
        })
        .collect();
    Ok(SetFunction::from_fn(h.ground(), |a| means[index.index_of_mask(a)].clone()))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn check_ground(h: &SetFunction, p: &Partition) -> Result<()> {
    if h.ground() != p.ground() {
        return Err(Error::DimensionMismatch { expected: p.n(), actual: h.n() });
    }
    Ok(())
}

/// A pair of subsets with equal partition vectors but different values, if any.
pub fn symmetry_violation(h: &SetFunction, p: &Partition) -> Option<(SubsetMask, SubsetMask)> {
    if h.ground() != p.ground() {
        return None;
    }
    let index = SymIndexSet::new(p);
    let mut first: Vec<Option<SubsetMask>> = vec![None; index.len()];
    for a in h.ground().subsets() {
        let slot = &mut first[index.index_of_mask(a)];
        match slot {
            None => *slot = Some(a),
            Some(b) if h.get(*b) != h.get(a) => return Some((*b, a)),
            Some(_) => {}
        }
    }
    None
}

pub fn is_p_symmetric(h: &SetFunction, p: &Partition) -> bool {
    h.ground() == p.ground() && symmetry_violation(h, p).is_none()
}

/// `s(h, p)`.
pub fn to_sym(h: &SetFunction, p: &Partition) -> Result<SymVector> {
    check_ground(h, p)?;
    if let Some((a, b)) = symmetry_violation(h, p) {
        return Err(Error::Precondition(format!(
            "not {p}-symmetric: h({a}) = {} but h({b}) = {}",
            rational::format(h.get(a)),
            rational::format(h.get(b))
        )));
    }
    let index = SymIndexSet::new(p);
    let values = index.tuples().map(|t| h.get(index.representative(&t)).clone()).collect();
    SymVector::new(index, values)
}

pub fn from_sym(s: &SymVector) -> SetFunction {
    let index = &s.index;
    SetFunction::from_fn(index.partition.ground(), |a| s.values[index.index_of_mask(a)].clone())
}

/// Which of the three orbit families a label belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKind {
    /// `[1_t(l), 0]`: a monotone facet on block `l` (0-based).
    A { l: usize },
    /// `[1_t(l1,l2), k]`: conditional independence across two blocks.
    B { l1: usize, l2: usize },
    /// `[2_t(l), k]`: conditional independence inside one block.
    C { l: usize },
}

/// `[λ_{I,p}, λ_{K,p}]`, the label of a `p`-orbit of elemental facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitLabel {
    pub lambda_i: PartitionVector,
    pub lambda_k: PartitionVector,
}

impl OrbitLabel {
    pub fn new(lambda_i: Vec<usize>, lambda_k: Vec<usize>) -> Result<Self> {
        let label = Self { lambda_i: PartitionVector(lambda_i), lambda_k: PartitionVector(lambda_k) };
        if label.lambda_i.0.len() != label.lambda_k.0.len() {
            return Err(invalid("label vectors have different lengths"));
        }
        match label.lambda_i.total() {
            1 if label.lambda_k.total() != 0 => {
                Err(invalid("a monotone label must have an empty conditioning part"))
            }
            1 | 2 => Ok(label),
            _ => Err(invalid("λ_I must have entry sum 1 or 2")),
        }
    }

    /// Checks the entrywise bound `λ_I + λ_K ≤ λ_p`.
    pub fn fits(&self, p: &Partition) -> bool {
        let sizes = p.block_sizes();
        self.t() == sizes.len()
            && (0..sizes.len()).all(|l| self.lambda_i.0[l] + self.lambda_k.0[l] <= sizes[l])
    }

    pub fn t(&self) -> usize {
        self.lambda_i.0.len()
    }

    pub fn kind(&self) -> OrbitKind {
        let li = &self.lambda_i.0;
        let support: Vec<usize> = (0..li.len()).filter(|&l| li[l] > 0).collect();
        match (self.lambda_i.total(), support.as_slice()) {
            (1, [l]) => OrbitKind::A { l: *l },
            (2, [l]) => OrbitKind::C { l: *l },
            (2, [l1, l2]) => OrbitKind::B { l1: *l1, l2: *l2 },
            _ => unreachable!("labels are validated on construction"),
        }
    }

    /// Blocks touched by `λ_I`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.t()).filter(|&l| self.lambda_i.0[l] > 0).collect()
    }

    /// The reduced row as `(tuple, coefficient)` pairs over `s`-coordinates.
    pub fn reduced_terms(&self, p: &Partition) -> Vec<(Vec<usize>, i64)> {
        let sizes = p.block_sizes();
        let k = &self.lambda_k.0;
        let shift = |base: &[usize], l: usize| {
            let mut t = base.to_vec();
            t[l] += 1;
            t
        };
        let mut terms = BTreeMap::new();
        let mut add = |t: Vec<usize>, c: i64| *terms.entry(t).or_insert(0) += c;
        match self.kind() {
            OrbitKind::A { l } => {
                let mut below = sizes.clone();
                below[l] -= 1;
                add(sizes.clone(), 1);
                add(below, -1);
            }
            OrbitKind::B { l1, l2 } => {
                add(shift(k, l1), 1);
                add(shift(k, l2), 1);
                add(k.clone(), -1);
                add(shift(&shift(k, l1), l2), -1);
            }
            OrbitKind::C { l } => {
                add(shift(k, l), 2);
                add(k.clone(), -1);
                add(shift(&shift(k, l), l), -1);
            }
        }
        terms.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    /// Number of elemental facets in the orbit.
    pub fn orbit_size(&self, p: &Partition) -> BigInt {
        p.block_sizes()
            .iter()
            .enumerate()
            .map(|(l, &n)| {
                let i = self.lambda_i.0[l];
                binomial(n, i) * binomial(n - i, self.lambda_k.0[l])
            })
            .product()
    }

    /// A facet in this orbit: the lowest-numbered choices inside each block.
    pub fn representative_facet(&self, p: &Partition) -> Result<FacetId> {
        if !self.fits(p) {
            return Err(invalid(format!("label {self} does not fit partition {p}")));
        }
        let mut i_elems = Vec::new();
        let mut k_mask = SubsetMask::EMPTY;
        for (l, b) in p.blocks().iter().enumerate() {
            let elems: Vec<usize> = b.elements().collect();
            let ni = self.lambda_i.0[l];
            i_elems.extend_from_slice(&elems[..ni]);
            k_mask = elems[ni..ni + self.lambda_k.0[l]].iter().fold(k_mask, |m, &e| m.with(e));
        }
        match i_elems.as_slice() {
            [i] => FacetId::monotone(p.ground(), *i),
            [i, j] => FacetId::submodular(p.ground(), *i, *j, k_mask),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.t();
        let one_based = |ls: &[usize]| ls.iter().map(|l| (l + 1).to_string()).collect::<Vec<_>>().join(",");
        let k = SymIndexSet::format_tuple(&self.lambda_k.0);
        match self.kind() {
            OrbitKind::A { l } => write!(f, "[1_{t}({})|0]", l + 1),
            OrbitKind::B { l1, l2 } => write!(f, "[1_{t}({})|{k}]", one_based(&[l1, l2])),
            OrbitKind::C { l } => write!(f, "[2_{t}({})|{k}]", l + 1),
        }
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || parse_err(format!("bad orbit label {s:?}"));
        let body = s.trim().strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let (head, k) = body.split_once('|').ok_or_else(bad)?;
        let (mult, rest) = head.split_once('_').ok_or_else(bad)?;
        let (t, ls) = rest.split_once('(').ok_or_else(bad)?;
        let ls = ls.strip_suffix(')').ok_or_else(bad)?;
        let t: usize = t.parse().map_err(|_| bad())?;
        let ls: Vec<usize> =
            ls.split(',').map(|l| l.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        if t == 0 || ls.iter().any(|&l| l == 0 || l > t) {
            return Err(bad());
        }
        let mut li = vec![0; t];
        match (mult, ls.as_slice()) {
            ("1", [l]) => li[l - 1] = 1,
            ("1", [l1, l2]) if l1 < l2 => {
                li[l1 - 1] = 1;
                li[l2 - 1] = 1;
            }
            ("2", [l]) => li[l - 1] = 2,
            _ => return Err(bad()),
        }
        let lk = if k.trim() == "0" && mult == "1" && ls.len() == 1 {
            vec![0; t]
        } else {
            let v: Vec<usize> =
                k.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
            if v.len() != t {
                return Err(bad());
            }
            v
        };
        Self::new(li, lk)
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn facet_orbit_label(f: &FacetId, p: &Partition) -> OrbitLabel {
    OrbitLabel {
        lambda_i: partition_vector(f.i_set(), p),
        lambda_k: partition_vector(f.k_set(), p),
    }
}

/// All orbit labels: family A by block, then B by block pair, then C by block;
/// conditioning vectors in lexicographic order within each.
pub fn orbit_labels(p: &Partition) -> Vec<OrbitLabel> {
    let sizes = p.block_sizes();
    let t = sizes.len();
    let unit = |ls: &[usize], mult: usize| {
        let mut v = vec![0; t];
        for &l in ls {
            v[l] = mult;
        }
        v
    };
    let conditioning = |li: &[usize]| {
        let caps: Vec<usize> = sizes.iter().zip(li).map(|(n, i)| n - i).collect();
        box_tuples(&caps)
    };
    let mut out = Vec::new();
    for l in 0..t {
        out.push(OrbitLabel { lambda_i: PartitionVector(unit(&[l], 1)), lambda_k: PartitionVector(vec![0; t]) });
    }
    for l1 in 0..t {
        for l2 in l1 + 1..t {
            let li = unit(&[l1, l2], 1);
            for k in conditioning(&li) {
                out.push(OrbitLabel { lambda_i: PartitionVector(li.clone()), lambda_k: PartitionVector(k) });
            }
        }
    }
    for (l, &size) in sizes.iter().enumerate() {
        if size < 2 {
            continue;
        }
        let li = unit(&[l], 2);
        for k in conditioning(&li) {
            out.push(OrbitLabel { lambda_i: PartitionVector(li.clone()), lambda_k: PartitionVector(k) });
        }
    }
    out
}

/// All tuples `k` with `0 ≤ k_l ≤ caps[l]`, in lexicographic order.
pub fn box_tuples(caps: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; caps.len()];
    loop {
        out.push(cur.clone());
        let mut l = caps.len();
        loop {
            if l == 0 {
                return out;
            }
            l -= 1;
            if cur[l] < caps[l] {
                cur[l] += 1;
                break;
            }
            cur[l] = 0;
        }
    }
}

/// `t + Σ_{l1<l2} n_{l1} n_{l2} Π_{m≠l1,l2}(n_m+1) + Σ_l (n_l−1) Π_{m≠l}(n_m+1)`.
pub fn orbit_count_formula(p: &Partition) -> u128 {
    let sizes: Vec<u128> = p.block_sizes().iter().map(|&s| s as u128).collect();
    let t = sizes.len();
    let others = |skip: &[usize]| -> u128 {
        (0..t).filter(|m| !skip.contains(m)).map(|m| sizes[m] + 1).product()
    };
    let mut count = t as u128;
    for l1 in 0..t {
        for l2 in l1 + 1..t {
            count += sizes[l1] * sizes[l2] * others(&[l1, l2]);
        }
    }
    for (l, &size) in sizes.iter().enumerate() {
        count += (size - 1) * others(&[l]);
    }
    count
}

/// Facets of `Γ_n` grouped by their `p`-label.
pub fn facets_by_label(p: &Partition) -> BTreeMap<OrbitLabel, Vec<FacetId>> {
    let mut map: BTreeMap<OrbitLabel, Vec<FacetId>> = BTreeMap::new();
    for f in elemental_facets(p.ground()) {
        map.entry(facet_orbit_label(&f, p)).or_default().push(f);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::setfn::GroundSet;

    fn hbar() -> SetFunction {
        let g = GroundSet::new(4).unwrap();
        SetFunction::from_fn(g, |a| {
            int(match a.len() {
                0 => 0,
                1 => 2,
                2 if a == SubsetMask(0b0011) => 4,
                2 => 3,
                _ => 4,
            })
        })
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn action_on_functions() {
        let g = GroundSet::new(2).unwrap();
        let h = SetFunction::from_integers(g, &[0, 1, 2, 2]).unwrap();
        let p = Partition::whole(g);
        let id = BlockPermutation::identity(2);
        assert_eq!(apply_to_function(&id, &h).unwrap(), h);
        let swap = BlockPermutation::new(&p, vec![2, 1]).unwrap();
        let swapped = apply_to_function(&swap, &h).unwrap();
        assert_eq!(swapped.values(), &[int(0), int(2), int(1), int(2)]);
    }

    #[test]
    fn action_law() {
        let p = part("1,2,3|4,5");
        let perms = block_permutations(&p).unwrap();
        assert_eq!(perms.len(), 12);
        let h = SetFunction::from_fn(p.ground(), |a| int(a.bits() as i64));
        let (s1, s2) = (&perms[3], &perms[10]);
        let lhs = apply_to_function(&s1.compose(s2), &h).unwrap();
        let rhs = apply_to_function(s2, &apply_to_function(s1, &h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutation_validation() {
        let p = part("1,2|3,4");
        assert!(BlockPermutation::new(&p, vec![3, 2, 1, 4]).is_err());
        assert!(BlockPermutation::new(&p, vec![1, 1, 3, 4]).is_err());
        assert!(BlockPermutation::new(&p, vec![2, 1, 4, 3]).is_ok());
    }

    #[test]
    fn symmetrize_examples() {
        let g = GroundSet::new(2).unwrap();
        let h = SetFunction::from_integers(g, &[0, 1, 2, 2]).unwrap();
        let s = symmetrize(&h, &Partition::whole(g)).unwrap();
        assert_eq!(s.values(), &[int(0), ratio(3, 2), ratio(3, 2), int(2)]);
        assert_eq!(symmetrize(&h, &Partition::singletons(g)).unwrap(), h);
        let q = part("1,2|3,4");
        assert_eq!(symmetrize(&hbar(), &q).unwrap(), hbar());
    }

    #[test]
    fn symmetry_tests() {
        let g = GroundSet::new(4).unwrap();
        let u24 = SetFunction::from_fn(g, |a| int(a.len().min(2) as i64));
        for q in ["1,2,3,4", "1|2,3,4", "1,2|3,4", "1|2|3,4"] {
            assert!(is_p_symmetric(&u24, &part(q)));
        }
        assert!(is_p_symmetric(&hbar(), &part("1,2|3,4")));
        assert!(!is_p_symmetric(&hbar(), &part("1,2,3,4")));
        let err = to_sym(&hbar(), &part("1,2,3,4")).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn s_coordinates() {
        let q = part("1,2|3,4");
        let s = to_sym(&hbar(), &q).unwrap();
        let expect: Vec<Rational> = [0, 2, 3, 2, 3, 4, 4, 4, 4].iter().map(|&v| int(v)).collect();
        assert_eq!(s.values(), expect.as_slice());
        assert_eq!(from_sym(&s), hbar());
        let g = GroundSet::new(4).unwrap();
        let u24 = SetFunction::from_fn(g, |a| int(a.len().min(2) as i64));
        let s = to_sym(&u24, &q).unwrap();
        for t in s.index().tuples() {
            assert_eq!(s.get(&t).unwrap(), &int((t[0] + t[1]).min(2) as i64));
        }
        let zero = to_sym(&SetFunction::zero(g), &q).unwrap();
        assert!(zero.values().iter().all(Zero::is_zero));
        let ones = SymVector::from_fn(SymIndexSet::new(&q), |t| int((t.iter().sum::<usize>() > 0) as i64)).unwrap();
        let h = from_sym(&ones);
        assert!(g.subsets().all(|a| *h.get(a) == int(!a.is_empty() as i64)));
    }

    #[test]
    fn sym_text_round_trip() {
        let q = part("1,2|3,4");
        let s = to_sym(&hbar(), &q).unwrap();
        assert_eq!(SymVector::parse_text(&s.to_text(), &q).unwrap(), s);
        assert!(s.to_text().starts_with("0,0 0\n0,1 2\n"));
    }

    #[test]
    fn labels_of_facets() {
        let q = part("1,2|3,4");
        let g = q.ground();
        let f = FacetId::submodular(g, 1, 3, SubsetMask::singleton(2)).unwrap();
        let label = facet_orbit_label(&f, &q);
        assert_eq!((label.lambda_i.0.clone(), label.lambda_k.0.clone()), (vec![1, 1], vec![1, 0]));
        let whole = Partition::whole(g);
        let e = FacetId::monotone(g, 3).unwrap();
        assert_eq!(facet_orbit_label(&e, &whole).to_string(), "[1_1(1)|0]");
        let a = facet_orbit_label(&FacetId::submodular(g, 1, 2, SubsetMask::EMPTY).unwrap(), &q);
        let b = facet_orbit_label(&FacetId::submodular(g, 3, 4, SubsetMask::EMPTY).unwrap(), &q);
        assert_eq!(a.lambda_i.0, vec![2, 0]);
        assert_eq!(b.lambda_i.0, vec![0, 2]);
        assert_ne!(a, b);
    }

    #[test]
    fn label_counts() {
        for n in 1..=6 {
            let whole = Partition::whole(GroundSet::new(n).unwrap());
            assert_eq!(orbit_labels(&whole).len(), n);
            assert_eq!(orbit_count_formula(&whole), n as u128);
        }
        let q = part("1,2|3,4");
        assert_eq!(orbit_labels(&q).len(), 12);
        assert_eq!(orbit_count_formula(&q), 12);
        assert_eq!(orbit_labels(&Partition::singletons(q.ground())).len(), 28);
        assert_eq!(orbit_count_formula(&Partition::from_sizes(&[1, 3]).unwrap()), 9);
    }

    #[test]
    fn label_text() {
        let q = part("1,2|3,4");
        let printed: Vec<String> = orbit_labels(&q).iter().map(|l| l.to_string()).collect();
        assert_eq!(printed[0], "[1_2(1)|0]");
        assert!(printed.contains(&"[1_2(1,2)|0,1]".to_string()));
        assert!(printed.contains(&"[2_2(2)|1,0]".to_string()));
        for l in orbit_labels(&q) {
            assert_eq!(l.to_string().parse::<OrbitLabel>().unwrap(), l);
        }
        assert!("[3_2(1)|0,0]".parse::<OrbitLabel>().is_err());
    }

    #[test]
    fn orbit_sizes_sum_to_facet_count() {
        for q in ["1,2|3,4", "1|2,3,4", "1,2,3", "1|2|3,4,5"] {
            let q = part(q);
            let total: BigInt = orbit_labels(&q).iter().map(|l| l.orbit_size(&q)).sum();
            assert_eq!(total, BigInt::from(crate::setfn::elemental_count(q.n())));
            let grouped = facets_by_label(&q);
            for l in orbit_labels(&q) {
                assert_eq!(BigInt::from(grouped[&l].len()), l.orbit_size(&q));
                let rep = l.representative_facet(&q).unwrap();
                assert_eq!(facet_orbit_label(&rep, &q), l);
            }
        }
    }
}
