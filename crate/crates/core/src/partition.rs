//! Set partitions of the ground set, partition vectors and the refinement order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, parse_err, Error, Result};
use crate::setfn::{GroundSet, SubsetMask};

/// An ordered partition of `{1..n}` into nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    ground: GroundSet,
    blocks: Vec<SubsetMask>,
}

impl Partition {
    pub fn new(ground: GroundSet, blocks: Vec<SubsetMask>) -> Result<Self> {
        let mut seen = SubsetMask::EMPTY;
        for &b in &blocks {
            ground.check_mask(b)?;
            if b.is_empty() {
                return Err(invalid("partition blocks must be nonempty"));
            }
            if !b.is_disjoint(seen) {
                return Err(invalid(format!("block {b} overlaps an earlier block")));
            }
            seen = seen.union(b);
        }
        if seen != ground.full() {
            return Err(invalid(format!(
                "blocks cover {seen}, not the whole ground set {}",
                ground.full()
            )));
        }
        Ok(Self { ground, blocks })
    }

    /// Consecutive blocks of the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(invalid("block sizes must be positive"));
        }
        let ground = GroundSet::new(sizes.iter().sum())?;
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b = SubsetMask(((1u32 << s) - 1) << start);
                start += s;
                b
            })
            .collect();
        Self::new(ground, blocks)
    }

    pub fn singletons(ground: GroundSet) -> Self {
        let blocks = (1..=ground.size()).map(SubsetMask::singleton).collect();
        Self { ground, blocks }
    }

    pub fn whole(ground: GroundSet) -> Self {
        Self { ground, blocks: vec![ground.full()] }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    pub fn block(&self, l: usize) -> SubsetMask {
        self.blocks[l]
    }

    pub fn t(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// Index of the block holding element `i`.
    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(i))
    }

    /// Blocks reordered by size, ties broken by smallest element.
    pub fn normalized(&self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| (b.len(), b.elements().next()));
        Self { ground: self.ground, blocks }
    }

    /// The canonical representative with the same block sizes.
    pub fn canonical(&self) -> Self {
        Self::from_sizes(&integer_partition_of(self).parts).expect("block sizes are valid")
    }

    /// Whether blocks are consecutive runs with nondecreasing sizes.
    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// The partition obtained by merging blocks `a` and `b`; the union takes the place of `min(a, b)`.
    pub fn merge(&self, a: usize, b: usize) -> Result<Self> {
        let t = self.t();
        if a == b || a >= t || b >= t {
            return Err(invalid(format!("cannot merge blocks {a} and {b} of a {t}-block partition")));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let mut blocks = self.blocks.clone();
        blocks[lo] = blocks[lo].union(blocks[hi]);
        blocks.remove(hi);
        Ok(Self { ground: self.ground, blocks })
    }

    /// Every pair of blocks whose merge yields a cover of `self`.
    pub fn covers_above(&self) -> Vec<(usize, usize, Partition)> {
        let t = self.t();
        let mut out = Vec::new();
        for a in 0..t {
            for b in a + 1..t {
                out.push((a, b, self.merge(a, b).expect("indices in range")));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("partition serializes")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.elements().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", blocks.join("|"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `1,2|3,4`. The ground set is `1..max`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lists = Vec::new();
        for part in s.trim().split('|') {
            let mut block = Vec::new();
            for e in part.split(',') {
                let e = e.trim();
                let v: usize = e
                    .parse()
                    .map_err(|_| parse_err(format!("bad element {e:?} in partition {s:?}")))?;
                block.push(v);
            }
            lists.push(block);
        }
        Self::from_lists(&lists)
    }
}

impl Partition {
    fn from_lists(lists: &[Vec<usize>]) -> Result<Self> {
        let n = lists.iter().flatten().copied().max().unwrap_or(0);
        let ground = GroundSet::new(n)?;
        let mut blocks = Vec::with_capacity(lists.len());
        for list in lists {
            let mut b = SubsetMask::EMPTY;
            for &e in list {
                ground.check_element(e)?;
                if b.contains(e) {
                    return Err(invalid(format!("element {e} repeated in a block")));
                }
                b = b.with(e);
            }
            blocks.push(b);
        }
        Self::new(ground, blocks)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lists: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.elements().collect()).collect();
        lists.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lists = Vec::<Vec<usize>>::deserialize(d)?;
        Self::from_lists(&lists).map_err(serde::de::Error::custom)
    }
}

/// `(|A ∩ N_1|, ..., |A ∩ N_t|)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionVector(pub Vec<usize>);

impl PartitionVector {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for PartitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", items.join(","))
    }
}

pub fn partition_vector(a: SubsetMask, p: &Partition) -> PartitionVector {
    PartitionVector(p.blocks.iter().map(|b| a.intersection(*b).len()).collect())
}

/// Whether every block of `p2` is a union of blocks of `p1`.
pub fn refines(p1: &Partition, p2: &Partition) -> Result<bool> {
    if p1.ground != p2.ground {
        return Err(invalid("partitions live on different ground sets"));
    }
    Ok(p1.blocks.iter().all(|b| p2.blocks.iter().any(|c| b.is_subset(*c))))
}

/// Whether `p2` is obtained from `p1` by merging exactly two blocks.
pub fn covers(p2: &Partition, p1: &Partition) -> bool {
    matches!(refines(p1, p2), Ok(true)) && p1.t() == p2.t() + 1
}

/// Nondecreasing positive parts summing to `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntegerPartition {
    pub parts: Vec<usize>,
}

impl IntegerPartition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(invalid("integer partition parts must be positive"));
        }
        parts.sort_unstable();
        Ok(Self { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.parts.iter().map(|k| k.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}

/// Integer partitions of `n`, ordered by number of parts and then lexicographically.
pub fn integer_partitions(n: usize) -> Vec<IntegerPartition> {
    fn rec(remaining: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for part in min..=remaining {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, 1, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.into_iter().map(|parts| IntegerPartition { parts }).collect()
}

/// One consecutive-block partition per integer partition of `n`.
pub fn canonical_representatives(n: usize) -> Result<Vec<Partition>> {
    GroundSet::new(n)?;
    integer_partitions(n).iter().map(|ip| Partition::from_sizes(&ip.parts)).collect()
}

pub fn integer_partition_of(p: &Partition) -> IntegerPartition {
    let mut parts = p.block_sizes();
    parts.sort_unstable();
    IntegerPartition { parts }
}

/// Every set partition of `1..n` (blocks ordered by smallest element).
pub fn all_partitions(ground: GroundSet) -> Vec<Partition> {
    let n = ground.size();
    let mut out = Vec::new();
    let mut blocks: Vec<SubsetMask> = Vec::new();
    fn rec(i: usize, n: usize, blocks: &mut Vec<SubsetMask>, ground: GroundSet, out: &mut Vec<Partition>) {
        if i > n {
            out.push(Partition { ground, blocks: blocks.clone() });
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] = blocks[b].with(i);
            rec(i + 1, n, blocks, ground, out);
            blocks[b] = blocks[b].without(i);
        }
        blocks.push(SubsetMask::singleton(i));
        rec(i + 1, n, blocks, ground, out);
        blocks.pop();
    }
    rec(1, n, &mut blocks, ground, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn vectors() {
        let q = p("1,2|3,4");
        assert_eq!(partition_vector(SubsetMask::from_elements([1, 3, 4]), &q).0, vec![1, 2]);
        assert_eq!(partition_vector(SubsetMask::EMPTY, &q).0, vec![0, 0]);
        assert_eq!(partition_vector(q.ground().full(), &q).0, q.block_sizes());
    }

    #[test]
    fn refinement() {
        assert!(refines(&p("1|2|3,4"), &p("1,2|3,4")).unwrap());
        assert!(!refines(&p("1,3|2,4"), &p("1,2|3,4")).unwrap());
        assert!(refines(&p("1,3|2,4"), &p("1,3|2,4")).unwrap());
        assert!(refines(&p("1|2"), &p("1|2,3")).is_err());
    }

    #[test]
    fn cover_relation() {
        assert!(covers(&p("1,2|3,4"), &p("1|2|3,4")));
        assert!(!covers(&p("1,2,3,4"), &p("1|2|3|4")));
        let q = p("1,2|3,4");
        assert!(!covers(&q, &q));
    }

    #[test]
    fn representatives() {
        let reps = canonical_representatives(4).unwrap();
        let sizes: Vec<Vec<usize>> = reps.iter().map(|r| r.block_sizes()).collect();
        assert_eq!(sizes, vec![vec![4], vec![1, 3], vec![2, 2], vec![1, 1, 2], vec![1, 1, 1, 1]]);
        assert_eq!(canonical_representatives(1).unwrap().len(), 1);
        assert_eq!(canonical_representatives(5).unwrap().len(), 7);
        assert_eq!(reps[1].to_string(), "1|2,3,4");
    }

    #[test]
    fn integer_partition_of_blocks() {
        assert_eq!(integer_partition_of(&p("2|1,3")).parts, vec![1, 2]);
        let g = GroundSet::new(3).unwrap();
        assert_eq!(integer_partition_of(&Partition::singletons(g)).parts, vec![1, 1, 1]);
        assert_eq!(integer_partition_of(&Partition::whole(g)).parts, vec![3]);
    }

    #[test]
    fn parse_errors() {
        assert!("1,2|2,3".parse::<Partition>().is_err());
        assert!("1,3".parse::<Partition>().is_err());
        assert!("1,x".parse::<Partition>().is_err());
        assert!("1,,2".parse::<Partition>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let q = p("2|1,3");
        let j = q.to_json();
        assert_eq!(j, serde_json::json!([[2], [1, 3]]));
        let back: Partition = serde_json::from_value(j).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> =
            (1..=6).map(|n| all_partitions(GroundSet::new(n).unwrap()).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn merge_and_normalize() {
        let q = p("1|2|3,4");
        assert_eq!(q.merge(0, 1).unwrap(), p("1,2|3,4"));
        assert_eq!(p("3,4|1|2").normalized(), p("1|2|3,4"));
        assert!(q.merge(1, 1).is_err());
        assert_eq!(p("2|1,3").canonical(), p("1|2,3"));
    }
}
