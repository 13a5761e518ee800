//! Named set functions: uniform matroids, loops, free expansion and factor,
//! the extreme-ray family of the `[1, n−1]` cone and the gap witnesses.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};

use crate::error::{invalid, parse_err, Error, Result};
use crate::partition::Partition;
use crate::rational::{int, Rational};
use crate::setfn::{is_polymatroid, GroundSet, SetFunction, SubsetMask};

/// A map `φ` from source elements to pairwise disjoint target subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionMap {
    target: GroundSet,
    images: Vec<SubsetMask>,
}

impl ExpansionMap {
    /// `images[i - 1] = φ(i)`.
    pub fn new(target: GroundSet, images: Vec<SubsetMask>) -> Result<Self> {
        let mut seen = SubsetMask::EMPTY;
        for (i, &img) in images.iter().enumerate() {
            target.check_mask(img)?;
            if !img.is_disjoint(seen) {
                return Err(invalid(format!("image of element {} overlaps an earlier image", i + 1)));
            }
            seen = seen.union(img);
        }
        Ok(Self { target, images })
    }

    /// Consecutive target blocks of the given sizes, in source order.
    pub fn consecutive(sizes: &[usize]) -> Result<Self> {
        let m: usize = sizes.iter().sum();
        if m == 0 {
            return Err(invalid("an expansion needs a nonempty target"));
        }
        let target = GroundSet::new(m)?;
        let mut start = 0;
        let images = sizes
            .iter()
            .map(|&s| {
                let img = SubsetMask(((1u32 << s) - 1) << start);
                start += s;
                img
            })
            .collect();
        Self::new(target, images)
    }

    /// The canonical map for `h`: `|φ(i)| = h({i})`, consecutive blocks.
    pub fn canonical(h: &SetFunction) -> Result<Self> {
        let sizes = (1..=h.n())
            .map(|i| {
                let v = h.get(SubsetMask::singleton(i));
                if !v.is_integer() || v.is_negative() {
                    return Err(Error::Precondition(format!("h({{{i}}}) is not a nonnegative integer")));
                }
                v.to_integer().to_usize().ok_or_else(|| Error::Unsupported("singleton value too large".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::consecutive(&sizes)
    }

    /// `φ_{m,n}`: `φ(1) = {1..m−n+1}` and `φ(i) = {i+m−n}` otherwise.
    pub fn phi_mn(m: usize, n: usize) -> Result<Self> {
        if n == 0 || m + 1 < n {
            return Err(invalid(format!("φ_(m,n) needs m ≥ n − 1, got m={m}, n={n}")));
        }
        let mut sizes = vec![1; n];
        sizes[0] = m + 1 - n;
        Self::consecutive(&sizes)
    }

    pub fn source_size(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> GroundSet {
        self.target
    }

    pub fn images(&self) -> &[SubsetMask] {
        &self.images
    }

    /// `φ(B) = ∪_{i∈B} φ(i)`.
    pub fn image_of(&self, b: SubsetMask) -> SubsetMask {
        b.elements().fold(SubsetMask::EMPTY, |acc, i| acc.union(self.images[i - 1]))
    }
}

/// `min(m, |A|)` on `1..n`.
pub fn uniform(m: usize, n: usize) -> Result<SetFunction> {
    if m > n {
        return Err(invalid(format!("U_(m,n) needs m ≤ n, got m={m}, n={n}")));
    }
    let ground = GroundSet::new(n)?;
    Ok(SetFunction::from_fn(ground, |a| int(a.len().min(m) as i64)))
}

/// `min(k, |A ∩ S|)`: rank `k` uniform on `S`, loops elsewhere.
pub fn uniform_with_loops(k: usize, support: SubsetMask, ground: GroundSet) -> Result<SetFunction> {
    ground.check_mask(support)?;
    if k > support.len() {
        return Err(invalid(format!("rank {k} exceeds support size {}", support.len())));
    }
    Ok(SetFunction::from_fn(ground, |a| int(a.intersection(support).len().min(k) as i64)))
}

/// `g(A) = min_B h(B) + |A \ φ(B)|`.
pub fn free_expansion(h: &SetFunction, phi: &ExpansionMap) -> Result<SetFunction> {
    if !h.is_integer_valued() {
        return Err(Error::Precondition("free expansion needs an integer-valued function".into()));
    }
    if !is_polymatroid(h) {
        return Err(Error::Precondition("free expansion needs a polymatroid".into()));
    }
    check_map(h, phi)?;
    for i in 1..=h.n() {
        if *h.get(SubsetMask::singleton(i)) != int(phi.images[i - 1].len() as i64) {
            return Err(Error::Precondition(format!("|φ({i})| differs from h({{{i}}})")));
        }
    }
    let sources: Vec<(SubsetMask, Rational)> =
        h.ground().subsets().map(|b| (phi.image_of(b), h.get(b).clone())).collect();
    Ok(SetFunction::from_fn(phi.target, |a| {
        sources
            .iter()
            .map(|(img, v)| v + int(a.difference(*img).len() as i64))
            .min()
            .expect("at least the empty set")
    }))
}

/// `h(B) = g(φ(B))`.
pub fn factor(g: &SetFunction, phi: &ExpansionMap) -> Result<SetFunction> {
    if g.ground() != phi.target {
        return Err(Error::DimensionMismatch { expected: phi.target.size(), actual: g.n() });
    }
    let source = GroundSet::new(phi.source_size())?;
    Ok(SetFunction::from_fn(source, |b| g.get(phi.image_of(b)).clone()))
}

fn check_map(h: &SetFunction, phi: &ExpansionMap) -> Result<()> {
    if phi.source_size() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), actual: phi.source_size() });
    }
    Ok(())
}

/// `|A ∩ {1}|`.
pub fn u1_loop(n: usize) -> Result<SetFunction> {
    uniform_with_loops(1, SubsetMask::singleton(1), GroundSet::new(n)?)
}

/// Admissible `(k, m)` for `U^n_{k,m}`.
pub fn ukm_in_range(k: usize, m: usize, n: usize) -> bool {
    n >= 2 && m + 1 >= n && m <= 2 * n - 2 && k >= 1.max(m + 1 - n) && k < n
}

/// `U^n_{k,m}(A) = min(k, Σ_{i∈A} |φ_{m,n}(i)|)`, the factor of `U_{k,m}` under `φ_{m,n}`.
pub fn u_km(k: usize, m: usize, n: usize) -> Result<SetFunction> {
    if !ukm_in_range(k, m, n) {
        return Err(invalid(format!(
            "U^n_(k,m) needs n−1 ≤ m ≤ 2n−2 and max(1, m−n+1) ≤ k ≤ n−1; got k={k}, m={m}, n={n}"
        )));
    }
    let ground = GroundSet::new(n)?;
    let first = m + 1 - n;
    Ok(SetFunction::from_fn(ground, |a| {
        let weight = a.len() - usize::from(a.contains(1)) + if a.contains(1) { first } else { 0 };
        int(weight.min(k) as i64)
    }))
}

/// A named family member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    Uniform { m: usize, n: usize },
    UniformWithLoops { k: usize, n: usize, support: Vec<usize> },
    U1Loop { n: usize },
    Ukm { k: usize, m: usize, n: usize },
    GapWitness { n1: usize, n2: usize },
}

impl FamilyTag {
    pub fn build(&self) -> Result<SetFunction> {
        match self {
            FamilyTag::Uniform { m, n } => uniform(*m, *n),
            FamilyTag::UniformWithLoops { k, n, support } => {
                let ground = GroundSet::new(*n)?;
                for &e in support {
                    ground.check_element(e)?;
                }
                uniform_with_loops(*k, SubsetMask::from_elements(support.iter().copied()), ground)
            }
            FamilyTag::U1Loop { n } => u1_loop(*n),
            FamilyTag::Ukm { k, m, n } => u_km(*k, *m, *n),
            FamilyTag::GapWitness { n1, n2 } => gap_witness(*n1, *n2),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyTag::Uniform { m, n } => write!(f, "uniform:{m},{n}"),
            FamilyTag::UniformWithLoops { k, n, support } => {
                let s: Vec<String> = support.iter().map(|e| e.to_string()).collect();
                write!(f, "loops:{k},{n},{}", s.join(","))
            }
            FamilyTag::U1Loop { n } => write!(f, "u1loop:{n}"),
            FamilyTag::Ukm { k, m, n } => write!(f, "ukm:{k},{m},{n}"),
            FamilyTag::GapWitness { n1, n2 } => write!(f, "gap:{n1},{n2}"),
        }
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    /// `uniform:m,n`, `ukm:k,m,n`, `u1loop:n`, `gap:n1,n2`, `loops:k,n,e1,e2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.trim().split_once(':').ok_or_else(|| parse_err(format!("bad family tag {s:?}")))?;
        let nums = args
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| parse_err(format!("bad parameters in {s:?}")))?;
        match (kind, nums.as_slice()) {
            ("uniform", &[m, n]) => Ok(FamilyTag::Uniform { m, n }),
            ("ukm", &[k, m, n]) => Ok(FamilyTag::Ukm { k, m, n }),
            ("u1loop", &[n]) => Ok(FamilyTag::U1Loop { n }),
            ("gap", &[n1, n2]) => Ok(FamilyTag::GapWitness { n1, n2 }),
            ("loops", [k, n, support @ ..]) if !support.is_empty() => {
                Ok(FamilyTag::UniformWithLoops { k: *k, n: *n, support: support.to_vec() })
            }
            _ => Err(parse_err(format!("unknown family tag {s:?}"))),
        }
    }
}

/// A tagged member of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub tag: FamilyTag,
    pub function: SetFunction,
}

/// `𝒰_n`: the loop indicator, then `U^n_{k,m}` by ascending `m`, then ascending `k`.
pub fn family_un(n: usize) -> Result<Vec<FamilyMember>> {
    if n < 2 {
        return Err(invalid("the family is defined for n ≥ 2"));
    }
    let mut out = vec![FamilyMember { tag: FamilyTag::U1Loop { n }, function: u1_loop(n)? }];
    for m in n - 1..=2 * n - 2 {
        for k in 1.max(m + 1 - n)..n {
            out.push(FamilyMember { tag: FamilyTag::Ukm { k, m, n }, function: u_km(k, m, n)? });
        }
    }
    Ok(out)
}

/// `1 + (n−1) + n(n−1)/2`.
pub fn family_un_size(n: usize) -> usize {
    1 + (n - 1) + n * (n - 1) / 2
}

/// `ħ_{n1,n2}` with `N_1 = {1..n1}`.
pub fn gap_witness(n1: usize, n2: usize) -> Result<SetFunction> {
    if n1 < 2 || n2 < 2 {
        return Err(invalid(format!("gap witness needs both blocks of size ≥ 2, got {n1},{n2}")));
    }
    gap_witness_on(&Partition::from_sizes(&[n1, n2])?)
}

/// `ħ` on a two-block partition: singletons 2, pairs inside the first block 4,
/// other pairs 3, larger sets 4.
pub fn gap_witness_on(p: &Partition) -> Result<SetFunction> {
    if p.t() != 2 || p.block(0).len() < 2 || p.block(1).len() < 2 {
        return Err(invalid(format!("gap witness needs two blocks of size ≥ 2, got {p}")));
    }
    let n1 = p.block(0);
    Ok(SetFunction::from_fn(p.ground(), |a| {
        int(match a.len() {
            0 => 0,
            1 => 2,
            2 if a.is_subset(n1) => 4,
            2 => 3,
            _ => 4,
        })
    }))
}
