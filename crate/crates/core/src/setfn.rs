//! Ground sets, subsets, rational set functions and linear information forms.
//!
//! Subsets of `{1..n}` are bitmasks: element `i` is bit `i - 1`, and the
//! value vector of a [`SetFunction`] is indexed by the mask value.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, parse_err, Error, Result};
use crate::rational::{self, int, Rational};

/// Largest `n` for which `2^n` values are stored densely.
pub const DENSE_LIMIT: usize = 12;

/// The ground set `{1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limit(n, DENSE_LIMIT)
    }

    pub fn with_limit(n: usize, limit: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("ground set must have at least one element"));
        }
        if n > limit || n > 31 {
            return Err(Error::Unsupported(format!(
                "ground set of size {n} exceeds the dense storage limit {limit}"
            )));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask((1u32 << self.n) - 1)
    }

    pub fn num_subsets(&self) -> usize {
        1usize << self.n
    }

    /// All subsets in mask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetMask> {
        (0..(1u32 << self.n)).map(SubsetMask)
    }

    pub fn contains(&self, m: SubsetMask) -> bool {
        m.0 >> self.n == 0
    }

    pub fn check_element(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(invalid(format!("element {i} is outside 1..{}", self.n)))
        } else {
            Ok(())
        }
    }

    pub fn check_mask(&self, m: SubsetMask) -> Result<()> {
        if self.contains(m) {
            Ok(())
        } else {
            Err(invalid(format!("subset {m} is not contained in 1..{}", self.n)))
        }
    }
}

/// A subset encoded as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// `{i}` for a 1-based element `i`.
    pub fn singleton(i: usize) -> Self {
        SubsetMask(1 << (i - 1))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements.into_iter().fold(Self::EMPTY, |m, i| m.with(i))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1 << (i - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |b| bits >> b & 1 == 1).map(|b| b + 1)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(((cur | !full).wrapping_add(1)) & full) };
            Some(SubsetMask(cur))
        })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A rational-valued function on the subsets of a ground set, zero on the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFunction {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl SetFunction {
    pub fn new(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        if values.len() != ground.num_subsets() {
            return Err(Error::DimensionMismatch {
                expected: ground.num_subsets(),
                actual: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(invalid("a set function must vanish on the empty set"));
        }
        Ok(Self { ground, values })
    }

    pub fn zero(ground: GroundSet) -> Self {
        Self { ground, values: vec![Rational::zero(); ground.num_subsets()] }
    }

    /// Builds a function from a closure; the closure must return zero on the empty set.
    pub fn from_fn(ground: GroundSet, mut f: impl FnMut(SubsetMask) -> Rational) -> Self {
        let values: Vec<Rational> = ground.subsets().map(&mut f).collect();
        assert!(values[0].is_zero(), "set function must vanish on the empty set");
        Self { ground, values }
    }

    pub fn from_integers(ground: GroundSet, values: &[i64]) -> Result<Self> {
        Self::new(ground, values.iter().map(|&v| int(v)).collect())
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn get(&self, m: SubsetMask) -> &Rational {
        &self.values[m.0 as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self { ground: self.ground, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.ground != other.ground {
            return Err(Error::DimensionMismatch { expected: self.n(), actual: other.n() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { ground: self.ground, values })
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    /// One line `mask value` per subset.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{m} {}\n", rational::format(v)));
        }
        out
    }

    /// Parses the `mask value` format; every mask must appear exactly once.
    pub fn parse_text(s: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (m, v) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| parse_err(format!("line {}: expected `mask value`", lineno + 1)))?;
            let m: u32 = m
                .parse()
                .map_err(|_| parse_err(format!("line {}: bad mask {m:?}", lineno + 1)))?;
            if entries.insert(m, rational::parse(v)?).is_some() {
                return Err(parse_err(format!("line {}: mask {m} repeated", lineno + 1)));
            }
        }
        let count = entries.len();
        if count < 2 || !count.is_power_of_two() {
            return Err(parse_err(format!("{count} entries do not form a full subset table")));
        }
        let ground = GroundSet::new(count.trailing_zeros() as usize)?;
        let values: Vec<Rational> = entries.into_values().collect();
        if values.len() != ground.num_subsets() {
            return Err(parse_err("mask values are not contiguous"));
        }
        Self::new(ground, values)
    }

    /// JSON array indexed by mask, values as strings `p/q`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.values.iter().map(|v| serde_json::Value::String(rational::format(v))).collect(),
        )
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let arr = value.as_array().ok_or_else(|| parse_err("expected a JSON array"))?;
        let mut values = Vec::with_capacity(arr.len());
        for item in arr {
            let v = match item {
                serde_json::Value::String(s) => rational::parse(s)?,
                serde_json::Value::Number(n) => rational::parse(&n.to_string())?,
                other => return Err(parse_err(format!("unexpected JSON value {other}"))),
            };
            values.push(v);
        }
        if values.len() < 2 || !values.len().is_power_of_two() {
            return Err(parse_err("array length must be 2^n"));
        }
        let ground = GroundSet::new(values.len().trailing_zeros() as usize)?;
        Self::new(ground, values)
    }
}

/// Whether a form is an inequality `≥ 0` or an equation `= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    GeZero,
    EqZero,
}

/// A sparse linear functional on set functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    ground: GroundSet,
    coeffs: BTreeMap<SubsetMask, Rational>,
    sense: Sense,
}

impl LinearForm {
    pub fn new(ground: GroundSet, sense: Sense) -> Self {
        Self { ground, coeffs: BTreeMap::new(), sense }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Adds `c` to the coefficient of `h(m)`. The empty-set coefficient is dropped.
    pub fn add_term(&mut self, m: SubsetMask, c: &Rational) {
        if m.is_empty() {
            return;
        }
        let entry = self.coeffs.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    /// Adds `c · I(A; B | C)` in terms of `h`.
    pub fn add_mutual_info(&mut self, c: &Rational, a: SubsetMask, b: SubsetMask, cond: SubsetMask) {
        self.add_term(a.union(cond), c);
        self.add_term(b.union(cond), c);
        self.add_term(cond, &-c);
        self.add_term(a.union(b).union(cond), &-c);
    }

    /// Nonzero coefficients in mask order.
    pub fn coeffs(&self) -> &BTreeMap<SubsetMask, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, m: SubsetMask) -> Rational {
        self.coeffs.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn evaluate(&self, f: &SetFunction) -> Result<Rational> {
        if f.ground() != self.ground {
            return Err(Error::DimensionMismatch { expected: self.ground.size(), actual: f.n() });
        }
        Ok(self.coeffs.iter().map(|(m, c)| c * f.get(*m)).sum())
    }

    pub fn is_satisfied_by(&self, f: &SetFunction) -> Result<bool> {
        let v = self.evaluate(f)?;
        Ok(match self.sense {
            Sense::GeZero => !v.is_negative(),
            Sense::EqZero => v.is_zero(),
        })
    }
}

/// Identifies an elemental inequality `E(I, K)`.
///
/// `|I| = 1` is the monotonicity form `h(N) - h(N \ i) ≥ 0` with `K = ∅`;
/// `|I| = 2` is the submodularity form `I(i; j | K) ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FacetId {
    i: SubsetMask,
    k: SubsetMask,
}

impl FacetId {
    pub fn monotone(ground: GroundSet, i: usize) -> Result<Self> {
        ground.check_element(i)?;
        Ok(Self { i: SubsetMask::singleton(i), k: SubsetMask::EMPTY })
    }

    pub fn submodular(ground: GroundSet, i: usize, j: usize, k: SubsetMask) -> Result<Self> {
        ground.check_element(i)?;
        ground.check_element(j)?;
        ground.check_mask(k)?;
        if i == j || k.contains(i) || k.contains(j) {
            return Err(invalid(format!("I({i};{j}|{k}) has overlapping indices")));
        }
        Ok(Self { i: SubsetMask::singleton(i).with(j), k })
    }

    pub fn i_set(&self) -> SubsetMask {
        self.i
    }

    pub fn k_set(&self) -> SubsetMask {
        self.k
    }

    pub fn is_monotone(&self) -> bool {
        self.i.len() == 1
    }

    /// The form as a `≥ 0` functional.
    pub fn form(&self, ground: GroundSet) -> LinearForm {
        let mut form = LinearForm::new(ground, Sense::GeZero);
        let one = Rational::one();
        if self.is_monotone() {
            form.add_term(ground.full(), &one);
            form.add_term(ground.full().difference(self.i), &-one);
        } else {
            let mut els = self.i.elements();
            let (a, b) = (els.next().unwrap(), els.next().unwrap());
            form.add_mutual_info(&one, SubsetMask::singleton(a), SubsetMask::singleton(b), self.k);
        }
        form
    }

    /// Evaluates the form directly from the value table.
    pub fn evaluate(&self, f: &SetFunction) -> Rational {
        if self.is_monotone() {
            let full = f.ground().full();
            f.get(full) - f.get(full.difference(self.i))
        } else {
            let k = self.k;
            let mut els = self.i.elements();
            let (a, b) = (els.next().unwrap(), els.next().unwrap());
            f.get(k.with(a)) + f.get(k.with(b)) - f.get(k) - f.get(k.union(self.i))
        }
    }
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |m: SubsetMask| m.elements().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        if self.is_monotone() {
            write!(f, "E({})", join(self.i))
        } else {
            write!(f, "E({}|{})", join(self.i), join(self.k))
        }
    }
}

/// All elemental facets: monotone ones first, then `(i, j, K)` with `i < j` and `K` in mask order.
pub fn elemental_facets(ground: GroundSet) -> Vec<FacetId> {
    let n = ground.size();
    let mut out: Vec<FacetId> = (1..=n)
        .map(|i| FacetId { i: SubsetMask::singleton(i), k: SubsetMask::EMPTY })
        .collect();
    for i in 1..=n {
        for j in i + 1..=n {
            let pair = SubsetMask::singleton(i).with(j);
            let rest = ground.full().difference(pair);
            out.extend(rest.subsets().map(|k| FacetId { i: pair, k }));
        }
    }
    out
}

pub fn elemental_forms(ground: GroundSet) -> Vec<(FacetId, LinearForm)> {
    elemental_facets(ground).into_iter().map(|id| (id, id.form(ground))).collect()
}

/// `n + C(n,2) · 2^(n-2)`.
pub fn elemental_count(n: usize) -> u128 {
    let n = n as u128;
    if n < 2 {
        return n;
    }
    n + n * (n - 1) / 2 * (1u128 << (n - 2))
}

/// First elemental form that `f` violates, if any.
pub fn first_violated_facet(f: &SetFunction) -> Option<FacetId> {
    elemental_facets(f.ground()).into_iter().find(|id| id.evaluate(f).is_negative())
}

pub fn is_polymatroid(f: &SetFunction) -> bool {
    f.get(SubsetMask::EMPTY).is_zero() && first_violated_facet(f).is_none()
}

/// Integer-valued polymatroid with `f(A) ≤ |A|`.
pub fn is_matroid(f: &SetFunction) -> bool {
    f.ground()
        .subsets()
        .all(|m| {
            let v = f.get(m);
            v.is_integer() && !v.is_negative() && *v <= int(m.len() as i64)
        })
        && is_polymatroid(f)
}

/// `f(K∪i) + f(K∪j) − f(K) − f(K∪ij)`.
pub fn mutual_info(f: &SetFunction, i: usize, j: usize, k: SubsetMask) -> Result<Rational> {
    let id = FacetId::submodular(f.ground(), i, j, k)?;
    Ok(id.evaluate(f))
}

/// `I(a;b) + I(a;cd) + 3I(c;d|a) + I(c;d|b) − 2I(c;d) ≥ 0` for roles `(a,b,c,d)`.
pub fn zhang_yeung_form(ground: GroundSet, roles: [usize; 4]) -> Result<LinearForm> {
    if ground.size() < 4 {
        return Err(Error::Unsupported("the Zhang-Yeung form needs at least 4 elements".into()));
    }
    for (x, &r) in roles.iter().enumerate() {
        ground.check_element(r)?;
        if roles[..x].contains(&r) {
            return Err(invalid(format!("roles {roles:?} are not distinct")));
        }
    }
    let [a, b, c, d] = roles.map(SubsetMask::singleton);
    let e = SubsetMask::EMPTY;
    let mut form = LinearForm::new(ground, Sense::GeZero);
    form.add_mutual_info(&int(1), a, b, e);
    form.add_mutual_info(&int(1), a, c.union(d), e);
    form.add_mutual_info(&int(3), c, d, a);
    form.add_mutual_info(&int(1), c, d, b);
    form.add_mutual_info(&int(-2), c, d, e);
    Ok(form)
}

/// Restriction to `m`, relabelled order-preservingly onto `1..|m|`.
pub fn restrict(f: &SetFunction, m: SubsetMask) -> Result<SetFunction> {
    if m.is_empty() {
        return Err(invalid("cannot restrict to the empty set"));
    }
    f.ground().check_mask(m)?;
    let ground = GroundSet::new(m.len())?;
    let embed: Vec<usize> = m.elements().collect();
    Ok(SetFunction::from_fn(ground, |a| {
        let image = SubsetMask::from_elements(a.elements().map(|i| embed[i - 1]));
        f.get(image).clone()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(m: usize, n: usize) -> SetFunction {
        let g = GroundSet::new(n).unwrap();
        SetFunction::from_fn(g, |a| int(a.len().min(m) as i64))
    }

    fn hbar() -> SetFunction {
        let g = GroundSet::new(4).unwrap();
        SetFunction::from_fn(g, |a| {
            let v = match a.len() {
                0 => 0,
                1 => 2,
                2 if a == SubsetMask(0b0011) => 4,
                2 => 3,
                _ => 4,
            };
            int(v)
        })
    }

    #[test]
    fn facet_counts() {
        for n in 1..=8 {
            let g = GroundSet::new(n).unwrap();
            assert_eq!(elemental_facets(g).len() as u128, elemental_count(n));
        }
        assert_eq!(elemental_count(3), 9);
        assert_eq!(elemental_count(4), 28);
        assert_eq!(elemental_count(1), 1);
    }

    #[test]
    fn single_element_form() {
        let g = GroundSet::new(1).unwrap();
        let forms = elemental_forms(g);
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].1.coeff(SubsetMask(1)), int(1));
        assert_eq!(forms[0].0.to_string(), "E(1)");
    }

    #[test]
    fn polymatroid_checks() {
        assert!(is_polymatroid(&uniform(2, 4)));
        assert!(is_matroid(&uniform(2, 4)));
        let g = GroundSet::new(3).unwrap();
        let neg = SetFunction::from_fn(g, |a| if a == SubsetMask(1) { int(-1) } else { int(0) });
        assert!(!is_polymatroid(&neg));
        assert!(first_violated_facet(&neg).is_some());
        assert!(is_polymatroid(&hbar()));
        assert!(!is_matroid(&hbar()));
        assert!(!is_matroid(&uniform(2, 4).scaled(&crate::rational::ratio(1, 2))));
    }

    #[test]
    fn mutual_info_values() {
        let h = hbar();
        assert_eq!(mutual_info(&h, 3, 4, SubsetMask::EMPTY).unwrap(), int(1));
        assert_eq!(mutual_info(&h, 3, 4, SubsetMask(1)).unwrap(), int(0));
        assert!(mutual_info(&h, 3, 3, SubsetMask::EMPTY).is_err());
        assert!(mutual_info(&h, 1, 2, SubsetMask(1)).is_err());
        let z = SetFunction::zero(GroundSet::new(3).unwrap());
        assert_eq!(mutual_info(&z, 1, 2, SubsetMask(4)).unwrap(), int(0));
    }

    #[test]
    fn facet_evaluation_matches_forms() {
        let h = hbar();
        for (id, form) in elemental_forms(h.ground()) {
            assert_eq!(form.evaluate(&h).unwrap(), id.evaluate(&h), "{id}");
        }
    }

    #[test]
    fn zhang_yeung_values() {
        let g = GroundSet::new(4).unwrap();
        let zy = zhang_yeung_form(g, [1, 2, 3, 4]).unwrap();
        assert_eq!(zy.evaluate(&hbar()).unwrap(), int(-1));
        assert_eq!(zy.evaluate(&SetFunction::zero(g)).unwrap(), int(0));
        assert!(zhang_yeung_form(GroundSet::new(3).unwrap(), [1, 2, 3, 1]).is_err());
        assert!(zhang_yeung_form(g, [1, 2, 3, 3]).is_err());
    }

    #[test]
    fn restriction() {
        let f = uniform(2, 5);
        let r = restrict(&f, SubsetMask::from_elements([1, 3, 5])).unwrap();
        assert_eq!(r, uniform(2, 3));
        assert_eq!(restrict(&f, f.ground().full()).unwrap(), f);
        assert!(restrict(&f, SubsetMask::EMPTY).is_err());
    }

    #[test]
    fn text_round_trip() {
        let h = hbar().scaled(&crate::rational::ratio(1, 3));
        assert_eq!(SetFunction::parse_text(&h.to_text()).unwrap(), h);
        assert_eq!(SetFunction::from_json(&h.to_json()).unwrap(), h);
        assert!(SetFunction::parse_text("0 0\n1 1\n2 1\n").is_err());
        assert!(SetFunction::parse_text("0 1\n1 1\n").is_err());
    }

    #[test]
    fn submask_enumeration() {
        let m = SubsetMask(0b1010);
        let subs: Vec<u32> = m.subsets().map(|s| s.0).collect();
        assert_eq!(subs, vec![0, 2, 8, 10]);
        assert_eq!(SubsetMask::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn size_cap() {
        assert!(matches!(GroundSet::new(13), Err(Error::Unsupported(_))));
        assert!(GroundSet::new(0).is_err());
    }
}
