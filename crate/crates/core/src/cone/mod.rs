//! H-representations of the polymatroid cone and its symmetric slices.
//!
//! Coordinates always omit the empty set (or the all-zero tuple), whose value
//! is fixed at zero. For `Γ_n` coordinate `j` is the subset with mask `j + 1`;
//! for `Ψ_p` it is the tuple at lexicographic position `j + 1`.

mod dd;
pub mod linalg;
pub mod lp;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, parse_err, Error, Result};
use crate::partition::Partition;
use crate::rational::{self, primitive, Rational};
use crate::sample::random_symmetric;
use crate::setfn::{elemental_facets, is_polymatroid, FacetId, GroundSet, SetFunction, SubsetMask};
use crate::symmetry::{
    facet_orbit_label, orbit_labels, to_sym, OrbitLabel, SymIndexSet, SymVector,
};

/// Default cap on the dimension accepted by [`extreme_rays`].
pub const DEFAULT_MAX_DIM: usize = 20;

/// What a row stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RowLabel {
    Orbit(OrbitLabel),
    Facet(FacetId),
    Named(String),
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Orbit(l) => write!(f, "{l}"),
            RowLabel::Facet(id) => write!(f, "{id}"),
            RowLabel::Named(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for RowLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A homogeneous inequality `coeffs · x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRow {
    pub coeffs: Vec<BigInt>,
    pub label: RowLabel,
}

/// The coordinate system a cone lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeSpace {
    Symmetric(Partition),
    Full(GroundSet),
    Generic,
}

/// A polyhedral cone `{x : A x ≥ 0}` with labelled rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCone {
    dim: usize,
    rows: Vec<HRow>,
    space: ConeSpace,
}

impl HCone {
    /// Rejects zero rows, repeated rows and rows of the wrong length.
    pub fn new(dim: usize, rows: Vec<HRow>, space: ConeSpace) -> Result<Self> {
        let mut seen = HashSet::new();
        for row in &rows {
            if row.coeffs.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: row.coeffs.len() });
            }
            if row.coeffs.iter().all(Zero::is_zero) {
                return Err(invalid(format!("row {} is zero", row.label)));
            }
            if !seen.insert(&row.coeffs) {
                return Err(invalid(format!("row {} duplicates an earlier row", row.label)));
            }
        }
        Ok(Self { dim, rows, space })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HRow] {
        &self.rows
    }

    pub fn space(&self) -> &ConeSpace {
        &self.space
    }

    /// The cone with row `idx` dropped.
    pub fn without_row(&self, idx: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(idx);
        Self { dim: self.dim, rows, space: self.space.clone() }
    }

    /// Rows (by index) that vanish at `v`.
    pub fn tight_rows(&self, v: &[BigInt]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&r| linalg::dot(&self.rows[r].coeffs, v).is_zero()).collect()
    }

    /// Header `<dim> <rows> labels`, then `label: c_1 ... c_dim` per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} labels\n", self.dim, self.rows.len());
        for row in &self.rows {
            let cs: Vec<String> = row.coeffs.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{}: {}\n", row.label, cs.join(" ")));
        }
        out
    }

    /// Parses the text format. Rational coefficients are scaled to integers.
    pub fn parse_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| parse_err("empty H-representation"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (dim, count) = match fields.as_slice() {
            [d, c, "labels"] | [d, c] => (
                d.parse::<usize>().map_err(|_| parse_err(format!("bad dimension {d:?}")))?,
                c.parse::<usize>().map_err(|_| parse_err(format!("bad row count {c:?}")))?,
            ),
            _ => return Err(parse_err(format!("bad header {header:?}"))),
        };
        let mut rows = Vec::with_capacity(count);
        for line in lines {
            let (label, coeffs) =
                line.rsplit_once(':').ok_or_else(|| parse_err(format!("row without label: {line:?}")))?;
            let values = coeffs.split_whitespace().map(rational::parse).collect::<Result<Vec<_>>>()?;
            if values.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: values.len() });
            }
            rows.push(HRow { coeffs: rational::to_primitive(&values), label: parse_label(label.trim()) });
        }
        if rows.len() != count {
            return Err(parse_err(format!("header announces {count} rows, found {}", rows.len())));
        }
        Self::new(dim, rows, ConeSpace::Generic)
    }
}

fn parse_label(s: &str) -> RowLabel {
    match s.parse::<OrbitLabel>() {
        Ok(l) => RowLabel::Orbit(l),
        Err(_) => RowLabel::Named(s.to_string()),
    }
}

/// A primitive integer direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    direction: Vec<BigInt>,
}

impl Ray {
    /// Divides by the positive gcd of the entries.
    pub fn new(direction: Vec<BigInt>) -> Result<Self> {
        if direction.iter().all(Zero::is_zero) {
            return Err(invalid("a ray must be nonzero"));
        }
        Ok(Self { direction: primitive(direction) })
    }

    pub fn from_rationals(v: &[Rational]) -> Result<Self> {
        Self::new(rational::to_primitive(v))
    }

    pub fn direction(&self) -> &[BigInt] {
        &self.direction
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.direction.iter().map(|x| Rational::from_integer(x.clone())).collect()
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }
}

/// JSON integers; entries beyond 64 bits become decimal strings.
pub fn int_to_json(x: &BigInt) -> serde_json::Value {
    match i64::try_from(x) {
        Ok(v) => serde_json::Value::from(v),
        Err(_) => serde_json::Value::String(x.to_string()),
    }
}

impl Serialize for Ray {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<serde_json::Value> = self.direction.iter().map(int_to_json).collect();
        v.serialize(s)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.direction.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", xs.join(" "))
    }
}

/// `s`-coordinates of `s` without the origin entry.
pub fn sym_point(s: &SymVector) -> Vec<Rational> {
    s.free().to_vec()
}

/// Values of `h` on nonempty subsets in mask order.
pub fn full_point(h: &SetFunction) -> Vec<Rational> {
    h.values()[1..].to_vec()
}

/// Inverse of [`sym_point`].
pub fn sym_vector_of(point: &[Rational], p: &Partition) -> Result<SymVector> {
    SymVector::from_free(SymIndexSet::new(p), point)
}

/// The `Ψ_p` rows, one per orbit label.
pub fn psi_p_hrep(p: &Partition) -> HCone {
    let index = SymIndexSet::new(p);
    let dim = index.len() - 1;
    let rows = orbit_labels(p)
        .into_iter()
        .map(|label| {
            let mut coeffs = vec![BigInt::zero(); dim];
            for (tuple, c) in label.reduced_terms(p) {
                let idx = index.index_of(&tuple).expect("label fits the partition");
                if idx > 0 {
                    coeffs[idx - 1] += c;
                }
            }
            HRow { coeffs, label: RowLabel::Orbit(label) }
        })
        .collect();
    HCone::new(dim, rows, ConeSpace::Symmetric(p.clone())).expect("orbit rows are distinct and nonzero")
}

/// The elemental inequalities over `2^n − 1` coordinates.
pub fn gamma_n_hrep(ground: GroundSet) -> Result<HCone> {
    let dim = ground.num_subsets() - 1;
    let rows = elemental_facets(ground)
        .into_iter()
        .map(|id| {
            let mut coeffs = vec![BigInt::zero(); dim];
            for (m, c) in id.form(ground).coeffs() {
                coeffs[m.bits() as usize - 1] = c.to_integer();
            }
            HRow { coeffs, label: RowLabel::Facet(id) }
        })
        .collect();
    HCone::new(dim, rows, ConeSpace::Full(ground))
}

/// Extreme rays in lexicographic order. `max_dim` bounds the accepted dimension.
pub fn extreme_rays(c: &HCone, max_dim: usize) -> Result<Vec<Ray>> {
    if c.dim > max_dim {
        return Err(Error::Unsupported(format!(
            "cone dimension {} exceeds the configured cap {max_dim}",
            c.dim
        )));
    }
    let rows: Vec<Vec<BigInt>> = c.rows.iter().map(|r| r.coeffs.clone()).collect();
    let rays = dd::extreme_rays(&rows, c.dim)?;
    rays.into_iter().map(Ray::new).collect()
}

pub fn contains(c: &HCone, v: &[Rational]) -> Result<bool> {
    if v.len() != c.dim {
        return Err(Error::DimensionMismatch { expected: c.dim, actual: v.len() });
    }
    Ok(c.rows.iter().all(|r| !linalg::dot_rational(&r.coeffs, v).is_negative()))
}

/// Outcome of [`conic_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `v = Σ c_i r_i` with `c_i ≥ 0`.
    Feasible(Vec<Rational>),
    /// `w` with `w·r_i ≥ 0` for all `i` and `w·v < 0`.
    Infeasible(Vec<Rational>),
}

impl Decomposition {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Decomposition::Feasible(_))
    }
}

/// Writes `v` as a nonnegative combination of `generators`, or certifies that none exists.
/// Both outcomes are checked exactly before returning.
pub fn conic_decompose(v: &[Rational], generators: &[Ray]) -> Result<Decomposition> {
    for g in generators {
        if g.dim() != v.len() {
            return Err(Error::DimensionMismatch { expected: v.len(), actual: g.dim() });
        }
    }
    let columns: Vec<Vec<Rational>> = generators.iter().map(Ray::to_rationals).collect();
    let out = match lp::conic_combination(v, &columns) {
        lp::LpOutcome::Feasible(x) => Decomposition::Feasible(x),
        lp::LpOutcome::Infeasible(w) => Decomposition::Infeasible(w),
    };
    match &out {
        Decomposition::Feasible(x) => {
            let rebuilt = combine(x, &columns, v.len());
            assert!(
                rebuilt == v && x.iter().all(|c| !c.is_negative()),
                "simplex returned an invalid combination"
            );
        }
        Decomposition::Infeasible(w) => {
            let dot = |a: &[Rational]| -> Rational { a.iter().zip(w).map(|(x, y)| x * y).sum() };
            assert!(
                dot(v).is_negative() && columns.iter().all(|c| !dot(c).is_negative()),
                "simplex returned an invalid certificate"
            );
        }
    }
    Ok(out)
}

/// `Σ_i x_i · columns[i]`.
pub fn combine(x: &[Rational], columns: &[Vec<Rational>], dim: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); dim];
    for (c, col) in x.iter().zip(columns) {
        if c.is_zero() {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(col) {
            *a += c * v;
        }
    }
    acc
}

/// Findings of [`facet_reduction_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetReductionReport {
    pub facets: usize,
    pub rows: usize,
    /// A facet whose projected form differs from the row of its label.
    pub mismatched_facet: Option<FacetId>,
    /// Two labels whose reduced rows are proportional.
    pub proportional_pair: Option<(OrbitLabel, OrbitLabel)>,
    /// A symmetric function on which the two membership tests disagree.
    pub membership_counterexample: Option<SetFunction>,
    pub samples: usize,
}

impl FacetReductionReport {
    pub fn passed(&self) -> bool {
        self.mismatched_facet.is_none()
            && self.proportional_pair.is_none()
            && self.membership_counterexample.is_none()
    }
}

/// Projects each facet of `Γ_n` onto `s`-coordinates and compares with the `Ψ_p` rows,
/// then checks membership equivalence on seeded random symmetric functions.
pub fn facet_reduction_check(p: &Partition, samples: usize, seed: u64) -> Result<FacetReductionReport> {
    let cone = psi_p_hrep(p);
    let index = SymIndexSet::new(p);
    let row_of = |label: &OrbitLabel| {
        cone.rows.iter().find(|r| r.label == RowLabel::Orbit(label.clone())).map(|r| &r.coeffs)
    };

    let facets = elemental_facets(p.ground());
    let mut mismatched_facet = None;
    for f in &facets {
        let projected = project_form(f, p, &index);
        let label = facet_orbit_label(f, p);
        if row_of(&label) != Some(&projected) {
            mismatched_facet = Some(*f);
            break;
        }
    }

    let mut proportional_pair = None;
    'outer: for (i, a) in cone.rows.iter().enumerate() {
        for b in &cone.rows[i + 1..] {
            if proportional(&a.coeffs, &b.coeffs) {
                if let (RowLabel::Orbit(la), RowLabel::Orbit(lb)) = (&a.label, &b.label) {
                    proportional_pair = Some((la.clone(), lb.clone()));
                }
                break 'outer;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut membership_counterexample = None;
    for _ in 0..samples {
        let h = random_symmetric(p, &mut rng);
        let reduced = contains(&cone, &sym_point(&to_sym(&h, p)?))?;
        if reduced != is_polymatroid(&h) {
            membership_counterexample = Some(h);
            break;
        }
    }

    Ok(FacetReductionReport {
        facets: facets.len(),
        rows: cone.rows.len(),
        mismatched_facet,
        proportional_pair,
        membership_counterexample,
        samples,
    })
}

/// The restriction of an elemental form to `p`-symmetric functions, in free `s`-coordinates.
pub fn project_form(f: &FacetId, p: &Partition, index: &SymIndexSet) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); index.len() - 1];
    for (m, c) in f.form(p.ground()).coeffs() {
        let idx = index.index_of_mask(*m);
        if idx > 0 {
            coeffs[idx - 1] += c.to_integer();
        }
    }
    coeffs
}

fn proportional(a: &[BigInt], b: &[BigInt]) -> bool {
    let pa = primitive(a.to_vec());
    let pb = primitive(b.to_vec());
    pa == pb || pa.iter().zip(&pb).all(|(x, y)| *x == -y.clone())
}

/// The set function of a `Ψ_p` ray.
pub fn ray_to_function(ray: &Ray, p: &Partition) -> Result<SetFunction> {
    let s = sym_vector_of(&ray.to_rationals(), p)?;
    Ok(crate::symmetry::from_sym(&s))
}

/// Converts a point of `Γ_n` coordinates back to a set function.
pub fn full_function(point: &[Rational], ground: GroundSet) -> Result<SetFunction> {
    let mut values = Vec::with_capacity(point.len() + 1);
    values.push(Rational::zero());
    values.extend_from_slice(point);
    SetFunction::new(ground, values)
}

/// Mask of the subset that coordinate `j` of `Γ_n` refers to.
pub fn full_coordinate_mask(j: usize) -> SubsetMask {
    SubsetMask(j as u32 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn uniform_sym(m: usize, n: usize) -> Vec<Rational> {
        (1..=n).map(|k| int(k.min(m) as i64)).collect()
    }

    #[test]
    fn psi_n_rows() {
        let p = Partition::whole(GroundSet::new(4).unwrap());
        let c = psi_p_hrep(&p);
        assert_eq!(c.dim(), 4);
        assert_eq!(c.rows().len(), 4);
        assert_eq!(c.rows()[0].coeffs, ints(&[0, 0, -1, 1]));
        assert_eq!(c.rows()[1].coeffs, ints(&[2, -1, 0, 0]));
        assert_eq!(c.rows()[2].coeffs, ints(&[-1, 2, -1, 0]));
    }

    #[test]
    fn gamma_row_counts() {
        for (n, rows) in [(2, 3), (3, 9), (4, 28)] {
            let c = gamma_n_hrep(GroundSet::new(n).unwrap()).unwrap();
            assert_eq!(c.rows().len(), rows);
            assert_eq!(c.dim(), (1 << n) - 1);
        }
    }

    #[test]
    fn uniform_rays_of_psi_4() {
        let p = Partition::whole(GroundSet::new(4).unwrap());
        let rays = extreme_rays(&psi_p_hrep(&p), DEFAULT_MAX_DIM).unwrap();
        let mut expect: Vec<Ray> = (1..=4).map(|m| Ray::from_rationals(&uniform_sym(m, 4)).unwrap()).collect();
        expect.sort();
        assert_eq!(rays, expect);
    }

    #[test]
    fn membership() {
        let p = Partition::whole(GroundSet::new(4).unwrap());
        let c = psi_p_hrep(&p);
        let neg: Vec<Rational> = uniform_sym(1, 4).iter().map(|x| -x).collect();
        assert!(!contains(&c, &neg).unwrap());
        assert!(contains(&c, &vec![int(0); 4]).unwrap());
        assert!(contains(&c, &vec![int(0); 3]).is_err());
    }

    #[test]
    fn decompose_uniform_combination() {
        let rays: Vec<Ray> = (1..=4).map(|m| Ray::from_rationals(&uniform_sym(m, 4)).unwrap()).collect();
        let v: Vec<Rational> = (0..4).map(|i| &uniform_sym(1, 4)[i] + int(2) * &uniform_sym(3, 4)[i]).collect();
        match conic_decompose(&v, &rays).unwrap() {
            Decomposition::Feasible(x) => assert_eq!(x, vec![int(1), int(0), int(2), int(0)]),
            other => panic!("{other:?}"),
        }
        let out: Vec<Rational> = v.iter().map(|x| -x).collect();
        assert!(!conic_decompose(&out, &rays).unwrap().is_feasible());
    }

    #[test]
    fn reduction_checks() {
        for sizes in [&[2, 2][..], &[4], &[1, 1, 1, 1], &[1, 3]] {
            let p = Partition::from_sizes(sizes).unwrap();
            let report = facet_reduction_check(&p, 20, 7).unwrap();
            assert!(report.passed(), "{sizes:?}: {report:?}");
        }
    }

    #[test]
    fn hrep_text_round_trip() {
        let p = Partition::from_sizes(&[2, 2]).unwrap();
        let c = psi_p_hrep(&p);
        let parsed = HCone::parse_text(&c.to_text()).unwrap();
        assert_eq!(parsed.rows(), c.rows());
        assert!(HCone::parse_text("2 1 labels\nx: 0 0\n").is_err());
        assert!(HCone::parse_text("2 2 labels\nx: 1 0\ny: 1 0\n").is_err());
        assert!(HCone::parse_text("2 1 labels\nx: 1/2 1\n").is_ok());
    }

    #[test]
    fn oversize_dimension() {
        let c = gamma_n_hrep(GroundSet::new(5).unwrap()).unwrap();
        assert!(matches!(extreme_rays(&c, DEFAULT_MAX_DIM), Err(Error::Unsupported(_))));
    }
}
