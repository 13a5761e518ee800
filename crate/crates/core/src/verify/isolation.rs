//! Isolation witnesses: symmetric polymatroids strictly off one facet orbit
//! while tight on every sibling orbit of a coarser partition.

use num_traits::{Signed, Zero};

use super::{timed, Counterexample, Outcome, Verdict};
use crate::cone::{linalg, psi_p_hrep, sym_point, RowLabel};
use crate::error::{invalid, Error, Result};
use crate::families::uniform;
use crate::partition::{covers, partition_vector, Partition};
use crate::rational::int;
use crate::setfn::{is_polymatroid, SetFunction};
use crate::symmetry::{facet_orbit_label, is_p_symmetric, orbit_labels, to_sym, OrbitKind, OrbitLabel};

/// The coarser partition whose orbit contains the target, or the virtual
/// partition above the one-block partition (all facets in one orbit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsolationContext {
    Virtual,
    Coarser(Partition),
}

/// Which construction produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IsolationCase {
    /// One-block partition: a uniform matroid.
    Uniform,
    /// Target supported on the merged blocks: monotone facet, `|A ∩ N_a|`.
    MergedMonotone,
    /// Target supported on the merged blocks: both indices in one block.
    MergedInner,
    /// Target supported on the merged blocks: one index in each.
    MergedAcross,
    /// One index in a merged block, one outside.
    MixedPair,
    /// Monotone facet on an untouched block.
    UnmergedMonotone,
    /// Both indices inside one untouched block.
    UnmergedInner,
    /// One index in each of two untouched blocks.
    UnmergedPair,
}

impl IsolationCase {
    /// Numbering of the five cover cases; `None` for the one-block construction.
    pub fn cover_case(self) -> Option<u8> {
        match self {
            IsolationCase::Uniform => None,
            IsolationCase::MergedMonotone | IsolationCase::MergedInner | IsolationCase::MergedAcross => Some(1),
            IsolationCase::MixedPair => Some(2),
            IsolationCase::UnmergedMonotone => Some(3),
            IsolationCase::UnmergedInner => Some(4),
            IsolationCase::UnmergedPair => Some(5),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationWitness {
    pub p: Partition,
    pub target: OrbitLabel,
    pub context: IsolationContext,
    /// The target's label under the coarser partition.
    pub context_label: Option<OrbitLabel>,
    pub case: IsolationCase,
    pub h: SetFunction,
}

/// Labels of `p` that fall into some context orbit (all of them).
pub fn isolation_targets(p: &Partition, context: &IsolationContext) -> Result<Vec<OrbitLabel>> {
    check_context(p, context)?;
    Ok(orbit_labels(p))
}

fn check_context(p: &Partition, context: &IsolationContext) -> Result<()> {
    match context {
        IsolationContext::Virtual if p.t() != 1 => {
            Err(invalid("the virtual context applies only to the one-block partition"))
        }
        IsolationContext::Coarser(q) if !covers(q, p) => Err(invalid(format!("{q} does not cover {p}"))),
        _ => Ok(()),
    }
}

/// Indices `a < b` of the blocks of `p` merged in `q`.
fn merged_pair(p: &Partition, q: &Partition) -> (usize, usize) {
    let merged = q.blocks().iter().find(|b| !p.blocks().contains(b)).expect("q covers p");
    let parts: Vec<usize> = (0..p.t()).filter(|&l| p.block(l).is_subset(*merged)).collect();
    (parts[0], parts[1])
}

/// The piecewise witness for `[(1,1),(k1,k2)]` on two blocks of sizes `n1, n2`,
/// evaluated at `(i, j) = (|A ∩ N_1|, |A ∩ N_2|)` with `l_m = k_m + 1`.
pub fn across_value(i: i64, j: i64, n1: i64, n2: i64, l1: i64, l2: i64) -> i64 {
    let inside = (i <= l1) == (j <= l2);
    if inside {
        i * n2 + j * n1 - i * j
    } else if i <= l1 {
        j * l1 - (j - l2) * (l1 - i - 1).max(0) + i * (n2 - j) + j * (n1 - l1)
    } else {
        i * l2 - (i - l1) * (l2 - j - 1).max(0) + j * (n1 - i) + i * (n2 - l2)
    }
}

/// Witness for `target` within `q = (N_a, N_b)`, as a function of the two block counts.
fn two_block(target: &OrbitLabel, a: usize, b: usize, na: i64, nb: i64) -> (IsolationCase, Box<dyn Fn(i64, i64) -> i64>) {
    let li = &target.lambda_i.0;
    let k = &target.lambda_k.0;
    let (ka, kb) = (k[a] as i64, k[b] as i64);
    match (li[a], li[b]) {
        (1, 0) if target.lambda_i.total() == 1 => (IsolationCase::MergedMonotone, Box::new(|i, _| i)),
        (0, 1) if target.lambda_i.total() == 1 => (IsolationCase::MergedMonotone, Box::new(|_, j| j)),
        (2, 0) => (IsolationCase::MergedInner, Box::new(move |i, _| i.min(ka + 1))),
        (0, 2) => (IsolationCase::MergedInner, Box::new(move |_, j| j.min(kb + 1))),
        (1, 1) => (
            IsolationCase::MergedAcross,
            Box::new(move |i, j| across_value(i, j, na, nb, ka + 1, kb + 1)),
        ),
        _ => unreachable!("target is supported on the merged blocks"),
    }
}

/// Constructs the witness isolating `target` inside its context orbit.
pub fn build_isolation(p: &Partition, target: &OrbitLabel, context: &IsolationContext) -> Result<IsolationWitness> {
    check_context(p, context)?;
    if !orbit_labels(p).contains(target) {
        return Err(invalid(format!("{target} is not an orbit label of {p}")));
    }
    let n = p.n();
    let (case, h, context_label) = match context {
        IsolationContext::Virtual => {
            let h = match target.kind() {
                OrbitKind::A { .. } => uniform(n, n)?,
                OrbitKind::C { .. } => uniform(target.lambda_k.0[0] + 1, n)?,
                OrbitKind::B { .. } => unreachable!("one block has no cross labels"),
            };
            (IsolationCase::Uniform, h, None)
        }
        IsolationContext::Coarser(q) => {
            let (a, b) = merged_pair(p, q);
            let sizes = p.block_sizes();
            let k = &target.lambda_k.0;
            let support = target.support();
            let in_merged = |l: usize| l == a || l == b;
            let from_counts = |f: &dyn Fn(&[usize]) -> i64| {
                SetFunction::from_fn(p.ground(), |m| int(f(&partition_vector(m, p).0)))
            };
            // `min(r, Σ_{l ∈ blocks} counts[l])`.
            let truncated = |blocks: Vec<usize>, r: usize| {
                from_counts(&move |c: &[usize]| blocks.iter().map(|&l| c[l]).sum::<usize>().min(r) as i64)
            };
            let (case, h) = if support.iter().all(|&l| in_merged(l)) {
                let (case, f) = two_block(target, a, b, sizes[a] as i64, sizes[b] as i64);
                (case, from_counts(&|c: &[usize]| f(c[a] as i64, c[b] as i64)))
            } else {
                match (target.kind(), support.as_slice()) {
                    (OrbitKind::B { .. }, &[l1, l2]) if in_merged(l1) || in_merged(l2) => {
                        let (x, c) = if in_merged(l1) { (l1, l2) } else { (l2, l1) };
                        (IsolationCase::MixedPair, truncated(vec![x, c], k[x] + k[c] + 1))
                    }
                    (OrbitKind::A { l }, _) => (IsolationCase::UnmergedMonotone, truncated(vec![l], sizes[l])),
                    (OrbitKind::C { l }, _) => (IsolationCase::UnmergedInner, truncated(vec![a, l], k[a] + k[l] + 1)),
                    (OrbitKind::B { l1, l2 }, _) => {
                        (IsolationCase::UnmergedPair, truncated(vec![a, l1, l2], k[a] + k[l1] + k[l2] + 1))
                    }
                }
            };
            let rep = target.representative_facet(p)?;
            (case, h, Some(facet_orbit_label(&rep, q)))
        }
    };
    Ok(IsolationWitness { p: p.clone(), target: target.clone(), context: context.clone(), context_label, case, h })
}

/// Checks membership in `Ψ_p`, strict slack on the target row and tightness on
/// every other row of the context orbit.
pub fn check_isolation(w: &IsolationWitness) -> Verdict {
    let params = serde_json::json!({
        "partition": w.p.to_string(),
        "target": w.target.to_string(),
        "context": match &w.context {
            IsolationContext::Virtual => "virtual".to_string(),
            IsolationContext::Coarser(q) => q.to_string(),
        },
    });
    timed("isolation_witness", params, || match isolation_outcome(w) {
        Ok(o) => o,
        Err(e) => Outcome::fail("witness could not be evaluated", Counterexample::note(e.to_string())),
    })
}

fn isolation_outcome(w: &IsolationWitness) -> Result<Outcome> {
    if !is_p_symmetric(&w.h, &w.p) || !is_polymatroid(&w.h) {
        return Ok(Outcome::fail("witness is not in the symmetric cone", Counterexample::vector(w.h.values())));
    }
    let cone = psi_p_hrep(&w.p);
    let s = sym_point(&to_sym(&w.h, &w.p)?);
    let mut others = 0;
    for row in cone.rows() {
        let RowLabel::Orbit(label) = &row.label else {
            return Err(Error::Precondition("unlabelled row".into()));
        };
        let value = linalg::dot_rational(&row.coeffs, &s);
        if value.is_negative() {
            return Ok(Outcome::fail("witness violates a row", Counterexample::Label { label: label.to_string() }));
        }
        if *label == w.target {
            if !value.is_positive() {
                return Ok(Outcome::fail("target row is tight", Counterexample::Label { label: label.to_string() }));
            }
            continue;
        }
        let in_context = match (&w.context, &w.context_label) {
            (IsolationContext::Virtual, _) => true,
            (IsolationContext::Coarser(q), Some(cl)) => facet_orbit_label(&label.representative_facet(&w.p)?, q) == *cl,
            (IsolationContext::Coarser(_), None) => return Err(Error::Precondition("missing context label".into())),
        };
        if in_context {
            others += 1;
            if !value.is_zero() {
                return Ok(Outcome::fail(
                    "sibling row in the context orbit is not tight",
                    Counterexample::Label { label: label.to_string() },
                ));
            }
        }
    }
    Ok(Outcome::pass(format!("target isolated from {others} sibling orbits")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfn::GroundSet;

    fn label(s: &str) -> OrbitLabel {
        s.parse().unwrap()
    }

    #[test]
    fn two_by_two_examples() {
        let p = Partition::from_sizes(&[2, 2]).unwrap();
        let ctx = IsolationContext::Coarser(Partition::whole(p.ground()));
        let w = build_isolation(&p, &label("[1_2(1)|0]"), &ctx).unwrap();
        assert!(w.h.ground().subsets().all(|a| *w.h.get(a) == int(a.intersection(p.block(0)).len() as i64)));
        let w = build_isolation(&p, &label("[1_2(1,2)|0,0]"), &ctx).unwrap();
        let s = to_sym(&w.h, &p).unwrap();
        assert_eq!(*s.get(&[1, 1]).unwrap(), int(3));
        let w = build_isolation(&p, &label("[2_2(1)|0,0]"), &ctx).unwrap();
        assert!(w.h.ground().subsets().all(|a| *w.h.get(a) == int(a.intersection(p.block(0)).len().min(1) as i64)));
        for t in orbit_labels(&p) {
            let v = check_isolation(&build_isolation(&p, &t, &ctx).unwrap());
            assert!(v.pass, "{t}: {v:?}");
        }
    }

    #[test]
    fn corrupted_witness_fails() {
        let p = Partition::from_sizes(&[2, 2]).unwrap();
        let ctx = IsolationContext::Coarser(Partition::whole(p.ground()));
        let mut w = build_isolation(&p, &label("[1_2(1,2)|0,0]"), &ctx).unwrap();
        w.h = uniform(4, 4).unwrap();
        let v = check_isolation(&w);
        assert!(!v.pass);
        assert_eq!(v.counterexample, Some(Counterexample::Label { label: "[1_2(1,2)|0,0]".into() }));
    }

    #[test]
    fn virtual_context() {
        let p = Partition::whole(GroundSet::new(5).unwrap());
        for t in orbit_labels(&p) {
            let w = build_isolation(&p, &t, &IsolationContext::Virtual).unwrap();
            assert!(check_isolation(&w).pass, "{t}");
        }
        let q = Partition::from_sizes(&[2, 3]).unwrap();
        assert!(build_isolation(&q, &label("[1_2(1)|0]"), &IsolationContext::Virtual).is_err());
    }

    #[test]
    fn label_outside_partition() {
        let p = Partition::from_sizes(&[1, 3]).unwrap();
        let ctx = IsolationContext::Coarser(Partition::whole(p.ground()));
        assert!(build_isolation(&p, &label("[2_2(1)|0,0]"), &ctx).is_err());
    }
}
