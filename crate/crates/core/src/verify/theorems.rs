use std::collections::BTreeSet;

use num_traits::Signed;

use super::{timed, Counterexample, Outcome, Verdict};
use crate::cone::{
    contains, extreme_rays, facet_reduction_check, psi_p_hrep, sym_point, HCone, Ray,
};
use crate::error::{invalid, Error, Result};
use crate::families::{family_un, family_un_size, gap_witness_on, uniform};
use crate::partition::Partition;
use crate::rational;
use crate::setfn::{first_violated_facet, restrict, zhang_yeung_form, GroundSet, SubsetMask};
use crate::symmetry::{facets_by_label, orbit_count_formula, orbit_labels, to_sym};

fn ray_of(h: &crate::setfn::SetFunction, p: &Partition) -> Result<Ray> {
    Ray::from_rationals(&sym_point(&to_sym(h, p)?))
}

/// Compares two ray sets; on mismatch names the first extra or missing ray.
fn compare_rays(found: &[Ray], expected: &[Ray]) -> Option<Counterexample> {
    let found_set: BTreeSet<&Ray> = found.iter().collect();
    let expected_set: BTreeSet<&Ray> = expected.iter().collect();
    if let Some(extra) = found_set.difference(&expected_set).next() {
        return Some(Counterexample::integers(extra.direction()));
    }
    expected_set.difference(&found_set).next().map(|missing| Counterexample::integers(missing.direction()))
}

/// The rays of `Ψ_[n]` are the uniform matroids, each off exactly one facet.
pub fn verify_psi_n(n: usize, max_dim: usize) -> Result<Verdict> {
    if n < 2 {
        return Err(invalid("the check needs n ≥ 2"));
    }
    let p = Partition::whole(GroundSet::new(n)?);
    verify_psi_n_cone(&psi_p_hrep(&p), n, max_dim)
}

/// [`verify_psi_n`] against an arbitrary cone in `[n]` coordinates (for negative controls).
pub fn verify_psi_n_cone(cone: &HCone, n: usize, max_dim: usize) -> Result<Verdict> {
    let p = Partition::whole(GroundSet::new(n)?);
    let mut expected = (1..=n).map(|m| ray_of(&uniform(m, n)?, &p)).collect::<Result<Vec<_>>>()?;
    expected.sort();
    let params = serde_json::json!({ "n": n });
    Ok(timed("psi_n_rays", params, || {
        let rays = match extreme_rays(cone, max_dim) {
            Ok(r) => r,
            Err(Error::NotPointed { direction }) => {
                return Outcome::fail(
                    "cone contains a line, so both directions are spurious rays",
                    Counterexample::Vector { values: direction },
                )
            }
            Err(e) => return Outcome::fail("ray enumeration failed", Counterexample::note(e.to_string())),
        };
        if let Some(cx) = compare_rays(&rays, &expected) {
            return Outcome::fail(format!("{} rays found, {} expected", rays.len(), expected.len()), cx);
        }
        let mut missed = BTreeSet::new();
        for r in &rays {
            let tight = cone.tight_rows(r.direction());
            if tight.len() + 1 != cone.rows().len() {
                return Outcome::fail(
                    format!("ray is tight on {} of {} facets", tight.len(), cone.rows().len()),
                    Counterexample::integers(r.direction()),
                );
            }
            let off = (0..cone.rows().len()).find(|i| !tight.contains(i)).expect("one row is slack");
            if !missed.insert(off) {
                return Outcome::fail(
                    "two rays miss the same facet",
                    Counterexample::Label { label: cone.rows()[off].label.to_string() },
                );
            }
        }
        Outcome::pass(format!("{} rays, each off exactly one facet", rays.len()))
    }))
}

/// The rays of `Ψ_[1,n−1]` are the members of `𝒰_n`.
pub fn verify_psi_1n1(n: usize, max_dim: usize) -> Result<Verdict> {
    if n < 2 {
        return Err(invalid("the check needs n ≥ 2"));
    }
    let p = Partition::from_sizes(&[1, n - 1])?;
    let mut expected =
        family_un(n)?.iter().map(|m| ray_of(&m.function, &p)).collect::<Result<Vec<_>>>()?;
    expected.sort();
    let cone = psi_p_hrep(&p);
    let params = serde_json::json!({ "n": n });
    Ok(timed("psi_1n1_rays", params, || {
        let rays = match extreme_rays(&cone, max_dim) {
            Ok(r) => r,
            Err(e) => return Outcome::fail("ray enumeration failed", Counterexample::note(e.to_string())),
        };
        if let Some(cx) = compare_rays(&rays, &expected) {
            return Outcome::fail(format!("{} rays found, {} expected", rays.len(), expected.len()), cx);
        }
        if rays.len() != family_un_size(n) {
            return Outcome::fail("family members are not distinct rays", Counterexample::note(rays.len().to_string()));
        }
        Outcome::pass(format!("{} rays", rays.len()))
    }))
}

/// Facet orbits of `Γ_n` map one-to-one onto the rows of `Ψ_p`.
pub fn verify_facet_bijection(p: &Partition, seed: u64) -> Result<Verdict> {
    let report = facet_reduction_check(p, 20, seed)?;
    let labels = orbit_labels(p).len();
    let direct = facets_by_label(p).len();
    let formula = orbit_count_formula(p);
    let params = serde_json::json!({ "partition": p.to_string() });
    Ok(timed("facet_bijection", params, || {
        if let Some(f) = report.mismatched_facet {
            return Outcome::fail("projected facet differs from its orbit row", Counterexample::Facet { facet: f.to_string() });
        }
        if let Some((a, b)) = &report.proportional_pair {
            return Outcome::fail(format!("rows of {a} and {b} are proportional"), Counterexample::Label { label: a.to_string() });
        }
        if let Some(h) = &report.membership_counterexample {
            return Outcome::fail("reduced and full membership disagree", Counterexample::vector(h.values()));
        }
        if labels as u128 != formula || direct != labels || report.rows != labels {
            return Outcome::fail(
                "orbit counts disagree",
                Counterexample::note(format!("enumerated {labels}, direct {direct}, formula {formula}, rows {}", report.rows)),
            );
        }
        Outcome::pass(format!("{} facets reduce to {} rows", report.facets, report.rows))
    }))
}

/// A union of blocks of `p` with both it and its complement of size ≥ 2.
/// Returns the two-block coarsening with that union first.
pub fn gap_coarsening(p: &Partition) -> Option<Partition> {
    let n = p.n();
    let t = p.t();
    if t == 2 {
        return (p.block(0).len() >= 2 && p.block(1).len() >= 2).then(|| p.clone());
    }
    for sel in 1u32..(1 << t) - 1 {
        let first = (0..t).filter(|l| sel >> l & 1 == 1).fold(SubsetMask::EMPTY, |m, l| m.union(p.block(l)));
        let size = first.len();
        if size >= 2 && size + 2 <= n {
            let rest = p.ground().full().difference(first);
            return Partition::new(p.ground(), vec![first, rest]).ok();
        }
    }
    None
}

/// `Ψ_p` contains a polymatroid violating the Zhang-Yeung inequality.
pub fn verify_gap(p: &Partition) -> Result<Verdict> {
    let q = gap_coarsening(p).ok_or_else(|| {
        invalid(format!(
            "{p} admits no coarsening into two blocks of size at least 2; its symmetric cone has no such gap"
        ))
    })?;
    let h = gap_witness_on(&q)?;
    let pick = |b: SubsetMask| b.elements().take(2).collect::<Vec<_>>();
    let (first, second) = (pick(q.block(0)), pick(q.block(1)));
    let four = SubsetMask::from_elements(first.iter().chain(&second).copied());
    let position = |e: usize| four.elements().position(|x| x == e).expect("element in subset") + 1;
    let roles = [position(first[0]), position(first[1]), position(second[0]), position(second[1])];
    let restricted = restrict(&h, four)?;
    let zy = zhang_yeung_form(restricted.ground(), roles)?.evaluate(&restricted)?;
    let s = to_sym(&h, p)?;
    let in_cone = contains(&psi_p_hrep(p), &sym_point(&s))?;
    let violated = first_violated_facet(&h);
    let params = serde_json::json!({ "partition": p.to_string(), "coarsening": q.to_string() });
    Ok(timed("gap", params, || {
        if let Some(f) = violated {
            return Outcome::fail("witness is not a polymatroid", Counterexample::Facet { facet: f.to_string() });
        }
        if !in_cone {
            return Outcome::fail("witness violates a symmetric-cone row", Counterexample::vector(s.values()));
        }
        if !zy.is_negative() {
            return Outcome::fail(
                format!("Zhang-Yeung value {} is not negative", rational::format(&zy)),
                Counterexample::vector(restricted.values()),
            );
        }
        Outcome::pass(format!("Zhang-Yeung value {} on {four}", rational::format(&zy)))
    }))
}
