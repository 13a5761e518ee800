use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symcone::cone::{contains, extreme_rays, psi_p_hrep, sym_point, HCone, DEFAULT_MAX_DIM};
use symcone::families::{family_un, free_expansion, ExpansionMap};
use symcone::partition::{all_partitions, canonical_representatives, covers, refines, Partition};
use symcone::rational::{int, Rational};
use symcone::sample::{random_function, random_polymatroid, random_symmetric_polymatroid};
use symcone::setfn::{
    is_matroid, is_polymatroid, mutual_info, restrict, GroundSet, LinearForm, Sense, SetFunction, SubsetMask,
};
use symcone::symmetry::{orbit_count_formula, orbit_labels, symmetrize, to_sym};
use symcone::verify::{decompose_1n, decompose_1n_inductive, random_in_cone};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn partition_strategy(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n).prop_flat_map(|n| {
        let all = all_partitions(GroundSet::new(n).unwrap());
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetrize_is_linear_and_idempotent(p in partition_strategy(5), seed in any::<u64>(), c in -5i64..=5) {
        let mut r = rng(seed);
        let f = random_function(p.ground(), &mut r);
        let g = random_function(p.ground(), &mut r);
        let sf = symmetrize(&f, &p).unwrap();
        prop_assert_eq!(symmetrize(&sf, &p).unwrap(), sf.clone());
        let lhs = symmetrize(&f.scaled(&int(c)).plus(&g).unwrap(), &p).unwrap();
        let rhs = sf.scaled(&int(c)).plus(&symmetrize(&g, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetrize_and_restrict_keep_polymatroids(p in partition_strategy(5), seed in any::<u64>(), sub in 1u32..32) {
        let h = random_polymatroid(p.ground(), &mut rng(seed));
        prop_assert!(is_polymatroid(&symmetrize(&h, &p).unwrap()));
        let m = SubsetMask(sub & p.ground().full().bits());
        prop_assume!(!m.is_empty());
        prop_assert!(is_polymatroid(&restrict(&h, m).unwrap()));
    }

    #[test]
    fn refinement_is_a_partial_order(n in 1usize..=4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let all = all_partitions(GroundSet::new(n).unwrap());
        let (a, b, c) = (i.get(&all), j.get(&all), k.get(&all));
        prop_assert!(refines(a, a).unwrap());
        if refines(a, b).unwrap() && refines(b, a).unwrap() {
            prop_assert_eq!(a.normalized(), b.normalized());
        }
        if refines(a, b).unwrap() && refines(b, c).unwrap() {
            prop_assert!(refines(a, c).unwrap());
        }
        if covers(b, a) {
            prop_assert!(refines(a, b).unwrap());
            prop_assert_eq!(a.t(), b.t() + 1);
        }
    }

    #[test]
    fn mutual_information_matches_its_form(seed in any::<u64>(), n in 2usize..=5, i in 1usize..=5, j in 1usize..=5, cond in 0u32..32) {
        prop_assume!(i <= n && j <= n && i != j);
        let g = GroundSet::new(n).unwrap();
        let f = random_function(g, &mut rng(seed));
        let k = SubsetMask(cond & g.full().bits()).without(i).without(j);
        let mut form = LinearForm::new(g, Sense::GeZero);
        form.add_mutual_info(&int(1), SubsetMask::singleton(i), SubsetMask::singleton(j), k);
        prop_assert_eq!(form.evaluate(&f).unwrap(), mutual_info(&f, i, j, k).unwrap());
    }

    #[test]
    fn reduced_membership_matches_full(p in partition_strategy(5), seed in any::<u64>()) {
        let h = random_symmetric_polymatroid(&p, &mut rng(seed));
        let s = to_sym(&h, &p).unwrap();
        prop_assert!(contains(&psi_p_hrep(&p), &sym_point(&s)).unwrap());
    }

    #[test]
    fn decomposition_reconstructs(n in 2usize..=5, seed in any::<u64>()) {
        let (h, _) = random_in_cone(n, &mut rng(seed)).unwrap();
        let members = family_un(n).unwrap();
        let symcone::cone::Decomposition::Feasible(x) = decompose_1n(&h, n).unwrap() else {
            return Err(TestCaseError::fail("in-cone point reported infeasible"));
        };
        let mut rebuilt = SetFunction::zero(h.ground());
        for (m, c) in members.iter().zip(&x) {
            prop_assert!(c >= &int(0));
            rebuilt = rebuilt.plus(&m.function.scaled(c)).unwrap();
        }
        prop_assert_eq!(rebuilt, h.clone());
        let ind = decompose_1n_inductive(&h, n).unwrap();
        prop_assert_eq!(ind.steps.len(), n - 2);
    }

    #[test]
    fn free_expansion_is_a_matroid(seed in any::<u64>(), n in 1usize..=3) {
        let g = GroundSet::new(n).unwrap();
        // Integer rank functions with small singletons keep the target small.
        let mut r = rng(seed);
        let h = loop {
            let h = random_polymatroid(g, &mut r);
            let h = SetFunction::from_fn(g, |a| Rational::from_integer(h.get(a).floor().to_integer()));
            if is_polymatroid(&h)
                && g.subsets().skip(1).all(|a| a.len() != 1 || *h.get(a) <= int(3))
                && g.subsets().any(|a| *h.get(a) > int(0))
            {
                break h;
            }
        };
        let phi = ExpansionMap::canonical(&h).unwrap();
        prop_assert!(is_matroid(&free_expansion(&h, &phi).unwrap()));
    }

    #[test]
    fn ray_enumeration_ignores_row_order(p in partition_strategy(4), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let cone = psi_p_hrep(&p);
        let mut rows = cone.rows().to_vec();
        rows.shuffle(&mut rng(seed));
        let shuffled = HCone::new(cone.dim(), rows, cone.space().clone()).unwrap();
        let a = extreme_rays(&cone, DEFAULT_MAX_DIM).unwrap();
        let b: BTreeSet<_> = extreme_rays(&shuffled, DEFAULT_MAX_DIM).unwrap().into_iter().collect();
        prop_assert_eq!(a.iter().cloned().collect::<BTreeSet<_>>(), b);
        prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn label_counts_match_formula() {
    for n in 1..=6 {
        for p in canonical_representatives(n).unwrap() {
            assert_eq!(orbit_labels(&p).len() as u128, orbit_count_formula(&p), "{p}");
        }
    }
}

/// No ray is a nonnegative combination of the others: each is tight on a set
/// of rows whose rank is `d − 1`.
#[test]
fn rays_are_irredundant() {
    for n in 2..=4 {
        for p in canonical_representatives(n).unwrap() {
            let cone = psi_p_hrep(&p);
            let rays = extreme_rays(&cone, DEFAULT_MAX_DIM).unwrap();
            for r in &rays {
                let tight: Vec<&[BigInt]> =
                    cone.tight_rows(r.direction()).into_iter().map(|i| cone.rows()[i].coeffs.as_slice()).collect();
                assert_eq!(symcone::cone::linalg::rank(&tight) + 1, cone.dim(), "{p}");
            }
        }
    }
}

#[test]
fn family_members_lie_in_the_cone() {
    for n in 2..=6 {
        let p = Partition::from_sizes(&[1, n - 1]).unwrap();
        for m in family_un(n).unwrap() {
            assert!(is_polymatroid(&m.function), "{}", m.tag);
            assert!(contains(&psi_p_hrep(&p), &sym_point(&to_sym(&m.function, &p).unwrap())).unwrap());
        }
    }
}
