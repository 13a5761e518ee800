//! The inductive `[1, n−1]` decomposition against the LP route.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symcone::cone::Decomposition;
use symcone::families::FamilyTag;
use symcone::rational::int;
use symcone::verify::{decompose_1n, decompose_1n_inductive, random_in_cone, LClass};

#[test]
fn lifts_agree_with_the_lp() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=5 {
        for _ in 0..30 {
            let (h, _) = random_in_cone(n, &mut rng).unwrap();
            assert!(decompose_1n(&h, n).unwrap().is_feasible());
            let d = decompose_1n_inductive(&h, n).unwrap();
            assert_eq!(d.steps.len(), n - 2);
            for step in &d.steps {
                assert!(step.class_list_agrees);
                assert!(step.sum_c_prime <= step.sum_c && step.sum_c_prime <= step.e2);
                // The side condition Σc' ≥ e1 + e2 with Σc' ≤ e2 leaves room only when e1 = 0.
                if step.stated_condition_satisfiable {
                    assert!(step.e1.is_zero());
                }
            }
        }
    }
}

#[test]
fn merged_terms_land_one_step_higher() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 3..=5 {
        let (h, _) = random_in_cone(n, &mut rng).unwrap();
        for step in decompose_1n_inductive(&h, n).unwrap().steps {
            let c_members = step.classes.iter().filter(|c| c.class == LClass::C).count();
            assert_eq!(step.label_mismatches.len(), c_members);
            for (nominal, matched) in &step.label_mismatches {
                let (FamilyTag::Ukm { k: k1, m: m1, .. }, FamilyTag::Ukm { k: k2, m: m2, .. }) =
                    (nominal.parse().unwrap(), matched.parse().unwrap())
                else {
                    panic!("unexpected tags {nominal} {matched}");
                };
                assert_eq!((k1, k2), (step.n - 1, step.n - 1));
                assert_eq!(m2, m1 + 1);
            }
        }
    }
}

#[test]
fn boundary_member_is_in_class_c() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=6 {
        let (h, _) = random_in_cone(n, &mut rng).unwrap();
        for step in decompose_1n_inductive(&h, n).unwrap().steps {
            let size = step.n - 1;
            let top = FamilyTag::Ukm { k: size - 1, m: 2 * size - 2, n: size };
            let member = step.classes.iter().find(|c| c.tag == top).unwrap();
            assert_eq!(member.class, LClass::C);
            assert_eq!(member.l, [int(0), int(0), int(1)]);
        }
    }
}

#[test]
fn outside_points_have_certificates() {
    let h = symcone::families::u1_loop(3).unwrap().scaled(&int(-2));
    assert!(matches!(decompose_1n(&h, 3).unwrap(), Decomposition::Infeasible(_)));
    assert!(decompose_1n_inductive(&h, 3).is_err());
}
