//! Decomposition of `[1, n−1]`-symmetric polymatroids over `𝒰_n`.
//!
//! The default route is an exact conic LP. The inductive route lifts a
//! decomposition for `n − 1` by the two slack parameters `e1, e2`, choosing the
//! split `c'` of the `𝒞`-class weights so that every coefficient stays
//! nonnegative; each lifted vector is matched against `𝒰_n` exactly.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{timed, Counterexample, Outcome, Verdict};
use crate::cone::{conic_decompose, sym_point, Decomposition, Ray};
use crate::error::{invalid, Error, Result};
use crate::families::{family_un, FamilyTag};
use crate::partition::Partition;
use crate::rational::{int, Rational};
use crate::setfn::SetFunction;
use crate::symmetry::{from_sym, to_sym, SymIndexSet, SymVector};

/// `s` as two rows `s[j1][j2]`, `j1 ∈ {0,1}`, `0 ≤ j2 ≤ n−1`.
type Table = [Vec<Rational>; 2];

fn table_of(h: &SetFunction) -> Result<Table> {
    let n = h.n();
    let p = Partition::from_sizes(&[1, n - 1])?;
    let s = to_sym(h, &p)?;
    let row = |j1: usize| (0..n).map(|j2| s.get(&[j1, j2]).expect("in range").clone()).collect();
    Ok([row(0), row(1)])
}

fn function_of(t: &Table) -> Result<SetFunction> {
    let n = t[0].len();
    let p = Partition::from_sizes(&[1, n - 1])?;
    let s = SymVector::from_fn(SymIndexSet::new(&p), |k| t[k[0]][k[1]].clone())?;
    Ok(from_sym(&s))
}

fn add_scaled(acc: &mut Table, c: &Rational, t: &Table) {
    for j1 in 0..2 {
        for (a, v) in acc[j1].iter_mut().zip(&t[j1]) {
            *a += c * v;
        }
    }
}

fn check_input(h: &SetFunction, n: usize) -> Result<Partition> {
    if n < 2 || h.n() != n {
        return Err(invalid(format!("expected a function on {n} ≥ 2 elements, got {}", h.n())));
    }
    Partition::from_sizes(&[1, n - 1])
}

/// Coefficients over `family_un(n)` by exact conic LP, or a certificate in `s`-coordinates.
pub fn decompose_1n(h: &SetFunction, n: usize) -> Result<Decomposition> {
    let p = check_input(h, n)?;
    let members = family_un(n)?;
    let gens = members
        .iter()
        .map(|m| Ray::from_rationals(&sym_point(&to_sym(&m.function, &p)?)))
        .collect::<Result<Vec<_>>>()?;
    let v = sym_point(&to_sym(h, &p)?);
    let out = conic_decompose(&v, &gens)?;
    // Rays are primitive multiples of the members; rescale onto the members themselves.
    Ok(match out {
        Decomposition::Feasible(x) => {
            let scaled = members
                .iter()
                .zip(&gens)
                .zip(x)
                .map(|((m, g), c)| {
                    let s = sym_point(&to_sym(&m.function, &p).expect("members are symmetric"));
                    let (idx, val) = s.iter().enumerate().find(|(_, v)| !v.is_zero()).expect("nonzero member");
                    let factor = Rational::from_integer(g.direction()[idx].clone()) / val;
                    c * factor
                })
                .collect();
            Decomposition::Feasible(scaled)
        }
        other => other,
    })
}

/// The `L`-class of a member of `𝒰_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LClass {
    A,
    B,
    C,
    D,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberClass {
    pub tag: FamilyTag,
    /// `(s_{1,n−1} − s_{1,n−2}, s_{1,n−1} − s_{0,n−1}, s_{0,n−1} − s_{0,n−2})`.
    pub l: [Rational; 3],
    pub class: LClass,
}

/// One lifting step from `n − 1` to `n` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompStep {
    /// Ground size after the step.
    pub n: usize,
    pub e1: Rational,
    pub e2: Rational,
    pub classes: Vec<MemberClass>,
    /// Whether the computed classes coincide with the nominal class list.
    pub class_list_agrees: bool,
    pub a: Rational,
    pub b: Rational,
    pub sum_c: Rational,
    pub sum_c_prime: Rational,
    /// Whether some `c'` satisfies the stated side condition `Σc' ≥ e1 + e2` together with `c' ≤ min(c, e2)` and `Σc' ≤ e2`.
    pub stated_condition_satisfiable: bool,
    /// Nominal target labels that differ from the member actually matched: `(nominal, matched)`.
    pub label_mismatches: Vec<(String, String)>,
    /// Coefficients over `family_un(n)`.
    pub coefficients: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InductiveDecomposition {
    pub coefficients: Vec<Rational>,
    pub steps: Vec<DecompStep>,
}

/// Coefficients over `family_un(n)` built by lifting from `n = 2`.
pub fn decompose_1n_inductive(h: &SetFunction, n: usize) -> Result<InductiveDecomposition> {
    check_input(h, n)?;
    let mut steps = Vec::new();
    let coefficients = lift(&table_of(h)?, &mut steps)?;
    let members = family_un(n)?;
    let mut acc: Table = [vec![int(0); n], vec![int(0); n]];
    for (m, c) in members.iter().zip(&coefficients) {
        add_scaled(&mut acc, c, &table_of(&m.function)?);
    }
    if function_of(&acc)? != *h || coefficients.iter().any(Signed::is_negative) {
        return Err(Error::Precondition("inductive decomposition failed to reconstruct the input".into()));
    }
    Ok(InductiveDecomposition { coefficients, steps })
}

fn classify(t: &Table) -> ([Rational; 3], LClass) {
    let n = t[0].len();
    let l = [
        &t[1][n - 1] - &t[1][n - 2],
        &t[1][n - 1] - &t[0][n - 1],
        &t[0][n - 1] - &t[0][n - 2],
    ];
    let pattern: Vec<i64> = l.iter().map(|x| if x.is_zero() { 0 } else if *x == int(1) { 1 } else { -1 }).collect();
    let class = match pattern.as_slice() {
        [0, 1, 0] => LClass::A,
        [1, 0, 1] => LClass::B,
        [0, 0, 1] => LClass::C,
        [0, 0, 0] => LClass::D,
        _ => LClass::Other,
    };
    (l, class)
}

fn nominal_class(tag: &FamilyTag, n: usize) -> LClass {
    match *tag {
        FamilyTag::U1Loop { .. } => LClass::A,
        FamilyTag::Ukm { k, m, .. } if k == n - 1 && m == n - 1 => LClass::B,
        FamilyTag::Ukm { k, m, .. } if k == n - 1 && m >= n && m <= 2 * n - 2 => LClass::C,
        _ => LClass::D,
    }
}

fn lift(s: &Table, steps: &mut Vec<DecompStep>) -> Result<Vec<Rational>> {
    let size = s[0].len();
    if size == 2 {
        return match decompose_1n(&function_of(s)?, 2)? {
            Decomposition::Feasible(x) => Ok(x),
            Decomposition::Infeasible(_) => Err(Error::Precondition("input is outside the cone".into())),
        };
    }
    let n = size - 1;
    let sub: Table = [s[0][..n].to_vec(), s[1][..n].to_vec()];
    let base = lift(&sub, steps)?;
    let members = family_un(n)?;
    let tables = members.iter().map(|m| table_of(&m.function)).collect::<Result<Vec<_>>>()?;

    let classes: Vec<MemberClass> = members
        .iter()
        .zip(&tables)
        .map(|(m, t)| {
            let (l, class) = classify(t);
            MemberClass { tag: m.tag.clone(), l, class }
        })
        .collect();
    let class_list_agrees = classes.iter().all(|c| c.class == nominal_class(&c.tag, n));
    let of_class = |c: LClass| -> Vec<usize> { (0..classes.len()).filter(|&i| classes[i].class == c).collect() };
    let (class_a, class_b): (Vec<usize>, Vec<usize>) = (of_class(LClass::A), of_class(LClass::B));
    let (ia, ib) = match (class_a.as_slice(), class_b.as_slice()) {
        (&[ia], &[ib]) => (ia, ib),
        _ => return Err(Error::Precondition(format!("classes A and B are not singletons for n = {n}"))),
    };
    let ic: Vec<usize> = of_class(LClass::C);

    let e1 = &s[1][n] - &s[1][n - 1];
    let e2 = &s[0][n] - &s[0][n - 1] - &e1;
    let (a, b) = (base[ia].clone(), base[ib].clone());
    let sum_c: Rational = ic.iter().map(|&i| &base[i]).sum();
    let zero = int(0);
    let need = (&e1 + &e2 - &b).max(zero.clone());
    if e1.is_negative() || e2.is_negative() || need > e2 || need > sum_c || e2 > a {
        return Err(Error::Precondition(format!("slack parameters out of range at n = {}", n + 1)));
    }
    let mut remaining = need.clone();
    let mut c_prime = vec![zero.clone(); members.len()];
    for &i in &ic {
        let take = remaining.clone().min(base[i].clone());
        remaining -= &take;
        c_prime[i] = take;
    }
    let capped_sum: Rational = ic.iter().map(|&i| base[i].clone().min(e2.clone())).sum();
    let stated_condition_satisfiable = &e1 + &e2 <= e2.clone().min(capped_sum);

    let lifted = |t: &Table, x0: Rational, x1: Rational| -> Table {
        let mut out = t.clone();
        out[0].push(x0);
        out[1].push(x1);
        out
    };
    let plus = |x: &Table, y: &Table| -> Table {
        let mut out = x.clone();
        add_scaled(&mut out, &int(1), y);
        out
    };
    let nn = |v: usize| int(v as i64);
    // (coefficient, lifted table, nominal label)
    let mut terms: Vec<(Rational, Table, FamilyTag)> = vec![
        (&a - &e2, lifted(&tables[ia], int(0), int(1)), FamilyTag::U1Loop { n: n + 1 }),
        (
            &b - &e1 - &e2 + &need,
            lifted(&tables[ib], nn(n - 1), nn(n - 1)),
            FamilyTag::Ukm { k: n - 1, m: n, n: n + 1 },
        ),
        (e1.clone(), lifted(&tables[ib], nn(n), nn(n)), FamilyTag::Ukm { k: n, m: n, n: n + 1 }),
        (
            &e2 - &need,
            lifted(&plus(&tables[ia], &tables[ib]), nn(n), nn(n)),
            FamilyTag::Ukm { k: n, m: n + 1, n: n + 1 },
        ),
    ];
    for &i in &ic {
        let FamilyTag::Ukm { m, .. } = classes[i].tag else { unreachable!("class C members are U^n_(k,m)") };
        terms.push((
            &base[i] - &c_prime[i],
            lifted(&tables[i], nn(n - 1), nn(n - 1)),
            FamilyTag::Ukm { k: n - 1, m: m + 1, n: n + 1 },
        ));
        terms.push((
            c_prime[i].clone(),
            lifted(&plus(&tables[ia], &tables[i]), nn(n), nn(n)),
            FamilyTag::Ukm { k: n, m: m + 1, n: n + 1 },
        ));
    }
    let id = of_class(LClass::D);
    for i in id {
        let FamilyTag::Ukm { k, m, .. } = classes[i].tag else { unreachable!("class D members are U^n_(k,m)") };
        terms.push((base[i].clone(), lifted(&tables[i], nn(k), nn(k)), FamilyTag::Ukm { k, m: m + 1, n: n + 1 }));
    }

    let next = family_un(n + 1)?;
    let mut lookup: HashMap<Table, usize> = HashMap::new();
    for (i, m) in next.iter().enumerate() {
        lookup.insert(table_of(&m.function)?, i);
    }
    let mut coefficients = vec![zero; next.len()];
    let mut label_mismatches = Vec::new();
    for (c, t, nominal) in terms {
        if c.is_negative() {
            return Err(Error::Precondition(format!("negative lifted coefficient at n = {}", n + 1)));
        }
        match lookup.get(&t) {
            Some(&i) => {
                if next[i].tag != nominal {
                    label_mismatches.push((nominal.to_string(), next[i].tag.to_string()));
                }
                coefficients[i] += &c;
            }
            None if c.is_zero() => {}
            None => {
                return Err(Error::Precondition(format!("lifted vector for {nominal} is not a family member")))
            }
        }
    }
    steps.push(DecompStep {
        n: n + 1,
        e1,
        e2,
        classes,
        class_list_agrees,
        a,
        b,
        sum_c,
        sum_c_prime: need,
        stated_condition_satisfiable,
        label_mismatches,
        coefficients: coefficients.clone(),
    });
    Ok(coefficients)
}

/// A random nonnegative combination of `𝒰_n` members and its weights.
pub fn random_in_cone<R: Rng>(n: usize, rng: &mut R) -> Result<(SetFunction, Vec<Rational>)> {
    let members = family_un(n)?;
    let weights: Vec<Rational> = members
        .iter()
        .map(|_| {
            if rng.gen_bool(0.4) {
                int(0)
            } else {
                Rational::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=4).into())
            }
        })
        .collect();
    let mut h = SetFunction::zero(members[0].function.ground());
    for (m, w) in members.iter().zip(&weights) {
        h = h.plus(&m.function.scaled(w))?;
    }
    Ok((h, weights))
}

pub(super) fn round_trip_verdict(n: usize, samples: usize, seed: u64) -> Result<Verdict> {
    let members = family_un(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
    let points = (0..samples).map(|_| random_in_cone(n, &mut rng)).collect::<Result<Vec<_>>>()?;
    let params = serde_json::json!({ "n": n, "samples": samples, "seed": seed });
    Ok(timed("decompose_1n", params, || {
        for (h, _) in &points {
            let x = match decompose_1n(h, n) {
                Ok(Decomposition::Feasible(x)) => x,
                Ok(Decomposition::Infeasible(w)) => {
                    return Outcome::fail("in-cone point reported infeasible", Counterexample::vector(&w))
                }
                Err(e) => return Outcome::fail("decomposition failed", Counterexample::note(e.to_string())),
            };
            let mut rebuilt = SetFunction::zero(h.ground());
            for (m, c) in members.iter().zip(&x) {
                rebuilt = rebuilt.plus(&m.function.scaled(c)).expect("same ground");
            }
            if rebuilt != *h || x.iter().any(Signed::is_negative) {
                return Outcome::fail("reconstruction mismatch", Counterexample::vector(h.values()));
            }
            if let Err(e) = decompose_1n_inductive(h, n) {
                return Outcome::fail(
                    format!("inductive route disagrees with the LP: {e}"),
                    Counterexample::vector(h.values()),
                );
            }
        }
        Outcome::pass(format!("{samples} points reconstructed by both routes"))
    }))
}
