use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use symcone::cone::{
    conic_decompose, extreme_rays, int_to_json, psi_p_hrep, ray_to_function, sym_point, Decomposition, Ray,
};
use symcone::families::{family_un, FamilyTag};
use symcone::partition::Partition;
use symcone::rational::{self, Rational};
use symcone::setfn::{first_violated_facet, is_matroid, zhang_yeung_form, SetFunction};
use symcone::symmetry::{facets_by_label, symmetrize, symmetry_violation, to_sym, OrbitKind, SymIndexSet};
use symcone::verify::{decompose_1n, decompose_1n_inductive, run_suite, SuiteConfig, Verdict};
use symcone::{Error, Result};

use crate::output::Report;

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

pub fn read_function(path: &Path) -> Result<SetFunction> {
    let body = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let head = body.trim_start();
    if head.starts_with('[') || head.starts_with('{') {
        let value: Value = serde_json::from_str(&body).map_err(|e| Error::Parse(e.to_string()))?;
        // Either a bare value array or the object printed by `family`.
        SetFunction::from_json(value.get("values").unwrap_or(&value))
    } else {
        SetFunction::parse_text(&body)
    }
}

pub fn facets(p: &Partition) -> Report {
    let cone = psi_p_hrep(p);
    let rows: Vec<Value> = cone
        .rows()
        .iter()
        .map(|r| json!({ "label": r.label.to_string(), "coeffs": r.coeffs.iter().map(int_to_json).collect::<Vec<_>>() }))
        .collect();
    let index = SymIndexSet::new(p);
    let mut header = vec!["label".to_string()];
    header.extend(index.tuples().skip(1).map(|t| SymIndexSet::format_tuple(&t)));
    let mut csv = vec![header];
    for r in cone.rows() {
        let mut line = vec![r.label.to_string()];
        line.extend(r.coeffs.iter().map(ToString::to_string));
        csv.push(line);
    }
    Report {
        text: cone.to_text(),
        json: json!({ "partition": p.to_string(), "dim": cone.dim(), "rows": rows }),
        csv,
        ok: true,
    }
}

pub fn orbits(p: &Partition) -> Report {
    let orbits = facets_by_label(p);
    let kind = |k: OrbitKind| match k {
        OrbitKind::A { .. } => "A",
        OrbitKind::B { .. } => "B",
        OrbitKind::C { .. } => "C",
    };
    let mut text = String::new();
    let mut items = Vec::new();
    let mut csv = vec![vec!["label".into(), "kind".into(), "facets".into()]];
    for (label, members) in &orbits {
        text.push_str(&format!("{label} {}\n", members.len()));
        items.push(json!({ "label": label.to_string(), "kind": kind(label.kind()), "facets": members.len() }));
        csv.push(vec![label.to_string(), kind(label.kind()).into(), members.len().to_string()]);
    }
    Report { text, json: json!({ "partition": p.to_string(), "orbits": items }), csv, ok: true }
}

pub fn project(h: &SetFunction, p: &Partition) -> Result<Report> {
    let image = symmetrize(h, p)?;
    let s = to_sym(&image, p)?;
    let index = s.index();
    let tuples: Vec<String> = index.tuples().map(|t| SymIndexSet::format_tuple(&t)).collect();
    let mut csv = vec![vec!["tuple".into(), "value".into()]];
    csv.extend(tuples.iter().zip(s.values()).map(|(t, v)| vec![t.clone(), rational::format(v)]));
    let entries: Vec<Value> =
        tuples.iter().zip(s.values()).map(|(t, v)| json!({ "tuple": t, "value": rational::format(v) })).collect();
    Ok(Report {
        text: format!("# s-vector\n{}# image\n{}", s.to_text(), image.to_text()),
        json: json!({ "partition": p.to_string(), "s": entries, "image": image.to_json() }),
        csv,
        ok: true,
    })
}

pub fn rays(p: &Partition, max_dim: usize) -> Result<Report> {
    let cone = psi_p_hrep(p);
    let rays = extreme_rays(&cone, max_dim)?;
    let mut text = String::new();
    let mut items = Vec::new();
    let mut csv = vec![vec!["direction".into(), "tight".into()]];
    for r in &rays {
        let tight: Vec<String> = cone.tight_rows(r.direction()).into_iter().map(|i| cone.rows()[i].label.to_string()).collect();
        text.push_str(&format!("{r} | {}\n", tight.join(" ")));
        items.push(json!({ "direction": r, "tight": tight }));
        csv.push(vec![r.to_string(), tight.join(" ")]);
    }
    Ok(Report { text, json: json!({ "partition": p.to_string(), "rays": items }), csv, ok: true })
}

/// Which properties `check` tests.
pub struct Checks {
    pub polymatroid: bool,
    pub matroid: bool,
    pub membership: Option<Partition>,
    pub zy: Option<[usize; 4]>,
}

pub fn check(h: &SetFunction, checks: &Checks) -> Result<Report> {
    let mut results: Vec<(&str, bool, String)> = Vec::new();
    if checks.polymatroid {
        match first_violated_facet(h) {
            None => results.push(("polymatroid", true, "all elemental inequalities hold".into())),
            Some(f) => results.push(("polymatroid", false, format!("violates {f}"))),
        }
    }
    if checks.matroid {
        let ok = is_matroid(h);
        let detail = if ok { "integer, unit-increasing polymatroid" } else { "not a matroid rank function" };
        results.push(("matroid", ok, detail.into()));
    }
    if let Some(p) = &checks.membership {
        if let Some((a, b)) = symmetry_violation(h, p) {
            results.push(("membership", false, format!("not symmetric under {p}: h{a} ≠ h{b}")));
        } else {
            let cone = psi_p_hrep(p);
            let s = sym_point(&to_sym(h, p)?);
            let violated = cone.rows().iter().find(|r| {
                let v: Rational = r.coeffs.iter().zip(&s).map(|(c, x)| Rational::from_integer(c.clone()) * x).sum();
                v < Rational::from_integer(0.into())
            });
            match violated {
                None => results.push(("membership", true, format!("inside the cone of {p}"))),
                Some(r) => results.push(("membership", false, format!("violates {}", r.label))),
            }
        }
    }
    if let Some(roles) = checks.zy {
        let value = zhang_yeung_form(h.ground(), roles)?.evaluate(h)?;
        let ok = value >= Rational::from_integer(0.into());
        results.push(("zhang_yeung", ok, rational::format(&value)));
    }
    let ok = results.iter().all(|r| r.1);
    let status = |b: bool| if b { "pass" } else { "fail" };
    let text = results.iter().map(|(name, pass, d)| format!("{name} {} {d}\n", status(*pass))).collect();
    let mut csv = vec![vec!["check".into(), "pass".into(), "detail".into()]];
    csv.extend(results.iter().map(|(name, pass, d)| vec![name.to_string(), pass.to_string(), d.clone()]));
    let json = Value::Array(
        results.iter().map(|(name, pass, d)| json!({ "check": name, "pass": pass, "detail": d })).collect(),
    );
    Ok(Report { text, json, csv, ok })
}

fn certificate_report(w: &[Rational], tuples: &[String]) -> Report {
    let mut csv = vec![vec!["tuple".into(), "certificate".into()]];
    csv.extend(tuples.iter().zip(w).map(|(t, v)| vec![t.clone(), rational::format(v)]));
    Report {
        text: format!("infeasible; certificate {}\n", strings(w).join(" ")),
        json: json!({ "feasible": false, "certificate": strings(w) }),
        csv,
        ok: false,
    }
}

fn coefficient_report(names: &[String], x: &[Rational], extra: Value) -> Report {
    let mut text = String::new();
    let mut csv = vec![vec!["generator".into(), "coefficient".into()]];
    let mut items = Vec::new();
    for (name, c) in names.iter().zip(x) {
        text.push_str(&format!("{name} {}\n", rational::format(c)));
        csv.push(vec![name.clone(), rational::format(c)]);
        items.push(json!({ "generator": name, "coefficient": rational::format(c) }));
    }
    let mut json = json!({ "feasible": true, "coefficients": items });
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    Report { text, json, csv, ok: true }
}

fn free_tuples(p: &Partition) -> Vec<String> {
    SymIndexSet::new(p).tuples().skip(1).map(|t| SymIndexSet::format_tuple(&t)).collect()
}

/// Over `𝒰_n` for `[1, n−1]`, or over the extreme rays of the cone of `partition`.
pub fn decompose(h: &SetFunction, partition: Option<&Partition>, inductive: bool, max_dim: usize) -> Result<Report> {
    let n = h.n();
    if let Some(p) = partition {
        if inductive {
            return Err(Error::InvalidArgument("the inductive route applies only to [1,n-1]".into()));
        }
        let rays = extreme_rays(&psi_p_hrep(p), max_dim)?;
        let v = sym_point(&to_sym(h, p)?);
        return Ok(match conic_decompose(&v, &rays)? {
            Decomposition::Feasible(x) => {
                let names: Vec<String> = rays.iter().map(Ray::to_string).collect();
                let ranks: Vec<Value> =
                    rays.iter().map(|r| ray_to_function(r, p).map(|f| f.to_json())).collect::<Result<_>>()?;
                coefficient_report(&names, &x, json!({ "ray_functions": ranks }))
            }
            Decomposition::Infeasible(w) => certificate_report(&w, &free_tuples(p)),
        });
    }
    let members = family_un(n)?;
    let names: Vec<String> = members.iter().map(|m| m.tag.to_string()).collect();
    if inductive {
        return match decompose_1n_inductive(h, n) {
            Ok(d) => {
                let steps: Vec<Value> = d
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "n": s.n,
                            "e1": rational::format(&s.e1),
                            "e2": rational::format(&s.e2),
                            "sum_c": rational::format(&s.sum_c),
                            "sum_c_prime": rational::format(&s.sum_c_prime),
                            "class_list_agrees": s.class_list_agrees,
                            "stated_condition_satisfiable": s.stated_condition_satisfiable,
                            "label_mismatches": s.label_mismatches,
                        })
                    })
                    .collect();
                Ok(coefficient_report(&names, &d.coefficients, json!({ "steps": steps })))
            }
            Err(Error::Precondition(msg)) => {
                // Fall back to the LP for a certificate when the lift breaks down outside the cone.
                match decompose_1n(h, n)? {
                    Decomposition::Infeasible(w) => Ok(certificate_report(&w, &free_tuples(&Partition::from_sizes(&[1, n - 1])?))),
                    Decomposition::Feasible(_) => Err(Error::Precondition(msg)),
                }
            }
            Err(e) => Err(e),
        };
    }
    Ok(match decompose_1n(h, n)? {
        Decomposition::Feasible(x) => coefficient_report(&names, &x, json!({})),
        Decomposition::Infeasible(w) => certificate_report(&w, &free_tuples(&Partition::from_sizes(&[1, n - 1])?)),
    })
}

pub fn verify(cfg: &SuiteConfig, timing: bool) -> Report {
    let mut verdicts: Vec<Verdict> = run_suite(cfg);
    if !timing {
        for v in &mut verdicts {
            v.wall_time_ms = 0;
        }
    }
    let ok = verdicts.iter().all(|v| v.pass);
    let mut text = String::new();
    let mut csv = vec![vec!["claim".into(), "params".into(), "pass".into(), "detail".into(), "wall_time_ms".into()]];
    for v in &verdicts {
        let status = if v.pass { "PASS" } else { "FAIL" };
        text.push_str(&format!("{status} {} {} {}\n", v.claim, v.params, v.detail));
        csv.push(vec![v.claim.clone(), v.params.to_string(), v.pass.to_string(), v.detail.clone(), v.wall_time_ms.to_string()]);
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    text.push_str(&format!("{} checks, {failed} failed\n", verdicts.len()));
    Report { text, json: serde_json::to_value(&verdicts).expect("verdicts serialize"), csv, ok }
}

pub fn family(tag: &FamilyTag) -> Result<Report> {
    let h = tag.build()?;
    let mut csv = vec![vec!["mask".into(), "value".into()]];
    csv.extend(h.values().iter().enumerate().map(|(m, v)| vec![m.to_string(), rational::format(v)]));
    Ok(Report {
        text: h.to_text(),
        json: json!({ "tag": tag.to_string(), "n": h.n(), "values": h.to_json() }),
        csv,
        ok: true,
    })
}
