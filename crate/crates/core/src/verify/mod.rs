//! Machine checks of the structural claims: extreme-ray families, the facet-orbit
//! bijection, gap witnesses, isolation witnesses and `[1, n−1]` decompositions.
//!
//! Each check returns a [`Verdict`]; failing verdicts carry a counterexample
//! that can be replayed.

mod decompose;
mod isolation;
mod theorems;

use std::time::Instant;

use serde::Serialize;

pub use decompose::{
    decompose_1n, decompose_1n_inductive, random_in_cone, DecompStep, InductiveDecomposition, LClass, MemberClass,
};
pub use isolation::{
    build_isolation, check_isolation, isolation_targets, IsolationCase, IsolationContext, IsolationWitness,
};
pub use theorems::{
    gap_coarsening, verify_facet_bijection, verify_gap, verify_psi_1n1, verify_psi_n, verify_psi_n_cone,
};

use crate::partition::{canonical_representatives, Partition};
use crate::rational::{self, Rational};

/// Evidence attached to a failing verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// A point or direction, entries as `p/q`.
    Vector { values: Vec<String> },
    /// An elemental facet such as `E(1,2|3)`.
    Facet { facet: String },
    /// An orbit label such as `[1_2(1)|0]`.
    Label { label: String },
    Note { message: String },
}

impl Counterexample {
    pub fn vector(v: &[Rational]) -> Self {
        Counterexample::Vector { values: v.iter().map(rational::format).collect() }
    }

    pub fn integers<T: ToString>(v: &[T]) -> Self {
        Counterexample::Vector { values: v.iter().map(ToString::to_string).collect() }
    }

    pub fn note(s: impl Into<String>) -> Self {
        Counterexample::Note { message: s.into() }
    }
}

/// The outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub params: serde_json::Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub detail: String,
    pub wall_time_ms: u128,
}

pub(crate) struct Outcome {
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
    pub detail: String,
}

impl Outcome {
    pub fn pass(detail: impl Into<String>) -> Self {
        Self { pass: true, counterexample: None, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>, cx: Counterexample) -> Self {
        Self { pass: false, counterexample: Some(cx), detail: detail.into() }
    }
}

pub(crate) fn timed(claim: &str, params: serde_json::Value, f: impl FnOnce() -> Outcome) -> Verdict {
    let start = Instant::now();
    let out = f();
    Verdict {
        claim: claim.to_string(),
        params,
        pass: out.pass,
        counterexample: out.counterexample,
        detail: out.detail,
        wall_time_ms: start.elapsed().as_millis(),
    }
}

/// Which checks [`run_suite`] performs.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub psi_n: Vec<usize>,
    pub psi_1n1: Vec<usize>,
    /// Canonical partitions of every `n` in this range are checked for the facet bijection.
    pub bijection_max_n: usize,
    pub gap: Vec<Partition>,
    /// Isolation witnesses for all cover pairs of canonical partitions up to this size.
    pub isolation_max_n: usize,
    /// Random decompositions per `n` in `decompose_ns`.
    pub decompose_samples: usize,
    pub decompose_ns: Vec<usize>,
    pub seed: u64,
    pub max_dim: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let gap = [&[2, 2][..], &[2, 3], &[3, 3], &[1, 1, 2], &[1, 2, 2], &[1, 1, 2, 2]]
            .iter()
            .map(|s| Partition::from_sizes(s).expect("valid sizes"))
            .collect();
        Self {
            psi_n: (2..=7).collect(),
            psi_1n1: (2..=5).collect(),
            bijection_max_n: 6,
            gap,
            isolation_max_n: 5,
            decompose_samples: 10,
            decompose_ns: vec![3, 4, 5],
            seed: 0,
            max_dim: crate::cone::DEFAULT_MAX_DIM,
        }
    }
}

fn error_verdict(claim: &str, params: serde_json::Value, e: crate::Error) -> Verdict {
    Verdict {
        claim: claim.to_string(),
        params,
        pass: false,
        counterexample: Some(Counterexample::note(e.to_string())),
        detail: "check could not run".into(),
        wall_time_ms: 0,
    }
}

/// Runs every configured check in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<Verdict> {
    let mut out = Vec::new();
    let mut push = |claim: &str, params: serde_json::Value, r: crate::Result<Verdict>| match r {
        Ok(v) => out.push(v),
        Err(e) => out.push(error_verdict(claim, params, e)),
    };
    for &n in &cfg.psi_n {
        push("psi_n_rays", serde_json::json!({ "n": n }), verify_psi_n(n, cfg.max_dim));
    }
    for &n in &cfg.psi_1n1 {
        push("psi_1n1_rays", serde_json::json!({ "n": n }), verify_psi_1n1(n, cfg.max_dim));
    }
    for n in 1..=cfg.bijection_max_n {
        for p in canonical_representatives(n).unwrap_or_default() {
            let params = serde_json::json!({ "partition": p.to_string() });
            push("facet_bijection", params, verify_facet_bijection(&p, cfg.seed));
        }
    }
    for p in &cfg.gap {
        push("gap", serde_json::json!({ "partition": p.to_string() }), verify_gap(p));
    }
    for n in 1..=cfg.isolation_max_n {
        for p in canonical_representatives(n).unwrap_or_default() {
            for (context, label) in isolation_contexts(&p) {
                let params = serde_json::json!({ "partition": p.to_string(), "context": label });
                push("isolation", params, isolation_verdict(&p, &context));
            }
        }
    }
    for &n in &cfg.decompose_ns {
        let params = serde_json::json!({ "n": n, "samples": cfg.decompose_samples, "seed": cfg.seed });
        push("decompose_1n", params, decompose::round_trip_verdict(n, cfg.decompose_samples, cfg.seed));
    }
    out
}

/// The virtual context for one-block partitions, otherwise every cover.
pub fn isolation_contexts(p: &Partition) -> Vec<(IsolationContext, String)> {
    if p.t() == 1 {
        return vec![(IsolationContext::Virtual, "virtual".to_string())];
    }
    p.covers_above()
        .into_iter()
        .map(|(_, _, q)| {
            let s = q.to_string();
            (IsolationContext::Coarser(q), s)
        })
        .collect()
}

/// Builds and checks the witness of every target label in one context.
pub fn isolation_verdict(p: &Partition, context: &IsolationContext) -> crate::Result<Verdict> {
    let targets = isolation_targets(p, context)?;
    let mut witnesses = Vec::with_capacity(targets.len());
    for t in &targets {
        witnesses.push(build_isolation(p, t, context)?);
    }
    let params = serde_json::json!({ "partition": p.to_string() });
    Ok(timed("isolation", params, || {
        for w in &witnesses {
            let v = check_isolation(w);
            if !v.pass {
                return Outcome {
                    pass: false,
                    counterexample: v.counterexample,
                    detail: format!("target {}: {}", w.target, v.detail),
                };
            }
        }
        Outcome::pass(format!("{} targets isolated", witnesses.len()))
    }))
}
