//! Property suites behind `tsinorm check`.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Map, Value};

use tsinorm_core::corpus::{grid_vectors, sample_pairs, sample_vectors};
use tsinorm_core::dualnorm::{falsify_ell1_variant, verify_dual_certificate, DualEngine, FalsifyOutcome};
use tsinorm_core::primal::{PrimalEvaluator, Strategy};
use tsinorm_core::{FinVec, MixedSpaceSpec, Rational};

use crate::CliResult;

#[derive(Debug, Serialize)]
pub struct Property {
    pub name: &'static str,
    pub statement: &'static str,
    pub checked: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

impl Property {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Property { name, statement, checked: 0, violations: 0, first_violation: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(what());
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub space: String,
    pub support: usize,
    pub vectors: usize,
    pub passed: bool,
    pub properties: Vec<Property>,
    pub details: Map<String, Value>,
}

pub struct SuiteParams<'a> {
    pub spec: &'a MixedSpaceSpec,
    pub support: usize,
    pub grid: &'a [Rational],
    pub pairs: usize,
    pub seed: u64,
    pub cap: usize,
    pub budget: usize,
}

fn finish(suite: &'static str, p: &SuiteParams, vectors: usize, properties: Vec<Property>, details: Map<String, Value>) -> Report {
    Report {
        suite,
        space: p.spec.name.clone(),
        support: p.support,
        vectors,
        passed: properties.iter().all(|q| q.violations == 0),
        properties,
        details,
    }
}

/// Norm axioms of the dual norm and the `ρ̂` chain.
pub fn lemmas(p: &SuiteParams) -> CliResult<Report> {
    let mut e = DualEngine::new(p.spec, p.budget)?;
    let corpus: Vec<FinVec> = grid_vectors(p.support, p.grid).collect();
    let mut sandwich = Property::new("sandwich", "sup norm <= norm <= ell1 norm");
    let mut lattice = Property::new("lattice monotonicity", "|y| <= |x| coordinatewise implies norm(y) <= norm(x)");
    let mut triangle = Property::new("triangle inequality", "norm(x + y) <= norm(x) + norm(y)");
    let mut homog = Property::new("homogeneity", "norm(c x) = |c| norm(x)");
    let mut chain = Property::new("rho chain", "rho_n is nonincreasing in n and bounded below by the norm");
    let shrink: Vec<Rational> = p.grid.iter().cloned().chain(std::iter::once(Rational::zero())).collect();
    for x in &corpus {
        let vx = e.value(x)?;
        sandwich.record(x.sup_norm() <= vx && vx <= x.ell1_norm(), || format!("{x}: {vx}"));
        for (i, a) in x.iter() {
            for g in shrink.iter().filter(|g| g.abs() < a.abs()) {
                let pairs = x.iter().map(|(j, b)| (j, if j == i { g.clone() } else { b.clone() }));
                let y = FinVec::from_pairs(pairs)?;
                let vy = e.value(&y)?;
                lattice.record(vy <= vx, || format!("norm({y}) = {vy} > norm({x}) = {vx}"));
            }
        }
    }
    for (x, y) in sample_pairs(p.support, p.grid, p.pairs, p.seed) {
        let (vx, vy, vs) = (e.value(&x)?, e.value(&y)?, e.value(&x.add(&y))?);
        triangle.record(vs <= &vx + &vy, || format!("x = {x}, y = {y}: {vs} > {vx} + {vy}"));
    }
    let scalars: Vec<Rational> = ["-1", "2", "-1/2", "3"].iter().map(|s| s.parse().unwrap()).collect();
    for x in sample_vectors(p.support, p.grid, corpus.len().min(1000), p.seed ^ 1) {
        let vx = e.value(&x)?;
        for c in &scalars {
            let vc = e.value(&x.scale(c))?;
            homog.record(vc == c.abs() * &vx, || format!("c = {c}, x = {x}"));
        }
    }
    let mut seen = BTreeSet::new();
    for x in &corpus {
        if !seen.insert(x.abs()) {
            continue;
        }
        let vx = e.value(x)?;
        let mut prev: Option<Rational> = None;
        for n in 0..=p.support {
            let r = e.rho_partition_upper(x, n);
            let ok = r >= vx && prev.as_ref().is_none_or(|q| &r <= q);
            chain.record(ok, || format!("{x}: rho_{n} = {r}, norm {vx}"));
            prev = Some(r);
        }
    }
    let mut details = Map::new();
    details.insert("pair_seed".into(), json!(p.seed));
    Ok(finish("lemmas", p, corpus.len(), vec![sandwich, lattice, triangle, homog, chain], details))
}

/// Hull and ball programs agree and both witnesses re-verify; the norming set
/// determines the primal norm.
pub fn duality(p: &SuiteParams) -> CliResult<Report> {
    let mut e = DualEngine::new(p.spec, p.budget)?;
    let corpus: Vec<FinVec> = grid_vectors(p.support, p.grid).collect();
    let mut lp = Property::new("lp duality", "hull gauge value equals ball maximum; both certificates verify");
    let mut det = Property::new("determination", "max over the norming set of f(x) equals the primal norm");
    let mut pairing = Property::new("pairing bound", "<x, y> <= dual norm(x) for the ball witness y of any vector");
    let set = e.norming_set(p.support)?;
    let mut primal = PrimalEvaluator::new(p.spec, 0, Strategy::Memoized);
    let mut prev_ball: Option<FinVec> = None;
    for x in &corpus {
        let d = e.dual_norm(x)?;
        let ok = verify_dual_certificate(p.spec, &d.certificate);
        lp.record(ok.is_ok(), || format!("{x}: {}", ok.as_ref().unwrap_err()));
        let tau = set.tau(x)?;
        let norm = primal.eval(x).value.as_point().cloned().expect("rational space");
        det.record(tau == norm, || format!("{x}: tau {tau}, norm {norm}"));
        if let Some(y) = &prev_ball {
            let v = tsinorm_core::pairing(x, y);
            pairing.record(v <= d.value, || format!("x = {x}, y = {y}: {v} > {}", d.value));
        }
        prev_ball = Some(d.certificate.ball.clone());
    }
    let s = e.max_stats();
    let mut details = Map::new();
    details.insert("max_lp".into(), serde_json::to_value(s).expect("plain struct"));
    details.insert("norming_set_representatives".into(), json!(set.representatives().len()));
    details.insert("norming_set_generation".into(), json!(set.generation));
    Ok(finish("duality", p, corpus.len(), vec![lp, det, pairing], details))
}

/// The implicit equation at every absolute pattern of the corpus.
pub fn implicit_eq(p: &SuiteParams) -> CliResult<Report> {
    let mut e = DualEngine::new(p.spec, p.budget)?;
    let mut eq = Property::new(
        "implicit equation",
        "norm(x) <= (1/theta) max norm(E_i x) on admissible covering partitions and norm(x) <= norm(y) + norm(z) on splits",
    );
    let mut seen = BTreeSet::new();
    let mut count = 0;
    let (mut partitions, mut splits, mut tight) = (0, 0, 0);
    for x in grid_vectors(p.support, p.grid) {
        count += 1;
        if !seen.insert(x.abs()) {
            continue;
        }
        let r = e.verify_implicit_equation(&x)?;
        partitions += r.partitions_checked;
        splits += r.splits_checked;
        if r.slack.as_ref().is_some_and(|s| s.is_zero()) {
            tight += 1;
        }
        eq.record(r.passed(), || r.violations.join("; "));
    }
    let mut details = Map::new();
    details.insert("patterns".into(), json!(seen.len()));
    details.insert("partitions_checked".into(), json!(partitions));
    details.insert("splits_checked".into(), json!(splits));
    details.insert("partition_equality_cases".into(), json!(tight));
    Ok(finish("implicit-eq", p, count, vec![eq], details))
}

/// Searches for a triangle violation of the ell1 variant. A counterexample is
/// the expected outcome and is re-checked before being reported.
pub fn ell1_falsify(p: &SuiteParams) -> CliResult<Report> {
    let outcome = falsify_ell1_variant(p.spec, p.support, p.grid, p.cap)?;
    let mut recheck = Property::new("counterexample re-verifies", "sigma(x + y) > sigma(x) + sigma(y) on recomputation");
    let mut details = Map::new();
    let vectors = tsinorm_core::corpus::grid_size(p.support, p.grid.len()) - 1;
    match outcome {
        FalsifyOutcome::Counterexample(c) => {
            let mut e = DualEngine::new(p.spec, p.budget)?;
            let sx = e.sigma(&c.x, p.cap);
            let sy = e.sigma(&c.y, p.cap);
            let ss = e.sigma(&c.x.add(&c.y), p.cap);
            let ok = sx.as_ref() == Some(&c.sigma_x)
                && sy.as_ref() == Some(&c.sigma_y)
                && ss.as_ref() == Some(&c.sigma_sum)
                && c.sigma_sum > &c.sigma_x + &c.sigma_y;
            recheck.record(ok, || "recomputed values differ".into());
            details.insert("outcome".into(), json!("counterexample"));
            details.insert(
                "counterexample".into(),
                json!({
                    "x": c.x.to_string(),
                    "y": c.y.to_string(),
                    "sigma_x": c.sigma_x.to_string(),
                    "sigma_y": c.sigma_y.to_string(),
                    "sigma_sum": c.sigma_sum.to_string(),
                }),
            );
        }
        FalsifyOutcome::Exhausted { vectors, pairs, capped } => {
            details.insert("outcome".into(), json!("exhausted"));
            details.insert("exhausted".into(), json!({ "vectors": vectors, "pairs": pairs, "capped": capped }));
        }
    }
    Ok(finish("ell1-falsify", p, vectors, vec![recheck], details))
}
