//! The dual norm: gauge of the convex hull of the norming set and zero.
//!
//! For `x` with support `S` the value is computed twice, by two linear
//! programs over the maximal norming functionals `G` supported in `S` (the
//! restrictions to `S` of the norming set on any window containing `S`):
//!
//! * hull: minimize `Σ c_g` subject to `Σ c_g |g| >= |x|`, `c >= 0`;
//! * ball: maximize `Σ |x_i| u_i` subject to `Σ |g_i| u_i <= 1`, `u >= 0`.
//!
//! The optima must agree exactly. The hull solution is tightened to an exact
//! decomposition `x = Σ w_f f` by moving weight onto restrictions, and the
//! ball solution `y = sign(x)·u` is certified by the primal norm.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{ActiveLevel, MixedSpaceSpec};
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense};
use crate::norming::{build_norming_set, build_norming_set_on, verify_functional, NormingFunctional, NormingSet};
use crate::partition::{position_partitions, BlockPartition};
use crate::primal::{verify_certificate, CertificateDoc, PrimalCertificate, PrimalEvaluator, Strategy};
use crate::scalar::{Interval, Rational};
use crate::vector::{pairing, FinVec};

/// Both witnesses for a dual norm value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub vector: FinVec,
    pub value: Rational,
    /// `Σ w f = vector` and `Σ w = value`.
    pub hull: Vec<(NormingFunctional, Rational)>,
    /// `⟨vector, ball⟩ = value` and the primal norm of `ball` is at most 1.
    pub ball: FinVec,
    pub ball_certificate: Arc<PrimalCertificate>,
}

/// Sizes of the two programs solved for one value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpStats {
    pub support: usize,
    pub hull_columns: usize,
    pub ball_rows: usize,
    pub pivots: usize,
}

#[derive(Clone, Debug)]
pub struct DualNorm {
    pub value: Rational,
    pub certificate: DualCertificate,
    pub stats: LpStats,
}

/// Caches norming sets per window and dual norms per absolute vector.
pub struct DualEngine {
    spec: MixedSpaceSpec,
    budget: usize,
    sets: HashMap<usize, Arc<NormingSet>>,
    support_sets: HashMap<Vec<usize>, Arc<NormingSet>>,
    values: HashMap<FinVec, Arc<DualNorm>>,
    rho: HashMap<(FinVec, usize), Rational>,
    primal: PrimalEvaluator,
    max_stats: LpStats,
}

impl DualEngine {
    pub fn new(spec: &MixedSpaceSpec, budget: usize) -> Result<Self> {
        if !spec.is_rational() {
            return Err(Error::IrrationalTheta(spec.name.clone()));
        }
        Ok(DualEngine {
            spec: spec.clone(),
            budget,
            sets: HashMap::new(),
            support_sets: HashMap::new(),
            values: HashMap::new(),
            rho: HashMap::new(),
            primal: PrimalEvaluator::new(spec, 0, Strategy::Memoized),
            max_stats: LpStats::default(),
        })
    }

    pub fn spec(&self) -> &MixedSpaceSpec {
        &self.spec
    }

    /// Largest programs solved so far.
    pub fn max_stats(&self) -> LpStats {
        self.max_stats
    }

    pub fn norming_set(&mut self, window: usize) -> Result<Arc<NormingSet>> {
        if let Some(s) = self.sets.get(&window) {
            return Ok(s.clone());
        }
        let set = Arc::new(build_norming_set(&self.spec, window, self.budget)?);
        self.sets.insert(window, set.clone());
        Ok(set)
    }

    /// Norming set on exactly the indices of `support`.
    pub fn norming_set_on(&mut self, support: &[usize]) -> Result<Arc<NormingSet>> {
        if let Some(s) = self.support_sets.get(support) {
            return Ok(s.clone());
        }
        let set = Arc::new(build_norming_set_on(&self.spec, &support.iter().copied().collect(), self.budget)?);
        self.support_sets.insert(support.to_vec(), set.clone());
        Ok(set)
    }

    pub fn primal_norm(&mut self, x: &FinVec) -> Arc<PrimalCertificate> {
        self.primal.eval(x)
    }

    /// Dual norm with certificates for `x` itself.
    pub fn dual_norm(&mut self, x: &FinVec) -> Result<DualNorm> {
        let base = self.dual_norm_abs(&x.abs())?;
        if x.entries().iter().all(|(_, v)| v.is_positive()) {
            return Ok((*base).clone());
        }
        let signs = x.clone();
        let hull = base
            .certificate
            .hull
            .iter()
            .map(|(f, w)| (f.signed_like(&signs), w.clone()))
            .collect();
        let ball = FinVec::from_pairs(
            base.certificate
                .ball
                .iter()
                .map(|(i, u)| (i, if x.get(i).is_negative() { -u } else { u.clone() })),
        )?;
        let ball_certificate = self.primal.eval(&ball);
        Ok(DualNorm {
            value: base.value.clone(),
            certificate: DualCertificate {
                vector: x.clone(),
                value: base.value.clone(),
                hull,
                ball,
                ball_certificate,
            },
            stats: base.stats,
        })
    }

    /// Value only.
    pub fn value(&mut self, x: &FinVec) -> Result<Rational> {
        Ok(self.dual_norm_abs(&x.abs())?.value.clone())
    }

    fn dual_norm_abs(&mut self, a: &FinVec) -> Result<Arc<DualNorm>> {
        if let Some(d) = self.values.get(a) {
            return Ok(d.clone());
        }
        let d = Arc::new(self.compute(a)?);
        let s = d.stats;
        let m = &mut self.max_stats;
        m.support = m.support.max(s.support);
        m.hull_columns = m.hull_columns.max(s.hull_columns);
        m.ball_rows = m.ball_rows.max(s.ball_rows);
        m.pivots = m.pivots.max(s.pivots);
        self.values.insert(a.clone(), d.clone());
        Ok(d)
    }

    /// Uncached computation for a nonnegative vector.
    fn compute(&mut self, a: &FinVec) -> Result<DualNorm> {
        if a.is_zero() {
            let cert = self.primal.eval(a);
            return Ok(DualNorm {
                value: Rational::zero(),
                certificate: DualCertificate {
                    vector: a.clone(),
                    value: Rational::zero(),
                    hull: Vec::new(),
                    ball: FinVec::zero(),
                    ball_certificate: cert,
                },
                stats: LpStats::default(),
            });
        }
        let support: Vec<usize> = a.support();
        let set = self.norming_set_on(&support)?;
        let g = set.representatives().to_vec();

        let hull_lp = hull_program(&g, a, &support);
        let ball_lp = ball_program(&g, a, &support);
        let hull = lp::solve(&hull_lp, Sense::Min)?;
        let ball = lp::solve(&ball_lp, Sense::Max)?;
        if hull.status != LpStatus::Optimal || ball.status != LpStatus::Optimal {
            return Err(Error::Inconsistent(format!(
                "dual programs for ({a}) ended {:?} and {:?}",
                hull.status, ball.status
            )));
        }
        lp::verify(&hull_lp, Sense::Min, &hull)?;
        lp::verify(&ball_lp, Sense::Max, &ball)?;
        if hull.value != ball.value {
            return Err(Error::Inconsistent(format!(
                "hull gauge {} and ball maximum {} differ for ({a})",
                hull.value, ball.value
            )));
        }
        let terms: Vec<(NormingFunctional, Rational)> = g
            .iter()
            .zip(&hull.assignment)
            .filter(|(_, w)| w.is_positive())
            .map(|(f, w)| (f.clone(), w.clone()))
            .collect();
        let hull_witness = tighten(terms, a)?;
        let y = FinVec::from_pairs(support.iter().copied().zip(ball.assignment.iter().cloned()))?;
        let ball_certificate = self.primal.eval(&y);
        Ok(DualNorm {
            value: hull.value.clone(),
            certificate: DualCertificate {
                vector: a.clone(),
                value: hull.value,
                hull: hull_witness,
                ball: y,
                ball_certificate,
            },
            stats: LpStats {
                support: support.len(),
                hull_columns: g.len(),
                ball_rows: g.len(),
                pivots: hull.pivots + ball.pivots,
            },
        })
    }

    fn rational_levels(&self, n: usize) -> Vec<(ActiveLevel, Rational)> {
        self.spec
            .levels_needed(n)
            .into_iter()
            .map(|l| {
                let t = l.theta.as_rational(l.index).expect("rational spec");
                (l, t)
            })
            .collect()
    }

    /// `ρ̂_n(x)`: `ρ̂_0 = ‖x‖_1` and `ρ̂_{n+1}(x)` is the least of `ρ̂_n(x)` and
    /// `(1/θ_l) max_i ρ̂_n(E_i x)` over admissible partitions of the support
    /// into at least two blocks.
    pub fn rho_partition_upper(&mut self, x: &FinVec, n: usize) -> Rational {
        self.rho_abs(&x.abs(), n)
    }

    fn rho_abs(&mut self, a: &FinVec, n: usize) -> Rational {
        if n == 0 || a.len() < 2 {
            return a.ell1_norm();
        }
        if let Some(v) = self.rho.get(&(a.clone(), n)) {
            return v.clone();
        }
        let mut best = self.rho_abs(a, n - 1);
        let len = a.len();
        let mut table = vec![vec![Rational::zero(); len]; len];
        for s in 0..len {
            for t in s..len {
                if (s, t) != (0, len - 1) {
                    table[s][t] = self.rho_abs(&a.run(s, t), n - 1);
                }
            }
        }
        let positions = a.support();
        for (level, theta) in self.rational_levels(len) {
            if let Some(v) = best_partition(&positions, &level, &theta, |s, t| table[s][t].clone()) {
                best = best.min(v.0);
            }
        }
        self.rho.insert((a.clone(), n), best.clone());
        best
    }

    /// `σ(x) = min(‖x‖_1, (1/θ_l) max_i σ(E_i x))`, the fixpoint of `ρ̂`.
    /// Proper restrictions have settled after `|supp| - 2` rounds, so the
    /// value is `ρ̂_{|supp|-1}(x)`. `None` when that exceeds `cap` rounds.
    pub fn sigma(&mut self, x: &FinVec, cap: usize) -> Option<Rational> {
        let rounds = x.len().saturating_sub(1);
        (rounds <= cap).then(|| self.rho_abs(&x.abs(), rounds))
    }

    /// `ρ̃_n(x)`: as `ρ̂_n` with the splitting branch restricted to the
    /// candidates: all support bipartitions when `bipartitions` is set, and
    /// the supplied splits `x = w¹ + w²` wherever they sum to the vector
    /// under evaluation.
    pub fn rho_with_splits_upper(&mut self, x: &FinVec, n: usize, candidates: &SplitCandidates) -> Result<Rational> {
        for (w1, w2) in &candidates.extra {
            if &w1.add(w2) != x {
                return Err(Error::InvalidInput(format!("split ({w1}) + ({w2}) does not sum to ({x})")));
            }
        }
        let mut memo = HashMap::new();
        Ok(self.rho_splits(x, n, candidates, &mut memo))
    }

    /// Like [`Self::rho_with_splits_upper`] but extra splits that do not sum
    /// to `x` are simply unused at the top level.
    pub fn rho_with_splits_lenient(&mut self, x: &FinVec, n: usize, candidates: &SplitCandidates) -> Rational {
        let mut memo = HashMap::new();
        self.rho_splits(x, n, candidates, &mut memo)
    }

    fn rho_splits(
        &mut self,
        x: &FinVec,
        n: usize,
        cands: &SplitCandidates,
        memo: &mut HashMap<(FinVec, usize), Rational>,
    ) -> Rational {
        if n == 0 || x.is_zero() {
            return x.ell1_norm();
        }
        if let Some(v) = memo.get(&(x.clone(), n)) {
            return v.clone();
        }
        let mut best = self.rho_splits(x, n - 1, cands, memo);
        let len = x.len();
        if len >= 2 {
            let mut table = vec![vec![Rational::zero(); len]; len];
            for s in 0..len {
                for t in s..len {
                    if (s, t) != (0, len - 1) {
                        table[s][t] = self.rho_splits(&x.run(s, t), n - 1, cands, memo);
                    }
                }
            }
            let positions = x.support();
            for (level, theta) in self.rational_levels(len) {
                if let Some(v) = best_partition(&positions, &level, &theta, |s, t| table[s][t].clone()) {
                    best = best.min(v.0);
                }
            }
            if cands.bipartitions {
                let supp = x.support();
                for mask in 1u64..(1 << len) {
                    // Each unordered bipartition once: the first index stays left.
                    if mask & 1 == 0 || mask == (1 << len) - 1 {
                        continue;
                    }
                    let left: BTreeSet<usize> =
                        supp.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
                    let w1 = x.restrict(&left);
                    let w2 = x.sub(&w1);
                    let v = self.rho_splits(&w1, n - 1, cands, memo) + self.rho_splits(&w2, n - 1, cands, memo);
                    best = best.min(v);
                }
            }
        }
        for (w1, w2) in &cands.extra {
            if &w1.add(w2) == x {
                let v = self.rho_splits(w1, n - 1, cands, memo) + self.rho_splits(w2, n - 1, cands, memo);
                best = best.min(v);
            }
        }
        memo.insert((x.clone(), n), best.clone());
        best
    }

    /// Checks the implicit equation at `x` with exact dual norm values.
    pub fn verify_implicit_equation(&mut self, x: &FinVec) -> Result<ImplicitReport> {
        let norm = self.value(x)?;
        let mut report = ImplicitReport {
            vector: x.clone(),
            norm: norm.clone(),
            minimal: None,
            slack: None,
            partitions_checked: 0,
            splits_checked: 0,
            violations: Vec::new(),
        };
        let len = x.len();
        if len < 2 {
            return Ok(report);
        }
        let positions = x.support();
        let mut table = vec![vec![Rational::zero(); len]; len];
        for s in 0..len {
            for t in s..len {
                table[s][t] = self.value(&x.run(s, t))?;
            }
        }
        for (level, theta) in self.rational_levels(len) {
            for k in 2..=len {
                for runs in position_partitions(len, k) {
                    let bounds: Vec<(usize, usize)> = runs.iter().map(|&(s, t)| (positions[s], positions[t])).collect();
                    if !level.family.admits_bounds(&bounds) {
                        continue;
                    }
                    report.partitions_checked += 1;
                    let m = runs.iter().map(|&(s, t)| table[s][t].clone()).max().unwrap();
                    let v = &m / &theta;
                    let partition = BlockPartition::new(runs.iter().map(|&(s, t)| positions[s..=t].to_vec()).collect())?;
                    if v < norm {
                        report.violations.push(format!(
                            "level {}: partition {partition} gives {v} < {norm}",
                            level.index
                        ));
                    }
                    if report.minimal.as_ref().is_none_or(|m| v < m.value) {
                        report.minimal = Some(MinimalPartition { level: level.index, partition, value: v });
                    }
                }
            }
        }
        report.slack = report.minimal.as_ref().map(|m| &m.value - &norm);
        for mask in 1u64..(1 << len) {
            if mask & 1 == 0 || mask == (1 << len) - 1 {
                continue;
            }
            let left: BTreeSet<usize> =
                positions.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
            let y = x.restrict(&left);
            let z = x.sub(&y);
            report.splits_checked += 1;
            let s = self.value(&y)? + self.value(&z)?;
            if s < norm {
                report.violations.push(format!("split ({y}) + ({z}) gives {s} < {norm}"));
            }
        }
        Ok(report)
    }
}

/// Least `(1/θ) max_i val(run_i)` over partitions of all support positions
/// into at least two runs admissible for `level`.
fn best_partition<F>(positions: &[usize], level: &ActiveLevel, theta: &Rational, val: F) -> Option<(Rational, Vec<(usize, usize)>)>
where
    F: Fn(usize, usize) -> Rational,
{
    let len = positions.len();
    let mut best: Option<(Rational, Vec<(usize, usize)>)> = None;
    for k in 2..=len {
        if level.family.is_count_determined() && !level.family.admits_count(k, positions[0]) {
            continue;
        }
        for runs in position_partitions(len, k) {
            let bounds: Vec<(usize, usize)> = runs.iter().map(|&(s, t)| (positions[s], positions[t])).collect();
            if !level.family.admits_bounds(&bounds) {
                continue;
            }
            let m = runs.iter().map(|&(s, t)| val(s, t)).max().unwrap();
            let v = &m / theta;
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, runs));
            }
        }
    }
    best
}

fn hull_program(g: &[NormingFunctional], a: &FinVec, support: &[usize]) -> LinearProgram {
    let mut lp = LinearProgram::new(vec![Rational::one(); g.len()]);
    for &i in support {
        lp.constrain(g.iter().map(|f| f.coeffs.get(i)).collect(), Relation::Ge, a.get(i));
    }
    lp
}

fn ball_program(g: &[NormingFunctional], a: &FinVec, support: &[usize]) -> LinearProgram {
    let mut lp = LinearProgram::new(support.iter().map(|&i| a.get(i)).collect());
    for f in g {
        lp.constrain(support.iter().map(|&i| f.coeffs.get(i)).collect(), Relation::Le, Rational::one());
    }
    lp
}

/// Turns `Σ w g >= a` (coordinatewise, all nonnegative) into an exact
/// decomposition `Σ w' g' = a` with the same total weight, where each `g'` is
/// a restriction of some `g`.
fn tighten(terms: Vec<(NormingFunctional, Rational)>, a: &FinVec) -> Result<Vec<(NormingFunctional, Rational)>> {
    let total: Rational = terms.iter().map(|(_, w)| w.clone()).sum();
    let mut terms = terms;
    for i in a.support() {
        let covered: Rational = terms.iter().map(|(f, w)| w * f.coeffs.get(i)).sum();
        let mut excess = covered - a.get(i);
        let mut t = 0;
        while excess.is_positive() {
            let gi = terms[t].0.coeffs.get(i);
            if gi.is_zero() {
                t += 1;
                continue;
            }
            let mut keep: BTreeSet<usize> = terms[t].0.coeffs.support().into_iter().collect();
            keep.remove(&i);
            let Some(rest) = terms[t].0.restrict(&keep) else {
                return Err(Error::Inconsistent(format!("hull weights for ({a}) are not optimal")));
            };
            let amount = &terms[t].1 * &gi;
            if amount <= excess {
                excess -= amount;
                terms[t].0 = rest;
            } else {
                let moved = &excess / &gi;
                terms[t].1 -= &moved;
                terms.push((rest, moved));
                excess = Rational::zero();
            }
            t += 1;
        }
    }
    let mut merged: BTreeMap<FinVec, (NormingFunctional, Rational)> = BTreeMap::new();
    for (f, w) in terms {
        if w.is_zero() {
            continue;
        }
        merged
            .entry(f.coeffs.clone())
            .and_modify(|e| e.1 += &w)
            .or_insert((f, w));
    }
    let out: Vec<(NormingFunctional, Rational)> = merged.into_values().collect();
    let sum = out.iter().fold(FinVec::zero(), |acc, (f, w)| acc.add(&f.coeffs.scale(w)));
    let weight: Rational = out.iter().map(|(_, w)| w.clone()).sum();
    if &sum != a || weight != total {
        return Err(Error::Inconsistent(format!("could not tighten the hull witness for ({a})")));
    }
    Ok(out)
}

/// Candidate decompositions for [`DualEngine::rho_with_splits_upper`].
#[derive(Clone, Debug, Default)]
pub struct SplitCandidates {
    pub bipartitions: bool,
    pub extra: Vec<(FinVec, FinVec)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPartition {
    pub level: usize,
    pub partition: BlockPartition,
    pub value: Rational,
}

#[derive(Clone, Debug)]
pub struct ImplicitReport {
    pub vector: FinVec,
    pub norm: Rational,
    /// Partition with the least bound, if any admissible one covers the support.
    pub minimal: Option<MinimalPartition>,
    pub slack: Option<Rational>,
    pub partitions_checked: usize,
    pub splits_checked: usize,
    pub violations: Vec<String>,
}

impl ImplicitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact dual norm in `spec` with default budget.
pub fn dual_norm(spec: &MixedSpaceSpec, x: &FinVec) -> Result<(Rational, DualCertificate)> {
    let mut e = DualEngine::new(spec, crate::DEFAULT_BUDGET)?;
    let d = e.dual_norm(x)?;
    Ok((d.value, d.certificate))
}

/// Enclosure of the dual norm for specs with irrational coefficients: the
/// gauge with every θ at the upper end of its enclosure bounds the norm from
/// below, the lower end from above.
pub fn dual_norm_bounds(spec: &MixedSpaceSpec, x: &FinVec, precision: u32, precision_cap: u32, budget: usize) -> Result<Interval> {
    if spec.is_rational() {
        let mut e = DualEngine::new(spec, budget)?;
        return Ok(Interval::point(e.value(x)?));
    }
    if precision > precision_cap {
        return Err(Error::PrecisionExhausted(format!(
            "requested {precision} bits of theta precision, cap is {precision_cap}"
        )));
    }
    let Some(window) = x.max_index() else {
        return Ok(Interval::point(Rational::zero()));
    };
    let lo_spec = spec.rational_bound(window, precision, true);
    let hi_spec = spec.rational_bound(window, precision, false);
    let lo = DualEngine::new(&lo_spec, budget)?.value(x)?;
    let hi = DualEngine::new(&hi_spec, budget)?.value(x)?;
    Interval::new(lo, hi)
}

/// Re-verifies both witnesses of a dual certificate from scratch.
pub fn verify_dual_certificate(spec: &MixedSpaceSpec, cert: &DualCertificate) -> Result<()> {
    let fail = |m: String| Err(Error::Inconsistent(format!("dual certificate for ({}): {m}", cert.vector)));
    let mut sum = FinVec::zero();
    let mut weight = Rational::zero();
    for (f, w) in &cert.hull {
        if w.is_negative() {
            return fail("negative hull weight".into());
        }
        verify_functional(spec, f)?;
        sum = sum.add(&f.coeffs.scale(w));
        weight += w;
    }
    if sum != cert.vector {
        return fail("hull combination does not reproduce the vector".into());
    }
    if weight != cert.value {
        return fail(format!("hull weights sum to {weight}, not {}", cert.value));
    }
    if cert.ball_certificate.vector != cert.ball {
        return fail("ball certificate is for another vector".into());
    }
    let norm = verify_certificate(spec, &cert.ball_certificate, 0)?;
    match norm.as_point() {
        Some(n) if *n <= Rational::one() => {}
        _ => return fail(format!("ball vector has norm {norm:?}")),
    }
    if pairing(&cert.vector, &cert.ball) != cert.value {
        return fail("pairing with the ball vector differs from the value".into());
    }
    Ok(())
}

/// Serialized form of a [`DualCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificateDoc {
    pub vector: FinVec,
    pub value: Rational,
    pub hull: Vec<HullTermDoc>,
    pub ball: FinVec,
    pub ball_certificate: CertificateDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullTermDoc {
    pub weight: Rational,
    pub tree: String,
    pub coeffs: FinVec,
}

impl DualCertificate {
    pub fn to_doc(&self) -> DualCertificateDoc {
        DualCertificateDoc {
            vector: self.vector.clone(),
            value: self.value.clone(),
            hull: self
                .hull
                .iter()
                .map(|(f, w)| HullTermDoc { weight: w.clone(), tree: f.tree.to_string(), coeffs: f.coeffs.clone() })
                .collect(),
            ball: self.ball.clone(),
            ball_certificate: self.ball_certificate.to_doc(),
        }
    }

    pub fn from_doc(doc: &DualCertificateDoc) -> Result<DualCertificate> {
        let hull = doc
            .hull
            .iter()
            .map(|t| {
                let f = NormingFunctional::from_line(&format!("{} | {}", t.tree, t.coeffs))?;
                Ok((f, t.weight.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DualCertificate {
            vector: doc.vector.clone(),
            value: doc.value.clone(),
            hull,
            ball: doc.ball.clone(),
            ball_certificate: Arc::new(PrimalCertificate::from_doc(&doc.ball_certificate)),
        })
    }
}

/// A pair violating the triangle inequality for `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub x: FinVec,
    pub y: FinVec,
    pub sigma_x: Rational,
    pub sigma_y: Rational,
    pub sigma_sum: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FalsifyOutcome {
    Counterexample(Counterexample),
    Exhausted { vectors: usize, pairs: usize, capped: usize },
}

/// Searches ordered pairs of nonzero grid vectors supported in `[1, window]`
/// for `σ(x + y) > σ(x) + σ(y)`, returning the first one found.
pub fn falsify_ell1_variant(
    spec: &MixedSpaceSpec,
    window: usize,
    grid: &[Rational],
    cap: usize,
) -> Result<FalsifyOutcome> {
    let mut engine = DualEngine::new(spec, crate::DEFAULT_BUDGET)?;
    let vectors: Vec<FinVec> = crate::corpus::grid_vectors(window, grid).filter(|v| !v.is_zero()).collect();
    let sigmas: Vec<Option<Rational>> = vectors.iter().map(|v| engine.sigma(v, cap)).collect();
    let mut pairs = 0;
    let mut capped = sigmas.iter().filter(|s| s.is_none()).count();
    for (x, sx) in vectors.iter().zip(&sigmas) {
        for (y, sy) in vectors.iter().zip(&sigmas) {
            pairs += 1;
            let (Some(sx), Some(sy)) = (sx, sy) else {
                continue;
            };
            let sum = x.add(y);
            let Some(ss) = engine.sigma(&sum, cap) else {
                capped += 1;
                continue;
            };
            if ss > sx + sy {
                return Ok(FalsifyOutcome::Counterexample(Counterexample {
                    x: x.clone(),
                    y: y.clone(),
                    sigma_x: sx.clone(),
                    sigma_y: sy.clone(),
                    sigma_sum: ss,
                }));
            }
        }
    }
    Ok(FalsifyOutcome::Exhausted { vectors: vectors.len(), pairs, capped })
}
