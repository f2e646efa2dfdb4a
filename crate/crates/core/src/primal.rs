//! The Figiel–Johnson norm and mixed Tsirelson norms, by exact recursion.
//!
//! For `x` with support `p_1 < ... < p_N` the norm is
//! `max(‖x‖_∞, max_l θ_l · max Σ_i ‖E_i x‖)` over `M_l`-admissible successive
//! block families with at least two blocks. By lattice monotonicity each block
//! may be taken to be a contiguous run of support positions and the last block
//! may be extended to `p_N`. For count-determined families (Schreier and
//! cardinality) admissibility depends only on the block count and `min E_1`,
//! so gaps between blocks can be absorbed too and the blocks partition a
//! suffix `p_a, ..., p_N` of the support; those levels are solved with a
//! dynamic program over suffixes. Explicit families enumerate run sequences
//! with gaps.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{ActiveLevel, MixedSpaceSpec};
use crate::partition::BlockPartition;
use crate::scalar::{Interval, Rational};
use crate::vector::FinVec;

/// Witness for the value of [`PrimalCertificate::vector`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The zero vector.
    Zero,
    /// The sup-norm branch, attained at `index`.
    Leaf { index: usize },
    /// `θ_level · Σ ‖E_i x‖` for the given blocks; `children[i]` certifies `E_i x`.
    Split {
        level: usize,
        partition: BlockPartition,
        children: Vec<Arc<PrimalCertificate>>,
    },
}

/// A norm value together with the branch that attains it.
///
/// With rational coefficients `value` is a point. With interval coefficients
/// `value` encloses the norm, and re-evaluating the witness from the
/// children's values gives an interval inside `value` sharing its lower end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalCertificate {
    pub vector: FinVec,
    pub value: Interval,
    pub witness: Witness,
}

impl PrimalCertificate {
    pub fn depth(&self) -> usize {
        match &self.witness {
            Witness::Split { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn to_doc(&self) -> CertificateDoc {
        CertificateDoc {
            vector: self.vector.clone(),
            value: self.value.clone(),
            witness: match &self.witness {
                Witness::Zero => WitnessDoc::Zero,
                Witness::Leaf { index } => WitnessDoc::Leaf { index: *index },
                Witness::Split { level, partition, children } => WitnessDoc::Split {
                    level: *level,
                    blocks: partition.clone(),
                    children: children.iter().map(|c| c.to_doc()).collect(),
                },
            },
        }
    }

    pub fn from_doc(doc: &CertificateDoc) -> PrimalCertificate {
        PrimalCertificate {
            vector: doc.vector.clone(),
            value: doc.value.clone(),
            witness: match &doc.witness {
                WitnessDoc::Zero => Witness::Zero,
                WitnessDoc::Leaf { index } => Witness::Leaf { index: *index },
                WitnessDoc::Split { level, blocks, children } => Witness::Split {
                    level: *level,
                    partition: blocks.clone(),
                    children: children.iter().map(|c| Arc::new(Self::from_doc(c))).collect(),
                },
            },
        }
    }
}

/// Serialized form of a [`PrimalCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub vector: FinVec,
    pub value: Interval,
    pub witness: WitnessDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessDoc {
    Zero,
    Leaf { index: usize },
    Split {
        level: usize,
        blocks: BlockPartition,
        children: Vec<CertificateDoc>,
    },
}

/// How the evaluator searches the block families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Memo table keyed by subvector plus the suffix dynamic program.
    Memoized,
    /// Plain recursion enumerating every run sequence; no memo table.
    Direct,
}

/// One candidate branch, chosen by the largest lower endpoint.
struct Choice {
    level: usize,
    runs: Vec<(usize, usize)>,
    value: Interval,
}

/// Evaluates one space's norm at a fixed θ precision.
pub struct PrimalEvaluator {
    spec: MixedSpaceSpec,
    precision: u32,
    strategy: Strategy,
    levels: Vec<(ActiveLevel, Interval)>,
    levels_support: usize,
    memo: HashMap<FinVec, Arc<PrimalCertificate>>,
}

impl PrimalEvaluator {
    pub fn new(spec: &MixedSpaceSpec, precision: u32, strategy: Strategy) -> Self {
        PrimalEvaluator {
            spec: spec.clone(),
            precision,
            strategy,
            levels: Vec::new(),
            levels_support: 0,
            memo: HashMap::new(),
        }
    }

    /// Evaluator for rational specs; θ values are exact.
    pub fn exact(spec: &MixedSpaceSpec) -> Result<Self> {
        if !spec.is_rational() {
            return Err(Error::IrrationalTheta(spec.name.clone()));
        }
        Ok(Self::new(spec, 0, Strategy::Memoized))
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Levels in force for supports of size up to `n`, with θ enclosures.
    fn ensure_levels(&mut self, n: usize) {
        if n <= self.levels_support {
            return;
        }
        self.levels = self
            .spec
            .levels_needed(n)
            .into_iter()
            .map(|l| {
                let t = l.theta.enclosure(l.index, self.precision);
                (l, t)
            })
            .collect();
        self.levels_support = n;
    }

    pub fn levels(&self) -> &[(ActiveLevel, Interval)] {
        &self.levels
    }

    pub fn eval(&mut self, x: &FinVec) -> Arc<PrimalCertificate> {
        self.ensure_levels(x.len());
        match self.strategy {
            Strategy::Memoized => self.eval_memo(x),
            Strategy::Direct => Arc::new(self.eval_direct(x)),
        }
    }

    fn eval_memo(&mut self, x: &FinVec) -> Arc<PrimalCertificate> {
        if let Some(c) = self.memo.get(x) {
            return c.clone();
        }
        let n = x.len();
        let mut table: Vec<Vec<Option<Arc<PrimalCertificate>>>> = vec![vec![None; n]; n];
        if n >= 2 {
            for a in 0..n {
                for b in a..n {
                    if (a, b) != (0, n - 1) {
                        table[a][b] = Some(self.eval_memo(&x.run(a, b)));
                    }
                }
            }
        }
        let positions = x.support();
        let choice = best_split(&positions, &self.levels, |a, b| {
            table[a][b].as_ref().expect("proper run").value.clone()
        });
        let cert = Arc::new(assemble(x, choice, |a, b| table[a][b].clone().expect("proper run")));
        self.memo.insert(x.clone(), cert.clone());
        cert
    }

    fn eval_direct(&mut self, x: &FinVec) -> PrimalCertificate {
        let n = x.len();
        let positions = x.support();
        let mut best: Option<(Choice, Vec<Arc<PrimalCertificate>>)> = None;
        let mut enclosure: Option<Interval> = None;
        if n >= 2 {
            let levels = self.levels.clone();
            for runs in gapped_runs(n, false) {
                let bounds: Vec<(usize, usize)> =
                    runs.iter().map(|&(a, b)| (positions[a], positions[b])).collect();
                let admitting: Vec<&(ActiveLevel, Interval)> =
                    levels.iter().filter(|(l, _)| l.family.admits_bounds(&bounds)).collect();
                if admitting.is_empty() {
                    continue;
                }
                let children: Vec<Arc<PrimalCertificate>> =
                    runs.iter().map(|&(a, b)| Arc::new(self.eval_direct(&x.run(a, b)))).collect();
                let sum = children
                    .iter()
                    .fold(Interval::point(Rational::zero()), |acc, c| acc.add(&c.value));
                for (level, theta) in admitting {
                    let value = theta.mul(&sum);
                    enclosure = Some(match enclosure {
                        Some(e) => e.max(&value),
                        None => value.clone(),
                    });
                    if best.as_ref().is_none_or(|(c, _)| value.lo() > c.value.lo()) {
                        best = Some((
                            Choice { level: level.index, runs: runs.clone(), value },
                            children.clone(),
                        ));
                    }
                }
            }
        }
        match best {
            Some((choice, children)) => {
                let enclosure = enclosure.expect("set with best");
                let mut it = children.into_iter();
                let choice = Choice { value: enclosure, ..choice };
                let runs = choice.runs.clone();
                let lookup: HashMap<(usize, usize), Arc<PrimalCertificate>> =
                    runs.into_iter().map(|r| (r, it.next().unwrap())).collect();
                assemble(x, Some(choice), |a, b| lookup[&(a, b)].clone())
            }
            None => assemble(x, None, |_, _| unreachable!()),
        }
    }
}

/// Best split branch over all levels, or `None` when no family admits two
/// or more blocks. `val(a, b)` is the (enclosed) norm of the run of support
/// positions `a..=b`; it is never asked for the full run.
fn best_split<F>(positions: &[usize], levels: &[(ActiveLevel, Interval)], val: F) -> Option<Choice>
where
    F: Fn(usize, usize) -> Interval,
{
    let n = positions.len();
    if n < 2 || levels.is_empty() {
        return None;
    }
    let mut best: Option<Choice> = None;
    let mut enclosure: Option<Interval> = None;
    let mut consider = |level: usize, runs: Vec<(usize, usize)>, value: Interval| {
        enclosure = Some(match enclosure.take() {
            Some(e) => e.max(&value),
            None => value.clone(),
        });
        if best.as_ref().is_none_or(|c| value.lo() > c.value.lo()) {
            best = Some(Choice { level, runs, value });
        }
    };

    if levels.iter().any(|(l, _)| l.family.is_count_determined()) {
        // dp[a][k]: best sum over partitions of positions a..n-1 into k runs,
        // with the first cut of the lower-end maximizer.
        let mut dp: Vec<Vec<Option<(Interval, usize)>>> = vec![vec![None; n + 1]; n];
        for a in (0..n).rev() {
            if a > 0 {
                dp[a][1] = Some((val(a, n - 1), n - 1));
            }
            for k in 2..=n - a {
                let mut cell: Option<(Interval, usize)> = None;
                for b in a..=n - k {
                    let rest = dp[b + 1][k - 1].as_ref().expect("filled").0.clone();
                    let s = val(a, b).add(&rest);
                    cell = Some(match cell {
                        None => (s, b),
                        Some((e, arg)) => {
                            let arg = if s.lo() > e.lo() { b } else { arg };
                            (e.max(&s), arg)
                        }
                    });
                }
                dp[a][k] = cell;
            }
        }
        let unfold = |a: usize, k: usize| {
            let mut runs = Vec::with_capacity(k);
            let (mut a, mut k) = (a, k);
            while k > 1 {
                let b = dp[a][k].as_ref().unwrap().1;
                runs.push((a, b));
                a = b + 1;
                k -= 1;
            }
            runs.push((a, n - 1));
            runs
        };
        for (level, theta) in levels.iter().filter(|(l, _)| l.family.is_count_determined()) {
            for a in 0..n {
                for k in 2..=n - a {
                    if level.family.admits_count(k, positions[a]) {
                        let sum = &dp[a][k].as_ref().unwrap().0;
                        consider(level.index, unfold(a, k), theta.mul(sum));
                    }
                }
            }
        }
    }

    let explicit: Vec<&(ActiveLevel, Interval)> =
        levels.iter().filter(|(l, _)| !l.family.is_count_determined()).collect();
    if !explicit.is_empty() {
        for runs in gapped_runs(n, true) {
            let bounds: Vec<(usize, usize)> = runs.iter().map(|&(a, b)| (positions[a], positions[b])).collect();
            let mut sum: Option<Interval> = None;
            for (level, theta) in &explicit {
                if level.family.admits_bounds(&bounds) {
                    let s = sum.get_or_insert_with(|| {
                        runs.iter()
                            .fold(Interval::point(Rational::zero()), |acc, &(a, b)| acc.add(&val(a, b)))
                    });
                    consider(level.index, runs.clone(), theta.mul(s));
                }
            }
        }
    }
    best.map(|c| Choice { value: enclosure.unwrap(), ..c })
}

/// Sequences of at least two successive runs of positions in `0..n`, with
/// arbitrary gaps; when `end_at_last` the final run must end at `n - 1`.
fn gapped_runs(n: usize, end_at_last: bool) -> Vec<Vec<(usize, usize)>> {
    fn go(
        start: usize,
        n: usize,
        end_at_last: bool,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        for a in start..n {
            for b in a..n {
                cur.push((a, b));
                let last_ok = !end_at_last || b == n - 1;
                if cur.len() >= 2 && last_ok && !(cur[0].0 == 0 && b == n - 1 && cur.len() == 1) {
                    out.push(cur.clone());
                }
                go(b + 1, n, end_at_last, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, n, end_at_last, &mut Vec::new(), &mut out);
    out
}

/// Builds the certificate from the sup-norm leaf and the best split.
/// Ties go to the leaf.
fn assemble<G>(x: &FinVec, split: Option<Choice>, child: G) -> PrimalCertificate
where
    G: Fn(usize, usize) -> Arc<PrimalCertificate>,
{
    let Some((index, sup)) = x
        .iter()
        .map(|(i, v)| (i, v.abs()))
        .fold(None, |acc: Option<(usize, Rational)>, (i, v)| match acc {
            Some((_, ref best)) if *best >= v => acc,
            _ => Some((i, v)),
        })
    else {
        return PrimalCertificate {
            vector: FinVec::zero(),
            value: Interval::point(Rational::zero()),
            witness: Witness::Zero,
        };
    };
    let leaf = Interval::point(sup.clone());
    match split {
        Some(choice) if choice.value.lo() > &sup => {
            let positions = x.support();
            let partition = BlockPartition::new(
                choice.runs.iter().map(|&(a, b)| positions[a..=b].to_vec()).collect(),
            )
            .expect("runs are successive");
            let children = choice.runs.iter().map(|&(a, b)| child(a, b)).collect();
            PrimalCertificate {
                vector: x.clone(),
                value: choice.value,
                witness: Witness::Split { level: choice.level, partition, children },
            }
        }
        Some(choice) => PrimalCertificate {
            vector: x.clone(),
            value: leaf.max(&choice.value),
            witness: Witness::Leaf { index },
        },
        None => PrimalCertificate {
            vector: x.clone(),
            value: leaf,
            witness: Witness::Leaf { index },
        },
    }
}

/// Result of [`mixed_norm`].
#[derive(Clone, Debug)]
pub struct MixedNorm {
    pub value: Interval,
    pub certificate: Arc<PrimalCertificate>,
    /// θ precision in bits; 0 when every coefficient is rational.
    pub precision: u32,
}

#[derive(Clone, Copy, Debug)]
pub struct MixedNormOptions {
    /// Required enclosure width `2^-target_bits` for irrational coefficients.
    pub target_bits: u32,
    pub precision_cap: u32,
}

impl Default for MixedNormOptions {
    fn default() -> Self {
        MixedNormOptions {
            target_bits: 32,
            precision_cap: crate::DEFAULT_PRECISION_CAP,
        }
    }
}

/// Figiel–Johnson norm `‖x‖_F`.
pub fn fj_norm(x: &FinVec) -> (Rational, Arc<PrimalCertificate>) {
    let spec = MixedSpaceSpec::tsirelson();
    let mut ev = PrimalEvaluator::new(&spec, 0, Strategy::Memoized);
    let cert = ev.eval(x);
    let value = cert.value.as_point().expect("rational space").clone();
    (value, cert)
}

/// Mixed Tsirelson norm `‖x‖_*`. Exact when the relevant θ are rational;
/// otherwise θ precision is doubled until the enclosure is narrow enough.
pub fn mixed_norm(spec: &MixedSpaceSpec, x: &FinVec) -> Result<MixedNorm> {
    mixed_norm_with(spec, x, MixedNormOptions::default())
}

pub fn mixed_norm_with(spec: &MixedSpaceSpec, x: &FinVec, opts: MixedNormOptions) -> Result<MixedNorm> {
    if spec.is_rational() {
        let mut ev = PrimalEvaluator::new(spec, 0, Strategy::Memoized);
        let cert = ev.eval(x);
        return Ok(MixedNorm { value: cert.value.clone(), certificate: cert, precision: 0 });
    }
    let target = Rational::pow2(-(opts.target_bits as i64));
    let mut precision = (opts.target_bits + 8).min(opts.precision_cap.max(1));
    loop {
        let mut ev = PrimalEvaluator::new(spec, precision, Strategy::Memoized);
        let cert = ev.eval(x);
        if cert.value.width() <= target {
            return Ok(MixedNorm { value: cert.value.clone(), certificate: cert, precision });
        }
        if precision >= opts.precision_cap {
            return Err(Error::PrecisionExhausted(format!(
                "enclosure of width {} exceeds 2^-{} at {} bits of theta precision",
                cert.value.width().to_decimal(6),
                opts.target_bits,
                precision
            )));
        }
        precision = (precision * 2).min(opts.precision_cap);
    }
}

/// The approximation `‖x‖_n` of a rational space's norm:
/// `‖x‖_0 = ‖x‖_∞` and `‖x‖_{n+1} = max(‖x‖_n, max_l θ_l max Σ ‖E_i x‖_n)`.
pub struct LevelEvaluator {
    spec: MixedSpaceSpec,
    levels: Vec<(ActiveLevel, Interval)>,
    levels_support: usize,
    memo: HashMap<(FinVec, usize), Rational>,
}

impl LevelEvaluator {
    pub fn new(spec: &MixedSpaceSpec) -> Result<Self> {
        if !spec.is_rational() {
            return Err(Error::IrrationalTheta(spec.name.clone()));
        }
        Ok(LevelEvaluator { spec: spec.clone(), levels: Vec::new(), levels_support: 0, memo: HashMap::new() })
    }

    pub fn eval(&mut self, x: &FinVec, n: usize) -> Rational {
        if x.len() > self.levels_support {
            self.levels = self
                .spec
                .levels_needed(x.len())
                .into_iter()
                .map(|l| {
                    let t = l.theta.enclosure(l.index, 0);
                    (l, t)
                })
                .collect();
            self.levels_support = x.len();
        }
        self.eval_inner(x, n)
    }

    fn eval_inner(&mut self, x: &FinVec, n: usize) -> Rational {
        if n == 0 || x.len() < 2 {
            return x.sup_norm();
        }
        if let Some(v) = self.memo.get(&(x.clone(), n)) {
            return v.clone();
        }
        let prev = self.eval_inner(x, n - 1);
        let len = x.len();
        let mut table = vec![vec![None; len]; len];
        for a in 0..len {
            for b in a..len {
                if (a, b) != (0, len - 1) {
                    table[a][b] = Some(Interval::point(self.eval_inner(&x.run(a, b), n - 1)));
                }
            }
        }
        let positions = x.support();
        let split = best_split(&positions, &self.levels, |a, b| table[a][b].clone().unwrap());
        let value = match split {
            Some(c) => prev.max(c.value.lo().clone()),
            None => prev,
        };
        self.memo.insert((x.clone(), n), value.clone());
        value
    }
}

/// `‖x‖_n` of the Figiel–Johnson approximation sequence.
pub fn fj_norm_level(x: &FinVec, n: usize) -> Rational {
    let spec = MixedSpaceSpec::tsirelson();
    LevelEvaluator::new(&spec).expect("rational").eval(x, n)
}

/// Checks a certificate tree against `spec` and returns the value obtained by
/// re-evaluating every node from its children. Exact certificates must
/// reproduce their values; interval certificates must reproduce the lower
/// endpoint and stay inside the stored enclosure.
pub fn verify_certificate(spec: &MixedSpaceSpec, cert: &PrimalCertificate, precision: u32) -> Result<Interval> {
    let bad = |msg: String| Err(Error::Inconsistent(format!("certificate for ({}): {msg}", cert.vector)));
    let computed = match &cert.witness {
        Witness::Zero => {
            if !cert.vector.is_zero() {
                return bad("zero witness for a nonzero vector".into());
            }
            Interval::point(Rational::zero())
        }
        Witness::Leaf { index } => {
            let v = cert.vector.get(*index).abs();
            if v.is_zero() || v != cert.vector.sup_norm() {
                return bad(format!("leaf index {index} does not attain the sup norm"));
            }
            Interval::point(v)
        }
        Witness::Split { level, partition, children } => {
            let Some(lv) = spec.level(*level) else {
                return bad(format!("unknown level {level}"));
            };
            if partition.len() < 2 || !lv.family.is_admissible(partition) {
                return bad(format!("partition {partition} is not admissible at level {level}"));
            }
            if children.len() != partition.len() {
                return bad("child count differs from block count".into());
            }
            let supp = cert.vector.support();
            if partition.covered().iter().any(|i| !supp.contains(i)) {
                return bad("blocks reach outside the support".into());
            }
            let mut sum = Interval::point(Rational::zero());
            for (i, child) in children.iter().enumerate() {
                if child.vector != cert.vector.restrict(&partition.block_set(i)) {
                    return bad(format!("child {i} is not the restriction to its block"));
                }
                verify_certificate(spec, child, precision)?;
                sum = sum.add(&child.value);
            }
            lv.theta.enclosure(*level, precision).mul(&sum)
        }
    };
    let ok = if cert.value.is_point() {
        computed == cert.value
    } else {
        computed.lo() == cert.value.lo() && cert.value.contains_interval(&computed)
    };
    if !ok {
        return bad(format!("re-evaluates to {computed:?}, stored {:?}", cert.value));
    }
    Ok(computed)
}
