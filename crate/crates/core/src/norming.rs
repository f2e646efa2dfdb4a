//! Norming sets on a finite support window.
//!
//! `V_0 = {±e*_k}` and each round adds `θ_l (f_1 + ... + f_k)` for successive
//! `f_1 < ... < f_k` in the current set whose supports are admissible at
//! level `l`. The set is symmetric under coordinate sign changes, so only
//! nonnegative representatives are stored; signed functionals are produced
//! on demand.
//!
//! During construction a candidate is discarded when another functional with
//! the same support dominates it, and evicts same-support functionals it
//! dominates. Admissibility and successiveness depend only on supports, so
//! this loses nothing up to domination. The stored set is then reduced to
//! its maximal elements under coordinatewise domination.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::families::{ActiveLevel, MixedSpaceSpec};
use crate::scalar::Rational;
use crate::vector::FinVec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctionalTree {
    /// `±e*_index`
    Leaf { index: usize, negative: bool },
    /// `theta · (children summed)`, built at `level`.
    Node {
        level: usize,
        theta: Rational,
        children: Vec<Arc<FunctionalTree>>,
    },
}

impl FunctionalTree {
    /// Coefficient vector denoted by the tree.
    pub fn evaluate(&self) -> FinVec {
        match self {
            FunctionalTree::Leaf { index, negative } => {
                let v = if *negative { -Rational::one() } else { Rational::one() };
                FinVec::from_pairs([(*index, v)]).expect("leaf index is positive")
            }
            FunctionalTree::Node { theta, children, .. } => children
                .iter()
                .fold(FinVec::zero(), |acc, c| acc.add(&c.evaluate()))
                .scale(theta),
        }
    }

    /// `(min, max)` of the leaf indices.
    pub fn bounds(&self) -> (usize, usize) {
        match self {
            FunctionalTree::Leaf { index, .. } => (*index, *index),
            FunctionalTree::Node { children, .. } => {
                (children[0].bounds().0, children[children.len() - 1].bounds().1)
            }
        }
    }

    /// Copy with leaf signs taken from `signs` (negative where `signs` is).
    pub fn with_signs(&self, signs: &FinVec) -> FunctionalTree {
        match self {
            FunctionalTree::Leaf { index, .. } => FunctionalTree::Leaf {
                index: *index,
                negative: signs.get(*index).is_negative(),
            },
            FunctionalTree::Node { level, theta, children } => FunctionalTree::Node {
                level: *level,
                theta: theta.clone(),
                children: children.iter().map(|c| Arc::new(c.with_signs(signs))).collect(),
            },
        }
    }

    /// Drops leaves outside `set` and nodes left without children.
    pub fn restrict(&self, set: &BTreeSet<usize>) -> Option<FunctionalTree> {
        match self {
            FunctionalTree::Leaf { index, .. } => set.contains(index).then(|| self.clone()),
            FunctionalTree::Node { level, theta, children } => {
                let kept: Vec<Arc<FunctionalTree>> =
                    children.iter().filter_map(|c| c.restrict(set)).map(Arc::new).collect();
                (!kept.is_empty()).then(|| FunctionalTree::Node {
                    level: *level,
                    theta: theta.clone(),
                    children: kept,
                })
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FunctionalTree::Leaf { .. } => 0,
            FunctionalTree::Node { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    /// Parses the s-expression form written by `Display`.
    pub fn parse(text: &str) -> Result<FunctionalTree> {
        let tokens: Vec<String> = text
            .replace('(', " ( ")
            .replace(')', " ) ")
            .split_whitespace()
            .map(str::to_owned)
            .collect();
        let mut pos = 0;
        let tree = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in functional tree `{text}`")));
        }
        Ok(tree)
    }
}

fn parse_tree(tokens: &[String], pos: &mut usize) -> Result<FunctionalTree> {
    let tok = tokens.get(*pos).ok_or_else(|| Error::Parse("unexpected end of functional tree".into()))?;
    *pos += 1;
    if tok == "(" {
        let head = tokens.get(*pos).ok_or_else(|| Error::Parse("missing level".into()))?;
        let level = head
            .strip_prefix('L')
            .and_then(|l| l.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `L<level>`, got `{head}`")))?;
        let theta: Rational = tokens
            .get(*pos + 1)
            .ok_or_else(|| Error::Parse("missing theta".into()))?
            .parse()?;
        *pos += 2;
        let mut children = Vec::new();
        while tokens.get(*pos).map(String::as_str) != Some(")") {
            if *pos >= tokens.len() {
                return Err(Error::Parse("unbalanced parentheses".into()));
            }
            children.push(Arc::new(parse_tree(tokens, pos)?));
        }
        *pos += 1;
        if children.is_empty() {
            return Err(Error::Parse("node without children".into()));
        }
        return Ok(FunctionalTree::Node { level, theta, children });
    }
    let (negative, rest) = match tok.as_bytes().first() {
        Some(b'+') => (false, &tok[1..]),
        Some(b'-') => (true, &tok[1..]),
        _ => return Err(Error::Parse(format!("expected a signed leaf, got `{tok}`"))),
    };
    let index: usize = rest.parse().map_err(|_| Error::Parse(format!("bad leaf `{tok}`")))?;
    if index == 0 {
        return Err(Error::Parse("leaf indices start at 1".into()));
    }
    Ok(FunctionalTree::Leaf { index, negative })
}

impl fmt::Display for FunctionalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalTree::Leaf { index, negative } => write!(f, "{}{index}", if *negative { '-' } else { '+' }),
            FunctionalTree::Node { level, theta, children } => {
                write!(f, "(L{level} {theta}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A functional with its construction tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormingFunctional {
    pub coeffs: FinVec,
    pub tree: Arc<FunctionalTree>,
}

impl NormingFunctional {
    pub fn leaf(index: usize, negative: bool) -> Self {
        let tree = FunctionalTree::Leaf { index, negative };
        NormingFunctional { coeffs: tree.evaluate(), tree: Arc::new(tree) }
    }

    pub fn from_tree(tree: FunctionalTree) -> Self {
        NormingFunctional { coeffs: tree.evaluate(), tree: Arc::new(tree) }
    }

    pub fn apply(&self, x: &FinVec) -> Rational {
        crate::vector::pairing(&self.coeffs, x)
    }

    pub fn restrict(&self, set: &BTreeSet<usize>) -> Option<NormingFunctional> {
        self.tree.restrict(set).map(Self::from_tree)
    }

    /// Same tree with leaf signs matching the signs of `x`.
    pub fn signed_like(&self, x: &FinVec) -> NormingFunctional {
        Self::from_tree(self.tree.with_signs(x))
    }

    /// Export line: `<tree> | <coefficients>`.
    pub fn to_line(&self) -> String {
        format!("{} | {}", self.tree, self.coeffs)
    }

    /// Parses an export line and checks that the tree evaluates to the
    /// listed coefficients.
    pub fn from_line(line: &str) -> Result<NormingFunctional> {
        let (tree, coeffs) = line
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("expected `<tree> | <coefficients>`, got `{line}`")))?;
        let tree = FunctionalTree::parse(tree)?;
        let coeffs: FinVec = coeffs.parse()?;
        if tree.evaluate() != coeffs {
            return Err(Error::Parse(format!("tree {tree} does not evaluate to {coeffs}")));
        }
        Ok(NormingFunctional { coeffs, tree: Arc::new(tree) })
    }
}

/// Checks that `f` is a genuine norming functional of `spec`: each node uses
/// its level's rational θ, children have successive supports admissible for
/// the level's family, and the tree evaluates to `f.coeffs`.
pub fn verify_functional(spec: &MixedSpaceSpec, f: &NormingFunctional) -> Result<()> {
    fn check(spec: &MixedSpaceSpec, t: &FunctionalTree) -> Result<()> {
        let FunctionalTree::Node { level, theta, children } = t else {
            return Ok(());
        };
        let lv = spec
            .level(*level)
            .ok_or_else(|| Error::Inconsistent(format!("functional uses unknown level {level}")))?;
        if lv.theta.as_rational(*level).as_ref() != Some(theta) {
            return Err(Error::Inconsistent(format!("node at level {level} uses theta {theta}")));
        }
        let bounds: Vec<(usize, usize)> = children.iter().map(|c| c.bounds()).collect();
        if bounds.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(Error::Inconsistent(format!("children of {t} are not successive")));
        }
        if !lv.family.admits_bounds(&bounds) {
            return Err(Error::Inconsistent(format!("children of {t} are not admissible at level {level}")));
        }
        children.iter().try_for_each(|c| check(spec, c))
    }
    check(spec, &f.tree)?;
    if f.tree.evaluate() != f.coeffs {
        return Err(Error::Inconsistent(format!("tree {} does not evaluate to {}", f.tree, f.coeffs)));
    }
    Ok(())
}

fn dominates(g: &FinVec, f: &FinVec) -> bool {
    f.abs_dominated_by(g)
}

/// Maximal elements under coordinatewise domination, in a fixed order.
/// Among equal coefficient vectors the first is kept.
pub fn prune_dominated(fs: Vec<NormingFunctional>) -> Vec<NormingFunctional> {
    let mut fs = fs;
    fs.sort_by(|a, b| b.coeffs.len().cmp(&a.coeffs.len()).then_with(|| a.coeffs.cmp(&b.coeffs)));
    fs.dedup_by(|a, b| a.coeffs == b.coeffs);
    let mut kept: Vec<NormingFunctional> = Vec::new();
    for f in fs {
        if !kept.iter().any(|g| dominates(&g.coeffs, &f.coeffs)) {
            kept.retain(|g| !dominates(&f.coeffs, &g.coeffs));
            kept.push(f);
        }
    }
    kept.sort_by(|a, b| a.coeffs.support().cmp(&b.coeffs.support()).then_with(|| a.coeffs.cmp(&b.coeffs)));
    kept
}

/// Maximal norming functionals supported in `[1, window]`, or in a given
/// index set.
#[derive(Clone, Debug)]
pub struct NormingSet {
    pub space: String,
    pub window: usize,
    /// Indices the functionals may use; `1..=window` unless built on a support.
    pub indices: Vec<usize>,
    /// Closure rounds after which nothing new appeared.
    pub generation: usize,
    pub stabilized: bool,
    representatives: Vec<NormingFunctional>,
}

impl NormingSet {
    /// Wraps functionals of either sign; they are reduced to nonnegative
    /// maximal representatives.
    pub fn from_functionals(
        space: impl Into<String>,
        indices: Vec<usize>,
        generation: usize,
        stabilized: bool,
        functionals: Vec<NormingFunctional>,
    ) -> Result<NormingSet> {
        let window = indices.iter().copied().max().unwrap_or(0);
        let allowed: BTreeSet<usize> = indices.iter().copied().collect();
        let mut reps = Vec::with_capacity(functionals.len());
        for f in functionals {
            if let Some(i) = f.coeffs.support().into_iter().find(|i| !allowed.contains(i)) {
                return Err(Error::OutsideWindow { index: i, window });
            }
            reps.push(f.signed_like(&FinVec::zero()));
        }
        Ok(NormingSet {
            space: space.into(),
            window,
            indices,
            generation,
            stabilized,
            representatives: prune_dominated(reps),
        })
    }

    /// Nonnegative maximal representatives.
    pub fn representatives(&self) -> &[NormingFunctional] {
        &self.representatives
    }

    /// Number of signed functionals, `Σ 2^|supp f|`.
    pub fn signed_len(&self) -> u128 {
        self.representatives.iter().map(|f| 1u128 << f.coeffs.len()).sum()
    }

    /// Every sign pattern of every representative, in a fixed order.
    pub fn signed(&self) -> impl Iterator<Item = NormingFunctional> + '_ {
        self.representatives.iter().flat_map(|f| {
            let supp = f.coeffs.support();
            (0u64..1 << supp.len()).map(move |mask| {
                let signs = FinVec::from_pairs(
                    supp.iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| (i, -Rational::one())),
                )
                .expect("support indices are positive");
                f.signed_like(&signs)
            })
        })
    }

    /// `max f(x)` over the signed set, with a maximizing signed functional.
    pub fn tau_with_witness(&self, x: &FinVec) -> Result<(Rational, NormingFunctional)> {
        for i in x.support() {
            if self.indices.binary_search(&i).is_err() {
                return Err(Error::OutsideWindow { index: i, window: self.window });
            }
        }
        let ax = x.abs();
        let mut best: Option<(Rational, &NormingFunctional)> = None;
        for f in &self.representatives {
            let v = crate::vector::pairing(&f.coeffs, &ax);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, f));
            }
        }
        let (v, f) = best.ok_or_else(|| Error::Inconsistent("empty norming set".into()))?;
        Ok((v, f.signed_like(x)))
    }

    pub fn tau(&self, x: &FinVec) -> Result<Rational> {
        self.tau_with_witness(x).map(|(v, _)| v)
    }

    /// Restrictions of the representatives to `support`, reduced to maximal
    /// elements.
    pub fn restricted_to(&self, support: &BTreeSet<usize>) -> Vec<NormingFunctional> {
        prune_dominated(self.representatives.iter().filter_map(|f| f.restrict(support)).collect())
    }

    /// Export document: `#` header lines, then one signed functional per line.
    pub fn export(&self) -> String {
        let mut out = String::new();
        out.push_str("# norming set\n");
        out.push_str(&format!("# space: {}\n", self.space));
        out.push_str(&format!("# window: {}\n", self.window));
        if self.indices != (1..=self.window).collect::<Vec<_>>() {
            let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
            out.push_str(&format!("# indices: {}\n", idx.join(" ")));
        }
        out.push_str(&format!("# generation: {}\n", self.generation));
        out.push_str(&format!("# stabilized: {}\n", self.stabilized));
        out.push_str(&format!("# functionals: {}\n", self.signed_len()));
        for f in self.signed() {
            out.push_str(&f.to_line());
            out.push('\n');
        }
        out
    }

    /// Reads an export document back, verifying every tree. Functionals are
    /// also checked against `spec` when one is given.
    pub fn import(text: &str, spec: Option<&MixedSpaceSpec>) -> Result<NormingSet> {
        let mut header: HashMap<String, String> = HashMap::new();
        let mut fs = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(h) = line.strip_prefix('#') {
                if let Some((k, v)) = h.split_once(':') {
                    header.insert(k.trim().to_owned(), v.trim().to_owned());
                }
                continue;
            }
            let f = NormingFunctional::from_line(line)?;
            if let Some(spec) = spec {
                verify_functional(spec, &f)?;
            }
            fs.push(f);
        }
        let field = |k: &str| header.get(k).ok_or_else(|| Error::Parse(format!("missing header `{k}`")));
        let window: usize = field("window")?.parse().map_err(|_| Error::Parse("bad window".into()))?;
        let indices = match header.get("indices") {
            Some(list) => list
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad index `{t}`"))))
                .collect::<Result<Vec<_>>>()?,
            None => (1..=window).collect(),
        };
        let generation = field("generation")?.parse().map_err(|_| Error::Parse("bad generation".into()))?;
        let stabilized = field("stabilized")?.parse().map_err(|_| Error::Parse("bad stabilized flag".into()))?;
        let space = header.get("space").cloned().unwrap_or_default();
        NormingSet::from_functionals(space, indices, generation, stabilized, fs)
    }
}

fn rational_levels(spec: &MixedSpaceSpec, window: usize) -> Result<Vec<(ActiveLevel, Rational)>> {
    if !spec.is_rational() {
        return Err(Error::IrrationalTheta(spec.name.clone()));
    }
    Ok(spec
        .levels_needed(window)
        .into_iter()
        .map(|l| {
            let t = l.theta.as_rational(l.index).expect("rational spec");
            (l, t)
        })
        .collect())
}

/// Visits every admissible tuple `f_1 < ... < f_k` (`k >= 2`) drawn from
/// `pool`, which must be sorted by minimum index.
fn for_each_tuple<F>(pool: &[Arc<NormingFunctional>], level: &ActiveLevel, mut visit: F)
where
    F: FnMut(&[usize]),
{
    let bounds: Vec<(usize, usize)> = pool
        .iter()
        .map(|f| (f.coeffs.min_index().unwrap(), f.coeffs.max_index().unwrap()))
        .collect();
    // first[i]: first position in pool whose minimum exceeds i.
    let max_index = bounds.iter().map(|b| b.1).max().unwrap_or(0);
    let mut first = vec![pool.len(); max_index + 2];
    for i in (0..=max_index).rev() {
        first[i] = bounds.iter().position(|b| b.0 > i).unwrap_or(pool.len());
    }
    fn go<F: FnMut(&[usize])>(
        start: usize,
        chosen: &mut Vec<usize>,
        cb: &mut Vec<(usize, usize)>,
        bounds: &[(usize, usize)],
        first: &[usize],
        level: &ActiveLevel,
        limit: usize,
        visit: &mut F,
    ) {
        for j in start..bounds.len() {
            chosen.push(j);
            cb.push(bounds[j]);
            if cb.len() >= 2 && level.family.admits_bounds(cb) {
                visit(chosen);
            }
            if cb.len() < limit {
                let next = first.get(bounds[j].1).copied().unwrap_or(bounds.len());
                go(next, chosen, cb, bounds, first, level, limit, visit);
            }
            chosen.pop();
            cb.pop();
        }
    }
    for j in 0..pool.len() {
        let limit = level.family.max_blocks(bounds[j].0);
        if limit < 2 {
            continue;
        }
        let mut chosen = vec![j];
        let mut cb = vec![bounds[j]];
        let next = first.get(bounds[j].1).copied().unwrap_or(pool.len());
        go(next, &mut chosen, &mut cb, &bounds, &first, level, limit, &mut visit);
    }
}

fn combine(level: &ActiveLevel, theta: &Rational, parts: &[&Arc<NormingFunctional>]) -> NormingFunctional {
    let coeffs = parts
        .iter()
        .fold(FinVec::zero(), |acc, f| acc.add(&f.coeffs))
        .scale(theta);
    let tree = FunctionalTree::Node {
        level: level.index,
        theta: theta.clone(),
        children: parts.iter().map(|f| f.tree.clone()).collect(),
    };
    NormingFunctional { coeffs, tree: Arc::new(tree) }
}

fn budget_check(count: u128, budget: usize) -> Result<()> {
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "norming functionals",
            count: count.min(usize::MAX as u128) as usize,
            limit: budget,
        });
    }
    Ok(())
}

/// Builds the stabilized set of maximal functionals supported in `[1, window]`.
/// `budget` caps the number of signed functionals held during construction.
pub fn build_norming_set(spec: &MixedSpaceSpec, window: usize, budget: usize) -> Result<NormingSet> {
    build_norming_set_on(spec, &(1..=window).collect(), budget)
}

/// Builds the stabilized set of maximal functionals whose supports lie in
/// `indices`. These are exactly the restrictions to `indices` of the
/// functionals on any larger window.
pub fn build_norming_set_on(spec: &MixedSpaceSpec, indices: &BTreeSet<usize>, budget: usize) -> Result<NormingSet> {
    if indices.is_empty() || indices.contains(&0) {
        return Err(Error::InvalidInput("the index set must be nonempty and 1-based".into()));
    }
    let window = *indices.iter().next_back().unwrap();
    let levels = rational_levels(spec, indices.len())?;
    // Working set: same-support antichains, plus liveness flags.
    let mut pool: Vec<Arc<NormingFunctional>> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut by_support: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut signed_count: u128 = 0;
    let mut fresh: Vec<usize> = Vec::new();
    for &k in indices {
        let f = Arc::new(NormingFunctional::leaf(k, false));
        by_support.insert(vec![k], vec![pool.len()]);
        fresh.push(pool.len());
        pool.push(f);
        alive.push(true);
        signed_count += 2;
    }
    budget_check(signed_count, budget)?;

    let mut generation = 0;
    loop {
        let live: Vec<usize> = (0..pool.len()).filter(|&i| alive[i]).collect();
        let mut order = live.clone();
        order.sort_by_key(|&i| (pool[i].coeffs.min_index(), pool[i].coeffs.max_index()));
        let view: Vec<Arc<NormingFunctional>> = order.iter().map(|&i| pool[i].clone()).collect();
        let is_fresh: Vec<bool> = {
            let fresh: BTreeSet<usize> = fresh.iter().copied().collect();
            order.iter().map(|i| fresh.contains(i)).collect()
        };
        let mut candidates: Vec<NormingFunctional> = Vec::new();
        for (level, theta) in &levels {
            for_each_tuple(&view, level, |chosen| {
                if chosen.iter().any(|&j| is_fresh[j]) {
                    let parts: Vec<&Arc<NormingFunctional>> = chosen.iter().map(|&j| &view[j]).collect();
                    candidates.push(combine(level, theta, &parts));
                }
            });
        }
        let mut added = Vec::new();
        for c in candidates {
            let supp = c.coeffs.support();
            let slot = by_support.entry(supp).or_default();
            if slot.iter().any(|&i| dominates(&pool[i].coeffs, &c.coeffs)) {
                continue;
            }
            slot.retain(|&i| {
                let keep = !dominates(&c.coeffs, &pool[i].coeffs);
                if !keep {
                    alive[i] = false;
                    signed_count -= 1u128 << pool[i].coeffs.len();
                }
                keep
            });
            slot.push(pool.len());
            added.push(pool.len());
            signed_count += 1u128 << c.coeffs.len();
            pool.push(Arc::new(c));
            alive.push(true);
            budget_check(signed_count, budget)?;
        }
        added.retain(|&i| alive[i]);
        if added.is_empty() {
            break;
        }
        generation += 1;
        fresh = added;
    }
    let live: Vec<NormingFunctional> =
        (0..pool.len()).filter(|&i| alive[i]).map(|i| (*pool[i]).clone()).collect();
    Ok(NormingSet {
        space: spec.name.clone(),
        window,
        indices: indices.iter().copied().collect(),
        generation,
        stabilized: true,
        representatives: prune_dominated(live),
    })
}

/// The raw sets `V_0, ..., V_n` (nonnegative representatives, exact
/// deduplication, no domination pruning). Tuples with a single member are
/// left out: they only add multiples `θ f` of existing functionals.
pub fn generation_sets(
    spec: &MixedSpaceSpec,
    window: usize,
    n: usize,
    budget: usize,
) -> Result<Vec<Vec<NormingFunctional>>> {
    let levels = rational_levels(spec, window)?;
    let mut current: Vec<Arc<NormingFunctional>> =
        (1..=window).map(|k| Arc::new(NormingFunctional::leaf(k, false))).collect();
    let mut out = vec![current.iter().map(|f| (**f).clone()).collect::<Vec<_>>()];
    for _ in 0..n {
        current.sort_by_key(|f| (f.coeffs.min_index(), f.coeffs.max_index()));
        let mut seen: BTreeSet<FinVec> = current.iter().map(|f| f.coeffs.clone()).collect();
        let mut next = current.clone();
        let mut signed: u128 = next.iter().map(|f| 1u128 << f.coeffs.len()).sum();
        for (level, theta) in &levels {
            let mut produced = Vec::new();
            for_each_tuple(&current, level, |chosen| {
                let parts: Vec<&Arc<NormingFunctional>> = chosen.iter().map(|&j| &current[j]).collect();
                produced.push(combine(level, theta, &parts));
            });
            for f in produced {
                if seen.insert(f.coeffs.clone()) {
                    signed += 1u128 << f.coeffs.len();
                    budget_check(signed, budget)?;
                    next.push(Arc::new(f));
                }
            }
        }
        current = next;
        out.push(current.iter().map(|f| (**f).clone()).collect());
    }
    Ok(out)
}

/// `max f(x)` over all sign patterns of the given representatives.
pub fn tau_over(reps: &[NormingFunctional], x: &FinVec) -> Rational {
    let ax = x.abs();
    reps.iter()
        .map(|f| crate::vector::pairing(&f.coeffs, &ax))
        .max()
        .unwrap_or_default()
}
