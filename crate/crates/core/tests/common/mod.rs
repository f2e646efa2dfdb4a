//! Brute-force oracles, written against `num-rational` directly. They share
//! no code with the library beyond parsing vector literals.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use tsinorm_core::lp::{LinearProgram, Relation, Sense};
use tsinorm_core::FinVec;

pub type Q = BigRational;
pub type V = BTreeMap<usize, Q>;

pub fn q(s: &str) -> Q {
    match s.split_once('/') {
        Some((n, d)) => Q::new(n.trim().parse().unwrap(), d.trim().parse().unwrap()),
        None => Q::from_integer(s.trim().parse().unwrap()),
    }
}

pub fn v(s: &str) -> V {
    s.split_whitespace()
        .map(|t| {
            let (i, x) = t.split_once(':').unwrap();
            (i.parse().unwrap(), q(x))
        })
        .filter(|(_, x): &(usize, Q)| !x.is_zero())
        .collect()
}

pub fn lit(x: &V) -> String {
    x.iter().map(|(i, a)| format!("{i}:{a}")).collect::<Vec<_>>().join(" ")
}

pub fn to_lib(x: &V) -> FinVec {
    lit(x).parse().unwrap()
}

pub fn from_lib(x: &FinVec) -> V {
    v(&x.to_string())
}

/// Library rational to oracle rational, through the decimal string.
pub fn qlib(r: &tsinorm_core::Rational) -> Q {
    q(&r.to_string())
}

pub fn basis_sum(lo: usize, hi: usize) -> V {
    (lo..=hi).map(|i| (i, Q::one())).collect()
}

fn restrict(x: &V, set: &[usize]) -> V {
    set.iter().map(|i| (*i, x[i].clone())).collect()
}

fn key(x: &V) -> String {
    lit(x)
}

/// Admissibility of successive blocks given by `(min, max)` bounds.
#[derive(Clone, Debug)]
pub enum Fam {
    Schreier,
    Card(usize),
    Explicit(Vec<Vec<usize>>),
}

impl Fam {
    pub fn admits(&self, bounds: &[(usize, usize)]) -> bool {
        let k = bounds.len();
        match self {
            Fam::Schreier => k <= bounds[0].0,
            Fam::Card(n) => k <= *n,
            Fam::Explicit(members) => members.iter().any(|m| {
                m.len() == k
                    && (0..k).all(|i| m[i] <= bounds[i].0 && (i == 0 || bounds[i - 1].1 < m[i]))
            }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Space {
    pub levels: Vec<(Fam, Q)>,
}

impl Space {
    pub fn tsirelson() -> Space {
        Space { levels: vec![(Fam::Schreier, q("1/2"))] }
    }
}

/// All successive families `E_1 < ... < E_k` of nonempty subsets of `supp`.
fn families(supp: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn go(supp: &[usize], start: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let rest = &supp[start..];
        for mask in 1u32..(1 << rest.len()) {
            let block: Vec<usize> = (0..rest.len()).filter(|b| mask >> b & 1 == 1).map(|b| rest[b]).collect();
            let last = (0..rest.len()).filter(|b| mask >> b & 1 == 1).max().unwrap();
            cur.push(block);
            out.push(cur.clone());
            go(supp, start + last + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(supp, 0, &mut Vec::new(), &mut out);
    out
}

fn sup(x: &V) -> Q {
    x.values().map(|a| a.abs()).max().unwrap_or_else(Q::zero)
}

fn ell1(x: &V) -> Q {
    x.values().map(|a| a.abs()).fold(Q::zero(), |s, a| s + a)
}

/// `‖x‖ = max(‖x‖_∞, max_l θ_l max Σ ‖E_i x‖)` over every admissible
/// successive family of arbitrary subsets of the support.
pub struct NormOracle {
    space: Space,
    memo: HashMap<String, Q>,
}

impl NormOracle {
    pub fn new(space: Space) -> Self {
        NormOracle { space, memo: HashMap::new() }
    }

    pub fn norm(&mut self, x: &V) -> Q {
        if let Some(r) = self.memo.get(&key(x)) {
            return r.clone();
        }
        let supp: Vec<usize> = x.keys().copied().collect();
        let mut best = sup(x);
        for fam in families(&supp) {
            if fam.len() == 1 && fam[0].len() == supp.len() {
                continue;
            }
            let bounds: Vec<(usize, usize)> = fam.iter().map(|b| (b[0], *b.last().unwrap())).collect();
            let thetas: Vec<Q> = self
                .space
                .levels
                .iter()
                .filter(|(f, _)| f.admits(&bounds))
                .map(|(_, t)| t.clone())
                .collect();
            if thetas.is_empty() {
                continue;
            }
            let total = fam.iter().fold(Q::zero(), |s, b| s + self.norm(&restrict(x, b)));
            for t in thetas {
                best = best.max(&t * &total);
            }
        }
        self.memo.insert(key(x), best.clone());
        best
    }

    /// `‖x‖_0 = ‖x‖_∞`, `‖x‖_{n+1} = max(‖x‖_n, max θ Σ ‖E_i x‖_n)`.
    pub fn norm_level(&mut self, x: &V, n: usize) -> Q {
        if n == 0 {
            return sup(x);
        }
        let supp: Vec<usize> = x.keys().copied().collect();
        let mut best = self.norm_level(x, n - 1);
        for fam in families(&supp) {
            let bounds: Vec<(usize, usize)> = fam.iter().map(|b| (b[0], *b.last().unwrap())).collect();
            for (f, t) in self.space.levels.clone() {
                if f.admits(&bounds) {
                    let total = fam.iter().fold(Q::zero(), |s, b| s + self.norm_level(&restrict(x, b), n - 1));
                    best = best.max(&t * total);
                }
            }
        }
        best
    }
}

/// Partitions of `supp` into `k >= 2` consecutive blocks covering it.
fn covering_partitions(supp: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n = supp.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for cuts in 1u32..(1 << (n - 1)) {
        let mut blocks = vec![vec![supp[0]]];
        for i in 1..n {
            if cuts >> (i - 1) & 1 == 1 {
                blocks.push(Vec::new());
            }
            blocks.last_mut().unwrap().push(supp[i]);
        }
        out.push(blocks);
    }
    out
}

/// `ρ̂_n`, by exhaustive covering partitions.
pub fn rho_hat(space: &Space, x: &V, n: usize, memo: &mut HashMap<(String, usize), Q>) -> Q {
    if n == 0 {
        return ell1(x);
    }
    if let Some(r) = memo.get(&(key(x), n)) {
        return r.clone();
    }
    let supp: Vec<usize> = x.keys().copied().collect();
    let mut best = rho_hat(space, x, n - 1, memo);
    for p in covering_partitions(&supp) {
        let bounds: Vec<(usize, usize)> = p.iter().map(|b| (b[0], *b.last().unwrap())).collect();
        for (f, t) in &space.levels {
            if f.admits(&bounds) {
                let m = p.iter().map(|b| rho_hat(space, &restrict(x, b), n - 1, memo)).max().unwrap();
                best = best.min(m / t);
            }
        }
    }
    memo.insert((key(x), n), best.clone());
    best
}

/// `σ`: iterate `ρ̂` until the value stops changing for `|supp| + 1` rounds.
pub fn sigma(space: &Space, x: &V, memo: &mut HashMap<(String, usize), Q>) -> Q {
    let mut prev = rho_hat(space, x, 0, memo);
    let mut still = 0;
    let mut n = 1;
    while still <= x.len() {
        let cur = rho_hat(space, x, n, memo);
        if cur == prev {
            still += 1;
        } else {
            still = 0;
        }
        prev = cur;
        n += 1;
    }
    prev
}

/// Rational bounds `lo <= 1/log2(m) <= hi` from the bit length of `m^d`.
pub fn inv_log2_bounds(m: u64, d: u64) -> (Q, Q) {
    let p = num_traits::pow(BigUint::from(m), d as usize);
    let a = p.bits() - 1; // a <= d log2 m < a + 1
    let dq = Q::from_integer(BigInt::from(d));
    if p == BigUint::one() << a {
        let exact = dq / Q::from_integer(BigInt::from(a));
        return (exact.clone(), exact);
    }
    (dq.clone() / Q::from_integer(BigInt::from(a + 1)), dq / Q::from_integer(BigInt::from(a)))
}

/// Closed interval with rational ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Iv(pub Q, pub Q);

impl Iv {
    fn add(&self, o: &Iv) -> Iv {
        Iv(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn scale_pos(&self, t: &Iv) -> Iv {
        Iv(&self.0 * &t.0, &self.1 * &t.1)
    }
    fn max(&self, o: &Iv) -> Iv {
        Iv(self.0.clone().max(o.0.clone()), self.1.clone().max(o.1.clone()))
    }
}

/// Interval brute force for spaces whose level `l` is `(card(l), θ_l)` with
/// θ given as enclosures, levels `1..=|supp|`.
pub fn interval_norm(thetas: &[Iv], x: &V) -> Iv {
    let supp: Vec<usize> = x.keys().copied().collect();
    let s = sup(x);
    let mut best = Iv(s.clone(), s);
    for fam in families(&supp) {
        if fam.len() == 1 && fam[0].len() == supp.len() {
            continue;
        }
        let total = fam
            .iter()
            .fold(Iv(Q::zero(), Q::zero()), |acc, b| acc.add(&interval_norm(thetas, &restrict(x, b))));
        for (l, t) in thetas.iter().enumerate() {
            if fam.len() <= l + 1 {
                best = best.max(&total.scale_pos(t));
            }
        }
    }
    best
}

#[derive(Debug)]
pub enum LpOutcome {
    Optimal(Q),
    Infeasible,
    Unbounded,
}

fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = Q::one() / &a[c][c];
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] * &inv;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
                let t = &f * &b[c];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Vertex enumeration for programs with `x >= 0` and finite or absent upper
/// bounds. A box `x <= big` is added; the program is unbounded when the best
/// boxed vertex beats every vertex off the box.
pub fn lp_oracle(lp: &LinearProgram, sense: Sense, big: &Q) -> LpOutcome {
    let n = lp.num_vars();
    let conv = |r: &tsinorm_core::Rational| qlib(r);
    // Halfspaces a·x <= b, tagged as box or not; equalities kept separately.
    let mut hs: Vec<(Vec<Q>, Q, bool)> = Vec::new();
    let mut eqs: Vec<(Vec<Q>, Q)> = Vec::new();
    for c in &lp.constraints {
        let a: Vec<Q> = c.coeffs.iter().map(conv).collect();
        let b = conv(&c.rhs);
        match c.relation {
            Relation::Le => hs.push((a, b, false)),
            Relation::Ge => hs.push((a.iter().map(|x| -x).collect(), -b, false)),
            Relation::Eq => eqs.push((a, b)),
        }
    }
    for j in 0..n {
        let mut e = vec![Q::zero(); n];
        e[j] = -Q::one();
        let lo = lp.lower[j].as_ref().map(conv).expect("oracle needs lower bounds");
        hs.push((e.clone(), -lo, false));
        e[j] = Q::one();
        match &lp.upper[j] {
            Some(u) => hs.push((e, conv(u), false)),
            None => hs.push((e, big.clone(), true)),
        }
    }
    let obj: Vec<Q> = lp
        .objective
        .iter()
        .map(|c| if sense == Sense::Max { conv(c) } else { -conv(c) })
        .collect();
    let planes: Vec<(Vec<Q>, Q, bool)> = eqs
        .iter()
        .map(|(a, b)| (a.clone(), b.clone(), false))
        .chain(hs.iter().cloned())
        .collect();
    let feasible = |x: &[Q]| {
        let dot = |a: &[Q]| a.iter().zip(x).fold(Q::zero(), |s, (p, q)| s + p * q);
        eqs.iter().all(|(a, b)| dot(a) == *b) && hs.iter().all(|(a, b, _)| dot(a) <= *b)
    };
    let mut best_any: Option<Q> = None;
    let mut best_free: Option<Q> = None;
    let m = planes.len();
    let mut idx: Vec<usize> = (0..n).collect();
    if n > m {
        return LpOutcome::Infeasible;
    }
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<Q> = idx.iter().map(|&i| planes[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let val = obj.iter().zip(&x).fold(Q::zero(), |s, (c, v)| s + c * v);
                let on_box = hs.iter().any(|(a, b, is_box)| {
                    *is_box && a.iter().zip(&x).fold(Q::zero(), |s, (p, q)| s + p * q) == *b
                });
                if best_any.as_ref().is_none_or(|b| val > *b) {
                    best_any = Some(val.clone());
                }
                if !on_box && best_free.as_ref().is_none_or(|b| val > *b) {
                    best_free = Some(val);
                }
            }
        }
        // Next combination.
        let mut i = n;
        loop {
            if i == 0 {
                let sign = |v: Q| if sense == Sense::Max { v } else { -v };
                return match (best_any, best_free) {
                    (None, _) => LpOutcome::Infeasible,
                    (Some(a), Some(f)) if a == f => LpOutcome::Optimal(sign(f)),
                    _ => LpOutcome::Unbounded,
                };
            }
            i -= 1;
            if idx[i] < m - (n - i) {
                idx[i] += 1;
                for k in i + 1..n {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}
