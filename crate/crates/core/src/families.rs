//! Admissibility families and mixed-space specifications.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::BlockPartition;
use crate::scalar::{Interval, Rational};

/// A family `M` of finite subsets of the naturals used to decide which
/// successive block sequences may be combined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AdmissibilityFamily {
    /// `{F : |F| <= min F}`.
    Schreier1,
    /// `{F : |F| <= n}`.
    CardinalityAtMost(usize),
    ExplicitFinite(ExplicitFamily),
}

/// A finite family given by its members; always contains every singleton
/// `{i}` with `i` up to the largest index mentioned by any member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExplicitFamily {
    members: Vec<Vec<usize>>,
}

impl ExplicitFamily {
    /// Members are sorted and deduplicated. Missing singletons are an error.
    pub fn new(members: Vec<Vec<usize>>) -> Result<Self> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut m in members {
            m.sort_unstable();
            m.dedup();
            if m.first() == Some(&0) {
                return Err(Error::InvalidSpec("family members use 1-based indices".into()));
            }
            if !m.is_empty() {
                set.insert(m);
            }
        }
        let top = set.iter().filter_map(|m| m.last()).copied().max().unwrap_or(0);
        for i in 1..=top {
            if !set.contains(&vec![i]) {
                return Err(Error::InvalidSpec(format!(
                    "explicit family must contain all singletons; {{{i}}} is missing"
                )));
            }
        }
        Ok(ExplicitFamily {
            members: set.into_iter().collect(),
        })
    }

    /// Truncation of the Schreier family to subsets of `[1, n]`.
    pub fn schreier_truncation(n: usize) -> Self {
        let mut members = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let m: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            if m.len() <= m[0] {
                members.push(m);
            }
        }
        ExplicitFamily::new(members).expect("schreier truncation contains singletons")
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn max_member_len(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_index(&self) -> usize {
        self.members.iter().filter_map(|m| m.last()).copied().max().unwrap_or(0)
    }
}

/// General interleaving test: some member `M = {m_1 < ... < m_k}` with
/// `m_1 <= E_1 < m_2 <= E_2 < ... < m_k <= E_k`.
pub fn admits_by_interleaving(members: &[Vec<usize>], bounds: &[(usize, usize)]) -> bool {
    let k = bounds.len();
    members.iter().filter(|m| m.len() == k).any(|m| {
        m.iter().zip(bounds).enumerate().all(|(i, (&mi, &(lo, _)))| {
            mi <= lo && (i == 0 || bounds[i - 1].1 < mi)
        })
    })
}

impl AdmissibilityFamily {
    /// Admissibility of successive blocks with the given `(min, max)` bounds.
    pub fn admits_bounds(&self, bounds: &[(usize, usize)]) -> bool {
        let k = bounds.len();
        if k == 0 {
            return false;
        }
        match self {
            AdmissibilityFamily::Schreier1 => k <= bounds[0].0,
            AdmissibilityFamily::CardinalityAtMost(n) => k <= *n,
            AdmissibilityFamily::ExplicitFinite(f) => admits_by_interleaving(&f.members, bounds),
        }
    }

    pub fn is_admissible(&self, partition: &BlockPartition) -> bool {
        self.admits_bounds(&partition.bounds())
    }

    /// Whether admissibility depends only on the block count and on
    /// `min E_1`, monotonically: fewer blocks and a later start never hurt.
    pub fn is_count_determined(&self) -> bool {
        !matches!(self, AdmissibilityFamily::ExplicitFinite(_))
    }

    /// Admissibility for count-determined families.
    pub fn admits_count(&self, k: usize, first_min: usize) -> bool {
        match self {
            AdmissibilityFamily::Schreier1 => k <= first_min,
            AdmissibilityFamily::CardinalityAtMost(n) => k <= *n,
            AdmissibilityFamily::ExplicitFinite(_) => {
                unreachable!("explicit families are not count-determined")
            }
        }
    }

    /// Upper bound on the number of blocks of an admissible sequence whose
    /// first block starts at `first_min`.
    pub fn max_blocks(&self, first_min: usize) -> usize {
        match self {
            AdmissibilityFamily::Schreier1 => first_min,
            AdmissibilityFamily::CardinalityAtMost(n) => *n,
            AdmissibilityFamily::ExplicitFinite(f) => f.max_member_len(),
        }
    }

    /// The family as seen by vectors with at most `n` support points.
    fn effective(&self, n: usize) -> AdmissibilityFamily {
        match self {
            AdmissibilityFamily::CardinalityAtMost(m) => AdmissibilityFamily::CardinalityAtMost((*m).min(n)),
            other => other.clone(),
        }
    }

    /// Whether any sequence of two or more blocks can be admissible.
    fn admits_multiple_blocks(&self) -> bool {
        match self {
            AdmissibilityFamily::Schreier1 => true,
            AdmissibilityFamily::CardinalityAtMost(n) => *n >= 2,
            AdmissibilityFamily::ExplicitFinite(f) => f.max_member_len() >= 2,
        }
    }
}

impl fmt::Display for AdmissibilityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityFamily::Schreier1 => write!(f, "schreier1"),
            AdmissibilityFamily::CardinalityAtMost(n) => write!(f, "card_at_most({n})"),
            AdmissibilityFamily::ExplicitFinite(e) => write!(f, "explicit({} members)", e.members.len()),
        }
    }
}

/// Binary logarithm of an integer `m >= 1`, enclosed to `frac_bits` fractional
/// bits using squaring with outward-rounded dyadic intervals. Returns `None`
/// when `work_bits` is too small to decide a bit.
fn log2_enclosure(m: &BigInt, frac_bits: u32, work_bits: u32) -> Option<(Rational, Rational)> {
    let e = m.bits() - 1;
    let int_part = Rational::from_integer(e as i64);
    let y = Rational::from_bigints(m.clone(), BigInt::one() << e);
    if y == Rational::one() {
        return Some((int_part.clone(), int_part));
    }
    let two = Rational::from_integer(2);
    let half = Rational::new(1, 2);
    let (mut lo, mut hi) = (y.clone(), y);
    let mut bits = BigInt::from(0);
    for _ in 0..frac_bits {
        lo = (&lo * &lo).floor_dyadic(work_bits);
        hi = (&hi * &hi).ceil_dyadic(work_bits);
        bits <<= 1;
        if lo >= two {
            bits += 1;
            lo = &lo * &half;
            hi = &hi * &half;
        } else if hi >= two {
            return None;
        }
    }
    let scale = BigInt::one() << frac_bits;
    let frac_lo = Rational::from_bigints(bits.clone(), scale.clone());
    let frac_hi = Rational::from_bigints(bits + 1, scale);
    Some((&int_part + frac_lo, int_part + frac_hi))
}

/// Enclosure of `1/log2(l+1)` of width at most `2^-precision`.
///
/// The result is the dyadic cell `[a/2^p, (a+1)/2^p]` containing the value
/// (a point when `l + 1` is a power of two), so enclosures at higher precision
/// are always nested inside those at lower precision.
pub fn schlumprecht_theta(l: usize, precision: u32) -> Interval {
    assert!(l >= 1, "levels are 1-based");
    let m = BigInt::from(l + 1);
    let e = m.bits() - 1;
    if m == BigInt::one() << e {
        return Interval::point(Rational::new(1, e as i64));
    }
    let mut frac_bits = precision + 8;
    let mut work_bits = frac_bits + 16;
    loop {
        if let Some((llo, lhi)) = log2_enclosure(&m, frac_bits, work_bits) {
            let scale = Rational::pow2(precision as i64);
            // theta * 2^p lies strictly between scale/lhi and scale/llo.
            let a = (&scale / &lhi).floor();
            let b = (&scale / &llo).ceil() - 1;
            if a == b {
                let den = BigInt::one() << precision;
                return Interval::new(
                    Rational::from_bigints(a.clone(), den.clone()),
                    Rational::from_bigints(a + 1, den),
                )
                .expect("ordered");
            }
            frac_bits *= 2;
        }
        work_bits *= 2;
    }
}

/// Coefficient `θ` of a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Theta {
    Rational(Rational),
    /// `1 / log2(l + 1)` where `l` is the level's 1-based position.
    Schlumprecht,
}

impl Theta {
    pub fn enclosure(&self, level: usize, precision: u32) -> Interval {
        match self {
            Theta::Rational(r) => Interval::point(r.clone()),
            Theta::Schlumprecht => schlumprecht_theta(level, precision),
        }
    }

    pub fn as_rational(&self, level: usize) -> Option<Rational> {
        match self {
            Theta::Rational(r) => Some(r.clone()),
            Theta::Schlumprecht => schlumprecht_theta(level, 1).as_point().cloned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub family: AdmissibilityFamily,
    pub theta: Theta,
}

/// Levels beyond the explicitly stored ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelTail {
    /// Level `l` is `(card_at_most(l), 1/log2(l+1))` for every `l` past the stored levels.
    Schlumprecht,
}

/// A level that survived truncation for a given support size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveLevel {
    /// 1-based level position in the (possibly infinite) sequence.
    pub index: usize,
    pub family: AdmissibilityFamily,
    pub theta: Theta,
}

/// Sequence of `(family, θ)` pairs defining a mixed Tsirelson space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedSpaceSpec {
    pub name: String,
    pub levels: Vec<Level>,
    pub tail: Option<LevelTail>,
}

/// Describes how [`MixedSpaceSpec::levels_needed`] truncates the level sequence.
pub const TRUNCATION_RULE: &str = "for support size N: card_at_most(n) acts as card_at_most(min(n, N)); \
levels whose family admits no sequence of two or more blocks are dropped; \
among levels with the same effective family only the largest theta is kept; \
the schlumprecht tail contributes levels 1..=N only";

impl MixedSpaceSpec {
    /// Validates `0 < θ < 1` for rational levels and that some level exists.
    pub fn new(name: impl Into<String>, levels: Vec<Level>, tail: Option<LevelTail>) -> Result<Self> {
        let name = name.into();
        if levels.is_empty() && tail.is_none() {
            return Err(Error::InvalidSpec("a space needs at least one level".into()));
        }
        for (i, l) in levels.iter().enumerate() {
            if let Theta::Rational(t) = &l.theta {
                if !t.is_positive() || *t >= Rational::one() {
                    return Err(Error::InvalidSpec(format!(
                        "level {}: theta must satisfy 0 < theta < 1, got {t}",
                        i + 1
                    )));
                }
            }
        }
        Ok(MixedSpaceSpec { name, levels, tail })
    }

    /// Single level `(schreier1, 1/2)`: the Figiel–Johnson space.
    pub fn tsirelson() -> Self {
        MixedSpaceSpec {
            name: "tsirelson".into(),
            levels: vec![Level {
                family: AdmissibilityFamily::Schreier1,
                theta: Theta::Rational(Rational::new(1, 2)),
            }],
            tail: None,
        }
    }

    /// `(card_at_most(l), 1/log2(l+1))` for all `l >= 1`.
    pub fn schlumprecht() -> Self {
        MixedSpaceSpec {
            name: "schlumprecht".into(),
            levels: Vec::new(),
            tail: Some(LevelTail::Schlumprecht),
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "tsirelson" => Some(Self::tsirelson()),
            "schlumprecht" => Some(Self::schlumprecht()),
            _ => None,
        }
    }

    /// Whether every level that can matter has a rational coefficient.
    pub fn is_rational(&self) -> bool {
        self.tail.is_none() && self.levels.iter().all(|l| matches!(l.theta, Theta::Rational(_)))
    }

    /// The level at 1-based position `l`, including tail levels.
    pub fn level(&self, l: usize) -> Option<Level> {
        if l == 0 {
            return None;
        }
        if let Some(level) = self.levels.get(l - 1) {
            return Some(level.clone());
        }
        self.tail.map(|LevelTail::Schlumprecht| Level {
                family: AdmissibilityFamily::CardinalityAtMost(l),
                theta: Theta::Schlumprecht,
            })
    }

    /// Finite list of levels that can affect any norm computation on vectors
    /// (or functionals) with at most `support_size` support points. See
    /// [`TRUNCATION_RULE`].
    pub fn levels_needed(&self, support_size: usize) -> Vec<ActiveLevel> {
        let n = support_size.max(1);
        let count = match self.tail {
            Some(_) => self.levels.len().max(n),
            None => self.levels.len(),
        };
        let mut kept: Vec<ActiveLevel> = Vec::new();
        for index in 1..=count {
            let level = self.level(index).expect("index within stored levels or tail");
            let family = level.family.effective(n);
            if !family.admits_multiple_blocks() {
                continue;
            }
            let candidate = ActiveLevel {
                index,
                family,
                theta: level.theta,
            };
            match kept.iter().position(|k| k.family == candidate.family) {
                None => kept.push(candidate),
                Some(pos) => match theta_order(&kept[pos], &candidate) {
                    Some(std::cmp::Ordering::Less) => kept[pos] = candidate,
                    Some(_) => {}
                    None => kept.push(candidate),
                },
            }
        }
        kept
    }

    /// Rational specification with each level's θ replaced by the lower or
    /// upper end of its enclosure at `precision`, truncated for `support_size`.
    pub fn rational_bound(&self, support_size: usize, precision: u32, upper: bool) -> MixedSpaceSpec {
        let levels = self
            .levels_needed(support_size)
            .into_iter()
            .map(|a| {
                let enc = a.theta.enclosure(a.index, precision);
                let t = if upper { enc.hi().clone() } else { enc.lo().clone() };
                Level {
                    family: a.family,
                    theta: Theta::Rational(t),
                }
            })
            .collect();
        MixedSpaceSpec {
            name: format!("{}[{}@{}]", self.name, if upper { "hi" } else { "lo" }, precision),
            levels,
            tail: None,
        }
    }
}

/// Orders two levels by θ, deciding irrational comparisons by refinement.
fn theta_order(a: &ActiveLevel, b: &ActiveLevel) -> Option<std::cmp::Ordering> {
    if let (Theta::Schlumprecht, Theta::Schlumprecht) = (&a.theta, &b.theta) {
        // 1/log2(l+1) is strictly decreasing in l.
        return Some(b.index.cmp(&a.index));
    }
    let mut p = 16;
    while p <= 256 {
        let ord = a.theta.enclosure(a.index, p).compare(&b.theta.enclosure(b.index, p));
        if ord.is_some() {
            return ord;
        }
        p *= 2;
    }
    None
}

/// Serializable space description: `name`, `levels` (each a `family` and a
/// `theta`), and an optional `tail`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub name: String,
    #[serde(default)]
    pub levels: Vec<LevelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    pub family: FamilyConfig,
    /// `"p/q"` or `"schlumprecht"`.
    pub theta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyConfig {
    /// `"schreier1"`.
    Named(String),
    CardAtMost { card_at_most: usize },
    Explicit { explicit: Vec<Vec<usize>> },
}

impl SpaceConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("space config: {e}")))
    }

    pub fn to_spec(&self) -> Result<MixedSpaceSpec> {
        let mut levels = Vec::with_capacity(self.levels.len());
        for lc in &self.levels {
            let family = match &lc.family {
                FamilyConfig::Named(s) if s == "schreier1" => AdmissibilityFamily::Schreier1,
                FamilyConfig::Named(s) => {
                    return Err(Error::InvalidSpec(format!("unknown family `{s}`")))
                }
                FamilyConfig::CardAtMost { card_at_most } if *card_at_most >= 1 => {
                    AdmissibilityFamily::CardinalityAtMost(*card_at_most)
                }
                FamilyConfig::CardAtMost { .. } => {
                    return Err(Error::InvalidSpec("card_at_most needs n >= 1".into()))
                }
                FamilyConfig::Explicit { explicit } => {
                    AdmissibilityFamily::ExplicitFinite(ExplicitFamily::new(explicit.clone())?)
                }
            };
            let theta = match lc.theta.as_str() {
                "schlumprecht" => Theta::Schlumprecht,
                t => Theta::Rational(
                    t.parse()
                        .map_err(|_| Error::InvalidSpec(format!("invalid theta `{t}`")))?,
                ),
            };
            levels.push(Level { family, theta });
        }
        let tail = match self.tail.as_deref() {
            None => None,
            Some("schlumprecht") => Some(LevelTail::Schlumprecht),
            Some(t) => return Err(Error::InvalidSpec(format!("unknown tail `{t}`"))),
        };
        MixedSpaceSpec::new(self.name.clone(), levels, tail)
    }

    pub fn from_spec(spec: &MixedSpaceSpec) -> Self {
        SpaceConfig {
            name: spec.name.clone(),
            levels: spec
                .levels
                .iter()
                .map(|l| LevelConfig {
                    family: match &l.family {
                        AdmissibilityFamily::Schreier1 => FamilyConfig::Named("schreier1".into()),
                        AdmissibilityFamily::CardinalityAtMost(n) => {
                            FamilyConfig::CardAtMost { card_at_most: *n }
                        }
                        AdmissibilityFamily::ExplicitFinite(e) => FamilyConfig::Explicit {
                            explicit: e.members.clone(),
                        },
                    },
                    theta: match &l.theta {
                        Theta::Rational(r) => r.to_string(),
                        Theta::Schlumprecht => "schlumprecht".into(),
                    },
                })
                .collect(),
            tail: spec.tail.map(|LevelTail::Schlumprecht| "schlumprecht".to_string()),
        }
    }
}
