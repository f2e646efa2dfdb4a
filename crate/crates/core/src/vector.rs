//! Finitely supported vectors over the exact rationals.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Sparse vector indexed by positive integers. Entries are kept sorted by
/// index and zero values are never stored, so the support is exactly the key
/// set and equal vectors compare and hash equal.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinVec {
    entries: Vec<(usize, Rational)>,
}

impl FinVec {
    pub fn zero() -> Self {
        FinVec::default()
    }

    /// The basis vector `e_k`.
    pub fn basis(k: usize) -> Self {
        assert!(k >= 1, "indices are 1-based");
        FinVec {
            entries: vec![(k, Rational::one())],
        }
    }

    /// Builds from arbitrary `(index, value)` pairs. Repeated indices are
    /// summed, zeros dropped. Index 0 is rejected.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut entries: Vec<(usize, Rational)> = pairs.into_iter().collect();
        if entries.iter().any(|(i, _)| *i == 0) {
            return Err(Error::InvalidInput("vector indices start at 1".into()));
        }
        entries.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match merged.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        Ok(FinVec { entries: merged })
    }

    /// Sum of the basis vectors over `indices`.
    pub fn ones<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        FinVec::from_pairs(indices.into_iter().map(|i| (i, Rational::one())))
            .expect("1-based indices")
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.iter().map(|(i, _)| *i).collect()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Rational {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .map(|pos| self.entries[pos].1.clone())
            .unwrap_or_default()
    }

    /// Agrees with `self` on `set` and vanishes elsewhere.
    pub fn restrict(&self, set: &BTreeSet<usize>) -> FinVec {
        FinVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| set.contains(i))
                .cloned()
                .collect(),
        }
    }

    /// Restriction to the indices in `lo..=hi`.
    pub fn restrict_range(&self, lo: usize, hi: usize) -> FinVec {
        FinVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| (lo..=hi).contains(i))
                .cloned()
                .collect(),
        }
    }

    /// Restriction to the support positions `from..=to` (0-based positions
    /// into the sorted support, not indices).
    pub fn run(&self, from: usize, to: usize) -> FinVec {
        FinVec {
            entries: self.entries[from..=to].to_vec(),
        }
    }

    pub fn ell1_norm(&self) -> Rational {
        self.entries.iter().map(|(_, v)| v.abs()).sum()
    }

    pub fn sup_norm(&self) -> Rational {
        self.entries
            .iter()
            .map(|(_, v)| v.abs())
            .max()
            .unwrap_or_default()
    }

    /// Coordinatewise absolute value.
    pub fn abs(&self) -> FinVec {
        FinVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.abs())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> FinVec {
        if c.is_zero() {
            return FinVec::zero();
        }
        FinVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &FinVec) -> FinVec {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y.clone()));
                        b.next();
                    } else {
                        let s = x + y;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y.clone()));
                    b.next();
                }
                (None, None) => break,
            }
        }
        FinVec { entries: out }
    }

    pub fn sub(&self, other: &FinVec) -> FinVec {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `|self_i| <= |other_i|` for every index.
    pub fn abs_dominated_by(&self, other: &FinVec) -> bool {
        self.entries
            .iter()
            .all(|(i, v)| v.abs() <= other.get(*i).abs())
    }
}

/// `sum_i x_i y_i`.
pub fn pairing(x: &FinVec, y: &FinVec) -> Rational {
    let mut acc = Rational::zero();
    let (mut a, mut b) = (x.entries.iter().peekable(), y.entries.iter().peekable());
    while let (Some((i, u)), Some((j, v))) = (a.peek(), b.peek()) {
        if i < j {
            a.next();
        } else if j < i {
            b.next();
        } else {
            acc += u * v;
            a.next();
            b.next();
        }
    }
    acc
}

impl fmt::Display for FinVec {
    /// Vector literal form, e.g. `3:1 4:1 5:-1/2`; the zero vector is empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (i, v)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}:{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("FinVec(0)")
        } else {
            write!(f, "FinVec({self})")
        }
    }
}

impl FromStr for FinVec {
    type Err = Error;

    /// Parses whitespace-separated `index:value` pairs. Duplicate indices are
    /// rejected rather than summed.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut seen = BTreeSet::new();
        for tok in s.split_whitespace() {
            let (i, v) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `index:value`, got `{tok}`")))?;
            let i: usize = i
                .parse()
                .map_err(|_| Error::Parse(format!("invalid index in `{tok}`")))?;
            if i == 0 {
                return Err(Error::Parse(format!("indices start at 1 (`{tok}`)")));
            }
            if !seen.insert(i) {
                return Err(Error::Parse(format!("duplicate index {i}")));
            }
            pairs.push((i, v.parse::<Rational>()?));
        }
        FinVec::from_pairs(pairs)
    }
}

impl Serialize for FinVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FinVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
