//! Successive block partitions of an ordered support.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of nonempty index sets `E_1 < E_2 < ... < E_k`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// Validates successiveness (`max E_i < min E_{i+1}`) and nonemptiness.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("a partition needs at least one block".into()));
        }
        for b in blocks.iter_mut() {
            b.sort_unstable();
            b.dedup();
            if b.is_empty() {
                return Err(Error::InvalidInput("empty block".into()));
            }
            if b[0] == 0 {
                return Err(Error::InvalidInput("indices start at 1".into()));
            }
        }
        for w in blocks.windows(2) {
            if w[0].last() >= w[1].first() {
                return Err(Error::InvalidInput(format!(
                    "blocks {:?} and {:?} are not successive",
                    w[0], w[1]
                )));
            }
        }
        Ok(BlockPartition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `(min E_i, max E_i)` for each block.
    pub fn bounds(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .map(|b| (b[0], *b.last().unwrap()))
            .collect()
    }

    pub fn block_set(&self, i: usize) -> BTreeSet<usize> {
        self.blocks[i].iter().copied().collect()
    }

    /// Union of all blocks.
    pub fn covered(&self) -> BTreeSet<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

impl TryFrom<Vec<Vec<usize>>> for BlockPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        BlockPartition::new(blocks)
    }
}

impl From<BlockPartition> for Vec<Vec<usize>> {
    fn from(p: BlockPartition) -> Self {
        p.blocks
    }
}

impl fmt::Debug for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, b) in self.blocks.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{{")?;
            for (m, i) in b.iter().enumerate() {
                if m > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Iterator over the `(k-1)`-subsets of cut positions `1..n`, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Cuts {
    n: usize,
    cuts: Vec<usize>,
    done: bool,
}

impl Cuts {
    pub fn new(n: usize, k: usize) -> Self {
        let done = k == 0 || k > n;
        let cuts = if done { Vec::new() } else { (1..k).collect() };
        Cuts { n, cuts, done }
    }
}

impl Iterator for Cuts {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cuts.clone();
        // Advance to the next combination of cut points in 1..n.
        let m = self.cuts.len();
        let mut i = m;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cuts[i] < self.n - (m - i) {
                self.cuts[i] += 1;
                for j in i + 1..m {
                    self.cuts[j] = self.cuts[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Partitions of the ordered support `support` into exactly `k` consecutive
/// blocks. Yields nothing when `k == 0` or `k > support.len()`.
pub fn enumerate_partitions(support: &[usize], k: usize) -> impl Iterator<Item = BlockPartition> + '_ {
    debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
    Cuts::new(support.len(), k).map(move |cuts| {
        let mut blocks = Vec::with_capacity(k);
        let mut start = 0;
        for c in cuts.into_iter().chain(std::iter::once(support.len())) {
            blocks.push(support[start..c].to_vec());
            start = c;
        }
        BlockPartition { blocks }
    })
}

/// Consecutive-block partitions as position ranges `(from, to)` (inclusive,
/// 0-based into the support), for all `k` in `2..=n`.
pub(crate) fn position_partitions(n: usize, k: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    Cuts::new(n, k).map(move |cuts| {
        let mut out = Vec::with_capacity(k);
        let mut start = 0;
        for c in cuts.into_iter().chain(std::iter::once(n)) {
            out.push((start, c - 1));
            start = c;
        }
        out
    })
}
