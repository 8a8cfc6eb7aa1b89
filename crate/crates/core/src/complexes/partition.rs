use serde::{Deserialize, Serialize};

use super::subset::{Subset, MAX_N};
use crate::error::{Error, Result};

/// A partition of a nonempty subset of `[n]` into nonempty parts, sorted by
/// least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct Partition {
    n: usize,
    parts: Vec<Subset>,
}

#[derive(Deserialize)]
struct RawPartition {
    n: usize,
    parts: Vec<Subset>,
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;
    fn try_from(r: RawPartition) -> Result<Self> {
        Partition::new(r.n, r.parts)
    }
}

impl Partition {
    pub fn new(n: usize, mut parts: Vec<Subset>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidPartition(format!("n = {n} unsupported")));
        }
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        let mut seen = Subset::EMPTY;
        for &p in &parts {
            if p.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            if !p.within(n) {
                return Err(Error::InvalidPartition(format!("part {p:?} outside [1, {n}]")));
            }
            if p.intersects(seen) {
                return Err(Error::InvalidPartition(format!("part {p:?} overlaps another part")));
            }
            seen = seen.union(p);
        }
        parts.sort_by_key(|p| p.min_element());
        Ok(Partition { n, parts })
    }

    pub fn from_lists(n: usize, parts: &[&[usize]]) -> Result<Self> {
        let parts = parts
            .iter()
            .map(|p| Subset::from_elements(n, p))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(n, parts)
    }

    /// All-singletons partition of `ground`.
    pub fn singletons(n: usize, ground: Subset) -> Result<Self> {
        Partition::new(n, ground.elements().map(Subset::singleton).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Subset] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn ground(&self) -> Subset {
        self.parts.iter().fold(Subset::EMPTY, |a, &p| a.union(p))
    }

    pub fn is_total(&self) -> bool {
        self.ground() == Subset::full(self.n)
    }

    pub fn part_containing(&self, i: usize) -> Option<Subset> {
        self.parts.iter().copied().find(|p| p.contains(i))
    }

    /// Whether every part of `self` lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Result<bool> {
        if self.n != coarser.n || self.ground() != coarser.ground() {
            return Err(Error::GroundMismatch(format!("{self:?} vs {coarser:?}")));
        }
        Ok(self
            .parts
            .iter()
            .all(|p| coarser.parts.iter().any(|q| p.is_subset_of(*q))))
    }
}

/// Partitions of `ground` with at least `min_parts` parts, in restricted growth
/// string order over the ascending elements of `ground`.
pub struct Partitions {
    n: usize,
    elems: Vec<usize>,
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    min_parts: usize,
    done: bool,
}

pub fn enumerate_partitions(n: usize, ground: Subset, min_parts: usize) -> Result<Partitions> {
    if n == 0 || n > MAX_N || !ground.within(n) {
        return Err(Error::InvalidSubset(format!("ground {ground:?} for n = {n}")));
    }
    if ground.is_empty() {
        return Err(Error::InvalidSubset("empty ground set".into()));
    }
    let elems: Vec<usize> = ground.elements().collect();
    let k = elems.len();
    Ok(Partitions {
        n,
        elems,
        rgs: vec![0; k],
        maxes: vec![0; k],
        min_parts,
        done: false,
    })
}

impl Partitions {
    fn current(&self) -> Partition {
        let blocks = self.maxes.last().map_or(0, |m| m + 1);
        let mut parts = vec![Subset::EMPTY; blocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            parts[b] = parts[b].union(Subset::singleton(self.elems[i]));
        }
        Partition {
            n: self.n,
            parts,
        }
    }

    fn advance(&mut self) {
        let k = self.rgs.len();
        for i in (1..k).rev() {
            if self.rgs[i] <= self.maxes[i - 1] {
                self.rgs[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.rgs[i]);
                for j in i + 1..k {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Partition;
    fn next(&mut self) -> Option<Partition> {
        while !self.done {
            let blocks = self.maxes.last().map_or(0, |m| m + 1);
            let out = (blocks >= self.min_parts).then(|| self.current());
            self.advance();
            if out.is_some() {
                return out;
            }
        }
        None
    }
}
