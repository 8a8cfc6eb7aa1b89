//! Subsets, set partitions and maximally biconnected simplicial complexes on `[n]`.

mod partition;
mod subset;

pub use partition::{enumerate_partitions, Partition, Partitions};
pub use subset::{Subset, MAX_N};

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Largest `n` for which complexes are stored as face bitsets.
pub const MAX_COMPLEX_N: usize = 9;

/// The set of faces of a complex on `[n]`, one bit per subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FaceSet([u64; 8]);

impl FaceSet {
    pub fn contains(&self, s: Subset) -> bool {
        let b = s.0 as usize;
        self.0[b >> 6] >> (b & 63) & 1 == 1
    }

    pub fn insert(&mut self, s: Subset) {
        let b = s.0 as usize;
        self.0[b >> 6] |= 1 << (b & 63);
    }

    pub fn union_with(&mut self, o: &FaceSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// All subsets of `s`, including the empty set.
    pub fn down(s: Subset) -> FaceSet {
        let mut f = FaceSet::default();
        let mut t = s.0;
        loop {
            f.insert(Subset(t));
            if t == 0 {
                break;
            }
            t = (t - 1) & s.0;
        }
        f
    }

    pub fn members(&self, n: usize) -> impl Iterator<Item = Subset> + '_ {
        (0..1u32 << n).map(Subset).filter(|&s| self.contains(s))
    }

    /// Inclusion-maximal members, in subset order.
    pub fn maximal(&self, n: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = self
            .members(n)
            .filter(|&s| {
                (1..=n).all(|i| s.contains(i) || !self.contains(s.union(Subset::singleton(i))))
            })
            .collect();
        out.sort();
        out
    }
}

/// A simplicial complex on `[n]` given by its maximal faces.
///
/// The void complex has no faces. The complex `{∅}` is stored with the single
/// maximal face `∅`; every other complex has only nonempty maximal faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct Complex {
    n: usize,
    maximal_faces: Vec<Subset>,
}

#[derive(Deserialize)]
struct RawComplex {
    n: usize,
    maximal_faces: Vec<Subset>,
}

impl TryFrom<RawComplex> for Complex {
    type Error = Error;
    fn try_from(r: RawComplex) -> Result<Self> {
        Complex::new(r.n, r.maximal_faces)
    }
}

impl Complex {
    /// Build from an antichain of faces.
    pub fn new(n: usize, mut faces: Vec<Subset>) -> Result<Self> {
        if n == 0 || n > MAX_COMPLEX_N {
            return Err(Error::InvalidComplex(format!("n = {n} unsupported")));
        }
        faces.sort();
        faces.dedup();
        for (i, &a) in faces.iter().enumerate() {
            if !a.within(n) {
                return Err(Error::InvalidComplex(format!("face {a:?} outside [1, {n}]")));
            }
            for (j, &b) in faces.iter().enumerate() {
                if i != j && a.is_subset_of(b) {
                    return Err(Error::InvalidComplex(format!("{a:?} is contained in {b:?}")));
                }
            }
        }
        Ok(Complex {
            n,
            maximal_faces: faces,
        })
    }

    /// The complex generated by arbitrary faces.
    pub fn generated_by(n: usize, faces: &[Subset]) -> Result<Self> {
        if n == 0 || n > MAX_COMPLEX_N {
            return Err(Error::InvalidComplex(format!("n = {n} unsupported")));
        }
        if let Some(f) = faces.iter().find(|f| !f.within(n)) {
            return Err(Error::InvalidComplex(format!("face {f:?} outside [1, {n}]")));
        }
        let mut fs = FaceSet::default();
        for &f in faces {
            fs.union_with(&FaceSet::down(f));
        }
        Ok(Complex::from_faceset(n, &fs))
    }

    pub fn from_lists(n: usize, faces: &[&[usize]]) -> Result<Self> {
        let faces = faces
            .iter()
            .map(|f| Subset::from_elements(n, f))
            .collect::<Result<Vec<_>>>()?;
        Complex::new(n, faces)
    }

    pub(crate) fn from_faceset(n: usize, fs: &FaceSet) -> Self {
        Complex {
            n,
            maximal_faces: fs.maximal(n),
        }
    }

    pub fn void(n: usize) -> Self {
        Complex {
            n,
            maximal_faces: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn maximal_faces(&self) -> &[Subset] {
        &self.maximal_faces
    }

    pub fn is_void(&self) -> bool {
        self.maximal_faces.is_empty()
    }

    /// Faces including `∅` whenever the complex is not void.
    pub fn faceset(&self) -> FaceSet {
        let mut fs = FaceSet::default();
        for &f in &self.maximal_faces {
            fs.union_with(&FaceSet::down(f));
        }
        fs
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.maximal_faces.iter().any(|f| s.is_subset_of(*f))
    }

    /// Nonempty faces in subset order.
    pub fn faces(&self) -> Vec<Subset> {
        let fs = self.faceset();
        let mut v: Vec<Subset> = fs.members(self.n).filter(|s| !s.is_empty()).collect();
        v.sort();
        v
    }
}

/// No two faces (possibly equal) cover `[n]`.
pub fn is_biconnected(c: &Complex) -> bool {
    let full = Subset::full(c.n);
    c.maximal_faces
        .iter()
        .all(|a| c.maximal_faces.iter().all(|b| a.union(*b) != full))
}

/// Every face has at most `n - 2` elements.
pub fn is_full(c: &Complex) -> bool {
    c.maximal_faces.iter().all(|f| f.len() + 2 <= c.n)
}

/// Biconnected, and exactly one of `I`, `[n] \ I` is a face for every nonempty proper `I`.
pub fn is_maximal_biconnected(c: &Complex) -> bool {
    if !is_biconnected(c) {
        return false;
    }
    let fs = c.faceset();
    let n = c.n;
    let full = Subset::full(n);
    (1..full.0).all(|b| fs.contains(Subset(b)) != fs.contains(Subset(full.0 ^ b)))
}

/// Maximality checked from the definition: adding any missing subset, with its
/// closure, breaks biconnectedness.
pub fn is_maximal_biconnected_by_probing(c: &Complex) -> bool {
    if !is_biconnected(c) {
        return false;
    }
    let n = c.n;
    (1..Subset::full(n).0).map(Subset).all(|s| {
        if c.contains(s) {
            return true;
        }
        let mut faces = c.maximal_faces.clone();
        faces.push(s);
        let bigger = Complex::generated_by(n, &faces).expect("valid faces");
        !is_biconnected(&bigger)
    })
}

/// Complementary pairs `{R, [n] \ R}` keyed by the side `R` avoiding `n`,
/// ordered by size and then lexicographically.
fn pair_representatives(n: usize) -> Vec<Subset> {
    let mut reps: Vec<Subset> = (1..1u32 << (n - 1)).map(Subset).collect();
    reps.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    reps
}

/// Depth-first enumeration of maximally biconnected complexes on `[n]`.
///
/// Each complementary pair not yet decided by downward closure is split into
/// two branches, the side avoiding `n` first. No branch ever dead-ends, so
/// every leaf is a distinct complex.
pub struct MaxBiconnected {
    n: usize,
    full_only: bool,
    reps: Vec<Subset>,
    downs: Vec<FaceSet>,
    stack: Vec<(usize, FaceSet)>,
}

impl MaxBiconnected {
    fn new(n: usize, full_only: bool) -> Self {
        let downs = (0..1u32 << n).map(|b| FaceSet::down(Subset(b))).collect();
        MaxBiconnected {
            n,
            full_only,
            reps: pair_representatives(n),
            downs,
            stack: vec![(0, FaceSet::down(Subset::EMPTY))],
        }
    }

    /// Next complex as a face bitset, skipping the conversion to maximal faces.
    pub fn next_faceset(&mut self) -> Option<FaceSet> {
        let full = Subset::full(self.n).0;
        while let Some((mut k, state)) = self.stack.pop() {
            while k < self.reps.len() {
                let r = self.reps[k];
                if state.contains(r) || state.contains(Subset(full ^ r.0)) {
                    k += 1;
                } else {
                    break;
                }
            }
            if k == self.reps.len() {
                if self.full_only && (1..=self.n).any(|i| !state.contains(Subset::singleton(i))) {
                    continue;
                }
                return Some(state);
            }
            let r = self.reps[k].0 as usize;
            let mut take_other = state;
            take_other.union_with(&self.downs[full as usize ^ r]);
            let mut take_rep = state;
            take_rep.union_with(&self.downs[r]);
            self.stack.push((k + 1, take_other));
            self.stack.push((k + 1, take_rep));
        }
        None
    }
}

impl Iterator for MaxBiconnected {
    type Item = Complex;
    fn next(&mut self) -> Option<Complex> {
        let n = self.n;
        self.next_faceset().map(|fs| Complex::from_faceset(n, &fs))
    }
}

pub fn enumerate_max_biconnected(n: usize, full_only: bool) -> Result<MaxBiconnected> {
    check_range("n", n, 2, MAX_COMPLEX_N)?;
    Ok(MaxBiconnected::new(n, full_only))
}

pub fn count_max_biconnected(n: usize, full_only: bool) -> Result<u64> {
    let mut it = enumerate_max_biconnected(n, full_only)?;
    let mut c = 0u64;
    while it.next_faceset().is_some() {
        c += 1;
    }
    Ok(c)
}

/// Count biconnected complexes on `[m]` including the void complex and `{∅}`.
///
/// Nonempty subsets are visited by size; a subset may join the complex when
/// all its facets already have and its complement has not.
pub fn count_biconnected(m: usize) -> Result<u64> {
    check_range("m", m, 1, MAX_COMPLEX_N - 1)?;
    let full = (1u32 << m) - 1;
    let mut order: Vec<u32> = (1..=full).filter(|&b| b != full).collect();
    order.sort_by(|a, b| a.count_ones().cmp(&b.count_ones()).then(Subset(*a).cmp(&Subset(*b))));

    fn go(order: &[u32], k: usize, full: u32, inside: &mut Vec<bool>) -> u64 {
        if k == order.len() {
            return 1;
        }
        let s = order[k];
        let mut total = go(order, k + 1, full, inside);
        let closed = s.count_ones() == 1 || {
            let mut b = s;
            let mut ok = true;
            while b != 0 {
                let low = b & b.wrapping_neg();
                if !inside[(s ^ low) as usize] {
                    ok = false;
                    break;
                }
                b ^= low;
            }
            ok
        };
        if closed && !inside[(full ^ s) as usize] {
            inside[s as usize] = true;
            total += go(order, k + 1, full, inside);
            inside[s as usize] = false;
        }
        total
    }

    let mut inside = vec![false; 1 << m];
    Ok(go(&order, 0, full, &mut inside) + 1)
}

/// Both counts of maximally biconnected complexes on `[n]`: by enumeration, and
/// through biconnected complexes on `[n - 1]`.
pub fn complex_counts_two_ways(n: usize) -> Result<(u64, u64)> {
    check_range("n", n, 2, MAX_COMPLEX_N)?;
    Ok((count_max_biconnected(n, false)?, count_biconnected(n - 1)?))
}

/// The link of `n`: faces `J` of `[n - 1]` with `J ∪ {n}` a face.
pub fn max_biconnected_to_biconnected(c: &Complex) -> Result<Complex> {
    if !is_maximal_biconnected(c) {
        return Err(Error::NotMaximalBiconnected);
    }
    let n = c.n;
    let top = Subset::singleton(n);
    if !c.contains(top) {
        return Ok(Complex::void(n - 1));
    }
    let faces: Vec<Subset> = c
        .maximal_faces
        .iter()
        .filter(|f| f.contains(n))
        .map(|f| f.minus(top))
        .collect();
    let mut fs = FaceSet::default();
    for f in faces {
        fs.union_with(&FaceSet::down(f));
    }
    Ok(Complex::from_faceset(n - 1, &fs))
}

/// Inverse of [`max_biconnected_to_biconnected`].
pub fn biconnected_to_max_biconnected(c: &Complex) -> Result<Complex> {
    if !is_biconnected(c) {
        return Err(Error::Precondition("complex is not biconnected".into()));
    }
    let m = c.n;
    let n = m + 1;
    if n > MAX_COMPLEX_N {
        return Err(Error::InvalidComplex(format!("n = {n} unsupported")));
    }
    let link = c.faceset();
    let small = Subset::full(m);
    let top = Subset::singleton(n);
    let mut fs = FaceSet::default();
    for b in 0..=small.0 {
        let s = Subset(b);
        if !s.is_empty() && !link.contains(Subset(small.0 ^ b)) {
            fs.insert(s);
        }
        if link.contains(s) {
            fs.insert(s.union(top));
        }
    }
    Ok(Complex::from_faceset(n, &fs))
}
