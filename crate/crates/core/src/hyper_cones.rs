//! Orbit cones `ω_{P,K} = ω_P + cone(-e_k : k ∈ K)` of the hyperpolygon space,
//! the bunches `Ψ_Δ` built from complexes, and the census of resolutions.

use serde::{Deserialize, Serialize};

use crate::bunches::projectivity_witness;
use crate::complexes::{
    enumerate_max_biconnected, is_full, is_maximal_biconnected, Complex, FaceSet, MaxBiconnected, Partition,
    Subset,
};
use crate::error::{check_range, Error, Result};
use crate::polygon_cones::{eta, PolygonCone};
use crate::ratgeom::{ConeV, RatVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HyperCone {
    partition: Partition,
    k: Subset,
}

impl HyperCone {
    pub fn new(partition: Partition, k: Subset) -> Result<Self> {
        if !k.within(partition.n()) {
            return Err(Error::InvalidSubset(format!("K = {k:?} outside [1, {}]", partition.n())));
        }
        Ok(HyperCone { partition, k })
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn k(&self) -> Subset {
        self.k
    }

    pub fn to_cone_v(&self) -> ConeV {
        ConeV::from_ints(self.n(), &generators_hyper(self)).expect("generators are nonzero")
    }
}

/// Polygon generators followed by `-e_k` for `k ∈ K`.
pub fn generators_hyper(c: &HyperCone) -> Vec<Vec<i64>> {
    let n = c.n();
    let mut g = PolygonCone::new(c.partition.clone()).generators();
    for k in c.k.elements() {
        let mut v = vec![0; n];
        v[k - 1] = -1;
        g.push(v);
    }
    g
}

fn parts_meeting(p: &Partition, k: Subset) -> usize {
    p.parts().iter().filter(|j| j.intersects(k)).count()
}

fn no_single_hits(p: &Partition, k: Subset) -> bool {
    p.parts().iter().all(|j| j.intersection(k).len() != 1)
}

/// Orbit data of the hyperpolygon space: at least four parts meet `K`, or no
/// part meets `K` in exactly one element.
#[allow(non_snake_case)]
pub fn in_omega_X(p: &Partition, k: Subset) -> bool {
    parts_meeting(p, k) >= 4 || no_single_hits(p, k)
}

/// Orbit data of points with trivial stabilizer.
#[allow(non_snake_case)]
pub fn in_omega_X_free(p: &Partition, k: Subset) -> bool {
    if !p.is_total() {
        return false;
    }
    parts_meeting(p, k) >= 4
        || (no_single_hits(p, k) && p.len() >= 3)
        || (no_single_hits(p, k) && p.len() >= 2 && !k.is_empty())
}

pub fn is_free(c: &HyperCone) -> bool {
    in_omega_X_free(&c.partition, c.k)
}

fn require_free(c: &HyperCone) -> Result<()> {
    if !is_free(c) {
        return Err(Error::NotFree(format!("{c:?}")));
    }
    Ok(())
}

/// The corner cone `C_i = cone(e_i, e_i + e_j : j ≠ i)`; `C_0` for `i = 0`.
pub fn corner_cone(n: usize, i: usize) -> Result<ConeV> {
    check_range("i", i, 0, n)?;
    if i == 0 {
        return Ok(crate::polygon_cones::c0(n)?.to_cone_v());
    }
    let mut rows = vec![crate::polygon_cones::unit(n, i)];
    for j in (1..=n).filter(|&j| j != i) {
        let mut v = crate::polygon_cones::unit(n, i);
        v[j - 1] = 1;
        rows.push(v);
    }
    ConeV::from_ints(n, &rows)
}

/// `C_i ⊆ ω_{P,K}`: `K` meets the complement of the part containing `i`.
pub fn contains_corner(c: &HyperCone, i: usize) -> Result<bool> {
    require_free(c)?;
    check_range("i", i, 1, c.n())?;
    let part = c.partition.part_containing(i).expect("partition is total");
    Ok(c.k.intersects(part.complement(c.n())))
}

/// `F ⊆ ω_{P,K}`: `K` is nonempty and lies inside no single part.
#[allow(non_snake_case)]
pub fn contains_F(c: &HyperCone) -> Result<bool> {
    require_free(c)?;
    Ok(!c.k.is_empty() && !c.partition.parts().iter().any(|&j| c.k.is_subset_of(j)))
}

/// `ω_{P,K} ∩ C_0`: `η_I` when `∅ ≠ K ⊆ I ∈ P`, and `ω_P` when `K = ∅`.
pub fn meet_c0(c: &HyperCone) -> Result<PolygonCone> {
    if contains_F(c)? {
        return Err(Error::Precondition("the cone contains F, so it meets C_0 in all of C_0".into()));
    }
    if c.k.is_empty() {
        return Ok(PolygonCone::new(c.partition.clone()));
    }
    let part = c
        .partition
        .parts()
        .iter()
        .copied()
        .find(|&j| c.k.is_subset_of(j))
        .expect("K lies in a part");
    eta(c.n(), part)
}

/// Membership of a free cone in `Ψ_Δ`.
pub fn psi_membership(d: &Complex, c: &HyperCone) -> Result<bool> {
    if !is_maximal_biconnected(d) {
        return Err(Error::NotMaximalBiconnected);
    }
    require_free(c)?;
    if d.n() != c.n() {
        return Err(Error::GroundMismatch(format!("n = {} vs {}", d.n(), c.n())));
    }
    let n = d.n();
    if !is_full(d) {
        let face = d.maximal_faces()[0];
        let i = face.complement(n).min_element().expect("a simplex boundary misses one vertex");
        return contains_corner(c, i);
    }
    if contains_F(c)? {
        return Ok(true);
    }
    let fs = d.faceset();
    if c.k.is_empty() {
        return Ok(c.partition.len() >= 3 && c.partition.parts().iter().all(|&j| fs.contains(j)));
    }
    let part = c
        .partition
        .parts()
        .iter()
        .copied()
        .find(|&j| c.k.is_subset_of(j))
        .expect("K lies in a part");
    Ok(part.len() + 2 <= n && fs.contains(part))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Projective,
    NonProjective,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionRecord {
    pub complex: Complex,
    pub kind: Kind,
    pub witness: Option<RatVector>,
}

/// `θ_i = n` and `θ_j = 1` otherwise: generic and inside `C_i`.
fn corner_witness(n: usize, i: usize) -> RatVector {
    let v: Vec<i64> = (1..=n).map(|j| if j == i { n as i64 } else { 1 }).collect();
    RatVector::from_ints(&v)
}

fn record_for(n: usize, fs: &FaceSet) -> ResolutionRecord {
    let complex = Complex::from_faceset(n, fs);
    if !is_full(&complex) {
        let face = complex.maximal_faces()[0];
        let i = face.complement(n).min_element().expect("one missing vertex");
        return ResolutionRecord {
            complex,
            kind: Kind::Projective,
            witness: Some(corner_witness(n, i)),
        };
    }
    match projectivity_witness(n, complex.maximal_faces()) {
        Some(x) => ResolutionRecord {
            complex,
            kind: Kind::Projective,
            witness: Some(RatVector::from_big(&x)),
        },
        None => ResolutionRecord {
            complex,
            kind: Kind::NonProjective,
            witness: None,
        },
    }
}

/// One record per maximally biconnected complex, in enumeration order.
pub struct Census {
    n: usize,
    inner: MaxBiconnected,
}

impl Iterator for Census {
    type Item = ResolutionRecord;
    fn next(&mut self) -> Option<ResolutionRecord> {
        self.inner.next_faceset().map(|fs| record_for(self.n, &fs))
    }
}

impl Census {
    /// Up to `size` records, computed in parallel when the feature is on.
    pub fn next_batch(&mut self, size: usize) -> Vec<ResolutionRecord> {
        let mut sets = Vec::with_capacity(size);
        while sets.len() < size {
            match self.inner.next_faceset() {
                Some(fs) => sets.push(fs),
                None => break,
            }
        }
        let n = self.n;
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            sets.par_iter().map(|fs| record_for(n, fs)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            sets.iter().map(|fs| record_for(n, fs)).collect()
        }
    }
}

pub fn census(n: usize) -> Result<Census> {
    check_range("n", n, 3, 7)?;
    Ok(Census {
        n,
        inner: enumerate_max_biconnected(n, false)?,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub n: usize,
    pub total: u64,
    pub projective: u64,
    pub non_projective: u64,
    pub full: u64,
    pub full_projective: u64,
}

pub fn census_summary(n: usize) -> Result<CensusSummary> {
    let mut c = census(n)?;
    let mut s = CensusSummary {
        n,
        ..Default::default()
    };
    loop {
        let batch = c.next_batch(4096);
        if batch.is_empty() {
            break;
        }
        for r in batch {
            s.total += 1;
            let full = is_full(&r.complex);
            s.full += full as u64;
            match r.kind {
                Kind::Projective => {
                    s.projective += 1;
                    s.full_projective += full as u64;
                }
                Kind::NonProjective => s.non_projective += 1,
            }
        }
    }
    Ok(s)
}

/// Free orbit data on `[n]` with `#K <= max_k`.
pub fn free_orbit_data(n: usize, max_k: usize) -> Result<Vec<HyperCone>> {
    let parts: Vec<Partition> = crate::complexes::enumerate_partitions(n, Subset::full(n), 1)?.collect();
    let mut out = Vec::new();
    for p in &parts {
        for b in 0..1u32 << n {
            let k = Subset(b);
            if k.len() <= max_k && in_omega_X_free(p, k) {
                out.push(HyperCone::new(p.clone(), k)?);
            }
        }
    }
    Ok(out)
}
