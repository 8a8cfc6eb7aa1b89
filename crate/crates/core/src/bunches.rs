//! Bunches of free polygon orbit cones and their correspondence with full
//! maximally biconnected complexes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::{
    enumerate_partitions, is_full, is_maximal_biconnected, Complex, FaceSet, Partition, Subset,
    MAX_COMPLEX_N,
};
use crate::error::{Error, Result};
use crate::polygon_cones::{is_free, relint_disjoint_free, unit, v_vector, PolygonCone};
use crate::ratgeom::lp::strict_point_small;
use crate::ratgeom::RatVector;

/// A set of free polygon orbit cones, each named by its partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bunch {
    n: usize,
    cones: BTreeSet<Partition>,
}

impl Bunch {
    pub fn new(n: usize, cones: impl IntoIterator<Item = Partition>) -> Result<Self> {
        let cones: BTreeSet<Partition> = cones.into_iter().collect();
        for p in &cones {
            if p.n() != n || !is_free(p) {
                return Err(Error::NotFree(format!("{p:?}")));
            }
        }
        Ok(Bunch { n, cones })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cones(&self) -> &BTreeSet<Partition> {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Distinct parts of member partitions.
    pub fn parts(&self) -> BTreeSet<Subset> {
        self.cones.iter().flat_map(|p| p.parts().iter().copied()).collect()
    }
}

/// Total partitions of `p.ground()` refining `p`, with at least `min_parts` parts.
pub fn refinements(p: &Partition, min_parts: usize) -> Vec<Partition> {
    let mut acc: Vec<Vec<Subset>> = vec![Vec::new()];
    for &part in p.parts() {
        let pieces: Vec<Partition> = enumerate_partitions(p.n(), part, 1)
            .expect("part is a valid ground set")
            .collect();
        let mut next = Vec::with_capacity(acc.len() * pieces.len());
        for a in &acc {
            for q in &pieces {
                let mut v = a.clone();
                v.extend_from_slice(q.parts());
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .filter(|v| v.len() >= min_parts)
        .map(|v| Partition::new(p.n(), v).expect("refinement is a partition"))
        .collect()
}

/// Nonempty, pairwise overlapping relative interiors, and closed under passing
/// to larger free cones.
pub fn is_bunch(b: &Bunch) -> bool {
    if b.is_empty() {
        return false;
    }
    let cones: Vec<PolygonCone> = b.cones.iter().cloned().map(PolygonCone::new).collect();
    for (i, p) in cones.iter().enumerate() {
        for q in &cones[i..] {
            if relint_disjoint_free(p, q).expect("members are free") {
                return false;
            }
        }
    }
    b.cones
        .iter()
        .all(|p| refinements(p, 3).iter().all(|q| b.cones.contains(q)))
}

fn require_full_max_biconnected(c: &Complex) -> Result<()> {
    if !is_maximal_biconnected(c) {
        return Err(Error::NotMaximalBiconnected);
    }
    if !is_full(c) {
        return Err(Error::NotFull);
    }
    Ok(())
}

/// `Φ_Δ`: free partitions of `[n]` all of whose parts are faces.
pub fn phi_from_complex(c: &Complex) -> Result<Bunch> {
    require_full_max_biconnected(c)?;
    let n = c.n();
    let fs = c.faceset();
    let cones: Vec<Partition> = enumerate_partitions(n, Subset::full(n), 3)?
        .filter(|p| p.parts().iter().all(|&i| fs.contains(i)))
        .collect();
    Bunch::new(n, cones)
}

/// The complex generated by the parts of member partitions. It must be full
/// and maximally biconnected with `Φ` equal to the input.
pub fn complex_from_bunch(b: &Bunch) -> Result<Complex> {
    if b.n > MAX_COMPLEX_N {
        return Err(Error::InvalidComplex(format!("n = {} unsupported", b.n)));
    }
    let parts: Vec<Subset> = b.parts().into_iter().collect();
    let c = Complex::generated_by(b.n, &parts)?;
    if !is_maximal_biconnected(&c) || !is_full(&c) {
        return Err(Error::NotMaximalBunch(
            "parts do not generate a full maximally biconnected complex".into(),
        ));
    }
    if &phi_from_complex(&c)? != b {
        return Err(Error::NotMaximalBunch("bunch is smaller than its complex's bunch".into()));
    }
    Ok(c)
}

pub fn is_maximal_bunch(b: &Bunch) -> Result<bool> {
    if !is_bunch(b) {
        return Err(Error::NotABunch(format!("{} cones", b.len())));
    }
    Ok(complex_from_bunch(b).is_ok())
}

/// A point with `θ_i > 0` and `v_I(θ) > 0` for every listed face `I`.
pub fn projectivity_witness(n: usize, faces: &[Subset]) -> Option<Vec<BigInt>> {
    let mut rows: Vec<Vec<i64>> = (1..=n).map(|i| unit(n, i)).collect();
    rows.extend(faces.iter().map(|&f| v_vector(n, f)));
    strict_point_small(&rows, n)
}

/// Projectivity of a full maximally biconnected complex; returns an interior
/// point of the corresponding chamber when one exists.
pub fn is_projective_complex(c: &Complex) -> Result<Option<Vec<BigInt>>> {
    require_full_max_biconnected(c)?;
    Ok(projectivity_witness(c.n(), c.maximal_faces()))
}

/// Whether the member cones share an interior point; returns it when they do.
pub fn is_projective(b: &Bunch) -> Result<Option<RatVector>> {
    if !is_maximal_bunch(b)? {
        return Err(Error::NotMaximalBunch(String::new()));
    }
    let parts: Vec<Subset> = b.parts().into_iter().collect();
    let mut fs = FaceSet::default();
    for &p in &parts {
        fs.union_with(&FaceSet::down(p));
    }
    let top = fs.maximal(b.n);
    Ok(projectivity_witness(b.n, &top).map(|x| RatVector::from_big(&x)))
}

fn v_value(theta: &[BigRational], i: Subset) -> BigRational {
    theta
        .iter()
        .enumerate()
        .map(|(k, t)| if i.contains(k + 1) { -t } else { t.clone() })
        .sum()
}

/// The complex `{I : v_I(θ) > 0}` for a generic `θ` in the interior of `F ∩ C_0`.
pub fn complex_from_theta(theta: &RatVector) -> Result<Complex> {
    let n = theta.dim();
    if !(3..=MAX_COMPLEX_N).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as i64,
            min: 3,
            max: MAX_COMPLEX_N as i64,
        });
    }
    let t = &theta.0;
    if let Some(k) = t.iter().position(|x| !x.is_positive()) {
        return Err(Error::Precondition(format!("θ_{} is not positive", k + 1)));
    }
    let mut faces = Vec::new();
    for b in 0..1u32 << n {
        let s = Subset(b);
        let v = v_value(t, s);
        if v.is_zero() {
            return Err(Error::NonGeneric(format!("v_I(θ) = 0 for I = {s:?}")));
        }
        if s.len() == 1 && v.is_negative() {
            return Err(Error::Precondition(format!("θ is outside C_0: v_I(θ) < 0 for I = {s:?}")));
        }
        if v.is_positive() && !s.is_empty() {
            faces.push(s);
        }
    }
    Complex::generated_by(n, &faces)
}

/// The bunch of free cones containing a generic `θ` in their interiors.
pub fn bunch_from_theta(theta: &RatVector) -> Result<Bunch> {
    phi_from_complex(&complex_from_theta(theta)?)
}
