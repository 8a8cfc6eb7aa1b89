//! Central hyperplane arrangements: the GIT-wall arrangement `𝒜(n)`, the
//! subset-sum arrangements `ℬ(n, m)`, region counts and chambers.

mod charpoly;
mod regions;

pub use charpoly::{characteristic_polynomial, max_minor_bound, CharPoly};
pub use regions::{count_regions_in_cone_with, enumerate_regions, Chamber};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::{Complex, Subset};
use crate::error::{check_range, Error, Result};
use crate::polygon_cones::{c0, orthant};
use crate::ratgeom::{v_to_h, ConeH, RatVector};

/// Distinct hyperplanes through the origin, each stored as its primitive
/// integer normal with first nonzero entry positive, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawArrangement")]
pub struct Arrangement {
    dim: usize,
    normals: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawArrangement {
    dim: usize,
    normals: Vec<Vec<i64>>,
}

impl TryFrom<RawArrangement> for Arrangement {
    type Error = Error;
    fn try_from(r: RawArrangement) -> Result<Self> {
        Arrangement::new(r.dim, r.normals)
    }
}

pub(crate) fn canonical_normal(v: &[i64]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |a, &x| a.gcd(&x));
    if g == 0 {
        return None;
    }
    let lead = v.iter().find(|&&x| x != 0).copied()?;
    let s = if lead < 0 { -g } else { g };
    Some(v.iter().map(|&x| x / s).collect())
}

impl Arrangement {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        let mut out = Vec::with_capacity(normals.len());
        for v in normals {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            out.push(canonical_normal(&v).ok_or(Error::ZeroVector("hyperplane normal"))?);
        }
        out.sort();
        out.dedup();
        Ok(Arrangement { dim, normals: out })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// Whether a permutation of coordinates maps the arrangement to itself.
    pub(crate) fn invariant_under(&self, perm: &[usize]) -> bool {
        self.normals.iter().all(|v| {
            let mut w = vec![0; self.dim];
            for (i, &p) in perm.iter().enumerate() {
                w[p] = v[i];
            }
            let w = canonical_normal(&w).expect("nonzero");
            self.normals.binary_search(&w).is_ok()
        })
    }

    /// Invariance under every permutation of coordinates.
    pub fn is_symmetric(&self) -> bool {
        let d = self.dim;
        if d < 2 {
            return true;
        }
        let swap: Vec<usize> = (0..d).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        self.invariant_under(&swap) && self.invariant_under(&cycle)
    }
}

/// The walls `H_I = {v_I = 0}` over complementary pairs `{I, [n] \ I}`, including
/// `Σ θ_i = 0`, together with the coordinate hyperplanes.
pub fn build_a(n: usize) -> Result<Arrangement> {
    check_range("n", n, 3, 8)?;
    let mut normals = Vec::new();
    for b in 0..1u32 << (n - 1) {
        let s = Subset(b);
        normals.push((1..=n).map(|k| if s.contains(k) { -1 } else { 1 }).collect());
    }
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        normals.push(e);
    }
    Arrangement::new(n, normals)
}

/// Hyperplanes `Σ_{i ∈ S} x_i = 0` in dimension `n - 1` over `m`-subsets `S` of `[n - 1]`.
pub fn build_b(n: usize, m: usize) -> Result<Arrangement> {
    check_range("n", n, 3, 9)?;
    check_range("m", m, 1, n - 1)?;
    let d = n - 1;
    let normals = (0..1u32 << d)
        .filter(|b| b.count_ones() as usize == m)
        .map(|b| (0..d).map(|i| (b >> i & 1) as i64).collect())
        .collect();
    Arrangement::new(d, normals)
}

/// The hyperplanes containing `ray`.
pub fn localize(a: &Arrangement, ray: &RatVector) -> Result<Arrangement> {
    if ray.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: ray.dim(),
        });
    }
    if ray.is_zero() {
        return Err(Error::ZeroVector("ray"));
    }
    let r = ray.primitive();
    let normals = a
        .normals
        .iter()
        .filter(|v| v.iter().zip(&r).map(|(&x, y)| BigInt::from(x) * y).sum::<BigInt>().is_zero())
        .cloned()
        .collect();
    Arrangement::new(a.dim, normals)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumerate,
    Charpoly,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(Method::Enumerate),
            "charpoly" => Ok(Method::Charpoly),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Number of open regions of the complement.
pub fn count_regions(a: &Arrangement, method: Method) -> Result<u64> {
    match method {
        Method::Enumerate => count_regions_in_cone_with(a, &[]),
        Method::Charpoly => characteristic_polynomial(a)?.regions(),
    }
}

/// Regions inside a full-dimensional cone whose facet hyperplanes belong to the arrangement.
pub fn count_regions_in_cone(a: &Arrangement, cone: &ConeH) -> Result<u64> {
    if cone.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: cone.dim(),
        });
    }
    let ineqs = cone_rows(a, cone)?;
    count_regions_in_cone_with(a, &ineqs)
}

/// All regions inside the cone, as in [`count_regions_in_cone`].
pub fn enumerate_regions_in_cone(a: &Arrangement, cone: &ConeH) -> Result<Vec<Chamber>> {
    if cone.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: cone.dim(),
        });
    }
    enumerate_regions(a, &cone_rows(a, cone)?)
}

pub(crate) fn cone_rows(a: &Arrangement, cone: &ConeH) -> Result<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for ineq in cone.int_inequalities() {
        let row: Vec<i64> = ineq
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Precondition("inequality entries too large".into())))
            .collect::<Result<_>>()?;
        let canon = canonical_normal(&row).expect("nonzero inequality");
        if a.normals.binary_search(&canon).is_err() {
            return Err(Error::Precondition(format!(
                "cone facet {row:?} is not a hyperplane of the arrangement"
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Named cones used by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedCone {
    F,
    C0,
}

impl std::str::FromStr for NamedCone {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(NamedCone::F),
            "C0" | "c0" => Ok(NamedCone::C0),
            other => Err(Error::Parse(format!("unknown cone {other:?}"))),
        }
    }
}

pub fn named_cone(n: usize, which: NamedCone) -> Result<ConeH> {
    Ok(match which {
        NamedCone::F => v_to_h(&orthant(n)),
        NamedCone::C0 => v_to_h(&c0(n)?.to_cone_v()),
    })
}

/// Regions of the localization at `ray`, i.e. chambers whose closure contains it.
pub fn count_chambers_at_ray(a: &Arrangement, ray: &RatVector, method: Method) -> Result<u64> {
    count_regions(&localize(a, ray)?, method)
}

/// The complex of a chamber of `𝒜(n)` lying in `F ∩ C_0`.
pub fn chamber_to_complex(a: &Arrangement, ch: &Chamber) -> Result<Complex> {
    let n = a.dim;
    if a != &build_a(n)? {
        return Err(Error::Precondition("chamber must come from the wall arrangement".into()));
    }
    let theta = &ch.witness;
    if theta.0.iter().any(|t| !t.is_positive()) {
        return Err(Error::Precondition("chamber is outside the positive orthant".into()));
    }
    crate::bunches::complex_from_theta(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(build_a(5).unwrap().len(), 21);
        assert_eq!(build_a(6).unwrap().len(), 38);
        assert_eq!(build_b(6, 3).unwrap().len(), 10);
        assert_eq!(build_b(8, 4).unwrap().len(), 35);
        assert!(build_a(2).is_err());
        assert!(build_b(5, 5).is_err());
        assert!(build_a(6).unwrap().is_symmetric());
        assert!(build_b(8, 4).unwrap().is_symmetric());
        let skew = Arrangement::new(2, vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert!(!skew.is_symmetric());
    }

    #[test]
    fn canonical_normals() {
        let a = Arrangement::new(2, vec![vec![-2, 4], vec![1, -2], vec![0, 3]]).unwrap();
        assert_eq!(a.normals(), &[vec![0, 1], vec![1, -2]]);
        assert!(Arrangement::new(2, vec![vec![0, 0]]).is_err());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"dim":2,"normals":[[0,1],[1,-2]]}"#);
    }

    #[test]
    fn localization_at_the_center() {
        let loc = localize(&build_a(6).unwrap(), &RatVector::from_ints(&[1; 6])).unwrap();
        assert_eq!(loc.len(), 10);
        assert!(loc.normals().iter().all(|v| v.iter().sum::<i64>() == 0));
    }

    #[test]
    fn cone_facets_must_be_walls() {
        let a = build_b(6, 3).unwrap();
        let f = named_cone(5, NamedCone::F).unwrap();
        assert!(count_regions_in_cone(&a, &f).is_err());
    }
}
