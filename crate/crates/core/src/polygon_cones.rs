//! Orbit cones of the polygon space: `ω_P` generated by `e_i + e_j` over
//! pairs `i, j` of the ground set lying in different parts of `P`.

use serde::{Deserialize, Serialize};

use crate::complexes::{Partition, Subset};
use crate::error::{Error, Result};
use crate::ratgeom::{cone_subset, ConeH, ConeV, RatVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolygonCone {
    partition: Partition,
}

impl PolygonCone {
    pub fn new(partition: Partition) -> Self {
        PolygonCone { partition }
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Partition of `[n]` with at least three parts.
    pub fn is_free(&self) -> bool {
        is_free(&self.partition)
    }

    pub fn generator_pairs(&self) -> Vec<(usize, usize)> {
        let g: Vec<usize> = self.partition.ground().elements().collect();
        let mut out = Vec::new();
        for (a, &i) in g.iter().enumerate() {
            for &j in &g[a + 1..] {
                if self.partition.part_containing(i) != self.partition.part_containing(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn generators(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        self.generator_pairs()
            .into_iter()
            .map(|(i, j)| {
                let mut v = vec![0; n];
                v[i - 1] = 1;
                v[j - 1] = 1;
                v
            })
            .collect()
    }

    pub fn to_cone_v(&self) -> ConeV {
        ConeV::from_ints(self.n(), &self.generators()).expect("generators are nonzero")
    }
}

pub fn is_free(p: &Partition) -> bool {
    p.is_total() && p.len() >= 3
}

/// Every partition of a nonempty subset of `[n]` labels a polygon orbit cone.
#[allow(non_snake_case)]
pub fn in_omega_Y(p: &Partition) -> bool {
    !p.is_empty()
}

#[allow(non_snake_case)]
pub fn in_omega_Y_free(p: &Partition) -> bool {
    is_free(p)
}

/// `v_I = sum_{j not in I} f_j - sum_{i in I} f_i` as an integer vector.
pub fn v_vector(n: usize, i: Subset) -> Vec<i64> {
    (1..=n).map(|k| if i.contains(k) { -1 } else { 1 }).collect()
}

pub fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i - 1] = 1;
    v
}

fn require_free(c: &PolygonCone) -> Result<()> {
    if !c.is_free() {
        return Err(Error::NotFree(format!("{:?}", c.partition)));
    }
    Ok(())
}

/// Inequalities `v_I >= 0` for the parts `I` and `f_i >= 0`, describing a free cone.
pub fn dual_generators(c: &PolygonCone) -> Result<Vec<RatVector>> {
    require_free(c)?;
    let n = c.n();
    let mut out: Vec<RatVector> = c
        .partition
        .parts()
        .iter()
        .map(|&i| RatVector::from_ints(&v_vector(n, i)))
        .collect();
    out.extend((1..=n).map(|i| RatVector::from_ints(&unit(n, i))));
    Ok(out)
}

pub fn dual_cone(c: &PolygonCone) -> Result<ConeH> {
    ConeH::new(c.n(), dual_generators(c)?)
}

/// Whether `ω_p ⊆ ω_q` for free cones, which holds exactly when `q` refines `p`.
pub fn subset_free(p: &PolygonCone, q: &PolygonCone) -> Result<bool> {
    require_free(p)?;
    require_free(q)?;
    q.partition.refines(&p.partition)
}

/// Containment of arbitrary polygon cones, through the closed form when both are free.
pub fn cone_subset_any(p: &PolygonCone, q: &PolygonCone) -> Result<bool> {
    if p.is_free() && q.is_free() {
        return subset_free(p, q);
    }
    cone_subset(&p.to_cone_v(), &q.to_cone_v())
}

/// Whether free cones have disjoint relative interiors: some part of `p` and
/// some part of `q` together cover `[n]`.
pub fn relint_disjoint_free(p: &PolygonCone, q: &PolygonCone) -> Result<bool> {
    require_free(p)?;
    require_free(q)?;
    if p.n() != q.n() {
        return Err(Error::GroundMismatch(format!("n = {} vs {}", p.n(), q.n())));
    }
    let full = Subset::full(p.n());
    Ok(p.partition
        .parts()
        .iter()
        .any(|a| q.partition.parts().iter().any(|b| a.union(*b) == full)))
}

/// `η_I`: the cone of the partition `{I}` plus singletons of the complement.
/// `η_∅` is the cone of the all-singletons partition.
pub fn eta(n: usize, i: Subset) -> Result<PolygonCone> {
    if !i.within(n) {
        return Err(Error::InvalidSubset(format!("{i:?} outside [1, {n}]")));
    }
    let mut parts: Vec<Subset> = i.complement(n).elements().map(Subset::singleton).collect();
    if !i.is_empty() {
        parts.push(i);
    }
    Ok(PolygonCone::new(Partition::new(n, parts)?))
}

/// The cone `C_0 = η_∅` generated by all `e_i + e_j`.
pub fn c0(n: usize) -> Result<PolygonCone> {
    eta(n, Subset::EMPTY)
}

/// The positive orthant `F`.
pub fn orthant(n: usize) -> ConeV {
    ConeV::from_ints(n, &(1..=n).map(|i| unit(n, i)).collect::<Vec<_>>()).expect("unit vectors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::enumerate_partitions;
    use crate::ratgeom::{h_to_v, relint_intersects, same_cone};

    fn free_cones(n: usize) -> Vec<PolygonCone> {
        enumerate_partitions(n, Subset::full(n), 3)
            .unwrap()
            .map(PolygonCone::new)
            .collect()
    }

    #[test]
    fn generators_of_small_cones() {
        let p = PolygonCone::new(Partition::from_lists(4, &[&[1, 2], &[3], &[4]]).unwrap());
        assert_eq!(p.generator_pairs(), vec![(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert!(p.is_free());
        let q = PolygonCone::new(Partition::from_lists(4, &[&[1, 2], &[3]]).unwrap());
        assert!(!q.is_free());
        assert!(subset_free(&q, &p).is_err());
        assert!(in_omega_Y(q.partition()));
        assert!(!in_omega_Y_free(q.partition()));
    }

    #[test]
    fn dual_description_matches_generators() {
        for n in 3..=6 {
            for c in free_cones(n) {
                let h = dual_cone(&c).unwrap();
                assert!(same_cone(&h_to_v(&h), &c.to_cone_v()).unwrap(), "{c:?}");
            }
        }
    }

    #[test]
    fn containment_closed_form_matches_lp() {
        for n in 3..=5 {
            let cones = free_cones(n);
            for p in &cones {
                for q in &cones {
                    let closed = subset_free(p, q).unwrap();
                    let lp = cone_subset(&p.to_cone_v(), &q.to_cone_v()).unwrap();
                    assert_eq!(closed, lp, "{p:?} {q:?}");
                }
            }
        }
    }

    #[test]
    fn disjointness_closed_form_matches_lp() {
        for n in 3..=5 {
            let cones = free_cones(n);
            for p in &cones {
                for q in &cones {
                    let closed = relint_disjoint_free(p, q).unwrap();
                    let lp = !relint_intersects(&p.to_cone_v(), &q.to_cone_v()).unwrap();
                    assert_eq!(closed, lp, "{p:?} {q:?}");
                }
            }
        }
    }

    #[test]
    fn non_free_containment_routes_to_lp() {
        let n = 4;
        let all: Vec<PolygonCone> = (1..16u32)
            .flat_map(|g| enumerate_partitions(n, Subset(g), 1).unwrap().map(PolygonCone::new))
            .collect();
        for p in &all {
            for q in &all {
                let a = cone_subset_any(p, q).unwrap();
                let b = cone_subset(&p.to_cone_v(), &q.to_cone_v()).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn eta_cones() {
        let n = 5;
        assert_eq!(c0(n).unwrap().generators().len(), 10);
        let e = eta(n, Subset::from_elements(n, &[1, 2]).unwrap()).unwrap();
        assert_eq!(e.generators().len(), 9);
        assert!(cone_subset_any(&e, &c0(n).unwrap()).unwrap());
    }
}
