//! Exhaustive comparison of the closed-form cone criteria with direct
//! computations on generator matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bunches::phi_from_complex;
use crate::complexes::{enumerate_max_biconnected, enumerate_partitions, is_full, Partition, Subset};
use crate::error::{check_range, Result};
use crate::hyper_cones::{
    contains_F, contains_corner, corner_cone, free_orbit_data, in_omega_X, meet_c0, psi_membership,
};
use crate::polygon_cones::{c0, orthant, relint_disjoint_free, subset_free, PolygonCone};
use crate::ratgeom::{cone_subset, intersect, rref, relint_intersects, same_cone, ConeV};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agreement {
    pub name: String,
    pub instances: u64,
    pub disagreements: u64,
}

impl Agreement {
    pub fn ok(&self) -> bool {
        self.disagreements == 0
    }
}

#[derive(Default)]
struct Tally {
    instances: u64,
    disagreements: u64,
}

impl Tally {
    fn record(&mut self, closed: bool, direct: bool) {
        self.instances += 1;
        self.disagreements += (closed != direct) as u64;
    }

    fn named(self, name: &str) -> Agreement {
        Agreement {
            name: name.to_string(),
            instances: self.instances,
            disagreements: self.disagreements,
        }
    }
}

/// Whether some point has orbit data `(P, K)`: nonzero `r_k` on `K` with
/// `Σ r_k (p_k^2, p_k q_k, q_k^2) = 0`, where `(p_k, q_k)` is one direction per
/// part and zero off the ground set. Column `l` is forced to vanish on the
/// kernel iff removing it drops the rank.
pub(crate) fn realizable(p: &Partition, k: Subset) -> bool {
    let mut cols: Vec<Vec<BigRational>> = Vec::new();
    for i in k.elements() {
        match p.parts().iter().position(|j| j.contains(i)) {
            None => cols.push(vec![BigRational::zero(); 3]),
            Some(idx) => {
                let t = BigRational::from_integer((idx as i64 + 2).into());
                cols.push(vec![BigRational::one(), t.clone(), &t * &t]);
            }
        }
    }
    let rank = |v: Vec<Vec<BigRational>>| rref(v).len();
    (0..cols.len()).all(|l| {
        let rest: Vec<Vec<BigRational>> =
            cols.iter().enumerate().filter(|&(i, _)| i != l).map(|(_, c)| c.clone()).collect();
        rank(rest.clone()) == rank(cols.clone())
    })
}

fn orbit_data(n: usize) -> Agreement {
    let mut t = Tally::default();
    for g in 1..1u32 << n {
        for p in enumerate_partitions(n, Subset(g), 1).expect("valid ground set") {
            for b in 0..1u32 << n {
                t.record(in_omega_X(&p, Subset(b)), realizable(&p, Subset(b)));
            }
        }
    }
    t.named("orbit-data")
}

/// Run every suite at `n`.
pub fn crosscheck(n: usize) -> Result<Vec<Agreement>> {
    check_range("n", n, 3, 6)?;
    let free: Vec<PolygonCone> = enumerate_partitions(n, Subset::full(n), 3)?.map(PolygonCone::new).collect();
    let free_v: Vec<ConeV> = free.iter().map(PolygonCone::to_cone_v).collect();

    let mut contain = Tally::default();
    let mut disjoint = Tally::default();
    for (p, pv) in free.iter().zip(&free_v) {
        for (q, qv) in free.iter().zip(&free_v) {
            contain.record(subset_free(p, q)?, cone_subset(pv, qv)?);
            disjoint.record(relint_disjoint_free(p, q)?, !relint_intersects(pv, qv)?);
        }
    }

    let data = free_orbit_data(n, n)?;
    let data_v: Vec<ConeV> = data.iter().map(|c| c.to_cone_v()).collect();
    let corners: Vec<ConeV> = (1..=n).map(|i| corner_cone(n, i)).collect::<Result<_>>()?;
    let f = orthant(n);
    let c0v = c0(n)?.to_cone_v();
    let mut corner = Tally::default();
    let mut in_f = Tally::default();
    let mut meet = Tally::default();
    for (c, v) in data.iter().zip(&data_v) {
        for i in 1..=n {
            corner.record(contains_corner(c, i)?, cone_subset(&corners[i - 1], v)?);
        }
        let has_f = contains_F(c)?;
        in_f.record(has_f, cone_subset(&f, v)?);
        if !has_f {
            let got = meet_c0(c)?.to_cone_v();
            meet.record(true, same_cone(&got, &intersect(v, &c0v)?)?);
        }
    }

    // For a full complex, a free cone belongs to Ψ iff it contains a member of Φ;
    // otherwise iff it contains the corner chamber of the missing vertex.
    let below: Vec<Vec<bool>> = data_v
        .iter()
        .map(|v| free_v.iter().map(|p| cone_subset(p, v)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut psi = Tally::default();
    for d in enumerate_max_biconnected(n, false)? {
        if is_full(&d) {
            let phi = phi_from_complex(&d)?;
            let in_phi: Vec<bool> = free.iter().map(|p| phi.cones().contains(p.partition())).collect();
            for (c, row) in data.iter().zip(&below) {
                let want = row.iter().zip(&in_phi).any(|(&sub, &mem)| sub && mem);
                psi.record(psi_membership(&d, c)?, want);
            }
        } else {
            let i = d.maximal_faces()[0].complement(n).min_element().expect("one missing vertex");
            for (c, v) in data.iter().zip(&data_v) {
                psi.record(psi_membership(&d, c)?, cone_subset(&corners[i - 1], v)?);
            }
        }
    }

    Ok(vec![
        contain.named("refinement-containment"),
        disjoint.named("disjoint-interior"),
        corner.named("corner-containment"),
        in_f.named("F-containment"),
        meet.named("meet-C0"),
        psi.named("psi-membership"),
        orbit_data(n),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_agree_at_four() {
        let report = crosscheck(4).unwrap();
        assert_eq!(report.len(), 7);
        for a in &report {
            assert!(a.ok(), "{a:?}");
            assert!(a.instances > 0, "{a:?}");
        }
    }

    #[test]
    fn realizability_examples() {
        let sing = Partition::singletons(5, Subset::full(5)).unwrap();
        assert!(realizable(&sing, Subset::EMPTY));
        assert!(!realizable(&sing, Subset::from_elements(5, &[1, 2, 3]).unwrap()));
        assert!(realizable(&sing, Subset::from_elements(5, &[1, 2, 3, 4]).unwrap()));
    }
}
