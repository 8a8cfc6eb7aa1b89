//! Exact rational vectors, polyhedral cones and the linear programs behind them.

pub mod dd;
pub mod lp;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use lp::{phase1, Phase1};

pub type Rational = BigRational;

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RatVector(pub Vec<Rational>);

impl RatVector {
    pub fn from_ints(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_big(v: &[BigInt]) -> Self {
        RatVector(v.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        RatVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// The primitive integer vector on the same ray.
    pub fn primitive(&self) -> Vec<BigInt> {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut v: Vec<BigInt> = self
            .0
            .iter()
            .map(|q| q.numer() * (&l / q.denom()))
            .collect();
        make_primitive(&mut v);
        v
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<Vec<_>>>()
            .map(RatVector)
            .map_err(serde::de::Error::custom)
    }
}

/// Divide out the content; the zero vector is left alone.
pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
}

fn to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Row-reduced echelon form over the rationals, zero rows removed.
pub(crate) fn rref(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x = &*x * &inv);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot).take(cols) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Primitive integer rows spanning the same space, in reduced echelon order.
pub(crate) fn rref_int(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    rref(rows.iter().map(|r| to_rat(r)).collect())
        .into_iter()
        .map(|r| RatVector(r).primitive())
        .collect()
}

pub(crate) fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    rref(rows.iter().map(|r| to_rat(r)).collect()).len()
}

/// Solve a square nonsingular system.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("nonsingular system");
        a.swap(c, p);
        b.swap(c, p);
        let pivot = a[c].clone();
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &pivot[c];
                for (x, y) in a[i].iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * y;
                }
                let t = &f * &b[c];
                b[i] -= t;
            }
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

/// Orthogonal projection of `v` off the span of `basis`, made primitive.
pub(crate) fn project_off(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    if basis.is_empty() {
        let mut v = v.to_vec();
        make_primitive(&mut v);
        return v;
    }
    let k = basis.len();
    let gram: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| Rational::from_integer(lp::dot(&basis[i], &basis[j])))
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = basis
        .iter()
        .map(|l| Rational::from_integer(lp::dot(l, v)))
        .collect();
    let c = solve(gram, rhs);
    let mut w = to_rat(v);
    for (ci, l) in c.iter().zip(basis) {
        for (wj, lj) in w.iter_mut().zip(l) {
            *wj -= ci * Rational::from_integer(lj.clone());
        }
    }
    RatVector(w).primitive()
}

fn canonical(dim: usize, vs: Vec<RatVector>, what: &'static str, keep_zero: bool) -> Result<Vec<RatVector>> {
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(vs.len());
    for v in vs {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
        if v.is_zero() {
            if keep_zero {
                continue;
            }
            return Err(Error::ZeroVector(what));
        }
        out.push(v.primitive());
    }
    out.sort();
    out.dedup();
    Ok(out.iter().map(|v| RatVector::from_big(v)).collect())
}

/// A cone given by generators, stored as sorted distinct primitive integer vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeV {
    dim: usize,
    generators: Vec<RatVector>,
}

impl ConeV {
    pub fn new(dim: usize, generators: Vec<RatVector>) -> Result<Self> {
        Ok(ConeV {
            dim,
            generators: canonical(dim, generators, "cone generator", false)?,
        })
    }

    pub fn from_ints(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ConeV {
            dim,
            generators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RatVector] {
        &self.generators
    }

    pub fn int_generators(&self) -> Vec<Vec<BigInt>> {
        self.generators.iter().map(RatVector::primitive).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A cone `{x : a.x >= 0 for every listed a}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeH {
    dim: usize,
    inequalities: Vec<RatVector>,
}

impl ConeH {
    /// Zero inequalities are trivially satisfied and are dropped.
    pub fn new(dim: usize, inequalities: Vec<RatVector>) -> Result<Self> {
        Ok(ConeH {
            dim,
            inequalities: canonical(dim, inequalities, "inequality", true)?,
        })
    }

    pub fn from_ints(dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| RatVector::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[RatVector] {
        &self.inequalities
    }

    pub fn int_inequalities(&self) -> Vec<Vec<BigInt>> {
        self.inequalities.iter().map(RatVector::primitive).collect()
    }
}

fn with_lineality(dim: usize, rays: Vec<Vec<BigInt>>, lin: Vec<Vec<BigInt>>) -> Vec<RatVector> {
    let mut out: Vec<RatVector> = rays.iter().map(|r| RatVector::from_big(r)).collect();
    for l in lin {
        let neg: Vec<BigInt> = l.iter().map(|x| -x).collect();
        out.push(RatVector::from_big(&l));
        out.push(RatVector::from_big(&neg));
    }
    debug_assert!(out.iter().all(|v| v.dim() == dim));
    out
}

/// Facet description of a generated cone. An equality appears as a pair `a`, `-a`.
pub fn v_to_h(c: &ConeV) -> ConeH {
    let (rays, lin) = dd::dd(&c.int_generators(), c.dim);
    ConeH::new(c.dim, with_lineality(c.dim, rays, lin)).expect("dd output is well formed")
}

/// Extreme rays of an inequality cone, with a lineality basis included as `l`, `-l`.
pub fn h_to_v(c: &ConeH) -> ConeV {
    let (rays, lin) = dd::dd(&c.int_inequalities(), c.dim);
    ConeV::new(c.dim, with_lineality(c.dim, rays, lin)).expect("dd output is well formed")
}

pub fn cone_dim(c: &ConeV) -> usize {
    rank_int(&c.int_generators())
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Whether `x` is a nonnegative combination of the generators.
pub fn contains_point(c: &ConeV, x: &RatVector) -> Result<bool> {
    same_dim(c.dim, x.dim())?;
    if x.is_zero() {
        return Ok(true);
    }
    let gens = c.int_generators();
    let l = x.0.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let b: Vec<BigInt> = x.0.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let m: Vec<Vec<BigInt>> = (0..c.dim)
        .map(|k| gens.iter().map(|g| g[k].clone()).collect())
        .collect();
    Ok(matches!(phase1(&m, &b, gens.len()), Phase1::Feasible { .. }))
}

/// Whether `a` is contained in `b`.
pub fn cone_subset(a: &ConeV, b: &ConeV) -> Result<bool> {
    same_dim(a.dim, b.dim)?;
    for g in &a.generators {
        if !contains_point(b, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn same_cone(a: &ConeV, b: &ConeV) -> Result<bool> {
    Ok(cone_subset(a, b)? && cone_subset(b, a)?)
}

fn is_linear_space(c: &ConeV) -> Result<bool> {
    for g in &c.generators {
        let neg = RatVector(g.0.iter().map(|q| -q).collect());
        if !contains_point(c, &neg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the relative interiors meet. The relative interior of the zero cone is `{0}`.
pub fn relint_intersects(a: &ConeV, b: &ConeV) -> Result<bool> {
    same_dim(a.dim, b.dim)?;
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Ok(true),
        (true, false) => return is_linear_space(b),
        (false, true) => return is_linear_space(a),
        _ => {}
    }
    // sum (1 + s_i) a_i = sum (1 + t_j) b_j with s, t >= 0.
    let ga = a.int_generators();
    let gb = b.int_generators();
    let cols = ga.len() + gb.len();
    let mut m = vec![Vec::with_capacity(cols); a.dim];
    let mut rhs = vec![BigInt::zero(); a.dim];
    for k in 0..a.dim {
        for g in &ga {
            m[k].push(g[k].clone());
            rhs[k] -= &g[k];
        }
        for g in &gb {
            m[k].push(-&g[k]);
            rhs[k] += &g[k];
        }
    }
    Ok(matches!(phase1(&m, &rhs, cols), Phase1::Feasible { .. }))
}

/// Generators of the intersection of two cones.
pub fn intersect(a: &ConeV, b: &ConeV) -> Result<ConeV> {
    same_dim(a.dim, b.dim)?;
    let mut ineqs = v_to_h(a).inequalities;
    ineqs.extend(v_to_h(b).inequalities);
    Ok(h_to_v(&ConeH::new(a.dim, ineqs)?))
}

/// Whether an integer vector lies strictly inside every inequality.
pub fn strictly_inside(ineqs: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    ineqs.iter().all(|a| lp::dot(a, x).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cone(dim: usize, rows: &[&[i64]]) -> ConeV {
        ConeV::from_ints(dim, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn canonical_generators() {
        let c = cone(2, &[&[2, 4], &[1, 2], &[0, 3]]);
        assert_eq!(c.generators(), &[RatVector::from_ints(&[0, 1]), RatVector::from_ints(&[1, 2])]);
        assert!(ConeV::from_ints(2, &[vec![0, 0]]).is_err());
        assert!(ConeV::from_ints(2, &[vec![1, 0, 0]]).is_err());
    }

    #[test]
    fn rational_round_trip() {
        let v = RatVector(vec![parse_rational("3/6").unwrap(), parse_rational("-2").unwrap()]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","-2"]"#);
        let back: RatVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn zero_cone_dual_is_everything() {
        let h = v_to_h(&ConeV::zero(2));
        assert_eq!(h.inequalities().len(), 4);
        let v = h_to_v(&ConeH::new(2, vec![]).unwrap());
        assert_eq!(v.generators().len(), 4);
        assert_eq!(cone_dim(&v), 2);
    }

    #[test]
    fn quadrant_subsets() {
        let q = cone(2, &[&[1, 0], &[0, 1]]);
        let d = cone(2, &[&[1, 1]]);
        assert!(cone_subset(&d, &q).unwrap());
        assert!(!cone_subset(&q, &d).unwrap());
        assert!(relint_intersects(&d, &q).unwrap());
        let e = cone(2, &[&[1, 0]]);
        assert!(!relint_intersects(&e, &q).unwrap());
        assert!(!relint_intersects(&ConeV::zero(2), &q).unwrap());
        let plane = cone(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(relint_intersects(&ConeV::zero(2), &plane).unwrap());
    }

    #[test]
    fn halfplane_rays_are_projected() {
        let h = ConeH::from_ints(2, &[vec![1, 0]]).unwrap();
        let v = h_to_v(&h);
        assert_eq!(
            v.generators(),
            &[
                RatVector::from_ints(&[0, -1]),
                RatVector::from_ints(&[0, 1]),
                RatVector::from_ints(&[1, 0])
            ]
        );
    }

    fn small_cone() -> impl Strategy<Value = ConeV> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..6).prop_filter_map(
            "nonzero",
            |rows| {
                let rows: Vec<Vec<i64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
                if rows.is_empty() {
                    None
                } else {
                    ConeV::from_ints(3, &rows).ok()
                }
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn double_description_round_trip(c in small_cone()) {
            let back = h_to_v(&v_to_h(&c));
            prop_assert!(same_cone(&c, &back).unwrap());
            prop_assert_eq!(cone_dim(&c), cone_dim(&back));
            // Minimality: every output generator is needed.
            for i in 0..back.generators().len() {
                let rest: Vec<RatVector> = back.generators().iter().enumerate()
                    .filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
                let smaller = ConeV::new(3, rest).unwrap();
                let needed = !contains_point(&smaller, &back.generators()[i]).unwrap();
                let lineal = contains_point(&back, &RatVector(back.generators()[i].0.iter().map(|q| -q).collect())).unwrap();
                prop_assert!(needed || lineal);
            }
        }

        #[test]
        fn facets_hold_on_generators(c in small_cone()) {
            let h = v_to_h(&c);
            for a in h.inequalities() {
                for g in c.generators() {
                    prop_assert!(!a.dot(g).is_negative());
                }
            }
        }

        #[test]
        fn relint_is_symmetric(a in small_cone(), b in small_cone()) {
            prop_assert_eq!(relint_intersects(&a, &b).unwrap(), relint_intersects(&b, &a).unwrap());
        }
    }
}
