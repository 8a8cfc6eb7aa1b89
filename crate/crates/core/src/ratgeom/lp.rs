//! Exact phase-one simplex on an integer tableau.
//!
//! The tableau is kept fraction free: every entry is the true value scaled by
//! the current basis determinant, and each pivot divides exactly by the
//! previous one. Entering and leaving variables follow Bland's rule, so the
//! method terminates on every input. The kernel runs on `i64` first and is
//! repeated over `BigInt` if any intermediate value overflows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait Entry: Clone + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn unit() -> Self;
    fn nil() -> Self;
    fn sign(&self) -> i8;
    fn neg(&self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    /// `(p * a - f * b) / d`, exact by construction.
    fn pivot(a: &Self, p: &Self, f: &Self, b: &Self, d: &Self) -> Option<Self>;
    /// Whether `a/b < c/e` for positive `b`, `e`.
    fn ratio_lt(a: &Self, b: &Self, c: &Self, e: &Self) -> Option<bool>;
    fn ratio_eq(a: &Self, b: &Self, c: &Self, e: &Self) -> Option<bool>;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn unit() -> Self {
        1
    }
    fn nil() -> Self {
        0
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    #[inline]
    fn pivot(a: &Self, p: &Self, f: &Self, b: &Self, d: &Self) -> Option<Self> {
        let v = (*p as i128 * *a as i128).checked_sub(*f as i128 * *b as i128)?;
        let q = v / *d as i128;
        debug_assert_eq!(v % *d as i128, 0);
        i64::try_from(q).ok()
    }
    fn ratio_lt(a: &Self, b: &Self, c: &Self, e: &Self) -> Option<bool> {
        Some((*a as i128) * (*e as i128) < (*c as i128) * (*b as i128))
    }
    fn ratio_eq(a: &Self, b: &Self, c: &Self, e: &Self) -> Option<bool> {
        Some((*a as i128) * (*e as i128) == (*c as i128) * (*b as i128))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn unit() -> Self {
        One::one()
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn pivot(a: &Self, p: &Self, f: &Self, b: &Self, d: &Self) -> Option<Self> {
        let v = p * a - f * b;
        debug_assert!((&v % d).is_zero());
        Some(v / d)
    }
    fn ratio_lt(a: &Self, b: &Self, c: &Self, e: &Self) -> Option<bool> {
        Some(a * e < c * b)
    }
    fn ratio_eq(a: &Self, b: &Self, c: &Self, e: &Self) -> Option<bool> {
        Some(a * e == c * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Outcome of deciding `M y = b, y >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phase1 {
    /// A solution `y = num / den`.
    Feasible { num: Vec<BigInt>, den: BigInt },
    /// A Farkas vector `u` with `u^T M <= 0` and `u^T b > 0`.
    Infeasible { farkas: Vec<BigInt> },
}

fn run<T: Entry>(m: &[Vec<T>], b: &[T], cols: usize) -> Option<Phase1> {
    let rows = b.len();
    let width = cols + rows + 1;
    let rhs = cols + rows;
    let mut flip = vec![false; rows];
    let mut t: Vec<Vec<T>> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        flip[i] = b[i].sign() < 0;
        let mut row = Vec::with_capacity(width);
        for v in &m[i][..cols] {
            row.push(if flip[i] { v.neg()? } else { v.clone() });
        }
        for k in 0..rows {
            row.push(if k == i { T::unit() } else { T::nil() });
        }
        row.push(if flip[i] { b[i].neg()? } else { b[i].clone() });
        t.push(row);
    }
    let mut obj = vec![T::nil(); width];
    for j in (0..cols).chain(std::iter::once(rhs)) {
        let mut s = T::nil();
        for row in &t {
            s = s.sub(&row[j])?;
        }
        obj[j] = s;
    }
    t.push(obj);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    let mut d = T::unit();

    while let Some(s) = (0..rhs).find(|&j| t[rows][j].sign() < 0) {
        let mut r: Option<usize> = None;
        for i in 0..rows {
            if t[i][s].sign() <= 0 {
                continue;
            }
            r = match r {
                None => Some(i),
                Some(k) => {
                    let lt = T::ratio_lt(&t[i][rhs], &t[i][s], &t[k][rhs], &t[k][s])?;
                    let eq = T::ratio_eq(&t[i][rhs], &t[i][s], &t[k][rhs], &t[k][s])?;
                    if lt || (eq && basis[i] < basis[k]) {
                        Some(i)
                    } else {
                        Some(k)
                    }
                }
            };
        }
        // The phase-one objective is bounded below, so a pivot row exists.
        let r = r?;
        let p = t[r][s].clone();
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[s].clone();
            for j in 0..width {
                row[j] = T::pivot(&row[j], &p, &f, &pivot_row[j], &d)?;
            }
        }
        basis[r] = s;
        d = p;
    }

    if t[rows][rhs].sign() == 0 {
        let mut num = vec![BigInt::zero(); cols];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < cols {
                num[bv] = t[i][rhs].to_big();
            }
        }
        Some(Phase1::Feasible { num, den: d.to_big() })
    } else {
        let dd = d.to_big();
        let farkas = (0..rows)
            .map(|i| {
                let u = &dd - t[rows][cols + i].to_big();
                if flip[i] {
                    -u
                } else {
                    u
                }
            })
            .collect();
        Some(Phase1::Infeasible { farkas })
    }
}

/// Decide feasibility of `M y = b, y >= 0` for an integer matrix with `cols` columns.
pub fn phase1(m: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Phase1 {
    debug_assert!(m.iter().all(|r| r.len() == cols));
    let small = m
        .iter()
        .map(|r| r.iter().map(i64::from_big).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .zip(b.iter().map(i64::from_big).collect::<Option<Vec<_>>>());
    if let Some((ms, bs)) = small {
        if let Some(out) = run::<i64>(&ms, &bs, cols) {
            return out;
        }
    }
    run::<BigInt>(m, b, cols).expect("arbitrary precision simplex cannot overflow")
}

/// [`phase1`] for machine-integer input.
pub fn phase1_small(m: &[Vec<i64>], b: &[i64], cols: usize) -> Phase1 {
    if let Some(out) = run::<i64>(m, b, cols) {
        return out;
    }
    let mb: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let bb: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
    run::<BigInt>(&mb, &bb, cols).expect("arbitrary precision simplex cannot overflow")
}

/// Result of asking for a point strictly inside `{x : g.x > 0 for all rows g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strict {
    Point(Vec<BigInt>),
    /// Nonnegative, nonzero multipliers with `sum y_j g_j = 0`.
    Empty(Vec<BigRational>),
}

/// Gordan alternative for an integer system `G x > 0` in dimension `dim`.
pub fn strict_point(rows: &[Vec<BigInt>], dim: usize) -> Strict {
    let m = rows.len();
    if m == 0 {
        return Strict::Point(vec![BigInt::zero(); dim]);
    }
    let mut mat = vec![vec![BigInt::zero(); m]; dim + 1];
    for (j, g) in rows.iter().enumerate() {
        for k in 0..dim {
            mat[k][j] = g[k].clone();
        }
        mat[dim][j] = BigInt::one();
    }
    let mut b = vec![BigInt::zero(); dim + 1];
    b[dim] = BigInt::one();
    match phase1(&mat, &b, m) {
        Phase1::Feasible { num, den } => Strict::Empty(
            num.into_iter()
                .map(|v| BigRational::new(v, den.clone()))
                .collect(),
        ),
        Phase1::Infeasible { farkas } => {
            let x: Vec<BigInt> = farkas[..dim].iter().map(|v| -v).collect();
            debug_assert!(rows.iter().all(|g| dot(g, &x).is_positive()));
            Strict::Point(x)
        }
    }
}

/// Like [`strict_point`] for machine-integer rows; returns the point when one exists.
pub fn strict_point_small(rows: &[Vec<i64>], dim: usize) -> Option<Vec<BigInt>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![BigInt::zero(); dim]);
    }
    let mut mat = vec![vec![0i64; m]; dim + 1];
    for (j, g) in rows.iter().enumerate() {
        for k in 0..dim {
            mat[k][j] = g[k];
        }
        mat[dim][j] = 1;
    }
    let mut b = vec![0i64; dim + 1];
    b[dim] = 1;
    match phase1_small(&mat, &b, m) {
        Phase1::Feasible { .. } => None,
        Phase1::Infeasible { farkas } => {
            let x: Vec<BigInt> = farkas[..dim].iter().map(|v| -v).collect();
            debug_assert!(rows.iter().all(|g| {
                g.iter().zip(&x).map(|(a, b)| BigInt::from(*a) * b).sum::<BigInt>().is_positive()
            }));
            Some(x)
        }
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn check(m: &[Vec<BigInt>], b: &[BigInt], out: &Phase1) {
        let cols = m.first().map_or(0, |r| r.len());
        match out {
            Phase1::Feasible { num, den } => {
                assert!(den.is_positive());
                assert!(num.iter().all(|v| !v.is_negative()));
                for (row, bi) in m.iter().zip(b) {
                    assert_eq!(dot(row, num), bi * den);
                }
            }
            Phase1::Infeasible { farkas } => {
                for j in 0..cols {
                    let s: BigInt = m.iter().zip(farkas).map(|(r, u)| &r[j] * u).sum();
                    assert!(!s.is_positive());
                }
                assert!(dot(farkas, b).is_positive());
            }
        }
    }

    #[test]
    fn simple_feasible_and_infeasible() {
        let m = big(&[&[1, 1], &[1, -1]]);
        let b = vec![BigInt::from(2), BigInt::from(0)];
        let out = phase1(&m, &b, 2);
        assert!(matches!(out, Phase1::Feasible { .. }));
        check(&m, &b, &out);

        let m = big(&[&[1, 1]]);
        let b = vec![BigInt::from(-1)];
        let out = phase1(&m, &b, 2);
        assert!(matches!(out, Phase1::Infeasible { .. }));
        check(&m, &b, &out);
    }

    #[test]
    fn gordan_on_square() {
        let rows = big(&[&[1, 0], &[0, 1]]);
        assert!(matches!(strict_point(&rows, 2), Strict::Point(_)));
        let rows = big(&[&[1, 0], &[-1, 0]]);
        match strict_point(&rows, 2) {
            Strict::Empty(y) => assert_eq!(y[0], y[1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bigint_fallback_on_huge_entries() {
        let h = BigInt::from(i64::MAX) * BigInt::from(4);
        let m = vec![vec![h.clone(), BigInt::from(1)], vec![BigInt::from(1), h.clone()]];
        let b = vec![h.clone(), BigInt::from(7)];
        let out = phase1(&m, &b, 2);
        check(&m, &b, &out);
    }

    proptest! {
        #[test]
        fn certificates_always_verify(
            entries in proptest::collection::vec(-4i64..=4, 12),
            rhs in proptest::collection::vec(-5i64..=5, 3),
        ) {
            let m: Vec<Vec<BigInt>> = entries.chunks(4)
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            let b: Vec<BigInt> = rhs.iter().map(|&v| BigInt::from(v)).collect();
            let out = phase1(&m, &b, 4);
            check(&m, &b, &out);
        }

        #[test]
        fn gordan_alternative_holds(entries in proptest::collection::vec(-3i64..=3, 15)) {
            let rows: Vec<Vec<BigInt>> = entries.chunks(3)
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            match strict_point(&rows, 3) {
                Strict::Point(x) => prop_assert!(rows.iter().all(|g| dot(g, &x).is_positive())),
                Strict::Empty(y) => {
                    prop_assert!(y.iter().all(|v| !v.is_negative()));
                    prop_assert!(y.iter().any(|v| v.is_positive()));
                    for k in 0..3 {
                        let s: BigRational = rows.iter().zip(&y)
                            .map(|(g, yj)| yj * BigRational::from(g[k].clone()))
                            .sum();
                        prop_assert!(s.is_zero());
                    }
                }
            }
        }
    }
}
