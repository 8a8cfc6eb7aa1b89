//! Characteristic polynomials by counting points of the complement over `F_q`.
//!
//! For a prime `q` larger than every minor of the normal matrix, reduction
//! mod `q` preserves the intersection lattice, so the number of points of
//! `F_q^d` off all hyperplanes equals `χ(q)`. Counting at `d + 1` primes
//! determines `χ`; three more primes are used as a check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Arrangement;
use crate::error::{Error, Result};
use crate::ratgeom::rank_int;

const EXTRA_PRIMES: usize = 3;
const EXACT_MINOR_LIMIT: u128 = 60_000_000;
const WORK_LIMIT: f64 = 6.0e9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    pub dim: usize,
    /// Coefficient of `q^i` at index `i`.
    #[serde(with = "decimal")]
    pub coeffs: Vec<BigInt>,
    pub primes: Vec<u64>,
    pub minor_bound: u64,
}

impl CharPoly {
    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    /// Number of regions, `(-1)^d χ(-1)`.
    pub fn regions(&self) -> Result<u64> {
        let v = self.eval(&BigInt::from(-1));
        let v = if self.dim % 2 == 1 { -v } else { v };
        v.to_u64()
            .ok_or_else(|| Error::Inconsistent(format!("region count {v} is not a natural number")))
    }
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

fn combinations(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn det_abs(mut a: Vec<Vec<i128>>) -> u128 {
    let k = a.len();
    let mut sign_prev: i128 = 1;
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        a.swap(c, p);
        for i in c + 1..k {
            for j in c + 1..k {
                a[i][j] = (a[c][c] * a[i][j] - a[i][c] * a[c][j]) / sign_prev;
            }
            a[i][c] = 0;
        }
        sign_prev = a[c][c];
    }
    a[k - 1][k - 1].unsigned_abs()
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn isqrt(v: &BigInt) -> BigInt {
    v.sqrt()
}

/// An upper bound on the absolute value of every square minor: exact when the
/// number of minors is moderate, Hadamard's bound otherwise.
pub fn max_minor_bound(a: &Arrangement) -> u64 {
    let m = a.len();
    let d = a.dim();
    let rows = a.normals();
    let work: u128 = (1..=d.min(m)).map(|k| binom(m, k) * binom(d, k)).sum();
    if work <= EXACT_MINOR_LIMIT {
        let mut best = 0u128;
        for k in 1..=d.min(m) {
            combinations(m, k, |ri| {
                combinations(d, k, |ci| {
                    let mat: Vec<Vec<i128>> =
                        ri.iter().map(|&r| ci.iter().map(|&c| rows[r][c] as i128).collect()).collect();
                    best = best.max(det_abs(mat));
                });
            });
        }
        return best as u64;
    }
    let mut norms: Vec<BigInt> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x * x)).sum())
        .collect();
    norms.sort_by(|x, y| y.cmp(x));
    let mut prod = BigInt::one();
    let mut best = BigInt::one();
    for n in norms.iter().take(d) {
        prod *= n;
        best = best.max(isqrt(&prod) + 1);
    }
    best.to_u64().unwrap_or(u64::MAX)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

struct Wall {
    /// `(position, coefficient mod q)` for support positions before the last.
    head: Vec<(usize, u64)>,
    /// `-1 / a_last mod q`.
    neg_inv: u64,
    last_coeff: u64,
}

struct Counter {
    q: u64,
    d: usize,
    symmetric: bool,
    by_last: Vec<Vec<Wall>>,
    words: usize,
}

impl Counter {
    fn new(a: &Arrangement, q: u64, symmetric: bool) -> Self {
        let d = a.dim();
        let mut by_last: Vec<Vec<Wall>> = (0..d).map(|_| Vec::new()).collect();
        for v in a.normals() {
            let last = (0..d).rev().find(|&i| v[i] != 0).expect("nonzero normal");
            let md = |x: i64| x.rem_euclid(q as i64) as u64;
            let a_last = md(v[last]);
            let inv = pow_mod(a_last, q - 2, q);
            by_last[last].push(Wall {
                head: (0..last).filter(|&i| v[i] != 0).map(|i| (i, md(v[i]))).collect(),
                neg_inv: (q - inv) % q,
                last_coeff: a_last,
            });
        }
        Counter {
            q,
            d,
            symmetric,
            by_last,
            words: (q as usize).div_ceil(64),
        }
    }

    fn head_sum(&self, w: &Wall, z: &[u64]) -> u64 {
        w.head.iter().fold(0u64, |acc, &(i, c)| (acc + c * z[i]) % self.q)
    }

    fn passes(&self, p: usize, z: &[u64]) -> bool {
        self.by_last[p]
            .iter()
            .all(|w| !(self.head_sum(w, z) + w.last_coeff * z[p]).is_multiple_of(self.q))
    }

    fn forbid(&self, p: usize, z: &[u64], buf: &mut [u64]) {
        buf.iter_mut().for_each(|x| *x = 0);
        for w in &self.by_last[p] {
            let f = self.head_sum(w, z) * w.neg_inv % self.q;
            buf[(f / 64) as usize] |= 1 << (f % 64);
        }
    }

    fn allowed_from(&self, buf: &[u64], lo: u64) -> impl Iterator<Item = u64> + '_ {
        let q = self.q;
        let buf = buf.to_vec();
        (lo..q).filter(move |&v| buf[(v / 64) as usize] >> (v % 64) & 1 == 0)
    }

    fn count_allowed_from(&self, buf: &[u64], lo: u64) -> u64 {
        let mut c = 0;
        for (w, &word) in buf.iter().enumerate().take(self.words) {
            let start = (w as u64) * 64;
            let end = (start + 64).min(self.q);
            if end <= lo {
                continue;
            }
            let mut mask = if end - start == 64 { u64::MAX } else { (1u64 << (end - start)) - 1 };
            if lo > start {
                mask &= !((1u64 << (lo - start)) - 1);
            }
            c += (!word & mask).count_ones() as u64;
        }
        c
    }

    fn is_allowed(buf: &[u64], v: u64) -> bool {
        buf[(v / 64) as usize] >> (v % 64) & 1 == 0
    }

    /// Sum over completions of free positions `p..d`, weighted by the number
    /// of distinct rearrangements in symmetric mode.
    #[allow(clippy::too_many_arguments)]
    fn go(&self, p: usize, z: &mut Vec<u64>, bufs: &mut [Vec<u64>], prev: u64, run: u128, denom: u128, fact: u128) -> u128 {
        let mut buf = std::mem::take(&mut bufs[p]);
        self.forbid(p, z, &mut buf);
        let lo = if self.symmetric { prev.max(1) } else { 0 };
        let mut total = 0u128;
        if p + 1 == self.d {
            if self.symmetric {
                let above = self.count_allowed_from(&buf, prev + 1) as u128;
                total += above * (fact / denom);
                if prev >= 1 && Self::is_allowed(&buf, prev) {
                    total += fact / (denom * (run + 1));
                }
            } else {
                total = self.count_allowed_from(&buf, 0) as u128;
            }
        } else {
            let values: Vec<u64> = self.allowed_from(&buf, lo).collect();
            for v in values {
                z[p] = v;
                let (r, dn) = if self.symmetric && v == prev { (run + 1, denom * (run + 1)) } else { (1, denom) };
                total += self.go(p + 1, z, bufs, v, r, dn, fact);
            }
            z[p] = 0;
        }
        bufs[p] = buf;
        total
    }

    fn count(&self) -> u128 {
        let d = self.d;
        let mut bufs: Vec<Vec<u64>> = (0..d).map(|_| vec![0u64; self.words]).collect();
        let mut sum = 0u128;
        for k in 0..d {
            // z = (0, ..., 0, 1, free...) with the 1 at position k.
            let mut z = vec![0u64; d];
            z[k] = 1;
            if !(0..=k).all(|p| self.passes(p, &z)) {
                continue;
            }
            let free = d - k - 1;
            let weight = if self.symmetric { binom(d, k) } else { 1 };
            let n_k = if free == 0 {
                1
            } else {
                let fact: u128 = (1..=free as u128).product();
                self.go(k + 1, &mut z, &mut bufs, 0, 0, 1, fact)
            };
            sum += weight * n_k;
        }
        sum * (self.q as u128 - 1)
    }
}

/// `#(F_q^d minus the hyperplanes)` for a prime `q` above the minor bound.
pub(crate) fn count_points(a: &Arrangement, q: u64) -> u128 {
    if a.is_empty() {
        return (q as u128).pow(a.dim() as u32);
    }
    Counter::new(a, q, a.is_symmetric()).count()
}

fn estimated_work(a: &Arrangement, q: u64, symmetric: bool) -> f64 {
    let d = a.dim();
    (0..d)
        .map(|k| {
            let free = d - k - 1;
            if free <= 1 {
                1.0
            } else if symmetric {
                binom(q as usize + free - 3, free - 1) as f64
            } else {
                (q as f64).powi(free as i32 - 1)
            }
        })
        .sum::<f64>()
        * (a.len() as f64 / d as f64).max(1.0)
}

fn interpolate(xs: &[u64], ys: &[u128]) -> Vec<BigRational> {
    let n = xs.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = BigRational::from_integer(BigInt::from(xs[j]));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (t, c) in basis.iter().enumerate() {
                next[t + 1] += c;
                next[t] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(xs[i])) - xj;
        }
        let scale = BigRational::from_integer(BigInt::from(ys[i])) / denom;
        for (t, c) in basis.iter().enumerate() {
            coeffs[t] += c * &scale;
        }
    }
    coeffs
}

/// Coordinates whose columns span the column space of the normal matrix.
/// Dropping the others keeps every linear dependency among the normals.
fn spanning_columns(a: &Arrangement) -> Vec<usize> {
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let mut keep = Vec::new();
    for j in 0..a.dim() {
        cols.push(a.normals().iter().map(|v| BigInt::from(v[j])).collect());
        if rank_int(&cols) == keep.len() + 1 {
            keep.push(j);
        } else {
            cols.pop();
        }
    }
    keep
}

pub fn characteristic_polynomial(a: &Arrangement) -> Result<CharPoly> {
    let keep = spanning_columns(a);
    if !a.is_empty() && keep.len() < a.dim() {
        let restricted = Arrangement::new(
            keep.len(),
            a.normals().iter().map(|v| keep.iter().map(|&j| v[j]).collect()).collect(),
        )?;
        let mut p = essential_polynomial(&restricted)?;
        let shift = a.dim() - keep.len();
        p.coeffs.splice(0..0, std::iter::repeat_n(BigInt::zero(), shift));
        p.dim = a.dim();
        return Ok(p);
    }
    essential_polynomial(a)
}

fn essential_polynomial(a: &Arrangement) -> Result<CharPoly> {
    let d = a.dim();
    let bound = max_minor_bound(a);
    let mut primes = Vec::with_capacity(d + 1 + EXTRA_PRIMES);
    let mut p = bound.max(1) + 1;
    while primes.len() < d + 1 + EXTRA_PRIMES {
        if is_prime(p) {
            primes.push(p);
        }
        p += 1;
    }
    let symmetric = a.is_symmetric();
    let work: f64 = primes.iter().map(|&q| estimated_work(a, q, symmetric)).sum();
    if work > WORK_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "point counting needs primes above {bound}; estimated {work:.2e} steps"
        )));
    }
    let counts: Vec<u128> = primes.iter().map(|&q| count_points(a, q)).collect();
    let fit = interpolate(&primes[..d + 1], &counts[..d + 1]);
    let mut coeffs = Vec::with_capacity(d + 1);
    for c in &fit {
        if !c.is_integer() {
            return Err(Error::Inconsistent(format!("non-integral coefficient {c}")));
        }
        coeffs.push(c.to_integer());
    }
    if coeffs[d] != BigInt::one() {
        return Err(Error::Inconsistent("characteristic polynomial is not monic".into()));
    }
    let poly = CharPoly {
        dim: d,
        coeffs,
        primes: primes.clone(),
        minor_bound: bound,
    };
    for (q, c) in primes.iter().zip(&counts).skip(d + 1) {
        if poly.eval(&BigInt::from(*q)) != BigInt::from(*c) {
            return Err(Error::Inconsistent(format!("point count at q = {q} disagrees")));
        }
    }
    if poly.coeffs.iter().enumerate().any(|(i, c)| {
        let expected_sign = if (d - i).is_multiple_of(2) { 1 } else { -1 };
        !c.is_zero() && c.signum() != BigInt::from(expected_sign)
    }) {
        return Err(Error::Inconsistent("coefficients do not alternate in sign".into()));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::{build_b, count_regions_in_cone_with};

    fn brute_points(a: &Arrangement, q: u64) -> u128 {
        let d = a.dim();
        let mut z = vec![0u64; d];
        let mut c = 0;
        loop {
            let ok = a.normals().iter().all(|v| {
                v.iter().zip(&z).map(|(&x, &y)| x.rem_euclid(q as i64) as u64 * y).sum::<u64>() % q != 0
            });
            c += ok as u128;
            let mut i = 0;
            while i < d {
                z[i] += 1;
                if z[i] < q {
                    break;
                }
                z[i] = 0;
                i += 1;
            }
            if i == d {
                return c;
            }
        }
    }

    #[test]
    fn point_counts_match_brute_force() {
        let sym = build_b(5, 2).unwrap();
        let skew = Arrangement::new(3, vec![vec![1, 0, 0], vec![1, 2, 0], vec![0, 1, -3], vec![1, 1, 1]]).unwrap();
        for q in [7u64, 11, 13] {
            assert_eq!(count_points(&sym, q), brute_points(&sym, q));
            assert_eq!(count_points(&skew, q), brute_points(&skew, q));
        }
    }

    #[test]
    fn coordinate_arrangement() {
        let a = Arrangement::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let p = characteristic_polynomial(&a).unwrap();
        // (q - 1)^3
        assert_eq!(p.coeffs, vec![BigInt::from(-1), BigInt::from(3), BigInt::from(-3), BigInt::from(1)]);
        assert_eq!(p.regions().unwrap(), 8);
    }

    #[test]
    fn minor_bound_is_exact_for_small_cases() {
        let a = Arrangement::new(2, vec![vec![1, 0], vec![1, 3], vec![2, -1]]).unwrap();
        assert_eq!(max_minor_bound(&a), 7);
        // the circulant of (1, 1, 1, 0, 0) has determinant 3
        assert_eq!(max_minor_bound(&build_b(6, 3).unwrap()), 3);
    }

    #[test]
    fn non_essential_arrangements() {
        let a = Arrangement::new(3, vec![vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]]).unwrap();
        let p = characteristic_polynomial(&a).unwrap();
        // q (q - 1) (q - 2)
        assert_eq!(p.coeffs, vec![BigInt::zero(), BigInt::from(2), BigInt::from(-3), BigInt::one()]);
        assert_eq!(p.regions().unwrap(), 6);
    }

    #[test]
    fn agrees_with_enumeration() {
        for a in [build_b(6, 3).unwrap(), build_b(6, 2).unwrap(), build_b(5, 2).unwrap()] {
            let p = characteristic_polynomial(&a).unwrap();
            assert_eq!(p.regions().unwrap(), count_regions_in_cone_with(&a, &[]).unwrap());
        }
    }
}
