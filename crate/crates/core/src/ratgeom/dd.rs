//! Double description: extreme rays and lineality of `{x : A x >= 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::lp::dot;
use super::{make_primitive, rref_int};

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    tight: Vec<u64>,
}

fn set_bit(bits: &mut Vec<u64>, k: usize, on: bool) {
    let w = k / 64;
    if bits.len() <= w {
        bits.resize(w + 1, 0);
    }
    if on {
        bits[w] |= 1 << (k % 64);
    }
}

fn covers(big: &[u64], small: &[u64]) -> bool {
    small
        .iter()
        .enumerate()
        .all(|(i, &s)| s & !big.get(i).copied().unwrap_or(0) == 0)
}

fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn combine(ca: &BigInt, a: &[BigInt], cb: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| ca * x - cb * y).collect();
    make_primitive(&mut v);
    v
}

/// Rays and a lineality basis of the cone cut out by `ineqs` in dimension `dim`.
///
/// Rays are primitive, orthogonal to the lineality space, pairwise distinct,
/// and sorted. The lineality basis is the primitive row-reduced basis.
pub(crate) fn dd(ineqs: &[Vec<BigInt>], dim: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut lin: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in ineqs.iter().enumerate() {
        let ldots: Vec<BigInt> = lin.iter().map(|l| dot(a, l)).collect();
        if let Some(p) = ldots.iter().position(|x| !x.is_zero()) {
            let mut l0 = lin.remove(p);
            let mut a0 = ldots[p].clone();
            if a0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -&*x);
                a0 = -a0;
            }
            let others: Vec<BigInt> = ldots
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != p)
                .map(|(_, x)| x.clone())
                .collect();
            for (l, al) in lin.iter_mut().zip(&others) {
                if !al.is_zero() {
                    *l = combine(&a0, l, al, &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&a0, &r.v, &ar, &l0);
                }
                set_bit(&mut r.tight, k, true);
            }
            let mut tight = Vec::new();
            for j in 0..k {
                set_bit(&mut tight, j, true);
            }
            set_bit(&mut tight, k, false);
            rays.push(Ray { v: l0, tight });
            continue;
        }

        let dots: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| dots[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if !dots[i].is_negative() {
                let mut r = r.clone();
                set_bit(&mut r.tight, k, dots[i].is_zero());
                next.push(r);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let z = meet(&rays[p].tight, &rays[q].tight);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !covers(&r.tight, &z));
                if !adjacent {
                    continue;
                }
                let v = combine(&dots[p], &rays[q].v, &dots[q], &rays[p].v);
                let mut tight = z;
                set_bit(&mut tight, k, true);
                next.push(Ray { v, tight });
            }
        }
        rays = next;
    }

    let lin = rref_int(&lin);
    let mut out: Vec<Vec<BigInt>> = rays
        .into_iter()
        .map(|r| super::project_off(&r.v, &lin))
        .collect();
    out.sort();
    out.dedup();
    (out, lin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn orthant_and_halfplane() {
        let (rays, lin) = dd(&big(&[&[1, 0], &[0, 1]]), 2);
        assert_eq!(rays, big(&[&[0, 1], &[1, 0]]));
        assert!(lin.is_empty());

        let (rays, lin) = dd(&big(&[&[1, 1]]), 2);
        assert_eq!(rays, big(&[&[1, 1]]));
        assert_eq!(lin, big(&[&[1, -1]]));
    }

    #[test]
    fn square_pyramid() {
        let ineqs = big(&[&[1, 1, 0], &[1, -1, 0], &[1, 0, 1], &[1, 0, -1]]);
        let (rays, lin) = dd(&ineqs, 3);
        assert!(lin.is_empty());
        assert_eq!(rays, big(&[&[1, -1, -1], &[1, -1, 1], &[1, 1, -1], &[1, 1, 1]]));
    }

    #[test]
    fn redundant_inequalities_drop_out() {
        let ineqs = big(&[&[1, 0], &[0, 1], &[1, 1], &[2, 1]]);
        let (rays, _) = dd(&ineqs, 2);
        assert_eq!(rays, big(&[&[0, 1], &[1, 0]]));
    }
}
