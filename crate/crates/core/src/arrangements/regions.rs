//! Region enumeration by inserting hyperplanes one at a time.
//!
//! Every node of the search is an open region of the hyperplanes inserted so
//! far, carried with an exact interior point that avoids every hyperplane of
//! the arrangement. A new hyperplane splits a region exactly when the region
//! meets its other side, which one strict-feasibility LP decides.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{canonical_normal, Arrangement};
use crate::error::{Error, Result};
use crate::ratgeom::lp::strict_point_small;
use crate::ratgeom::RatVector;

/// An open region: one sign per hyperplane, in arrangement order, and an interior point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    pub signs: Vec<i8>,
    pub witness: RatVector,
}

struct Search<'a> {
    dim: usize,
    /// Hyperplanes in insertion order, with their arrangement index.
    order: Vec<(usize, &'a [i64])>,
    all: Vec<&'a [i64]>,
    delta: Vec<BigInt>,
    delta_dots: Vec<BigInt>,
}

fn dot(a: &[i64], x: &[BigInt]) -> BigInt {
    a.iter().zip(x).map(|(&p, q)| q * p).sum()
}

impl<'a> Search<'a> {
    fn new(a: &'a Arrangement, cone: &'a [Vec<i64>]) -> Self {
        let dim = a.dim();
        let facets: Vec<Vec<i64>> = cone.iter().filter_map(|r| canonical_normal(r)).collect();
        let mut first = Vec::new();
        let mut rest = Vec::new();
        for (i, v) in a.normals().iter().enumerate() {
            if facets.contains(v) {
                first.push((i, v.as_slice()));
            } else {
                rest.push((i, v.as_slice()));
            }
        }
        first.extend(rest);
        let mut all: Vec<&[i64]> = a.normals().iter().map(Vec::as_slice).collect();
        all.extend(cone.iter().map(Vec::as_slice));
        let m = all.iter().flat_map(|v| v.iter()).map(|x| x.abs()).max().unwrap_or(1);
        let base = BigInt::from(2 * m * dim as i64 + 1);
        let mut delta = Vec::with_capacity(dim);
        let mut p = BigInt::from(1);
        for _ in 0..dim {
            delta.push(p.clone());
            p *= &base;
        }
        let delta_dots = all.iter().map(|v| dot(v, &delta).abs()).collect();
        Search {
            dim,
            order: first,
            all,
            delta,
            delta_dots,
        }
    }

    /// Move a point strictly inside `constraints` off every hyperplane.
    fn generic(&self, x: Vec<BigInt>) -> Vec<BigInt> {
        if self.all.iter().all(|v| !dot(v, &x).is_zero()) {
            return x;
        }
        // With g.x >= 1 on constraints and K > |h.δ| everywhere, K x + δ keeps
        // every strict sign of x and is nonzero on every h.
        let k = self.delta_dots.iter().max().cloned().unwrap_or_default() + 1;
        let y: Vec<BigInt> = x.iter().zip(&self.delta).map(|(a, d)| a * &k + d).collect();
        debug_assert!(self.all.iter().all(|v| !dot(v, &y).is_zero()));
        y
    }

    fn root(&self, cone: &[Vec<i64>]) -> Result<Vec<BigInt>> {
        let x = strict_point_small(cone, self.dim)
            .ok_or_else(|| Error::Precondition("cone has empty interior".into()))?;
        Ok(self.generic(x))
    }

    fn dfs<F: FnMut(&[i8], &[BigInt])>(
        &self,
        k: usize,
        rows: &mut Vec<Vec<i64>>,
        signs: &mut Vec<i8>,
        w: Vec<BigInt>,
        visit: &mut F,
    ) {
        if k == self.order.len() {
            visit(signs, &w);
            return;
        }
        let h = self.order[k].1;
        let s: i8 = if dot(h, &w).is_positive() { 1 } else { -1 };
        let signed = |sg: i8| -> Vec<i64> { h.iter().map(|&x| x * sg as i64).collect() };
        rows.push(signed(-s));
        let other = strict_point_small(rows, self.dim).map(|x| self.generic(x));
        rows.pop();

        rows.push(signed(s));
        signs.push(s);
        self.dfs(k + 1, rows, signs, w, visit);
        signs.pop();
        rows.pop();

        if let Some(x) = other {
            rows.push(signed(-s));
            signs.push(-s);
            self.dfs(k + 1, rows, signs, x, visit);
            signs.pop();
            rows.pop();
        }
    }

    /// Breadth-first expansion until at least `want` open nodes exist.
    #[cfg(feature = "parallel")]
    fn frontier(&self, cone: &[Vec<i64>], want: usize) -> Result<Vec<Node>> {
        let mut nodes = vec![Node {
            k: 0,
            rows: cone.to_vec(),
            signs: Vec::new(),
            w: self.root(cone)?,
        }];
        while nodes.len() < want && nodes.iter().any(|n| n.k < self.order.len()) {
            let mut next = Vec::with_capacity(nodes.len() * 2);
            for node in nodes {
                if node.k == self.order.len() {
                    next.push(node);
                    continue;
                }
                let h = self.order[node.k].1;
                let s: i8 = if dot(h, &node.w).is_positive() { 1 } else { -1 };
                let signed = |sg: i8| -> Vec<i64> { h.iter().map(|&x| x * sg as i64).collect() };
                let mut rows = node.rows.clone();
                rows.push(signed(-s));
                if let Some(x) = strict_point_small(&rows, self.dim) {
                    let mut signs = node.signs.clone();
                    signs.push(-s);
                    next.push(Node {
                        k: node.k + 1,
                        rows,
                        signs,
                        w: self.generic(x),
                    });
                }
                let mut rows = node.rows;
                rows.push(signed(s));
                let mut signs = node.signs;
                signs.push(s);
                next.push(Node {
                    k: node.k + 1,
                    rows,
                    signs,
                    w: node.w,
                });
            }
            nodes = next;
        }
        Ok(nodes)
    }
}

#[cfg(feature = "parallel")]
struct Node {
    k: usize,
    rows: Vec<Vec<i64>>,
    signs: Vec<i8>,
    w: Vec<BigInt>,
}

fn check_cone(a: &Arrangement, cone: &[Vec<i64>]) -> Result<()> {
    for r in cone {
        if r.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: r.len(),
            });
        }
        let c = canonical_normal(r).ok_or(Error::ZeroVector("cone inequality"))?;
        if a.normals().binary_search(&c).is_err() {
            return Err(Error::Precondition(format!("cone facet {r:?} is not a hyperplane")));
        }
    }
    Ok(())
}

/// Regions inside `{x : g.x > 0 for g in cone}`; an empty list means the whole space.
pub fn count_regions_in_cone_with(a: &Arrangement, cone: &[Vec<i64>]) -> Result<u64> {
    check_cone(a, cone)?;
    let search = Search::new(a, cone);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let want = 8 * rayon::current_num_threads().max(1);
        if want > 8 {
            let nodes = search.frontier(cone, want)?;
            return Ok(nodes
                .into_par_iter()
                .map(|node| {
                    let mut count = 0u64;
                    let mut rows = node.rows;
                    let mut signs = node.signs;
                    search.dfs(node.k, &mut rows, &mut signs, node.w, &mut |_, _| count += 1);
                    count
                })
                .sum());
        }
    }
    let mut count = 0u64;
    let mut rows = cone.to_vec();
    let root = search.root(cone)?;
    search.dfs(0, &mut rows, &mut Vec::new(), root, &mut |_, _| count += 1);
    Ok(count)
}

/// All regions inside the cone, with signs in arrangement order, sorted by signs.
pub fn enumerate_regions(a: &Arrangement, cone: &[Vec<i64>]) -> Result<Vec<Chamber>> {
    check_cone(a, cone)?;
    let search = Search::new(a, cone);
    let mut out = Vec::new();
    let mut rows = cone.to_vec();
    let root = search.root(cone)?;
    let order: Vec<usize> = search.order.iter().map(|&(i, _)| i).collect();
    search.dfs(0, &mut rows, &mut Vec::new(), root, &mut |signs, w| {
        let mut s = vec![0i8; signs.len()];
        for (pos, &i) in order.iter().enumerate() {
            s[i] = signs[pos];
        }
        out.push(Chamber {
            signs: s,
            witness: RatVector::from_big(w),
        });
    });
    out.sort_by(|x, y| x.signs.cmp(&y.signs));
    Ok(out)
}
