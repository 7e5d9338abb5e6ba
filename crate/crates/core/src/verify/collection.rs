//! The exceptional collection and the auxiliary objects of the triangles.

use serde::{Deserialize, Serialize};

use crate::chain::{numerics, Degree};
use crate::error::{Error, Result};
use crate::mf::{MPoly, MatrixFactorization, RingRef};

/// Data for one Koszul stabilization: generators, cofactors, twist.
#[derive(Clone, Debug)]
pub struct Recipe {
    pub p: Vec<MPoly>,
    pub h: Vec<MPoly>,
    pub twist: Degree,
}

impl Recipe {
    pub fn build(&self, ring: &RingRef) -> Result<MatrixFactorization> {
        MatrixFactorization::stabilize(ring, &self.p, &self.h, &self.twist)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionSpec {
    pub chain: Vec<u32>,
    pub offset: i64,
    /// Indices `offset, .., offset + mu - 1`.
    pub indices: Vec<i64>,
}

/// `x_v^e` for 1-based `v`, with `x_{n+1} = 1`.
fn xp(ring: &RingRef, v: usize, e: u32) -> MPoly {
    if v > ring.n() {
        ring.one()
    } else {
        ring.var(v - 1, e)
    }
}

fn a(ring: &RingRef, v: usize) -> u32 {
    ring.chain().a(v - 1) as u32
}

/// `x_{v-1}^{a_{v-1}} + x_v^{a_v - 1} x_{v+1}`: the cofactor of `x_v`.
fn middle_cofactor(ring: &RingRef, v: usize) -> MPoly {
    xp(ring, v - 1, a(ring, v - 1)).add(&xp(ring, v, a(ring, v) - 1).mul(&xp(ring, v + 1, 1)))
}

/// Twist of the `i`-th collection member: `+i x1` for even `n`, `-i x1` for odd.
pub fn collection_twist(ring: &RingRef, i: i64) -> Degree {
    let g = ring.group();
    let sign = if ring.n() % 2 == 0 { 1 } else { -1 };
    g.scale(sign * i, &g.x(0))
}

/// `E_i`: stabilization of `S/(x2, x4, ..)` (even `n`) or `S/(x1, x3, ..)`
/// (odd `n`), twisted by `collection_twist(i)`.
pub fn collection_recipe(ring: &RingRef, i: i64) -> Recipe {
    generalized_recipe(ring, i, 1)
}

/// For odd `n`, replaces the generator `x1` by `x1^j` (the ladder objects);
/// `j = 1` gives `E_i`.
fn generalized_recipe(ring: &RingRef, i: i64, j: u32) -> Recipe {
    let n = ring.n();
    let (mut p, mut h) = (Vec::new(), Vec::new());
    if n % 2 == 0 {
        for v in (2..=n).step_by(2) {
            p.push(xp(ring, v, 1));
            h.push(middle_cofactor(ring, v));
        }
    } else {
        p.push(xp(ring, 1, j));
        h.push(xp(ring, 1, a(ring, 1) - j).mul(&xp(ring, 2, 1)));
        for v in (3..=n).step_by(2) {
            p.push(xp(ring, v, 1));
            h.push(middle_cofactor(ring, v));
        }
    }
    Recipe { p, h, twist: collection_twist(ring, i) }
}

pub fn build_collection(ring: &RingRef, offset: i64) -> Result<(CollectionSpec, Vec<MatrixFactorization>)> {
    let mu = numerics(ring.chain()).mu_n();
    let indices: Vec<i64> = (offset..offset + mu).collect();
    let objects = indices.iter().map(|&i| collection_recipe(ring, i).build(ring)).collect::<Result<Vec<_>>>()?;
    let spec = CollectionSpec { chain: ring.chain().exponents().to_vec(), offset, indices };
    Ok((spec, objects))
}

/// `E'_i` for even `n`: stabilization of `S/(x1, x2, x4, .., x_{2m})` twisted by `i x1`.
pub fn prime_recipe(ring: &RingRef, i: i64) -> Result<Recipe> {
    let n = ring.n();
    if n % 2 == 1 {
        return Err(Error::InvalidChain("E' is only defined for an even number of variables".into()));
    }
    let mut p = vec![xp(ring, 1, 1), xp(ring, 2, 1)];
    let mut h = vec![
        xp(ring, 1, a(ring, 1) - 1).mul(&xp(ring, 2, 1)),
        xp(ring, 2, a(ring, 2) - 1).mul(&xp(ring, 3, 1)),
    ];
    for v in (4..=n).step_by(2) {
        p.push(xp(ring, v, 1));
        h.push(middle_cofactor(ring, v));
    }
    Ok(Recipe { p, h, twist: collection_twist(ring, i) })
}

/// `E''_{i,j}` for odd `n >= 3`: stabilization of `S/(x1^j, x3, ..)` twisted
/// by `-i x1`; `None` stands for the zero object at `j = 0` and `j = a1 + 1`.
pub fn ladder_recipe(ring: &RingRef, i: i64, j: u32) -> Result<Option<Recipe>> {
    let n = ring.n();
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidChain("the ladder needs an odd number n >= 3 of variables".into()));
    }
    let a1 = a(ring, 1);
    if j == 0 || j > a1 {
        return Ok(None);
    }
    Ok(Some(generalized_recipe(ring, i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mf::Ring;

    #[test]
    fn sizes_and_twists() {
        let ring = Ring::new(&"2,2".parse().unwrap()).unwrap();
        let (spec, objs) = build_collection(&ring, 0).unwrap();
        assert_eq!(spec.indices, vec![0, 1, 2]);
        assert!(objs.iter().all(|e| e.size() == 1));
        let g = ring.group();
        assert_eq!(objs[2].module0().twists[0], g.neg(&g.scale(2, &g.x(0))));

        let ring = Ring::new(&"2,2,2".parse().unwrap()).unwrap();
        let (_, objs) = build_collection(&ring, 0).unwrap();
        assert_eq!(objs.len(), 5);
        assert!(objs.iter().all(|e| e.size() == 2));

        let ring = Ring::new(&"2".parse().unwrap()).unwrap();
        let (_, objs) = build_collection(&ring, 0).unwrap();
        assert_eq!(objs.len(), 1);
        assert_eq!(objs[0].f0().get(0, 0), &ring.var(0, 1));
    }

    #[test]
    fn auxiliary_objects_build() {
        let ring = Ring::new(&"3,2".parse().unwrap()).unwrap();
        prime_recipe(&ring, 1).unwrap().build(&ring).unwrap();
        let ring = Ring::new(&"2,3,2".parse().unwrap()).unwrap();
        for j in 1..=2 {
            ladder_recipe(&ring, 0, j).unwrap().unwrap().build(&ring).unwrap();
        }
        assert!(ladder_recipe(&ring, 0, 3).unwrap().is_none());
    }
}
