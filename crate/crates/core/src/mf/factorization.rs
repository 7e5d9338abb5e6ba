//! Matrix factorizations and morphisms between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::graded::{zero_poly, GradedFreeModule, GradedMatrix, RingRef};
use super::poly::MPoly;
use crate::chain::Degree;
use crate::error::{Error, Result};
use crate::exactmath::BigRat;

/// `F0 --f0--> F1 --f1--> F0(f)` with both composites equal to `f * id`.
#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    ring: RingRef,
    f0: GradedMatrix,
    f1: GradedMatrix,
}

impl PartialEq for MatrixFactorization {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.f0 == other.f0 && self.f1 == other.f1
    }
}

impl MatrixFactorization {
    /// Validates homogeneity and both composition identities.
    pub fn new(ring: &RingRef, f0: GradedMatrix, f1: GradedMatrix) -> Result<Self> {
        let g = ring.group();
        if f0.shift != g.zero() || f1.shift != g.f() {
            return Err(Error::NotFactorization("f0 must have shift 0 and f1 shift f".into()));
        }
        if f0.source != f1.target || f0.target != f1.source {
            return Err(Error::NotFactorization("modules of f0 and f1 do not match".into()));
        }
        if f0.source.rank() != f0.target.rank() {
            return Err(Error::NotFactorization("F0 and F1 have different ranks".into()));
        }
        f0.check_homogeneous(ring)?;
        f1.check_homogeneous(ring)?;
        let mf = MatrixFactorization { ring: ring.clone(), f0, f1 };
        mf.check_identities()?;
        Ok(mf)
    }

    fn from_parts(ring: &RingRef, f0: GradedMatrix, f1: GradedMatrix) -> Self {
        MatrixFactorization { ring: ring.clone(), f0, f1 }
    }

    pub fn check_identities(&self) -> Result<()> {
        let f = self.ring.f();
        if !self.f1.compose(&self.ring, &self.f0)?.is_scalar_identity(f) {
            return Err(Error::NotFactorization("f1 * f0 != f * id".into()));
        }
        if !self.f0.compose(&self.ring, &self.f1)?.is_scalar_identity(f) {
            return Err(Error::NotFactorization("f0 * f1 != f * id".into()));
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn f0(&self) -> &GradedMatrix {
        &self.f0
    }

    pub fn f1(&self) -> &GradedMatrix {
        &self.f1
    }

    pub fn module0(&self) -> &GradedFreeModule {
        &self.f0.source
    }

    pub fn module1(&self) -> &GradedFreeModule {
        &self.f0.target
    }

    pub fn size(&self) -> usize {
        self.module0().rank()
    }

    pub fn zero(ring: &RingRef) -> Self {
        let g = ring.group();
        let e = GradedFreeModule::new(Vec::new());
        MatrixFactorization::from_parts(
            ring,
            GradedMatrix::zero(e.clone(), e.clone(), g.zero()),
            GradedMatrix::zero(e.clone(), e, g.f()),
        )
    }

    /// The contractible factorization `S(-l) --1--> S(-l) --f--> S(-l)(f)`.
    pub fn trivial(ring: &RingRef, l: &Degree) -> Self {
        let g = ring.group();
        let m = GradedFreeModule::new(vec![l.clone()]);
        let f0 = GradedMatrix::new_unchecked(m.clone(), m.clone(), g.zero(), vec![ring.one()]).unwrap();
        let f1 = GradedMatrix::new_unchecked(m.clone(), m, g.f(), vec![ring.f().clone()]).unwrap();
        MatrixFactorization::from_parts(ring, f0, f1)
    }

    /// Koszul stabilization of `S/(p_1..p_s)` for `f = sum p_i h_i`, followed
    /// by the grading shift `(twist)`.
    ///
    /// With `P = sum S(-deg p_i)`, `F0 = sum_k (Λ^{2k} P)(k f)` and
    /// `F1 = sum_k (Λ^{2k-1} P)(k f)`; both differentials are contraction with
    /// `p` plus wedge with `h`. For `s = 1` this is `f0 = (h)`, `f1 = (p)`.
    pub fn stabilize(ring: &RingRef, p: &[MPoly], h: &[MPoly], twist: &Degree) -> Result<Self> {
        let s = p.len();
        if s == 0 || h.len() != s {
            return Err(Error::NotFactorization("need s >= 1 generators and as many cofactors".into()));
        }
        if s > 16 {
            return Err(Error::NotFactorization("too many generators".into()));
        }
        let g = ring.group();
        let mut sum = MPoly::zero();
        let mut pdeg = Vec::with_capacity(s);
        for (pi, hi) in p.iter().zip(h) {
            let dp = ring
                .homogeneous_degree(pi)?
                .ok_or_else(|| Error::NotFactorization("zero generator".into()))?;
            let dh = ring
                .homogeneous_degree(hi)?
                .ok_or_else(|| Error::NotFactorization("zero cofactor".into()))?;
            if g.add(&dp, &dh) != g.f() {
                return Err(Error::Inhomogeneous(format!("deg({pi}) + deg({hi}) != f")));
            }
            pdeg.push(dp);
            sum.add_assign(&pi.mul(hi));
        }
        if &sum != ring.f() {
            return Err(Error::NotFactorization(format!("sum p_i h_i = {sum} differs from f")));
        }

        let subsets: Vec<u32> = (0u32..1 << s).collect();
        let even: Vec<u32> = subsets.iter().copied().filter(|m| m.count_ones() % 2 == 0).collect();
        let odd: Vec<u32> = subsets.iter().copied().filter(|m| m.count_ones() % 2 == 1).collect();
        let twist_of = |mask: u32| {
            let k = (mask.count_ones() as i64 + 1) / 2;
            let mut t = g.scale(-k, &g.f());
            for (i, d) in pdeg.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    t = g.add(&t, d);
                }
            }
            t
        };
        let m0 = GradedFreeModule::new(even.iter().map(|&m| twist_of(m)).collect());
        let m1 = GradedFreeModule::new(odd.iter().map(|&m| twist_of(m)).collect());
        let index0: BTreeMap<u32, usize> = even.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let index1: BTreeMap<u32, usize> = odd.iter().enumerate().map(|(k, &m)| (m, k)).collect();

        // Koszul differential on the basis vector e_I, as (target subset, coefficient).
        let koszul = |mask: u32| -> Vec<(u32, MPoly)> {
            let mut out = Vec::new();
            let mut position = 0;
            for i in 0..s {
                let bit = 1u32 << i;
                if mask & bit != 0 {
                    let sign = if position % 2 == 0 { 1 } else { -1 };
                    out.push((mask & !bit, p[i].scale(&BigRat::from_integer(sign.into()))));
                    position += 1;
                } else {
                    let below = (mask & (bit - 1)).count_ones();
                    let sign = if below % 2 == 0 { 1 } else { -1 };
                    out.push((mask | bit, h[i].scale(&BigRat::from_integer(sign.into()))));
                }
            }
            out
        };
        let build = |src: &[u32], tgt_index: &BTreeMap<u32, usize>, rows: usize| {
            let mut entries = vec![MPoly::zero(); rows * src.len()];
            for (c, &mask) in src.iter().enumerate() {
                for (t, poly) in koszul(mask) {
                    let r = tgt_index[&t];
                    entries[r * src.len() + c].add_assign(&poly);
                }
            }
            entries
        };
        let e0 = build(&even, &index1, odd.len());
        let e1 = build(&odd, &index0, even.len());
        let f0 = GradedMatrix::new(ring, m0.clone(), m1.clone(), g.zero(), e0)?;
        let f1 = GradedMatrix::new(ring, m1, m0, g.f(), e1)?;
        let mf = MatrixFactorization::new(ring, f0, f1)?;
        Ok(mf.shift(twist))
    }

    /// `F(l)`: generator degrees drop by `l`, entries unchanged.
    pub fn shift(&self, l: &Degree) -> Self {
        let r = &self.ring;
        let m0 = self.module0().shifted(r, l);
        let m1 = self.module1().shifted(r, l);
        MatrixFactorization::from_parts(
            r,
            self.f0.relabel(m0.clone(), m1.clone(), self.f0.shift.clone()),
            self.f1.relabel(m1, m0, self.f1.shift.clone()),
        )
    }

    /// `TF = (F1 --(-f1)--> F0(f) --(-f0)--> F1(f))`.
    pub fn translate(&self) -> Self {
        let r = &self.ring;
        let g = r.group();
        let n0 = self.module1().clone();
        let n1 = self.module0().shifted(r, &g.f());
        let f0 = self.f1.neg().relabel(n0.clone(), n1.clone(), g.zero());
        let f1 = self.f0.neg().relabel(n1, n0, g.f());
        MatrixFactorization::from_parts(r, f0, f1)
    }

    pub fn translate_pow(&self, p: i64) -> Self {
        let g = self.ring.group();
        let k = p.div_euclid(2);
        let base = self.shift(&g.scale(k, &g.f()));
        if p.rem_euclid(2) == 1 {
            base.translate()
        } else {
            base
        }
    }

    /// Serre functor `T^n (-(x_1 + ... + x_n))`.
    pub fn serre(&self) -> Self {
        let g = self.ring.group();
        let n = g.n();
        let mut expr = vec![-1i64; n];
        expr.push(0);
        let shifted = self.shift(&g.canonicalize(&expr));
        shifted.translate_pow(n as i64)
    }

    pub fn direct_sum(&self, other: &MatrixFactorization) -> Result<Self> {
        self.same_ring(other)?;
        let g = self.ring.group();
        let m0 = self.module0().concat(other.module0());
        let m1 = self.module1().concat(other.module1());
        let (a, b) = (self, other);
        let (s0, s1) = (a.module1().rank(), a.module0().rank());
        let f0 = GradedMatrix::blocks(
            m0.clone(),
            m1.clone(),
            g.zero(),
            s0,
            s1,
            [&|r, c| a.f0.get(r, c).clone(), &zero_poly, &zero_poly, &|r, c| b.f0.get(r, c).clone()],
        );
        let f1 = GradedMatrix::blocks(
            m1,
            m0,
            g.f(),
            s1,
            s0,
            [&|r, c| a.f1.get(r, c).clone(), &zero_poly, &zero_poly, &|r, c| b.f1.get(r, c).clone()],
        );
        Ok(MatrixFactorization::from_parts(&self.ring, f0, f1))
    }

    fn same_ring(&self, other: &MatrixFactorization) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch("factorizations over different rings".into()))
        }
    }

    /// Repeatedly splits off contractible summands `(u, f/u)` at constant
    /// entries `u` until no constant entry remains.
    pub fn reduce(&self) -> Self {
        let mut cur = self.clone();
        loop {
            if let Some((r, c)) = find_unit(&cur.f0) {
                let (a, b) = eliminate(&cur.f0, &cur.f1, r, c);
                cur = MatrixFactorization::from_parts(&cur.ring, a, b);
            } else if let Some((r, c)) = find_unit(&cur.f1) {
                let (b, a) = eliminate(&cur.f1, &cur.f0, r, c);
                cur = MatrixFactorization::from_parts(&cur.ring, a, b);
            } else {
                return cur;
            }
        }
    }

    /// Mapping cone of a morphism; a morphism of nonzero shift `l` is first
    /// read as a degree-0 map out of `source(-l)`.
    pub fn cone(phi: &MFMorphism) -> Result<Self> {
        phi.validate()?;
        let ring = phi.source.ring.clone();
        let g = ring.group();
        let src = phi.source.shift(&g.neg(&phi.shift));
        let tgt = &phi.target;
        let (f0, f1) = (src.f0(), src.f1());
        let (g0, g1) = (tgt.f0(), tgt.f1());
        let (p0, p1) = (&phi.phi0, &phi.phi1);
        let c0 = tgt.module0().concat(src.module1());
        let c1 = tgt.module1().concat(&src.module0().shifted(&ring, &g.f()));
        let (n_g0, n_g1) = (tgt.module0().rank(), tgt.module1().rank());
        let d0 = GradedMatrix::blocks(
            c0.clone(),
            c1.clone(),
            g.zero(),
            n_g1,
            n_g0,
            [&|r, c| g0.get(r, c).clone(), &|r, c| p1.get(r, c).clone(), &zero_poly, &|r, c| f1.get(r, c).neg()],
        );
        let d1 = GradedMatrix::blocks(
            c1,
            c0,
            g.f(),
            n_g0,
            n_g1,
            [&|r, c| g1.get(r, c).clone(), &|r, c| p0.get(r, c).clone(), &zero_poly, &|r, c| f0.get(r, c).neg()],
        );
        MatrixFactorization::new(&ring, d0, d1)
    }

    pub fn to_json(&self) -> MfJson {
        MfJson {
            chain: self.ring.chain().exponents().to_vec(),
            twists0: self.module0().twists.clone(),
            twists1: self.module1().twists.clone(),
            f0: self.f0.entries().iter().map(poly_to_map).collect(),
            f1: self.f1.entries().iter().map(poly_to_map).collect(),
        }
    }

    pub fn from_json(ring: &RingRef, json: &MfJson) -> Result<Self> {
        if json.chain != ring.chain().exponents() {
            return Err(Error::AmbientMismatch("serialized factorization belongs to another chain".into()));
        }
        let g = ring.group();
        let m0 = GradedFreeModule::new(json.twists0.iter().map(|d| g.canonicalize_coords(d)).collect::<Result<_>>()?);
        let m1 = GradedFreeModule::new(json.twists1.iter().map(|d| g.canonicalize_coords(d)).collect::<Result<_>>()?);
        let n = ring.n();
        let e0 = json.f0.iter().map(|m| poly_from_map(m, n)).collect::<Result<Vec<_>>>()?;
        let e1 = json.f1.iter().map(|m| poly_from_map(m, n)).collect::<Result<Vec<_>>>()?;
        let f0 = GradedMatrix::new_unchecked(m0.clone(), m1.clone(), g.zero(), e0)?;
        let f1 = GradedMatrix::new_unchecked(m1, m0, g.f(), e1)?;
        MatrixFactorization::new(ring, f0, f1)
    }
}

fn find_unit(m: &GradedMatrix) -> Option<(usize, usize)> {
    (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).find(|&(r, c)| m.get(r, c).as_unit().is_some())
}

/// Eliminate the unit `a[r][c]`: returns the Schur complement of `a` and the
/// matching minor of `b` (`b` maps back from `a`'s target to `a`'s source).
fn eliminate(a: &GradedMatrix, b: &GradedMatrix, r: usize, c: usize) -> (GradedMatrix, GradedMatrix) {
    let u_inv = BigRat::one() / a.get(r, c).as_unit().unwrap();
    let rows: Vec<usize> = (0..a.rows()).filter(|&i| i != r).collect();
    let cols: Vec<usize> = (0..a.cols()).filter(|&j| j != c).collect();
    let mut ea = Vec::with_capacity(rows.len() * cols.len());
    for &i in &rows {
        let factor = a.get(i, c).scale(&u_inv);
        for &j in &cols {
            let mut p = a.get(i, j).clone();
            if !factor.is_zero() {
                p = p.sub(&factor.mul(a.get(r, j)));
            }
            ea.push(p);
        }
    }
    let mut eb = Vec::with_capacity(rows.len() * cols.len());
    for &j in &cols {
        for &i in &rows {
            eb.push(b.get(j, i).clone());
        }
    }
    let src = GradedFreeModule::new(cols.iter().map(|&j| a.source.twists[j].clone()).collect());
    let tgt = GradedFreeModule::new(rows.iter().map(|&i| a.target.twists[i].clone()).collect());
    let na = GradedMatrix::new_unchecked(src.clone(), tgt.clone(), a.shift.clone(), ea).unwrap();
    let nb = GradedMatrix::new_unchecked(tgt, src, b.shift.clone(), eb).unwrap();
    (na, nb)
}

/// A morphism `F -> G(l)`, given by `phi0: F0 -> G0` and `phi1: F1 -> G1`
/// of common shift `l`.
#[derive(Clone, Debug)]
pub struct MFMorphism {
    pub source: MatrixFactorization,
    pub target: MatrixFactorization,
    pub shift: Degree,
    pub phi0: GradedMatrix,
    pub phi1: GradedMatrix,
}

impl MFMorphism {
    pub fn new(
        source: &MatrixFactorization,
        target: &MatrixFactorization,
        shift: Degree,
        phi0: Vec<MPoly>,
        phi1: Vec<MPoly>,
    ) -> Result<Self> {
        source.same_ring(target)?;
        let ring = source.ring();
        let p0 = GradedMatrix::new(ring, source.module0().clone(), target.module0().clone(), shift.clone(), phi0)?;
        let p1 = GradedMatrix::new(ring, source.module1().clone(), target.module1().clone(), shift.clone(), phi1)?;
        let m = MFMorphism { source: source.clone(), target: target.clone(), shift, phi0: p0, phi1: p1 };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(f: &MatrixFactorization) -> Self {
        let ring = f.ring();
        let id = |m: &GradedFreeModule| {
            let k = m.rank();
            let entries = (0..k * k).map(|x| if x / k == x % k { ring.one() } else { MPoly::zero() }).collect();
            GradedMatrix::new_unchecked(m.clone(), m.clone(), ring.group().zero(), entries).unwrap()
        };
        MFMorphism {
            source: f.clone(),
            target: f.clone(),
            shift: ring.group().zero(),
            phi0: id(f.module0()),
            phi1: id(f.module1()),
        }
    }

    pub fn zero(source: &MatrixFactorization, target: &MatrixFactorization, shift: Degree) -> Self {
        MFMorphism {
            source: source.clone(),
            target: target.clone(),
            phi0: GradedMatrix::zero(source.module0().clone(), target.module0().clone(), shift.clone()),
            phi1: GradedMatrix::zero(source.module1().clone(), target.module1().clone(), shift.clone()),
            shift,
        }
    }

    /// `phi1 f0 = g0 phi0` and `phi0 f1 = g1 phi1`.
    pub fn validate(&self) -> Result<()> {
        let r = self.source.ring();
        let lhs = self.phi1.compose(r, self.source.f0())?;
        let rhs = self.target.f0().compose(r, &self.phi0)?;
        if lhs.entries() != rhs.entries() {
            return Err(Error::InvalidMorphism("phi1 f0 != g0 phi0".into()));
        }
        let lhs = self.phi0.compose(r, self.source.f1())?;
        let rhs = self.target.f1().compose(r, &self.phi1)?;
        if lhs.entries() != rhs.entries() {
            return Err(Error::InvalidMorphism("phi0 f1 != g1 phi1".into()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.phi0.is_zero() && self.phi1.is_zero()
    }
}

/// Serialized form of a factorization: twist lists in canonical coordinates
/// and entries as sparse `"e1,..,en" -> "coefficient"` maps, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfJson {
    pub chain: Vec<u32>,
    pub twists0: Vec<Degree>,
    pub twists1: Vec<Degree>,
    pub f0: Vec<BTreeMap<String, String>>,
    pub f1: Vec<BTreeMap<String, String>>,
}

fn poly_to_map(p: &MPoly) -> BTreeMap<String, String> {
    p.terms()
        .map(|(m, c)| {
            let key: Vec<String> = m.iter().map(u32::to_string).collect();
            (key.join(","), c.to_string())
        })
        .collect()
}

fn poly_from_map(map: &BTreeMap<String, String>, n: usize) -> Result<MPoly> {
    let mut p = MPoly::zero();
    for (k, v) in map {
        let m: Vec<u32> = k
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Serde(format!("bad exponent key {k:?}: {e}")))?;
        if m.len() != n {
            return Err(Error::Serde(format!("exponent key {k:?} has wrong length")));
        }
        let c: BigRat = v.parse().map_err(|e| Error::Serde(format!("bad coefficient {v:?}: {e:?}")))?;
        p.add_term(&m, &c);
    }
    Ok(p)
}
