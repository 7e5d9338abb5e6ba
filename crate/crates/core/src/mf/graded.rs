//! The ambient graded ring and graded maps between free modules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::One;

use super::poly::{MPoly, Monomial};
use crate::chain::{ChainPolynomial, Degree, GradingGroup};
use crate::error::{Error, Result};
use crate::exactmath::BigRat;

/// `S = C[x_1..x_n]` graded by `L_f`, together with `f` itself.
#[derive(Debug)]
pub struct Ring {
    group: GradingGroup,
    f: MPoly,
    basis_memo: Mutex<HashMap<Degree, Arc<Vec<Monomial>>>>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(chain: &ChainPolynomial) -> Result<RingRef> {
        let group = GradingGroup::build(chain)?;
        let mut f = MPoly::zero();
        for m in chain.monomials() {
            f.add_term(&m, &BigRat::one());
        }
        Ok(Arc::new(Ring { group, f, basis_memo: Mutex::new(HashMap::new()) }))
    }

    pub fn chain(&self) -> &ChainPolynomial {
        self.group.chain()
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn f(&self) -> &MPoly {
        &self.f
    }

    pub fn var(&self, i: usize, e: u32) -> MPoly {
        MPoly::var_pow(self.n(), i, e)
    }

    pub fn one(&self) -> MPoly {
        MPoly::one(self.n())
    }

    /// Memoized monomial basis of `S_l`.
    pub fn basis(&self, l: &Degree) -> Arc<Vec<Monomial>> {
        if let Some(b) = self.basis_memo.lock().unwrap().get(l) {
            return b.clone();
        }
        let b = Arc::new(self.group.monomial_basis(l));
        self.basis_memo.lock().unwrap().insert(l.clone(), b.clone());
        b
    }

    /// `Some(l)` if every term of `p` has degree `l`; `None` for zero.
    pub fn homogeneous_degree(&self, p: &MPoly) -> Result<Option<Degree>> {
        let mut deg: Option<Degree> = None;
        for (m, _) in p.terms() {
            let d = self.group.monomial_degree(m);
            match &deg {
                None => deg = Some(d),
                Some(e) if *e == d => {}
                Some(_) => return Err(Error::Inhomogeneous(format!("{p}"))),
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous_of(&self, p: &MPoly, l: &Degree) -> bool {
        p.terms().all(|(m, _)| &self.group.monomial_degree(m) == l)
    }
}

/// `F = sum_j S(-l_j)`; the generator of the `j`-th summand sits in degree `l_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedFreeModule {
    pub twists: Vec<Degree>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<Degree>) -> Self {
        GradedFreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// `F(l)`: every generator degree drops by `l`.
    pub fn shifted(&self, ring: &Ring, l: &Degree) -> Self {
        GradedFreeModule { twists: self.twists.iter().map(|t| ring.group().sub(t, l)).collect() }
    }

    pub fn concat(&self, other: &GradedFreeModule) -> Self {
        GradedFreeModule { twists: self.twists.iter().chain(&other.twists).cloned().collect() }
    }
}

/// Degree-preserving map `source -> target(shift)`, stored as a
/// `target.rank() x source.rank()` polynomial matrix.
///
/// Entry `(r, c)` is homogeneous of degree `source_c - target_r + shift`;
/// the constructor checks this term by term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    pub shift: Degree,
    entries: Vec<MPoly>,
}

impl GradedMatrix {
    pub fn new(
        ring: &Ring,
        source: GradedFreeModule,
        target: GradedFreeModule,
        shift: Degree,
        entries: Vec<MPoly>,
    ) -> Result<Self> {
        let m = GradedMatrix::new_unchecked(source, target, shift, entries)?;
        m.check_homogeneous(ring)?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: GradedFreeModule,
        target: GradedFreeModule,
        shift: Degree,
        entries: Vec<MPoly>,
    ) -> Result<Self> {
        if entries.len() != source.rank() * target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} graded matrix",
                entries.len(),
                target.rank(),
                source.rank()
            )));
        }
        Ok(GradedMatrix { source, target, shift, entries })
    }

    pub fn zero(source: GradedFreeModule, target: GradedFreeModule, shift: Degree) -> Self {
        let entries = vec![MPoly::zero(); source.rank() * target.rank()];
        GradedMatrix { source, target, shift, entries }
    }

    pub fn rows(&self) -> usize {
        self.target.rank()
    }

    pub fn cols(&self) -> usize {
        self.source.rank()
    }

    pub fn get(&self, r: usize, c: usize) -> &MPoly {
        &self.entries[r * self.cols() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: MPoly) {
        let cols = self.cols();
        self.entries[r * cols + c] = p;
    }

    pub fn entries(&self) -> &[MPoly] {
        &self.entries
    }

    pub fn entry_degree(&self, ring: &Ring, r: usize, c: usize) -> Degree {
        let g = ring.group();
        g.add(&g.sub(&self.source.twists[c], &self.target.twists[r]), &self.shift)
    }

    pub fn check_homogeneous(&self, ring: &Ring) -> Result<()> {
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let p = self.get(r, c);
                if p.is_zero() {
                    continue;
                }
                let want = self.entry_degree(ring, r, c);
                if !ring.is_homogeneous_of(p, &want) {
                    return Err(Error::Inhomogeneous(format!(
                        "entry ({r},{c}) = {p} is not of degree {:?}",
                        want.0
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        GradedMatrix { entries: self.entries.iter().map(MPoly::neg).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        GradedMatrix { entries: self.entries.iter().map(|p| p.scale(c)).collect(), ..self.clone() }
    }

    /// `self * other` as polynomial matrices: `other: A -> B(s1)`, `self: B -> C(s2)`.
    pub fn compose(&self, ring: &Ring, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        let mut entries = vec![MPoly::zero(); self.rows() * other.cols()];
        for r in 0..self.rows() {
            for k in 0..self.cols() {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols() {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        entries[r * other.cols() + c].add_assign(&a.mul(b));
                    }
                }
            }
        }
        let shift = ring.group().add(&self.shift, &other.shift);
        GradedMatrix::new_unchecked(other.source.clone(), self.target.clone(), shift, entries)
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch("sum of incompatible maps".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(GradedMatrix { entries, ..self.clone() })
    }

    /// Whether this is `c * id` as a polynomial matrix.
    pub fn is_scalar_identity(&self, c: &MPoly) -> bool {
        self.rows() == self.cols()
            && (0..self.rows()).all(|r| {
                (0..self.cols()).all(|k| if r == k { self.get(r, k) == c } else { self.get(r, k).is_zero() })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MPoly::is_zero)
    }

    /// Same entries, relabelled source/target/shift.
    pub(crate) fn relabel(&self, source: GradedFreeModule, target: GradedFreeModule, shift: Degree) -> Self {
        GradedMatrix { source, target, shift, entries: self.entries.clone() }
    }

    /// Block matrix `[[a, b], [c, d]]`, blocks given in row-major order.
    pub(crate) fn blocks(
        source: GradedFreeModule,
        target: GradedFreeModule,
        shift: Degree,
        split_rows: usize,
        split_cols: usize,
        blocks: [&dyn Fn(usize, usize) -> MPoly; 4],
    ) -> Self {
        let (rows, cols) = (target.rank(), source.rank());
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let p = match (r < split_rows, c < split_cols) {
                    (true, true) => blocks[0](r, c),
                    (true, false) => blocks[1](r, c - split_cols),
                    (false, true) => blocks[2](r - split_rows, c),
                    (false, false) => blocks[3](r - split_rows, c - split_cols),
                };
                entries.push(p);
            }
        }
        GradedMatrix { source, target, shift, entries }
    }
}

pub(crate) fn zero_poly(_: usize, _: usize) -> MPoly {
    MPoly::zero()
}
