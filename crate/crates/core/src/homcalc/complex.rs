//! Graded pieces of the 2-periodic Hom complex between two factorizations.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::Zero;

use crate::chain::Degree;
use crate::error::{Error, Result};
use crate::exactmath::{extend_basis, kernel, rank_sparse, BigRat, SparseEchelon, SparseRow};
use crate::mf::{GradedFreeModule, GradedMatrix, MFMorphism, MPoly, MatrixFactorization, Monomial, Ring};

static HOM_DIM_CALLS: AtomicU64 = AtomicU64::new(0);

/// Number of [`hom_dim`] evaluations performed by this process so far.
pub fn hom_dim_calls() -> u64 {
    HOM_DIM_CALLS.load(Ordering::Relaxed)
}

/// All polynomial maps `source -> target(shift)` of degree 0, with one
/// coordinate per (slot, monomial).
struct MapSpace {
    rows: usize,
    cols: usize,
    bases: Vec<Arc<Vec<Monomial>>>,
    index: Vec<HashMap<Monomial, usize>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl MapSpace {
    fn new(ring: &Ring, source: &GradedFreeModule, target: &GradedFreeModule, shift: &Degree) -> Self {
        let g = ring.group();
        let (rows, cols) = (target.rank(), source.rank());
        let mut bases = Vec::with_capacity(rows * cols);
        let mut index = Vec::with_capacity(rows * cols);
        let mut offsets = Vec::with_capacity(rows * cols);
        let mut dim = 0;
        for r in 0..rows {
            for c in 0..cols {
                let deg = g.add(&g.sub(&source.twists[c], &target.twists[r]), shift);
                let b = ring.basis(&deg);
                offsets.push(dim);
                dim += b.len();
                index.push(b.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect());
                bases.push(b);
            }
        }
        MapSpace { rows, cols, bases, index, offsets, dim }
    }

    fn coordinate(&self, r: usize, c: usize, m: &Monomial) -> usize {
        let slot = r * self.cols + c;
        let k = self.index[slot]
            .get(m)
            .unwrap_or_else(|| panic!("monomial {m:?} outside the graded piece of slot ({r},{c})"));
        self.offsets[slot] + k
    }

    /// Basis elements as `(row, col, monomial)`, in coordinate order.
    fn elements(&self) -> impl Iterator<Item = (usize, usize, &Monomial)> + '_ {
        (0..self.rows * self.cols)
            .flat_map(move |slot| self.bases[slot].iter().map(move |m| (slot / self.cols, slot % self.cols, m)))
    }

    fn to_matrix(&self, coords: &[BigRat]) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.rows * self.cols];
        for (k, (r, c, m)) in self.elements().enumerate() {
            if !coords[k].is_zero() {
                out[r * self.cols + c].add_term(m, &coords[k]);
            }
        }
        out
    }

    fn from_matrix(&self, m: &GradedMatrix, out: &mut [BigRat]) {
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (mono, coef) in m.get(r, c).terms() {
                    out[self.coordinate(r, c, mono)] += coef;
                }
            }
        }
    }
}

enum Side<'a> {
    /// `X * phi`
    Left(&'a GradedMatrix),
    /// `phi * X`
    Right(&'a GradedMatrix),
}

struct Term<'a> {
    from: usize,
    to: usize,
    side: Side<'a>,
    sign: i64,
}

/// Images of every basis vector of `src` under a sum of left/right products,
/// one sparse row per source coordinate.
fn images(src: &[&MapSpace], dst: &[&MapSpace], terms: &[Term]) -> Vec<SparseRow> {
    let offsets: Vec<usize> = dst.iter().scan(0, |acc, s| {
        let o = *acc;
        *acc += s.dim;
        Some(o)
    }).collect();
    let mut out = Vec::new();
    for (b, space) in src.iter().enumerate() {
        for (r, c, m) in space.elements() {
            let mut row: BTreeMap<usize, BigRat> = BTreeMap::new();
            for t in terms.iter().filter(|t| t.from == b) {
                let target = dst[t.to];
                let base = offsets[t.to];
                let sign = BigRat::from_integer(t.sign.into());
                match t.side {
                    // X * E_{rc}: column c of the result is column r of X.
                    Side::Left(x) => {
                        for k in 0..x.rows() {
                            for (mono, coef) in x.get(k, r).terms() {
                                let e: Monomial = mono.iter().zip(m).map(|(a, b)| a + b).collect();
                                *row.entry(base + target.coordinate(k, c, &e)).or_default() += coef * &sign;
                            }
                        }
                    }
                    // E_{rc} * X: row r of the result is row c of X.
                    Side::Right(x) => {
                        for k in 0..x.cols() {
                            for (mono, coef) in x.get(c, k).terms() {
                                let e: Monomial = mono.iter().zip(m).map(|(a, b)| a + b).collect();
                                *row.entry(base + target.coordinate(r, k, &e)).or_default() += coef * &sign;
                            }
                        }
                    }
                }
            }
            out.push(row.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    out
}

fn densify(rows: &[SparseRow], n: usize) -> Vec<Vec<BigRat>> {
    rows.iter()
        .map(|r| {
            let mut v = vec![BigRat::zero(); n];
            for (k, x) in r {
                v[*k] = x.clone();
            }
            v
        })
        .collect()
}

/// The degree-`l` piece `C^{-1} -> C^0 -> C^1` of the Hom complex from `F`
/// to `G`, where `C^0` holds pairs `(phi0, phi1)`, `C^{-1}` homotopies
/// `(psi0: F0 -> G1(-f), psi1: F1 -> G0)`.
pub struct HomComplex<'a> {
    source: &'a MatrixFactorization,
    target: &'a MatrixFactorization,
    degree: Degree,
    c0: [MapSpace; 2],
    c1_dim: usize,
    /// Rows: images of `C^0` basis vectors under the differential.
    d_rows: Vec<SparseRow>,
    /// Rows: images of `C^{-1}` basis vectors (null-homotopic maps).
    h_rows: Vec<SparseRow>,
}

impl<'a> HomComplex<'a> {
    pub fn new(source: &'a MatrixFactorization, target: &'a MatrixFactorization, l: &Degree) -> Result<Self> {
        if !Arc::ptr_eq(source.ring(), target.ring()) {
            return Err(Error::AmbientMismatch("hom between factorizations over different rings".into()));
        }
        let ring = source.ring();
        let g = ring.group();
        let (f0m, f1m) = (source.module0(), source.module1());
        let (g0m, g1m) = (target.module0(), target.module1());
        let lf = g.add(l, &g.f());
        let l_minus_f = g.sub(l, &g.f());
        let c0 = [MapSpace::new(ring, f0m, g0m, l), MapSpace::new(ring, f1m, g1m, l)];
        let c1 = [MapSpace::new(ring, f0m, g1m, l), MapSpace::new(ring, f1m, g0m, &lf)];
        let cm = [MapSpace::new(ring, f0m, g1m, &l_minus_f), MapSpace::new(ring, f1m, g0m, l)];
        let (fa, fb) = (source.f0(), source.f1());
        let (ga, gb) = (target.f0(), target.f1());
        // D(phi0, phi1) = (phi1 f0 - g0 phi0, phi0 f1 - g1 phi1)
        let d_terms = [
            Term { from: 1, to: 0, side: Side::Right(fa), sign: 1 },
            Term { from: 0, to: 0, side: Side::Left(ga), sign: -1 },
            Term { from: 0, to: 1, side: Side::Right(fb), sign: 1 },
            Term { from: 1, to: 1, side: Side::Left(gb), sign: -1 },
        ];
        // h(psi0, psi1) = (g1 psi0 + psi1 f0, psi0 f1 + g0 psi1)
        let h_terms = [
            Term { from: 0, to: 0, side: Side::Left(gb), sign: 1 },
            Term { from: 1, to: 0, side: Side::Right(fa), sign: 1 },
            Term { from: 0, to: 1, side: Side::Right(fb), sign: 1 },
            Term { from: 1, to: 1, side: Side::Left(ga), sign: 1 },
        ];
        let d_rows = images(&[&c0[0], &c0[1]], &[&c1[0], &c1[1]], &d_terms);
        let h_rows = images(&[&cm[0], &cm[1]], &[&c0[0], &c0[1]], &h_terms);
        let c1_dim = c1[0].dim + c1[1].dim;
        Ok(HomComplex { source, target, degree: l.clone(), c0, c1_dim, d_rows, h_rows })
    }

    pub fn cycles_ambient_dim(&self) -> usize {
        self.c0[0].dim + self.c0[1].dim
    }

    /// `dim ker D - dim im h`.
    pub fn dim(&self) -> usize {
        let n = self.cycles_ambient_dim();
        if n == 0 {
            return 0;
        }
        let rd = rank_sparse(&self.d_rows);
        let rh = rank_sparse(&self.h_rows);
        n - rd - rh
    }

    fn kernel_vectors(&self) -> Vec<Vec<BigRat>> {
        let n = self.cycles_ambient_dim();
        let dt = densify(&self.d_rows, self.c1_dim);
        // d_rows holds D^T; transpose to get D.
        let d: Vec<Vec<BigRat>> = (0..self.c1_dim).map(|j| dt.iter().map(|r| r[j].clone()).collect()).collect();
        kernel(&d, n)
    }

    fn to_morphism(&self, v: &[BigRat]) -> MFMorphism {
        let split = self.c0[0].dim;
        let p0 = self.c0[0].to_matrix(&v[..split]);
        let p1 = self.c0[1].to_matrix(&v[split..]);
        let (s, t) = (self.source, self.target);
        MFMorphism {
            source: s.clone(),
            target: t.clone(),
            shift: self.degree.clone(),
            phi0: GradedMatrix::new_unchecked(s.module0().clone(), t.module0().clone(), self.degree.clone(), p0)
                .expect("slot count"),
            phi1: GradedMatrix::new_unchecked(s.module1().clone(), t.module1().clone(), self.degree.clone(), p1)
                .expect("slot count"),
        }
    }

    /// Closed morphisms whose classes form a basis of the homotopy classes.
    pub fn basis(&self) -> Vec<MFMorphism> {
        let ker = self.kernel_vectors();
        let h = densify(&self.h_rows, self.cycles_ambient_dim());
        extend_basis(&h, &ker).iter().map(|v| self.to_morphism(v)).collect()
    }

    pub fn coordinates(&self, phi: &MFMorphism) -> Vec<BigRat> {
        let mut v = vec![BigRat::zero(); self.cycles_ambient_dim()];
        let split = self.c0[0].dim;
        let (a, b) = v.split_at_mut(split);
        self.c0[0].from_matrix(&phi.phi0, a);
        self.c0[1].from_matrix(&phi.phi1, b);
        v
    }

    /// Whether `phi` (which must live in this complex) is in the image of `h`.
    pub fn is_null_homotopic(&self, phi: &MFMorphism) -> bool {
        let v: SparseRow =
            self.coordinates(phi).into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
        let mut e = SparseEchelon::new();
        for r in &self.h_rows {
            e.insert(r);
        }
        e.contains(&v)
    }
}

/// `dim Hom(F, T^parity G (l))` in the homotopy category.
pub fn hom_dim(source: &MatrixFactorization, target: &MatrixFactorization, l: &Degree, parity: u8) -> Result<usize> {
    HOM_DIM_CALLS.fetch_add(1, Ordering::Relaxed);
    if parity % 2 == 1 {
        let t = target.translate();
        return HomComplex::new(source, &t, l).map(|c| c.dim());
    }
    HomComplex::new(source, target, l).map(|c| c.dim())
}

/// `dim Hom(F, T^p G)` for any integer `p`, via `T^2 = (f)`.
pub fn hom_dim_p(source: &MatrixFactorization, target: &MatrixFactorization, p: i64) -> Result<usize> {
    let g = source.ring().group();
    let l = g.scale(p.div_euclid(2), &g.f());
    hom_dim(source, target, &l, p.rem_euclid(2) as u8)
}

/// Representatives of a basis of `Hom(F, G(l))`.
pub fn hom_basis(source: &MatrixFactorization, target: &MatrixFactorization, l: &Degree) -> Result<Vec<MFMorphism>> {
    Ok(HomComplex::new(source, target, l)?.basis())
}

/// Whether a closed morphism is null-homotopic.
pub fn is_null_homotopic(phi: &MFMorphism) -> Result<bool> {
    phi.validate()?;
    Ok(HomComplex::new(&phi.source, &phi.target, &phi.shift)?.is_null_homotopic(phi))
}

/// A single morphism-space query.
#[derive(Clone, Debug)]
pub struct HomQuery {
    pub source: MatrixFactorization,
    pub target: MatrixFactorization,
    pub degree: Degree,
    pub parity: u8,
}

impl HomQuery {
    pub fn dim(&self) -> Result<usize> {
        hom_dim(&self.source, &self.target, &self.degree, self.parity)
    }
}
