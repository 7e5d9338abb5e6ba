//! Vanishing windows, Hom tables and Euler pairings of a collection.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::hom_dim_p;
use crate::chain::{Degree, GradingGroup};
use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;
use crate::mf::MatrixFactorization;

/// Largest weight of a `C^0` slot degree of `Hom(F, G)`; `None` when one
/// side is the zero object.
pub fn max_slot_weight(source: &MatrixFactorization, target: &MatrixFactorization) -> Option<i64> {
    let g = source.ring().group();
    let pairs = [(source.module0(), target.module0()), (source.module1(), target.module1())];
    pairs
        .iter()
        .flat_map(|(a, b)| {
            a.twists.iter().flat_map(move |s| b.twists.iter().map(move |t| g.weight(&g.sub(s, t))))
        })
        .max()
}

/// Least `p` for which `Hom(F, T^p G)` can be nonzero by weight positivity.
fn lower_bound(source: &MatrixFactorization, target: &MatrixFactorization) -> Option<i64> {
    let d = source.ring().group().f_weight();
    let mut best: Option<i64> = None;
    for eps in 0..2 {
        let t = if eps == 1 { target.translate() } else { target.clone() };
        if let Some(m) = max_slot_weight(source, &t) {
            let p = 2 * Integer::div_ceil(&-m, &d) + eps;
            best = Some(best.map_or(p, |b| b.min(p)));
        }
    }
    best
}

/// `(pmin, pmax)` such that `Hom(F, T^p G) = 0` outside the window. The lower
/// end comes from weight positivity of the `C^0` slots, the upper end from the
/// same bound applied to the Serre-dual query `Hom(G, T^{-p} S F)`. `None`
/// when the window is empty.
pub fn scan_window(source: &MatrixFactorization, target: &MatrixFactorization) -> Option<(i64, i64)> {
    scan_bounds(source, target).filter(|(lo, hi)| lo <= hi)
}

/// The two bounds behind [`scan_window`], possibly crossed (`lo > hi`).
/// `None` only when one side is the zero object.
pub fn scan_bounds(source: &MatrixFactorization, target: &MatrixFactorization) -> Option<(i64, i64)> {
    let lo = lower_bound(source, target)?;
    let hi = -lower_bound(target, &source.serre())?;
    Some((lo, hi))
}

/// Weight range outside which `Hom(F, T^parity G (l))` vanishes.
pub fn degree_weight_bounds(
    source: &MatrixFactorization,
    target: &MatrixFactorization,
    parity: u8,
) -> Option<(i64, i64)> {
    let t = if parity % 2 == 1 { target.translate() } else { target.clone() };
    let lo = -max_slot_weight(source, &t)?;
    let dual = source.serre().translate_pow(-((parity % 2) as i64));
    let hi = max_slot_weight(target, &dual)?;
    (lo <= hi).then_some((lo, hi))
}

/// Every degree `k x_1 + j f` (`0 <= k < d_n`) with weight in `[lo, hi]`.
pub fn degrees_in_weight_range(g: &GradingGroup, lo: i64, hi: i64) -> Vec<Degree> {
    let dn = crate::chain::numerics(g.chain()).d_n();
    let (w1, d) = (g.weights()[0], g.f_weight());
    let (x1, f) = (g.x(0), g.f());
    let mut out = Vec::new();
    for k in 0..dn {
        let base = k * w1;
        let jmin = Integer::div_ceil(&(lo - base), &d);
        let jmax = Integer::div_floor(&(hi - base), &d);
        for j in jmin..=jmax {
            out.push(g.add(&g.scale(k, &x1), &g.scale(j, &f)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomEntry {
    pub i: usize,
    pub j: usize,
    pub p: i64,
    pub dim: usize,
}

/// `dim Hom(E_i, T^p E_j)` for every pair of a collection and every `p` in
/// `window` (the union of the per-pair scan windows, widened by a margin).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomTable {
    pub chain: Vec<u32>,
    pub entries: Vec<HomEntry>,
    pub window: (i64, i64),
}

impl HomTable {
    /// Computes, in parallel, every cell within each pair's own scan window
    /// widened by `margin` (for an empty window, the gap between the crossed
    /// bounds widened by `margin`). Cells outside a pair's scan window vanish,
    /// so the margin only serves as an empirical check of the bound.
    pub fn compute(collection: &[MatrixFactorization], margin: i64) -> Result<HomTable> {
        let ring = collection.first().ok_or_else(|| Error::DimensionMismatch("empty collection".into()))?.ring();
        let k = collection.len();
        let bounds: Vec<Option<(i64, i64)>> = (0..k * k)
            .into_par_iter()
            .map(|ij| scan_bounds(&collection[ij / k], &collection[ij % k]))
            .collect();
        let open = || bounds.iter().flatten().filter(|w| w.0 <= w.1);
        let lo = open().map(|w| w.0).min().unwrap_or(0) - margin;
        let hi = open().map(|w| w.1).max().unwrap_or(0) + margin;
        let cells: Vec<(usize, usize, i64)> = bounds
            .iter()
            .enumerate()
            .filter_map(|(ij, w)| w.map(|(a, b)| (ij / k, ij % k, a.min(b), a.max(b))))
            .flat_map(|(i, j, a, b)| (a - margin..=b + margin).map(move |p| (i, j, p)))
            .collect();
        let entries = cells
            .par_iter()
            .map(|&(i, j, p)| {
                let dim = hom_dim_p(&collection[i], &collection[j], p)?;
                Ok(HomEntry { i, j, p, dim })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HomTable { chain: ring.chain().exponents().to_vec(), entries, window: (lo, hi) })
    }

    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.i.max(e.j) + 1).max().unwrap_or(0)
    }

    pub fn dim(&self, i: usize, j: usize, p: i64) -> Option<usize> {
        self.entries.iter().find(|e| e.i == i && e.j == j && e.p == p).map(|e| e.dim)
    }

    /// `chi(E_i, E_j) = sum_p (-1)^p dim Hom(E_i, T^p E_j)`.
    pub fn euler_pairing(&self) -> IntMatrix {
        let k = self.size();
        let mut m = vec![0i64; k * k];
        for e in &self.entries {
            let sign = if e.p.rem_euclid(2) == 0 { 1 } else { -1 };
            m[e.i * k + e.j] += sign * e.dim as i64;
        }
        let rows: Vec<Vec<i64>> = m.chunks(k.max(1)).map(<[i64]>::to_vec).collect();
        if k == 0 {
            return IntMatrix::zeros(0, 0);
        }
        IntMatrix::from_rows(&rows)
    }

    /// The `p = 0` dimensions as a matrix.
    pub fn degree_zero_matrix(&self) -> IntMatrix {
        let k = self.size();
        let mut rows = vec![vec![0i64; k]; k];
        for e in self.entries.iter().filter(|e| e.p == 0) {
            rows[e.i][e.j] = e.dim as i64;
        }
        IntMatrix::from_rows(&rows)
    }

    pub fn check_exceptionality(&self) -> ExceptionalityReport {
        let mut problems = Vec::new();
        let mut strong = true;
        for e in &self.entries {
            if e.i == e.j {
                let want = usize::from(e.p == 0);
                if e.dim != want {
                    problems.push(format!("dim Hom(E{0}, T^{1} E{0}) = {2}, expected {3}", e.i, e.p, e.dim, want));
                }
            } else if e.i > e.j && e.dim != 0 {
                problems.push(format!("dim Hom(E{}, T^{} E{}) = {} is a backward morphism", e.i, e.p, e.j, e.dim));
            } else if e.i < e.j && e.p != 0 && e.dim != 0 {
                strong = false;
            }
        }
        ExceptionalityReport { exceptional: problems.is_empty(), strong: strong && problems.is_empty(), problems }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalityReport {
    pub exceptional: bool,
    pub strong: bool,
    pub problems: Vec<String>,
}

/// `Hom(E_i, T^p E_j)` against the independently computed
/// `Hom(E_j, S T^{-p} E_i)` for every entry of the table; returns the
/// mismatching entries.
pub fn serre_symmetry_check(collection: &[MatrixFactorization], table: &HomTable) -> Result<Vec<(HomEntry, usize)>> {
    let mismatches = table
        .entries
        .par_iter()
        .map(|e| {
            let dual = collection[e.i].translate_pow(-e.p).serre();
            let d = hom_dim_p(&collection[e.j], &dual, 0)?;
            Ok((d != e.dim).then(|| (e.clone(), d)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(mismatches.into_iter().flatten().collect())
}

/// `chi(F, G) = sum_p (-1)^p dim Hom(F, T^p G)` over the scan window.
pub fn euler_form(source: &MatrixFactorization, target: &MatrixFactorization) -> Result<i64> {
    let Some((lo, hi)) = scan_window(source, target) else {
        return Ok(0);
    };
    (lo..=hi)
        .into_par_iter()
        .map(|p| {
            let d = hom_dim_p(source, target, p)? as i64;
            Ok(if p.rem_euclid(2) == 0 { d } else { -d })
        })
        .sum()
}
