//! Rank and kernels over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::BigRat;

/// Rank over the rationals. Each row is scaled to integers and the result is
/// eliminated fraction-free (Bareiss), so no rational arithmetic happens in
/// the inner loop.
pub fn rank_rational(rows: &[Vec<BigRat>]) -> usize {
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    rank_integer(ints)
}

pub fn rank_integer(mut a: Vec<Vec<BigInt>>) -> usize {
    a.retain(|r| r.iter().any(|x| !x.is_zero()));
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..n {
                let mut v = &pivot_row[c] * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v -= &lead * &pivot_row[j];
                }
                if !v.is_zero() {
                    v = v.div_floor(&prev);
                }
                row[j] = v;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn clear_denominators(row: &[BigRat]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut [Vec<BigRat>]) -> Vec<usize> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` for an `m x n` matrix given by rows.
pub fn kernel(rows: &[Vec<BigRat>], n: usize) -> Vec<Vec<BigRat>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRat::zero(); n];
            v[fc] = BigRat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Vectors from `candidates` that extend the span of `base`, chosen greedily
/// in order; a basis of `span(base + candidates) / span(base)`.
pub fn extend_basis(base: &[Vec<BigRat>], candidates: &[Vec<BigRat>]) -> Vec<Vec<BigRat>> {
    let mut span: Vec<Vec<BigRat>> = base.to_vec();
    let mut rank = rank_rational(&span);
    let mut out = Vec::new();
    for c in candidates {
        span.push(c.clone());
        let r = rank_rational(&span);
        if r > rank {
            rank = r;
            out.push(c.clone());
        } else {
            span.pop();
        }
    }
    out
}

/// A sparse row: `(column, value)` pairs with strictly increasing columns and
/// no zero values.
pub type SparseRow = Vec<(usize, BigRat)>;

/// Incrementally built row echelon form over the rationals, for sparse rows.
///
/// Every stored row has leading entry 1 at a column no other stored row
/// leads at.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: std::collections::HashMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the stored rows; the remainder is zero iff `row`
    /// lies in their span.
    pub fn reduce(&self, row: &[(usize, BigRat)]) -> SparseRow {
        let mut work: std::collections::BTreeMap<usize, BigRat> =
            row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        let mut out = Vec::new();
        while let Some((c, v)) = work.pop_first() {
            match self.pivots.get(&c) {
                Some(p) => {
                    for (k, x) in &p[1..] {
                        let e = work.entry(*k).or_insert_with(BigRat::zero);
                        *e -= &v * x;
                        if e.is_zero() {
                            work.remove(k);
                        }
                    }
                }
                None => out.push((c, v)),
            }
        }
        out
    }

    /// Adds `row`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, row: &[(usize, BigRat)]) -> bool {
        let rem = self.reduce(row);
        let Some((c, lead)) = rem.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let normalized: SparseRow = rem.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        self.pivots.insert(c, normalized);
        true
    }

    pub fn contains(&self, row: &[(usize, BigRat)]) -> bool {
        self.reduce(row).is_empty()
    }
}

/// Rank of a list of sparse rows.
pub fn rank_sparse(rows: &[SparseRow]) -> usize {
    let mut e = SparseEchelon::new();
    rows.iter().filter(|r| e.insert(r)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRat>> {
        rows.iter().map(|r| r.iter().map(|&x| BigRat::from_integer(x.into())).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_rational(&q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(rank_rational(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_rational(&q(&[])), 0);
        assert_eq!(rank_rational(&q(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank_rational(&q(&[&[0, 2, 4], &[0, 1, 2], &[1, 0, 1]])), 2);
        let half = vec![vec![BigRat::new(1.into(), 2.into()), BigRat::from_integer(1.into())], q(&[&[1, 2]])[0].clone()];
        assert_eq!(rank_rational(&half), 1);
    }

    #[test]
    fn kernel_basis() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let dot: BigRat = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn extension() {
        let base = q(&[&[1, 0, 0]]);
        let cands = q(&[&[2, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(extend_basis(&base, &cands), q(&[&[0, 1, 0]]));
    }

    #[test]
    fn sparse_matches_dense() {
        let dense = q(&[&[0, 2, 4, 1], &[0, 1, 2, 0], &[1, 0, 1, 1], &[1, 2, 3, 1], &[2, 2, 6, 3]]);
        let sparse: Vec<SparseRow> = dense
            .iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        assert_eq!(rank_sparse(&sparse), rank_rational(&dense));
        let mut e = SparseEchelon::new();
        for r in &sparse[..2] {
            e.insert(r);
        }
        assert!(e.contains(&[(1, BigRat::from_integer(3.into())), (2, BigRat::from_integer(6.into()))]));
        assert!(!e.contains(&[(0, BigRat::one())]));
    }
}
