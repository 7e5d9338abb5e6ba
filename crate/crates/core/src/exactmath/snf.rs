//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, `d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `D` (length `min(rows, cols)`).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                if !row[j].is_zero() {
                    let t = q * &row[j];
                    row[i] += t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

fn to_matrix(rows: Vec<Vec<BigInt>>, r: usize, c: usize) -> IntMatrix {
    IntMatrix::new(r, c, rows.into_iter().flatten().collect()).expect("shape")
}

/// Smith normal form with the pivot rule: smallest nonzero absolute value in
/// the remaining block, ties broken by lowest (row, col).
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: (0..m).map(|i| a.row(i).to_vec()).collect(),
        u: identity_rows(m),
        v: identity_rows(n),
    };
    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < w.a[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(w, m, n);
            };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let p = w.a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&p);
                w.add_row(i, t, &-q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..n {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&p);
                w.add_col(j, t, &-q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match offending {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w, m, n)
}

fn finish(w: Work, m: usize, n: usize) -> SnfResult {
    SnfResult { u: to_matrix(w.u, m, m), d: to_matrix(w.a, m, n), v: to_matrix(w.v, n, n) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(r.u.mul(a).unwrap().mul(&r.v).unwrap(), r.d);
        assert!(r.u.det().unwrap().abs() == BigInt::from(1));
        assert!(r.v.det().unwrap().abs() == BigInt::from(1));
        r
    }

    #[test]
    fn identity() {
        let r = check(&IntMatrix::identity(2));
        assert_eq!(r.d, IntMatrix::identity(2));
        assert_eq!(r.u, IntMatrix::identity(2));
        assert_eq!(r.v, IntMatrix::identity(2));
    }

    #[test]
    fn relation_matrix_of_two_two() {
        let r = check(&IntMatrix::from_rows(&[[-2, -1, 1], [0, -2, 1]]));
        assert_eq!(r.invariant_factors(), vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn zero_matrix() {
        let r = check(&IntMatrix::zeros(1, 1));
        assert_eq!(r.d, IntMatrix::zeros(1, 1));
    }

    #[test]
    fn divisibility_chain_needs_fixup() {
        // diag(2, 3) ~ diag(1, 6)
        let r = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(r.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }
}
