//! Dense integer matrices.
//!
//! Entries are arbitrary precision. Products and triangular inverses first try
//! a checked `i64` kernel and fall back to `BigInt` arithmetic on overflow, so
//! results are always exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix with {} entries",
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input; meant for literals.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix literal");
            entries.extend(row.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    fn from_small(rows: usize, cols: usize, small: Vec<i64>) -> Self {
        IntMatrix { rows, cols, entries: small.into_iter().map(BigInt::from).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    fn to_small(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|x| x.to_i64()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        if let (Some(a), Some(b)) = (self.to_small(), other.to_small()) {
            if let Some(c) = mul_small(&a, &b, n, k, m) {
                return Ok(IntMatrix::from_small(n, m, c));
            }
        }
        let mut out = vec![BigInt::zero(); n * m];
        for i in 0..n {
            for l in 0..k {
                let a = &self.entries[i * k + l];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.entries[l * m..(l + 1) * m];
                let orow = &mut out[i * m..(i + 1) * m];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { rows: n, cols: m, entries: out })
    }

    /// Matrix power by binary exponentiation.
    pub fn pow(&self, mut e: u64) -> Result<IntMatrix> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Power by repeated left multiplication. Cheaper than [`IntMatrix::pow`]
    /// when `self` is sparse (companion matrices), since zero entries are
    /// skipped in every product.
    pub fn pow_sparse(&self, e: u64) -> Result<IntMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut acc = IntMatrix::identity(n);
        let mut done = 0;
        if let Some(a) = self.to_small() {
            let mut small: Vec<i64> = acc.to_small().unwrap();
            while done < e {
                match mul_small(&a, &small, n, n, n) {
                    Some(next) => small = next,
                    None => break,
                }
                done += 1;
            }
            acc = IntMatrix::from_small(n, n, small);
        }
        for _ in done..e {
            acc = self.mul(&acc)?;
        }
        Ok(acc)
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_unitriangular(&self) -> bool {
        self.is_square()
            && self.is_upper_triangular()
            && (0..self.rows).all(|i| self.get(i, i).is_one())
    }

    /// Exact determinant. Triangular input is read off the diagonal; anything
    /// else goes through fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        self.require_square()?;
        let n = self.rows;
        if self.is_upper_triangular() {
            return Ok((0..n).map(|i| self.get(i, i).clone()).product());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v.div_floor(&prev);
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Inverse of an upper unitriangular matrix by back substitution.
    pub fn inverse_unitriangular(&self) -> Result<IntMatrix> {
        if !self.is_unitriangular() {
            return Err(Error::IdentityFailed("matrix is not upper unitriangular".into()));
        }
        let n = self.rows;
        if let Some(u) = self.to_small() {
            if let Some(x) = unitri_inverse_small(&u, n) {
                return Ok(IntMatrix::from_small(n, n, x));
            }
        }
        let mut x = IntMatrix::identity(n);
        for j in 0..n {
            for i in (0..j).rev() {
                let mut acc = BigInt::zero();
                for k in i + 1..=j {
                    let u = self.get(i, k);
                    if !u.is_zero() {
                        acc += u * x.get(k, j);
                    }
                }
                x.set(i, j, -acc);
            }
        }
        Ok(x)
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

fn mul_small(a: &[i64], b: &[i64], n: usize, k: usize, m: usize) -> Option<Vec<i64>> {
    let mut out = vec![0i64; n * m];
    for i in 0..n {
        let orow = &mut out[i * m..(i + 1) * m];
        for l in 0..k {
            let x = a[i * k + l];
            if x == 0 {
                continue;
            }
            let brow = &b[l * m..(l + 1) * m];
            for (o, &y) in orow.iter_mut().zip(brow) {
                *o = o.checked_add(x.checked_mul(y)?)?;
            }
        }
    }
    Some(out)
}

fn unitri_inverse_small(u: &[i64], n: usize) -> Option<Vec<i64>> {
    // Row-oriented: row i of X = e_i - sum_{k>i} u_ik * row k of X.
    let mut x = vec![0i64; n * n];
    for i in (0..n).rev() {
        let mut row = vec![0i64; n];
        row[i] = 1;
        for k in i + 1..n {
            let c = u[i * n + k];
            if c == 0 {
                continue;
            }
            let xk = &x[k * n..(k + 1) * n];
            for (r, &v) in row.iter_mut().zip(xk).skip(k) {
                *r = r.checked_sub(c.checked_mul(v)?)?;
            }
        }
        x[i * n..(i + 1) * n].copy_from_slice(&row);
    }
    Some(x)
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Entry>>,
}

impl From<IntMatrix> for MatrixRepr {
    fn from(m: IntMatrix) -> Self {
        let data = (0..m.rows)
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|x| x.to_i64().map_or_else(|| Entry::Big(x.to_string()), Entry::Small))
                    .collect()
            })
            .collect();
        MatrixRepr { rows: m.rows, cols: m.cols, data }
    }
}

impl TryFrom<MatrixRepr> for IntMatrix {
    type Error = String;
    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        let mut entries = Vec::with_capacity(r.rows * r.cols);
        if r.data.len() != r.rows {
            return Err("row count mismatch".into());
        }
        for row in r.data {
            if row.len() != r.cols {
                return Err("column count mismatch".into());
            }
            for e in row {
                entries.push(match e {
                    Entry::Small(x) => BigInt::from(x),
                    Entry::Big(s) => s.parse().map_err(|_| format!("bad integer `{s}`"))?,
                });
            }
        }
        Ok(IntMatrix { rows: r.rows, cols: r.cols, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_power() {
        let m1 = IntMatrix::from_rows(&[[1, 1, 0], [-1, 0, 1], [1, 0, 0]]);
        let m = IntMatrix::from_rows(&[[0, 0, 1], [1, 0, -1], [0, 1, 1]]);
        assert_eq!(m1.pow(3).unwrap(), m);
        assert_eq!(m1.pow_sparse(3).unwrap(), m);
        assert_eq!(m1.pow(0).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = IntMatrix::from_rows(&[[i64::MAX, 0], [0, 2]]);
        let sq = big.mul(&big).unwrap();
        assert_eq!(sq.get(0, 0), &(BigInt::from(i64::MAX) * BigInt::from(i64::MAX)));
        assert_eq!(sq.get(1, 1), &BigInt::from(4));
        let back: IntMatrix = serde_json::from_str(&serde_json::to_string(&sq).unwrap()).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::from_rows(&[[2, 1], [7, 4]]).det().unwrap(), BigInt::from(1));
        assert_eq!(IntMatrix::from_rows(&[[0, 1], [1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_rows(&[[1, 2], [2, 4]]).det().unwrap(), BigInt::from(0));
        let m = IntMatrix::from_rows(&[[2, -3, 1], [2, 0, -1], [1, 4, 5]]);
        assert_eq!(m.det().unwrap(), BigInt::from(49));
    }

    #[test]
    fn unitriangular_inverse() {
        let chi = IntMatrix::from_rows(&[[1, -1, 1], [0, 1, -1], [0, 0, 1]]);
        let inv = chi.inverse_unitriangular().unwrap();
        assert_eq!(chi.mul(&inv).unwrap(), IntMatrix::identity(3));
        assert!(IntMatrix::from_rows(&[[2, 0], [0, 1]]).inverse_unitriangular().is_err());
    }

    #[test]
    fn dimension_errors() {
        let a = IntMatrix::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert_eq!(a.det(), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }
}
