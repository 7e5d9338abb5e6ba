//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::BigRat;
use crate::error::{Error, Result};

/// Polynomial in one variable `t`, coefficients indexed by exponent.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct Poly {
    coeffs: Vec<BigRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|c| BigRat::from_integer(c.clone())).collect())
    }

    /// `c * t^k`
    pub fn monomial(c: BigRat, k: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `1 - t^k`
    pub fn one_minus_t_pow(k: usize) -> Self {
        Poly::one() - Poly::monomial(BigRat::one(), k)
    }

    /// `t^k - 1`
    pub fn t_pow_minus_one(k: usize) -> Self {
        Poly::monomial(BigRat::one(), k) - Poly::one()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn leading(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, or `None` if some coefficient is fractional.
    pub fn to_integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn to_i64_coeffs(&self) -> Option<Vec<i64>> {
        self.to_integer_coeffs()?.iter().map(|c| c.to_i64()).collect()
    }

    pub fn scale(&self, c: &BigRat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Reduce modulo `t^(order+1)`.
    pub fn truncate(&self, order: usize) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().take(order + 1).cloned().collect())
    }

    /// `t^n * p(1/t)`; requires `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Poly {
        assert!(self.degree().is_none_or(|d| d <= n), "reversal degree below polynomial degree");
        let mut out = vec![BigRat::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[n - k] = c.clone();
        }
        Poly::from_coeffs(out)
    }

    /// Formal inverse `q` with `p * q = 1 mod t^(order+1)`.
    pub fn series_inverse(&self, order: usize) -> Result<Poly> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut q: Vec<BigRat> = Vec::with_capacity(order + 1);
        q.push(inv0.clone());
        for j in 1..=order {
            let mut acc = BigRat::zero();
            for (i, pi) in self.coeffs.iter().enumerate().skip(1).take(j) {
                if !pi.is_zero() {
                    acc += pi * &q[j - i];
                }
            }
            q.push(-acc * &inv0);
        }
        Ok(Poly::from_coeffs(q))
    }

    /// Euclidean division `self = den * q + r` with `deg r < deg den`.
    pub fn div_rem(&self, den: &Poly) -> Result<(Poly, Poly)> {
        let dd = den.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = den.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut quot = vec![BigRat::zero(); qlen];
        let support: Vec<(usize, &BigRat)> =
            den.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for k in (0..qlen).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = top * &lead_inv;
            for &(i, c) in &support {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn div_exact(&self, den: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision { remainder: r.to_string() })
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        let rs: Vec<(usize, &BigRat)> =
            rhs.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rs {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl From<Poly> for Vec<String> {
    fn from(p: Poly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for Poly {
    type Error = String;
    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigRat>().map_err(|e| format!("bad coefficient `{s}`: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let p = Poly::from_coeffs(coeffs);
        if p.coeffs.len() != v.len() {
            return Err("trailing zero coefficients".into());
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn geometric_series() {
        assert_eq!(p(&[1, -1]).series_inverse(3).unwrap(), p(&[1, 1, 1, 1]));
    }

    #[test]
    fn inverse_of_phi_for_two_two() {
        // 1/(1 - t + t^2 - t^3) = (1 + t)/(1 - t^4)
        assert_eq!(p(&[1, -1, 1, -1]).series_inverse(2).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[1, -1, 1, -1]).series_inverse(5).unwrap(), p(&[1, 1, 0, 0, 1, 1]));
    }

    #[test]
    fn inverse_of_phi_for_two_two_two() {
        let phi = &p(&[1, 1]) * &p(&[1, 0, 0, 0, 1]);
        let q = phi.series_inverse(4).unwrap();
        assert_eq!(q, p(&[1, -1, 1, -1]));
        assert_eq!((&phi * &q).truncate(4), Poly::one());
    }

    #[test]
    fn inverse_needs_unit_constant() {
        assert_eq!(p(&[0, 1]).series_inverse(3), Err(Error::NotInvertible));
    }

    #[test]
    fn exact_division() {
        let num = &Poly::one_minus_t_pow(4) * &Poly::one_minus_t_pow(1);
        let q = num.div_exact(&Poly::one_minus_t_pow(2)).unwrap();
        assert_eq!(q, p(&[1, -1, 1, -1]));
        assert_eq!(q.div_exact(&Poly::one()).unwrap(), q);
    }

    #[test]
    fn inexact_division_is_an_error() {
        let r = Poly::one_minus_t_pow(2).div_exact(&Poly::one_minus_t_pow(3));
        assert!(matches!(r, Err(Error::InexactDivision { .. })));
        assert_eq!(p(&[1]).div_exact(&Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 1, -1, 1]).to_string(), "t^3 - t^2 + t - 1");
        assert_eq!(p(&[0, 2]).to_string(), "2*t");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn reverse_and_serde() {
        assert_eq!(p(&[1, 2]).reverse(3), p(&[0, 0, 2, 1]));
        let q = Poly::from_coeffs(vec![BigRat::new(1.into(), 3.into()), BigRat::from_integer((-2).into())]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["1/3","-2"]"#);
        assert_eq!(serde_json::from_str::<Poly>(&s).unwrap(), q);
    }
}
