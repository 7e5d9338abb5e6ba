//! The numerical side: `phi_n`, the Euler matrix `chi_n`, the companion
//! matrix `M1`, `M = (-1)^n chi^{-1} chi^T`, `Phi_n = det(1 - tM)`, an
//! independent monodromy oracle for the transpose polynomial, and the
//! polarization integer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chain::{numerics, ChainPolynomial, GradingGroup, TransposeData};
use crate::error::{Error, Result};
use crate::exactmath::{det_one_minus_t, det_one_minus_t_of_power, IntMatrix, Poly};

/// Above this size `det(1 - tM)` is only computed through power sums; below
/// it, also directly from `M` as a cross-check.
pub const DIRECT_CHARPOLY_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaPolynomial {
    pub phi: Poly,
    /// `c'_0, .., c'_mu`.
    pub coeffs: Vec<BigInt>,
}

/// `prod_{i=0}^n (1 - t^{d_i})^{(-1)^{n-i}}`, divided exactly.
pub fn phi(f: &ChainPolynomial) -> Result<ZetaPolynomial> {
    let num = numerics(f);
    let n = f.n();
    let mut top = Poly::one();
    let mut bottom = Poly::one();
    for (i, &d) in num.d.iter().enumerate() {
        let factor = Poly::one_minus_t_pow(d as usize);
        if (n - i) % 2 == 0 {
            top = &top * &factor;
        } else {
            bottom = &bottom * &factor;
        }
    }
    let phi = top.div_exact(&bottom)?;
    let coeffs = phi
        .to_integer_coeffs()
        .ok_or_else(|| Error::IdentityFailed("phi has non-integer coefficients".into()))?;
    let z = ZetaPolynomial { phi, coeffs };
    z.check(f)?;
    Ok(z)
}

impl ZetaPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `deg = mu`, `c'_0 = 1`, `c'_{mu-i} = (-1)^{n+1} c'_i`.
    pub fn check(&self, f: &ChainPolynomial) -> Result<()> {
        let mu = numerics(f).mu_n() as usize;
        if self.degree() != mu {
            return Err(Error::IdentityFailed(format!("deg phi = {} but mu = {mu}", self.degree())));
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::IdentityFailed("phi(0) != 1".into()));
        }
        let sign = if f.n() % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        for i in 0..=mu {
            if self.coeffs[mu - i] != &sign * &self.coeffs[i] {
                return Err(Error::IdentityFailed(format!("palindromy fails at index {i}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerMatrix {
    pub chi: IntMatrix,
    /// `c_0, .., c_{mu-1}`, the coefficients of `1/phi`.
    pub series: Vec<BigInt>,
}

/// Upper triangular Toeplitz matrix with first row `c_0, .., c_{mu-1}`.
pub fn chi(f: &ChainPolynomial) -> Result<EulerMatrix> {
    let z = phi(f)?;
    chi_from_phi(&z)
}

pub fn chi_from_phi(z: &ZetaPolynomial) -> Result<EulerMatrix> {
    let mu = z.degree();
    let inv = z.phi.series_inverse(mu.saturating_sub(1))?;
    let series: Vec<BigInt> = (0..mu)
        .map(|k| inv.coeff(k).to_integer())
        .collect();
    Ok(EulerMatrix { chi: toeplitz(&series), series })
}

fn toeplitz(first_row: &[BigInt]) -> IntMatrix {
    let k = first_row.len();
    let mut m = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            m.set(i, j, first_row[j - i].clone());
        }
    }
    m
}

/// Companion matrix with first column `-c'_1, .., -c'_mu` and ones on the
/// superdiagonal; checks `det(1 - t M1) = phi`.
pub fn companion(z: &ZetaPolynomial) -> Result<IntMatrix> {
    let mu = z.degree();
    let mut m = IntMatrix::zeros(mu, mu);
    for i in 0..mu {
        m.set(i, 0, -&z.coeffs[i + 1]);
        if i + 1 < mu {
            m.set(i, i + 1, BigInt::one());
        }
    }
    let d = det_one_minus_t(&m)?;
    if d != z.phi {
        return Err(Error::IdentityFailed(format!("det(1 - t M1) = {d} differs from phi = {}", z.phi)));
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyData {
    pub m1: IntMatrix,
    pub m: IntMatrix,
    /// `det(1 - tM)`.
    pub big_phi: Poly,
    /// `e_i = gcd(d_i, mu)`.
    pub e: Vec<i64>,
    /// Whether `det(1 - tM)` was also expanded directly from `M`.
    pub direct_charpoly: bool,
}

/// `M` both as `(-1)^n chi^{-1} chi^T` and as `M1^mu`, compared exactly.
pub fn serre_matrix(f: &ChainPolynomial) -> Result<MonodromyData> {
    let z = phi(f)?;
    let ch = chi_from_phi(&z)?;
    let m1 = companion(&z)?;
    serre_matrix_from(f, &z, &ch, m1)
}

pub fn serre_matrix_from(f: &ChainPolynomial, z: &ZetaPolynomial, ch: &EulerMatrix, m1: IntMatrix) -> Result<MonodromyData> {
    let num = numerics(f);
    let mu = num.mu_n();
    let inv = ch.chi.inverse_unitriangular()?;
    let mut m = inv.mul(&ch.chi.transpose())?;
    if f.n() % 2 == 1 {
        m = m.neg();
    }
    let power = m1.pow_sparse(mu as u64)?;
    if power != m {
        return Err(Error::IdentityFailed(format!(
            "M1^mu differs from (-1)^n chi^-1 chi^T:\nM1^mu =\n{power}\nM =\n{m}"
        )));
    }
    // Valid because M = M1^mu was just verified.
    let big_phi = det_one_minus_t_of_power(&z.phi, m1.rows(), mu as usize)?;
    let direct_charpoly = (mu as usize) <= DIRECT_CHARPOLY_LIMIT;
    if direct_charpoly {
        let direct = det_one_minus_t(&m)?;
        if direct != big_phi {
            return Err(Error::IdentityFailed(format!(
                "det(1 - tM) = {direct} but the power-sum route gives {big_phi}"
            )));
        }
    }
    let e = num.d.iter().map(|&d| d.gcd(&mu)).collect();
    Ok(MonodromyData { m1, m, big_phi, e, direct_charpoly })
}

/// `prod_i (1 - t^{d_i/e_i})^{(-1)^{n-i} e_i}`, divided exactly.
pub fn zeta_product(f: &ChainPolynomial) -> Result<Poly> {
    let num = numerics(f);
    let mu = num.mu_n();
    let n = f.n();
    let mut top = Poly::one();
    let mut bottom = Poly::one();
    for (i, &d) in num.d.iter().enumerate() {
        let e = d.gcd(&mu);
        let factor = Poly::one_minus_t_pow((d / e) as usize).pow(e as u32);
        if (n - i) % 2 == 0 {
            top = &top * &factor;
        } else {
            bottom = &bottom * &factor;
        }
    }
    top.div_exact(&bottom)
}

pub fn zeta_factorization_check(data: &MonodromyData, f: &ChainPolynomial) -> Result<bool> {
    Ok(zeta_product(f)? == data.big_phi)
}

/// The `q`-th cyclotomic polynomial.
pub fn cyclotomic(q: usize) -> Poly {
    let mut p = Poly::t_pow_minus_one(q);
    for d in 1..q {
        if q % d == 0 {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic divisor");
        }
    }
    p
}

/// Characteristic polynomial of the Milnor monodromy of the weighted
/// homogeneous polynomial with weights `W_i / D`, from its spectrum: the
/// Poincare polynomial `prod (t^{D-W_i} - 1)/(t^{W_i} - 1)` puts eigenvalue
/// `exp(2 pi i (k + sum W)/D)` on every monomial of degree `k`.
pub fn monodromy_oracle(td: &TransposeData) -> Result<Poly> {
    let big_d = td.degree;
    let mut top = Poly::one();
    let mut bottom = Poly::one();
    for &w in &td.weights {
        top = &top * &Poly::t_pow_minus_one((big_d - w) as usize);
        bottom = &bottom * &Poly::t_pow_minus_one(w as usize);
    }
    let poincare = top
        .div_exact(&bottom)
        .map_err(|_| Error::IdentityFailed("Poincare product is not a polynomial".into()))?;
    let shift: i64 = td.weights.iter().sum();
    // denominator q -> numerator -> multiplicity
    let mut groups: BTreeMap<i64, BTreeMap<i64, i64>> = BTreeMap::new();
    for (k, c) in poincare.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = c
            .to_integer()
            .to_i64()
            .filter(|m| *m > 0 && c.is_integer())
            .ok_or_else(|| Error::IdentityFailed(format!("Poincare coefficient {c} is not a positive integer")))?;
        let r = (k as i64 + shift).rem_euclid(big_d);
        let g = r.gcd(&big_d);
        let (a, q) = if r == 0 { (0, 1) } else { (r / g, big_d / g) };
        *groups.entry(q).or_default().entry(a).or_insert(0) += m;
    }
    let mut out = Poly::one();
    for (q, nums) in groups {
        let units: Vec<i64> = (0..q).filter(|a| a.gcd(&q) == 1).collect();
        let mult = nums.get(&units[0]).copied().unwrap_or(0);
        if units.iter().any(|a| nums.get(a).copied().unwrap_or(0) != mult) || nums.len() != units.len() {
            return Err(Error::NotGaloisInvariant(format!("exponents with denominator {q}: {nums:?}")));
        }
        out = &out * &cyclotomic(q as usize).pow(mult as u32);
    }
    Ok(out)
}

/// `t^mu Phi(1/t)`.
pub fn reversed_big_phi(data: &MonodromyData) -> Poly {
    data.big_phi.reverse(data.m.rows())
}

/// `det chi = 1` and `chi^{-1} (chi + chi^T) chi^{-T} = chi^{-1} + chi^{-T}`.
pub fn lattice_check(ch: &EulerMatrix) -> Result<bool> {
    if !ch.chi.det()?.is_one() {
        return Ok(false);
    }
    let inv = ch.chi.inverse_unitriangular()?;
    let inv_t = inv.transpose();
    let form = ch.chi.add(&ch.chi.transpose())?;
    let lhs = inv.mul(&form)?.mul(&inv_t)?;
    let rhs = inv.add(&inv_t)?;
    Ok(lhs == rhs)
}

/// Every `k` in `[-bound, bound]` with `-(x1 + .. + xn) - k f = (-1)^{n+1} mu x1` in `L_f`.
pub fn polarization_solutions(g: &GradingGroup, bound: i64) -> Vec<i64> {
    let n = g.n();
    let mu = numerics(g.chain()).mu_n();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let target = g.scale(sign * mu, &g.x(0));
    let mut expr = vec![-1i64; n];
    expr.push(0);
    let base = g.canonicalize(&expr);
    (-bound..=bound).filter(|&k| g.sub(&base, &g.scale(k, &g.f())) == target).collect()
}

/// The integer `k` of the polarization, solved through the weight and then
/// confirmed by exact degree equality.
pub fn polarization_integer(g: &GradingGroup) -> Result<i64> {
    let n = g.n();
    let mu = numerics(g.chain()).mu_n();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let lhs: i64 = -g.weights().iter().sum::<i64>();
    let rhs = sign * mu * g.weights()[0];
    let d = g.f_weight();
    if (lhs - rhs) % d != 0 {
        return Err(Error::Unsolvable("no integer k balances the weights".into()));
    }
    let k = (lhs - rhs) / d;
    let mut expr = vec![-1i64; n];
    expr.push(-k);
    if g.canonicalize(&expr) != g.scale(sign * mu, &g.x(0)) {
        return Err(Error::Unsolvable(format!("k = {k} balances weights but not degrees")));
    }
    Ok(k)
}
