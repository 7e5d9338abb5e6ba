//! Division-free characteristic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IntMatrix, Poly};
use crate::error::{Error, Result};

/// `det(t*1 - A)` with exact integer coefficients.
///
/// Upper or lower Hessenberg input uses the Hessenberg determinant recurrence;
/// everything else goes through Berkowitz. Neither path divides.
pub fn charpoly_division_free(a: &IntMatrix) -> Result<Poly> {
    a.require_square()?;
    let coeffs = if is_upper_hessenberg(a) {
        hessenberg(a)
    } else if is_upper_hessenberg(&a.transpose()) {
        hessenberg(&a.transpose())
    } else {
        berkowitz(a)
    };
    Ok(Poly::from_bigints(&coeffs))
}

/// `det(1 - t*A)`: the reversal of the characteristic polynomial.
pub fn det_one_minus_t(a: &IntMatrix) -> Result<Poly> {
    Ok(charpoly_division_free(a)?.reverse(a.rows()))
}

fn is_upper_hessenberg(a: &IntMatrix) -> bool {
    let n = a.rows();
    (0..n).all(|i| (0..i.saturating_sub(1)).all(|j| a.get(i, j).is_zero()))
}

/// Coefficients in ascending order of `det(t - H)` for upper Hessenberg `H`.
fn hessenberg(h: &IntMatrix) -> Vec<BigInt> {
    let n = h.rows();
    // p[k] = charpoly of the leading k x k block, ascending coefficients.
    let mut p: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for k in 0..n {
        // (t - h_kk) p_k
        let prev = &p[k];
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= h.get(k, k) * c;
        }
        // - sum_{i<k} h_ik * (prod_{j=i+1..k} h_{j,j-1}) * p_i
        let mut sub = BigInt::one();
        for i in (0..k).rev() {
            sub *= h.get(i + 1, i);
            if sub.is_zero() {
                break;
            }
            let hik = h.get(i, k);
            if hik.is_zero() {
                continue;
            }
            let factor = hik * &sub;
            for (d, c) in p[i].iter().enumerate() {
                next[d] -= &factor * c;
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Berkowitz algorithm; ascending coefficients of `det(t - A)`.
fn berkowitz(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    if n == 0 {
        return vec![BigInt::one()];
    }
    // Descending coefficients while iterating.
    let mut vect: Vec<BigInt> = vec![BigInt::one(), -a.get(0, 0)];
    for k in 1..n {
        // Column of the Toeplitz factor: 1, -a_kk, -R C, -R M C, ..., -R M^{k-1} C
        let mut col = Vec::with_capacity(k + 2);
        col.push(BigInt::one());
        col.push(-a.get(k, k));
        let mut v: Vec<BigInt> = (0..k).map(|i| a.get(i, k).clone()).collect();
        for _ in 0..k {
            let rc: BigInt = (0..k).map(|j| a.get(k, j) * &v[j]).sum();
            col.push(-rc);
            v = (0..k)
                .map(|i| (0..k).filter(|&j| !v[j].is_zero()).map(|j| a.get(i, j) * &v[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, x) in vect.iter().enumerate() {
                if i >= j && !x.is_zero() {
                    *slot += &col[i - j] * x;
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    vect
}

/// Given `det(1 - t*A)` for some `dim x dim` integer matrix `A`, returns
/// `det(1 - t*A^k)`. The dimension is needed because zero eigenvalues do not
/// show up in `det(1 - t*A)`.
///
/// Works through power sums of eigenvalues: the logarithmic derivative of
/// `det(1 - t*A)` yields `tr(A^m)`, the traces `tr(A^{jk})` are the power sums
/// of `A^k`, and Newton's identities rebuild its reversed characteristic
/// polynomial. All steps are exact; the final divisions are checked.
pub fn det_one_minus_t_of_power(det_poly: &Poly, dim: usize, k: usize) -> Result<Poly> {
    let mut coeffs = det_poly
        .to_integer_coeffs()
        .ok_or_else(|| Error::IdentityFailed("det(1 - tA) must have integer coefficients".into()))?;
    if coeffs.first().is_none_or(|c| !c.is_one()) {
        return Err(Error::IdentityFailed("det(1 - tA) must have constant term 1".into()));
    }
    if coeffs.len() > dim + 1 {
        return Err(Error::IdentityFailed(format!("det(1 - tA) has degree above {dim}")));
    }
    coeffs.resize(dim + 1, BigInt::zero());
    let n = dim;
    let traces = power_traces(&coeffs, n * k);
    let p: Vec<BigInt> = (1..=n).map(|j| traces[j * k].clone()).collect();
    let mut out = vec![BigInt::one()];
    for j in 1..=n {
        let acc: BigInt = (1..=j).map(|i| &p[i - 1] * &out[j - i]).sum();
        let (q, r) = acc.div_rem(&BigInt::from(j));
        if !r.is_zero() {
            return Err(Error::InexactDivision { remainder: format!("Newton identity step {j}") });
        }
        out.push(-q);
    }
    Ok(Poly::from_bigints(&out))
}

/// `tr(A^m)` for `m = 0..=upto`, from the ascending coefficients of `det(1 - tA)`.
fn power_traces(c: &[BigInt], upto: usize) -> Vec<BigInt> {
    let small: Option<Vec<i64>> = c.iter().map(num_traits::ToPrimitive::to_i64).collect();
    if let Some(cs) = small {
        if let Some(s) = power_traces_small(&cs, upto) {
            return s.into_iter().map(BigInt::from).collect();
        }
    }
    let n = c.len() - 1;
    let mut s = vec![BigInt::from(n)];
    for m in 1..=upto {
        let mut acc = if m <= n { -BigInt::from(m) * &c[m] } else { BigInt::zero() };
        for i in 1..=n.min(m - 1) {
            if !c[i].is_zero() {
                acc -= &c[i] * &s[m - i];
            }
        }
        s.push(acc);
    }
    s
}

fn power_traces_small(c: &[i64], upto: usize) -> Option<Vec<i64>> {
    let n = c.len() - 1;
    let nz: Vec<(usize, i64)> = (1..=n).filter(|&i| c[i] != 0).map(|i| (i, c[i])).collect();
    let mut s = Vec::with_capacity(upto + 1);
    s.push(n as i64);
    for m in 1..=upto {
        let mut acc: i64 = if m <= n { (m as i64).checked_mul(c[m])?.checked_neg()? } else { 0 };
        for &(i, ci) in &nz {
            if i >= m {
                break;
            }
            acc = acc.checked_sub(ci.checked_mul(s[m - i])?)?;
        }
        s.push(acc);
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_and_zero() {
        let t3 = Poly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(charpoly_division_free(&IntMatrix::zeros(3, 3)).unwrap(), t3);
        let n = IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        assert_eq!(charpoly_division_free(&n).unwrap(), t3);
    }

    #[test]
    fn serre_matrix_of_two_two() {
        let m = IntMatrix::from_rows(&[[0, 0, 1], [1, 0, -1], [0, 1, 1]]);
        assert_eq!(charpoly_division_free(&m).unwrap(), Poly::from_ints(&[-1, 1, -1, 1]));
        assert_eq!(berkowitz(&m), hessenberg(&m).to_vec());
    }

    #[test]
    fn non_square_rejected() {
        assert!(charpoly_division_free(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn power_route_matches_direct() {
        let m1 = IntMatrix::from_rows(&[[1, 1, 0], [-1, 0, 1], [1, 0, 0]]);
        let phi = det_one_minus_t(&m1).unwrap();
        assert_eq!(phi, Poly::from_ints(&[1, -1, 1, -1]));
        for k in 0..6 {
            let direct = det_one_minus_t(&m1.pow(k as u64).unwrap()).unwrap();
            assert_eq!(det_one_minus_t_of_power(&phi, 3, k).unwrap(), direct, "k = {k}");
        }
        let singular = IntMatrix::from_rows(&[[0, 1], [0, 0]]);
        let p = det_one_minus_t(&singular).unwrap();
        assert_eq!(det_one_minus_t_of_power(&p, 2, 0).unwrap(), Poly::from_ints(&[1, -2, 1]));
        assert_eq!(det_one_minus_t_of_power(&p, 2, 3).unwrap(), Poly::one());
        assert!(det_one_minus_t_of_power(&phi, 2, 1).is_err());
    }
}
