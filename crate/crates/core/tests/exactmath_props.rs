//! Randomized identities for the exact arithmetic layer, checked against
//! independent brute-force oracles.

use chainfact::chain::ChainPolynomial;
use chainfact::exactmath::{
    charpoly_division_free, det_one_minus_t, det_one_minus_t_of_power, rank_rational, rank_sparse, smith_normal_form,
    BigRat, IntMatrix, Poly, SparseRow,
};
use chainfact::invariants::{chi, phi};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Leibniz expansion over all permutations.
fn leibniz(a: &[Vec<BigInt>]) -> BigInt {
    fn go(a: &[Vec<BigInt>], row: usize, used: &mut Vec<bool>, sign: i64, acc: BigInt, out: &mut BigInt) {
        let n = a.len();
        if row == n {
            *out += acc * sign;
            return;
        }
        for c in 0..n {
            if used[c] || a[row][c].is_zero() {
                continue;
            }
            let inversions = (c + 1..n).filter(|&k| used[k]).count() as i64;
            used[c] = true;
            let s = if inversions % 2 == 0 { sign } else { -sign };
            go(a, row + 1, used, s, &acc * &a[row][c], out);
            used[c] = false;
        }
    }
    let mut out = BigInt::zero();
    go(a, 0, &mut vec![false; a.len()], 1, BigInt::one(), &mut out);
    out
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn eval(p: &Poly, t: i64) -> BigRat {
    let t = BigRat::from_integer(t.into());
    p.coeffs().iter().rev().fold(BigRat::zero(), |acc, c| acc * &t + c)
}

fn matrix(max_n: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-range..=range, n * n).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(n).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

fn rect(max: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-range..=range, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

fn poly(max_deg: usize, range: i64) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-range..=range, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

/// gcd of all k x k minors, by brute force.
fn determinantal_divisor(a: &IntMatrix, k: usize) -> BigInt {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut g = BigInt::zero();
    for rs in subsets(a.rows(), k) {
        for cs in subsets(a.cols(), k) {
            let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| a.get(r, c).clone()).collect()).collect();
            g = g.gcd(&leibniz(&minor));
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_is_a_unimodular_diagonalization(a in rect(4, 6)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.det().unwrap().abs().is_one());
        prop_assert!(s.v.det().unwrap().abs().is_one());
        let f = s.invariant_factors();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in f.windows(2) {
            prop_assert!(!w[0].is_negative() && !w[1].is_negative());
            if !w[0].is_zero() {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
        // d_1 ... d_k equals the gcd of the k x k minors.
        let mut prod = BigInt::one();
        for (k, d) in f.iter().enumerate() {
            prod *= d;
            prop_assert_eq!(&prod, &determinantal_divisor(&a, k + 1));
        }
    }

    #[test]
    fn charpoly_matches_leibniz(a in matrix(4, 5)) {
        let n = a.rows();
        let cp = charpoly_division_free(&a).unwrap();
        prop_assert_eq!(cp.degree(), Some(n));
        prop_assert!(cp.leading().unwrap().is_one());
        for t in -2..=n as i64 + 1 {
            let mut m = rows_of(&a.neg());
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += t;
            }
            prop_assert_eq!(eval(&cp, t), BigRat::from_integer(leibniz(&m)));
        }
        prop_assert_eq!(a.det().unwrap(), leibniz(&rows_of(&a)));
    }

    #[test]
    fn det_one_minus_t_of_power_matches_direct(a in matrix(4, 3), k in 0usize..5) {
        let p = det_one_minus_t(&a).unwrap();
        let direct = det_one_minus_t(&a.pow(k as u64).unwrap()).unwrap();
        prop_assert_eq!(det_one_minus_t_of_power(&p, a.rows(), k).unwrap(), direct);
        prop_assert_eq!(a.pow_sparse(k as u64).unwrap(), a.pow(k as u64).unwrap());
    }

    #[test]
    fn series_inverse_is_an_inverse(
        tail in prop::collection::vec(-5i64..=5, 0..7),
        order in 1usize..12,
        c0 in prop::sample::select(vec![-1i64, 1, 2]),
    ) {
        let mut c = vec![c0];
        c.extend(tail);
        let p = Poly::from_ints(&c);
        let inv = p.series_inverse(order).unwrap();
        prop_assert!(inv.degree().is_none_or(|d| d <= order));
        prop_assert_eq!((&p * &inv).truncate(order), Poly::one());
    }

    #[test]
    fn div_exact_inverts_multiplication(a in poly(6, 7), b in poly(4, 7)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a.clone());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn sparse_rank_matches_dense(v in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..8)) {
        let dense: Vec<Vec<BigRat>> = v.iter().map(|r| r.iter().map(|&x| BigRat::from_integer(x.into())).collect()).collect();
        let sparse: Vec<SparseRow> = dense
            .iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        prop_assert_eq!(rank_sparse(&sparse), rank_rational(&dense));
    }

    #[test]
    fn chi_inverts_phi_of_the_shift(exps in prop::collection::vec(2u32..=5, 1..=3)) {
        let f = ChainPolynomial::new(exps).unwrap();
        let z = phi(&f).unwrap();
        let e = chi(&f).unwrap();
        let mu = z.degree();
        for j in 1..mu {
            let s: BigInt = (0..=j).map(|i| &e.series[i] * &z.coeffs[j - i]).sum();
            prop_assert!(s.is_zero(), "j = {}", j);
        }
    }
}

#[test]
fn division_by_non_factor_is_rejected() {
    let a = Poly::from_ints(&[1, 0, 1]);
    let b = Poly::from_ints(&[1, 1]);
    assert!(a.div_exact(&b).is_err());
    assert!(Poly::from_ints(&[0, 1]).series_inverse(3).is_err());
}
