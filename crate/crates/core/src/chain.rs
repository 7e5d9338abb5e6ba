//! Chain polynomials `x1^a1 x2 + x2^a2 x3 + ... + xn^an`, their maximal
//! grading group `L_f`, and the numerical data attached to them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{rref, smith_normal_form, BigRat, IntMatrix};

/// Exponent vector `(a1, ..., an)`, every `ai >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ChainPolynomial {
    exponents: Vec<u32>,
}

impl ChainPolynomial {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidChain("need at least one variable".into()));
        }
        if let Some(a) = exponents.iter().find(|&&a| a < 2) {
            return Err(Error::InvalidChain(format!("exponent {a} < 2")));
        }
        let mut d: i64 = 1;
        for &a in &exponents {
            d = d
                .checked_mul(a as i64)
                .filter(|&d| d < (1 << 40))
                .ok_or_else(|| Error::InvalidChain("product of exponents too large".into()))?;
        }
        Ok(ChainPolynomial { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn a(&self, i: usize) -> i64 {
        self.exponents[i] as i64
    }

    /// Exponent vectors of the `n` monomials of `f`.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = self.exponents[i];
                if i + 1 < n {
                    e[i + 1] = 1;
                }
                e
            })
            .collect()
    }

    /// Every chain of length `1..=max_n` with exponents in `2..=max_a`.
    pub fn enumerate(max_n: usize, max_a: u32) -> Vec<ChainPolynomial> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            let mut cur = vec![2u32; n];
            loop {
                out.push(ChainPolynomial { exponents: cur.clone() });
                let mut k = n;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if cur[k] < max_a {
                        cur[k] += 1;
                        break;
                    }
                    cur[k] = 2;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || max_a < 2 {
                    break;
                }
            }
        }
        out
    }
}

impl FromStr for ChainPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let exps = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidChain(format!("`{}` is not a positive integer", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        ChainPolynomial::new(exps)
    }
}

impl fmt::Display for ChainPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl TryFrom<Vec<u32>> for ChainPolynomial {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        ChainPolynomial::new(v)
    }
}

impl From<ChainPolynomial> for Vec<u32> {
    fn from(c: ChainPolynomial) -> Self {
        c.exponents
    }
}

/// `d_i = a1...ai` and `mu_i = d_i - mu_{i-1}`, both for `i = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainNumerics {
    pub d: Vec<i64>,
    pub mu: Vec<i64>,
}

impl ChainNumerics {
    /// Milnor number of the transpose, the length of the collection.
    pub fn mu_n(&self) -> i64 {
        *self.mu.last().unwrap()
    }

    pub fn d_n(&self) -> i64 {
        *self.d.last().unwrap()
    }
}

pub fn numerics(f: &ChainPolynomial) -> ChainNumerics {
    let mut d = vec![1i64];
    let mut mu = vec![1i64];
    for i in 0..f.n() {
        let di = d[i] * f.a(i);
        d.push(di);
        mu.push(di - mu[i]);
    }
    ChainNumerics { d, mu }
}

/// Rational charges of the transpose `x1^a1 + x1 x2^a2 + ... + x_{n-1} xn^an`
/// and the primitive integer weights `(W, D)` with `q_i = W_i / D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransposeData {
    pub charges: Vec<BigRat>,
    pub weights: Vec<i64>,
    pub degree: i64,
}

impl TransposeData {
    /// `prod (D - W_i) / W_i`, the Milnor number of the transpose.
    pub fn milnor_number(&self) -> BigRat {
        self.weights
            .iter()
            .map(|&w| BigRat::new((self.degree - w).into(), w.into()))
            .product()
    }
}

pub fn transpose(f: &ChainPolynomial) -> TransposeData {
    let mut charges = Vec::with_capacity(f.n());
    let mut prev = BigRat::zero();
    for i in 0..f.n() {
        let q = if i == 0 {
            BigRat::new(1.into(), f.a(0).into())
        } else {
            (BigRat::one() - &prev) / BigRat::from_integer(f.a(i).into())
        };
        charges.push(q.clone());
        prev = q;
    }
    let lcm = charges.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut weights: Vec<BigInt> = charges.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = weights.iter().fold(lcm.clone(), |acc, w| acc.gcd(w));
    for w in weights.iter_mut() {
        *w = &*w / &g;
    }
    let degree = (&lcm / &g).to_i64().expect("degree fits in i64");
    TransposeData {
        charges,
        weights: weights.iter().map(|w| w.to_i64().expect("weight fits in i64")).collect(),
        degree,
    }
}

/// A finitely presented abelian group `Z^g / rowspan(R)` with canonical
/// coordinates from the Smith form of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    /// `g x g` column transform `V` from the Smith form, restricted to kept columns.
    transform: Vec<Vec<i64>>,
    /// Modulus of each kept coordinate; 0 means free.
    moduli: Vec<i64>,
    invariant_factors: Vec<BigInt>,
}

impl Presentation {
    pub fn new(relations: &IntMatrix) -> Result<Self> {
        let g = relations.cols();
        let snf = smith_normal_form(relations);
        let diag: Vec<BigInt> = (0..g)
            .map(|j| if j < relations.rows() { snf.d.get(j, j).clone() } else { BigInt::zero() })
            .collect();
        let mut keep = Vec::new();
        let mut moduli = Vec::new();
        for (j, dj) in diag.iter().enumerate() {
            if !dj.is_one() {
                keep.push(j);
                moduli.push(dj.to_i64().ok_or_else(|| Error::Unsolvable("torsion order overflow".into()))?);
            }
        }
        let transform = (0..g)
            .map(|i| {
                keep.iter()
                    .map(|&j| snf.v.get(i, j).to_i64().ok_or_else(|| Error::Unsolvable("transform overflow".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation { transform, moduli, invariant_factors: snf.invariant_factors() })
    }

    pub fn generators(&self) -> usize {
        self.transform.len()
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.iter().filter(|&&m| m == 0).count()
    }

    /// Orders of the cyclic torsion summands (> 1).
    pub fn torsion(&self) -> Vec<i64> {
        self.moduli.iter().copied().filter(|&m| m > 1).collect()
    }

    /// Group order, `None` if infinite.
    pub fn order(&self) -> Option<i64> {
        if self.rank() > 0 {
            None
        } else {
            Some(self.moduli.iter().product())
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn canonicalize(&self, expr: &[i64]) -> Vec<i64> {
        assert_eq!(expr.len(), self.generators(), "expression length");
        let mut out = vec![0i64; self.moduli.len()];
        for (e, row) in expr.iter().zip(&self.transform) {
            if *e == 0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o += e * v;
            }
        }
        self.reduce(out)
    }

    fn reduce(&self, mut coords: Vec<i64>) -> Vec<i64> {
        for (c, &m) in coords.iter_mut().zip(&self.moduli) {
            if m > 0 {
                *c = c.rem_euclid(m);
            }
        }
        coords
    }
}

/// Element of `L_f` in canonical coordinates. Only meaningful together with
/// the [`GradingGroup`] that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(pub Vec<i64>);

/// The maximal grading `L_f`: generators `x_1..x_n, f` modulo
/// `f = a_i x_i + x_{i+1}` and `f = a_n x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingGroup {
    chain: ChainPolynomial,
    relations: IntMatrix,
    lf: Presentation,
    quotient: Presentation,
    /// `(w_1, ..., w_n, d)`, primitive positive solution.
    weight_character: Vec<i64>,
    coord_weights: Vec<i64>,
}

impl GradingGroup {
    pub fn build(f: &ChainPolynomial) -> Result<Self> {
        let n = f.n();
        let mut rel = IntMatrix::zeros(n, n + 1);
        for i in 0..n {
            rel.set(i, n, BigInt::one());
            rel.set(i, i, BigInt::from(-f.a(i)));
            if i + 1 < n {
                rel.set(i, i + 1, BigInt::from(-1));
            }
        }
        let lf = Presentation::new(&rel)?;
        let mut qrel = IntMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..=n {
                qrel.set(i, j, rel.get(i, j).clone());
            }
        }
        qrel.set(n, n, BigInt::one());
        let quotient = Presentation::new(&qrel)?;

        // a_i w_i + w_{i+1} = d, a_n w_n = d, solved downward from d = d_n.
        let dn = numerics(f).d_n();
        let mut w = vec![0i64; n];
        w[n - 1] = dn / f.a(n - 1);
        for i in (0..n - 1).rev() {
            w[i] = (dn - w[i + 1]) / f.a(i);
        }
        let mut character = w;
        character.push(dn);
        let g = character.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        for x in character.iter_mut() {
            *x /= g;
        }

        // Weight in canonical coordinates: solve V * omega = character over Q.
        let coord_weights = coordinate_weights(&lf, &rel, &character)?;
        let grp = GradingGroup { chain: f.clone(), relations: rel, lf, quotient, weight_character: character, coord_weights };
        for i in 0..n {
            let row: Vec<i64> = (0..=n).map(|j| grp.relations.get(i, j).to_i64().unwrap()).collect();
            if grp.weight_of_expr(&row) != 0 {
                return Err(Error::IdentityFailed(format!("weight character does not kill relation {i}")));
            }
        }
        Ok(grp)
    }

    pub fn chain(&self) -> &ChainPolynomial {
        &self.chain
    }

    pub fn n(&self) -> usize {
        self.chain.n()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn presentation(&self) -> &Presentation {
        &self.lf
    }

    /// Presentation of `L_f / Z f`.
    pub fn quotient_by_f(&self) -> &Presentation {
        &self.quotient
    }

    /// `(w_1, ..., w_n)`.
    pub fn weights(&self) -> &[i64] {
        &self.weight_character[..self.n()]
    }

    /// Weight of `f`.
    pub fn f_weight(&self) -> i64 {
        self.weight_character[self.n()]
    }

    pub fn rank(&self) -> usize {
        self.lf.rank()
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.lf.torsion()
    }

    /// Canonical form of `sum_i expr[i] x_i + expr[n] f`.
    pub fn canonicalize(&self, expr: &[i64]) -> Degree {
        Degree(self.lf.canonicalize(expr))
    }

    /// Re-reduce coordinates that came from outside (e.g. deserialized data).
    pub fn canonicalize_coords(&self, coords: &Degree) -> Result<Degree> {
        if coords.0.len() != self.lf.moduli().len() {
            return Err(Error::Serde(format!("degree {:?} has the wrong number of coordinates", coords.0)));
        }
        Ok(Degree(self.lf.reduce(coords.0.clone())))
    }

    pub fn zero(&self) -> Degree {
        self.canonicalize(&vec![0; self.n() + 1])
    }

    /// Degree of `x_i` (0-based index).
    pub fn x(&self, i: usize) -> Degree {
        let mut e = vec![0; self.n() + 1];
        e[i] = 1;
        self.canonicalize(&e)
    }

    pub fn f(&self) -> Degree {
        let mut e = vec![0; self.n() + 1];
        e[self.n()] = 1;
        self.canonicalize(&e)
    }

    pub fn add(&self, a: &Degree, b: &Degree) -> Degree {
        Degree(self.lf.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()))
    }

    pub fn sub(&self, a: &Degree, b: &Degree) -> Degree {
        Degree(self.lf.reduce(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect()))
    }

    pub fn neg(&self, a: &Degree) -> Degree {
        Degree(self.lf.reduce(a.0.iter().map(|x| -x).collect()))
    }

    pub fn scale(&self, k: i64, a: &Degree) -> Degree {
        Degree(self.lf.reduce(a.0.iter().map(|x| k * x).collect()))
    }

    pub fn weight(&self, l: &Degree) -> i64 {
        l.0.iter().zip(&self.coord_weights).map(|(c, w)| c * w).sum()
    }

    pub fn weight_of_expr(&self, expr: &[i64]) -> i64 {
        expr.iter().zip(&self.weight_character).map(|(e, w)| e * w).sum()
    }

    pub fn monomial_degree(&self, exps: &[u32]) -> Degree {
        let mut e: Vec<i64> = exps.iter().map(|&x| x as i64).collect();
        e.push(0);
        self.canonicalize(&e)
    }

    pub fn monomial_weight(&self, exps: &[u32]) -> i64 {
        exps.iter().zip(&self.weight_character).map(|(&e, w)| e as i64 * w).sum()
    }

    /// Every monomial of `L_f`-degree exactly `l`, in lexicographic order.
    pub fn monomial_basis(&self, l: &Degree) -> Vec<Vec<u32>> {
        let target = self.weight(l);
        if target < 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.n()];
        self.enumerate_weight(0, target, &mut cur, &mut |m| {
            if &self.monomial_degree(m) == l {
                out.push(m.to_vec());
            }
        });
        out
    }

    /// Every monomial of total weight exactly `w`.
    pub fn monomials_of_weight(&self, w: i64) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if w >= 0 {
            let mut cur = vec![0u32; self.n()];
            self.enumerate_weight(0, w, &mut cur, &mut |m| out.push(m.to_vec()));
        }
        out
    }

    fn enumerate_weight(&self, i: usize, remaining: i64, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        let n = self.n();
        if i == n - 1 {
            let w = self.weight_character[i];
            if remaining % w == 0 {
                cur[i] = (remaining / w) as u32;
                visit(cur);
                cur[i] = 0;
            }
            return;
        }
        let w = self.weight_character[i];
        let mut e = 0;
        while e * w <= remaining {
            cur[i] = e as u32;
            self.enumerate_weight(i + 1, remaining - e * w, cur, visit);
            e += 1;
        }
        cur[i] = 0;
    }

    /// Decompose `l = k x_1 + j f` with `0 <= k < d_n`. Exists because
    /// `L_f / Z f` is cyclic of order `d_n` generated by `x_1`, and is unique
    /// because `f` has infinite order.
    pub fn x1_f_coordinates(&self, l: &Degree) -> Option<(i64, i64)> {
        let dn = numerics(&self.chain).d_n();
        let x1 = self.x(0);
        let f = self.f();
        let (w1, wf) = (self.weights()[0], self.f_weight());
        let wl = self.weight(l);
        for k in 0..dn {
            let rest = wl - k * w1;
            if rest % wf != 0 {
                continue;
            }
            let j = rest / wf;
            let cand = self.add(&self.scale(k, &x1), &self.scale(j, &f));
            if &cand == l {
                return Some((k, j));
            }
        }
        None
    }

    pub fn describe(&self) -> String {
        let t = self.torsion();
        if t.is_empty() {
            format!("Z^{}", self.rank())
        } else {
            let parts: Vec<String> = t.iter().map(|m| format!("Z/{m}")).collect();
            format!("Z^{} + {}", self.rank(), parts.join(" + "))
        }
    }
}

fn coordinate_weights(lf: &Presentation, rel: &IntMatrix, character: &[i64]) -> Result<Vec<i64>> {
    let snf = smith_normal_form(rel);
    let g = character.len();
    // Augmented system [V | character].
    let mut aug: Vec<Vec<BigRat>> = (0..g)
        .map(|i| {
            let mut row: Vec<BigRat> = (0..g).map(|j| BigRat::from_integer(snf.v.get(i, j).clone())).collect();
            row.push(BigRat::from_integer(character[i].into()));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != g {
        return Err(Error::Unsolvable("Smith transform is singular".into()));
    }
    let omega: Vec<BigRat> = aug.iter().map(|r| r[g].clone()).collect();
    let diag: Vec<BigInt> = (0..g)
        .map(|j| if j < rel.rows() { snf.d.get(j, j).clone() } else { BigInt::zero() })
        .collect();
    let mut out = Vec::new();
    for (j, dj) in diag.iter().enumerate() {
        let w = &omega[j];
        if !w.is_integer() {
            return Err(Error::Unsolvable("fractional coordinate weight".into()));
        }
        if dj.is_one() {
            continue;
        }
        if !dj.is_zero() && !w.is_zero() {
            return Err(Error::IdentityFailed("weight character is nonzero on torsion".into()));
        }
        out.push(w.to_integer().to_i64().unwrap());
    }
    debug_assert_eq!(out.len(), lf.moduli().len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(s: &str) -> ChainPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_validate() {
        assert_eq!(chain("2, 3,4").exponents(), &[2, 3, 4]);
        assert!("2,1".parse::<ChainPolynomial>().is_err());
        assert!("".parse::<ChainPolynomial>().is_err());
        assert!("2,x".parse::<ChainPolynomial>().is_err());
        assert_eq!(chain("3,2").to_string(), "3,2");
    }

    #[test]
    fn enumeration_counts() {
        let all = ChainPolynomial::enumerate(4, 5);
        assert_eq!(all.len(), 4 + 16 + 64 + 256);
        assert_eq!(ChainPolynomial::enumerate(2, 2).len(), 2);
    }

    #[test]
    fn numerics_examples() {
        let x = numerics(&chain("2,2,2"));
        assert_eq!(x.d, vec![1, 2, 4, 8]);
        assert_eq!(x.mu, vec![1, 1, 3, 5]);
        let y = numerics(&chain("3,2"));
        assert_eq!(y.d, vec![1, 3, 6]);
        assert_eq!(y.mu, vec![1, 2, 4]);
        assert_eq!(y.mu_n(), 6 - 3 + 1);
        assert_eq!(numerics(&chain("7")).mu_n(), 6);
    }

    #[test]
    fn transpose_examples() {
        let t = transpose(&chain("2,2"));
        assert_eq!(t.charges, vec![BigRat::new(1.into(), 2.into()), BigRat::new(1.into(), 4.into())]);
        assert_eq!((t.weights.clone(), t.degree), (vec![2, 1], 4));
        let t = transpose(&chain("2,2,2"));
        assert_eq!(t.charges[2], BigRat::new(3.into(), 8.into()));
        assert_eq!((t.weights.clone(), t.degree), (vec![4, 2, 3], 8));
        assert_eq!(t.milnor_number(), BigRat::from_integer(5.into()));
        let t = transpose(&chain("2"));
        assert_eq!((t.weights.clone(), t.degree), (vec![1], 2));
    }

    #[test]
    fn grading_two_two() {
        let g = GradingGroup::build(&chain("2,2")).unwrap();
        assert_eq!(g.rank(), 1);
        assert!(g.torsion().is_empty());
        assert_eq!(g.weights(), &[1, 2]);
        assert_eq!(g.f_weight(), 4);
        assert_eq!(g.quotient_by_f().order(), Some(4));
        // x2 + 2 x1 - f = 0
        assert_eq!(g.canonicalize(&[2, 1, -1]), g.zero());
        assert_eq!(g.weight(&g.x(1)), 2);
    }

    #[test]
    fn grading_single_variable() {
        let g = GradingGroup::build(&chain("2")).unwrap();
        assert_eq!(g.weights(), &[1]);
        assert_eq!(g.f_weight(), 2);
        assert_eq!(g.scale(2, &g.x(0)), g.f());
    }

    #[test]
    fn grading_two_two_two_weights() {
        let g = GradingGroup::build(&chain("2,2,2")).unwrap();
        assert_eq!(g.weights(), &[3, 2, 4]);
        assert_eq!(g.f_weight(), 8);
    }

    #[test]
    fn monomials_two_two() {
        let g = GradingGroup::build(&chain("2,2")).unwrap();
        assert_eq!(g.monomial_basis(&g.zero()), vec![vec![0, 0]]);
        assert_eq!(g.monomial_basis(&g.x(1)), vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(g.monomial_basis(&g.x(0)), vec![vec![1, 0]]);
        assert!(g.monomial_basis(&g.neg(&g.x(0))).is_empty());
    }

    #[test]
    fn x1_f_decomposition() {
        let g = GradingGroup::build(&chain("3,2")).unwrap();
        let l = g.add(&g.scale(5, &g.x(0)), &g.scale(-2, &g.f()));
        assert_eq!(g.x1_f_coordinates(&l), Some((5, -2)));
    }
}
