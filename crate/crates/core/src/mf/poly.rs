//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactmath::BigRat;

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(n: usize, c: BigRat) -> Self {
        MPoly::term(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        MPoly::constant(n, BigRat::one())
    }

    pub fn term(m: Monomial, c: BigRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        MPoly::term(m, BigRat::one())
    }

    /// `x_i^e` in `n` variables.
    pub fn var_pow(n: usize, i: usize, e: u32) -> Self {
        let mut m = vec![0; n];
        m[i] = e;
        MPoly::monomial(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> BigRat {
        self.terms.get(m).cloned().unwrap_or_else(BigRat::zero)
    }

    /// The constant term if this is a nonzero constant.
    pub fn as_unit(&self) -> Option<&BigRat> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        m.iter().all(|&e| e == 0).then_some(c)
    }

    pub fn add_term(&mut self, m: &[u32], c: &BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.to_vec(), c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &MPoly) {
        for (m, c) in &other.terms {
            self.add_term(m, c);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(&m, &(c1 * c2));
            }
        }
        out
    }

    /// `c * x^m * self`
    pub fn mul_term(&self, m: &[u32], c: &BigRat) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m2, c2)| (m.iter().zip(m2).map(|(a, b)| a + b).collect(), c * c2))
                .collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let abs = c.abs();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = MPoly::var_pow(2, 0, 1);
        let y = MPoly::var_pow(2, 1, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&[1, 1]), BigRat::from_integer(2.into()));
        assert!(s.sub(&s).is_zero());
        assert_eq!(MPoly::one(2).as_unit(), Some(&BigRat::one()));
        assert_eq!(x.as_unit(), None);
        assert_eq!(sq.to_string(), "x1^2 + 2*x1*x2 + x2^2");
    }
}
