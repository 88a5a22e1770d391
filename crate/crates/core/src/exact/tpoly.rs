//! Laurent polynomials in the single parameter `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::BigRational;
use super::render::{render_terms, Term};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TPolynomial {
    terms: BTreeMap<i32, BigRational>,
}

impl TPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TPolynomial { terms }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i32) -> BigRational {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((e, c))` when the polynomial is a single term `c*t^e`.
    pub fn as_monomial(&self) -> Option<(i32, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TPolynomial {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn shift(&self, k: i32) -> Self {
        TPolynomial {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    fn add_term(&mut self, e: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        self.terms.iter().fold(Scalar::zero(), |acc, (e, c)| {
            &acc + &Scalar::t_monomial(c.clone(), *e)
        })
    }

    /// Inverse of [`TPolynomial::to_scalar`]; fails unless the value lies in `Q[t, 1/t]`.
    pub fn from_scalar(x: &Scalar) -> Result<Self> {
        let terms = x
            .laurent_terms()
            .ok_or_else(|| Error::NotTPolynomial(x.to_string()))?;
        let mut out = TPolynomial::zero();
        for (e, c) in terms {
            if e % 2 != 0 {
                return Err(Error::NotTPolynomial(x.to_string()));
            }
            out.add_term(e / 2, c);
        }
        Ok(out)
    }
}

impl fmt::Display for TPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(e, c)| Term {
                coeff: c.clone(),
                factors: vec![("t".to_string(), *e)],
            })
            .collect();
        f.write_str(&render_terms(&terms))
    }
}

impl<'a> Add<&'a TPolynomial> for &'a TPolynomial {
    type Output = TPolynomial;
    fn add(self, rhs: &TPolynomial) -> TPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a TPolynomial> for &'a TPolynomial {
    type Output = TPolynomial;
    fn sub(self, rhs: &TPolynomial) -> TPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a TPolynomial> for &'a TPolynomial {
    type Output = TPolynomial;
    fn mul(self, rhs: &TPolynomial) -> TPolynomial {
        let mut out = TPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &TPolynomial {
    type Output = TPolynomial;
    fn neg(self) -> TPolynomial {
        TPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Add for TPolynomial {
    type Output = TPolynomial;
    fn add(self, rhs: TPolynomial) -> TPolynomial {
        &self + &rhs
    }
}

impl Sub for TPolynomial {
    type Output = TPolynomial;
    fn sub(self, rhs: TPolynomial) -> TPolynomial {
        &self - &rhs
    }
}

impl Mul for TPolynomial {
    type Output = TPolynomial;
    fn mul(self, rhs: TPolynomial) -> TPolynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn render_and_roundtrip() {
        let p = &TPolynomial::monomial(rat(-1, 8), 0) + &TPolynomial::monomial(int(4), 2);
        assert_eq!(p.to_string(), "-1/8 + 4*t^2");
        assert_eq!(TPolynomial::from_scalar(&p.to_scalar()).unwrap(), p);
        assert!(TPolynomial::from_scalar(&Scalar::s()).is_err());
        assert_eq!(TPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = TPolynomial::monomial(int(3), 1);
        assert!((&p - &p).is_zero());
    }
}
