//! The coefficient field `Q(s)` with `s^2 = t`.
//!
//! Correlators live in `Q[t, 1/t]`, but the local Airy data near the branch
//! point carries `t^{1/2}`, so every multivariate object is built over
//! rational functions in `s`. In practice almost every value is a Laurent
//! monomial `c*s^k`; the arithmetic has a fast path for monomial
//! denominators and only falls back to a Euclidean gcd otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, BigRational};
use super::render::{render_terms, Term};
use crate::error::{Error, Result};

/// Sparse polynomial in `s` over `Q`: ascending exponents, no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SPoly {
    terms: Vec<(u32, BigRational)>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn monomial(c: BigRational, e: u32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            SPoly {
                terms: vec![(e, c)],
            }
        }
    }

    fn from_map(map: BTreeMap<u32, BigRational>) -> Self {
        SPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(coeffs: &[BigRational]) -> Self {
        SPoly {
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e as u32, c.clone()))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn valuation(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn is_even(&self) -> bool {
        self.terms.iter().all(|(e, _)| e % 2 == 0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn shift_up(&self, k: u32) -> Self {
        SPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Divide by `s^k`; the caller guarantees `valuation >= k`.
    pub fn shift_down(&self, k: u32) -> Self {
        SPoly {
            terms: self.terms.iter().map(|(e, c)| (e - k, c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &SPoly) -> SPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                std::cmp::Ordering::Less => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((*ea, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        SPoly { terms: out }
    }

    pub fn neg(&self) -> SPoly {
        SPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &SPoly) -> SPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SPoly) -> SPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return SPoly {
                terms: other.terms.iter().map(|(f, d)| (e + f, c * d)).collect(),
            };
        }
        if other.terms.len() == 1 {
            return other.mul(self);
        }
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(ea + eb).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    fn to_dense(&self) -> Vec<BigRational> {
        let n = self.degree().map_or(0, |d| d as usize + 1);
        let mut v = vec![BigRational::zero(); n];
        for (e, c) in &self.terms {
            v[*e as usize] = c.clone();
        }
        v
    }

    /// Euclidean division `self = q*d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &SPoly) -> Result<(SPoly, SPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)? as usize;
        let lc = d.leading_coeff().unwrap().clone();
        let dv = d.to_dense();
        let mut r = self.to_dense();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (i, di) in dv.iter().enumerate() {
                if !di.is_zero() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::from_dense(&q), Self::from_dense(&r)))
    }

    pub fn make_monic(&self) -> SPoly {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Monic gcd.
    pub fn gcd(a: &SPoly, b: &SPoly) -> SPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.make_monic()
    }

    pub fn derivative(&self) -> SPoly {
        SPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e > 0)
                .map(|(e, c)| (e - 1, c * int(*e as i64)))
                .collect(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut p = BigRational::one();
            for _ in 0..*e {
                p *= x;
            }
            acc += c * p;
        }
        acc
    }
}

/// Element of `Q(s)`, kept as `num/den` with `gcd = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: SPoly,
    den: SPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: SPoly::zero(),
            den: SPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar {
            num: SPoly::monomial(c, 0),
            den: SPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `c * s^e` for any integer `e`.
    pub fn monomial(c: BigRational, e: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if e >= 0 {
            Scalar {
                num: SPoly::monomial(c, e as u32),
                den: SPoly::one(),
            }
        } else {
            Scalar {
                num: SPoly::monomial(c, 0),
                den: SPoly::monomial(BigRational::one(), (-e) as u32),
            }
        }
    }

    pub fn s() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn t() -> Self {
        Self::monomial(BigRational::one(), 2)
    }

    /// `c * t^e`.
    pub fn t_monomial(c: BigRational, e: i32) -> Self {
        Self::monomial(c, 2 * e)
    }

    /// Build `num/den` and bring it to canonical form.
    pub fn from_parts(num: SPoly, den: SPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: SPoly, den: SPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_monomial() {
            let (k, c) = den.terms[0].clone();
            let v = num.valuation().unwrap().min(k);
            let num = num.shift_down(v);
            let num = if c.is_one() {
                num
            } else {
                num.scale(&c.recip())
            };
            return Scalar {
                num,
                den: SPoly::monomial(BigRational::one(), k - v),
            };
        }
        let g = SPoly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        let lc = den.leading_coeff().unwrap().recip();
        Scalar {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn numer(&self) -> &SPoly {
        &self.num
    }

    pub fn denom(&self) -> &SPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0)
            && self.num.terms.len() == 1
            && self.num.terms[0].0 == 0
            && self.num.terms[0].1.is_one()
    }

    /// Whether the value lies in `Q(t)`.
    pub fn is_even(&self) -> bool {
        self.num.is_even() && self.den.is_even()
    }

    /// `Some((e, c))` when the value is a single term `c*s^e`.
    pub fn as_monomial(&self) -> Option<(i32, &BigRational)> {
        if self.num.is_monomial() && self.den.is_monomial() {
            let (e, c) = &self.num.terms[0];
            Some((*e as i32 - self.den.terms[0].0 as i32, c))
        } else {
            None
        }
    }

    /// Terms `(e, c)` of `c*s^e` when the denominator is a power of `s`.
    pub fn laurent_terms(&self) -> Option<Vec<(i32, BigRational)>> {
        if !self.den.is_monomial() {
            return None;
        }
        let k = self.den.terms[0].0 as i32;
        Some(
            self.num
                .terms
                .iter()
                .map(|(e, c)| (*e as i32 - k, c.clone()))
                .collect(),
        )
    }

    /// The rational number, if this scalar is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        match self.as_monomial() {
            Some((0, c)) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn eval_s(&self, s: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(s);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(s) / d)
    }

    /// Render with `name` standing for `s`, or for `t` when `in_t` (only
    /// meaningful for even values).
    pub fn render(&self, in_t: bool) -> String {
        let var = if in_t { "t" } else { "s" };
        let div = if in_t { 2 } else { 1 };
        match self.laurent_terms() {
            Some(ts) => {
                let terms: Vec<Term> = ts
                    .into_iter()
                    .map(|(e, c)| Term {
                        coeff: c,
                        factors: vec![(var.to_string(), e / div)],
                    })
                    .collect();
                render_terms(&terms)
            }
            None => {
                let side = |p: &SPoly| {
                    let terms: Vec<Term> = p
                        .terms
                        .iter()
                        .map(|(e, c)| Term {
                            coeff: c.clone(),
                            factors: vec![(var.to_string(), *e as i32 / div)],
                        })
                        .collect();
                    render_terms(&terms)
                };
                format!("({})/({})", side(&self.num), side(&self.den))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(self.is_even()))
    }
}

impl From<BigRational> for Scalar {
    fn from(c: BigRational) -> Self {
        Scalar::from_rational(c)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            let (ka, kb) = (self.den.terms[0].0, rhs.den.terms[0].0);
            let k = ka.max(kb);
            let num = self.num.shift_up(k - ka).add(&rhs.num.shift_up(k - kb));
            return Scalar::reduce(num, SPoly::monomial(BigRational::one(), k));
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Scalar::reduce(num, self.den.mul(&rhs.den))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_monomial() && rhs.den.is_monomial() {
            let k = self.den.terms[0].0 + rhs.den.terms[0].0;
            return Scalar::reduce(
                self.num.mul(&rhs.num),
                SPoly::monomial(BigRational::one(), k),
            );
        }
        Scalar::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn poly(cs: &[i64]) -> SPoly {
        SPoly::from_dense(&cs.iter().map(|&c| int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn s_squared_is_t() {
        assert_eq!(&Scalar::s() * &Scalar::s(), Scalar::t());
        assert_eq!(Scalar::t().to_string(), "t");
    }

    #[test]
    fn reciprocal_of_eight_s() {
        let a = Scalar::monomial(rat(1, 8), -1);
        assert_eq!(a.try_div(&a).unwrap(), Scalar::one());
        let b = Scalar::monomial(int(4), 1);
        assert_eq!(&a * &b, Scalar::from_rational(rat(1, 2)));
        assert_eq!(a.to_string(), "1/8*s^-1");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            Scalar::one().try_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(Scalar::from_parts(SPoly::one(), SPoly::zero()).is_err());
    }

    #[test]
    fn general_denominators_reduce() {
        // (s^2 - 1)/(s - 1) = s + 1
        let x = Scalar::from_parts(poly(&[-1, 0, 1]), poly(&[-1, 1])).unwrap();
        assert_eq!(x, Scalar::from_parts(poly(&[1, 1]), SPoly::one()).unwrap());
        // 1/(2s+2) is stored with a monic denominator
        let y = Scalar::from_parts(SPoly::one(), poly(&[2, 2])).unwrap();
        assert_eq!(y.denom(), &poly(&[1, 1]));
        assert_eq!(y.numer(), &SPoly::monomial(rat(1, 2), 0));
        let z = &(&y + &y) * &Scalar::from_parts(poly(&[1, 1]), SPoly::one()).unwrap();
        assert_eq!(z, Scalar::one());
    }

    #[test]
    fn render_mixed() {
        let x = &Scalar::t_monomial(rat(-1, 8), 0) + &Scalar::t_monomial(int(3), 2);
        assert_eq!(x.to_string(), "-1/8 + 3*t^2");
        let y = Scalar::from_parts(SPoly::one(), poly(&[1, 1])).unwrap();
        assert_eq!(y.to_string(), "(1)/(1 + s)");
    }
}
