//! Rational functions `num/den` of Laurent polynomials, used for residues
//! and for difference quotients that only become polynomial after summing.

use std::ops::{Add, Mul, Neg, Sub};

use super::laurent::LaurentMulti;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ParamRational {
    num: LaurentMulti,
    den: LaurentMulti,
}

/// Laurent expansion in one variable: `coeffs[k]` multiplies `live^(start + k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub start: i32,
    pub coeffs: Vec<LaurentMulti>,
}

impl LaurentSeries {
    /// Coefficient of `live^e`; `None` beyond the computed range.
    pub fn coeff(&self, e: i32) -> Option<&LaurentMulti> {
        if e < self.start {
            return None;
        }
        self.coeffs.get((e - self.start) as usize)
    }

    pub fn order(&self) -> i32 {
        self.start + self.coeffs.len() as i32 - 1
    }
}

impl ParamRational {
    pub fn new(num: LaurentMulti, den: LaurentMulti) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::VariableCountMismatch {
                left: num.nvars(),
                right: den.nvars(),
            });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    /// Move monomial content of the denominator into the numerator.
    fn normalized(num: LaurentMulti, den: LaurentMulti) -> Self {
        if num.is_zero() {
            let n = num.nvars();
            return ParamRational {
                num,
                den: LaurentMulti::one(n),
            };
        }
        if den.is_monomial() {
            let q = num.exact_quotient(&den).expect("monomial divisor");
            let n = q.nvars();
            return ParamRational {
                num: q,
                den: LaurentMulti::one(n),
            };
        }
        let m = den.min_exponents();
        let neg: Vec<i32> = m.iter().map(|x| -x).collect();
        ParamRational {
            num: num.shift(&neg),
            den: den.shift(&neg),
        }
    }

    pub fn from_laurent(p: LaurentMulti) -> Self {
        let n = p.nvars();
        ParamRational {
            num: p,
            den: LaurentMulti::one(n),
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numer(&self) -> &LaurentMulti {
        &self.num
    }

    pub fn denom(&self) -> &LaurentMulti {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ParamRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::normalized(self.num.pow(k), self.den.pow(k))
    }

    /// Collapse to a Laurent polynomial; fails if the denominator does not divide.
    pub fn to_laurent(&self) -> Result<LaurentMulti> {
        self.num.exact_quotient(&self.den)
    }

    /// Equality of rational functions by cross multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn derivative(&self, i: usize) -> Self {
        let num = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::normalized(num, self.den.pow(2))
    }

    pub fn map_vars(&self, new_nvars: usize, map: &[usize]) -> Result<Self> {
        Self::new(
            self.num.map_vars(new_nvars, map),
            self.den.map_vars(new_nvars, map),
        )
    }

    /// Evaluate variable `i` at variable `j` (the result no longer depends
    /// on `y_i`; the slot is kept). Removable singularities along `y_i = y_j`
    /// are cancelled first; a genuine pole is an error.
    pub fn eval_at_var(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.nvars();
        let map: Vec<usize> = (0..n).map(|k| if k == i { j } else { k }).collect();
        let diff = &LaurentMulti::var(n, i) - &LaurentMulti::var(n, j);
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        loop {
            let (nn, dd) = (num.map_vars(n, &map), den.map_vars(n, &map));
            if !dd.is_zero() {
                return Ok(Self::normalized(nn, dd));
            }
            if !nn.is_zero() {
                return Err(Error::DivergentDiagonal);
            }
            num = num.exact_quotient(&diff)?;
            den = den.exact_quotient(&diff)?;
        }
    }

    /// Laurent expansion in variable `live` around `live = 0` up to and
    /// including `live^order`. The denominator must factor as
    /// `live^k * Q` with `Q(0)` a single term (a unit of the Laurent ring);
    /// `Q` is inverted as a truncated series. Coefficients keep the slot of
    /// `live`, which is zero in each of them.
    pub fn series_coefficients_at_zero(&self, live: usize, order: i32) -> Result<LaurentSeries> {
        let n = self.nvars();
        let nc = self.num.collect_var(live);
        let dc = self.den.collect_var(live);
        let (&vd, q0) = dc.iter().next().expect("nonzero denominator");
        if !q0.is_monomial() {
            return Err(Error::NonMonomialDenominator(q0.to_string()));
        }
        let (q0e, q0c) = q0.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let q0_inv = LaurentMulti::monomial(q0e.iter().map(|x| -x).collect(), q0c.inv()?);
        let vn = match nc.keys().next() {
            Some(&v) => v,
            None => {
                return Ok(LaurentSeries {
                    start: order + 1,
                    coeffs: Vec::new(),
                })
            }
        };
        let start = vn - vd;
        if order < start {
            return Ok(LaurentSeries {
                start,
                coeffs: Vec::new(),
            });
        }
        let len = (order - start + 1) as usize;
        let qs: Vec<LaurentMulti> = (0..len)
            .map(|k| {
                dc.get(&(vd + k as i32))
                    .cloned()
                    .unwrap_or_else(|| LaurentMulti::zero(n))
            })
            .collect();
        let mut inv: Vec<LaurentMulti> = Vec::with_capacity(len);
        inv.push(q0_inv.clone());
        for i in 1..len {
            let mut acc = LaurentMulti::zero(n);
            for j in 1..=i {
                if !qs[j].is_zero() && !inv[i - j].is_zero() {
                    acc = &acc + &(&qs[j] * &inv[i - j]);
                }
            }
            inv.push(-&(&acc * &q0_inv));
        }
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = LaurentMulti::zero(n);
            for (&e, c) in nc.range(vn..=vn + k as i32) {
                let idx = (k as i32 - (e - vn)) as usize;
                if !inv[idx].is_zero() {
                    acc = &acc + &(c * &inv[idx]);
                }
            }
            coeffs.push(acc);
        }
        Ok(LaurentSeries { start, coeffs })
    }

    /// Coefficient of `live^-1` in the expansion at zero.
    pub fn residue_at_zero(&self, live: usize) -> Result<LaurentMulti> {
        let s = self.series_coefficients_at_zero(live, -1)?;
        Ok(s.coeff(-1)
            .cloned()
            .unwrap_or_else(|| LaurentMulti::zero(self.nvars())))
    }
}

impl<'a> Add<&'a ParamRational> for &'a ParamRational {
    type Output = ParamRational;
    fn add(self, rhs: &ParamRational) -> ParamRational {
        if self.den == rhs.den {
            return ParamRational::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        ParamRational::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a ParamRational> for &'a ParamRational {
    type Output = ParamRational;
    fn sub(self, rhs: &ParamRational) -> ParamRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ParamRational> for &'a ParamRational {
    type Output = ParamRational;
    fn mul(self, rhs: &ParamRational) -> ParamRational {
        ParamRational::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &ParamRational {
    type Output = ParamRational;
    fn neg(self) -> ParamRational {
        ParamRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
