//! Truncated univariate power series over [`Scalar`].

use num_traits::Zero;

use super::rational::{binomial_rational, int, BigRational};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `sum_{k < len} c_k x^k`, exact up to the truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    pub coeffs: Vec<Scalar>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn from_rationals(cs: &[BigRational]) -> Self {
        Self::new(cs.iter().cloned().map(Scalar::from_rational).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self::new((0..len).map(|k| self.coeff(k)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self::new((0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self::new((0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(out)
    }

    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::Series("a nonzero constant term to invert"));
        }
        let c0i = c0.inv()?;
        let n = self.len();
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        out.push(c0i.clone());
        for i in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=i {
                acc = &acc + &(&self.coeffs[j] * &out[i - j]);
            }
            out.push(-&(&acc * &c0i));
        }
        Ok(Self::new(out))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            (1..self.len())
                .map(|k| self.coeffs[k].scale(&int(k as i64)))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term, same length.
    pub fn integral(&self) -> Self {
        let mut out = vec![Scalar::zero()];
        for k in 1..self.len() {
            out.push(self.coeffs[k - 1].scale(&int(k as i64).recip()));
        }
        Self::new(out)
    }

    fn check_unit(&self) -> Result<()> {
        if self.coeff(0) == Scalar::one() {
            Ok(())
        } else {
            Err(Error::Series("constant term 1"))
        }
    }

    /// `log(f)` for `f(0) = 1`.
    pub fn log(&self) -> Result<Self> {
        self.check_unit()?;
        let q = self.derivative().mul(&self.inv()?.truncate(self.len() - 1));
        Ok(q.integral_extend(self.len()))
    }

    fn integral_extend(&self, len: usize) -> Self {
        let mut out = vec![Scalar::zero()];
        for k in 1..len {
            out.push(self.coeff(k - 1).scale(&int(k as i64).recip()));
        }
        Self::new(out)
    }

    /// `exp(f)` for `f(0) = 0`, via `E' = f' E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::Series("constant term 0"));
        }
        let n = self.len();
        let d = self.derivative();
        let mut out = vec![Scalar::one()];
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 0..k {
                acc = &acc + &(&d.coeff(j) * &out[k - 1 - j]);
            }
            out.push(acc.scale(&int(k as i64).recip()));
        }
        Ok(Self::new(out))
    }

    /// `f^alpha` for rational `alpha` and `f(0) = 1`, by binomial series in `f - 1`.
    pub fn pow_rational(&self, alpha: &BigRational) -> Result<Self> {
        self.check_unit()?;
        let n = self.len();
        let mut h = self.clone();
        h.coeffs[0] = Scalar::zero();
        let mut out = PowerSeries::new(vec![Scalar::zero(); n]);
        out.coeffs[0] = Scalar::one();
        let mut hk = PowerSeries::new(vec![Scalar::one()]).truncate(n);
        for k in 1..n {
            hk = hk.mul(&h);
            let b = binomial_rational(alpha, k as u64);
            if !b.is_zero() {
                out = out.add(&hk.scale(&Scalar::from_rational(b)));
            }
        }
        Ok(out)
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.pow_rational(&BigRational::new(1.into(), 2.into()))
    }
}
