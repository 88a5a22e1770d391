//! Sparse multivariate Laurent polynomials over [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, BigRational};
use super::render::{render_terms, Term};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `sum c_e * y^e` with exponent vectors of fixed length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMulti {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Scalar>,
}

impl LaurentMulti {
    pub fn zero(nvars: usize) -> Self {
        LaurentMulti {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<i32>, c: Scalar) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentMulti { nvars, terms }
    }

    /// The variable `y_i` in a ring of `nvars` variables.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, e: i32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Self::monomial(exps, Scalar::one())
    }

    /// Build from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i32>, Scalar)>,
    {
        let mut out = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent vector length");
            out.add_term(e, c);
        }
        out
    }

    /// Univariate polynomial in `y_i` with rational coefficients `cs[k] * y_i^k`.
    pub fn univariate(nvars: usize, i: usize, cs: &[BigRational]) -> Self {
        Self::from_terms(
            nvars,
            cs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[i] = k as i32;
                (e, Scalar::from_rational(c.clone()))
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Some(c)` when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|x| *x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Vec<i32>, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Vec<i32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentMulti {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> Self {
        self.scale(&Scalar::from_rational(c.clone()))
    }

    /// Multiply by the monomial `y^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        LaurentMulti {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Re-index variables: old variable `i` becomes new variable `map[i]`
    /// in a ring of `new_nvars` variables. Colliding targets multiply,
    /// which is how diagonal restrictions `f(y, y)` are taken.
    pub fn map_vars(&self, new_nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        Self::from_terms(
            new_nvars,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; new_nvars];
                for (i, x) in e.iter().enumerate() {
                    ne[map[i]] += x;
                }
                (ne, c.clone())
            }),
        )
    }

    /// Apply a permutation of the variables: variable `i` moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        self.map_vars(self.nvars, perm)
    }

    /// Substitute `y_i -> -y_i`.
    pub fn negate_var(&self, i: usize) -> Self {
        LaurentMulti {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), if e[i] % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }

    /// Partial derivative in `y_i`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
                let mut ne = e.clone();
                ne[i] -= 1;
                (ne, c.scale(&int(e[i] as i64)))
            }),
        )
    }

    pub fn min_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    pub fn max_exponent(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut m = vec![0; self.nvars];
        for (k, e) in self.terms.keys().enumerate() {
            for i in 0..self.nvars {
                m[i] = if k == 0 { e[i] } else { m[i].min(e[i]) };
            }
        }
        m
    }

    /// Group by the power of `y_i`: returns `power -> coefficient` where the
    /// coefficient no longer depends on `y_i` (its slot is zero).
    pub fn collect_var(&self, i: usize) -> BTreeMap<i32, LaurentMulti> {
        let mut out: BTreeMap<i32, LaurentMulti> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i] = 0;
            out.entry(e[i])
                .or_insert_with(|| LaurentMulti::zero(self.nvars))
                .add_term(ne, c.clone());
        }
        out
    }

    /// Drop variable `i`, which must not occur.
    pub fn remove_var(&self, i: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars)
            .map(|k| {
                if k < i {
                    k
                } else if k == i {
                    0
                } else {
                    k - 1
                }
            })
            .collect();
        debug_assert!(self.terms.keys().all(|e| e[i] == 0));
        self.map_vars(self.nvars - 1, &map)
    }

    /// Insert a fresh variable at position `i`.
    pub fn insert_var(&self, i: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars)
            .map(|k| if k < i { k } else { k + 1 })
            .collect();
        self.map_vars(self.nvars + 1, &map)
    }

    /// Coefficient-wise transform of every scalar.
    pub fn map_coeffs<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    /// Exact division `a = q * b`; fails with the remainder otherwise.
    ///
    /// Both operands are shifted to genuine polynomials and divided with
    /// respect to the lexicographic order on exponent vectors.
    pub fn exact_quotient(&self, b: &LaurentMulti) -> Result<LaurentMulti> {
        self.check(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let n = self.nvars;
        let ma = self.min_exponents();
        let mb = b.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let bp = b.shift(&neg(&mb));
        let (lb_e, lb_c) = bp.leading().map(|(e, c)| (e.clone(), c.inv())).unwrap();
        let lb_inv = lb_c?;
        if bp.is_monomial() {
            let shift: Vec<i32> = lb_e.iter().zip(&mb).map(|(x, y)| -x - y).collect();
            return Ok(self.shift(&shift).scale(&lb_inv));
        }
        let mut r = self.shift(&neg(&ma));
        let mut q = Self::zero(n);
        let mut rem = Self::zero(n);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&lb_e).all(|(x, y)| x >= y) {
                let d: Vec<i32> = re.iter().zip(&lb_e).map(|(x, y)| x - y).collect();
                let c = &rc * &lb_inv;
                let t = Self::monomial(d, c);
                r = &r - &(&t * &bp);
                q = &q + &t;
            } else {
                r.terms.remove(&re);
                rem.add_term(re, rc);
            }
        }
        if !rem.is_zero() {
            return Err(Error::NotDivisible {
                remainder: rem.shift(&ma).to_string(),
            });
        }
        let shift: Vec<i32> = ma.iter().zip(&mb).map(|(x, y)| x - y).collect();
        Ok(q.shift(&shift))
    }

    /// Whether every coefficient lies in `Q(t)`.
    pub fn is_even_in_s(&self) -> bool {
        self.terms.values().all(Scalar::is_even)
    }

    /// Canonical rendering with variables `y0, y1, ...`.
    pub fn render(&self) -> String {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("y{i}")).collect();
        self.render_with(&names)
    }

    /// Canonical rendering: each scalar is expanded into its parameter
    /// terms and the result is sorted by `(parameter exponent, exponents)`.
    pub fn render_with(&self, names: &[String]) -> String {
        let in_t = self.is_even_in_s();
        let (pname, div) = if in_t { ("t", 2) } else { ("s", 1) };
        let mut simple: Vec<(i32, Vec<i32>, BigRational)> = Vec::new();
        let mut complex: Vec<(Vec<i32>, String)> = Vec::new();
        for (e, c) in &self.terms {
            match c.laurent_terms() {
                Some(ts) => {
                    for (k, x) in ts {
                        simple.push((k / div, e.clone(), x));
                    }
                }
                None => complex.push((e.clone(), c.render(in_t))),
            }
        }
        simple.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let terms: Vec<Term> = simple
            .into_iter()
            .map(|(k, e, c)| {
                let mut factors = vec![(pname.to_string(), k)];
                factors.extend(names.iter().cloned().zip(e));
                Term { coeff: c, factors }
            })
            .collect();
        let mut out = render_terms(&terms);
        for (e, c) in complex {
            let mono: Vec<String> = names
                .iter()
                .zip(&e)
                .filter(|(_, x)| **x != 0)
                .map(|(n, x)| {
                    if *x == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{x}")
                    }
                })
                .collect();
            let piece = if mono.is_empty() {
                c
            } else {
                format!("{c}*{}", mono.join("*"))
            };
            if out == "0" {
                out = piece;
            } else {
                out = format!("{out} + {piece}");
            }
        }
        out
    }
}

impl fmt::Display for LaurentMulti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<'a> Add<&'a LaurentMulti> for &'a LaurentMulti {
    type Output = LaurentMulti;
    fn add(self, rhs: &LaurentMulti) -> LaurentMulti {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl<'a> Sub<&'a LaurentMulti> for &'a LaurentMulti {
    type Output = LaurentMulti;
    fn sub(self, rhs: &LaurentMulti) -> LaurentMulti {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl<'a> Mul<&'a LaurentMulti> for &'a LaurentMulti {
    type Output = LaurentMulti;
    fn mul(self, rhs: &LaurentMulti) -> LaurentMulti {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &LaurentMulti {
    type Output = LaurentMulti;
    fn neg(self) -> LaurentMulti {
        LaurentMulti {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentMulti> for LaurentMulti {
            type Output = LaurentMulti;
            fn $m(self, rhs: LaurentMulti) -> LaurentMulti {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentMulti> for LaurentMulti {
            type Output = LaurentMulti;
            fn $m(self, rhs: &'a LaurentMulti) -> LaurentMulti {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentMulti {
    type Output = LaurentMulti;
    fn neg(self) -> LaurentMulti {
        -&self
    }
}

/// `1 - 16*y_i^2`, the recurring factor of the even-coupling curve.
pub fn one_minus_16y2(nvars: usize, i: usize) -> LaurentMulti {
    LaurentMulti::univariate(
        nvars,
        i,
        &[BigRational::one(), BigRational::zero(), int(-16)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn y(n: usize, i: usize) -> LaurentMulti {
        LaurentMulti::var(n, i)
    }

    #[test]
    fn monomial_product() {
        let a = LaurentMulti::var_pow(1, 0, -1);
        let b = LaurentMulti::var_pow(1, 0, -2);
        assert_eq!(&a * &b, LaurentMulti::var_pow(1, 0, -3));
    }

    #[test]
    fn g01_square() {
        let g01 = LaurentMulti::univariate(1, 0, &[rat(1, 8), int(1), int(2)]);
        let lin = LaurentMulti::univariate(1, 0, &[int(1), int(4)]);
        assert_eq!(g01.pow(2), lin.pow(4).scale_rat(&rat(1, 64)));
    }

    #[test]
    fn quotients() {
        let d = &y(2, 0) - &y(2, 1);
        let s = &y(2, 0) + &y(2, 1);
        let a = (&s * &d).pow(2);
        assert_eq!(a.exact_quotient(&d).unwrap(), &d * &s.pow(2));
        let y04 = &y(2, 0).pow(4) - &y(2, 1).pow(4);
        let q = y04.exact_quotient(&(&s * &d)).unwrap();
        assert_eq!(q, &y(2, 0).pow(2) + &y(2, 1).pow(2));
        let err = y(2, 0).exact_quotient(&s).unwrap_err();
        assert!(matches!(err, Error::NotDivisible { .. }));
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(y(1, 0).checked_mul(&y(2, 0)).is_err());
    }

    #[test]
    fn rendering_order() {
        let t = Scalar::t_monomial(rat(1, 32), -1);
        let u = Scalar::t_monomial(rat(-1, 128), -1);
        let p = &LaurentMulti::monomial(vec![-2], t) + &LaurentMulti::monomial(vec![-4], u);
        assert_eq!(p.render(), "-1/128*t^-1*y0^-4 + 1/32*t^-1*y0^-2");
    }

    #[test]
    fn diagonal_and_derivative() {
        let f = &y(2, 0) * &y(2, 1).pow(3);
        assert_eq!(f.map_vars(1, &[0, 0]), y(1, 0).pow(4));
        assert_eq!(
            f.derivative(1),
            (&y(2, 0) * &y(2, 1).pow(2)).scale_rat(&int(3))
        );
        assert_eq!(f.negate_var(1), -&f);
    }
}
