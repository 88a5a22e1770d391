//! Local Airy coordinate of the even-coupling curve.
//!
//! Near the branch point `x = 4t + ζ^2`. In the global coordinate `y`,
//! `ζ^2 = 64 t y^2/(1 - 16 y^2)` and we take the branch
//! `ζ = 8 s y/sqrt(1 - 16 y^2)`, `s^2 = t`, so that `y ~ ζ/(8s)`.
//!
//! Each ladder (times, Bergman coefficients, the basis `ζ_k`) has a closed
//! formula and an independent series derivation; the constructors compare
//! the two and fail with [`Error::Mismatch`] on disagreement.
//!
//! Differentials in `x` are read with `(1 - 4t/x)^{1/2} = -4y`, the branch
//! on which the `x`-expansion of `ζ_k` agrees with its `y`-form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::eo::{Form, MultiDifferential};
use crate::error::{Error, Result};
use crate::exact::laurent::one_minus_16y2;
use crate::exact::rational::{
    binomial, binomial_rational, double_factorial, factorial, int, pow2, rat, rat_pow, BigRational,
};
use crate::exact::{LaurentMulti, ParamRational, PowerSeries, Scalar};
use crate::npoint::from_x_form;

fn sc(q: BigRational) -> Scalar {
    Scalar::from_rational(q)
}

fn big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn dfact(n: i64) -> BigRational {
    big(double_factorial(n))
}

fn fact(n: u64) -> BigRational {
    big(factorial(n))
}

fn binom(n: u64, k: u64) -> BigRational {
    big(binomial(n, k))
}

fn sign(n: u32) -> BigRational {
    if n.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

fn mismatch(what: String) -> Error {
    Error::Mismatch(what)
}

// ---------------------------------------------------------------- times

/// `t_{2n+3} = (-1)^n (2n-1)!!/n! / (2^{3n+3} t^{n+1/2})`.
pub fn time(n: u32) -> Scalar {
    let c = sign(n) * dfact(2 * n as i64 - 1) / fact(n as u64) * pow2(-(3 * n as i64 + 3));
    Scalar::monomial(c, -(2 * n as i32 + 1))
}

/// `t_3, t_5, ..` read off as the `ζ^{2n+1}` coefficients of
/// `y = ζ/(8s) (1 + ζ^2/4t)^{-1/2}`.
pub fn times_from_series(k_max: u32) -> Result<Vec<Scalar>> {
    let len = k_max as usize + 1;
    let base =
        PowerSeries::new(vec![Scalar::one(), Scalar::t_monomial(rat(1, 4), -1)]).truncate(len);
    let root = base.pow_rational(&rat(-1, 2))?;
    let lead = Scalar::monomial(rat(1, 8), -1);
    Ok(root.coeffs.iter().map(|c| c * &lead).collect())
}

/// `t_{2n+3}` for `n <= k_max`, checked against the series of `y(ζ)`.
pub fn airy_times(k_max: u32) -> Result<Vec<Scalar>> {
    let closed: Vec<Scalar> = (0..=k_max).map(time).collect();
    let series = times_from_series(k_max)?;
    for (n, (a, b)) in closed.iter().zip(&series).enumerate() {
        if a != b {
            return Err(mismatch(format!("t_{}: {a} vs {b}", 2 * n + 3)));
        }
    }
    Ok(closed)
}

// ---------------------------------------------------------------- conjugate times

/// `e^{t~_0}`, fixed by the `(0,3)` template to `1/(2 t_3) = 4s`.
pub fn exp_ttilde0() -> Scalar {
    Scalar::monomial(int(4), 1)
}

/// `[u^{-n}] E = (-1)^n (2n+1)!! (2n-1)!!/n! / (2^{3n+3} t^{n+1/2})`.
pub fn e_coefficient(n: u32) -> Scalar {
    let c = sign(n) * dfact(2 * n as i64 + 1) * dfact(2 * n as i64 - 1) / fact(n as u64)
        * pow2(-(3 * n as i64 + 3));
    Scalar::monomial(c, -(2 * n as i32 + 1))
}

/// `(e^{t~_0}, [t~_1, .., t~_{k_max}])` with `t~_k` the coefficients of
/// `-log(E/E_0)` in `u^{-1}`.
pub fn ttilde_data(k_max: u32) -> Result<(Scalar, Vec<Scalar>)> {
    let len = k_max as usize + 1;
    let e0 = e_coefficient(0);
    let e = PowerSeries::new(
        (0..len as u32)
            .map(|n| e_coefficient(n).try_div(&e0))
            .collect::<Result<_>>()?,
    );
    let l = e.log()?;
    let tt = (1..len).map(|k| -&l.coeff(k)).collect();
    Ok((exp_ttilde0(), tt))
}

// ---------------------------------------------------------------- Bergman ladder

/// `B_{2k,2l}`, the Taylor coefficients of `B - dζ dζ'/(ζ - ζ')^2` at the branch point.
pub fn bergman_b(k: u32, l: u32) -> Scalar {
    let c = sign(k + l + 1) * pow2(-(3 * (k + l) as i64 + 3)) / int((k + l + 1) as i64)
        * dfact(2 * k as i64 + 1)
        / fact(k as u64)
        * dfact(2 * l as i64 + 1)
        / fact(l as u64);
    Scalar::t_monomial(c, -((k + l + 1) as i32))
}

/// `B^_{k,l} = (2k-1)!! (2l-1)!! 2^{-k-l-1} B_{2k,2l}`.
pub fn bergman_bhat(k: u32, l: u32) -> Scalar {
    let c = dfact(2 * k as i64 - 1) * dfact(2 * l as i64 - 1) * pow2(-((k + l + 1) as i64));
    &bergman_b(k, l) * &sc(c)
}

/// `B_{2k,2l}` for `k, l <= k_max` from the regularized kernel
///
/// ```text
/// [(X + Y + XY/2t) P(X) P(Y) - (X + Y)] / (X - Y)^2,   P(X) = (1 + X/4t)^{-1/2}
/// ```
///
/// in `X = ζ_1^2`, `Y = ζ_2^2`. Each homogeneous component is divisible by
/// `(X - Y)^2`, so truncating by total degree keeps the division exact.
pub fn bergman_from_kernel(k_max: u32) -> Result<BTreeMap<(u32, u32), Scalar>> {
    let d = 2 * k_max as i32 + 2;
    let p: Vec<Scalar> = (0..=d)
        .map(|n| {
            Scalar::t_monomial(
                binomial_rational(&rat(-1, 2), n as u64) * rat_pow(&rat(1, 4), n as i64),
                -n,
            )
        })
        .collect();
    let mut pp = LaurentMulti::zero(2);
    for i in 0..=d {
        for j in 0..=(d - i) {
            pp = &pp + &LaurentMulti::monomial(vec![i, j], &p[i as usize] * &p[j as usize]);
        }
    }
    let (x, y) = (LaurentMulti::var(2, 0), LaurentMulti::var(2, 1));
    let sum = &x + &y;
    let xy = LaurentMulti::monomial(vec![1, 1], Scalar::t_monomial(rat(1, 2), -1));
    let num = &(&(&sum + &xy) * &pp) - &sum;
    let num = LaurentMulti::from_terms(
        2,
        num.terms()
            .filter(|(e, _)| e[0] + e[1] <= d)
            .map(|(e, c)| (e.clone(), c.clone())),
    );
    let q = num.exact_quotient(&(&x - &y).pow(2))?;
    let mut out = BTreeMap::new();
    for k in 0..=k_max {
        for l in 0..=k_max {
            out.insert((k, l), q.coeff(&[k as i32, l as i32]));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- ladders

/// All ladders up to index `k_max`, each checked against its second derivation.
#[derive(Clone, Debug)]
pub struct AiryData {
    pub k_max: u32,
    /// `ζ^2 = 64 t y^2/(1 - 16 y^2)`.
    pub zeta_sq: ParamRational,
    /// `2n+3 -> t_{2n+3}`.
    pub times: BTreeMap<u32, Scalar>,
    pub exp_ttilde0: Scalar,
    /// `k -> t~_k` for `k >= 1`.
    pub ttilde: BTreeMap<u32, Scalar>,
    /// `(2k, 2l) -> B_{2k,2l}`.
    pub b: BTreeMap<(u32, u32), Scalar>,
    /// `(k, l) -> B^_{k,l}`.
    pub bhat: BTreeMap<(u32, u32), Scalar>,
}

impl AiryData {
    pub fn new(k_max: u32) -> Result<Self> {
        let zeta_sq = ParamRational::new(
            LaurentMulti::monomial(vec![2], Scalar::t_monomial(int(64), 1)),
            one_minus_16y2(1, 0),
        )?;
        let times = airy_times(k_max)?
            .into_iter()
            .enumerate()
            .map(|(n, v)| (2 * n as u32 + 3, v))
            .collect();
        let (exp_ttilde0, tt) = ttilde_data(k_max)?;
        let ttilde = tt
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as u32 + 1, v))
            .collect();
        let oracle = bergman_from_kernel(k_max)?;
        let mut b = BTreeMap::new();
        let mut bhat = BTreeMap::new();
        for ((k, l), v) in oracle {
            let closed = bergman_b(k, l);
            if closed != v {
                return Err(mismatch(format!(
                    "B_{{{},{}}}: {closed} vs {v}",
                    2 * k,
                    2 * l
                )));
            }
            b.insert((2 * k, 2 * l), closed);
            bhat.insert((k, l), bergman_bhat(k, l));
        }
        Ok(AiryData {
            k_max,
            zeta_sq,
            times,
            exp_ttilde0,
            ttilde,
            b,
            bhat,
        })
    }

    /// `{"t": {"3": ..}, "B": {"(0,0)": ..}, "Bhat": {"(0,0)": ..}}` plus
    /// `exp_ttilde0` and `ttilde`, with canonical scalar strings.
    pub fn to_json(&self) -> Value {
        let pairs = |m: &BTreeMap<(u32, u32), Scalar>| {
            Value::Object(
                m.iter()
                    .map(|((a, b), v)| (format!("({a},{b})"), json!(v.to_string())))
                    .collect::<Map<_, _>>(),
            )
        };
        let singles = |m: &BTreeMap<u32, Scalar>| {
            Value::Object(
                m.iter()
                    .map(|(k, v)| (k.to_string(), json!(v.to_string())))
                    .collect::<Map<_, _>>(),
            )
        };
        json!({
            "t": singles(&self.times),
            "exp_ttilde0": self.exp_ttilde0.to_string(),
            "ttilde": singles(&self.ttilde),
            "B": pairs(&self.b),
            "Bhat": pairs(&self.bhat),
        })
    }
}

// ---------------------------------------------------------------- integration lemma

/// Coefficients `r_j` of the antiderivative
///
/// ```text
/// int x^n/sqrt(1 + 4ax) dx = sqrt(1 + 4ax) sum_j r_j a^{j-n-1} x^j
/// r_j = (-1)^{n-j} binom(2j, j)/((n+1) binom(2n+2, n+1))
/// ```
pub fn lemma_coefficients(n: u32) -> Vec<BigRational> {
    let norm = int(n as i64 + 1) * binom(2 * n as u64 + 2, n as u64 + 1);
    (0..=n)
        .map(|j| sign(n - j) * binom(2 * j as u64, j as u64) / &norm)
        .collect()
}

/// `R(x, a)` in variables `(x, a)` with `sqrt(1 + 4ax) R` an antiderivative
/// of `x^n/sqrt(1 + 4ax)`.
pub fn integrate_power_over_sqrt(n: u32) -> LaurentMulti {
    LaurentMulti::from_terms(
        2,
        lemma_coefficients(n)
            .into_iter()
            .enumerate()
            .map(|(j, r)| (vec![j as i32, j as i32 - n as i32 - 1], sc(r))),
    )
}

/// `d/dx [sqrt(1 + 4ax) R] = ((1 + 4ax) R' + 2a R)/sqrt(1 + 4ax)`; check the
/// numerator is `x^n`.
pub fn lemma_holds(n: u32) -> bool {
    let r = integrate_power_over_sqrt(n);
    let ax = LaurentMulti::monomial(vec![1, 1], Scalar::from_int(4));
    let lhs = &(&(&LaurentMulti::one(2) + &ax) * &r.derivative(0))
        + &(&LaurentMulti::var(2, 1).scale_rat(&int(2)) * &r);
    lhs == LaurentMulti::var_pow(2, 0, n as i32)
}

/// `j binom(2j, j)` for `j = 1..=n`: the magnitudes produced by
/// differentiating the lemma's polynomial.
pub fn apery(n: u32) -> Vec<BigInt> {
    (1..=n as u64).map(|j| binomial(2 * j, j) * j).collect()
}

// ---------------------------------------------------------------- ζ_k basis

/// `ζ_k(y) = (2k-1)!!/(2^k t^k) (1/(8sy)) sum_j (-1)^j binom(2j,j)/2^{4j} (1/(64y^2) - 1/4)^{k-j}`.
pub fn zeta(k: u32) -> LaurentMulti {
    let u = &LaurentMulti::monomial(vec![-2], sc(rat(1, 64)))
        - &LaurentMulti::constant(1, sc(rat(1, 4)));
    let mut sum = LaurentMulti::zero(1);
    for j in 0..=k {
        let c = sign(j) * binom(2 * j as u64, j as u64) * pow2(-4 * j as i64);
        sum = &sum + &u.pow(k - j).scale_rat(&c);
    }
    let pre = Scalar::monomial(
        dfact(2 * k as i64 - 1) * pow2(-(k as i64)) * rat(1, 8),
        -(2 * k as i32 + 1),
    );
    (&sum * &LaurentMulti::var_pow(1, 0, -1)).scale(&pre)
}

/// Coefficient of `dy` in `dζ_k`.
pub fn dzeta(k: u32) -> LaurentMulti {
    zeta(k).derivative(0)
}

/// `ζ_k` through the generating function `g_k(w, z)` at `w = 1`:
/// `ζ_k = (2k-1)!!/2^k (ζ^{-2k-1} - g_k(1))` with
/// `g_k(1) = c_k ζ sqrt(1 + 4a) R_k(1, a) + ζ^{-2k-1}`, `a = ζ^2/16t`, where
/// `R_k` is the antiderivative polynomial of the integration lemma.
pub fn zeta_from_generating(k: u32) -> Result<LaurentMulti> {
    let ck = sign(k + 1) * dfact(2 * k as i64 + 1) / fact(k as u64) * pow2(-(3 * k as i64 + 3));
    let ck = Scalar::t_monomial(ck, -(k as i32 + 1));
    // ζ sqrt(1 + 4a) = 8 s y/(1 - 16 y^2), a = 4 y^2/(1 - 16 y^2)
    let zeta_root = ParamRational::new(
        LaurentMulti::monomial(vec![1], Scalar::monomial(int(8), 1)),
        one_minus_16y2(1, 0),
    )?;
    let a = ParamRational::new(
        LaurentMulti::monomial(vec![2], Scalar::from_int(4)),
        one_minus_16y2(1, 0),
    )?;
    let ainv = a.inv()?;
    let mut r = ParamRational::from_laurent(LaurentMulti::zero(1));
    for (j, c) in lemma_coefficients(k).into_iter().enumerate() {
        let p = k as i32 + 1 - j as i32;
        let term = if p >= 0 {
            ainv.pow(p as u32)
        } else {
            a.pow((-p) as u32)
        };
        r = &r + &term.scale(&sc(c));
    }
    let pre = &ck * &sc(-dfact(2 * k as i64 - 1) * pow2(-(k as i64)));
    (&zeta_root * &r).scale(&pre).to_laurent()
}

/// `y^{2k+1} ζ_k` as a series in `Y = y^2` to `len` terms, from the Bergman
/// expansion `ζ_k = (2k-1)!!/2^k (ζ^{-2k-1} - sum_l B_{2k,2l} ζ^{2l+1}/(2l+1))`.
pub fn zeta_from_bergman(k: u32, len: usize) -> Result<PowerSeries> {
    let base = PowerSeries::new(vec![Scalar::one(), Scalar::from_int(-16)]).truncate(len);
    let s8 = Scalar::monomial(int(8), 1);
    let mut acc = base
        .pow_rational(&(int(k as i64) + rat(1, 2)))?
        .scale(&s8.pow(-(2 * k as i32 + 1))?);
    for l in 0.. {
        let shift = (k + l + 1) as usize;
        if shift >= len {
            break;
        }
        let c = &(&bergman_b(k, l) * &s8.pow(2 * l as i32 + 1)?) * &sc(rat(1, 2 * l as i64 + 1));
        let f = base.pow_rational(&(-int(l as i64) - rat(1, 2)))?.scale(&c);
        let mut shifted = vec![Scalar::zero(); shift];
        shifted.extend(f.coeffs);
        acc = acc.sub(&PowerSeries::new(shifted).truncate(len));
    }
    Ok(acc.scale(&sc(dfact(2 * k as i64 - 1) * pow2(-(k as i64)))))
}

/// `y^{2k+2} dζ_k/dy` as a series in `Y = y^2`, from
/// `dζ_k = -(2k+1)!!/2^k ζ^{-2k-2} dζ - (2k-1)!!/2^k sum_l B_{2k,2l} ζ^{2l} dζ`
/// with `dζ/dy = 8s (1 - 16y^2)^{-3/2}`.
pub fn dzeta_from_bergman(k: u32, len: usize) -> Result<PowerSeries> {
    let base = PowerSeries::new(vec![Scalar::one(), Scalar::from_int(-16)]).truncate(len);
    let s8 = Scalar::monomial(int(8), 1);
    // ζ^{-2k-2} y^{2k+2} dζ/dy = (8s)^{-2k-1} (1 - 16Y)^{k-1/2}
    let mut acc = base.pow_rational(&(int(k as i64) - rat(1, 2)))?.scale(
        &(&s8.pow(-(2 * k as i32 + 1))? * &sc(-dfact(2 * k as i64 + 1) * pow2(-(k as i64)))),
    );
    for l in 0.. {
        let shift = (k + l + 1) as usize;
        if shift >= len {
            break;
        }
        // ζ^{2l} y^{2k+2} dζ/dy = (8s)^{2l+1} Y^{k+l+1} (1 - 16Y)^{-l-3/2}
        let c = &(&bergman_b(k, l) * &s8.pow(2 * l as i32 + 1)?)
            * &sc(-dfact(2 * k as i64 - 1) * pow2(-(k as i64)));
        let f = base.pow_rational(&(-int(l as i64) - rat(3, 2)))?.scale(&c);
        let mut shifted = vec![Scalar::zero(); shift];
        shifted.extend(f.coeffs);
        acc = acc.add(&PowerSeries::new(shifted).truncate(len));
    }
    Ok(acc)
}

/// `y^shift f` as a series in `Y = y^2`, for `f` odd/even Laurent in `y` with
/// `y^shift f` a polynomial.
fn as_y2_series(f: &LaurentMulti, shift: i32, len: usize) -> Result<PowerSeries> {
    let mut cs = vec![Scalar::zero(); len];
    for (e, c) in f.terms() {
        let p = e[0] + shift;
        if p < 0 || p % 2 != 0 {
            return Err(mismatch(format!("unexpected exponent {} in {f}", e[0])));
        }
        if (p / 2) as usize >= len {
            return Err(mismatch(format!("exponent {} beyond series length", e[0])));
        }
        cs[(p / 2) as usize] = c.clone();
    }
    Ok(PowerSeries::new(cs))
}

/// `ζ_k` and `dζ_k` for `k <= k_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaBasis {
    pub zeta: Vec<LaurentMulti>,
    /// Coefficients of `dy`.
    pub dzeta: Vec<LaurentMulti>,
}

impl ZetaBasis {
    pub fn get(&self, k: usize) -> Option<&LaurentMulti> {
        self.dzeta.get(k)
    }
}

/// The basis, with each `ζ_k` checked against the Bergman expansion and the
/// generating function, and each `dζ_k` against its Bergman expansion.
pub fn zeta_basis(k_max: u32) -> Result<ZetaBasis> {
    let mut basis = ZetaBasis {
        zeta: Vec::new(),
        dzeta: Vec::new(),
    };
    for k in 0..=k_max {
        let z = zeta(k);
        let len = k as usize + 8;
        if as_y2_series(&z, 2 * k as i32 + 1, len)? != zeta_from_bergman(k, len)? {
            return Err(mismatch(format!("zeta_{k} against the Bergman expansion")));
        }
        if zeta_from_generating(k)? != z {
            return Err(mismatch(format!("zeta_{k} against g_{k}(1, z)")));
        }
        let dz = z.derivative(0);
        if as_y2_series(&dz, 2 * k as i32 + 2, len)? != dzeta_from_bergman(k, len)? {
            return Err(mismatch(format!(
                "d zeta_{k} against the Bergman expansion"
            )));
        }
        if dz.min_exponent(0) != Some(-(2 * k as i32) - 2) {
            return Err(mismatch(format!("d zeta_{k} pole order")));
        }
        basis.zeta.push(z);
        basis.dzeta.push(dz);
    }
    Ok(basis)
}

// ---------------------------------------------------------------- x-forms

/// `P(x) prod_j x_j^{xp_j} (1 - 4t/x_j)^{rp_j/2} dx_1 .. dx_n` as a coefficient
/// of `dy_1 .. dy_n`; see [`from_x_form`].
pub fn x_form_to_dy(poly: &LaurentMulti, xp: &[i32], rp: &[i32]) -> Result<ParamRational> {
    from_x_form(poly, xp, rp, true)
}

/// A one-variable `x`-form `c x^{xp} (1 - 4t/x)^{rp/2} dx` in the `dy` basis.
pub fn x_term(c: Scalar, xp: i32, rp: i32) -> Result<ParamRational> {
    x_form_to_dy(&LaurentMulti::constant(1, c), &[xp], &[rp])
}

// ---------------------------------------------------------------- templates

/// `sum_d c_d prod_i dζ_{d_i}(y_i)` for coefficients keyed by `(d_1, .., d_n)`.
pub fn assemble(n: usize, coeffs: &BTreeMap<Vec<usize>, Scalar>) -> LaurentMulti {
    assemble_with(n, coeffs, |k| dzeta(k as u32))
}

fn assemble_with<F: Fn(usize) -> LaurentMulti>(
    n: usize,
    coeffs: &BTreeMap<Vec<usize>, Scalar>,
    basis: F,
) -> LaurentMulti {
    let mut acc = LaurentMulti::zero(n);
    for (d, c) in coeffs {
        let mut p = LaurentMulti::constant(n, c.clone());
        for (i, &k) in d.iter().enumerate() {
            p = &p * &basis(k).map_vars(n, &[i]);
        }
        acc = &acc + &p;
    }
    acc
}

/// Inverse of [`assemble`]: coordinates of `w` over the products
/// `prod_i dζ_{d_i}(y_i)`. The lex-smallest exponent of the remainder is
/// always the leading pole of one basis product, so peeling it off is a
/// triangular solve.
pub fn decompose(w: &LaurentMulti) -> Result<BTreeMap<Vec<usize>, Scalar>> {
    decompose_with(w, |k| dzeta(k as u32))
}

fn decompose_with<F: Fn(usize) -> LaurentMulti>(
    w: &LaurentMulti,
    basis: F,
) -> Result<BTreeMap<Vec<usize>, Scalar>> {
    let n = w.nvars();
    let mut rest = w.clone();
    let mut out = BTreeMap::new();
    loop {
        let Some((e, c)) = rest.terms().next().map(|(e, c)| (e.clone(), c.clone())) else {
            break;
        };
        if e.iter().any(|&x| x > -2 || x % 2 != 0) {
            return Err(Error::OutsideBasis(rest.render()));
        }
        let d: Vec<usize> = e.iter().map(|&x| ((-x - 2) / 2) as usize).collect();
        let mut one = BTreeMap::new();
        one.insert(d.clone(), Scalar::one());
        let prod = assemble_with(n, &one, &basis);
        let lead = prod.coeff(&e);
        let k = c.try_div(&lead)?;
        rest = &rest - &prod.scale(&k);
        out.insert(d, k);
    }
    Ok(out)
}

/// Template coefficients over the `dζ` products for `(0,3)`, `(1,1)`, `(0,4)`,
/// with `B_{0,0}` replaceable for sensitivity checks.
pub fn template_coefficients(
    g: usize,
    n: usize,
    b00: &Scalar,
) -> Result<BTreeMap<Vec<usize>, Scalar>> {
    let t3 = time(0);
    let t5 = time(1);
    let t3sq = &t3 * &t3;
    let mut out = BTreeMap::new();
    match (g, n) {
        (0, 3) => {
            out.insert(vec![0, 0, 0], t3.scale(&int(2)).inv()?);
        }
        (1, 1) => {
            out.insert(vec![1], t3.scale(&int(24)).inv()?);
            let c = &b00.try_div(&t3.scale(&int(4)))? - &t5.try_div(&t3sq.scale(&int(16)))?;
            out.insert(vec![0], c);
        }
        (0, 4) => {
            let c1 = t3sq.scale(&int(2)).inv()?;
            for i in 0..4 {
                out.insert(unit_usize(4, i), c1.clone());
            }
            let c0 = (b00 - &t5.try_div(&t3)?).try_div(&t3sq)?.scale(&rat(3, 4));
            out.insert(vec![0; 4], c0);
        }
        _ => return Err(Error::Unstable { g, n }),
    }
    Ok(out)
}

fn unit_usize(n: usize, i: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// The intersection-number template for `(0,3)`, `(1,1)` or `(0,4)`, in the `dy` basis.
pub fn template_omega(g: usize, n: usize) -> Result<MultiDifferential> {
    let c = template_coefficients(g, n, &bergman_b(0, 0))?;
    Ok(MultiDifferential {
        g,
        n,
        coord: "y",
        form: Form::Laurent(assemble(n, &c)),
    })
}

// ---------------------------------------------------------------- ψ-class read-off

#[derive(Clone, Debug, PartialEq)]
pub struct PsiReport {
    /// Coordinates of `w_{1,1}` over `{dζ_1, dζ_0}`.
    pub omega11: BTreeMap<Vec<usize>, Scalar>,
    /// Coordinates of `w_{0,3}` over `prod dζ_0`.
    pub omega03: BTreeMap<Vec<usize>, Scalar>,
    /// `dζ_1` coefficient equals `1/(24 t_3)`.
    pub tau1_ok: bool,
    /// `dζ_0` coefficient equals `B_{0,0}/(4t_3) - t_5/(16 t_3^2)`.
    pub dzeta0_ok: bool,
    /// `prod dζ_0` coefficient equals `1/(2 t_3)`.
    pub tau0_cubed_ok: bool,
    /// Shifting `B_{0,0}` by one breaks the `dζ_0` match.
    pub control_detects: bool,
}

impl PsiReport {
    pub fn pass(&self) -> bool {
        self.tau1_ok && self.dzeta0_ok && self.tau0_cubed_ok && self.control_detects
    }
}

/// Decompose the recursion output `w_{1,1}`, `w_{0,3}` over the `dζ` basis.
pub fn psi_consistency(w11: &LaurentMulti, w03: &LaurentMulti) -> Result<PsiReport> {
    let omega11 = decompose(w11)?;
    let omega03 = decompose(w03)?;
    let get = |m: &BTreeMap<Vec<usize>, Scalar>, k: &[usize]| {
        m.get(k).cloned().unwrap_or_else(Scalar::zero)
    };
    let b00 = bergman_b(0, 0);
    let want = template_coefficients(1, 1, &b00)?;
    let bent = template_coefficients(1, 1, &(&b00 + &Scalar::one()))?;
    let t3 = time(0);
    Ok(PsiReport {
        tau1_ok: get(&omega11, &[1]) == t3.scale(&int(24)).inv()? && omega11.len() <= 2,
        dzeta0_ok: get(&omega11, &[0]) == want[&vec![0]],
        tau0_cubed_ok: get(&omega03, &[0, 0, 0]) == t3.scale(&int(2)).inv()? && omega03.len() == 1,
        control_detects: get(&omega11, &[0]) != bent[&vec![0]],
        omega11,
        omega03,
    })
}

// ---------------------------------------------------------------- Airy curve

/// `e_d(z) = (2d+1)!!/z^{2d+2}`, the Airy-curve basis.
fn airy_basis(d: usize) -> LaurentMulti {
    LaurentMulti::monomial(vec![-(2 * d as i32) - 2], sc(dfact(2 * d as i64 + 1)))
}

/// `(-1)^n sum_d prod_i (2d_i+1)!!/z_i^{2d_i+2} <tau_{d_1} .. tau_{d_n}>`
/// on the curve `x = z^2/2`, `y = z`.
pub fn airy_intersection_form(
    n: usize,
    values: &BTreeMap<Vec<usize>, BigRational>,
) -> LaurentMulti {
    let sgn = if n.is_multiple_of(2) { int(1) } else { int(-1) };
    let c = values
        .iter()
        .map(|(d, v)| (d.clone(), sc(v * &sgn)))
        .collect();
    assemble_with(n, &c, airy_basis)
}

/// Read intersection numbers off an Airy-curve differential.
pub fn airy_intersections(w: &LaurentMulti) -> Result<BTreeMap<Vec<usize>, BigRational>> {
    let sgn = if w.nvars().is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    };
    decompose_with(w, airy_basis)?
        .into_iter()
        .map(|(d, c)| {
            c.as_rational()
                .map(|q| (d, q * &sgn))
                .ok_or_else(|| Error::OutsideBasis(c.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eo::{EoEngine, SpectralCurve};

    fn s_mono(n: i64, d: i64, e: i32) -> Scalar {
        Scalar::monomial(rat(n, d), e)
    }

    fn t_mono(n: i64, d: i64, e: i32) -> Scalar {
        Scalar::t_monomial(rat(n, d), e)
    }

    #[test]
    fn times() {
        let ts = airy_times(4).unwrap();
        assert_eq!(ts[0], s_mono(1, 8, -1));
        assert_eq!(ts[1], s_mono(-1, 64, -3));
        assert_eq!(ts[2], s_mono(3, 1024, -5));
    }

    #[test]
    fn conjugate_times() {
        assert_eq!(e_coefficient(0), s_mono(1, 8, -1));
        let (e0, tt) = ttilde_data(5).unwrap();
        assert_eq!(e0, s_mono(4, 1, 1));
        assert_eq!(tt[0], t_mono(3, 8, -1));
        // exp(-sum t~_k v^k) E_0 reproduces E
        let mut f = vec![Scalar::zero()];
        f.extend(tt.iter().map(|c| -c));
        let e = PowerSeries::new(f).exp().unwrap().scale(&e_coefficient(0));
        for n in 0..6 {
            assert_eq!(e.coeff(n), e_coefficient(n as u32));
        }
    }

    #[test]
    fn bergman_ladder() {
        assert_eq!(bergman_b(0, 0), t_mono(-1, 8, -1));
        assert_eq!(bergman_bhat(0, 0), t_mono(-1, 16, -1));
        assert_eq!(bergman_b(1, 0), t_mono(3, 128, -2));
        let data = AiryData::new(4).unwrap();
        assert_eq!(data.b[&(2, 6)], data.b[&(6, 2)]);
        let js = data.to_json();
        assert_eq!(js["t"]["3"], "1/8*s^-1");
        assert_eq!(js["B"]["(0,0)"], "-1/8*t^-1");
        assert_eq!(js["Bhat"]["(0,0)"], "-1/16*t^-1");
    }

    #[test]
    fn integration_lemma() {
        let r0 = integrate_power_over_sqrt(0);
        assert_eq!(r0, LaurentMulti::monomial(vec![0, -1], sc(rat(1, 2))));
        for n in 0..=10 {
            assert!(lemma_holds(n), "n = {n}");
        }
        let want: Vec<BigInt> = [2, 12, 60, 280].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(apery(4), want);
    }

    #[test]
    fn zeta_ladder() {
        assert_eq!(zeta(0), LaurentMulti::monomial(vec![-1], s_mono(1, 8, -1)));
        let basis = zeta_basis(4).unwrap();
        assert_eq!(basis.dzeta.len(), 5);
        // dζ_0 = s/(x^2 (1-4t/x)^{3/2}) dx
        let d0 = x_term(Scalar::s(), -2, -3).unwrap();
        assert!(d0.equals(&ParamRational::from_laurent(dzeta(0))));
        // dζ_1 = [3/(16 s x^2 (1-4t/x)^{3/2}) + 3s/(2 x^3 (1-4t/x)^{5/2})] dx
        let d1 =
            &x_term(s_mono(3, 16, -1), -2, -3).unwrap() + &x_term(s_mono(3, 2, 1), -3, -5).unwrap();
        assert!(d1.equals(&ParamRational::from_laurent(dzeta(1))));
    }

    #[test]
    fn templates_match_recursion() {
        let e = EoEngine::new(SpectralCurve::even_coupling()).unwrap();
        for (g, n) in [(0, 3), (1, 1), (0, 4)] {
            assert_eq!(
                template_omega(g, n).unwrap(),
                e.eo_omega(g, n).unwrap(),
                "({g},{n})"
            );
        }
    }

    #[test]
    fn templates_match_x_forms() {
        let unit = |n: usize, i: usize, e: i32| {
            let mut v = vec![0; n];
            v[i] = e;
            v
        };
        let g11 =
            &x_term(t_mono(-1, 8, 0), -2, -3).unwrap() + &x_term(t_mono(1, 2, 1), -3, -5).unwrap();
        let w11 = template_omega(1, 1).unwrap();
        assert!(g11.equals(&ParamRational::from_laurent(w11.laurent().unwrap().clone())));

        let p = LaurentMulti::constant(3, t_mono(4, 1, 2));
        let g03 = x_form_to_dy(&p, &[-2; 3], &[-3; 3]).unwrap();
        let w03 = template_omega(0, 3).unwrap();
        assert!(g03.equals(&ParamRational::from_laurent(w03.laurent().unwrap().clone())));

        // 24 t^2 (e4 - 2 e3 t + 32 e1 t^3 - 256 t^4) / prod x^3 (1-4t/x)^{5/2}
        let n = 4;
        let mut poly = LaurentMulti::monomial(vec![1; 4], Scalar::one());
        for i in 0..n {
            let mut e3 = vec![1; 4];
            e3[i] = 0;
            poly = &poly + &LaurentMulti::monomial(e3, t_mono(-2, 1, 1));
            poly = &poly + &LaurentMulti::monomial(unit(n, i, 1), t_mono(32, 1, 3));
        }
        poly = &poly + &LaurentMulti::constant(n, t_mono(-256, 1, 4));
        let g04 = x_form_to_dy(&poly.scale(&t_mono(24, 1, 2)), &[-3; 4], &[-5; 4]).unwrap();
        let w04 = template_omega(0, 4).unwrap();
        assert!(g04.equals(&ParamRational::from_laurent(w04.laurent().unwrap().clone())));
    }

    #[test]
    fn psi_read_off() {
        let e = EoEngine::new(SpectralCurve::even_coupling()).unwrap();
        let r = psi_consistency(&e.value(1, 1).unwrap(), &e.value(0, 3).unwrap()).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.omega11[&vec![1]], s_mono(1, 3, 1));
        assert_eq!(r.omega03[&vec![0, 0, 0]], s_mono(4, 1, 1));
    }

    #[test]
    fn decompose_rejects_outside_span() {
        let w = LaurentMulti::monomial(vec![-3], Scalar::one());
        assert!(matches!(decompose(&w), Err(Error::OutsideBasis(_))));
    }

    #[test]
    fn airy_curve_intersections() {
        let e = EoEngine::new(SpectralCurve::airy()).unwrap();
        let w03 = e.value(0, 3).unwrap();
        let w11 = e.value(1, 1).unwrap();
        let i03 = airy_intersections(&w03).unwrap();
        let i11 = airy_intersections(&w11).unwrap();
        assert_eq!(
            i03.into_iter().collect::<Vec<_>>(),
            vec![(vec![0, 0, 0], int(1))]
        );
        assert_eq!(
            i11.into_iter().collect::<Vec<_>>(),
            vec![(vec![1], rat(1, 24))]
        );
        let mut v = BTreeMap::new();
        v.insert(vec![1], rat(1, 24));
        assert_eq!(airy_intersection_form(1, &v), w11);
        let i04 = airy_intersections(&e.value(0, 4).unwrap()).unwrap();
        assert!(i04
            .iter()
            .all(|(d, q)| d.iter().sum::<usize>() == 1 && *q == int(1)));
        assert_eq!(i04.len(), 4);
        let i12 = airy_intersections(&e.value(1, 2).unwrap()).unwrap();
        assert_eq!(i12[&vec![1, 1]], rat(1, 24));
        assert_eq!(i12[&vec![0, 2]], rat(1, 24));
        let i21 = airy_intersections(&e.value(2, 1).unwrap()).unwrap();
        assert_eq!(i21[&vec![4]], rat(1, 1152));
    }
}
