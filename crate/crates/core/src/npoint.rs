//! Stable n-point functions `G_{g,n}(y_1, ..., y_n)` on the spectral curve
//! `x = 4t/(1 - 16y^2)`, built by the cut-and-join operator recursion.
//!
//! Every stable `G_{g,n}` is a Laurent polynomial in the `y_j` whose
//! coefficients are rational multiples of `t^(2 - 2g - 2n)`. The `D` terms
//! and the two cross terms containing `G_{0,2}` have double poles at
//! `y_0 = +-y_j` separately; they are summed per monomial of `y_j` into
//! the kernels `L_k(y_0, y_j)`, which are Laurent polynomials.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::laurent::one_minus_16y2;
use crate::exact::rational::{binomial_rational, int, pow2, rat, rat_pow, BigRational};
use crate::exact::{LaurentMulti, ParamRational, Scalar, TPolynomial};
use crate::memo::Memo;

/// `2g - 2 + n > 0` with at least one point.
pub fn is_stable(g: usize, n: usize) -> bool {
    n >= 1 && 2 * g + n > 2
}

/// A stable n-point function together with its indices.
#[derive(Clone, Debug, PartialEq)]
pub struct NPointFunction {
    pub g: usize,
    pub n: usize,
    pub value: LaurentMulti,
}

impl NPointFunction {
    /// Canonical rendering in `y1, ..., yn`.
    pub fn render(&self) -> String {
        let names: Vec<String> = (1..=self.n).map(|i| format!("y{i}")).collect();
        self.value.render_with(&names)
    }
}

impl fmt::Display for NPointFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `c * t^e` as a scalar.
fn tc(c: BigRational, e: i32) -> Scalar {
    Scalar::t_monomial(c, e)
}

fn a2(n: usize, i: usize) -> LaurentMulti {
    one_minus_16y2(n, i).pow(2)
}

/// Multiply by `-1/(2 y_i)`.
fn times_e_factor(f: &LaurentMulti, i: usize) -> LaurentMulti {
    let mut sh = vec![0; f.nvars()];
    sh[i] = -1;
    f.shift(&sh).scale_rat(&rat(-1, 2))
}

/// `G_{0,1}(y) = 1/8 + y + 2y^2`.
pub fn g01() -> LaurentMulti {
    LaurentMulti::univariate(1, 0, &[rat(1, 8), int(1), int(2)])
}

/// `G_{0,2}(y_a, y_b)` in a ring of `nvars` variables.
pub fn g02(nvars: usize, a: usize, b: usize) -> ParamRational {
    let num = (&a2(nvars, a) * &a2(nvars, b)).scale(&tc(pow2(-14), -2));
    let sum = &LaurentMulti::var(nvars, a) + &LaurentMulti::var(nvars, b);
    let den = &(&LaurentMulti::var(nvars, a) * &LaurentMulti::var(nvars, b)) * &sum.pow(2);
    ParamRational::new(num, den).expect("nonzero denominator")
}

/// `-(1-16y_0^2)^2 (1-16y_j^2)^2 / (2^14 t^2 y_0 y_j)`.
fn d_prefactor(nvars: usize, y0: usize, yj: usize) -> LaurentMulti {
    let mut sh = vec![0; nvars];
    sh[y0] -= 1;
    sh[yj] -= 1;
    (&a2(nvars, y0) * &a2(nvars, yj))
        .shift(&sh)
        .scale(&tc(-pow2(-14), -2))
}

/// The operator `D_{y0,yj}` applied to `g`, a function of `y_j` (and of
/// spectator variables) that does not involve `y_0`:
/// `prefactor * [2 y_j (g(y_0) - g(y_j)) - (y_0^2 - y_j^2) g'(y_j)] / (y_0^2 - y_j^2)^2`.
pub fn op_d(g: &ParamRational, y0: usize, yj: usize) -> Result<ParamRational> {
    let n = g.nvars();
    let map: Vec<usize> = (0..n).map(|k| if k == yj { y0 } else { k }).collect();
    let g0 = g.map_vars(n, &map)?;
    let gp = g.derivative(yj);
    let v0 = LaurentMulti::var(n, y0);
    let vj = LaurentMulti::var(n, yj);
    let diff2 = &v0.pow(2) - &vj.pow(2);
    let two_yj = ParamRational::from_laurent(vj.scale_rat(&int(2)));
    let bracket = &(&two_yj * &(&g0 - g)) - &(&ParamRational::from_laurent(diff2.clone()) * &gp);
    let quot = bracket.try_div(&ParamRational::from_laurent(diff2.pow(2)))?;
    Ok(&quot * &ParamRational::from_laurent(d_prefactor(n, y0, yj)))
}

/// The operator `E`: restrict the first two slots to the diagonal and
/// multiply by `-1/(2 y_0)`. The result lives in one variable fewer, with
/// the diagonal in slot 0.
pub fn op_e(f: &ParamRational) -> Result<ParamRational> {
    let n = f.nvars();
    if n < 2 {
        return Err(Error::VariableCountMismatch { left: n, right: 2 });
    }
    let diag = f.eval_at_var(1, 0)?;
    let map: Vec<usize> = (0..n).map(|k| k.saturating_sub(1)).collect();
    let diag = diag.map_vars(n - 1, &map)?;
    let mut e = vec![0; n - 1];
    e[0] = -1;
    Ok(&diag
        * &ParamRational::from_laurent(LaurentMulti::monomial(
            e,
            Scalar::from_rational(rat(-1, 2)),
        )))
}

/// Memoized builder for the stable `G_{g,n}`.
#[derive(Default)]
pub struct NPointBuilder {
    memo: Memo<(usize, usize), LaurentMulti>,
    kernels: Mutex<HashMap<i32, LaurentMulti>>,
}

impl NPointBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build_g(&self, g: usize, n: usize) -> Result<NPointFunction> {
        Ok(NPointFunction {
            g,
            n,
            value: self.value(g, n)?,
        })
    }

    /// `G_{g,n}` as a Laurent polynomial in `y_1..y_n` (slots `0..n`).
    pub fn value(&self, g: usize, n: usize) -> Result<LaurentMulti> {
        if !is_stable(g, n) {
            return Err(Error::Unstable { g, n });
        }
        self.memo.get_or_compute(&(g, n), || self.compute(g, n))
    }

    /// `L_k(y_0, y)`: the `D` term on `y^k` plus both cross terms with `G_{0,2}`.
    fn kernel(&self, k: i32) -> Result<LaurentMulti> {
        if let Some(v) = self.kernels.lock().unwrap().get(&k) {
            return Ok(v.clone());
        }
        let y0 = LaurentMulti::var(2, 0);
        let y = LaurentMulti::var(2, 1);
        let p0 = LaurentMulti::var_pow(2, 0, k);
        let p = LaurentMulti::var_pow(2, 1, k);
        let diff2 = &y0.pow(2) - &y.pow(2);
        let dnum = &(&y.scale_rat(&int(2)) * &(&p0 - &p))
            - &(&diff2 * &LaurentMulti::var_pow(2, 1, k - 1)).scale_rat(&int(k as i64));
        let cross = &LaurentMulti::var_pow(2, 0, k - 1) * &(&y0 - &y).pow(2);
        let q = (&dnum + &cross).exact_quotient(&diff2.pow(2))?;
        let v = &q * &d_prefactor(2, 0, 1);
        self.kernels.lock().unwrap().insert(k, v.clone());
        Ok(v)
    }

    fn compute(&self, g: usize, n: usize) -> Result<LaurentMulti> {
        if (g, n) == (0, 3) {
            return self.g03();
        }
        let m = n - 1;
        let mut acc = LaurentMulti::zero(n);
        if is_stable(g, m) {
            let base = self.value(g, m)?.insert_var(0);
            for j in 1..=m {
                for (k, r) in base.collect_var(j) {
                    let l = self.kernel(k)?.map_vars(n, &[0, j]);
                    acc = &acc + &(&r * &l);
                }
            }
        }
        if g >= 1 {
            if (g - 1, m + 2) == (0, 2) {
                // G_{0,2}(y, y) = (1 - 16y^2)^4 / (2^16 t^2 y^4)
                let diag = one_minus_16y2(n, 0)
                    .pow(4)
                    .shift(&[-4])
                    .scale(&tc(pow2(-16), -2));
                acc = &acc + &times_e_factor(&diag, 0);
            } else {
                let h = self.value(g - 1, m + 2)?;
                let map: Vec<usize> = std::iter::once(0).chain(0..=m).collect();
                acc = &acc + &times_e_factor(&h.map_vars(n, &map), 0);
            }
        }
        for h in 0..=g {
            for mask in 0u32..(1 << m) {
                let i1: Vec<usize> = (1..=m).filter(|j| mask & (1 << (j - 1)) != 0).collect();
                let i2: Vec<usize> = (1..=m).filter(|j| mask & (1 << (j - 1)) == 0).collect();
                if !is_stable(h, i1.len() + 1) || !is_stable(g - h, i2.len() + 1) {
                    continue;
                }
                let m1: Vec<usize> = std::iter::once(0).chain(i1.iter().copied()).collect();
                let m2: Vec<usize> = std::iter::once(0).chain(i2.iter().copied()).collect();
                let f1 = self.value(h, i1.len() + 1)?.map_vars(n, &m1);
                let f2 = self.value(g - h, i2.len() + 1)?.map_vars(n, &m2);
                acc = &acc + &times_e_factor(&(&f1 * &f2), 0);
            }
        }
        if (g, m) == (1, 0) {
            // +1/(32 y_0 x_0^2)
            let corr = one_minus_16y2(1, 0)
                .pow(2)
                .shift(&[-1])
                .scale(&tc(pow2(-9), -2));
            acc = &acc + &corr;
        }
        Ok(acc)
    }

    /// `G_{0,3}` from `G_{0,2}`, in full rational arithmetic.
    fn g03(&self) -> Result<LaurentMulti> {
        let base = g02(3, 1, 2);
        let d1 = op_d(&base, 0, 1)?;
        let d2 = op_d(&base, 0, 2)?;
        let cross = &g02(3, 0, 1) * &g02(3, 0, 2);
        let cross = &cross
            * &ParamRational::from_laurent(LaurentMulti::monomial(
                vec![-1, 0, 0],
                Scalar::from_int(-1),
            ));
        (&(&d1 + &d2) + &cross).to_laurent()
    }
}

/// Coefficients of `u^m`, `m = 0..=max`, of `y^e` under `y = -1/4 (1 - 4 t u)^(1/2)`;
/// entry `m` carries an implicit `t^m`.
fn y_power_series(e: i32, max: usize) -> Vec<BigRational> {
    let pre = rat_pow(&rat(-1, 4), e as i64);
    let half = rat(e as i64, 2);
    (0..=max)
        .map(|m| &pre * binomial_rational(&half, m as u64) * rat_pow(&int(-4), m as i64))
        .collect()
}

/// Ordered index vectors with entries `>= 1` and sum at most `bound`.
pub fn compositions_up_to(n: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let slots = (n - cur.len()) as u32;
        for v in 1..=left {
            if v + (slots - 1) > left {
                break;
            }
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if bound as usize >= n {
        rec(n, bound, &mut Vec::new(), &mut out);
    }
    out
}

/// Re-expand `G_{g,n}` in `1/x_j` and return the coefficient of
/// `prod x_j^(-a_j - 1)` for every `a` with `a_j >= 1`, `sum a_j <= bound`.
pub fn to_x_series(gf: &NPointFunction, bound: u32) -> Result<Vec<(Vec<u32>, TPolynomial)>> {
    let n = gf.n;
    let keys = compositions_up_to(n, bound);
    let max = bound as usize + 1;
    let mut cache: HashMap<i32, Vec<BigRational>> = HashMap::new();
    let mut out: BTreeMap<Vec<u32>, TPolynomial> = keys
        .iter()
        .map(|k| (k.clone(), TPolynomial::zero()))
        .collect();
    for (e, c) in gf.value.terms() {
        let c = TPolynomial::from_scalar(c)?;
        for &x in e {
            cache.entry(x).or_insert_with(|| y_power_series(x, max));
        }
        for a in &keys {
            let mut coeff = BigRational::one();
            for (j, &aj) in a.iter().enumerate() {
                coeff *= &cache[&e[j]][aj as usize + 1];
                if coeff.is_zero() {
                    break;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let shift: i32 = a.iter().map(|&x| x as i32 + 1).sum();
            let add = c.scale(&coeff).shift(shift);
            let slot = out.get_mut(a).unwrap();
            *slot = &*slot + &add;
        }
    }
    Ok(out.into_iter().collect())
}

/// Outcome of [`structure_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub pass: bool,
    pub odd: bool,
    pub symmetric: bool,
    pub basis_ok: bool,
    /// Distinct `(a, b)` pairs of `x^-a y^(-2b-1)` used, per variable.
    pub basis: BTreeSet<(u32, u32)>,
    pub offending: Vec<String>,
}

/// Check odd exponents, symmetry and the `x^-a y^(-2b-1)` form with
/// `a >= 2`, `b >= a - 1`, where `x = 4t/(1 - 16y^2)`.
///
/// Per variable the function is divided by `(1 - 16y^2)^2`, which must be
/// exact and leave only exponents `<= -3`; further factors `1 - 16y^2` are
/// then peeled off greedily while the bound `-2a + 1` still holds.
pub fn structure_check(gf: &NPointFunction) -> StructureReport {
    let n = gf.n;
    let v = &gf.value;
    let mut offending = Vec::new();
    let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let mono =
        |e: &[i32], c: &Scalar| LaurentMulti::monomial(e.to_vec(), c.clone()).render_with(&names);
    let mut odd = true;
    for (e, c) in v.terms() {
        if e.iter().any(|x| x % 2 == 0) {
            odd = false;
            offending.push(mono(e, c));
        }
    }
    let mut symmetric = true;
    for j in 1..n {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, j);
        if &v.permute(&perm) != v {
            symmetric = false;
            offending.push(format!("not symmetric under y1 <-> y{}", j + 1));
        }
    }
    let mut basis = BTreeSet::new();
    let mut basis_ok = odd;
    if odd {
        let mut q = v.clone();
        let mut a = vec![2u32; n];
        for j in 0..n {
            match q.exact_quotient(&a2(n, j)) {
                Ok(r) => q = r,
                Err(err) => {
                    basis_ok = false;
                    offending.push(format!("not divisible by (1-16*y{}^2)^2: {err}", j + 1));
                }
            }
        }
        if basis_ok {
            for j in 0..n {
                for (e, c) in q.terms() {
                    if e[j] > -3 {
                        basis_ok = false;
                        offending.push(mono(e, c));
                    }
                }
            }
        }
        if basis_ok {
            for (j, aj) in a.iter_mut().enumerate() {
                let a1 = one_minus_16y2(n, j);
                loop {
                    let bound = -2 * (*aj as i32 + 1) + 1;
                    match q.exact_quotient(&a1) {
                        Ok(r) if r.max_exponent(j).is_some_and(|m| m <= bound) => {
                            q = r;
                            *aj += 1;
                        }
                        _ => break,
                    }
                }
            }
            for e in q.terms().map(|(e, _)| e) {
                for j in 0..n {
                    basis.insert((a[j], ((-e[j] - 1) / 2) as u32));
                }
            }
        }
    }
    StructureReport {
        pass: odd && symmetric && basis_ok,
        odd,
        symmetric,
        basis_ok,
        basis,
        offending,
    }
}

/// `P(x) prod_j x_j^{xp_j} (1 - 4t/x_j)^{rp_j/2}` in the coordinates `y_j`,
/// using `x = 4t/(1 - 16y^2)` and `(1 - 4t/x)^{1/2} = -4y`. With `with_dx`
/// each variable also picks up `dx/dy = 128 t y/(1 - 16y^2)^2`.
pub fn from_x_form(
    poly: &LaurentMulti,
    xp: &[i32],
    rp: &[i32],
    with_dx: bool,
) -> Result<ParamRational> {
    let n = poly.nvars();
    if xp.len() != n || rp.len() != n {
        return Err(Error::VariableCountMismatch {
            left: n,
            right: xp.len().min(rp.len()),
        });
    }
    let (dx_c, dx_y, dx_a) = if with_dx {
        (tc(int(128), 1), 1, 2)
    } else {
        (Scalar::one(), 0, 0)
    };
    // power of (1 - 16y_j^2) in the denominator of a term
    let total = |e: &[i32], j: usize| e[j] + xp[j] + dx_a;
    let mut m = vec![i32::MIN; n];
    for (e, _) in poly.terms() {
        for (j, mj) in m.iter_mut().enumerate() {
            *mj = (*mj).max(total(e, j));
        }
    }
    let mut num = LaurentMulti::zero(n);
    for (e, c) in poly.terms() {
        let mut term = LaurentMulti::constant(n, c.clone());
        for j in 0..n {
            let big_e = e[j] + xp[j];
            let coeff = &(&tc(rat_pow(&int(4), big_e as i64), big_e)
                * &Scalar::from_rational(rat_pow(&int(-4), rp[j] as i64)))
                * &dx_c;
            let mut exps = vec![0; n];
            exps[j] = rp[j] + dx_y;
            let f = &LaurentMulti::monomial(exps, coeff)
                * &one_minus_16y2(n, j).pow((m[j] - total(e, j)) as u32);
            term = &term * &f;
        }
        num = &num + &term;
    }
    let mut den = LaurentMulti::one(n);
    for (j, &mj) in m.iter().enumerate() {
        if mj >= 0 {
            den = &den * &one_minus_16y2(n, j).pow(mj as u32);
        } else {
            num = &num * &one_minus_16y2(n, j).pow((-mj) as u32);
        }
    }
    ParamRational::new(num, den)
}

/// Closed forms in `x`, converted to `y`:
///
/// ```text
/// G_{0,3} = 4t^2 / prod x_j^2 (1 - 4t/x_j)^{3/2}
/// G_{1,1} = -1/(8x^2 (1 - 4t/x)^{3/2}) + t/(2x^3 (1 - 4t/x)^{5/2})
/// G_{0,4} = 24t^2 (e_4 - 2e_3 t + 32e_1 t^3 - 256t^4) / prod x_j^3 (1 - 4t/x_j)^{5/2}
/// ```
pub fn closed_form_g(g: usize, n: usize) -> Option<Result<LaurentMulti>> {
    let conv = |p: &LaurentMulti, xp: i32, rp: i32| {
        from_x_form(p, &vec![xp; p.nvars()], &vec![rp; p.nvars()], false)
    };
    let f = match (g, n) {
        (0, 3) => conv(&LaurentMulti::constant(3, tc(int(4), 2)), -2, -3),
        (1, 1) => {
            let a = conv(&LaurentMulti::constant(1, tc(rat(-1, 8), 0)), -2, -3);
            let b = conv(&LaurentMulti::constant(1, tc(rat(1, 2), 1)), -3, -5);
            a.and_then(|a| b.map(|b| &a + &b))
        }
        (0, 4) => {
            let mut p = LaurentMulti::monomial(vec![1; 4], Scalar::one());
            for i in 0..4 {
                let mut e3 = vec![1; 4];
                e3[i] = 0;
                p = &p + &LaurentMulti::monomial(e3, tc(int(-2), 1));
                let mut e1 = vec![0; 4];
                e1[i] = 1;
                p = &p + &LaurentMulti::monomial(e1, tc(int(32), 3));
            }
            p = &p + &LaurentMulti::constant(4, tc(int(-256), 4));
            conv(&p.scale(&tc(int(24), 2)), -3, -5)
        }
        _ => return None,
    };
    Some(f.and_then(|f| f.to_laurent()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g03_fixture() -> LaurentMulti {
        let p = (0..3).fold(LaurentMulti::one(3), |acc, j| &acc * &a2(3, j));
        p.shift(&[-3, -3, -3]).scale(&tc(-pow2(-28), -4))
    }

    fn g11_fixture() -> LaurentMulti {
        let a = one_minus_16y2(1, 0);
        &a.pow(2).shift(&[-1]).scale(&tc(pow2(-9), -2))
            - &a.pow(4).shift(&[-5]).scale(&tc(pow2(-17), -2))
    }

    #[test]
    fn closed_forms_in_x() {
        assert_eq!(closed_form_g(0, 3).unwrap().unwrap(), g03_fixture());
        assert_eq!(closed_form_g(1, 1).unwrap().unwrap(), g11_fixture());
        let b = NPointBuilder::new();
        assert_eq!(
            closed_form_g(0, 4).unwrap().unwrap(),
            b.value(0, 4).unwrap()
        );
        assert!(closed_form_g(1, 2).is_none());
    }

    #[test]
    fn g03_and_g11() {
        let b = NPointBuilder::new();
        assert_eq!(b.value(0, 3).unwrap(), g03_fixture());
        assert_eq!(b.value(1, 1).unwrap(), g11_fixture());
        assert_eq!(b.value(0, 2), Err(Error::Unstable { g: 0, n: 2 }));
    }

    #[test]
    fn op_e_examples() {
        let one = ParamRational::from_laurent(LaurentMulti::one(2));
        let r = op_e(&one).unwrap().to_laurent().unwrap();
        assert_eq!(r, LaurentMulti::var_pow(1, 0, -1).scale_rat(&rat(-1, 2)));
        let r = op_e(&g02(2, 0, 1)).unwrap().to_laurent().unwrap();
        let want = one_minus_16y2(1, 0)
            .pow(4)
            .shift(&[-5])
            .scale(&tc(-pow2(-17), -2));
        assert_eq!(r, want);
        let sing = ParamRational::new(
            LaurentMulti::one(2),
            (&LaurentMulti::var(2, 0) - &LaurentMulti::var(2, 1)).pow(2),
        )
        .unwrap();
        assert_eq!(op_e(&sing).unwrap_err(), Error::DivergentDiagonal);
    }

    #[test]
    fn kernel_matches_operator() {
        let b = NPointBuilder::new();
        for k in [-5, -3, -1, 1, 3] {
            let g = ParamRational::from_laurent(LaurentMulti::var_pow(2, 1, k));
            let d = op_d(&g, 0, 1).unwrap();
            let cross = g02(2, 0, 1).scale(&Scalar::from_int(-1));
            let cross = &cross * &ParamRational::from_laurent(LaurentMulti::var_pow(2, 0, k - 1));
            let sum = (&d + &cross).to_laurent().unwrap();
            assert_eq!(sum, b.kernel(k).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn x_series_low_orders() {
        let b = NPointBuilder::new();
        let g03 = b.build_g(0, 3).unwrap();
        let s = to_x_series(&g03, 3).unwrap();
        assert_eq!(s, vec![(vec![1, 1, 1], TPolynomial::monomial(int(4), 2))]);
        let g11 = b.build_g(1, 1).unwrap();
        let s: HashMap<_, _> = to_x_series(&g11, 2).unwrap().into_iter().collect();
        assert_eq!(s[&vec![1]], TPolynomial::monomial(rat(-1, 8), 0));
        assert_eq!(s[&vec![2]], TPolynomial::monomial(rat(-1, 4), 1));
    }

    #[test]
    fn structure_examples() {
        let b = NPointBuilder::new();
        let r = structure_check(&b.build_g(0, 3).unwrap());
        assert!(r.pass, "{r:?}");
        assert_eq!(r.basis, [(2, 1)].into_iter().collect());
        let r = structure_check(&b.build_g(1, 1).unwrap());
        assert!(r.pass, "{r:?}");
        assert_eq!(r.basis, [(2, 1), (2, 2)].into_iter().collect());
        let mut bad = b.build_g(1, 1).unwrap();
        bad.value = &bad.value + &LaurentMulti::var_pow(1, 0, -2);
        let r = structure_check(&bad);
        assert!(!r.pass && !r.odd);
    }
}
