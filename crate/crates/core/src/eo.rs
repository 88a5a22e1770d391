//! Eynard-Orantin topological recursion on a rational spectral curve with
//! a single simple branch point at `u = 0` and involution `u -> -u`.
//!
//! Differentials are stored as their coefficient in `du_1 ... du_n`. For
//! the involution `dσ(u) = -du`, so the recursion reads
//!
//! ```text
//! w_{g,n+1}(u_0, ..) = -Res_{u=0} k(u_0, u) [ W_{g-1,n+2}(u, -u, ..)
//!                                             + sum' W_h(u, ..) W_{g-h}(-u, ..) ]
//! k(u_0, u) = u / ((u_0^2 - u^2) (y(u) - y(-u)) x'(u))
//! ```
//!
//! with `B = du du'/(u - u')^2`. Stable products are Laurent polynomials in
//! `u`, so their residue is a finite contraction with the expansion of `k`.
//! Terms containing `w_{0,2}` keep their poles at `u = +-u_j`; they are
//! expanded exactly as rational functions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::exact::laurent::one_minus_16y2;
use crate::exact::rational::{int, pow2, rat};
use crate::exact::{LaurentMulti, ParamRational, Scalar};
use crate::memo::Memo;
use crate::npoint::{is_stable, NPointBuilder};

/// A rational spectral curve in a global coordinate `u`.
#[derive(Clone, Debug)]
pub struct SpectralCurve {
    pub name: &'static str,
    /// Name of the global coordinate, used for rendering.
    pub coord: &'static str,
    /// `x(u)` in one variable.
    pub x: ParamRational,
    /// `y(u)` in one variable; `w_{0,1} = y dx`.
    pub y: ParamRational,
}

impl SpectralCurve {
    /// `x = 4t/(1 - 16y^2)` in the coordinate `y`, with `w_{0,1} = y dx`.
    pub fn even_coupling() -> Self {
        let x = ParamRational::new(
            LaurentMulti::constant(1, Scalar::t_monomial(int(4), 1)),
            one_minus_16y2(1, 0),
        )
        .unwrap();
        SpectralCurve {
            name: "even-coupling",
            coord: "y",
            x,
            y: ParamRational::from_laurent(LaurentMulti::var(1, 0)),
        }
    }

    /// The Airy curve `x = z^2/2`, `y = z`.
    pub fn airy() -> Self {
        SpectralCurve {
            name: "airy",
            coord: "z",
            x: ParamRational::from_laurent(LaurentMulti::var_pow(1, 0, 2).scale_rat(&rat(1, 2))),
            y: ParamRational::from_laurent(LaurentMulti::var(1, 0)),
        }
    }

    pub fn dx(&self) -> ParamRational {
        self.x.derivative(0)
    }

    fn negated(f: &ParamRational) -> ParamRational {
        ParamRational::new(f.numer().negate_var(0), f.denom().negate_var(0)).unwrap()
    }

    /// Check `x(-u) = x(u)`, `x'(0) = 0` and `x''(0) != 0`.
    pub fn check(&self) -> Result<()> {
        if !Self::negated(&self.x).equals(&self.x) {
            return Err(Error::Curve(format!(
                "{}: x is not invariant under u -> -u",
                self.name
            )));
        }
        let s = self.x.series_coefficients_at_zero(0, 2)?;
        if s.start < 0 {
            return Err(Error::Curve(format!(
                "{}: x has a pole at the branch point",
                self.name
            )));
        }
        let c = |e: i32| s.coeff(e).cloned().unwrap_or_else(|| LaurentMulti::zero(1));
        if !c(1).is_zero() {
            return Err(Error::Curve(format!("{}: x'(0) != 0", self.name)));
        }
        if c(2).is_zero() {
            return Err(Error::Curve(format!("{}: x''(0) = 0", self.name)));
        }
        Ok(())
    }

    /// Value of `x` at the branch point.
    pub fn branch_value(&self) -> Result<Scalar> {
        let s = self.x.series_coefficients_at_zero(0, 0)?;
        Ok(s.coeff(0)
            .and_then(|c| c.as_constant())
            .unwrap_or_else(Scalar::zero))
    }

    /// Kernel coefficient `k(u_0, u)` in variables `(u_0, u)`.
    pub fn kernel(&self) -> Result<ParamRational> {
        let lift = |f: &ParamRational| f.map_vars(2, &[1]);
        let yu = lift(&self.y)?;
        let ym = lift(&Self::negated(&self.y))?;
        let dx = lift(&self.dx())?;
        let u = LaurentMulti::var(2, 1);
        let den = &LaurentMulti::var(2, 0).pow(2) - &u.pow(2);
        let f = ParamRational::new(u, den)?;
        f.try_div(&(&(&yu - &ym) * &dx))
    }

    /// `w_{0,1} = y dx` as a coefficient of `du`.
    pub fn omega01(&self) -> ParamRational {
        &self.y * &self.dx()
    }
}

/// `w_{0,2} = du_1 du_2/(u_1 - u_2)^2`.
pub fn bergman(nvars: usize, a: usize, b: usize) -> ParamRational {
    let d = &LaurentMulti::var(nvars, a) - &LaurentMulti::var(nvars, b);
    ParamRational::new(LaurentMulti::one(nvars), d.pow(2)).unwrap()
}

/// Coefficient form of a multidifferential.
#[derive(Clone, Debug)]
pub enum Form {
    Laurent(LaurentMulti),
    Rational(ParamRational),
}

#[derive(Clone, Debug)]
pub struct MultiDifferential {
    pub g: usize,
    pub n: usize,
    pub coord: &'static str,
    pub form: Form,
}

impl MultiDifferential {
    pub fn laurent(&self) -> Option<&LaurentMulti> {
        match &self.form {
            Form::Laurent(l) => Some(l),
            Form::Rational(_) => None,
        }
    }

    pub fn render(&self) -> String {
        let names: Vec<String> = (1..=self.n).map(|i| format!("{}{i}", self.coord)).collect();
        match &self.form {
            Form::Laurent(l) => l.render_with(&names),
            Form::Rational(r) => format!(
                "({})/({})",
                r.numer().render_with(&names),
                r.denom().render_with(&names)
            ),
        }
    }
}

impl PartialEq for MultiDifferential {
    fn eq(&self, other: &Self) -> bool {
        let same = self.g == other.g && self.n == other.n;
        same && match (&self.form, &other.form) {
            (Form::Laurent(a), Form::Laurent(b)) => a == b,
            (Form::Rational(a), Form::Rational(b)) => a.equals(b),
            (Form::Laurent(a), Form::Rational(b)) | (Form::Rational(b), Form::Laurent(a)) => {
                ParamRational::from_laurent(a.clone()).equals(b)
            }
        }
    }
}

impl fmt::Display for MultiDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Memoized recursion for one curve.
pub struct EoEngine {
    curve: SpectralCurve,
    kernel: ParamRational,
    memo: Memo<(usize, usize), LaurentMulti>,
    /// Expansion of `k(u_0, u)` in `u`, in variables `(u_0, u)`.
    kseries: Mutex<Option<(i32, Vec<LaurentMulti>)>>,
    cross: Mutex<HashMap<i32, LaurentMulti>>,
}

impl EoEngine {
    pub fn new(curve: SpectralCurve) -> Result<Self> {
        curve.check()?;
        let kernel = curve.kernel()?;
        Ok(EoEngine {
            curve,
            kernel,
            memo: Memo::default(),
            kseries: Mutex::new(None),
            cross: Mutex::new(HashMap::new()),
        })
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    pub fn eo_omega(&self, g: usize, n: usize) -> Result<MultiDifferential> {
        Ok(MultiDifferential {
            g,
            n,
            coord: self.curve.coord,
            form: Form::Laurent(self.value(g, n)?),
        })
    }

    pub fn value(&self, g: usize, n: usize) -> Result<LaurentMulti> {
        if !is_stable(g, n) {
            return Err(Error::Unstable { g, n });
        }
        self.memo.get_or_compute(&(g, n), || self.compute(g, n))
    }

    /// `[u^m] k(u_0, u)` for `m` up to `order`, as Laurent polynomials in `(u_0, u)`.
    fn kernel_coeff(&self, m: i32) -> Result<LaurentMulti> {
        let mut guard = self.kseries.lock().unwrap();
        let stale = match &*guard {
            Some((start, cs)) => m >= *start + cs.len() as i32,
            None => true,
        };
        if stale {
            let order = (m + 8).max(8);
            let s = self.kernel.series_coefficients_at_zero(1, order)?;
            *guard = Some((s.start, s.coeffs));
        }
        let (start, cs) = guard.as_ref().unwrap();
        if m < *start {
            return Ok(LaurentMulti::zero(2));
        }
        Ok(cs[(m - start) as usize].clone())
    }

    /// `-Res_{u=0} k(u_0, u) P` for `P` Laurent in `u` (slot `live`), with
    /// `u_0` in slot 0. The live slot is removed from the result.
    fn residue_laurent(&self, p: &LaurentMulti, live: usize) -> Result<LaurentMulti> {
        let n = p.nvars();
        let mut acc = LaurentMulti::zero(n);
        for (e, c) in p.collect_var(live) {
            let k = self.kernel_coeff(-1 - e)?;
            if k.is_zero() {
                continue;
            }
            acc = &acc - &(&c * &k.map_vars(n, &[0, live]));
        }
        Ok(acc.remove_var(live))
    }

    /// `-Res k(u_0,u) [ (-1)^e u^e/(u - u_j)^2 + u^e/(u + u_j)^2 ]` in `(u_0, u_j)`:
    /// the two cross terms of `w_{0,2}` against the monomial `u^e`.
    fn cross_kernel(&self, e: i32) -> Result<LaurentMulti> {
        if let Some(v) = self.cross.lock().unwrap().get(&e) {
            return Ok(v.clone());
        }
        let k = self.kernel.map_vars(3, &[0, 2])?;
        let (u, uj) = (LaurentMulti::var(3, 2), LaurentMulti::var(3, 1));
        let ue = LaurentMulti::var_pow(3, 2, e);
        let sign = if e % 2 == 0 { 1 } else { -1 };
        let num = &ue.scale_rat(&int(sign)) * &(&u + &uj).pow(2);
        let num = &num + &(&ue * &(&u - &uj).pow(2));
        let den = (&u.pow(2) - &uj.pow(2)).pow(2);
        let f = &k * &ParamRational::new(num, den)?;
        let v = (-&f.residue_at_zero(2)?).remove_var(2);
        self.cross.lock().unwrap().insert(e, v.clone());
        Ok(v)
    }

    fn compute(&self, g: usize, n: usize) -> Result<LaurentMulti> {
        let m = n - 1;
        let live = n;
        let w = n + 1;
        if (g, n) == (0, 3) {
            // both orderings of w02(u, u_a) w02(-u, u_b)
            let f = |a: usize, b: usize| -> Result<ParamRational> {
                let d1 = &LaurentMulti::var(4, 3) - &LaurentMulti::var(4, a);
                let d2 = &LaurentMulti::var(4, 3) + &LaurentMulti::var(4, b);
                ParamRational::new(LaurentMulti::one(4), (&d1 * &d2).pow(2))
            };
            let bracket = &f(1, 2)? + &f(2, 1)?;
            let k = self.kernel.map_vars(4, &[0, 3])?;
            let r = (&k * &bracket).residue_at_zero(3)?;
            return Ok((-&r).remove_var(3));
        }
        let mut p = LaurentMulti::zero(w);
        if g >= 1 {
            if (g - 1, m + 2) == (0, 2) {
                // w02(u, -u) = 1/(4u^2)
                p = &p + &LaurentMulti::var_pow(w, live, -2).scale_rat(&rat(1, 4));
            } else {
                let h = self.value(g - 1, m + 2)?.negate_var(1);
                let map: Vec<usize> = [live, live].into_iter().chain(1..=m).collect();
                p = &p + &h.map_vars(w, &map);
            }
        }
        for h in 0..=g {
            for mask in 0u32..(1 << m) {
                let i1: Vec<usize> = (1..=m).filter(|j| mask & (1 << (j - 1)) != 0).collect();
                let i2: Vec<usize> = (1..=m).filter(|j| mask & (1 << (j - 1)) == 0).collect();
                if !is_stable(h, i1.len() + 1) || !is_stable(g - h, i2.len() + 1) {
                    continue;
                }
                let m1: Vec<usize> = std::iter::once(live).chain(i1.iter().copied()).collect();
                let m2: Vec<usize> = std::iter::once(live).chain(i2.iter().copied()).collect();
                let f1 = self.value(h, i1.len() + 1)?.map_vars(w, &m1);
                let f2 = self
                    .value(g - h, i2.len() + 1)?
                    .negate_var(0)
                    .map_vars(w, &m2);
                p = &p + &(&f1 * &f2);
            }
        }
        let mut acc = self.residue_laurent(&p, live)?;
        if is_stable(g, m) {
            let base = self.value(g, m)?;
            for j in 1..=m {
                let rest: Vec<usize> = (1..=m).filter(|&k| k != j).collect();
                let map: Vec<usize> = std::iter::once(live).chain(rest).collect();
                let placed = base.map_vars(w, &map);
                for (e, c) in placed.collect_var(live) {
                    let rho = self.cross_kernel(e)?.map_vars(w, &[0, j]);
                    acc = &acc + &(&c * &rho).remove_var(live);
                }
            }
        }
        Ok(acc)
    }
}

/// `W_{g,n} = G_{g,n} dx_1 ... dx_n` in the `dy` basis, from the n-point
/// functions; unstable cases are the fixtures `y dx` and the Bergman kernel.
pub fn w_from_g(builder: &NPointBuilder, g: usize, n: usize) -> Result<MultiDifferential> {
    let curve = SpectralCurve::even_coupling();
    let form = match (g, n) {
        (0, 1) => Form::Rational(curve.omega01()),
        (0, 2) => Form::Rational(bergman(2, 0, 1)),
        _ => {
            let mut v = builder.value(g, n)?;
            let factor = Scalar::t_monomial(pow2(7), 1);
            for i in 0..n {
                let mut sh = vec![0; n];
                sh[i] = 1;
                v = v.shift(&sh).scale(&factor);
                v = v.exact_quotient(&one_minus_16y2(n, i).pow(2))?;
            }
            Form::Laurent(v)
        }
    };
    Ok(MultiDifferential {
        g,
        n,
        coord: "y",
        form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::BigRational;

    fn t_inv(c: BigRational) -> Scalar {
        Scalar::t_monomial(c, -1)
    }

    #[test]
    fn even_curve_data() {
        let c = SpectralCurve::even_coupling();
        c.check().unwrap();
        assert_eq!(c.branch_value().unwrap(), Scalar::t_monomial(int(4), 1));
        let want = ParamRational::new(
            LaurentMulti::var(1, 0).scale(&Scalar::t_monomial(pow2(7), 1)),
            one_minus_16y2(1, 0).pow(2),
        )
        .unwrap();
        assert!(c.dx().equals(&want));
    }

    #[test]
    fn airy_curve_data() {
        let c = SpectralCurve::airy();
        c.check().unwrap();
        let want = ParamRational::new(
            LaurentMulti::one(2),
            (&LaurentMulti::var_pow(2, 0, 2) - &LaurentMulti::var_pow(2, 1, 2))
                .shift(&[0, 1])
                .scale_rat(&int(2)),
        )
        .unwrap();
        assert!(c.kernel().unwrap().equals(&want));
    }

    #[test]
    fn even_curve_low_cases() {
        let e = EoEngine::new(SpectralCurve::even_coupling()).unwrap();
        let w03 = e.value(0, 3).unwrap();
        assert_eq!(
            w03,
            LaurentMulti::monomial(vec![-2, -2, -2], t_inv(-pow2(-7)))
        );
        let w11 = e.value(1, 1).unwrap();
        let want = &LaurentMulti::monomial(vec![-4], t_inv(-pow2(-10)))
            + &LaurentMulti::monomial(vec![-2], t_inv(pow2(-5)));
        assert_eq!(w11, want);
    }

    #[test]
    fn airy_low_cases() {
        let e = EoEngine::new(SpectralCurve::airy()).unwrap();
        assert_eq!(
            e.value(0, 3).unwrap(),
            LaurentMulti::monomial(vec![-2, -2, -2], Scalar::from_int(-1))
        );
        assert_eq!(
            e.value(1, 1).unwrap(),
            LaurentMulti::monomial(vec![-4], Scalar::from_rational(rat(-1, 8)))
        );
    }

    #[test]
    fn main1_low() {
        let e = EoEngine::new(SpectralCurve::even_coupling()).unwrap();
        let b = NPointBuilder::new();
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
            assert_eq!(
                e.eo_omega(g, n).unwrap(),
                w_from_g(&b, g, n).unwrap(),
                "({g},{n})"
            );
        }
    }
}
