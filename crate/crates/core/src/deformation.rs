//! The special deformation of the spectral curve: the unique series
//!
//! ```text
//! y = S'(x)/2 + t/(2x) + sum_{n>=0} w_n x^(-n-2),   S = -x/2 + sum_{k<=M} s_{2k} x^k
//! ```
//!
//! with `(y^2)_{<-1} = 0`, solved degree by degree in the couplings.
//! Comparing coefficients of `x^(-N-2)` gives
//!
//! ```text
//! w_N / 2 = [N = 0] t^2/4 + sum_k k s_{2k} w_{N+k-1} + t w_{N-1} + sum_{i+j=N-2} w_i w_j
//! ```
//!
//! which is triangular in `N` at fixed coupling degree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::rational::{binomial_rational, int, rat, rat_pow};
use crate::exact::{LaurentMulti, Scalar, TPolynomial};

/// Truncated solution; `w[n]` is a polynomial in `s_2, ..., s_{2M}` (slots
/// `0..M`) with coefficients in `Q[t]`, exact through total degree `degree`.
#[derive(Clone, Debug)]
pub struct SpecialDeformation {
    pub couplings: usize,
    pub degree: usize,
    pub w: Vec<LaurentMulti>,
}

fn total_degree(e: &[i32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

/// Homogeneous part of total degree `d`.
fn part(p: &LaurentMulti, d: usize) -> LaurentMulti {
    LaurentMulti::from_terms(
        p.nvars(),
        p.terms()
            .filter(|(e, _)| total_degree(e) == d)
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

fn truncate(p: &LaurentMulti, d: usize) -> LaurentMulti {
    LaurentMulti::from_terms(
        p.nvars(),
        p.terms()
            .filter(|(e, _)| total_degree(e) <= d)
            .map(|(e, c)| (e.clone(), c.clone())),
    )
}

impl SpecialDeformation {
    /// Solve for `w_0 .. w_{n_terms - 1}` with couplings `s_2 .. s_{2M}`
    /// through total coupling degree `degree`.
    pub fn solve(couplings: usize, degree: usize, n_terms: usize) -> Result<Self> {
        let m = couplings;
        if m == 0 {
            return Err(Error::NoConvergence("need at least one coupling".into()));
        }
        // At degree d, w_N needs w_{N+k-1} at degree d-1, so index range grows.
        let len_at = |d: usize| n_terms + (degree - d) * (m - 1);
        let mut parts: Vec<Vec<LaurentMulti>> = Vec::with_capacity(degree + 1);
        for d in 0..=degree {
            let len = len_at(d);
            let mut cur: Vec<LaurentMulti> = Vec::with_capacity(len);
            for n in 0..len {
                let mut rhs = LaurentMulti::zero(m);
                if n == 0 && d == 0 {
                    rhs = LaurentMulti::constant(m, Scalar::t_monomial(rat(1, 4), 2));
                }
                if d >= 1 {
                    for k in 1..=m {
                        let prev = &parts[d - 1][n + k - 1];
                        let sk = LaurentMulti::var(m, k - 1).scale_rat(&int(k as i64));
                        rhs = &rhs + &(&sk * prev);
                    }
                }
                if n >= 1 {
                    rhs = &rhs + &cur[n - 1].scale(&Scalar::t());
                }
                if n >= 2 {
                    let get = |deg: usize, idx: usize| {
                        if deg == d {
                            &cur[idx]
                        } else {
                            &parts[deg][idx]
                        }
                    };
                    for i in 0..=n - 2 {
                        for d1 in 0..=d {
                            rhs = &rhs + &(get(d1, i) * get(d - d1, n - 2 - i));
                        }
                    }
                }
                cur.push(rhs.scale_rat(&int(2)));
            }
            parts.push(cur);
        }
        let w: Vec<LaurentMulti> = (0..n_terms)
            .map(|n| {
                parts
                    .iter()
                    .fold(LaurentMulti::zero(m), |acc, p| &acc + &p[n])
            })
            .collect();
        let sol = SpecialDeformation {
            couplings: m,
            degree,
            w,
        };
        sol.check_residual()?;
        Ok(sol)
    }

    /// Verify `(y^2)_{<-1} = 0` for every equation whose unknowns were
    /// solved, through the truncation degree.
    pub fn check_residual(&self) -> Result<()> {
        let m = self.couplings;
        let n_terms = self.w.len();
        let w = |n: isize| -> LaurentMulti {
            if n < 0 || n as usize >= n_terms {
                LaurentMulti::zero(m)
            } else {
                self.w[n as usize].clone()
            }
        };
        for big_n in 0..n_terms as isize {
            if big_n as usize + m > n_terms {
                break;
            }
            let mut r = w(big_n).scale_rat(&rat(-1, 2));
            if big_n == 0 {
                r = &r + &LaurentMulti::constant(m, Scalar::t_monomial(rat(1, 4), 2));
            }
            for k in 1..=m {
                let sk = LaurentMulti::var(m, k - 1).scale_rat(&int(k as i64));
                r = &r + &(&sk * &w(big_n + k as isize - 1));
            }
            r = &r + &w(big_n - 1).scale(&Scalar::t());
            for i in 0..=(big_n - 2).max(-1) {
                r = &r + &(&w(i) * &w(big_n - 2 - i));
            }
            let r = truncate(&r, self.degree);
            if !r.is_zero() {
                return Err(Error::NoConvergence(format!(
                    "residual at x^-{}: {}",
                    big_n + 2,
                    r
                )));
            }
        }
        Ok(())
    }

    /// `w_n` at vanishing couplings.
    pub fn at_zero(&self, n: usize) -> Result<TPolynomial> {
        TPolynomial::from_scalar(&self.w[n].coeff(&vec![0; self.couplings]))
    }

    /// Coefficient of `s_{2k}` in `w_n` (`k >= 1`).
    pub fn linear_coeff(&self, n: usize, k: usize) -> Result<TPolynomial> {
        let mut e = vec![0; self.couplings];
        e[k - 1] = 1;
        TPolynomial::from_scalar(&self.w[n].coeff(&e))
    }

    /// Homogeneous coupling-degree `d` part of `w_n`.
    pub fn graded_part(&self, n: usize, d: usize) -> LaurentMulti {
        part(&self.w[n], d)
    }

    pub fn render(&self, n: usize) -> String {
        let names: Vec<String> = (1..=self.couplings)
            .map(|k| format!("s{}", 2 * k))
            .collect();
        self.w[n].render_with(&names)
    }

    /// Rendered `w_n` keyed by `n`.
    pub fn rendered(&self) -> BTreeMap<usize, String> {
        (0..self.w.len()).map(|n| (n, self.render(n))).collect()
    }
}

/// Coefficient of `x^-k` in `-1/4 (1 - 4t/x)^(1/2)`.
pub fn branch_coefficient(k: usize) -> TPolynomial {
    let c = rat(-1, 4) * binomial_rational(&rat(1, 2), k as u64) * rat_pow(&int(-4), k as i64);
    TPolynomial::monomial(c, k as i32)
}
