//! Canonical text rendering shared by every exact type.
//!
//! A rendered polynomial is a sum of terms `c*v1^e1*v2^e2` with `^` for
//! powers, an explicit `*`, unit coefficients dropped and exponent 1 elided.
//! Callers hand terms over already sorted.

use super::rational::{fmt_rational, BigRational};
use num_traits::{One, Signed, Zero};

pub(crate) struct Term {
    pub coeff: BigRational,
    pub factors: Vec<(String, i32)>,
}

fn factor(name: &str, e: i32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

fn term_body(coeff: &BigRational, factors: &[(String, i32)]) -> String {
    let mono: Vec<String> = factors
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(n, e)| factor(n, *e))
        .collect();
    if mono.is_empty() {
        return fmt_rational(coeff);
    }
    let mono = mono.join("*");
    if coeff.is_one() {
        mono
    } else {
        format!("{}*{}", fmt_rational(coeff), mono)
    }
}

pub(crate) fn render_terms(terms: &[Term]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().filter(|t| !t.coeff.is_zero()).enumerate() {
        let neg = t.coeff.is_negative();
        let body = term_body(&t.coeff.abs(), &t.factors);
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
