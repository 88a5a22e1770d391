//! Connected correlators `<p_{2a_1} ... p_{2a_n}>_g` from the Virasoro
//! constraints, their closed forms, and the integer sequences they contain.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::{double_factorial, factorial, int, pow2, rat, BigRational};
use crate::exact::TPolynomial;

/// Memo key: genus and the sorted insertion multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorKey {
    pub g: usize,
    pub a: Vec<u32>,
}

impl CorrelatorKey {
    pub fn new(g: usize, a: &[u32]) -> Result<Self> {
        if let Some(&bad) = a.iter().find(|&&x| x == 0) {
            return Err(Error::InvalidInsertion(bad));
        }
        let mut a = a.to_vec();
        a.sort_unstable();
        Ok(CorrelatorKey { g, a })
    }
}

/// Memoized correlator evaluation. Reads may run concurrently; inserts are
/// serialized and idempotent.
#[derive(Default)]
pub struct CorrelatorTable {
    memo: RwLock<HashMap<CorrelatorKey, TPolynomial>>,
}

fn t_mono(c: BigRational, e: i32) -> TPolynomial {
    TPolynomial::monomial(c, e)
}

impl CorrelatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `<prod p_{2a_i}>_g`.
    pub fn correlator(&self, g: usize, a: &[u32]) -> Result<TPolynomial> {
        let key = CorrelatorKey::new(g, a)?;
        Ok(self.get(&key))
    }

    fn get(&self, key: &CorrelatorKey) -> TPolynomial {
        if let Some(v) = self.memo.read().unwrap().get(key) {
            return v.clone();
        }
        let v = self.compute(key);
        if key.g <= 1 {
            assert!(
                v.min_degree().is_none_or(|d| d >= 0),
                "negative power of t at genus {}: {v}",
                key.g
            );
        }
        self.memo.write().unwrap().insert(key.clone(), v.clone());
        v
    }

    fn get_raw(&self, g: usize, a: Vec<u32>) -> TPolynomial {
        let mut a = a;
        a.sort_unstable();
        self.get(&CorrelatorKey { g, a })
    }

    fn compute(&self, key: &CorrelatorKey) -> TPolynomial {
        if key.a.is_empty() {
            return TPolynomial::zero();
        }
        match key.a.iter().position(|&x| x == 1) {
            Some(i) => self.step_l0(key.g, &key.a, i),
            None => self.step_p2m(key.g, &key.a, key.a.len() - 1),
        }
    }

    /// One application of the dilaton-type constraint removing `p_2` at `idx`.
    fn step_l0(&self, g: usize, a: &[u32], idx: usize) -> TPolynomial {
        debug_assert_eq!(a[idx], 1);
        let mut rest = a.to_vec();
        rest.remove(idx);
        if rest.is_empty() {
            return match g {
                0 => t_mono(rat(1, 2), 2),
                1 => t_mono(rat(-1, 8), 0),
                _ => TPolynomial::zero(),
            };
        }
        let total: u32 = rest.iter().sum();
        self.get_raw(g, rest).scale(&int(2 * total as i64))
    }

    /// One application of the `p_{2m+2}` constraint with pivot `idx`.
    fn step_p2m(&self, g: usize, a: &[u32], idx: usize) -> TPolynomial {
        let m = a[idx] - 1;
        debug_assert!(m >= 1);
        let mut x = a.to_vec();
        x.remove(idx);
        let mut acc = TPolynomial::zero();
        for j in 0..x.len() {
            let mut y = x.clone();
            y[j] += m;
            acc = &acc + &self.get_raw(g, y).scale(&int(x[j] as i64));
        }
        let mut y = x.clone();
        y.push(m);
        acc = &acc + &self.get_raw(g, y).shift(1);
        for k in 1..m {
            if g >= 1 {
                let mut y = x.clone();
                y.push(k);
                y.push(m - k);
                acc = &acc + &self.get_raw(g - 1, y);
            }
            let n = x.len();
            for mask in 0u32..(1 << n) {
                let (mut i1, mut i2) = (vec![k], vec![m - k]);
                for (i, &v) in x.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        i1.push(v);
                    } else {
                        i2.push(v);
                    }
                }
                for g1 in 0..=g {
                    let l = self.get_raw(g1, i1.clone());
                    if l.is_zero() {
                        continue;
                    }
                    acc = &acc + &(&l * &self.get_raw(g - g1, i2.clone()));
                }
            }
        }
        acc.scale(&int(2))
    }

    /// Evaluate by a first recursion step that uses the insertion at `idx`
    /// as pivot; later steps use the default pivot. Used to check that the
    /// result does not depend on the pivot.
    pub fn evaluate_with_pivot(&self, g: usize, a: &[u32], idx: usize) -> Result<TPolynomial> {
        let key = CorrelatorKey::new(g, a)?;
        let a = a.to_vec();
        if idx >= a.len() {
            return Err(Error::InvalidInsertion(0));
        }
        Ok(if a[idx] == 1 {
            self.step_l0(key.g, &a, idx)
        } else {
            self.step_p2m(key.g, &a, idx)
        })
    }

    /// All records of genus `g` with total degree at most `bound`, ordered by
    /// number of insertions and then lexicographically.
    pub fn table(&self, g: usize, bound: u32) -> Vec<TableRecord> {
        multisets_up_to(bound)
            .into_iter()
            .map(|a| {
                let value = self.get_raw(g, a.clone()).to_string();
                TableRecord { g, a, value }
            })
            .collect()
    }
}

/// Export record: `{"g": .., "a": [..], "value": ".."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRecord {
    pub g: usize,
    pub a: Vec<u32>,
    pub value: String,
}

/// Sorted multisets of positive integers with sum at most `bound`, grouped
/// by length and lexicographic within a length.
pub fn multisets_up_to(bound: u32) -> Vec<Vec<u32>> {
    fn rec(min: u32, left: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let slots = (len - cur.len()) as u32;
        for v in min..=left {
            if v * slots > left {
                break;
            }
            cur.push(v);
            rec(v, left - v, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=bound as usize {
        rec(1, bound, len, &mut Vec::new(), &mut out);
    }
    out
}

fn frac_int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `(2n-1)!!/(n-1)!`.
fn odd_ratio(n: u32) -> BigRational {
    BigRational::new(double_factorial(2 * n as i64 - 1), factorial(n as u64 - 1))
}

/// Closed formulas for the genus-zero one- to four-point and genus-one
/// one-point correlators; `None` outside that range.
pub fn closed_form(g: usize, a: &[u32]) -> Option<TPolynomial> {
    if a.contains(&0) {
        return None;
    }
    let sum: u32 = a.iter().sum();
    match (g, a.len()) {
        (0, 1) => {
            let n = a[0] as u64;
            let c = BigRational::new(factorial(2 * n), factorial(n) * factorial(n + 1)) * rat(1, 2);
            Some(t_mono(c, n as i32 + 1))
        }
        (0, 2) => {
            let f = |m: u64| BigRational::new(factorial(2 * m), factorial(m - 1) * factorial(m));
            let (m, n) = (a[0] as u64, a[1] as u64);
            let c = rat(1, 2) * f(m) * f(n) / int((m + n) as i64);
            Some(t_mono(c, (m + n) as i32))
        }
        (0, 3) => {
            let c = a
                .iter()
                .fold(pow2(sum as i64 - 1), |acc, &n| acc * odd_ratio(n));
            Some(t_mono(c, sum as i32 - 1))
        }
        (0, 4) => {
            let c = a
                .iter()
                .fold(pow2(sum as i64 - 1) * int(sum as i64 - 1), |acc, &n| {
                    acc * odd_ratio(n)
                });
            Some(t_mono(c, sum as i32 - 2))
        }
        (1, 1) => {
            let n = a[0] as i64;
            let c = BigRational::new(
                BigInt::from(2 * n - 5) * double_factorial(2 * n - 1),
                BigInt::from(24) * factorial(n as u64 - 1),
            ) * pow2(n - 1);
            Some(t_mono(c, n as i32 - 1))
        }
        _ => None,
    }
}

/// Integer sequences read off from low-point genus-zero correlators.
pub fn sequence_check(table: &CorrelatorTable, name: &str, count: usize) -> Result<Vec<BigInt>> {
    let coeff = |p: TPolynomial, e: i32| -> BigInt {
        let c = p.coeff(e);
        debug_assert!(c.denom().is_one());
        c.to_integer()
    };
    let mut out = Vec::with_capacity(count);
    for n in 1..=count as u32 {
        let v = match name {
            "catalan" => coeff(table.correlator(0, &[n])?.scale(&int(2)), n as i32 + 1),
            "A001791" => coeff(table.correlator(0, &[1, n])?, n as i32 + 1),
            "A007946" => coeff(
                table.correlator(0, &[2, n])?.scale(&rat(1, 2)),
                n as i32 + 2,
            ),
            other => return Err(Error::UnknownSequence(other.to_string())),
        };
        out.push(v);
    }
    Ok(out)
}

/// Independent references for the sequences: the Catalan recurrence and
/// the two binomial formulas.
pub fn sequence_reference(name: &str, count: usize) -> Result<Vec<BigInt>> {
    match name {
        "catalan" => {
            let mut c = vec![BigInt::one()];
            while c.len() < count + 1 {
                let n = c.len();
                let next = (0..n).fold(BigInt::zero(), |acc, i| acc + &c[i] * &c[n - 1 - i]);
                c.push(next);
            }
            Ok(c[1..count + 1].to_vec())
        }
        "A001791" => Ok((1..=count as u64)
            .map(|n| crate::exact::rational::binomial(2 * n, n - 1))
            .collect()),
        "A007946" => Ok((1..=count as u64)
            .map(|n| {
                (frac_int(BigInt::from(3) * factorial(2 * n))
                    / frac_int(factorial(n - 1) * factorial(n) * (n + 2)))
                .to_integer()
            })
            .collect()),
        other => Err(Error::UnknownSequence(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: TPolynomial) -> String {
        p.to_string()
    }

    #[test]
    fn initial_values_and_examples() {
        let t = CorrelatorTable::new();
        assert_eq!(s(t.correlator(0, &[1]).unwrap()), "1/2*t^2");
        assert_eq!(s(t.correlator(0, &[1, 1]).unwrap()), "t^2");
        assert_eq!(s(t.correlator(0, &[1, 1, 1]).unwrap()), "4*t^2");
        assert_eq!(s(t.correlator(0, &[2]).unwrap()), "t^3");
        assert_eq!(s(t.correlator(1, &[1]).unwrap()), "-1/8");
        assert_eq!(s(t.correlator(0, &[3]).unwrap()), "5/2*t^4");
        assert_eq!(s(t.correlator(0, &[1, 1, 1, 1]).unwrap()), "24*t^2");
        assert_eq!(s(t.correlator(1, &[2]).unwrap()), "-1/4*t");
    }

    #[test]
    fn zero_insertion_is_rejected() {
        let t = CorrelatorTable::new();
        assert_eq!(t.correlator(0, &[0, 1]), Err(Error::InvalidInsertion(0)));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(s(closed_form(0, &[2, 2]).unwrap()), "18*t^4");
        assert_eq!(s(closed_form(1, &[1]).unwrap()), "-1/8");
        assert_eq!(s(closed_form(0, &[1, 1, 1]).unwrap()), "4*t^2");
        assert!(closed_form(2, &[1]).is_none());
        let t = CorrelatorTable::new();
        assert_eq!(
            t.correlator(0, &[2, 2]).unwrap(),
            closed_form(0, &[2, 2]).unwrap()
        );
    }

    #[test]
    fn p2_vanishes_in_higher_genus() {
        let t = CorrelatorTable::new();
        for g in 2..=6 {
            assert!(t.correlator(g, &[1]).unwrap().is_zero());
        }
    }

    #[test]
    fn key_enumeration() {
        let keys = multisets_up_to(3);
        assert_eq!(
            keys,
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 1],
                vec![1, 2],
                vec![1, 1, 1]
            ]
        );
    }

    #[test]
    fn sequences() {
        let t = CorrelatorTable::new();
        let as_i = |v: Vec<BigInt>| {
            v.into_iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        assert_eq!(
            as_i(sequence_check(&t, "catalan", 7).unwrap()),
            "1 2 5 14 42 132 429"
        );
        assert_eq!(
            as_i(sequence_check(&t, "A001791", 6).unwrap()),
            "1 4 15 56 210 792"
        );
        assert_eq!(
            as_i(sequence_check(&t, "A007946", 6).unwrap()),
            "2 9 36 140 540 2079"
        );
        for name in ["catalan", "A001791", "A007946"] {
            assert_eq!(
                sequence_check(&t, name, 7).unwrap(),
                sequence_reference(name, 7).unwrap()
            );
        }
        assert!(sequence_check(&t, "fibonacci", 3).is_err());
    }
}
