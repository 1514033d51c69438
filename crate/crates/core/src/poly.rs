//! Exact Laurent polynomials in `A` with big-integer coefficients, plus the
//! multivariate extension used by the rotation-graded state sum.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Integer Laurent polynomial `sum c_k A^k`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coef: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef.into());
        p
    }

    /// The loop value `d = -A^2 - A^-2`.
    pub fn loop_value() -> Self {
        Self::from_terms([(2, -1), (-2, -1)])
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn shift(&self, by: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + by, c.clone())).collect(),
        }
    }

    /// `p(A) -> p(A^k)`; `k = -1` negates every exponent.
    pub fn substitute_power(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `(-A^3)^k` for any integer `k`.
    pub fn neg_a_cubed_pow(k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(sign, 3 * k)
    }

    /// Value at `A = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Evaluates at an integer point; only valid when all exponents are nonnegative
    /// or `x` is a unit.
    pub fn eval_unit(&self, x: i64) -> BigInt {
        assert!(x == 1 || x == -1, "eval_unit needs a unit argument");
        self.terms
            .iter()
            .map(|(e, c)| if x == -1 && e.rem_euclid(2) == 1 { -c } else { c.clone() })
            .sum()
    }

    /// Exact division; `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (dmax, dlead) = other.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let dmin = other.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let lowest = match self.min_exp() {
            Some(m) => m - dmin,
            None => return Some(quot),
        };
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let qe = e - dmax;
            if qe < lowest || !(&c % &dlead).is_zero() {
                return None;
            }
            let q = Self::monomial(&c / &dlead, qe);
            rem = &rem - &(&q * other);
            quot += &q;
        }
        Some(quot)
    }

    /// `[[exp, coef], ...]` sorted by exponent descending.
    pub fn to_json_terms(&self) -> Vec<(i64, String)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c.to_string())).collect()
    }

    /// Formats with a variable name other than `A` (used for Alexander polynomials in `t`).
    pub fn display_in(&self, var: &str) -> String {
        format_terms(self.terms.iter().rev().map(|(e, c)| (c.clone(), power_str(var, *e))))
    }
}

fn power_str(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Joins `(coef, monomial-text)` pairs as `2*A^3 - A + 1`.
pub(crate) fn format_terms(terms: impl Iterator<Item = (BigInt, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("A"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = String;

    /// Parses the text form produced by `Display`, e.g. `A^2 + 1 - A^-4`.
    fn from_str(s: &str) -> Result<Self, String> {
        parse_terms(s, |mono| {
            if mono.is_empty() {
                return Ok(0);
            }
            let rest = mono.strip_prefix('A').ok_or_else(|| format!("bad monomial `{mono}`"))?;
            if rest.is_empty() {
                Ok(1)
            } else {
                rest.strip_prefix('^')
                    .and_then(|x| x.parse::<i64>().ok())
                    .ok_or_else(|| format!("bad exponent in `{mono}`"))
            }
        })
        .map(|terms| {
            let mut p = LaurentPoly::zero();
            for (k, c) in terms {
                p.add_term(k, c);
            }
            p
        })
    }
}

/// Splits `c1*m1 + c2*m2 - ...` into `(key, coef)` pairs using `key_of` for monomials.
pub(crate) fn parse_terms<K>(
    s: &str,
    mut key_of: impl FnMut(&str) -> Result<K, String>,
) -> Result<Vec<(K, BigInt)>, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "0" {
        return Ok(vec![]);
    }
    let bytes = compact.as_bytes();
    let mut pieces = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            pieces.push(&compact[start..i]);
            start = i;
        }
    }
    pieces.push(&compact[start..]);
    let mut out = Vec::new();
    for piece in pieces {
        let (neg, body) = match piece.as_bytes().first() {
            Some(b'-') => (true, &piece[1..]),
            Some(b'+') => (false, &piece[1..]),
            _ => (false, piece),
        };
        if body.is_empty() {
            return Err(format!("empty term in `{s}`"));
        }
        let (coef, mono) = match body.find('*') {
            Some(i) => (
                body[..i].parse::<BigInt>().map_err(|e| format!("{e} in `{body}`"))?,
                &body[i + 1..],
            ),
            None => match body.parse::<BigInt>() {
                Ok(c) => (c, ""),
                Err(_) => (BigInt::one(), body),
            },
        };
        out.push((key_of(mono)?, if neg { -coef } else { coef }));
    }
    Ok(out)
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

/// Monomial in `A` and the curve variables `A_n`: `A^a * prod A_n^{k_n}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    /// Powers of the curve variables, keyed by `n`.
    pub vars: BTreeMap<u32, u32>,
    pub a_exp: i64,
}

/// Polynomial with integer coefficients in `A^{±1}` and commuting variables `A_0, A_1, A_2, ...`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::default(), BigInt::one());
        p
    }

    /// The single curve variable `A_n`.
    pub fn var(n: u32) -> Self {
        let mut m = Monomial::default();
        m.vars.insert(n, 1);
        let mut p = Self::zero();
        p.add_term(m, BigInt::one());
        p
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out.add_term(Monomial { vars: BTreeMap::new(), a_exp: e }, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Curve variables that occur with nonzero coefficient.
    pub fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().flat_map(|m| m.vars.keys().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Replaces `A_n` by `value(n)` for every `n` where `value` returns `Some`.
    pub fn substitute(&self, value: impl Fn(u32) -> Option<LaurentPoly>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial { vars: BTreeMap::new(), a_exp: m.a_exp };
            let mut factor = LaurentPoly::one();
            for (&n, &k) in &m.vars {
                match value(n) {
                    Some(v) => factor = &factor * &v.pow(k),
                    None => {
                        kept.vars.insert(n, k);
                    }
                }
            }
            for (e, fc) in factor.terms() {
                let mut mono = kept.clone();
                mono.a_exp += e;
                out.add_term(mono, c * fc);
            }
        }
        out
    }

    /// The pure Laurent part; `None` if any curve variable survives.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            if !m.vars.is_empty() {
                return None;
            }
            out.add_term(m.a_exp, c.clone());
        }
        Some(out)
    }

    /// Sets `A = 1`, keeping the curve variables.
    pub fn at_a_one(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial { vars: m.vars.clone(), a_exp: 0 }, c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Group by curve-variable part so the output reads `(A - A^-3)*A0^2 + ...`.
        let mut groups: BTreeMap<BTreeMap<u32, u32>, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry(m.vars.clone()).or_default().add_term(m.a_exp, c.clone());
        }
        if groups.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (vars, coef) in groups.iter().rev() {
            let var_text: Vec<String> = vars
                .iter()
                .map(|(n, k)| if *k == 1 { format!("A{n}") } else { format!("A{n}^{k}") })
                .collect();
            let var_text = var_text.join("*");
            let single = coef.terms().count() == 1;
            let text = if var_text.is_empty() {
                coef.to_string()
            } else if single {
                let (e, c) = coef.terms().next().unwrap();
                let mono = power_str("A", e);
                let body = if mono.is_empty() { var_text.clone() } else { format!("{mono}*{var_text}") };
                format_terms(std::iter::once((c.clone(), body)))
            } else {
                format!("({coef})*{var_text}")
            };
            parts.push(text);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                m.a_exp += m2.a_exp;
                for (n, k) in &m2.vars {
                    *m.vars.entry(*n).or_insert(0) += k;
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn display_round_trips() {
        for s in ["A^2 + 1 - A^-4", "A^7 - A^5 - 4*A^3 + 2*A + A^-1 - A^-3", "0", "-1", "-A^3"] {
            assert_eq!(lp(s).to_string(), s);
        }
    }

    #[test]
    fn loop_value_squared() {
        let d = LaurentPoly::loop_value();
        assert_eq!((&d * &d).to_string(), "A^4 + 2 + A^-4");
    }

    #[test]
    fn neg_a_cubed_powers() {
        assert_eq!(LaurentPoly::neg_a_cubed_pow(-2).to_string(), "A^-6");
        assert_eq!(LaurentPoly::neg_a_cubed_pow(1).to_string(), "-A^3");
    }

    #[test]
    fn exact_division() {
        let d = LaurentPoly::loop_value();
        let p = &d * &lp("A^3 - 2*A^-1");
        assert_eq!(p.div_exact(&d).unwrap(), lp("A^3 - 2*A^-1"));
        assert!(lp("A^2 + 1").div_exact(&d).is_none());
    }

    #[test]
    fn multipoly_substitution_and_display() {
        let a0 = MultiPoly::var(0);
        let a1 = MultiPoly::var(1);
        let p = &(&a1 * &MultiPoly::from_laurent(&lp("-A^-5")))
            + &(&(&a0 * &a0) * &MultiPoly::from_laurent(&lp("A - A^-3")));
        assert_eq!(p.to_string(), "-A^-5*A1 + (A - A^-3)*A0^2");
        let s = p.substitute(|n| (n == 1).then(LaurentPoly::loop_value));
        assert_eq!(s.variables(), vec![0]);
    }
}
