//! Exact Laurent polynomials with integer coefficients.
//!
//! [`MultiPoly`] is a polynomial in `A^{±1}`, the arrow variables `K_n`
//! (`n >= 1`) and at most one long-segment variable `Λ_w` per monomial, where
//! `w` is a reduced cusp word over `{L, R}`. [`Laurent`] is a one-variable
//! Laurent polynomial used for `q`- and `t`-forms.
//!
//! Text form: `-A^3 + 2*A^-1*K1^2 - L[LR]`. Terms are listed in ascending
//! monomial order, which is lexicographic on `(a_exp, k_exps, lambda_word)`
//! with `k_exps` sorted by index and an absent word ordered first.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub a_exp: i64,
    /// `(n, e)` pairs for `K_n^e`, sorted by `n`, with `e > 0`.
    k_exps: Vec<(u32, u32)>,
    lambda: Option<String>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn a(exp: i64) -> Self {
        Monomial { a_exp: exp, ..Monomial::default() }
    }

    pub fn k(n: u32) -> Self {
        assert!(n >= 1, "arrow variables start at K1");
        Monomial { k_exps: vec![(n, 1)], ..Monomial::default() }
    }

    /// `Λ_w`; the empty word is the unit.
    pub fn lambda(word: &str) -> Self {
        debug_assert!(word.bytes().all(|b| b == b'L' || b == b'R'));
        debug_assert!(word.as_bytes().windows(2).all(|w| w[0] != w[1]), "Λ word must be reduced");
        Monomial {
            lambda: if word.is_empty() { None } else { Some(word.to_string()) },
            ..Monomial::default()
        }
    }

    pub fn k_exps(&self) -> &[(u32, u32)] {
        &self.k_exps
    }

    pub fn lambda_word(&self) -> Option<&str> {
        self.lambda.as_deref()
    }

    pub fn is_one(&self) -> bool {
        self.a_exp == 0 && self.k_exps.is_empty() && self.lambda.is_none()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let lambda = match (&self.lambda, &other.lambda) {
            (Some(_), Some(_)) => return Err(Error::DoubleLongSegment),
            (Some(w), None) | (None, Some(w)) => Some(w.clone()),
            (None, None) => None,
        };
        let mut k = self.k_exps.clone();
        for &(n, e) in &other.k_exps {
            match k.binary_search_by_key(&n, |&(m, _)| m) {
                Ok(i) => k[i].1 += e,
                Err(i) => k.insert(i, (n, e)),
            }
        }
        Ok(Monomial { a_exp: self.a_exp + other.a_exp, k_exps: k, lambda })
    }

    fn write_factors(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            Ok(())
        };
        if self.a_exp != 0 {
            sep(f)?;
            if self.a_exp == 1 {
                f.write_str("A")?;
            } else {
                write!(f, "A^{}", self.a_exp)?;
            }
        }
        for &(n, e) in &self.k_exps {
            sep(f)?;
            if e == 1 {
                write!(f, "K{n}")?;
            } else {
                write!(f, "K{n}^{e}")?;
            }
        }
        if let Some(w) = &self.lambda {
            sep(f)?;
            write!(f, "L[{w}]")?;
        }
        Ok(())
    }
}

/// Integer polynomial in `A^{±1}`, `K_n` and `Λ_w` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(m, c.into());
        p
    }

    /// `A^e`.
    pub fn a_pow(e: i64) -> Self {
        MultiPoly::term(1, Monomial::a(e))
    }

    /// `d = -A^2 - A^-2`.
    pub fn d() -> Self {
        MultiPoly::term(-1, Monomial::a(2)) + MultiPoly::term(-1, Monomial::a(-2))
    }

    /// `d^e`, computed by the binomial expansion of `(-1)^e (A^2 + A^-2)^e`.
    pub fn pow_d(e: u32) -> Self {
        let mut p = MultiPoly::zero();
        let mut binom = BigInt::one();
        let sign = if e % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for i in 0..=e {
            // A^{2(e-i)} A^{-2i}
            p.add_term(Monomial::a(2 * (e as i64) - 4 * i as i64), &sign * &binom);
            binom = binom * BigInt::from(e - i) / BigInt::from(i + 1);
        }
        p
    }

    /// `(-A^3)^e`.
    pub fn neg_a3_pow(e: i64) -> Self {
        let c = if e.rem_euclid(2) == 0 { 1 } else { -1 };
        MultiPoly::term(c, Monomial::a(3 * e))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    /// True when only powers of `A` occur.
    pub fn is_a_only(&self) -> bool {
        self.terms.keys().all(|m| m.k_exps.is_empty() && m.lambda.is_none())
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplication by `A^e`.
    pub fn shift_a(&self, e: i64) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial { a_exp: m.a_exp + e, ..m.clone() }, c.clone()))
                .collect(),
        }
    }

    /// Largest `n` with `K_n` present, or 0.
    pub fn max_k_index(&self) -> u32 {
        self.terms.keys().flat_map(|m| m.k_exps.iter().map(|&(n, _)| n)).max().unwrap_or(0)
    }

    /// True when some monomial carries an arrow variable or a long-segment word.
    pub fn has_graphical_terms(&self) -> bool {
        self.terms.keys().any(|m| !m.k_exps.is_empty() || m.lambda.is_some())
    }

    pub fn substitute(&self, s: &Substitution) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = MultiPoly::constant(c.clone());
            match &s.a {
                Some(v) => acc = acc.mul(&power(v, m.a_exp)?)?,
                None => acc = acc.mul(&MultiPoly::a_pow(m.a_exp))?,
            }
            for &(n, e) in &m.k_exps {
                let factor = match s.k_value(n) {
                    Some(v) => v.clone(),
                    None => MultiPoly::term(1, Monomial::k(n)),
                };
                acc = acc.mul(&power(&factor, e as i64)?)?;
            }
            if let Some(w) = &m.lambda {
                let factor = match s.lambda_value(w) {
                    Some(v) => v.clone(),
                    None => MultiPoly::term(1, Monomial::lambda(w)),
                };
                acc = acc.mul(&factor)?;
            }
            out = out + acc;
        }
        Ok(out)
    }

    /// The constant value, failing if any variable survives.
    pub fn to_constant(&self) -> Result<BigInt> {
        for m in self.terms.keys() {
            if m.a_exp != 0 {
                return Err(Error::IncompleteAssignment("A".into()));
            }
            if let Some(&(n, _)) = m.k_exps.first() {
                return Err(Error::IncompleteAssignment(format!("K{n}")));
            }
            if let Some(w) = &m.lambda {
                return Err(Error::IncompleteAssignment(format!("L[{w}]")));
            }
        }
        Ok(self.coefficient(&Monomial::one()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let k: serde_json::Map<String, Value> =
                        m.k_exps.iter().map(|&(n, e)| (n.to_string(), json!(e))).collect();
                    json!({
                        "coeff": bigint_json(c),
                        "a": m.a_exp,
                        "k": k,
                        "lambda": m.lambda.clone().unwrap_or_default(),
                    })
                })
                .collect(),
        )
    }
}

pub(crate) fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn power(p: &MultiPoly, e: i64) -> Result<MultiPoly> {
    let base = if e < 0 { invert_unit(p)? } else { p.clone() };
    let mut acc = MultiPoly::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base)?;
    }
    Ok(acc)
}

fn invert_unit(p: &MultiPoly) -> Result<MultiPoly> {
    if p.terms.len() == 1 {
        let (m, c) = p.terms.iter().next().unwrap();
        if m.k_exps.is_empty() && m.lambda.is_none() && c.abs().is_one() {
            return Ok(MultiPoly::term(c.clone(), Monomial::a(-m.a_exp)));
        }
    }
    Err(Error::IncompleteAssignment(format!("cannot invert `{p}` for a negative power of A")))
}

/// Values to substitute for `A`, `K_n` and `Λ_w`; unassigned variables stay.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    a: Option<MultiPoly>,
    all_k: Option<MultiPoly>,
    k: BTreeMap<u32, MultiPoly>,
    all_lambda: Option<MultiPoly>,
    lambda: BTreeMap<String, MultiPoly>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    /// Every `K_n` and every `Λ_w` set to 1.
    pub fn graphical_to_one() -> Self {
        Substitution::new().all_k(MultiPoly::one()).all_lambda(MultiPoly::one())
    }

    pub fn a(mut self, v: MultiPoly) -> Self {
        self.a = Some(v);
        self
    }

    pub fn k(mut self, n: u32, v: MultiPoly) -> Self {
        self.k.insert(n, v);
        self
    }

    pub fn all_k(mut self, v: MultiPoly) -> Self {
        self.all_k = Some(v);
        self
    }

    pub fn lambda(mut self, w: &str, v: MultiPoly) -> Self {
        self.lambda.insert(w.to_string(), v);
        self
    }

    pub fn all_lambda(mut self, v: MultiPoly) -> Self {
        self.all_lambda = Some(v);
        self
    }

    fn k_value(&self, n: u32) -> Option<&MultiPoly> {
        self.k.get(&n).or(self.all_k.as_ref())
    }

    fn lambda_value(&self, w: &str) -> Option<&MultiPoly> {
        self.lambda.get(w).or(self.all_lambda.as_ref())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self + (-rhs)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

fn write_signed_terms<'a, I, F>(f: &mut fmt::Formatter<'_>, terms: I, mut write_vars: F) -> fmt::Result
where
    I: Iterator<Item = (&'a BigInt, bool)>,
    F: FnMut(&mut fmt::Formatter<'_>, usize) -> fmt::Result,
{
    let mut any = false;
    for (i, (c, is_unit)) in terms.enumerate() {
        let neg = c.is_negative();
        if any {
            f.write_str(if neg { " - " } else { " + " })?;
        } else if neg {
            f.write_str("-")?;
        }
        any = true;
        let abs = c.abs();
        if is_unit {
            write!(f, "{abs}")?;
        } else {
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write_vars(f, i)?;
        }
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monos: Vec<&Monomial> = self.terms.keys().collect();
        write_signed_terms(f, self.terms.iter().map(|(m, c)| (c, m.is_one())), |f, i| monos[i].write_factors(f))
    }
}

impl std::str::FromStr for MultiPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (negative, term) in split_terms(s)? {
            let mut coeff = BigInt::one();
            let mut mono = Monomial::one();
            for factor in term.split('*') {
                let factor = factor.trim();
                let bad = || Error::PolyParse(format!("bad factor `{factor}`"));
                if factor.bytes().all(|b| b.is_ascii_digit()) && !factor.is_empty() {
                    coeff *= factor.parse::<BigInt>().map_err(|_| bad())?;
                } else if let Some(rest) = factor.strip_prefix('A') {
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
                    };
                    mono = mono.mul(&Monomial::a(e))?;
                } else if let Some(rest) = factor.strip_prefix('K') {
                    let (n, e) = match rest.split_once('^') {
                        Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad())?),
                        None => (rest, 1),
                    };
                    let n: u32 = n.parse().map_err(|_| bad())?;
                    if n == 0 || e == 0 {
                        return Err(bad());
                    }
                    for _ in 0..e {
                        mono = mono.mul(&Monomial::k(n))?;
                    }
                } else if let Some(rest) = factor.strip_prefix("L[") {
                    let w = rest.strip_suffix(']').ok_or_else(bad)?;
                    let ok = !w.is_empty()
                        && w.bytes().all(|b| b == b'L' || b == b'R')
                        && w.as_bytes().windows(2).all(|p| p[0] != p[1]);
                    if !ok {
                        return Err(bad());
                    }
                    mono = mono.mul(&Monomial::lambda(w))?;
                } else {
                    return Err(bad());
                }
            }
            out.add_term(mono, if negative { -coeff } else { coeff });
        }
        Ok(out)
    }
}

/// Splits `"-A + 2*K1 - 3"` into signed term bodies.
fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let (mut negative, mut rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let mut out = Vec::new();
    loop {
        let plus = rest.find(" + ");
        let minus = rest.find(" - ");
        let next = match (plus, minus) {
            (Some(p), Some(m)) => Some(p.min(m)),
            (p, m) => p.or(m),
        };
        match next {
            Some(i) => {
                let body = rest[..i].trim();
                if body.is_empty() {
                    return Err(Error::PolyParse(format!("empty term in `{s}`")));
                }
                out.push((negative, body));
                negative = &rest[i..i + 3] == " - ";
                rest = &rest[i + 3..];
            }
            None => {
                let body = rest.trim();
                if body.is_empty() {
                    return Err(Error::PolyParse(format!("empty term in `{s}`")));
                }
                out.push((negative, body));
                return Ok(out);
            }
        }
    }
}

/// Integer Laurent polynomial in one named variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    coeffs: BTreeMap<i64, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut l = Laurent::zero();
        l.add_term(e, c.into());
        l
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coefficient(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn display(&self, var: &str) -> String {
        struct D<'a>(&'a Laurent, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let exps: Vec<i64> = self.0.coeffs.keys().copied().collect();
                write_signed_terms(f, self.0.coeffs.iter().map(|(&e, c)| (c, e == 0)), |f, i| match exps[i] {
                    1 => f.write_str(self.1),
                    e => write!(f, "{}^{}", self.1, e),
                })
            }
        }
        D(self, var).to_string()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|(e, c)| json!({"exp": e, "coeff": bigint_json(c)})).collect())
    }
}

impl Add for Laurent {
    type Output = Laurent;

    fn add(mut self, rhs: Laurent) -> Laurent {
        for (e, c) in rhs.coeffs {
            self.add_term(e, c);
        }
        self
    }
}
