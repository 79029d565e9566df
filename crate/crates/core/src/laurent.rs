//! Integer Laurent polynomials in one and two variables.
//!
//! Text syntax: comma-separated `exponent:coefficient` pairs
//! (`"-1:1,0:-1,1:1"` is `t^-1 - 1 + t`), and `e1,e2:c` triples for two
//! variables (`"0,0:1,1,-1:2"`; triples may also be separated by `;`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::group::{AbelianGroup, GroupElement};
use crate::ring::GroupRingElement;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly1 {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_terms([(0, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coefficient(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max exponent - min exponent`; `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        let lo = self.terms.keys().next()?;
        let hi = self.terms.keys().next_back()?;
        Some(hi - lo)
    }

    /// Value at `t = 1`.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `p(t^-1)`.
    pub fn reflect(&self) -> Self {
        LaurentPoly1 { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e, a) in &self.terms {
            for (&f, b) in &other.terms {
                out.add_term(e + f, a * b);
            }
        }
        out
    }

    /// Exact quotient by `t - 1`, or `None` if the division leaves a
    /// remainder (equivalently, if `p(1) != 0`).
    pub fn div_by_t_minus_one(&self) -> Option<Self> {
        let (&lo, _) = self.terms.iter().next()?;
        let (&hi, _) = self.terms.iter().next_back().unwrap();
        // p = (t - 1) q  with  q_{k-1} = p_k + q_k, running from the top down
        let mut q = Self::zero();
        let mut carry = BigInt::zero();
        for k in ((lo + 1)..=hi).rev() {
            carry += self.coefficient(k);
            q.add_term(k - 1, carry.clone());
        }
        // remainder vanishes iff p_lo = -q_lo
        if self.coefficient(lo) + carry == BigInt::zero() {
            Some(q)
        } else {
            None
        }
    }

    /// `p(g)` in `Q[H]`, exponents reduced in the group.
    pub fn evaluate(&self, group: &Arc<AbelianGroup>, g: &GroupElement) -> GroupRingElement {
        GroupRingElement::from_terms(
            group.clone(),
            self.terms.iter().map(|(&e, c)| (group.pow(g, e), Rational::from_integer(c.clone()))),
        )
    }

    /// The `exponent:coefficient` text form, ascending exponents.
    pub fn to_spec(&self) -> String {
        if self.terms.is_empty() {
            return "0:0".into();
        }
        self.terms.iter().map(|(e, c)| format!("{e}:{c}")).collect::<Vec<_>>().join(",")
    }
}

impl FromStr for LaurentPoly1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Self::zero();
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        for pair in s.split(',') {
            let (e, c) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected exponent:coefficient, got {pair:?}")))?;
            p.add_term(parse_int(e)?, parse_big(c)?);
        }
        Ok(p)
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))
}

fn parse_big(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer coefficient {s:?}")))
}

fn write_poly<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a BigInt)>,
) -> fmt::Result {
    let mut first = true;
    for (mono, c) in terms {
        let mag = c.abs();
        let body = match (mono.is_empty(), mag.is_one()) {
            (true, _) => mag.to_string(),
            (false, true) => mono,
            (false, false) => format!("{mag}*{mono}"),
        };
        match (first, c.is_negative()) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn power(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        e => format!("{var}^{e}"),
    }
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.terms.iter().map(|(&e, c)| (power("t", e), c)))
    }
}

/// Integer Laurent polynomial in `t1, t2`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_terms([((0, 0), 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, e: (i64, i64), c: BigInt) {
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `f(g1, g2)` in `Q[H]`.
    pub fn evaluate(
        &self,
        group: &Arc<AbelianGroup>,
        g1: &GroupElement,
        g2: &GroupElement,
    ) -> GroupRingElement {
        GroupRingElement::from_terms(
            group.clone(),
            self.terms.iter().map(|(&(a, b), c)| {
                let g = group.mul(&group.pow(g1, a), &group.pow(g2, b));
                (g, Rational::from_integer(c.clone()))
            }),
        )
    }

    pub fn to_spec(&self) -> String {
        if self.terms.is_empty() {
            return "0,0:0".into();
        }
        self.terms
            .iter()
            .map(|((a, b), c)| format!("{a},{b}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl FromStr for LaurentPoly2 {
    type Err = Error;

    /// Tokens are split on `,` and `;`; a token without `:` is a first
    /// exponent and the next token must be `e2:c`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = Self::zero();
        let mut tokens = s.split([',', ';']);
        while let Some(first) = tokens.next() {
            if first.contains(':') {
                return Err(Error::Parse(format!("expected e1,e2:c, got {first:?}")));
            }
            let rest = tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("dangling exponent {first:?}")))?;
            let (e2, c) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected e2:c, got {rest:?}")))?;
            p.add_term((parse_int(first)?, parse_int(e2)?), parse_big(c)?);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(
            f,
            self.terms.iter().map(|(&(a, b), c)| {
                let mono = [power("t1", a), power("t2", b)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect::<Vec<_>>()
                    .join("*");
                (mono, c)
            }),
        )
    }
}
