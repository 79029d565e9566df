//! Sparse exact arithmetic in the rational group ring `Q[H]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, integer, ratio, Rational};
use crate::group::{AbelianGroup, GroupElement, Order};

/// The support of a group ring element: its "basic" group elements.
pub type BasicSet = BTreeSet<GroupElement>;

/// A finitely supported function `H -> Q`, i.e. `sum a_h h`.
///
/// Zero coefficients are never stored, so two elements are equal exactly
/// when their maps are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    group: Arc<AbelianGroup>,
    terms: BTreeMap<GroupElement, Rational>,
}

impl GroupRingElement {
    pub fn zero(group: Arc<AbelianGroup>) -> Self {
        GroupRingElement { group, terms: BTreeMap::new() }
    }

    pub fn one(group: Arc<AbelianGroup>) -> Self {
        let e = group.identity();
        Self::monomial(group, e, Rational::one())
    }

    pub fn monomial(group: Arc<AbelianGroup>, g: GroupElement, coeff: Rational) -> Self {
        Self::from_terms(group, [(g, coeff)])
    }

    /// Sums the given terms; repeated elements accumulate.
    pub fn from_terms(
        group: Arc<AbelianGroup>,
        terms: impl IntoIterator<Item = (GroupElement, Rational)>,
    ) -> Self {
        let mut out = GroupRingElement::zero(group);
        for (g, c) in terms {
            debug_assert!(out.group.contains(&g));
            out.add_term(g, c);
        }
        out
    }

    fn add_term(&mut self, g: GroupElement, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient `a_1` of the neutral element.
    pub fn coefficient_at_identity(&self) -> Rational {
        self.coefficient(&self.group.identity())
    }

    /// Sum of all coefficients.
    pub fn augmentation(&self) -> Rational {
        self.terms.values().sum()
    }

    pub fn basic_set(&self) -> BasicSet {
        self.terms.keys().cloned().collect()
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.group.clone());
        }
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, a)| (g.clone(), a * c)).collect(),
        }
    }

    /// Convolution: `(ab)_g = sum_h a_h b_{h^-1 g}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = Self::zero(self.group.clone());
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(self.group.mul(g, h), a * b);
            }
        }
        Ok(out)
    }

    /// Multiplication by the group element `h`.
    pub fn shift(&self, h: &GroupElement) -> Self {
        GroupRingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, a)| (self.group.mul(g, h), a.clone())).collect(),
        }
    }

    /// `(self * other)_1` without forming the full product.
    pub fn identity_coefficient_of_product(&self, other: &Self) -> Result<Rational> {
        self.check_group(other)?;
        Ok(self
            .terms
            .iter()
            .map(|(g, a)| a * other.coefficient(&self.group.inv(g)))
            .sum())
    }

    /// True when every coefficient lies in `(1/d) Z`.
    pub fn has_coefficients_in(&self, d: u64) -> bool {
        let d = BigInt::from(d);
        self.terms.values().all(|c| (&d % c.denom()).is_zero())
    }
}

/// `alpha_v = (1 + 2v + ... + p v^(p-1))/p - ((p+1)/2) (1 + v + ... + v^(p-1))/p`
/// where `p` is the order of `v`.
pub fn alpha(group: &Arc<AbelianGroup>, v: &GroupElement) -> Result<GroupRingElement> {
    let p = match group.element_order(v) {
        Order::Finite(p) => p as i64,
        Order::Infinite => return Err(Error::InfiniteOrder(group.render_element(v))),
    };
    let half = ratio(p + 1, 2);
    let mut weighted = Vec::with_capacity(p as usize);
    let mut plain = Vec::with_capacity(p as usize);
    let mut power = group.identity();
    for i in 0..p {
        weighted.push((power.clone(), ratio(i + 1, p)));
        plain.push((power.clone(), ratio(1, p)));
        power = group.mul(&power, v);
    }
    let weighted = GroupRingElement::from_terms(group.clone(), weighted);
    let plain = GroupRingElement::from_terms(group.clone(), plain);
    weighted.sub(&plain.scale(&half))
}

/// `sum_{g in S} g`.
pub fn subgroup_sum<'a>(
    group: &Arc<AbelianGroup>,
    elements: impl IntoIterator<Item = &'a GroupElement>,
) -> GroupRingElement {
    GroupRingElement::from_terms(group.clone(), elements.into_iter().map(|g| (g.clone(), Rational::one())))
}

/// `1 + u + ... + u^(p-1)` for `u` of finite order `p`.
pub fn cyclic_sum(group: &Arc<AbelianGroup>, u: &GroupElement) -> Result<GroupRingElement> {
    let p = group
        .element_order(u)
        .finite()
        .ok_or_else(|| Error::InfiniteOrder(group.render_element(u)))?;
    let powers: Vec<GroupElement> = (0..p as i64).map(|i| group.pow(u, i)).collect();
    Ok(subgroup_sum(group, &powers))
}

/// `h - 1` in `Q[H]`.
pub fn minus_one(group: &Arc<AbelianGroup>, h: &GroupElement) -> GroupRingElement {
    GroupRingElement::from_terms(
        group.clone(),
        [(h.clone(), Rational::one()), (group.identity(), -Rational::one())],
    )
}

impl fmt::Display for GroupRingElement {
    /// Ascending monomials over a common denominator, e.g.
    /// `(-2 - t + t^3 + 2*t^4)/5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let den = common_denominator(self.terms.values());
        let scale = Rational::from_integer(den.clone());
        let mut body = String::new();
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let n = (c * &scale).to_integer();
            let mono = self.group.render_element(g);
            let mag = n.abs();
            let term = match (mono.as_str(), mag.is_one()) {
                ("1", _) => mag.to_string(),
                (m, true) => m.to_string(),
                (m, false) => format!("{mag}*{m}"),
            };
            match (i, n.is_negative()) {
                (0, false) => body.push_str(&term),
                (0, true) => body.push_str(&format!("-{term}")),
                (_, false) => body.push_str(&format!(" + {term}")),
                (_, true) => body.push_str(&format!(" - {term}")),
            }
        }
        if den.is_one() {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

/// Builds a cyclic-group element from its coefficient list `c_0 + c_1 t + ...`
/// scaled by `1/den`; handy for tests and examples.
pub fn cyclic_element(group: &Arc<AbelianGroup>, coeffs: &[i64], den: i64) -> GroupRingElement {
    let t = group.generator(0);
    GroupRingElement::from_terms(
        group.clone(),
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (group.pow(&t, i as i64), integer(c) / integer(den))),
    )
}
