//! Span lower bounds and genus upper bounds for `Theta`, assembled into
//! per-class reports.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{circular_span, ratio, QmodZ, Rational};
use crate::group::{AbelianGroup, GroupElement, LinkingForm, DEFAULT_ENUMERATION_CAP};
use crate::laurent::{LaurentPoly1, LaurentPoly2};
use crate::ring::{minus_one, BasicSet, GroupRingElement};
use crate::torsion::{
    beta_expansion, correction_term, k_residue, knot_surgery_torsion, knot_surgery_torsion_with_cap, quadratic_function,
    validate_alexander, KResidue, Parity, QhsData,
};

/// Values `h . x` in `Q/Z` of a class `x` against group elements `h`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairingAssignment {
    values: BTreeMap<GroupElement, QmodZ>,
}

impl PairingAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, h: GroupElement, value: QmodZ) {
        self.values.insert(h, value);
    }

    pub fn get(&self, h: &GroupElement) -> Option<&QmodZ> {
        self.values.get(h)
    }

    /// `h -> L(h, u)` on the given elements; non-torsion elements are skipped.
    pub fn from_linking<'a>(
        form: &LinkingForm,
        u: &GroupElement,
        elements: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Self {
        elements
            .into_iter()
            .filter(|h| h.is_torsion())
            .map(|h| (h.clone(), form.pair(h, u)))
            .collect()
    }
}

impl FromIterator<(GroupElement, QmodZ)> for PairingAssignment {
    fn from_iter<I: IntoIterator<Item = (GroupElement, QmodZ)>>(iter: I) -> Self {
        PairingAssignment { values: iter.into_iter().collect() }
    }
}

/// `spn_u(a)`: span of `{ L(h, u) : h basic for a, h torsion }`.
pub fn spn_u(form: &LinkingForm, u: &GroupElement, a: &GroupRingElement) -> Result<Rational> {
    if !u.is_torsion() {
        return Err(Error::InfiniteOrder(form.group().render_element(u)));
    }
    let values: Vec<QmodZ> = a
        .basic_set()
        .iter()
        .filter(|h| h.is_torsion())
        .map(|h| form.pair(h, u))
        .collect();
    Ok(circular_span(&values))
}

/// `spn_x(a)`: span of the assigned values over every basic element of `a`.
pub fn spn_x(a: &GroupRingElement, pairing: &PairingAssignment) -> Result<Rational> {
    let values = a
        .basic_set()
        .iter()
        .map(|h| {
            pairing
                .get(h)
                .cloned()
                .ok_or_else(|| Error::IncompletePairing(a.group().render_element(h)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(circular_span(&values))
}

/// `spn_x(prod_i (h_i - 1) * tau)`. With a single factor `h = u` this is the
/// basic torsion bound; more factors give the link-norm variant.
pub fn product_span_bound(
    tau: &GroupRingElement,
    classes: &[GroupElement],
    pairing: &PairingAssignment,
) -> Result<Rational> {
    let group = tau.group();
    let product = classes
        .iter()
        .try_fold(tau.clone(), |acc, h| acc.mul(&minus_one(group, h)))?;
    spn_x(&product, pairing)
}

/// `spn_u(a_e(u))`, the lower bound for `Theta(u)` on a rational homology
/// sphere. The identity class gets 0.
pub fn theta_lower_bound(data: &QhsData, u: &GroupElement) -> Result<Rational> {
    if u.is_identity() {
        return Ok(Rational::zero());
    }
    let a = correction_term(data, u)?;
    spn_u(data.linking_form(), u, &a)
}

/// Lower bound for the meridian class after `p`-surgery on a knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotSurgeryBound {
    pub lower: Rational,
    pub beta: LaurentPoly1,
    /// `(spn(delta) - 1)/p`, present when `p >= 2 spn(beta)`.
    pub shortcut: Option<Rational>,
}

pub fn knot_surgery_lower_bound(p: i64, delta: &LaurentPoly1) -> Result<KnotSurgeryBound> {
    knot_bound(&knot_surgery_torsion(p, delta)?, p, delta)
}

fn knot_bound(data: &QhsData, p: i64, delta: &LaurentPoly1) -> Result<KnotSurgeryBound> {
    let u = data.group().generator(0);
    let beta = beta_expansion(delta)?;
    let beta_u = beta.evaluate(data.group(), &u);
    let a = correction_term(data, &u)?;
    if a != beta_u {
        return Err(Error::Consistency(format!("a_e(u) = {a} but beta(u) = {beta_u}")));
    }
    let lower = spn_u(data.linking_form(), &u, &a)?;
    let shortcut = match beta.span() {
        Some(s) if p >= 2 * s => {
            let spn_delta = delta.span().expect("delta is nonzero");
            Some(ratio(spn_delta - 1, p))
        }
        _ => None,
    };
    if let Some(s) = &shortcut {
        if *s != lower {
            return Err(Error::Consistency(format!("pipeline gives {lower}, closed form gives {s}")));
        }
    }
    Ok(KnotSurgeryBound { lower, beta, shortcut })
}

/// `Theta(u) <= (2g - 1)/p` for a knot of genus `g >= 1`; 0 for the unknot.
pub fn knot_surgery_upper_bound(p: i64, genus: u64) -> Result<Rational> {
    if p < 2 {
        return Err(Error::InvalidFraming(p));
    }
    if genus == 0 {
        return Ok(Rational::zero());
    }
    Ok(ratio(2 * genus as i64 - 1, p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Lower and upper bound coincide, so `Theta(u)` is known exactly.
    Equality(Rational),
    BoundsOnly { lower: Rational, upper: Rational },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equality(v) => write!(f, "equality at {v}"),
            Verdict::BoundsOnly { lower, upper } => write!(f, "bounds only ({lower}, {upper})"),
        }
    }
}

/// Rejects a genus that the Alexander polynomial already rules out
/// (`spn(delta) <= 2g` for every knot).
fn validate_genus(delta: &LaurentPoly1, genus: u64) -> Result<()> {
    let spn = delta.span().unwrap_or(0);
    if spn as u64 > 2 * genus {
        return Err(Error::InvalidGenus { genus, span: spn });
    }
    Ok(())
}

/// Compares the span lower bound with the genus upper bound. They must meet
/// when `spn(delta) = 2g > 0` and `p >= 4g - 2`.
pub fn fibred_equality_check(p: i64, delta: &LaurentPoly1, genus: u64) -> Result<Verdict> {
    validate_alexander(delta)?;
    validate_genus(delta, genus)?;
    let lower = knot_surgery_lower_bound(p, delta)?.lower;
    verdict(p, delta, genus, lower)
}

fn verdict(p: i64, delta: &LaurentPoly1, genus: u64, lower: Rational) -> Result<Verdict> {
    let upper = knot_surgery_upper_bound(p, genus)?;
    if lower > upper {
        return Err(Error::Consistency(format!("lower bound {lower} exceeds upper bound {upper}")));
    }
    let g = genus as i64;
    let fibred_regime = g > 0 && delta.span() == Some(2 * g) && p >= 4 * g - 2;
    if fibred_regime && lower != upper {
        return Err(Error::Consistency(format!(
            "span(delta) = 2g and p >= 4g - 2, yet bounds differ: {lower} < {upper}"
        )));
    }
    Ok(if fibred_regime { Verdict::Equality(lower) } else { Verdict::BoundsOnly { lower, upper } })
}

/// Surgery on a two-component link with linking number 0, framings `p` and
/// 0: `H = Z/p u1 + Z u2` with `L(u1^a, u1^b) = ab/p`.
#[derive(Clone, Debug)]
pub struct LinkSurgery {
    p: i64,
    group: Arc<AbelianGroup>,
    u1: GroupElement,
    u2: GroupElement,
    linking: LinkingForm,
}

impl LinkSurgery {
    pub fn new(p: i64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidFraming(p));
        }
        let n = p.unsigned_abs();
        let (group, matrix) = if n == 1 {
            (AbelianGroup::with_names(vec![], 1, vec!["u2".into()])?, vec![])
        } else {
            (
                AbelianGroup::with_names(vec![n], 1, vec!["u1".into(), "u2".into()])?,
                vec![vec![QmodZ::new(ratio(1, p))]],
            )
        };
        let group = Arc::new(group);
        let (u1, u2) = if n == 1 {
            (group.identity(), group.generator(0))
        } else {
            (group.generator(0), group.generator(1))
        };
        let linking = LinkingForm::new(group.clone(), matrix)?;
        Ok(LinkSurgery { p, group, u1, u2, linking })
    }

    pub fn framing(&self) -> i64 {
        self.p
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn linking_form(&self) -> &LinkingForm {
        &self.linking
    }

    /// `u1^k`.
    pub fn class(&self, k: i64) -> GroupElement {
        self.group.pow(&self.u1, k)
    }

    /// `(u - 1) f(u1, u2)`; the `Sigma_H` part of the torsion is killed by `u - 1`.
    pub fn bound_element(&self, f: &LaurentPoly2, u: &GroupElement) -> Result<GroupRingElement> {
        if !u.is_torsion() {
            return Err(Error::InfiniteOrder(self.group.render_element(u)));
        }
        minus_one(&self.group, u).mul(&f.evaluate(&self.group, &self.u1, &self.u2))
    }

    pub fn lower_bound(&self, f: &LaurentPoly2, u: &GroupElement) -> Result<Rational> {
        let a = self.bound_element(f, u)?;
        spn_u(&self.linking, u, &a)
    }
}

pub fn link_surgery_lower_bound(p: i64, f: &LaurentPoly2, u: &GroupElement) -> Result<Rational> {
    LinkSurgery::new(p)?.lower_bound(f, u)
}

/// Everything known about one torsion class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub class: GroupElement,
    pub class_name: String,
    pub order: u64,
    /// `q_e(u)`; absent when the manifold is not a rational homology sphere.
    pub q_value: Option<QmodZ>,
    pub k_residue: Option<KResidue>,
    /// The element whose basic set is spanned: `a_e(u)`, or `(u - 1) f` for links.
    pub correction: GroupRingElement,
    pub lower_bound: Rational,
    pub upper_bound: Option<Rational>,
    pub verdict: Option<Verdict>,
    pub notes: Vec<String>,
}

impl ClassReport {
    pub fn parity(&self) -> Option<Parity> {
        self.k_residue.map(|k| k.parity())
    }

    pub fn correction_support(&self) -> BasicSet {
        self.correction.basic_set()
    }

    /// `0 <= lower < 1`, and `lower <= upper` when an upper bound exists.
    pub fn check(&self) -> Result<()> {
        if self.lower_bound < Rational::zero() || self.lower_bound >= Rational::one() {
            return Err(Error::Consistency(format!(
                "lower bound {} for {} outside [0, 1)",
                self.lower_bound, self.class_name
            )));
        }
        if let Some(upper) = &self.upper_bound {
            if &self.lower_bound > upper {
                return Err(Error::Consistency(format!(
                    "lower bound {} exceeds upper bound {upper} for {}",
                    self.lower_bound, self.class_name
                )));
            }
        }
        Ok(())
    }
}

pub fn class_report(data: &QhsData, u: &GroupElement) -> Result<ClassReport> {
    let group = data.group();
    let order = group
        .element_order(u)
        .finite()
        .ok_or_else(|| Error::InfiniteOrder(group.render_element(u)))?;
    let q_value = quadratic_function(data, u);
    let k = k_residue(data, u)?;
    let mut notes = Vec::new();
    let (correction, lower_bound) = if u.is_identity() {
        notes.push("identity class: Theta = 0".to_string());
        (GroupRingElement::zero(group.clone()), Rational::zero())
    } else {
        let a = correction_term(data, u)?;
        let lower = spn_u(data.linking_form(), u, &a)?;
        (a, lower)
    };
    let report = ClassReport {
        class: u.clone(),
        class_name: group.render_element(u),
        order,
        q_value: Some(q_value),
        k_residue: Some(k),
        correction,
        lower_bound,
        upper_bound: None,
        verdict: None,
        notes,
    };
    report.check()?;
    Ok(report)
}

/// Reports for every torsion class, in enumeration order. Checks that `u`
/// and `u^-1` receive the same bound.
pub fn class_reports(data: &QhsData) -> Result<Vec<ClassReport>> {
    let classes = data.group().enumerate_torsion(data.enumeration_cap())?;
    let reports = classes
        .iter()
        .map(|u| class_report(data, u))
        .collect::<Result<Vec<_>>>()?;
    let by_class: BTreeMap<&GroupElement, &Rational> =
        reports.iter().map(|r| (&r.class, &r.lower_bound)).collect();
    for r in &reports {
        let inverse = data.group().inv(&r.class);
        if by_class[&inverse] != &r.lower_bound {
            return Err(Error::Consistency(format!(
                "bounds for {} and its inverse differ",
                r.class_name
            )));
        }
    }
    Ok(reports)
}

/// Report for the meridian class of `p`-surgery on a knot, with the genus
/// upper bound and fibred verdict when the genus is known.
pub fn knot_report(p: i64, delta: &LaurentPoly1, genus: Option<u64>) -> Result<(QhsData, ClassReport)> {
    knot_report_with_cap(p, delta, genus, DEFAULT_ENUMERATION_CAP)
}

pub fn knot_report_with_cap(
    p: i64,
    delta: &LaurentPoly1,
    genus: Option<u64>,
    cap: u64,
) -> Result<(QhsData, ClassReport)> {
    let data = knot_surgery_torsion_with_cap(p, delta, cap)?;
    if let Some(g) = genus {
        validate_genus(delta, g)?;
    }
    let u = data.group().generator(0);
    let bound = knot_bound(&data, p, delta)?;
    let mut report = class_report(&data, &u)?;
    if report.lower_bound != bound.lower {
        return Err(Error::Consistency("knot report disagrees with the surgery pipeline".into()));
    }
    report.notes.push(format!("beta = {}", bound.beta));
    if let Some(s) = &bound.shortcut {
        report.notes.push(format!("closed form (spn(delta) - 1)/p = {s}"));
    }
    if let Some(g) = genus {
        report.verdict = Some(verdict(p, delta, g, bound.lower.clone())?);
        report.upper_bound = Some(knot_surgery_upper_bound(p, g)?);
    }
    report.check()?;
    Ok((data, report))
}

/// Report for `u1^k` after surgery on a two-component link.
pub fn link_report(link: &LinkSurgery, f: &LaurentPoly2, k: i64) -> Result<ClassReport> {
    let u = link.class(k);
    let correction = link.bound_element(f, &u)?;
    let lower_bound = spn_u(link.linking_form(), &u, &correction)?;
    let order = link.group().element_order(&u).finite().expect("u1 is torsion");
    let report = ClassReport {
        class_name: link.group().render_element(&u),
        class: u,
        order,
        q_value: None,
        k_residue: None,
        correction,
        lower_bound,
        upper_bound: None,
        verdict: None,
        notes: vec!["bound on theta(x) for any x with d(x) = u".to_string()],
    };
    report.check()?;
    Ok(report)
}
