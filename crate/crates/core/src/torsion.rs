//! Refined torsions of rational homology spheres and the invariants read off
//! from them: the linking form, the quadratic function `q_e`, the residue
//! `K(e, u)` with its parity, and the correction term `a_e(u)`.
//!
//! A torsion here is one concrete representative `tau` in `Q[H]`. Changing
//! the Euler structure multiplies it by a group element; see
//! [`QhsData::translate`].

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{ratio, reduce_mod_1, QmodZ, Rational};
use crate::group::{AbelianGroup, GroupElement, LinkingForm, DEFAULT_ENUMERATION_CAP};
use crate::laurent::LaurentPoly1;
use crate::ring::{alpha, minus_one, subgroup_sum, GroupRingElement};

/// Where a torsion representative came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `L(p, q)` with `tau = alpha_t * alpha_{t^q}`.
    Lens { p: u64, q: i64 },
    /// `p`-surgery on a knot with Alexander polynomial `delta`, `tau = alpha_u^2 delta(u)`.
    KnotSurgery { p: u64, delta: LaurentPoly1 },
    /// Supplied by the caller.
    Direct,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Lens { p, q } => write!(f, "L({p},{q})"),
            Provenance::KnotSurgery { p, delta } => write!(f, "{p}-surgery on a knot with Alexander polynomial {delta}"),
            Provenance::Direct => f.write_str("direct input"),
        }
    }
}

/// A rational homology sphere, known through its first homology and one
/// representative of its refined torsion.
#[derive(Clone, Debug)]
pub struct QhsData {
    group: Arc<AbelianGroup>,
    torsion_rep: GroupRingElement,
    provenance: Provenance,
    linking: LinkingForm,
}

impl QhsData {
    /// Validates a caller-supplied torsion: finite group, symmetric and
    /// nondegenerate linking form, and an integral `K(e, u)` for every `u`.
    pub fn direct(tau: GroupRingElement) -> Result<Self> {
        Self::build(tau, Provenance::Direct, DEFAULT_ENUMERATION_CAP)
    }

    pub fn direct_with_cap(tau: GroupRingElement, cap: u64) -> Result<Self> {
        Self::build(tau, Provenance::Direct, cap)
    }

    fn build(tau: GroupRingElement, provenance: Provenance, cap: u64) -> Result<Self> {
        let group = tau.group().clone();
        if !group.is_finite() {
            return Err(Error::InvalidGroup(format!(
                "{group} is infinite; a rational homology sphere has finite H_1"
            )));
        }
        let linking = linking_form_from_torsion(&tau, cap)?;
        let data = QhsData { group, torsion_rep: tau, provenance, linking };
        for u in data.group.enumerate_torsion(cap)? {
            k_residue(&data, &u)?;
        }
        Ok(data)
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn torsion_rep(&self) -> &GroupRingElement {
        &self.torsion_rep
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn linking_form(&self) -> &LinkingForm {
        &self.linking
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.linking.enumeration_cap()
    }

    /// Same manifold with `tau` replaced by `h * tau` (a different Euler
    /// structure). The linking form does not change.
    pub fn translate(&self, h: &GroupElement) -> QhsData {
        QhsData {
            group: self.group.clone(),
            torsion_rep: self.torsion_rep.shift(h),
            provenance: self.provenance.clone(),
            linking: self.linking.clone(),
        }
    }
}

/// Torsion of the lens space `L(p, q)`: `alpha_t * alpha_{t^q}` over `Z/p = <t>`.
pub fn lens_torsion(p: i64, q: i64) -> Result<QhsData> {
    lens_torsion_with_cap(p, q, DEFAULT_ENUMERATION_CAP)
}

pub fn lens_torsion_with_cap(p: i64, q: i64, cap: u64) -> Result<QhsData> {
    if p < 2 || p.gcd(&q) != 1 {
        return Err(Error::InvalidLensParameters { p, q });
    }
    let group = Arc::new(AbelianGroup::cyclic(p as u64, "t")?);
    let t = group.generator(0);
    let tau = alpha(&group, &t)?.mul(&alpha(&group, &group.pow(&t, q))?)?;
    QhsData::build(tau, Provenance::Lens { p: p as u64, q }, cap)
}

/// Checks `delta(1) = 1` and `delta(t^-1) = delta(t)`.
pub fn validate_alexander(delta: &LaurentPoly1) -> Result<()> {
    if !delta.augmentation().is_one() {
        return Err(Error::Normalization(format!("{delta} has value {} at t = 1, expected 1", delta.augmentation())));
    }
    if delta.reflect() != *delta {
        return Err(Error::Symmetry(format!("{delta} differs from its image under t -> t^-1")));
    }
    Ok(())
}

/// Torsion of `p`-surgery on a knot: `alpha_u^2 * delta(u)` over `Z/p = <u>`,
/// `u` the meridian class.
pub fn knot_surgery_torsion(p: i64, delta: &LaurentPoly1) -> Result<QhsData> {
    knot_surgery_torsion_with_cap(p, delta, DEFAULT_ENUMERATION_CAP)
}

pub fn knot_surgery_torsion_with_cap(p: i64, delta: &LaurentPoly1, cap: u64) -> Result<QhsData> {
    if p < 2 {
        return Err(Error::InvalidFraming(p));
    }
    validate_alexander(delta)?;
    let group = Arc::new(AbelianGroup::cyclic(p as u64, "u")?);
    let u = group.generator(0);
    let a = alpha(&group, &u)?;
    let tau = a.mul(&a)?.mul(&delta.evaluate(&group, &u))?;
    QhsData::build(tau, Provenance::KnotSurgery { p: p as u64, delta: delta.clone() }, cap)
}

/// `L(h, g) = -((1 - h)(1 - g) tau)_1 mod 1`, evaluated on the torsion
/// generators and extended bilinearly. Rejects asymmetric, ill-defined or
/// degenerate results.
pub fn linking_form_from_torsion(tau: &GroupRingElement, cap: u64) -> Result<LinkingForm> {
    let group = tau.group();
    let k = group.torsion_orders().len();
    let gens: Vec<GroupElement> = (0..k).map(|i| group.generator(i)).collect();
    let mut matrix = vec![vec![QmodZ::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let factor = minus_one(group, &gens[i]).mul(&minus_one(group, &gens[j]))?;
            matrix[i][j] = reduce_mod_1(&-factor.identity_coefficient_of_product(tau)?);
        }
    }
    let form = LinkingForm::new(group.clone(), matrix)?.with_enumeration_cap(cap);
    form.check_nondegenerate()?;
    Ok(form)
}

/// `q_e(u) = ((1 - u) tau)_1 mod 1`.
pub fn quadratic_function(data: &QhsData, u: &GroupElement) -> QmodZ {
    let one_minus_u = minus_one(&data.group, u).neg();
    let c = one_minus_u
        .identity_coefficient_of_product(&data.torsion_rep)
        .expect("same group");
    reduce_mod_1(&c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// `K` modulo `2n`, stored as its least non-negative representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KResidue {
    pub value: u64,
    pub modulus: u64,
}

impl KResidue {
    pub fn parity(&self) -> Parity {
        if self.value % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for KResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

fn order_of(data: &QhsData, u: &GroupElement) -> Result<u64> {
    data.group
        .element_order(u)
        .finite()
        .ok_or_else(|| Error::InfiniteOrder(data.group.render_element(u)))
}

/// The unique `K` in `Z/2n` with `q_e(u) = K/(2n) + 1/2 mod 1`.
pub fn k_residue(data: &QhsData, u: &GroupElement) -> Result<KResidue> {
    let n = order_of(data, u)?;
    let q = quadratic_function(data, u);
    let scaled = (q.value() - ratio(1, 2)) * Rational::from_integer((2 * n).into());
    if !scaled.is_integer() {
        return Err(Error::InconsistentTorsion(format!(
            "q_e({}) = {q} is not of the form K/{} + 1/2",
            data.group.render_element(u),
            2 * n
        )));
    }
    let m = 2 * n as i128;
    let k: i128 = scaled.to_integer().try_into().expect("|K| < 2n");
    Ok(KResidue { value: k.rem_euclid(m) as u64, modulus: 2 * n })
}

/// The correction term `a_e(u)`, using the first dual element `v` in
/// enumeration order.
pub fn correction_term(data: &QhsData, u: &GroupElement) -> Result<GroupRingElement> {
    order_of(data, u)?;
    let v = data.linking.find_dual_element(u)?;
    correction_term_with(data, u, &v)
}

/// `a_e(u)` for an explicit dual element `v` (one with `L(u, v) = 1/n`):
///
/// * `u` even: `(u - 1) tau - v^(K/2) (v + 1)/2 * alpha_v * Sigma_G`
/// * `u` odd:  `(u - 1) tau - v^((K+1)/2) * alpha_v * Sigma_G`
///
/// where `G` is the annihilator of `u` under the linking form.
pub fn correction_term_with(data: &QhsData, u: &GroupElement, v: &GroupElement) -> Result<GroupRingElement> {
    let group = &data.group;
    let n = order_of(data, u)?;
    if data.linking.pair(u, v) != QmodZ::new(ratio(1, n as i64)) {
        return Err(Error::DegenerateLinkingForm(format!(
            "L({}, {}) is not 1/{n}",
            group.render_element(u),
            group.render_element(v)
        )));
    }
    let annihilator = data.linking.annihilator_subgroup(u)?;
    let sigma_g = subgroup_sum(group, &annihilator);
    let k = k_residue(data, u)?;
    let alpha_v = alpha(group, v)?;
    let base = minus_one(group, u).mul(&data.torsion_rep)?;
    let correction = match k.parity() {
        Parity::Even => {
            let shift = group.pow(v, (k.value / 2) as i64);
            let half_v_plus_one = GroupRingElement::from_terms(
                group.clone(),
                [(v.clone(), ratio(1, 2)), (group.identity(), ratio(1, 2))],
            );
            half_v_plus_one.shift(&shift).mul(&alpha_v)?.mul(&sigma_g)?
        }
        Parity::Odd => {
            let shift = group.pow(v, ((k.value + 1) / 2) as i64);
            alpha_v.shift(&shift).mul(&sigma_g)?
        }
    };
    base.sub(&correction)
}

/// `beta` with `delta = 1 + (t - 1) beta`.
pub fn beta_expansion(delta: &LaurentPoly1) -> Result<LaurentPoly1> {
    validate_alexander(delta)?;
    let rest = delta.sub(&LaurentPoly1::one());
    if rest.is_zero() {
        return Ok(LaurentPoly1::zero());
    }
    let beta = rest
        .div_by_t_minus_one()
        .ok_or_else(|| Error::Normalization(format!("{delta} - 1 is not divisible by t - 1")))?;
    if !beta.augmentation().is_zero() {
        return Err(Error::Consistency(format!("beta = {beta} has nonzero augmentation")));
    }
    Ok(beta)
}
