//! Finitely generated abelian groups `Z/n_1 + ... + Z/n_k + Z^r`, written
//! multiplicatively, together with linking forms on their torsion subgroups.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::{ratio, QmodZ};

/// Default bound on the number of torsion elements any exhaustive search
/// will visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// An element stored as its exponent vector in canonical form: torsion
/// exponents reduced into `0..n_i`, free exponents arbitrary.
///
/// The derived ordering is lexicographic on `(torsion, free)`, which is the
/// enumeration order used everywhere a "first match" is taken.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    torsion: Vec<u64>,
    free: Vec<i64>,
}

impl GroupElement {
    pub fn torsion_exponents(&self) -> &[u64] {
        &self.torsion
    }

    pub fn free_exponents(&self) -> &[i64] {
        &self.free
    }

    pub fn is_identity(&self) -> bool {
        self.torsion.iter().all(|&a| a == 0) && self.free.iter().all(|&a| a == 0)
    }

    pub fn is_torsion(&self) -> bool {
        self.free.iter().all(|&a| a == 0)
    }
}

/// Order of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    torsion_orders: Vec<u64>,
    free_rank: usize,
    names: Vec<String>,
}

impl AbelianGroup {
    /// `Z/n_1 + ... + Z/n_k + Z^r` with default generator names: `t` when
    /// there is a single generator, `g1, g2, ...` otherwise.
    pub fn new(torsion_orders: Vec<u64>, free_rank: usize) -> Result<Self> {
        let count = torsion_orders.len() + free_rank;
        let names = if count == 1 {
            vec!["t".to_string()]
        } else {
            (1..=count).map(|i| format!("g{i}")).collect()
        };
        Self::with_names(torsion_orders, free_rank, names)
    }

    pub fn with_names(torsion_orders: Vec<u64>, free_rank: usize, names: Vec<String>) -> Result<Self> {
        if let Some(n) = torsion_orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("cyclic factor Z/{n} (orders must be at least 2)")));
        }
        if names.len() != torsion_orders.len() + free_rank {
            return Err(Error::InvalidGroup(format!(
                "{} generator names for {} generators",
                names.len(),
                torsion_orders.len() + free_rank
            )));
        }
        let mut seen = names.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != names.len() || names.iter().any(|n| !valid_name(n)) {
            return Err(Error::InvalidGroup(format!("bad generator names {names:?}")));
        }
        Ok(AbelianGroup { torsion_orders, free_rank, names })
    }

    /// The cyclic group `Z/p` generated by `name`.
    pub fn cyclic(p: u64, name: &str) -> Result<Self> {
        Self::with_names(vec![p], 0, vec![name.to_string()])
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion_orders
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `|Tors H|`, the product of the torsion orders.
    pub fn torsion_size(&self) -> u128 {
        self.torsion_orders
            .iter()
            .fold(1u128, |acc, &n| acc.saturating_mul(n as u128))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            torsion: vec![0; self.torsion_orders.len()],
            free: vec![0; self.free_rank],
        }
    }

    /// The `i`-th generator, counting torsion generators first.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut exps = vec![0i64; self.torsion_orders.len() + self.free_rank];
        exps[i] = 1;
        self.element_from(&exps)
    }

    pub fn generator_by_name(&self, name: &str) -> Option<GroupElement> {
        self.names.iter().position(|n| n == name).map(|i| self.generator(i))
    }

    /// Builds an element from raw exponents (torsion first), reducing the
    /// torsion part.
    pub fn element(&self, exponents: &[i64]) -> Result<GroupElement> {
        if exponents.len() != self.names.len() {
            return Err(Error::InvalidGroup(format!(
                "expected {} exponents, got {}",
                self.names.len(),
                exponents.len()
            )));
        }
        Ok(self.element_from(exponents))
    }

    fn element_from(&self, exponents: &[i64]) -> GroupElement {
        let k = self.torsion_orders.len();
        let torsion = exponents[..k]
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&a, &n)| (a as i128).rem_euclid(n as i128) as u64)
            .collect();
        GroupElement { torsion, free: exponents[k..].to_vec() }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.torsion.len() == self.torsion_orders.len()
            && g.free.len() == self.free_rank
            && g.torsion.iter().zip(&self.torsion_orders).all(|(a, n)| a < n)
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion_orders)
            .map(|((&x, &y), &n)| ((x as u128 + y as u128) % n as u128) as u64)
            .collect();
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        GroupElement { torsion, free }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        self.pow(a, -1)
    }

    pub fn pow(&self, a: &GroupElement, k: i64) -> GroupElement {
        let torsion = a
            .torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(&x, &n)| (x as i128 * k as i128).rem_euclid(n as i128) as u64)
            .collect();
        let free = a.free.iter().map(|x| x * k).collect();
        GroupElement { torsion, free }
    }

    /// Least `n >= 1` with `g^n = 1`: the lcm of `n_i / gcd(n_i, a_i)`.
    pub fn element_order(&self, g: &GroupElement) -> Order {
        if !g.is_torsion() {
            return Order::Infinite;
        }
        let n = g
            .torsion
            .iter()
            .zip(&self.torsion_orders)
            .fold(1u64, |acc, (&a, &n)| acc.lcm(&(n / n.gcd(&a))));
        Order::Finite(n)
    }

    /// Every torsion element exactly once, in lexicographic order of the
    /// exponent vectors.
    pub fn enumerate_torsion(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let size = self.torsion_size();
        if size > cap as u128 {
            return Err(Error::EnumerationLimit { size, cap });
        }
        let mut out = Vec::with_capacity(size as usize);
        let mut cur = self.identity();
        loop {
            out.push(cur.clone());
            // odometer, last coordinate fastest
            let mut i = self.torsion_orders.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur.torsion[i] += 1;
                if cur.torsion[i] < self.torsion_orders[i] {
                    break;
                }
                cur.torsion[i] = 0;
            }
        }
    }

    /// Monomial rendering such as `t^3` or `u1^2*u2^-1`; the identity is `1`.
    pub fn render_element(&self, g: &GroupElement) -> String {
        let exps = g.torsion.iter().map(|&a| a as i64).chain(g.free.iter().copied());
        let parts: Vec<String> = self
            .names
            .iter()
            .zip(exps)
            .filter(|(_, a)| *a != 0)
            .map(|(name, a)| if a == 1 { name.clone() } else { format!("{name}^{a}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Parses the monomial syntax produced by [`AbelianGroup::render_element`].
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let mut exps = vec![0i64; self.names.len()];
        if s != "1" {
            for factor in s.split('*') {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n.trim(), e.trim().parse::<i64>().map_err(|_| bad_element(s))?),
                    None => (factor.trim(), 1),
                };
                let i = self.names.iter().position(|n| n == name).ok_or_else(|| bad_element(s))?;
                exps[i] += e;
            }
        }
        Ok(self.element_from(&exps))
    }
}

fn bad_element(s: &str) -> Error {
    Error::Parse(format!("not a group element: {s:?}"))
}

fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion_orders.iter().map(|n| format!("Z/{n}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A symmetric `Q/Z`-valued bilinear pairing on the torsion subgroup, given by
/// its values `b_ij` on pairs of torsion generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingForm {
    group: Arc<AbelianGroup>,
    matrix: Vec<Vec<QmodZ>>,
    cap: u64,
}

impl LinkingForm {
    /// Checks symmetry and that `n_i * b_ij = 0`, so the bilinear extension is
    /// well defined.
    pub fn new(group: Arc<AbelianGroup>, matrix: Vec<Vec<QmodZ>>) -> Result<Self> {
        let k = group.torsion_orders().len();
        if matrix.len() != k || matrix.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidLinkingForm(format!("matrix must be {k}x{k}")));
        }
        for i in 0..k {
            for j in 0..k {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidLinkingForm(format!(
                        "not symmetric: b[{i}][{j}] = {} but b[{j}][{i}] = {}",
                        matrix[i][j], matrix[j][i]
                    )));
                }
                let n = BigInt::from(group.torsion_orders()[i]);
                if !matrix[i][j].mul_int(&n).is_zero() {
                    return Err(Error::InvalidLinkingForm(format!(
                        "b[{i}][{j}] = {} is not killed by the order {n}",
                        matrix[i][j]
                    )));
                }
            }
        }
        Ok(LinkingForm { group, matrix, cap: DEFAULT_ENUMERATION_CAP })
    }

    /// Lens-type form on a cyclic group: `L(t^a, t^b) = ab * value`.
    pub fn cyclic(group: Arc<AbelianGroup>, value: QmodZ) -> Result<Self> {
        Self::new(group, vec![vec![value]])
    }

    pub fn with_enumeration_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.cap
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<QmodZ>] {
        &self.matrix
    }

    /// `L(h, g) = sum a_i c_j b_ij`, evaluated on the torsion parts.
    pub fn pair(&self, h: &GroupElement, g: &GroupElement) -> QmodZ {
        let mut acc = QmodZ::zero();
        for (i, &a) in h.torsion.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &c) in g.torsion.iter().enumerate() {
                if c != 0 {
                    acc = &acc + &self.matrix[i][j].mul_int(&(BigInt::from(a) * BigInt::from(c)));
                }
            }
        }
        acc
    }

    fn torsion_order(&self, u: &GroupElement) -> Result<u64> {
        self.group
            .element_order(u)
            .finite()
            .ok_or_else(|| Error::InfiniteOrder(self.group.render_element(u)))
    }

    /// The adjoint `Tors H -> Hom(Tors H, Q/Z)` is injective.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let k = self.group.torsion_orders().len();
        let gens: Vec<GroupElement> = (0..k).map(|i| self.group.generator(i)).collect();
        for g in self.group.enumerate_torsion(self.cap)? {
            if !g.is_identity() && gens.iter().all(|x| self.pair(&g, x).is_zero()) {
                return Err(Error::DegenerateLinkingForm(format!(
                    "{} pairs trivially with everything",
                    self.group.render_element(&g)
                )));
            }
        }
        Ok(())
    }

    /// `G_u = { g : L(u, g) = 0 }`, checked to have index `order(u)`.
    pub fn annihilator_subgroup(&self, u: &GroupElement) -> Result<Vec<GroupElement>> {
        let n = self.torsion_order(u)?;
        let all = self.group.enumerate_torsion(self.cap)?;
        let total = all.len() as u128;
        let g: Vec<GroupElement> = all.into_iter().filter(|g| self.pair(u, g).is_zero()).collect();
        if g.len() as u128 * n as u128 != total {
            return Err(Error::DegenerateLinkingForm(format!(
                "annihilator of {} has index {} instead of {n}",
                self.group.render_element(u),
                total / g.len() as u128
            )));
        }
        Ok(g)
    }

    /// Every torsion `v` with `L(u, v) = 1/n`, `n = order(u)`.
    pub fn dual_elements(&self, u: &GroupElement) -> Result<Vec<GroupElement>> {
        let n = self.torsion_order(u)?;
        let target = QmodZ::new(ratio(1, n as i64));
        Ok(self
            .group
            .enumerate_torsion(self.cap)?
            .into_iter()
            .filter(|v| self.pair(u, v) == target)
            .collect())
    }

    /// The first `v` (in enumeration order) with `L(u, v) = 1/order(u)`.
    pub fn find_dual_element(&self, u: &GroupElement) -> Result<GroupElement> {
        let n = self.torsion_order(u)?;
        let target = QmodZ::new(ratio(1, n as i64));
        for v in self.group.enumerate_torsion(self.cap)? {
            if self.pair(u, &v) == target {
                return Ok(v);
            }
        }
        Err(Error::DegenerateLinkingForm(format!(
            "no v with L({}, v) = 1/{n}",
            self.group.render_element(u)
        )))
    }
}
