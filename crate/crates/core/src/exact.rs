//! Exact rationals, residues modulo one, and the circular span of a finite
//! subset of `Q/Z`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"k"`, `"a/b"` or `"-a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Least common multiple of the denominators of `values` (1 for none).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// A residue in `Q/Z`, stored as its representative in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QmodZ(Rational);

impl QmodZ {
    pub fn zero() -> Self {
        QmodZ(Rational::zero())
    }

    pub fn new(r: Rational) -> Self {
        reduce_mod_1(&r)
    }

    /// The representative in `[0, 1)`.
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        reduce_mod_1(&(&self.0 * Rational::from_integer(k.clone())))
    }
}

impl From<Rational> for QmodZ {
    fn from(r: Rational) -> Self {
        reduce_mod_1(&r)
    }
}

impl Add for &QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: &QmodZ) -> QmodZ {
        reduce_mod_1(&(&self.0 + &rhs.0))
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        &self + &rhs
    }
}

impl Sub for &QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: &QmodZ) -> QmodZ {
        reduce_mod_1(&(&self.0 - &rhs.0))
    }
}

impl Neg for &QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        reduce_mod_1(&-&self.0)
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        -&self
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Projection `Q -> Q/Z`: returns `r - floor(r)`.
pub fn reduce_mod_1(r: &Rational) -> QmodZ {
    QmodZ(r - r.floor())
}

/// Minimal length of a closed arc of `Q/Z` containing every point.
///
/// Computed as one minus the widest gap between cyclically consecutive
/// distinct points. Empty and single-point inputs have span 0.
pub fn circular_span<'a>(points: impl IntoIterator<Item = &'a QmodZ>) -> Rational {
    let mut pts: Vec<&Rational> = points.into_iter().map(QmodZ::value).collect();
    pts.sort();
    pts.dedup();
    if pts.len() < 2 {
        return Rational::zero();
    }
    let wrap = Rational::one() + pts[0] - pts[pts.len() - 1];
    let widest = pts
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(wrap, |best, gap| if gap > best { gap } else { best });
    Rational::one() - widest
}

/// Renders a rational the way every report does: `0`, `k`, or `a/b`.
pub fn render(r: &Rational) -> String {
    r.to_string()
}
