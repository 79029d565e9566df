//! Exact lower and upper bounds for the folded-surface complexity `Theta` of
//! classes in the torsion of `H_1` of an oriented 3-manifold.
//!
//! The lower bounds come from abelian torsions: a representative `tau` in the
//! rational group ring `Q[H]` determines the linking form and a quadratic
//! refinement, which in turn produce a correction term `a_e(u)` whose basic
//! elements, paired with `u`, span an arc of `Q/Z`. The length of that arc
//! bounds `Theta(u)` from below. All arithmetic is exact.
//!
//! ```
//! use torspan::{lens_torsion, theta_lower_bound, ratio};
//!
//! let l51 = lens_torsion(5, 1).unwrap();
//! let t2 = l51.group().parse_element("t^2").unwrap();
//! assert_eq!(theta_lower_bound(&l51, &t2).unwrap(), ratio(1, 5));
//! ```

pub mod bounds;
pub mod error;
pub mod exact;
pub mod group;
pub mod laurent;
pub mod ring;
pub mod torsion;

pub use bounds::*;
pub use error::{Error, Result};
pub use exact::{circular_span, parse_rational, ratio, reduce_mod_1, QmodZ, Rational};
pub use group::{AbelianGroup, GroupElement, LinkingForm, Order, DEFAULT_ENUMERATION_CAP};
pub use laurent::{LaurentPoly1, LaurentPoly2};
pub use ring::{alpha, subgroup_sum, BasicSet, GroupRingElement};
pub use torsion::*;

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spans.md")]
    mod spans {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/group-ring.md")]
    mod group_ring {}
    #[doc = include_str!("../../../book/src/torsion.md")]
    mod torsion {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
