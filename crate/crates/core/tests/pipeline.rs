use std::sync::Arc;

use num_traits::Zero;
use proptest::prelude::*;
use torspan::{
    class_reports, knot_report, lens_torsion, ratio, theta_lower_bound, AbelianGroup, Error, GroupRingElement,
    LaurentPoly1, LinkSurgery, LaurentPoly2, QhsData, Rational,
};

fn lens_params() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=16).prop_flat_map(|p| (Just(p), 1..p)).prop_filter("coprime", |(p, q)| num_integer::gcd(*p, *q) == 1)
}

#[test]
fn direct_input_reproduces_lens_bounds() {
    // feed the L(7,2) torsion back in as if the user had typed it
    let lens = lens_torsion(7, 2).unwrap();
    let direct = QhsData::direct(lens.torsion_rep().clone()).unwrap();
    let a = class_reports(&lens).unwrap();
    let b = class_reports(&direct).unwrap();
    let bounds = |r: &[torspan::ClassReport]| r.iter().map(|r| r.lower_bound.clone()).collect::<Vec<_>>();
    assert_eq!(bounds(&a), bounds(&b));
}

#[test]
fn lens_reports_cover_every_class() {
    let data = lens_torsion(9, 4).unwrap();
    let reports = class_reports(&data).unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports[0].class.is_identity());
    assert!(reports[0].lower_bound.is_zero());
    assert!(reports.iter().all(|r| r.lower_bound < Rational::from_integer(1.into())));
}

#[test]
fn enumeration_cap_is_enforced() {
    let err = torspan::lens_torsion_with_cap(50, 1, 10).unwrap_err();
    assert_eq!(err, Error::EnumerationLimit { size: 50, cap: 10 });
}

#[test]
fn infinite_groups_are_not_rational_homology_spheres() {
    let g = Arc::new(AbelianGroup::new(vec![3], 1).unwrap());
    assert!(matches!(QhsData::direct(GroupRingElement::one(g)), Err(Error::InvalidGroup(_))));
}

#[test]
fn knot_surgery_end_to_end() {
    let cinquefoil = LaurentPoly1::from_terms([(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
    for p in 6..=12 {
        let (_, r) = knot_report(p, &cinquefoil, Some(2)).unwrap();
        assert_eq!(r.lower_bound, ratio(3, p));
        assert_eq!(r.upper_bound, Some(ratio(3, p)));
    }
    // below 4g - 2 only the sandwich is known
    let (_, r) = knot_report(5, &cinquefoil, Some(2)).unwrap();
    assert!(r.lower_bound <= ratio(3, 5));
}

#[test]
fn link_and_lens_agree_on_shared_examples() {
    // with f = 1 the link bound of u1^k is spn{0, k^2/p}
    let link = LinkSurgery::new(7).unwrap();
    let f = LaurentPoly2::one();
    assert_eq!(link.lower_bound(&f, &link.class(1)).unwrap(), ratio(1, 7));
    assert_eq!(link.lower_bound(&f, &link.class(2)).unwrap(), ratio(3, 7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lens_bounds_respect_symmetry((p, q) in lens_params(), k in 0i64..16) {
        let data = lens_torsion(p, q).unwrap();
        let g = data.group();
        let u = g.pow(&g.generator(0), k);
        let lower = theta_lower_bound(&data, &u).unwrap();
        prop_assert_eq!(&lower, &theta_lower_bound(&data, &g.inv(&u)).unwrap());
        let n = g.element_order(&u).finite().unwrap() as i64;
        prop_assert!(lower <= ratio(n - 1, n));
    }

    #[test]
    fn q_and_its_inverse_give_the_same_manifold((p, q) in lens_params()) {
        // L(p, q) and L(p, q^-1) are homeomorphic; their bound multisets agree
        let inv = (1..p).find(|x| (x * q) % p == 1).unwrap();
        let sorted = |d: &QhsData| {
            let mut v: Vec<Rational> = class_reports(d).unwrap().into_iter().map(|r| r.lower_bound).collect();
            v.sort();
            v
        };
        prop_assert_eq!(sorted(&lens_torsion(p, q).unwrap()), sorted(&lens_torsion(p, inv).unwrap()));
    }
}
