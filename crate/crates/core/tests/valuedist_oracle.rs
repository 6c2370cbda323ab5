//! Totally ramified values checked against a floating-point brute force that
//! shares no code with the library's exact pipeline.

mod common;

use common::{oracle_of, to_pt, Pt};
use flatfront::algebra::{GaussianRational, Polynomial, RationalMap};
use flatfront::sphere::ExtendedPoint;
use flatfront::valuedist::totally_ramified;
use proptest::prelude::*;

fn poly(c: &[i64]) -> Polynomial {
    Polynomial::from_integers(c)
}

fn from_roots(rs: &[(i64, u32)]) -> Polynomial {
    rs.iter().fold(Polynomial::one(), |acc, &(r, m)| {
        &acc * &Polynomial::from_integers(&[-r, 1]).pow(m)
    })
}

fn random_map() -> impl Strategy<Value = RationalMap> {
    let coeffs = prop::collection::vec(-3i64..=3, 1..=5);
    let dense = (coeffs.clone(), coeffs).prop_map(|(n, d)| (poly(&n), poly(&d)));
    let root = (-3i64..=3, 1u32..=3);
    let factored = (prop::collection::vec(root.clone(), 0..=2), prop::collection::vec(root, 0..=2), 1i64..=3)
        .prop_map(|(n, d, c)| (from_roots(&n).scale(&GaussianRational::from_integer(c)), from_roots(&d)));
    prop_oneof![dense, factored]
        .prop_filter_map("constant or oversized map", |(n, d)| {
            let g = RationalMap::new(n, d).ok()?;
            (!g.is_constant() && g.degree() <= 4).then_some(g)
        })
}

fn random_ends() -> impl Strategy<Value = Vec<ExtendedPoint>> {
    (prop::collection::btree_set(-3i64..=3, 0..=4), any::<bool>()).prop_map(|(finite, inf)| {
        let mut v: Vec<ExtendedPoint> = finite
            .into_iter()
            .map(|n| ExtendedPoint::exact(GaussianRational::from_integer(n)))
            .collect();
        if inf {
            v.push(ExtendedPoint::Infinity);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn agrees_with_brute_force(g in random_map(), ends in random_ends()) {
        let report = totally_ramified(&g, &ends).unwrap();
        let oracle = oracle_of(&g);
        let pts: Vec<Pt> = ends.iter().map(to_pt).collect();
        let (r0, l0, nu) = oracle.nu(&pts);
        prop_assert_eq!(report.r0, r0, "r0 for {:?}", g);
        prop_assert_eq!(report.l0, l0, "l0 for {:?}", g);
        prop_assert_eq!(report.nu, nu);
    }

    #[test]
    fn more_ends_never_lower_nu(g in random_map(), ends in random_ends(), extra in -3i64..=3) {
        let smaller = totally_ramified(&g, &ends).unwrap();
        let mut larger_ends = ends.clone();
        let p = ExtendedPoint::exact(GaussianRational::from_integer(extra));
        if !larger_ends.contains(&p) {
            larger_ends.push(p);
        }
        let larger = totally_ramified(&g, &larger_ends).unwrap();
        prop_assert!(larger.nu >= smaller.nu);
    }

    #[test]
    fn riemann_hurwitz_and_ex_rami(g in random_map(), ends in random_ends()) {
        let r = totally_ramified(&g, &ends).unwrap();
        let b = flatfront::valuedist::proof_bounds(&r, 0, ends.len());
        prop_assert!(b.rh);
        prop_assert!(b.ex_rami);
        prop_assert!(r.n0 + r.nr <= r.n_g);
    }
}
