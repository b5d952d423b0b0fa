//! Property tests over generated two-bridge knots and family patterns.

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use satband::family::{build_pattern, FamilyParams};
use satband::invariants::{alexander, dbc_homology, determinant, jones};
use satband::simplify::{apply_move, greedy, perturbation_moves};
use satband::tangle::{tangle_from_fraction, Fraction};
use satband::{smith_normal_form, IntegerMatrix, LaurentPolynomial, Orientation, PlanarDiagram};

fn coprime() -> impl Strategy<Value = (i64, i64)> {
    (1i64..40, 1i64..40).prop_filter("coprime", |&(a, b)| num_integer::gcd(a, b) == 1)
}

fn two_bridge(a: i64, b: i64) -> PlanarDiagram {
    tangle_from_fraction(Fraction::new(a, b).unwrap()).numerator_closure()
}

fn small_pattern() -> impl Strategy<Value = PlanarDiagram> {
    let nz = prop_oneof![-2i64..=-1, 1i64..=2];
    (nz.clone(), nz, -2i64..=2, prop_oneof![Just(3i64), Just(-3), Just(5)])
        .prop_map(|(m, n, p, q)| build_pattern(&FamilyParams::new(m, n, p, q).unwrap()).unwrap().diagram)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // the closure of the a/b tangle has determinant a
    #[test]
    fn two_bridge_determinant((a, b) in coprime()) {
        let d = two_bridge(a, b);
        prop_assert_eq!(determinant(&d).unwrap(), BigInt::from(a));
        if d.count_components().unwrap() == 1 {
            prop_assert_eq!(alexander(&d).unwrap().eval_minus_one().abs(), BigInt::from(a));
        }
        let h = dbc_homology(&d).unwrap();
        prop_assert_eq!(h.order(), Some(BigInt::from(a)));
    }

    #[test]
    fn mirror_inverts_jones(d in small_pattern()) {
        let j = jones(&d, &Orientation::default(), 20).unwrap();
        let jm = jones(&d.mirror(), &Orientation::default(), 20).unwrap();
        prop_assert_eq!(jm, j.inverted());
        prop_assert_eq!(determinant(&d.mirror()).unwrap(), determinant(&d).unwrap());
        if d.count_components().unwrap() == 1 {
            prop_assert!(alexander(&d.mirror()).unwrap().eq_up_to_units(&alexander(&d).unwrap()));
        }
    }

    #[test]
    fn alexander_is_symmetric((a, b) in coprime()) {
        let d = two_bridge(a, b);
        prop_assume!(d.count_components().unwrap() == 1);
        let p = alexander(&d).unwrap();
        let flipped = LaurentPolynomial::from_terms(p.terms().map(|(e, c)| (-e, c.clone())));
        prop_assert!(p.eq_up_to_units(&flipped));
        prop_assert_eq!(p.eval(&BigInt::from(1)).map(|v| v.abs()), Some(BigInt::from(1)));
    }

    #[test]
    fn perturbations_keep_invariants(
        d in small_pattern(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 1..4),
    ) {
        let j = jones(&d, &Orientation::default(), 25).unwrap();
        let det = determinant(&d).unwrap();
        let mut e = d.clone();
        for pick in &picks {
            let moves = perturbation_moves(&e).unwrap();
            e = apply_move(&e, pick.get(&moves)).unwrap();
        }
        prop_assert!(e.validate().is_valid());
        prop_assert_eq!(jones(&e, &Orientation::default(), 25).unwrap(), j.clone());
        prop_assert_eq!(determinant(&e).unwrap(), det);
        let back = greedy(&e).unwrap().0;
        prop_assert!(back.crossing_count() <= e.crossing_count());
        prop_assert_eq!(jones(&back, &Orientation::default(), 25).unwrap(), j);
    }
}

#[test]
fn torus_knot_two_five() {
    // negative (2,5) torus knot
    let d = PlanarDiagram::parse_pd("PD[X(2,8,3,7), X(4,10,5,9), X(6,2,7,1), X(8,4,9,3), X(10,6,1,5)]").unwrap();
    assert_eq!(d.count_components().unwrap(), 1);
    let want = LaurentPolynomial::from_terms([(0, 1), (1, -1), (2, 1), (3, -1), (4, 1)]);
    assert!(alexander(&d).unwrap().eq_up_to_units(&want));
    assert_eq!(determinant(&d).unwrap(), BigInt::from(5));
    assert_eq!(dbc_homology(&d).unwrap().to_string(), "Z/5");
}

#[test]
fn smith_normal_form_examples() {
    let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
    let s = smith_normal_form(&m);
    assert_eq!(s.factors, vec![BigInt::from(2), BigInt::from(4)]);
    let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
    assert_eq!(smith_normal_form(&m).without_units().to_string(), "Z/6");
    let m = IntegerMatrix::from_rows(&[vec![0, 0], vec![0, 5]]);
    assert_eq!(smith_normal_form(&m).without_units().to_string(), "Z/5 + Z");
}
