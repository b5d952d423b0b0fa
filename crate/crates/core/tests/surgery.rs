use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use satband::family::{build_pattern, FamilyParams};
use satband::invariants::{determinant, jones};
use satband::surgery::{apply_band, dual_band, Attachment, BandSpec, Side, Target};
use satband::tangle::{tangle_from_fraction, Fraction};
use satband::{Orientation, PlanarDiagram};

fn small_knots() -> Vec<PlanarDiagram> {
    let mut out = vec![
        PlanarDiagram::parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap(),
        PlanarDiagram::parse_pd("PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]").unwrap(),
    ];
    for (a, b) in [(5, 2), (7, 3), (9, 2)] {
        out.push(tangle_from_fraction(Fraction::new(a, b).unwrap()).numerator_closure());
    }
    for (m, n, p, q) in [(1, 1, 0, 3), (2, 1, 0, 3), (1, -1, 2, -3)] {
        out.push(build_pattern(&FamilyParams::new(m, n, p, q).unwrap()).unwrap().diagram);
    }
    out.retain(|d| d.crossing_count() <= 12);
    out
}

fn side(b: bool) -> Side {
    if b {
        Side::Left
    } else {
        Side::Right
    }
}

fn random_band(d: &PlanarDiagram, picks: (prop::sample::Index, prop::sample::Index, bool, bool, f64, f64)) -> BandSpec {
    let arcs = d.arc_count();
    let (a, b, sa, sb, pa, pb) = picks;
    BandSpec::flat(
        Attachment::arc(a.index(arcs) as u32 + 1, pa, side(sa)),
        Attachment::arc(b.index(arcs) as u32 + 1, pb, side(sb)),
    )
}

fn band_picks() -> impl Strategy<Value = (prop::sample::Index, prop::sample::Index, bool, bool, f64, f64)> {
    (any::<prop::sample::Index>(), any::<prop::sample::Index>(), any::<bool>(), any::<bool>(), 0.1f64..0.9, 0.1f64..0.9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn flat_band_round_trip(which in any::<prop::sample::Index>(), picks in band_picks()) {
        let knots = small_knots();
        let d = which.get(&knots);
        let b = random_band(d, picks);
        // attachments that do not share a face are rejected by the surgery
        let k = apply_band(d, &b);
        prop_assume!(k.is_ok());
        let k = k.unwrap();
        prop_assert!(k.validate().is_valid());
        let before = d.count_components().unwrap() as i64;
        prop_assert!((k.count_components().unwrap() as i64 - before).abs() <= 1);
        let back = apply_band(&k, &dual_band(d, &b).unwrap()).unwrap();
        prop_assert!(back.validate().is_valid());
        prop_assert_eq!(back.count_components().unwrap(), 1);
        let o = Orientation::default();
        prop_assert_eq!(jones(&back, &o, 25).unwrap(), jones(d, &o, 25).unwrap());
    }
}

#[test]
fn merge_of_two_circles() {
    let d = PlanarDiagram::unlink(2);
    let b = BandSpec::flat(Attachment::free_loop(0, 0.5, Side::Left), Attachment::free_loop(1, 0.5, Side::Left));
    let k = apply_band(&d, &b).unwrap();
    assert_eq!(k.count_components().unwrap(), 1);
    assert_eq!(k.crossing_count(), 0);
}

#[test]
fn two_half_twists_give_a_hopf_link() {
    let d = PlanarDiagram::unlink(1);
    let b = BandSpec {
        half_twists: 2,
        ..BandSpec::flat(Attachment::free_loop(0, 0.2, Side::Left), Attachment::free_loop(0, 0.6, Side::Left))
    };
    let k = apply_band(&d, &b).unwrap();
    assert_eq!(k.count_components().unwrap(), 2);
    assert_eq!(determinant(&k).unwrap(), BigInt::from(2));
}

#[test]
fn dual_of_dual_uses_the_same_arcs() {
    let d = PlanarDiagram::parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
    let o = Orientation::default();
    let mut tried = 0;
    for arc in 1..=6u32 {
        for s in [Side::Left, Side::Right] {
            let band = BandSpec::flat(Attachment::arc(arc, 0.3, s), Attachment::arc(arc, 0.7, s));
            let k = apply_band(&d, &band).unwrap();
            let dual = dual_band(&d, &band).unwrap();
            let back = apply_band(&k, &dual).unwrap();
            let again = dual_band(&k, &dual).unwrap();
            // the round trip renumbers arcs but keeps crossing order
            let mut to_original = BTreeMap::new();
            for (x, y) in back.crossings.iter().zip(&d.crossings) {
                for (a, b) in x.arcs.iter().zip(y.arcs.iter()) {
                    assert_eq!(*to_original.entry(*a).or_insert(*b), *b);
                }
            }
            for att in [again.attach_a, again.attach_b] {
                let Target::Arc(a) = att.target else { panic!("{again:?}") };
                assert_eq!(to_original[&a], arc, "band on arc {arc} {s:?}");
            }
            let k2 = apply_band(&back, &again).unwrap();
            assert_eq!(k2.count_components().unwrap(), k.count_components().unwrap());
            assert_eq!(jones(&k2, &o, 25).unwrap(), jones(&k, &o, 25).unwrap());
            tried += 1;
        }
    }
    assert_eq!(tried, 12);
}
