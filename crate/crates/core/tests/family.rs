use num_bigint::BigInt;
use satband::certify::{certify_unknot, verify_family, Grid, Status, Verdict, VerifyOptions};
use satband::family::{
    build_generalized, build_pattern, build_satellite, build_satellite_with_band_level, family_band,
    pattern_crossings, winding_number, winding_per_mark, FamilyParams, GeneralizedParams,
};
use satband::invariants::{alexander, determinant};
use satband::simplify::{fingerprint, SearchBudget};
use satband::surgery::{apply_band, dual_band};
use satband::{Orientation, ParamError};

fn params(m: i64, n: i64, p: i64, q: i64) -> FamilyParams {
    FamilyParams::new(m, n, p, q).unwrap()
}

#[test]
fn parameter_constraints() {
    assert_eq!(FamilyParams::new(1, 1, 0, 2), Err(ParamError::QEven));
    assert_eq!(FamilyParams::new(0, 1, 0, 3), Err(ParamError::MZero));
    assert_eq!(FamilyParams::new(1, 0, 0, 3), Err(ParamError::NZero));
    assert_eq!(FamilyParams::new(1, 1, 0, 1), Err(ParamError::QSmall));
    assert_eq!(GeneralizedParams::new(vec![1, 1, 1], 0, 3), Err(ParamError::NOdd(3)));
}

#[test]
fn crossing_counts() {
    for (m, n, p, q) in [(1, 1, 0, 3), (-2, 3, 1, 5), (2, -1, -3, -3)] {
        let t = params(m, n, p, q);
        let boxes = 2 * m.abs() + 2 * n.abs() + p.abs() + q.abs();
        assert_eq!(build_pattern(&t).unwrap().diagram.crossing_count() as i64, boxes);
        assert_eq!(pattern_crossings(&t) as i64, boxes);
        if t.is_knot() {
            let sat = build_satellite(&t).unwrap();
            assert_eq!(sat.crossing_count() as i64, 15 * q.abs() + boxes);
        }
    }
}

#[test]
fn small_examples() {
    assert_eq!(build_pattern(&params(2, 2, 2, 3)).unwrap().diagram.count_components().unwrap(), 1);
    assert_eq!(build_pattern(&params(1, 1, 1, 3)).unwrap().diagram.count_components().unwrap(), 2);
    let o = Orientation::default();
    assert_eq!(winding_number(&build_pattern(&params(1, 1, 0, 3)).unwrap(), &o).unwrap().abs(), 3);
    assert_eq!(winding_number(&build_pattern(&params(2, 1, 0, 3)).unwrap(), &o).unwrap().abs(), 1);
}

#[test]
fn winding_is_the_same_at_every_mark() {
    for (m, n, p) in [(1, 1, 0), (2, 1, 2), (-1, 3, -2), (2, 2, 0)] {
        let pat = build_pattern(&params(m, n, p, 3)).unwrap();
        let w = winding_per_mark(&pat);
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|&x| x == w[0]), "{w:?}");
        assert_eq!(pat.mark_intersections(), vec![3; 4]);
    }
}

#[test]
fn generalized_two_boxes_is_the_pattern() {
    for (m, n, p, q) in [(1, 1, 0, 3), (2, -1, 1, 5), (-3, 2, -2, -3)] {
        let g = build_generalized(&GeneralizedParams::new(vec![m, n], p, q).unwrap()).unwrap();
        let f = build_pattern(&params(m, n, p, q)).unwrap();
        assert_eq!(fingerprint(&g.diagram), fingerprint(&f.diagram));
    }
}

#[test]
fn generalized_four_boxes() {
    let o = Orientation::default();
    for a in [[1, 1, 1, 1], [1, -3, 1, 1], [-1, 1, 3, -1]] {
        for q in [3, -3, 5] {
            let g = build_generalized(&GeneralizedParams::new(a.to_vec(), 0, q).unwrap()).unwrap();
            assert_eq!(g.diagram.count_components().unwrap(), 1);
            assert!(g.mark_intersections().iter().all(|&k| k == 5));
            assert_eq!(winding_number(&g, &o).unwrap().abs(), 5);
            let g = build_generalized(&GeneralizedParams::new(a.to_vec(), 2, q).unwrap()).unwrap();
            assert_eq!(winding_number(&g, &o).unwrap().abs(), 5);
        }
    }
    for a in [[1, 1, 1, 1], [2, 1, -1, 2], [2, 2, 2, 2]] {
        for p in [1, -1, 3] {
            let g = build_generalized(&GeneralizedParams::new(a.to_vec(), p, 3).unwrap()).unwrap();
            assert_eq!(g.diagram.count_components().unwrap(), 2, "{a:?} p={p}");
        }
    }
}

#[test]
fn satellite_determinant_has_the_companion_factor() {
    let sat = build_satellite(&params(1, 1, 0, 3)).unwrap();
    assert!(sat.validate().is_valid());
    assert_eq!(sat.count_components().unwrap(), 1);
    let det = determinant(&sat).unwrap();
    assert_eq!(&det % BigInt::from(3), BigInt::from(0));
}

#[test]
fn band_crosses_the_seams_once_each() {
    let sat = build_satellite_with_band_level(&params(1, 1, 0, 3)).unwrap();
    let g = sat.diagram.geometry.as_ref().unwrap();
    let core = g.band_core.as_ref().unwrap();
    let (x0, x1) = (core[0][0].min(core[1][0]), core[0][0].max(core[1][0]));
    let crossed = g.seams.iter().filter(|s| x0 < s[0][0] && s[0][0] < x1).count();
    assert_eq!(crossed, 2);
}

#[test]
fn band_back_recovers_the_satellite() {
    let t = params(1, 1, 0, 3);
    let sat = build_satellite(&t).unwrap();
    let band = family_band(&t).unwrap();
    let kb = apply_band(&sat, &band).unwrap();
    assert!(kb.validate().is_valid());
    assert_eq!(determinant(&kb).unwrap(), BigInt::from(1));
    let back = apply_band(&kb, &dual_band(&sat, &band).unwrap()).unwrap();
    assert_eq!(back.count_components().unwrap(), 1);
    assert!(alexander(&back).unwrap().eq_up_to_units(&alexander(&sat).unwrap()));
}

#[test]
fn verify_reports_every_check() {
    let grid = Grid::parse("m=1,n=-1..1,p=0..1,q=3").unwrap();
    let tuples = grid.tuples();
    assert_eq!(tuples.len(), 4);
    let report = verify_family(&tuples, &VerifyOptions { jobs: Some(1), ..VerifyOptions::default() });
    assert!(report.all_pass());
    let link = report.tuples.iter().find(|r| r.params.p == 1).unwrap();
    assert_eq!(link.components, 2);
    assert_eq!(link.checks.kb_trivial.status, Status::Skipped);
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["tuples"].as_array().unwrap().len(), 4);
}

#[test]
fn negative_q_banding_is_trivial() {
    for (m, n, p, q) in [(1, 1, 0, -3), (2, 1, 0, -3), (1, -2, 2, -5)] {
        let t = params(m, n, p, q);
        let kb = apply_band(&build_satellite(&t).unwrap(), &family_band(&t).unwrap()).unwrap();
        let cert = certify_unknot(&kb, &SearchBudget::default(), 25).unwrap();
        assert_eq!(cert.verdict, Verdict::ReducedToZero, "{t}");
        assert!(cert.check_trace(&kb));
    }
}
