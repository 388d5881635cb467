use std::f64::consts::PI;

use magspec_core::geometry::{self, CurveSpec, DomainSpec};
use magspec_core::mesh::{generate, TriangleMesh, MIN_ANGLE_DEG};
use proptest::prelude::*;

fn check(spec: &DomainSpec, h: f64, area: f64, euler: i64) -> TriangleMesh {
    let m = generate(spec, h).unwrap();
    m.validate().unwrap();
    let q = m.quality();
    assert!(q.is_acceptable(), "{spec:?}: {q:?}");
    assert!(q.min_angle >= MIN_ANGLE_DEG);
    assert!(q.h_max <= 1.5 * h, "{spec:?}: h_max {} for h {h}", q.h_max);
    assert!((m.area() - area).abs() < 0.02 * area, "{spec:?}: {} vs {area}", m.area());
    assert_eq!(m.euler_characteristic(), euler);
    m
}

#[test]
fn standard_shapes() {
    check(&DomainSpec::disk(1.0), 0.1, PI, 1);
    check(&DomainSpec::rectangle(2.0, 1.0), 0.1, 2.0, 1);
    check(&DomainSpec::ellipse(1.0, 0.4), 0.05, 0.4 * PI, 1);
    let ann = check(&DomainSpec::annulus(0.5, 1.0), 0.05, 0.75 * PI, 0);
    assert_eq!(ann.loop_count(), 2);
    let l = DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]);
    check(&l, 0.1, 3.0, 1);
}

#[test]
fn tube_mesh() {
    let c = CurveSpec::Ellipse { a: 1.0, b: 0.5 };
    let t = geometry::tube_domain(&c, 0.1).unwrap();
    let exact = geometry::summarize(&t).unwrap().area;
    check(&t, 0.02, exact, 0);
}

#[test]
fn text_round_trip_and_refinement() {
    let m = generate(&DomainSpec::ellipse(1.0, 0.7), 0.15).unwrap();
    let back = TriangleMesh::from_text(&m.to_text()).unwrap();
    assert_eq!(m.nodes, back.nodes);
    assert_eq!(m.triangles, back.triangles);
    let r = m.refine();
    assert_eq!(r.triangles.len(), 4 * m.triangles.len());
    let exact = PI * 0.7;
    assert!((r.area() - exact).abs() < (m.area() - exact).abs());
    r.validate().unwrap();
}

#[test]
fn meshing_is_deterministic() {
    let spec = DomainSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0], [1.3, 0.8], [0.2, 1.1]]);
    assert_eq!(generate(&spec, 0.07).unwrap(), generate(&spec, 0.07).unwrap());
}

#[test]
fn rejects_bad_resolution() {
    assert!(generate(&DomainSpec::disk(1.0), 0.0).is_err());
    assert!(generate(&DomainSpec::disk(1.0), f64::NAN).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_ellipses(a in 0.5f64..2.0, ratio in 0.3f64..1.0, frac in 0.05f64..0.15) {
        let b = a * ratio;
        let h = frac * b;
        check(&DomainSpec::ellipse(a, b), h, PI * a * b, 1);
    }

    #[test]
    fn random_rectangles(w in 0.5f64..3.0, ht in 0.5f64..3.0) {
        let h = 0.08 * w.min(ht);
        let m = check(&DomainSpec::rectangle(w, ht), h, w * ht, 1);
        prop_assert!((m.area() - w * ht).abs() < 1e-9 * w * ht);
    }

    #[test]
    fn random_annuli(r_out in 0.6f64..2.0, ratio in 0.2f64..0.7) {
        let r_in = ratio * r_out;
        let h = 0.15 * (r_out - r_in).min(r_in);
        check(&DomainSpec::annulus(r_in, r_out), h, PI * (r_out * r_out - r_in * r_in), 0);
    }
}
