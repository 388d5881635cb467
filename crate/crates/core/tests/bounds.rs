use std::f64::consts::PI;

use magspec_core::bounds::*;
use magspec_core::closedform::disk_spectrum;
use magspec_core::geometry::{self, boundary_distance, contains, DomainSpec};
use proptest::prelude::*;

fn holds(b: &Bound, lambda: f64) -> bool {
    !matches!(check_value(b, lambda, 1e-10).status, Status::Fail)
}

#[test]
fn verdict_semantics() {
    let strict = ub_universal(1.0);
    assert!(strict.strict);
    assert_eq!(check_value(&strict, 0.5, 0.0).status, Status::Pass);
    assert_eq!(check_value(&strict, 1.0, 0.0).status, Status::Fail);
    assert_eq!(check_value(&strict, 0.999, 0.01).status, Status::Fail);
    let lower = lb_covering(&[4.0, 2.0, 3.0], 4).unwrap();
    assert_eq!(lower.value, 0.5);
    assert_eq!(check_value(&lower, 0.5, 0.0).status, Status::Pass);
    assert!(lb_covering(&[], 2).is_err());
    assert!(lb_covering(&[1.0], 0).is_err());
}

#[test]
fn scale_map_is_exact_for_disks() {
    let (l, b) = (disk_spectrum(1.0, 2.0, 1).unwrap().eigenvalues[0], 2.0);
    let (ls, bs) = scale_map(l, 2.0, b);
    let direct = disk_spectrum(2.0, bs, 1).unwrap().eigenvalues[0];
    assert!((ls - direct).abs() < 1e-9 * direct);
}

#[test]
fn curve_bounds() {
    let c = geometry::CurveSpec::Circle { radius: 1.0 };
    let (l, a) = geometry::curve_invariants(&c).unwrap();
    let lam = magspec_core::closedform::curve_lambda1(l, a, 1.0).unwrap();
    assert!(holds(&curve_ub_quarter(1.0), lam));
    let t = tube_lb_curve(&c, 1.0, 0.1).unwrap();
    assert!((t.value - (lam - 0.1)).abs() < 1e-12);
    // Flux β|Ω|/2π = 1 is an integer.
    let integer = tube_lb_curve(&c, 2.0, 0.1).unwrap();
    assert!(!integer.hypotheses_ok);
}

#[test]
fn defaults_are_conditional() {
    let k = BoundConstants::default();
    let b = lb_rolling(0.5, 1.0, &k);
    assert!(b.conditional);
    assert_eq!(check_value(&b, 10.0, 0.0).status, Status::Conditional);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn disk_upper_bounds_hold(r in 0.3f64..4.0, beta in 0.2f64..3.0) {
        let l1 = disk_spectrum(r, beta, 1).unwrap().eigenvalues[0];
        let area = PI * r * r;
        prop_assert!(holds(&ub_universal(beta), l1));
        prop_assert!(holds(&ub_circumradius(r, beta), l1));
        prop_assert!(holds(&ub_simply_connected_area(area, beta, true), l1));
        prop_assert!(holds(&ub_fh2(area, beta, true), l1));
        prop_assert!(holds(&ub_width(2.0 * r, beta), l1));
        prop_assert!(holds(&ub_theta0_class(&DomainSpec::disk(r), beta, THETA0_REFERENCE), l1));
    }

    #[test]
    fn circumradius_bound_even_in_field(beta in -3.0f64..3.0) {
        prop_assume!(beta.abs() > 0.05);
        let a = ub_circumradius(1.0, beta);
        let b = ub_circumradius(1.0, -beta);
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn eps_net_is_separated_and_deep(w in 0.8f64..3.0, ht in 0.8f64..3.0, frac in 0.2f64..1.0) {
        let spec = DomainSpec::rectangle(w, ht);
        let eps = frac * 0.5 * w.min(ht);
        let (net, k) = eps_net(&spec, eps, 61).unwrap();
        prop_assert!(!net.is_empty());
        prop_assert!(k >= 1);
        for (i, p) in net.iter().enumerate() {
            prop_assert!(contains(&spec, *p));
            prop_assert!(boundary_distance(&spec, *p) >= eps * (1.0 - 1e-6));
            for q in &net[i + 1..] {
                prop_assert!((p[0] - q[0]).hypot(p[1] - q[1]) >= eps * (1.0 - 1e-9));
            }
        }
    }
}

#[test]
fn eps_net_rejects_too_large_radius() {
    assert!(eps_net(&DomainSpec::disk(1.0), 1.5, 41).is_err());
    assert!(eps_net(&DomainSpec::disk(1.0), 0.0, 41).is_err());
    let (net, _) = eps_net(&DomainSpec::disk(1.0), 1.0, 41).unwrap();
    assert_eq!(net, vec![[0.0, 0.0]]);
}
