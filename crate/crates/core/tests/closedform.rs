use std::f64::consts::PI;

use magspec_core::closedform::*;
use proptest::prelude::*;

const THETA0: f64 = 0.5901061249;

#[test]
fn kummer_elementary_cases() {
    for y in [0.0, 0.3, 1.0, 4.0, 12.0] {
        let e = (y as f64).exp();
        assert!((kummer(1.7, 1.7, y) - e).abs() <= 1e-12 * e);
        if y > 0.0 {
            let m12 = (e - 1.0) / y;
            assert!((kummer(1.0, 2.0, y) - m12).abs() <= 1e-12 * m12);
        }
        let b = 2.5;
        let poly = 1.0 - 2.0 * y / b + y * y / (b * (b + 1.0));
        assert!((kummer(-2.0, b, y) - poly).abs() <= 1e-12 * (1.0 + poly.abs()));
    }
}

#[test]
fn laguerre_explicit() {
    for n in 0..5u32 {
        let nf = n as f64;
        for y in [0.0, 0.5, 2.0, 7.0] {
            let l2 = (nf + 1.0) * (nf + 2.0) / 2.0 - (nf + 2.0) * y + y * y / 2.0;
            assert!((laguerre(2, n, y) - l2).abs() < 1e-10 * (1.0 + l2.abs()));
            assert!((laguerre(1, n, y) - (nf + 1.0 - y)).abs() < 1e-12);
            assert_eq!(laguerre(0, n, y), 1.0);
        }
    }
}

#[test]
fn landau_density_is_complete() {
    for y in [0.5, 2.0, 5.0] {
        let s = landau_sum_partial(0, y, 300);
        assert!((s - 1.0).abs() < 1e-10, "y={y} sum={s}");
        for l in 1..4 {
            let s = landau_sum_partial(l, y, 300);
            assert!(s > 0.0 && s <= 1.0 + 1e-10, "l={l} y={y} sum={s}");
        }
    }
    assert_eq!(landau_level(2, 3.0), 15.0);
}

#[test]
fn circle_spectrum_matches_free_rotor() {
    let (r, beta) = (1.3, 2.2);
    let (l, a) = (2.0 * PI * r, PI * r * r);
    let flux = beta * a / (2.0 * PI);
    let mut expected: Vec<f64> = (-20i64..=20).map(|n| (2.0 * PI / l).powi(2) * (n as f64 - flux).powi(2)).collect();
    expected.sort_by(f64::total_cmp);
    let sp = circle_spectrum(l, a, beta, 8).unwrap();
    for (got, want) in sp.eigenvalues.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-12 * (1.0 + want), "{got} vs {want}");
    }
    assert_eq!(curve_lambda1(l, a, beta).unwrap(), sp.eigenvalues[0]);
}

#[test]
fn weak_field_disk_approaches_bessel_neumann() {
    // First nonzero Neumann eigenvalue of the unit disk is j'_{1,1}².
    let jp11 = 1.841_183_781_340_659_3_f64;
    let sp = disk_spectrum(1.0, 1e-4, 3).unwrap();
    assert!(sp.eigenvalues[0] < 1e-3);
    assert!((sp.eigenvalues[1] - jp11 * jp11).abs() < 1e-3);
    assert!((sp.eigenvalues[2] - jp11 * jp11).abs() < 1e-3);
}

#[test]
fn strong_field_disk_stays_below_de_gennes_level() {
    let mut prev = 0.0;
    for r in [2.0, 3.0, 4.0, 6.0] {
        let l1 = disk_spectrum(r, 1.0, 1).unwrap().eigenvalues[0];
        assert!(l1 < THETA0, "R={r}: {l1}");
        assert!(l1 > prev);
        prev = l1;
    }
    assert!(prev > 0.45);
}

#[test]
fn de_gennes_constant() {
    let r = theta0(1e-5).unwrap();
    assert!((r.theta0 - THETA0).abs() < 5e-6, "{}", r.theta0);
    let at_min = mu1(-THETA0.sqrt(), DE_GENNES_T, DE_GENNES_N).unwrap();
    assert!((at_min - THETA0).abs() < 1e-5);
    assert!(mu1(-0.3, DE_GENNES_T, DE_GENNES_N).unwrap() > at_min);
    assert!(mu1(-1.2, DE_GENNES_T, DE_GENNES_N).unwrap() > at_min);
}

#[test]
fn branch_roots_are_sign_changes_of_the_ode() {
    for (n, beta, r) in [(0i64, 1.0, 1.0), (2, 3.0, 0.8), (-1, 2.0, 1.5)] {
        for p in branch_lowest(n, beta, r, 3).unwrap() {
            let d = 1e-6 * (1.0 + p.lambda);
            let lo = branch_function_ode(n, beta, r, p.lambda - d);
            let hi = branch_function_ode(n, beta, r, p.lambda + d);
            assert!(lo * hi <= 0.0, "n={n} λ={}", p.lambda);
        }
    }
}

#[test]
fn disk_spectrum_is_sorted_and_labelled() {
    let sp = disk_spectrum(1.5, 2.0, 25).unwrap();
    assert_eq!(sp.k(), 25);
    assert_eq!(sp.labels.len(), 25);
    assert!(sp.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    let sp_neg = disk_spectrum(1.5, -2.0, 25).unwrap();
    for (a, b) in sp.eigenvalues.iter().zip(&sp_neg.eigenvalues) {
        assert!((a - b).abs() < 1e-9 * (1.0 + a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_and_ode_agree_in_sign(n in 0i64..4, beta in 0.2f64..4.0, r in 0.3f64..2.5, t in 0.05f64..3.0) {
        let lambda = t * beta * (2 * n + 1) as f64 + 0.1;
        let s = branch_function(n, beta, r, lambda);
        let o = branch_function_ode(n, beta, r, lambda);
        prop_assume!(s.abs() > 1e-6 && o.abs() > 1e-6);
        prop_assert_eq!(s > 0.0, o > 0.0);
    }

    #[test]
    fn disk_homothety(r in 0.4f64..2.0, beta in 0.3f64..3.0, alpha in 0.5f64..2.0) {
        let a = disk_spectrum(r, beta, 4).unwrap();
        let b = disk_spectrum(alpha * r, beta / (alpha * alpha), 4).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x / (alpha * alpha) - y).abs() < 1e-7 * (1.0 + x));
        }
    }

    #[test]
    fn disk_ground_state_below_field(r in 0.3f64..4.0, beta in 0.2f64..3.0) {
        let l1 = disk_spectrum(r, beta, 1).unwrap().eigenvalues[0];
        prop_assert!(l1 > 0.0 && l1 < beta);
    }
}
