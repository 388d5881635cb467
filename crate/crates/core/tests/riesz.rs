use std::f64::consts::PI;

use magspec_core::closedform::disk_spectrum;
use magspec_core::riesz::*;
use proptest::prelude::*;

#[test]
fn remainder_is_at_most_a_quarter_of_the_field() {
    for beta in [0.5, 1.0, 3.0] {
        for i in 1..=4000 {
            let x = i as f64 * 0.005;
            let v = remainder_r(x, beta) * x / beta;
            assert!(v <= 0.25 + 1e-15 && v >= 0.0, "x={x}");
        }
    }
}

#[test]
fn averages_below_field_in_the_lowest_level() {
    for (beta, area) in [(1.0, PI), (4.0, 2.0), (10.0, 12.0)] {
        let kmax = (beta * area / (2.0 * PI)).floor() as usize;
        for k in 1..=kmax {
            assert!(avg_upper(k, beta, area) <= beta * (1.0 + 1e-12), "β={beta} k={k}");
        }
    }
}

#[test]
fn sum_identity_holds() {
    for (beta, area) in [(1.0, PI), (2.5, 4.0), (7.0, 0.7)] {
        for k in 1..200 {
            let d = sums_identity_defect(k, beta, area);
            assert!(d.abs() < 1e-9 * (1.0 + k as f64 * avg_upper(k, beta, area)), "k={k}: {d}");
        }
    }
}

#[test]
fn empirical_riesz_mean() {
    let (v, ok) = r1_empirical(&[1.0, 2.0, 5.0], 3.0);
    assert_eq!(v, 3.0);
    assert!(ok);
    assert!(!r1_empirical(&[1.0, 2.0], 3.0).1);
    assert_eq!(fluctuation(2.25), -0.25);
}

#[test]
fn report_csv_is_stable() {
    let sp = disk_spectrum(2.0, 1.0, 30).unwrap();
    let a = verify_spectrum(&sp, 1.0, 4.0 * PI, 30);
    let b = verify_spectrum(&sp, 1.0, 4.0 * PI, 30);
    assert_eq!(a.to_csv(), b.to_csv());
    assert!(a.to_csv().starts_with("z,R1_emp,R1_low,margin,valid\n"));
    assert!(a.all_ok());
}

#[test]
fn inflated_spectrum_is_rejected() {
    let sp = disk_spectrum(7.0, 1.0, 200).unwrap();
    let area = 49.0 * PI;
    assert!(verify_spectrum(&sp, 1.0, area, 200).all_ok());
    assert!(!verify_spectrum(&sp.scaled(1.1), 1.0, area, 200).all_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn disk_spectra_satisfy_riesz_bounds(r in 0.5f64..3.0, beta in 0.3f64..3.0) {
        let sp = disk_spectrum(r, beta, 25).unwrap();
        let rep = verify_spectrum(&sp, beta, PI * r * r, 25);
        prop_assert!(rep.riesz_ok(), "min margin {}", rep.min_riesz_margin());
        prop_assert!(rep.averages_ok(), "min margin {}", rep.min_average_margin());
        prop_assert!(rep.singles_ok());
    }

    #[test]
    fn riesz_lower_bound_continuous_at_landau_levels(beta in 0.1f64..5.0, area in 0.5f64..20.0, l in 0u32..6) {
        let z = beta * (2 * l + 1) as f64;
        let d = 1e-9 * z;
        prop_assert!((r1_lower(z - d, beta, area) - r1_lower(z + d, beta, area)).abs() < 1e-6 * (1.0 + area * z * z));
    }

    #[test]
    fn heat_bound_below_weyl_term(t in 1e-3f64..5.0, beta in 0.0f64..5.0, area in 0.5f64..10.0) {
        prop_assert!(heat_lower(t, beta, area) <= area / (4.0 * PI * t) * (1.0 + 1e-12));
    }
}
