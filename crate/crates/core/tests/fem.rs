use std::f64::consts::PI;
use std::sync::Arc;

use magspec_core::eigensolve::{self, SolverOptions};
use magspec_core::fem::{self, PotentialField};
use magspec_core::geometry::DomainSpec;
use magspec_core::mesh::generate;
use magspec_core::solve;
use num_complex::Complex64;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn zero_field_rectangle_matches_cosine_modes() {
    let (w, h) = (2.0, 1.0);
    let mut exact: Vec<f64> = (0..5)
        .flat_map(|m| (0..5).map(move |n| PI * PI * ((m * m) as f64 / (w * w) + (n * n) as f64 / (h * h))))
        .collect();
    exact.sort_by(f64::total_cmp);
    let sp = solve::fem_spectrum(&DomainSpec::rectangle(w, h), 0.0, 0.04, 6, &SolverOptions::default()).unwrap();
    assert!(sp.eigenvalues[0].abs() < 1e-8);
    for (got, want) in sp.eigenvalues.iter().zip(&exact).skip(1) {
        assert!(rel(*got, *want) < 0.01, "{got} vs {want}");
    }
}

#[test]
fn zero_field_dirichlet_disk_matches_bessel_zero() {
    let j01 = 2.404_825_557_695_773_f64;
    let sp = solve::dirichlet_spectrum(&DomainSpec::disk(1.0), 0.0, 0.04, 1, &SolverOptions::default()).unwrap();
    assert!(rel(sp.eigenvalues[0], j01 * j01) < 0.01, "{}", sp.eigenvalues[0]);
}

#[test]
fn large_dirichlet_disk_approaches_landau_level() {
    let beta = 4.0;
    let sp = solve::dirichlet_spectrum(&DomainSpec::disk(3.0), beta, 0.08, 1, &SolverOptions::default()).unwrap();
    assert!(rel(sp.eigenvalues[0], beta) < 0.01, "{}", sp.eigenvalues[0]);
}

#[test]
fn matrices_are_hermitian_and_consistent() {
    let mesh = generate(&DomainSpec::ellipse(1.0, 0.6), 0.1).unwrap();
    let sys = fem::assemble_magnetic(&mesh, &fem::standard_potential(2.0));
    assert!(sys.hermitian_defect() < 1e-13);
    let ones = vec![Complex64::new(1.0, 0.0); sys.dof_count];
    // Without a field, constants are in the kernel.
    let free = fem::assemble_magnetic(&mesh, &fem::standard_potential(0.0));
    assert!(fem::rayleigh(&free, &ones).unwrap().abs() < 1e-12);
    // With a field, the quotient of the constant is ∫|A|²/|Ω|.
    let q = fem::rayleigh(&sys, &ones).unwrap();
    let exact = (2.0f64 / 2.0).powi(2) * (1.0 + 0.36) / 4.0;
    assert!(rel(q, exact) < 0.02, "{q} vs {exact}");
    assert!(fem::rayleigh(&sys, &[]).is_err());
}

#[test]
fn reversed_field_gives_same_spectrum() {
    let spec = DomainSpec::polygon(vec![[0.0, 0.0], [1.5, 0.0], [1.2, 1.0], [0.1, 0.9]]);
    let opts = SolverOptions::default();
    let a = solve::fem_spectrum(&spec, 3.0, 0.06, 4, &opts).unwrap();
    let b = solve::fem_spectrum(&spec, -3.0, 0.06, 4, &opts).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!(rel(*x, *y) < 1e-7, "{x} vs {y}");
    }
}

#[test]
fn gauge_change_leaves_spectrum_nearly_unchanged() {
    let beta = 2.0;
    let mesh = generate(&DomainSpec::disk(1.0), 0.04).unwrap();
    let opts = SolverOptions::default();
    let standard = eigensolve::smallest(&fem::assemble_magnetic(&mesh, &fem::standard_potential(beta)), 3, &opts).unwrap();
    // A + ∇(x²y)
    let gauged = PotentialField::Custom(Arc::new(move |p: [f64; 2]| {
        [-0.5 * beta * p[1] + 2.0 * p[0] * p[1], 0.5 * beta * p[0] + p[0] * p[0]]
    }));
    let other = eigensolve::smallest(&fem::assemble_magnetic(&mesh, &gauged), 3, &opts).unwrap();
    for (x, y) in standard.eigenvalues.iter().zip(&other.eigenvalues) {
        assert!(rel(*x, *y) < 0.02, "{x} vs {y}");
    }
}

#[test]
fn torsion_of_disk() {
    // −Δφ = 1 on the unit disk with φ = 0 on the boundary: φ = (1 − r²)/4.
    let mesh = generate(&DomainSpec::disk(1.0), 0.05).unwrap();
    let phi = fem::solve_torsion(&mesh, &|_| 1.0).unwrap();
    let integral = phi.integrate(|v, _| v);
    assert!(rel(integral, PI / 8.0) < 0.01, "{integral}");
}

#[test]
fn refinement_converges_to_closed_form() {
    let exact = magspec_core::closedform::disk_spectrum(1.0, 2.0, 1).unwrap().eigenvalues[0];
    let opts = SolverOptions::default();
    let coarse = solve::fem_spectrum(&DomainSpec::disk(1.0), 2.0, 0.1, 1, &opts).unwrap().eigenvalues[0];
    let fine = solve::fem_spectrum(&DomainSpec::disk(1.0), 2.0, 0.05, 1, &opts).unwrap().eigenvalues[0];
    assert!((fine - exact).abs() < (coarse - exact).abs());
    assert!(rel(fine, exact) < 0.005, "{fine} vs {exact}");
}

#[test]
fn solver_seed_does_not_matter() {
    let spec = DomainSpec::ellipse(1.0, 0.5);
    let a = SolverOptions { seed: 1, ..SolverOptions::default() };
    let b = SolverOptions { seed: 99, ..SolverOptions::default() };
    let x = solve::fem_spectrum(&spec, 1.5, 0.06, 3, &a).unwrap();
    let y = solve::fem_spectrum(&spec, 1.5, 0.06, 3, &b).unwrap();
    for (u, v) in x.eigenvalues.iter().zip(&y.eigenvalues) {
        assert!(rel(*u, *v) < 1e-7);
    }
    assert!(x.max_residual() < 1e-7);
}
