//! The acceptance suite. Each criterion returns a verdict with a one-line
//! summary of what was measured.

use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundConstants, Side, Status};
use crate::closedform;
use crate::eigensolve::{SolverOptions, Spectrum};
use crate::geometry::{self, CurveSpec, DomainSpec};
use crate::riesz;
use crate::solve;
use crate::Result;

pub const THETA0_EXPECTED: f64 = 0.590106;
pub const THETA0_TOL: f64 = 5e-4;
pub const THETA0_XI_TOL: f64 = 1e-4;
pub const THETA0_SECONDS: f64 = 10.0;

pub const FEM_AGREEMENT_REL: f64 = 0.01;
pub const FEM_REFINEMENT_RATIO: f64 = 2.5;
pub const FEM_AGREEMENT_SECONDS: f64 = 120.0;
/// Mesh sizes giving 28 and 56 rings on the unit disk (2437 and 9577 nodes).
pub const DISK_H_COARSE: f64 = 0.0358;
pub const DISK_H_FINE: f64 = 0.0179;

pub const LANDAU_ROOT_TOL: f64 = 1e-8;
pub const STRICTNESS_FACTOR: f64 = 10.0;
pub const RIESZ_SAMPLES: usize = 200;
pub const SMALL_RADIUS_TOL: f64 = 0.05;
pub const HOMOTHETY_REL: f64 = 1e-8;

/// Tube meshes use elements of size thickness / 5.
pub const TUBE_MESH_DIVISOR: f64 = 5.0;
/// Largest allowed ratio of successive ellipse-tube errors when the
/// thickness halves. Calibrated from one oracle run (observed 0.547, 0.520).
pub const TUBE_ERROR_RATIO: f64 = 0.7;
/// Circle tube: `λ₁(ω_0.05) ≤ ratio · λ₁(ω_0.2)` (observed 0.059).
pub const CIRCLE_TUBE_RATIO: f64 = 0.5;

pub const DIRICHLET_H: f64 = 0.05;
pub const SYMMETRY_FACTOR: f64 = 10.0;
pub const NEGATIVE_CONTROL_FACTOR: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Criteria that need no finite element solve.
pub const FAST_SUBSET: [u32; 5] = [1, 3, 6, 7, 9];
pub const ALL: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

pub fn name(id: u32) -> &'static str {
    match id {
        1 => "de Gennes constant",
        2 => "closed form vs finite elements",
        3 => "eigenvalue at the Landau radius",
        4 => "strict universal bound",
        5 => "bound sandwich",
        6 => "Riesz means and averages",
        7 => "small radius asymptote",
        8 => "thin tube limits",
        9 => "homothety",
        10 => "Dirichlet comparison",
        11 => "symmetry and determinism",
        0 => "negative control",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u32, opts: &SolverOptions) -> CriterionResult {
    run_criterion_perturbed(id, opts, 0.0)
}

/// As [`run_criterion`], with the Riesz criterion fed spectra multiplied by `1 + perturb`.
pub fn run_criterion_perturbed(id: u32, opts: &SolverOptions, perturb: f64) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => theta0_check(),
        2 => fem_agreement(opts),
        3 => landau_radius(),
        4 => universal_strict(opts),
        5 => sandwich(opts),
        6 => riesz_means(perturb),
        7 => small_radius(),
        8 => tubes(opts),
        9 => homothety(),
        10 => dirichlet(opts),
        11 => symmetry(opts),
        0 => negative_control(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: name(id).into(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run(fast: bool, opts: &SolverOptions) -> Vec<CriterionResult> {
    run_perturbed(fast, opts, 0.0)
}

pub fn run_perturbed(fast: bool, opts: &SolverOptions, perturb: f64) -> Vec<CriterionResult> {
    let ids: &[u32] = if fast { &FAST_SUBSET } else { &ALL };
    ids.iter().map(|&id| run_criterion_perturbed(id, opts, perturb)).collect()
}

type Outcome = Result<(bool, String)>;

fn theta0_check() -> Outcome {
    let start = Instant::now();
    let r = closedform::theta0(1e-5)?;
    let secs = start.elapsed().as_secs_f64();
    let dev = (r.theta0 - THETA0_EXPECTED).abs();
    let xi_gap = (r.theta0 - r.xi0 * r.xi0).abs();
    Ok((
        dev <= THETA0_TOL && xi_gap <= THETA0_XI_TOL && secs < THETA0_SECONDS,
        format!("theta0={:.7} xi0={:.6} |theta0-xi0^2|={xi_gap:.1e}", r.theta0, r.xi0),
    ))
}

fn max_rel(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| ((x - y) / y).abs()).collect()
}

fn fem_agreement(opts: &SolverOptions) -> Outcome {
    let start = Instant::now();
    let disk = DomainSpec::disk(1.0);
    let exact = closedform::disk_spectrum(1.0, 1.0, 10)?;
    let coarse = solve::fem_spectrum(&disk, 1.0, DISK_H_COARSE, 10, opts)?;
    let fine = solve::fem_spectrum(&disk, 1.0, DISK_H_FINE, 10, opts)?;
    let ec = max_rel(&coarse.eigenvalues, &exact.eigenvalues);
    let ef = max_rel(&fine.eigenvalues, &exact.eigenvalues);
    let worst = ef.iter().copied().fold(0.0, f64::max);
    let min_ratio = ec.iter().zip(&ef).map(|(c, f)| c / f).fold(f64::INFINITY, f64::min);
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= FEM_AGREEMENT_REL && min_ratio >= FEM_REFINEMENT_RATIO && secs < FEM_AGREEMENT_SECONDS,
        format!("max rel err {worst:.2e}, min refinement ratio {min_ratio:.2}"),
    ))
}

fn landau_radius() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=3usize {
        let r = (2.0 * n as f64).sqrt();
        let s = closedform::disk_spectrum(r, 1.0, n + 2)?;
        let hit = s.eigenvalues.iter().map(|l| (l - 1.0).abs()).fold(f64::INFINITY, f64::min);
        let below = s.eigenvalues.iter().filter(|&&l| l < 1.0 - LANDAU_ROOT_TOL).count();
        ok &= hit <= LANDAU_ROOT_TOL && below >= n;
        parts.push(format!("n={n}: |λ-1|={hit:.1e}, {below} below"));
    }
    Ok((ok, parts.join("; ")))
}

/// The domains of the strict-bound suite with their mesh sizes.
pub fn strict_suite() -> Vec<(DomainSpec, f64)> {
    let mut v: Vec<(DomainSpec, f64)> = [0.5, 1.0, 2.0, 4.0, 6.0]
        .iter()
        .map(|&r| (DomainSpec::disk(r), (r / 20.0).clamp(0.025, 0.1)))
        .collect();
    v.push((DomainSpec::rectangle(1.0, 1.0), 0.05));
    v.push((DomainSpec::rectangle(2.0, 1.0), 0.05));
    v.push((DomainSpec::annulus(1.0, 2.0), 0.05));
    v.push((DomainSpec::rectangle(4.0, 0.1), 0.02));
    v
}

fn universal_strict(opts: &SolverOptions) -> Outcome {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut worst_id = String::new();
    for (spec, h) in strict_suite() {
        let s = solve::fem_spectrum(&spec, 1.0, h, 1, opts)?;
        let gap = 1.0 - STRICTNESS_FACTOR * s.uncertainty(0) - s.eigenvalues[0];
        ok &= gap > 0.0;
        if gap < worst {
            worst = gap;
            worst_id = spec.id();
        }
    }
    Ok((ok, format!("smallest gap β-10·res-λ₁ = {worst:.4} on {worst_id}")))
}

fn sandwich(opts: &SolverOptions) -> Outcome {
    let constants = BoundConstants::default();
    let mut ok = true;
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut min_margin = f64::INFINITY;
    for (spec, h) in strict_suite() {
        let s = solve::fem_spectrum(&spec, 1.0, h, 1, opts)?;
        let report = solve::bound_report(&spec, 1.0, h, &s, &constants, opts)?;
        for e in &report.entries {
            let gated = match e.bound.side {
                Side::Upper => e.bound.hypotheses_ok && !e.bound.conditional,
                Side::Lower => e.bound.theorem == "kovarik" && e.bound.hypotheses_ok,
            };
            if !gated {
                continue;
            }
            checked += 1;
            min_margin = min_margin.min(e.verdict.margin);
            if e.verdict.status != Status::Pass {
                ok = false;
                failures.push(format!("{}:{}", report.domain_id, e.bound.theorem));
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{checked} bound checks, smallest margin {min_margin:.3e}")
    } else {
        format!("failed: {}", failures.join(", "))
    };
    Ok((ok, detail))
}

/// Disk whose 200 lowest eigenvalues reach far enough into the Weyl regime
/// for a 10% inflation to break the Riesz-type bounds.
pub const WEYL_RADIUS: f64 = 7.0;
pub const WEYL_COUNT: usize = 200;

/// Names of the failing Riesz-type checks, with a summary. Every spectrum
/// is multiplied by `1 + perturb` first.
fn riesz_checks(perturb: f64) -> Result<(Vec<&'static str>, String)> {
    let f = 1.0 + perturb;
    let mut failing = Vec::new();
    let b4 = closedform::disk_spectrum(4.0, 1.0, 40)?.scaled(f);
    let top = b4.eigenvalues[29];
    let zs: Vec<f64> = (0..RIESZ_SAMPLES).map(|i| top * i as f64 / (RIESZ_SAMPLES - 1) as f64).collect();
    let report = riesz::verify_on_grid(&b4, 1.0, 16.0 * PI, 30, &zs);
    let b6 = closedform::disk_spectrum(6f64.sqrt(), 1.0, 3)?.scaled(f);
    let mut sum = 0.0;
    let mut small_ok = true;
    for k in 1..=3 {
        sum += b6.eigenvalues[k - 1];
        small_ok &= sum / k as f64 <= 1.0 + 1e-12;
    }
    let weyl = closedform::disk_spectrum(WEYL_RADIUS, 1.0, WEYL_COUNT)?.scaled(f);
    let deep = riesz::verify_spectrum(&weyl, 1.0, PI * WEYL_RADIUS * WEYL_RADIUS, WEYL_COUNT);
    if !report.riesz_ok() || !deep.riesz_ok() {
        failing.push("riesz");
    }
    if !report.averages_ok() || !deep.averages_ok() {
        failing.push("averages");
    }
    if !small_ok {
        failing.push("averages below β");
    }
    if !deep.singles_ok() {
        failing.push("single");
    }
    let detail = format!(
        "B4 min Riesz margin {:.3e}, min average margin {:.3e}; B_√6 mean of 3 = {:.6}; B7 min average margin {:.3e}",
        report.min_riesz_margin(),
        report.min_average_margin(),
        sum / 3.0,
        deep.min_average_margin()
    );
    Ok((failing, detail))
}

fn riesz_means(perturb: f64) -> Outcome {
    let (failing, detail) = riesz_checks(perturb)?;
    if failing.is_empty() {
        Ok((true, detail))
    } else {
        Ok((false, format!("failed: {}; {detail}", failing.join(", "))))
    }
}

fn small_radius() -> Outcome {
    let r = 0.1;
    let branch = closedform::disk_branch_eigens(0, 1.0, r, 1.0)?;
    let l = branch.first().map(|p| p.lambda).unwrap_or(f64::NAN);
    let dev = (l * 8.0 / (r * r) - 1.0).abs();
    Ok((dev <= SMALL_RADIUS_TOL, format!("λ₁·8/R² - 1 = {dev:.2e}")))
}

fn tube_lambda(curve: &CurveSpec, th: f64, opts: &SolverOptions) -> Result<Spectrum> {
    let d = geometry::tube_domain(curve, th)?;
    solve::fem_spectrum(&d, 1.0, th / TUBE_MESH_DIVISOR, 1, opts)
}

pub const TUBE_THICKNESSES: [f64; 3] = [0.2, 0.1, 0.05];

fn tubes(opts: &SolverOptions) -> Outcome {
    let ellipse = CurveSpec::Ellipse { a: 1.0, b: 0.5 };
    let (l, s) = geometry::curve_invariants(&ellipse)?;
    let lc = closedform::curve_lambda1(l, s, 1.0)?;
    let mut errs = Vec::new();
    let mut lb_ok = true;
    for th in TUBE_THICKNESSES {
        let sp = tube_lambda(&ellipse, th, opts)?;
        let lam = sp.eigenvalues[0];
        errs.push((lam - lc).abs());
        lb_ok &= lam >= bounds::tube_lb(lc, 1.0, th).value - sp.uncertainty(0);
    }
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[1] / w[0]).collect();
    let ellipse_ok = lb_ok && ratios.iter().all(|&r| r <= TUBE_ERROR_RATIO);

    let circle = CurveSpec::Circle { radius: 2f64.sqrt() };
    let mut lams = Vec::new();
    for th in TUBE_THICKNESSES {
        lams.push(tube_lambda(&circle, th, opts)?.eigenvalues[0]);
    }
    let circle_ok = lams.windows(2).all(|w| w[1] < w[0]) && lams[2] <= CIRCLE_TUBE_RATIO * lams[0];
    Ok((
        ellipse_ok && circle_ok,
        format!(
            "ellipse errors {:.2e}/{:.2e}/{:.2e}, circle λ₁ {:.2e}/{:.2e}/{:.2e}",
            errs[0], errs[1], errs[2], lams[0], lams[1], lams[2]
        ),
    ))
}

fn homothety() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 2.0] {
        let base = closedform::disk_spectrum(1.0, 1.0, 12)?;
        let (_, beta_scaled) = bounds::scale_map(0.0, alpha, 1.0);
        let scaled = closedform::disk_spectrum(alpha, beta_scaled, 12)?;
        for (b, s) in base.eigenvalues.iter().zip(&scaled.eigenvalues) {
            let (expect, _) = bounds::scale_map(*b, alpha, 1.0);
            worst = worst.max((s - expect).abs() / expect.abs().max(f64::MIN_POSITIVE));
        }
        let (l, area) = (2.0 * PI * 1.3, PI * 1.3 * 1.3);
        let c = closedform::circle_spectrum(l, area, 1.0, 12)?;
        let cs = closedform::circle_spectrum(alpha * l, alpha * alpha * area, beta_scaled, 12)?;
        for (b, s) in c.eigenvalues.iter().zip(&cs.eigenvalues) {
            let (expect, _) = bounds::scale_map(*b, alpha, 1.0);
            worst = worst.max((s - expect).abs() / expect.abs().max(1e-300));
        }
    }
    Ok((worst <= HOMOTHETY_REL, format!("max relative defect {worst:.1e}")))
}

pub const DIRICHLET_RADII: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn dirichlet(opts: &SolverOptions) -> Outcome {
    let mut d = Vec::new();
    let mut n = Vec::new();
    for r in DIRICHLET_RADII {
        d.push(solve::dirichlet_spectrum(&DomainSpec::disk(r), 1.0, DIRICHLET_H, 1, opts)?.eigenvalues[0]);
        n.push(closedform::disk_spectrum(r, 1.0, 1)?.eigenvalues[0]);
    }
    let ok = d.windows(2).all(|w| w[1] < w[0]) && d.iter().all(|&l| l > 1.0) && n.iter().zip(&d).all(|(a, b)| a < b);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join("/");
    Ok((ok, format!("Dirichlet {} Neumann {}", fmt(&d), fmt(&n))))
}

fn symmetry(opts: &SolverOptions) -> Outcome {
    let spec = DomainSpec::polygon(vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]);
    let h = 0.08;
    let plus = solve::fem_spectrum(&spec, 1.0, h, 6, opts)?;
    let minus = solve::fem_spectrum(&spec, -1.0, h, 6, opts)?;
    let mut worst: f64 = 0.0;
    let mut sym_ok = true;
    for j in 0..6 {
        let diff = (plus.eigenvalues[j] - minus.eigenvalues[j]).abs();
        let allowed = SYMMETRY_FACTOR * (plus.uncertainty(j) + minus.uncertainty(j)) + 1e-12;
        sym_ok &= diff <= allowed;
        worst = worst.max(diff);
    }
    let again = solve::fem_spectrum(&spec, 1.0, h, 6, opts)?;
    let identical = plus.to_csv() == again.to_csv();
    Ok((
        sym_ok && identical,
        format!("max |λ(β)-λ(-β)| = {worst:.1e}, repeated run byte-identical: {identical}"),
    ))
}

/// Criterion 6 on spectra inflated by 10%. Passes when the inflated
/// spectra are rejected; the detail names the rejecting checks.
fn negative_control() -> Outcome {
    let (failing, _) = riesz_checks(NEGATIVE_CONTROL_FACTOR - 1.0)?;
    if failing.is_empty() {
        Ok((false, "inflated spectra accepted".into()))
    } else {
        Ok((true, format!("inflated spectra rejected by: {}", failing.join(", "))))
    }
}
