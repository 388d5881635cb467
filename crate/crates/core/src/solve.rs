//! End-to-end pipelines: mesh, assemble, solve, and evaluate bounds.

use serde::{Deserialize, Serialize};

use crate::bounds::{self, Bound, BoundConstants, Verdict};
use crate::eigensolve::{self, SolverOptions, Spectrum};
use crate::fem::{self, PotentialField};
use crate::geometry::{self, DomainSpec, Shape};
use crate::mesh::{self, TriangleMesh};
use crate::Result;

/// Lowest `k` magnetic Neumann eigenvalues of `spec` for the standard potential.
pub fn fem_spectrum(spec: &DomainSpec, beta: f64, h: f64, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let mesh = mesh::generate(spec, h)?;
    fem_spectrum_on(&mesh, &fem::standard_potential(beta), beta, &spec.id(), h, k, opts)
}

pub fn fem_spectrum_on(
    mesh: &TriangleMesh,
    potential: &PotentialField,
    beta: f64,
    domain_id: &str,
    h: f64,
    k: usize,
    opts: &SolverOptions,
) -> Result<Spectrum> {
    let sys = fem::assemble_magnetic(mesh, potential);
    let mut s = eigensolve::smallest(&sys, k, opts)?;
    s.beta = beta;
    s.domain_id = domain_id.to_string();
    s.h = Some(h);
    Ok(s)
}

/// Lowest `k` magnetic Dirichlet eigenvalues.
pub fn dirichlet_spectrum(spec: &DomainSpec, beta: f64, h: f64, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let mesh = mesh::generate(spec, h)?;
    let sys = fem::assemble_dirichlet(&mesh, &fem::standard_potential(beta));
    let mut s = eigensolve::smallest(&sys, k, opts)?;
    s.beta = beta;
    s.domain_id = format!("{}_dirichlet", spec.id());
    s.h = Some(h);
    Ok(s)
}

/// First positive Neumann eigenvalue of the Laplacian and its residual.
pub fn neumann_lambda2(spec: &DomainSpec, h: f64, opts: &SolverOptions) -> Result<(f64, f64)> {
    let mesh = mesh::generate(spec, h)?;
    Ok(eigensolve::neumann_lambda2(&mesh, opts)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    #[serde(flatten)]
    pub bound: Bound,
    pub verdict: Verdict,
    /// Quantity the bound is compared with.
    pub compared_with: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub domain_id: String,
    pub beta: f64,
    pub lambda1: f64,
    pub uncertainty: f64,
    pub lambda2_neumann: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn entry(&self, theorem: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.bound.theorem == theorem)
    }
}

fn convex_symmetric(spec: &DomainSpec) -> bool {
    matches!(spec.shape, Shape::Disk { .. } | Shape::Rectangle { .. } | Shape::Ellipse { .. })
}

/// Every bound applicable to a domain, checked against `spectrum`, which
/// must be the FEM spectrum of `spec` at mesh size `h` and field `beta`.
pub fn bound_report(
    spec: &DomainSpec,
    beta: f64,
    h: f64,
    spectrum: &Spectrum,
    constants: &BoundConstants,
    opts: &SolverOptions,
) -> Result<BoundReport> {
    constants.validate()?;
    let s = geometry::summarize(spec)?;
    let mesh = mesh::generate(spec, h)?;
    let sc = s.simply_connected;
    let b = beta.abs();
    let lambda1 = spectrum.eigenvalues[0];
    let unc = spectrum.uncertainty(0);
    let (l2n, l2n_res) = eigensolve::neumann_lambda2(&mesh, opts)?;
    let l2n_unc = l2n_res * l2n.max(1.0);

    let mut upper = vec![
        bounds::ub_universal(b),
        bounds::ub_circumradius(s.circumradius, b),
        bounds::ub_theta0_class(spec, b, constants.theta0),
        bounds::ub_width(s.width, b),
        bounds::ub_simply_connected_area(s.area, b, sc),
        bounds::ub_fh2(s.area, b, sc),
    ];
    if let Some(l) = spec.flags.self_tiling_lambda.or(constants.lambda_selftiling) {
        upper.push(bounds::ub_selftiling(l, b, constants.theta0)?);
    }
    let torsion = fem::solve_torsion(&mesh, &|_| b)?;
    let field: fem::ScalarField = std::sync::Arc::new(move |_| b);
    let [strict, tors] = bounds::ub_variable(b, torsion.phi_star, true);
    let integral = bounds::ub_variable_integral(&torsion, &field);
    for v in [strict, tors, integral] {
        upper.push(if sc {
            v
        } else {
            let mut v = v;
            v.hypotheses_ok = false;
            v.messages.push("holds for the canonical potential only on this domain".into());
            v
        });
    }

    let mut entries: Vec<BoundEntry> = upper
        .into_iter()
        .chain([
            bounds::lb_kovarik(s.area, s.inradius, l2n, b, sc),
            {
                let mut st = bounds::lb_star(s.inradius, s.circumradius, s.inradius, b, constants);
                if !convex_symmetric(spec) {
                    st.hypotheses_ok = false;
                    st.messages.push("star-shapedness about a common centre not certified".into());
                }
                st
            },
            bounds::lb_rolling(s.rolling_radius, b, constants),
        ])
        .map(|bound| {
            let verdict = bounds::check_value(&bound, lambda1, unc);
            BoundEntry { bound, verdict, compared_with: "lambda1".into() }
        })
        .collect();

    let mut chen = bounds::lb_chenli(s.inradius, s.circumradius, constants);
    if !convex_symmetric(spec) {
        chen.hypotheses_ok = false;
        chen.messages.push("star-shapedness about a common centre not certified".into());
    }
    let verdict = bounds::check_value(&chen, l2n, l2n_unc);
    entries.push(BoundEntry { bound: chen, verdict, compared_with: "lambda2_neumann".into() });

    Ok(BoundReport {
        domain_id: spec.id(),
        beta,
        lambda1,
        uncertainty: unc,
        lambda2_neumann: l2n,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Status;

    #[test]
    fn unit_square_neumann() {
        let (l2, _) = neumann_lambda2(&DomainSpec::rectangle(1.0, 1.0), 0.05, &SolverOptions::default()).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(l2 > pi2 && (l2 - pi2) / pi2 < 0.01, "{l2}");
    }

    #[test]
    fn annulus_report_gates() {
        let spec = DomainSpec::annulus(1.0, 2.0);
        let opts = SolverOptions::default();
        let sp = fem_spectrum(&spec, 1.0, 0.15, 2, &opts).unwrap();
        let r = bound_report(&spec, 1.0, 0.15, &sp, &BoundConstants::default(), &opts).unwrap();
        for name in ["simply_connected_area", "area_quadratic", "kovarik", "variable_torsion"] {
            assert_eq!(r.entry(name).unwrap().verdict.status, Status::Inapplicable, "{name}");
        }
        assert_eq!(r.entry("universal").unwrap().verdict.status, Status::Pass);
        assert_eq!(r.entry("rolling_radius").unwrap().verdict.status, Status::Conditional);
    }
}
