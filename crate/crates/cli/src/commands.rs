use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use magspec_core::bounds::BoundConstants;
use magspec_core::eigensolve::SolverOptions;
use magspec_core::geometry::{self, DomainSpec, Shape};
use magspec_core::{bounds, closedform, riesz, solve, verify, Spectrum};
use serde_json::json;

use crate::output::{emit_csv, emit_json};
use crate::{CliError, CliResult, DomainArgs, SolverArgs};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn load_domain(text: &str) -> CliResult<DomainSpec> {
    let t = text.trim();
    let spec: DomainSpec = if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| invalid(format!("domain JSON: {e}")))?
    } else if Path::new(t).is_file() {
        let body = fs::read_to_string(t).map_err(|e| CliError::Io(format!("{t}: {e}")))?;
        serde_json::from_str(&body).map_err(|e| invalid(format!("{t}: {e}")))?
    } else if t.ends_with(".json") {
        return Err(CliError::Io(format!("{t}: no such file")));
    } else {
        t.parse()?
    };
    spec.validate()?;
    Ok(spec)
}

fn options(s: &SolverArgs) -> CliResult<SolverOptions> {
    if !(s.tol > 0.0 && s.tol < 1.0) {
        return Err(invalid(format!("--tol must lie in (0, 1), got {}", s.tol)));
    }
    Ok(SolverOptions { tol: s.tol, seed: s.seed, ..SolverOptions::default() })
}

fn check_beta(beta: f64) -> CliResult<()> {
    if beta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("--beta must be finite, got {beta}")))
    }
}

fn check_domain_args(d: &DomainArgs) -> CliResult<DomainSpec> {
    check_beta(d.beta)?;
    if !(d.h > 0.0 && d.h.is_finite()) {
        return Err(invalid(format!("--h must be positive, got {}", d.h)));
    }
    load_domain(&d.domain)
}

/// Radii from `start:stop:count` or a comma list.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let t = text.trim();
    let grid: Vec<f64> = if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid(format!("grid `{t}`: expected start:stop:count")));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| invalid(format!("grid start `{}`", parts[0])))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| invalid(format!("grid stop `{}`", parts[1])))?;
        let n: usize = parts[2].trim().parse().map_err(|_| invalid(format!("grid count `{}`", parts[2])))?;
        match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        t.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| invalid(format!("grid value `{s}`"))))
            .collect::<CliResult<_>>()?
    };
    if grid.is_empty() {
        return Err(invalid("empty grid"));
    }
    if let Some(bad) = grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(invalid(format!("grid values must be positive, got {bad}")));
    }
    Ok(grid)
}

fn compute_spectrum(
    spec: &DomainSpec,
    d: &DomainArgs,
    k: usize,
    closed_form: bool,
    opts: &SolverOptions,
) -> CliResult<Spectrum> {
    if k == 0 {
        return Err(invalid("--k must be at least 1"));
    }
    if closed_form {
        match spec.shape {
            Shape::Disk { radius } => Ok(closedform::disk_spectrum(radius, d.beta, k)?),
            _ => Err(invalid("--closed-form is available for disks only")),
        }
    } else {
        Ok(solve::fem_spectrum(spec, d.beta, d.h, k, opts)?)
    }
}

pub fn spectrum(d: &DomainArgs, k: usize, closed_form: bool, s: &SolverArgs, out: Option<&Path>) -> CliResult<()> {
    let spec = check_domain_args(d)?;
    let opts = options(s)?;
    let sp = compute_spectrum(&spec, d, k, closed_form, &opts)?;
    let config = json!({
        "command": "spectrum", "domain": spec, "beta": d.beta, "h": d.h, "k": k,
        "closed_form": closed_form, "tol": s.tol, "seed": s.seed,
    });
    let summary = json!({
        "count": sp.k(),
        "max_residual": sp.max_residual(),
        "method": sp.method.tag(),
        "geometry": geometry::summarize(&spec)?,
        "labels": sp.labels,
    });
    emit_csv(out, &config, &sp.to_csv(), summary)
}

pub fn disk_branches(
    beta: f64,
    r_grid: &str,
    n_max: i64,
    negative: bool,
    j_max: usize,
    circle: bool,
    out: Option<&Path>,
) -> CliResult<()> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Err(invalid("--beta must be nonzero"));
    }
    if n_max < 0 || j_max == 0 {
        return Err(invalid("need --n-max ≥ 0 and --j-max ≥ 1"));
    }
    let radii = parse_grid(r_grid)?;
    let mut body = String::from("n,j,lambda,R,beta,residual\n");
    for &r in &radii {
        if circle {
            let sp = closedform::circle_spectrum(2.0 * PI * r, PI * r * r, beta, 1)?;
            let n = sp.labels.first().map(|l| l.0).unwrap_or(0);
            body.push_str(&format!("{n},1,{},{r},{beta},0\n", sp.eigenvalues[0]));
            continue;
        }
        let lo = if negative { -n_max } else { 0 };
        for n in lo..=n_max {
            for p in closedform::branch_lowest(n, beta, r, j_max)? {
                body.push_str(&format!("{},{},{},{},{},{}\n", p.n, p.j, p.lambda, r, beta, p.residual));
            }
        }
    }
    let config = json!({
        "command": "disk-branches", "beta": beta, "r_grid": radii, "n_max": n_max,
        "negative": negative, "j_max": j_max, "circle": circle,
    });
    emit_csv(out, &config, &body, json!({ "radii": radii.len() }))
}

fn load_constants(path: Option<&Path>) -> CliResult<BoundConstants> {
    let c = match path {
        None => BoundConstants::default(),
        Some(p) => {
            let body = fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&body).map_err(|e| invalid(format!("{}: {e}", p.display())))?
        }
    };
    c.validate()?;
    Ok(c)
}

pub fn bounds(d: &DomainArgs, constants: Option<&Path>, s: &SolverArgs, out: Option<&Path>) -> CliResult<()> {
    let spec = check_domain_args(d)?;
    let opts = options(s)?;
    let constants = load_constants(constants)?;
    let sp = solve::fem_spectrum(&spec, d.beta, d.h, 1, &opts)?;
    let report = solve::bound_report(&spec, d.beta, d.h, &sp, &constants, &opts)?;
    let config = json!({
        "command": "bounds", "domain": spec, "beta": d.beta, "h": d.h,
        "constants": constants, "tol": s.tol, "seed": s.seed,
    });
    let value = serde_json::to_value(&report).map_err(|e| CliError::Solver(e.to_string()))?;
    emit_json(out, &config, value)
}

pub fn riesz(d: &DomainArgs, k: usize, closed_form: bool, s: &SolverArgs, out: Option<&Path>) -> CliResult<()> {
    let spec = check_domain_args(d)?;
    if d.beta == 0.0 {
        return Err(invalid("Riesz bounds need β ≠ 0"));
    }
    let opts = options(s)?;
    let sp = compute_spectrum(&spec, d, k, closed_form, &opts)?;
    let area = geometry::summarize(&spec)?.area;
    let report = riesz::verify_spectrum(&sp, d.beta, area, k);
    let config = json!({
        "command": "riesz", "domain": spec, "beta": d.beta, "h": d.h, "k": k,
        "closed_form": closed_form, "tol": s.tol, "seed": s.seed,
    });
    let summary = json!({
        "riesz_ok": report.riesz_ok(),
        "averages_ok": report.averages_ok(),
        "singles_ok": report.singles_ok(),
        "averages": report.averages,
        "singles": report.singles,
        "heat_report_only": report.heat,
    });
    emit_csv(out, &config, &report.to_csv(), summary)
}

pub fn verify(fast: bool, perturb: f64, s: &SolverArgs, out: Option<&Path>) -> CliResult<()> {
    if !(perturb.is_finite() && perturb > -1.0) {
        return Err(invalid(format!("--perturb must exceed -1, got {perturb}")));
    }
    let opts = options(s)?;
    let mut results = verify::run_perturbed(fast, &opts, perturb);
    results.push(verify::run_criterion(0, &opts));
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if let Some(path) = out {
        let config = json!({ "command": "verify", "fast": fast, "perturb": perturb, "tol": s.tol, "seed": s.seed });
        emit_json(Some(path), &config, json!({ "criteria": results, "failed": failed }))?;
    }
    if failed > 0 {
        return Err(CliError::Solver(format!("{failed} acceptance criteria failed")));
    }
    Ok(())
}

pub fn theta0(tol: f64, out: Option<&Path>) -> CliResult<()> {
    let r = closedform::theta0(tol)?;
    let config = json!({ "command": "theta0", "tol": tol });
    emit_json(out, &config, json!(r))
}

pub fn sweep(curve: &str, thickness: &str, beta: f64, h_ratio: f64, s: &SolverArgs, out: Option<&Path>) -> CliResult<()> {
    check_beta(beta)?;
    if !(h_ratio > 0.0 && h_ratio <= 1.0) {
        return Err(invalid(format!("--h-ratio must lie in (0, 1], got {h_ratio}")));
    }
    let opts = options(s)?;
    let (kind, params) = curve.split_once(':').ok_or_else(|| invalid(format!("curve `{curve}`: expected kind:params")))?;
    let thicknesses = parse_grid(thickness)?;
    let mut body = String::from("h,lambda,residual,curve_lambda1,tube_lb,dof\n");
    let mut curve_spec = None;
    for &th in &thicknesses {
        let tube: DomainSpec = format!("tube:curve={kind},{params},h={th}").parse()?;
        let Shape::Tube { curve: c, .. } = &tube.shape else { unreachable!() };
        let (l, a) = geometry::curve_invariants(c)?;
        let lc = closedform::curve_lambda1(l, a, beta)?;
        let mesh = magspec_core::mesh::generate(&tube, th * h_ratio)?;
        let sp = solve::fem_spectrum_on(
            &mesh,
            &magspec_core::fem::standard_potential(beta),
            beta,
            &tube.id(),
            th * h_ratio,
            1,
            &opts,
        )?;
        let lb = bounds::tube_lb(lc, beta, th).value;
        body.push_str(&format!("{th},{},{},{lc},{lb},{}\n", sp.eigenvalues[0], sp.residuals[0], mesh.node_count()));
        curve_spec = Some(c.clone());
    }
    let config = json!({
        "command": "sweep", "curve": curve_spec, "thickness": thicknesses, "beta": beta,
        "h_ratio": h_ratio, "tol": s.tol, "seed": s.seed,
    });
    emit_csv(out, &config, &body, json!({ "rows": thicknesses.len() }))
}

pub fn dvsn(r_grid: &str, beta: f64, h: f64, s: &SolverArgs, out: Option<&Path>) -> CliResult<()> {
    check_beta(beta)?;
    if beta == 0.0 || !(h > 0.0) {
        return Err(invalid("need β ≠ 0 and h > 0"));
    }
    let opts = options(s)?;
    let radii = parse_grid(r_grid)?;
    let mut body = String::from("R,lambda_dirichlet,lambda_neumann\n");
    for &r in &radii {
        let disk = DomainSpec::disk(r);
        let d = solve::dirichlet_spectrum(&disk, beta, h, 1, &opts)?;
        let n = closedform::disk_spectrum(r, beta, 1)?;
        body.push_str(&format!("{r},{},{}\n", d.eigenvalues[0], n.eigenvalues[0]));
    }
    let config = json!({ "command": "figure-dvsn", "r_grid": radii, "beta": beta, "h": h, "tol": s.tol, "seed": s.seed });
    emit_csv(out, &config, &body, json!({ "rows": radii.len() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,2, 4").unwrap(), vec![1.0, 2.0, 4.0]);
        assert_eq!(parse_grid("1:2:3").unwrap(), vec![1.0, 1.5, 2.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("1,-2").is_err());
    }

    #[test]
    fn domains() {
        assert_eq!(load_domain("disk:R=2").unwrap(), DomainSpec::disk(2.0));
        let j = r#"{"kind":"rectangle","params":{"w":2,"h":1}}"#;
        assert_eq!(load_domain(j).unwrap(), DomainSpec::rectangle(2.0, 1.0));
        assert!(matches!(load_domain("{bad"), Err(CliError::Validation(_))));
        assert!(matches!(load_domain("missing.json"), Err(CliError::Io(_))));
    }
}
