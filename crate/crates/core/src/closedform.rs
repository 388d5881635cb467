//! Exact and semi-analytic spectra: circles, disks, Landau levels and the
//! de Gennes model operator.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigensolve::{Method, Spectrum};

#[derive(Debug, Error, PartialEq)]
pub enum ClosedFormError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("root bracketing on branch n={n} inconsistent after {retries} refinements")]
    Bracketing { n: i64, retries: usize },
    #[error("branch scan found only {found} of {k} eigenvalues")]
    Incomplete { found: usize, k: usize },
    #[error("{0}")]
    NoConvergence(String),
}

type Result<T> = std::result::Result<T, ClosedFormError>;

/// Spectrum `(2π/L)²(n − βS/2π)²`, `n ∈ ℤ`, of the magnetic Laplacian on a
/// closed curve of length `L` enclosing area `S`.
pub fn circle_spectrum(length: f64, area: f64, beta: f64, count: usize) -> Result<Spectrum> {
    if !(length > 0.0 && area > 0.0) {
        return Err(ClosedFormError::Invalid(format!(
            "length and area must be positive, got L={length}, S={area}"
        )));
    }
    if length * length < 4.0 * PI * area * (1.0 - 1e-12) {
        return Err(ClosedFormError::Invalid(format!(
            "isoperimetric inequality L² ≥ 4πS violated (L={length}, S={area})"
        )));
    }
    let flux = beta * area / (2.0 * PI);
    let c = (2.0 * PI / length).powi(2);
    let base = flux.round() as i64;
    let span = count as i64 + 1;
    let mut vals: Vec<(f64, i64)> = (base - span..=base + span)
        .map(|n| (c * (n as f64 - flux).powi(2), n))
        .collect();
    vals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    vals.truncate(count);
    Ok(Spectrum {
        eigenvalues: vals.iter().map(|v| v.0).collect(),
        residuals: vec![0.0; count],
        beta,
        domain_id: format!("curve_L{length}_S{area}"),
        method: Method::ClosedformCircle,
        h: None,
        labels: vals.iter().map(|v| (v.1, 1)).collect(),
    })
}

pub fn curve_lambda1(length: f64, area: f64, beta: f64) -> Result<f64> {
    Ok(circle_spectrum(length, area, beta, 1)?.eigenvalues[0])
}

/// Kummer's function `M(a, b, y)` by its power series.
pub fn kummer(a: f64, b: f64, y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..100_000 {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * y / (kf + 1.0);
        sum += term;
        if term == 0.0 || (kf > a.abs() && term.abs() <= 1e-17 * sum.abs()) {
            break;
        }
    }
    sum
}

/// `(M(a,b,y), dM/dy)` by RK4 integration of Kummer's equation from a series start.
fn kummer_ode(a: f64, b: f64, y: f64) -> (f64, f64) {
    let y0 = y.min(1.0);
    let mut w = kummer(a, b, y0);
    let mut dw = a / b * kummer(a + 1.0, b + 1.0, y0);
    if y <= y0 {
        return (w, dw);
    }
    let rate = (a.abs() + b + y).sqrt();
    let steps = (((y - y0) * 40.0 * rate).ceil() as usize).max(400);
    let h = (y - y0) / steps as f64;
    let f = |t: f64, w: f64, dw: f64| (dw, (a * w - (b - t) * dw) / t);
    let mut t = y0;
    for _ in 0..steps {
        let (k1w, k1d) = f(t, w, dw);
        let (k2w, k2d) = f(t + h / 2.0, w + h / 2.0 * k1w, dw + h / 2.0 * k1d);
        let (k3w, k3d) = f(t + h / 2.0, w + h / 2.0 * k2w, dw + h / 2.0 * k2d);
        let (k4w, k4d) = f(t + h, w + h * k3w, dw + h * k3d);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        dw += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        t += h;
        // A positive rescaling keeps the sign and avoids overflow.
        let s = w.abs().max(dw.abs());
        if s > 1e100 {
            w /= s;
            dw /= s;
        }
    }
    (w, dw)
}

/// Above these the series is replaced by ODE integration.
const SERIES_MAX_Y: f64 = 25.0;
const SERIES_MAX_GAMMA: f64 = 30.0;
/// Cancellation in the series is about `exp(2√(γy))`.
const SERIES_MAX_PRODUCT: f64 = 25.0;

fn branch_raw(m: u64, beta: f64, radius: f64, lambda: f64, force_ode: bool) -> f64 {
    let mf = m as f64;
    let gamma = (lambda / beta - 1.0) / 2.0;
    let a = -gamma;
    let b = mf + 1.0;
    let y = beta * radius * radius / 2.0;
    let series_ok = (y <= SERIES_MAX_Y && gamma <= SERIES_MAX_GAMMA) || gamma * y <= SERIES_MAX_PRODUCT;
    let (w, dw) = if force_ode || !series_ok {
        kummer_ode(a, b, y)
    } else {
        (kummer(a, b, y), a / b * kummer(a + 1.0, b + 1.0, y))
    };
    // v'(R) ∝ (m/R − βR/2) M + βR dM/dy
    let p = mf / radius - beta * radius / 2.0;
    let q = beta * radius;
    // M and M' never vanish together, so the scale is positive and continuous in λ.
    let norm = w.hypot(dw) * (p.abs() + q);
    (p * w + q * dw) / norm
}

/// Radial derivative at `R` of the angular-momentum-`n` eigenfunction
/// candidate, normalized by a positive factor continuous in `λ`.
pub fn branch_function(n: i64, beta: f64, radius: f64, lambda: f64) -> f64 {
    let m = n.unsigned_abs();
    // Negative angular momenta see the same radial operator shifted by 2β|n|.
    let shifted = if n < 0 { lambda - 2.0 * beta * m as f64 } else { lambda };
    branch_raw(m, beta, radius, shifted, false)
}

/// Same as [`branch_function`], always through the radial ODE.
pub fn branch_function_ode(n: i64, beta: f64, radius: f64, lambda: f64) -> f64 {
    let m = n.unsigned_abs();
    let shifted = if n < 0 { lambda - 2.0 * beta * m as f64 } else { lambda };
    branch_raw(m, beta, radius, shifted, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskBranchPoint {
    pub n: i64,
    pub j: usize,
    pub lambda: f64,
    pub radius: f64,
    pub beta: f64,
    pub residual: f64,
}

const GRID_DIVISIONS: f64 = 20.0;
const MAX_RETRIES: usize = 3;

fn roots_on_grid(f: &impl Fn(f64) -> f64, lambda_max: f64, step: f64, tol: f64) -> Vec<(f64, f64)> {
    let count = (lambda_max / step).ceil() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| (i as f64 * step).min(lambda_max)).collect();
    let vals: Vec<f64> = grid.iter().map(|&l| f(l)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if vals[i] == 0.0 && grid[i] > 0.0 {
            roots.push((grid[i], 0.0));
            continue;
        }
        if i + 1 == grid.len() || vals[i] == 0.0 || vals[i + 1] == 0.0 {
            continue;
        }
        if (vals[i] > 0.0) != (vals[i + 1] > 0.0) {
            let (mut lo, mut hi, mut flo) = (grid[i], grid[i + 1], vals[i]);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm > 0.0) == (flo > 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push((0.5 * (lo + hi), hi - lo));
        }
    }
    roots
}

/// All eigenvalues `λ ∈ (0, λ_max]` on angular branch `n` of the disk of
/// radius `R`.
pub fn disk_branch_eigens(n: i64, beta: f64, radius: f64, lambda_max: f64) -> Result<Vec<DiskBranchPoint>> {
    if !(beta > 0.0 && radius > 0.0 && lambda_max > 0.0) {
        return Err(ClosedFormError::Invalid(format!(
            "need β > 0, R > 0, λ_max > 0 (got β={beta}, R={radius}, λ_max={lambda_max})"
        )));
    }
    let m = n.unsigned_abs();
    let shift = if n < 0 { 2.0 * beta * m as f64 } else { 0.0 };
    let top = lambda_max - shift;
    if top <= 0.0 {
        return Ok(Vec::new());
    }
    let f = |l: f64| branch_raw(m, beta, radius, l, false);
    // Roots on one branch are spaced by about 2β in strong fields and 1/R² in weak ones.
    let scale = beta.max(1.0 / (radius * radius));
    let tol = 1e-10 * scale;
    let mut step = scale / GRID_DIVISIONS;
    let mut roots = roots_on_grid(&f, top, step, tol);
    let mut retries = 0;
    loop {
        let finer = roots_on_grid(&f, top, step / 2.0, tol);
        if finer.len() == roots.len() {
            roots = finer;
            break;
        }
        retries += 1;
        if retries > MAX_RETRIES {
            return Err(ClosedFormError::Bracketing { n, retries: MAX_RETRIES });
        }
        step /= 2.0;
        roots = finer;
    }
    Ok(roots
        .into_iter()
        .filter(|r| r.0 > 0.0)
        .enumerate()
        .map(|(j, (l, width))| DiskBranchPoint {
            n,
            j: j + 1,
            lambda: l + shift,
            radius,
            beta,
            residual: width.max(f(l).abs()),
        })
        .collect())
}

/// Lower bound for branch `n` from the effective potential `(n/r − βr/2)²`.
fn branch_floor(n: i64, beta: f64, radius: f64) -> f64 {
    let nf = n as f64;
    if n >= 0 {
        if (2.0 * nf / beta).sqrt() <= radius {
            0.0
        } else {
            (nf / radius - beta * radius / 2.0).powi(2)
        }
    } else {
        let m = -nf;
        if (2.0 * m / beta).sqrt() <= radius {
            2.0 * beta * m
        } else {
            (m / radius + beta * radius / 2.0).powi(2)
        }
    }
}

/// The `count` lowest eigenvalues on angular branch `n`.
pub fn branch_lowest(n: i64, beta: f64, radius: f64, count: usize) -> Result<Vec<DiskBranchPoint>> {
    let b = beta.abs();
    let mut cap = branch_floor(n, b, radius) + 2.0 * b * (count as f64 + 1.0);
    for _ in 0..40 {
        let pts = disk_branch_eigens(n, b, radius, cap)?;
        if pts.len() >= count {
            return Ok(pts.into_iter().take(count).collect());
        }
        cap *= 2.0;
    }
    Err(ClosedFormError::Incomplete { found: 0, k: count })
}

/// All disk eigenvalues up to `lambda_max`, over every angular index.
pub fn disk_eigens_below(radius: f64, beta: f64, lambda_max: f64) -> Result<Vec<DiskBranchPoint>> {
    let mut branches = Vec::new();
    let mut n = 0i64;
    while branch_floor(n, beta, radius) <= lambda_max {
        branches.push(n);
        n += 1;
    }
    let mut n = -1i64;
    while branch_floor(n, beta, radius) <= lambda_max {
        branches.push(n);
        n -= 1;
    }
    let per: Vec<Result<Vec<DiskBranchPoint>>> = branches
        .par_iter()
        .map(|&n| disk_branch_eigens(n, beta, radius, lambda_max))
        .collect();
    let mut all = Vec::new();
    for p in per {
        all.extend(p?);
    }
    all.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.n.cmp(&b.n)));
    Ok(all)
}

/// The `k` smallest magnetic Neumann eigenvalues of the disk of radius `R`.
/// The spectrum depends on `|β|` only.
pub fn disk_spectrum(radius: f64, beta: f64, k: usize) -> Result<Spectrum> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(ClosedFormError::Invalid("disk branches need β ≠ 0".into()));
    }
    if k == 0 || !(radius > 0.0) {
        return Err(ClosedFormError::Invalid(format!("need k ≥ 1 and R > 0 (k={k}, R={radius})")));
    }
    let b = beta.abs();
    // λ_k ≤ 8π(k−1)/|Ω| + β bounds every wanted eigenvalue.
    let cap = (8.0 * (k as f64 - 1.0) / (radius * radius) + b) * 1.05;
    let all = disk_eigens_below(radius, b, cap)?;
    if all.len() < k {
        return Err(ClosedFormError::Incomplete { found: all.len(), k });
    }
    let pts = &all[..k];
    Ok(Spectrum {
        eigenvalues: pts.iter().map(|p| p.lambda).collect(),
        residuals: pts.iter().map(|p| p.residual / p.lambda.max(1.0)).collect(),
        beta,
        domain_id: format!("disk_R{radius}"),
        method: Method::ClosedformDisk,
        h: None,
        labels: pts.iter().map(|p| (p.n, p.j)).collect(),
    })
}

/// `β(2l + 1)`
pub fn landau_level(l: u32, beta: f64) -> f64 {
    beta * (2.0 * l as f64 + 1.0)
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `π (2/β)^{n+1} (l+n)!/l!`
pub fn landau_norm_sq(n: u32, l: u32, beta: f64) -> f64 {
    let (n, l) = (n as u64, l as u64);
    PI * ((n + 1) as f64 * (2.0 / beta).ln() + ln_factorial(l + n) - ln_factorial(l)).exp()
}

/// Generalized Laguerre polynomial `L_l^n(y)`.
pub fn laguerre(l: u32, n: u32, y: f64) -> f64 {
    let (l, n) = (l as u64, n as u64);
    (0..=l)
        .map(|i| {
            let ln_binom = ln_factorial(l + n) - ln_factorial(l - i) - ln_factorial(n + i);
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * (ln_binom - ln_factorial(i)).exp() * y.powi(i as i32)
        })
        .sum()
}

/// `e^{−y} Σ_{n≤N} l!/(l+n)! yⁿ L_l^n(y)²`, the normalized density of level `l`
/// at `βr²/2 = y`, in units of `β/2π`.
pub fn landau_sum_partial(l: u32, y: f64, big_n: u32) -> f64 {
    (0..=big_n)
        .map(|n| {
            let lag = laguerre(l, n, y);
            if lag == 0.0 || (y == 0.0 && n > 0) {
                return 0.0;
            }
            let ln_y = if n == 0 { 0.0 } else { n as f64 * y.ln() };
            (-y + ln_factorial(l as u64) - ln_factorial((l + n) as u64) + ln_y + 2.0 * lag.abs().ln()).exp()
        })
        .sum()
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Upper incomplete gamma `Γ(s, x)` for integer `s ≥ 1`.
fn upper_gamma(s: u64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..s {
        term *= x / k as f64;
        sum += term;
    }
    factorial(s - 1) * (-x).exp() * sum
}

/// Rayleigh ratio `G(m, n)` of the Landau test functions on the disk
/// `R = √(2n/β)`, in units of `β`.
pub fn rayleigh_ratio_g(m: u64, n: u64) -> Result<f64> {
    if n < 1 {
        return Err(ClosedFormError::Invalid("G(m, n) needs n ≥ 1".into()));
    }
    let x = n as f64;
    let mf = m as f64;
    let first = if m == 0 { 0.0 } else { mf * mf * upper_gamma(m, x) };
    let num = factorial(m) - first + 2.0 * mf * upper_gamma(m + 1, x) - upper_gamma(m + 2, x);
    let den = factorial(m) - upper_gamma(m + 1, x);
    Ok(num / den)
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
fn tridiag_min(d: &[f64], e: &[f64]) -> f64 {
    let count_below = |x: f64| {
        let mut q = d[0] - x;
        let mut c = (q < 0.0) as usize;
        for i in 1..d.len() {
            let qq = if q == 0.0 { f64::MIN_POSITIVE } else { q };
            q = d[i] - x - e[i - 1] * e[i - 1] / qq;
            c += (q < 0.0) as usize;
        }
        c
    };
    let rad = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut lo = d.iter().fold(f64::INFINITY, |m, &v| m.min(v)) - 2.0 * rad;
    let mut hi = d[0] + 2.0 * rad;
    while count_below(hi) == 0 {
        hi = 2.0 * hi.abs() + 1.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn mu1_grid(xi: f64, t_len: f64, n: usize) -> f64 {
    let h = t_len / n as f64;
    let inv = 1.0 / (h * h);
    let d: Vec<f64> = (0..n).map(|i| 2.0 * inv + (xi + i as f64 * h).powi(2)).collect();
    let mut e = vec![-inv; n - 1];
    // Ghost-point Neumann row, symmetrized.
    e[0] = -(2.0f64).sqrt() * inv;
    tridiag_min(&d, &e)
}

/// First eigenvalue of `−f'' + (ξ + t)² f` on `(0, T)` with `f'(0) = 0`,
/// `f(T) = 0`; second-order differences, Richardson-extrapolated.
pub fn mu1(xi: f64, t_len: f64, n: usize) -> Result<f64> {
    if t_len < 10.0 + xi.abs() || n < 2000 {
        return Err(ClosedFormError::Invalid(format!(
            "need T ≥ 10 + |ξ| and N ≥ 2000 (T={t_len}, N={n}, ξ={xi})"
        )));
    }
    let coarse = mu1_grid(xi, t_len, n);
    let fine = mu1_grid(xi, t_len, 2 * n);
    let v = (4.0 * fine - coarse) / 3.0;
    if !v.is_finite() {
        return Err(ClosedFormError::NoConvergence(format!("μ₁({xi}) is not finite")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeGennesResult {
    pub theta0: f64,
    pub xi0: f64,
    pub truncation: f64,
    pub grid: usize,
    pub tol: f64,
}

pub const DE_GENNES_T: f64 = 13.0;
pub const DE_GENNES_N: usize = 4000;

/// `Θ₀ = min_ξ μ₁(ξ)` by golden-section search on `[−3, 0]`.
pub fn theta0(tol: f64) -> Result<DeGennesResult> {
    if !(tol >= 1e-6) {
        return Err(ClosedFormError::Invalid(format!("tolerance must be ≥ 1e-6, got {tol}")));
    }
    let (t_len, n) = (DE_GENNES_T, DE_GENNES_N);
    let f = |x: f64| mu1(x, t_len, n);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (-3.0f64, 0.0f64);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol / 2.0 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let xi0 = 0.5 * (a + b);
    if xi0 - (-3.0) < 10.0 * tol || -xi0 < 10.0 * tol {
        return Err(ClosedFormError::NoConvergence(format!(
            "minimizer {xi0} sits at the edge of the search interval"
        )));
    }
    let theta = f(xi0)?;
    if (theta - xi0 * xi0).abs() > 10.0 * tol {
        return Err(ClosedFormError::NoConvergence(format!(
            "Θ₀ = {theta} and ξ₀² = {} disagree beyond {}",
            xi0 * xi0,
            10.0 * tol
        )));
    }
    Ok(DeGennesResult {
        theta0: theta,
        xi0,
        truncation: t_len,
        grid: n,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_examples() {
        assert!((curve_lambda1(2.0 * PI, PI, 1.0).unwrap() - 0.25).abs() < 1e-15);
        let s = circle_spectrum(2.0 * PI * 2f64.sqrt(), 2.0 * PI, 1.0, 3).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-15);
        let free = circle_spectrum(2.0 * PI, PI, 0.0, 5).unwrap();
        assert_eq!(free.eigenvalues, vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        assert!(circle_spectrum(1.0, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn branch_zero_at_landau_radius() {
        assert!(branch_function(1, 1.0, 2f64.sqrt(), 1.0).abs() < 1e-14);
    }

    #[test]
    fn series_and_ode_agree_in_sign() {
        for &(n, r, l) in &[(0, 1.0, 1e-6), (0, 1.0, 0.3), (2, 2.0, 2.7), (1, 3.0, 4.4), (-1, 1.5, 3.3)] {
            let s = branch_function(n, 1.0, r, l);
            let o = branch_function_ode(n, 1.0, r, l);
            assert_eq!(s > 0.0, o > 0.0, "n={n} R={r} λ={l}: {s} vs {o}");
        }
        assert!(branch_function(0, 1.0, 1.0, 1e-9) > 0.0);
    }

    #[test]
    fn landau_branch_root() {
        let pts = disk_branch_eigens(1, 1.0, 2f64.sqrt(), 3.0).unwrap();
        assert!(pts.iter().any(|p| (p.lambda - 1.0).abs() < 1e-9));
    }

    #[test]
    fn small_radius() {
        let pts = disk_branch_eigens(0, 1.0, 0.1, 1.0).unwrap();
        assert!((pts[0].lambda / 0.00125 - 1.0).abs() < 0.05);
    }

    #[test]
    fn negative_branch_higher() {
        let p = disk_branch_eigens(1, 1.0, 1.0, 20.0).unwrap()[0].lambda;
        let q = disk_branch_eigens(-1, 1.0, 1.0, 20.0).unwrap()[0].lambda;
        assert!(q > p);
        assert!((q - p - 2.0).abs() < 1e-9);
    }

    #[test]
    fn landau_quantities() {
        assert_eq!(landau_level(0, 0.7), 0.7);
        assert_eq!(landau_level(1, 1.0), 3.0);
        assert_eq!(landau_level(2, 0.5), 2.5);
        for (n, l) in [(0, 0), (1, 0), (0, 1)] {
            assert!((landau_norm_sq(n, l, 2.0) - PI).abs() < 1e-13);
        }
        assert!((landau_sum_partial(0, 1.0, 60) - 1.0).abs() < 1e-14);
        assert!((landau_sum_partial(0, 0.0, 0) - 1.0).abs() < 1e-15);
        assert!((landau_sum_partial(1, 2.0, 60) - landau_sum_partial(1, 2.0, 120)).abs() < 1e-10);
    }

    #[test]
    fn g_ratio() {
        for n in 1..=5 {
            assert!((rayleigh_ratio_g(n, n).unwrap() - 1.0).abs() < 1e-12, "G({n},{n})");
        }
        let e = 1f64.exp();
        let expected = (1.0 - 2.0 / e) / (1.0 - 1.0 / e);
        assert!((rayleigh_ratio_g(0, 1).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.41802).abs() < 1e-5);
        assert!(rayleigh_ratio_g(2, 5).unwrap() < 1.0);
    }

    #[test]
    fn mu1_values() {
        assert!((mu1(0.0, 12.0, 2000).unwrap() - 1.0).abs() < 1e-5);
        // Well far from the wall: harmonic oscillator ground state.
        assert!((mu1(-5.0, 15.0, 2000).unwrap() - 1.0).abs() < 1e-4);
        assert!(mu1(1.0, 12.0, 2000).unwrap() > 1.5);
        assert!(mu1(-0.77, 12.0, 2000).unwrap() < 0.6);
        assert!(mu1(0.0, 5.0, 2000).is_err());
    }
}
