//! Riesz means, eigenvalue averages and the heat trace against their
//! semiclassical bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigensolve::Spectrum;

/// `ψ(a) = a − ⌊a⌋ − 1/2`.
pub fn fluctuation(a: f64) -> f64 {
    a - a.floor() - 0.5
}

/// `Σ (z − λⱼ)₊` over the computed values. Valid iff `z ≤ λ_max`.
pub fn r1_empirical(eigenvalues: &[f64], z: f64) -> (f64, bool) {
    let value = eigenvalues.iter().map(|&l| (z - l).max(0.0)).sum();
    let valid = eigenvalues.last().is_some_and(|&top| z <= top);
    (value, valid)
}

pub fn r1_lower(z: f64, beta: f64, area: f64) -> f64 {
    let b = beta.abs();
    let psi = fluctuation(z / (2.0 * b) + 0.5);
    area * z * z / (8.0 * PI) - area * b * b / (2.0 * PI) * psi * psi
}

/// `R(X) = (β/X)(X − ⌊X⌋)(⌊X⌋ − X + 1)`, continued by `R(0) = β`.
pub fn remainder_r(x: f64, beta: f64) -> f64 {
    if x == 0.0 {
        return beta;
    }
    let f = x - x.floor();
    beta / x * f * (1.0 - f)
}

/// Upper bound on the mean of the first `k` eigenvalues.
pub fn avg_upper(k: usize, beta: f64, area: f64) -> f64 {
    let b = beta.abs();
    let x = 2.0 * PI * k as f64 / (b * area);
    2.0 * PI * k as f64 / area + remainder_r(x, b)
}

/// Upper bound on `λ_{k+1}`.
pub fn single_upper(k: usize, beta: f64, area: f64) -> f64 {
    8.0 * PI * k as f64 / area + beta.abs()
}

/// Lower bound on `Σ e^{−λⱼ t}`.
pub fn heat_lower(t: f64, beta: f64, area: f64) -> f64 {
    let b = beta.abs();
    if b * t < 1e-8 {
        return area / (4.0 * PI * t);
    }
    b * area / (4.0 * PI * (b * t).sinh())
}

/// `k · avg_upper(k) − (β²|Ω|/2π)((2⌊X⌋+1)(X − ⌊X⌋) + ⌊X⌋²)` with `X = 2πk/(β|Ω|)`.
pub fn sums_identity_defect(k: usize, beta: f64, area: f64) -> f64 {
    let b = beta.abs();
    let x = 2.0 * PI * k as f64 / (b * area);
    let n = x.floor();
    let rhs = b * b * area / (2.0 * PI) * ((2.0 * n + 1.0) * (x - n) + n * n);
    k as f64 * avg_upper(k, b, area) - rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszRow {
    pub z: f64,
    pub r1_emp: f64,
    pub r1_low: f64,
    pub margin: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageRow {
    pub k: usize,
    pub mean: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleRow {
    pub k: usize,
    pub lambda: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Truncated heat trace. Report only: the partial sum understates the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatRow {
    pub t: f64,
    pub partial_trace: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RieszReport {
    pub beta: f64,
    pub area: f64,
    pub rows: Vec<RieszRow>,
    pub averages: Vec<AverageRow>,
    pub singles: Vec<SingleRow>,
    pub heat: Vec<HeatRow>,
    /// Slack granted to each comparison for solver uncertainty.
    pub slack: f64,
}

impl RieszReport {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() && self.averages.is_empty()
    }

    pub fn riesz_ok(&self) -> bool {
        self.rows.iter().filter(|r| r.valid).all(|r| {
            r.margin >= -1e-9 * (r.z * r.z * self.area).max(1.0) - self.slack * r.z.max(1.0)
        })
    }

    pub fn averages_ok(&self) -> bool {
        self.averages.iter().all(|a| a.margin >= -1e-9 * a.bound.max(1.0) - self.slack)
    }

    pub fn singles_ok(&self) -> bool {
        self.singles.iter().all(|s| s.margin >= -1e-9 * s.bound.max(1.0) - self.slack)
    }

    pub fn all_ok(&self) -> bool {
        self.riesz_ok() && self.averages_ok() && self.singles_ok()
    }

    pub fn min_riesz_margin(&self) -> f64 {
        self.rows.iter().filter(|r| r.valid).map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn min_average_margin(&self) -> f64 {
        self.averages.iter().map(|a| a.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,R1_emp,R1_low,margin,valid\n");
        for r in &self.rows {
            out.push_str(&format!("{:.12e},{:.12e},{:.12e},{:.12e},{}\n", r.z, r.r1_emp, r.r1_low, r.margin, r.valid));
        }
        out
    }
}

/// Eigenvalues and midpoints between consecutive eigenvalues, from 0 up to `λ_{k_max}`.
pub fn kink_grid(eigenvalues: &[f64], k_max: usize) -> Vec<f64> {
    let top = k_max.min(eigenvalues.len());
    let mut zs = vec![0.0];
    let mut prev = 0.0;
    for &l in &eigenvalues[..top] {
        zs.push((prev + l) / 2.0);
        zs.push(l);
        prev = l;
    }
    zs
}

/// Runs every Riesz-type comparison for the first `k_max` eigenvalues on
/// the kink grid.
pub fn verify_spectrum(spectrum: &Spectrum, beta: f64, area: f64, k_max: usize) -> RieszReport {
    let zs = kink_grid(&spectrum.eigenvalues, k_max);
    verify_on_grid(spectrum, beta, area, k_max, &zs)
}

/// As [`verify_spectrum`] with an explicit z-grid.
pub fn verify_on_grid(spectrum: &Spectrum, beta: f64, area: f64, k_max: usize, zs: &[f64]) -> RieszReport {
    let ev = &spectrum.eigenvalues;
    let mut report = RieszReport { beta, area, ..Default::default() };
    if ev.is_empty() {
        return report;
    }
    let k_max = k_max.min(ev.len());
    report.slack = (0..k_max).map(|j| spectrum.uncertainty(j)).fold(0.0, f64::max);
    for &z in zs {
        let (emp, valid) = r1_empirical(ev, z);
        let low = r1_lower(z, beta, area);
        report.rows.push(RieszRow { z, r1_emp: emp, r1_low: low, margin: emp - low, valid });
    }
    let mut sum = 0.0;
    for k in 1..=k_max {
        sum += ev[k - 1];
        let mean = sum / k as f64;
        let bound = avg_upper(k, beta, area);
        report.averages.push(AverageRow { k, mean, bound, margin: bound - mean });
    }
    for k in 0..k_max {
        let bound = single_upper(k, beta, area);
        report.singles.push(SingleRow { k, lambda: ev[k], bound, margin: bound - ev[k] });
    }
    for t in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let partial_trace = ev[..k_max].iter().map(|l| (-l * t).exp()).sum();
        report.heat.push(HeatRow { t, partial_trace, bound: heat_lower(t, beta, area) });
    }
    report
}
