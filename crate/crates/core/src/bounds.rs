//! One-sided eigenvalue bounds for `λ₁(Ω, β)` with hypothesis checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closedform::{curve_lambda1, ClosedFormError};
use crate::eigensolve::Spectrum;
use crate::fem::{ScalarField, TorsionField};
use crate::geometry::{self, boundary_distance, contains, CurveSpec, DomainSpec, GeometryError};

/// First Dirichlet eigenvalue of the unit disk, `j₀,₁²`.
pub const DIRICHLET_UNIT_DISK: f64 = 5.783_185_962_946_784;

/// Reference value of the de Gennes constant.
pub const THETA0_REFERENCE: f64 = 0.590_106_124_9;

/// Default multiplicity for the ε-net covering: disks of radius 2δ whose
/// centres are δ/2 apart. Area packing gives at most (2·2 + 1/2)²/(1/2)² = 81.
pub const DEFAULT_COVER_MULTIPLICITY: f64 = 81.0;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

type Result<T> = std::result::Result<T, BoundError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub theorem: String,
    pub side: Side,
    pub value: f64,
    pub strict: bool,
    pub hypotheses_ok: bool,
    pub messages: Vec<String>,
    pub constants_used: BTreeMap<String, f64>,
    /// Depends on a universal constant whose value is not known.
    #[serde(default)]
    pub conditional: bool,
}

impl Bound {
    fn new(theorem: &str, side: Side, value: f64, strict: bool) -> Self {
        Bound {
            theorem: theorem.into(),
            side,
            value,
            strict,
            hypotheses_ok: true,
            messages: Vec::new(),
            constants_used: BTreeMap::new(),
            conditional: false,
        }
    }

    fn fail(mut self, msg: impl Into<String>) -> Self {
        self.hypotheses_ok = false;
        self.messages.push(msg.into());
        self
    }

    fn note(mut self, msg: impl Into<String>) -> Self {
        self.messages.push(msg.into());
        self
    }

    fn constant(mut self, name: &str, v: f64) -> Self {
        self.constants_used.insert(name.into(), v);
        self
    }
}

/// Universal constants that the bounds depend on. `c` and `big_c` default
/// to the chains `c = C₁/(96 j₀₁²)` and `C = 2⁻¹⁴ c / M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundConstants {
    pub c1: f64,
    pub c1_known: bool,
    pub m: f64,
    pub c: Option<f64>,
    pub big_c: Option<f64>,
    pub lambda_selftiling: Option<f64>,
    pub theta0: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            c1: 1.0,
            c1_known: false,
            m: DEFAULT_COVER_MULTIPLICITY,
            c: None,
            big_c: None,
            lambda_selftiling: None,
            theta0: THETA0_REFERENCE,
        }
    }
}

impl BoundConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("C1", self.c1), ("M", self.m), ("theta0", self.theta0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BoundError::Invalid(format!("constant {name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("c", self.c), ("C", self.big_c), ("Lambda", self.lambda_selftiling)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(BoundError::Invalid(format!("constant {name} must be positive, got {v}")));
                }
            }
        }
        if let Some(l) = self.lambda_selftiling {
            if l > self.theta0 {
                return Err(BoundError::Invalid(format!("Λ = {l} exceeds Θ₀ = {}", self.theta0)));
            }
        }
        Ok(())
    }

    pub fn c(&self) -> f64 {
        self.c.unwrap_or(self.c1 / (96.0 * DIRICHLET_UNIT_DISK))
    }

    pub fn big_c(&self) -> f64 {
        self.big_c.unwrap_or(self.c() * 2f64.powi(-14) / self.m)
    }
}

/// `β − 1/(2R²)` for `R > 1/√β`, else `R²β²/2`.
pub fn ub_circumradius(circumradius: f64, beta: f64) -> Bound {
    let (r, b) = (circumradius, beta.abs());
    let value = if r * r * b > 1.0 {
        b - 1.0 / (2.0 * r * r)
    } else {
        r * r * b * b / 2.0
    };
    Bound::new("circumradius", Side::Upper, value, false)
}

/// `λ₁ < β`.
pub fn ub_universal(beta: f64) -> Bound {
    let b = beta.abs();
    if b == 0.0 {
        return Bound::new("universal", Side::Upper, 0.0, false).note("β = 0: λ₁ = 0 is attained");
    }
    Bound::new("universal", Side::Upper, b, true)
}

/// `λ₁ < Θ₀β` for sub-graphs and for domains in a strip `(a,b) × (base, ∞)`
/// that contain `(a,b) × (base, base + 2√(Θ₀/β))`.
pub fn ub_theta0_class(spec: &DomainSpec, beta: f64, theta0: f64) -> Bound {
    let b = beta.abs();
    let flags = spec.derived_flags();
    let bound = Bound::new("de_gennes_class", Side::Upper, theta0 * b, true).constant("theta0", theta0);
    if flags.subgraph == Some(true) {
        return bound.note("sub-graph domain");
    }
    if let Some(strip) = flags.strip {
        if b > 0.0 {
            let height = 2.0 * (theta0 / b).sqrt();
            if strip_contains(spec, strip.a, strip.b, strip.base, height) {
                return bound.note(format!("contains the strip box of height {height:.6}"));
            }
            return bound.fail(format!("does not contain (a,b) x (base, base + {height:.6})"));
        }
    }
    bound.fail("neither the sub-graph nor the strip condition is established for this domain")
}

fn strip_contains(spec: &DomainSpec, a: f64, b: f64, base: f64, height: f64) -> bool {
    let n = 64;
    for i in 1..n {
        for j in 1..n {
            let x = a + (b - a) * i as f64 / n as f64;
            let y = base + height * j as f64 / n as f64;
            if !contains(spec, [x, y]) {
                return false;
            }
        }
    }
    true
}

/// `λ₁ ≤ Λβ` for self-tiling domains with limit constant `Λ ≤ Θ₀`.
pub fn ub_selftiling(lambda: f64, beta: f64, theta0: f64) -> Result<Bound> {
    if !(lambda > 0.0) || lambda > theta0 {
        return Err(BoundError::Invalid(format!("Λ = {lambda} must lie in (0, Θ₀ = {theta0}]")));
    }
    Ok(Bound::new("self_tiling", Side::Upper, lambda * beta.abs(), false).constant("Lambda", lambda))
}

/// `ε²β²/4` for domains of width `ε`.
pub fn ub_width(width: f64, beta: f64) -> Bound {
    Bound::new("small_width", Side::Upper, width * width * beta * beta / 4.0, false)
}

/// `β(1 − e^{−β|Ω|/2π})` on simply connected domains.
pub fn ub_simply_connected_area(area: f64, beta: f64, simply_connected: bool) -> Bound {
    let b = beta.abs();
    let bound = Bound::new(
        "simply_connected_area",
        Side::Upper,
        b * (1.0 - (-b * area / (2.0 * PI)).exp()),
        false,
    );
    if simply_connected {
        bound
    } else {
        bound.fail("domain is not simply connected")
    }
}

/// `β²|Ω|/8π` on simply connected domains.
pub fn ub_fh2(area: f64, beta: f64, simply_connected: bool) -> Bound {
    let bound = Bound::new("area_quadratic", Side::Upper, beta * beta * area / (8.0 * PI), false);
    if simply_connected {
        bound
    } else {
        bound.fail("domain is not simply connected")
    }
}

/// `λ₁ < β*` and, for `β ≥ 0`, `λ₁ ≤ β*(1 − e^{−2φ*})`.
pub fn ub_variable(beta_star: f64, phi_star: f64, nonnegative: bool) -> [Bound; 2] {
    let strict = Bound::new("variable_strict", Side::Upper, beta_star, true);
    let mut torsion = Bound::new(
        "variable_torsion",
        Side::Upper,
        beta_star * (1.0 - (-2.0 * phi_star).exp()),
        false,
    );
    if !nonnegative {
        torsion = torsion.fail("needs a non-negative field");
    }
    [strict, torsion]
}

/// `∫β(e^{2φ} − 1) / ∫e^{2φ}` with `φ` the torsion function of the field.
pub fn ub_variable_integral(phi: &TorsionField, beta: &ScalarField) -> Bound {
    let num = phi.integrate(|p, x| beta(x) * ((2.0 * p).exp() - 1.0));
    let den = phi.integrate(|p, _| (2.0 * p).exp());
    Bound::new("variable_integral", Side::Upper, num / den, false)
}

fn kovarik_low(area: f64, rho: f64, l2: f64, beta: f64) -> f64 {
    PI / (4.0 * area) * beta * beta * rho.powi(4) * l2 / (beta * beta * rho * rho + 6.0 * l2)
}

fn kovarik_high(area: f64, rho: f64, l2: f64, beta: f64) -> f64 {
    PI / (4.0 * area) * beta * rho * rho * l2 / (beta + 24.0 * l2)
}

/// Lower bound from `|Ω|`, the inradius and `λ₂ᴺ(Ω)` on simply connected domains.
pub fn lb_kovarik(area: f64, rho: f64, lambda2n: f64, beta: f64, simply_connected: bool) -> Bound {
    let b = beta.abs();
    let switch = 1.0 / (rho * rho);
    let value = if b < switch {
        kovarik_low(area, rho, lambda2n, b)
    } else if b > switch {
        kovarik_high(area, rho, lambda2n, b)
    } else {
        kovarik_low(area, rho, lambda2n, b).max(kovarik_high(area, rho, lambda2n, b))
    };
    let bound = Bound::new("kovarik", Side::Lower, value, false).constant("lambda2N", lambda2n);
    if simply_connected {
        bound
    } else {
        bound.fail("domain is not simply connected")
    }
}

fn unknown_constants(mut b: Bound, k: &BoundConstants) -> Bound {
    if !k.c1_known {
        b.conditional = true;
        b.messages.push("unconditional only up to universal constants".into());
    }
    b
}

/// `λ₂ᴺ ≥ C₁R²/R₀⁴` for star-shaped domains with `B(p,R) ⊂ Ω ⊂ B(p,R₀)`.
pub fn lb_chenli(r: f64, r0: f64, k: &BoundConstants) -> Bound {
    let mut b = Bound::new("chen_li", Side::Lower, k.c1 * r * r / r0.powi(4), false).constant("C1", k.c1);
    if r > r0 {
        b = b.fail(format!("needs R ≤ R0, got R={r}, R0={r0}"));
    }
    unknown_constants(b, k)
}

/// Star-shaped lower bound in the inner and outer radii.
pub fn lb_star(r: f64, r0: f64, rho: f64, beta: f64, k: &BoundConstants) -> Bound {
    let c = k.c();
    let b = beta.abs();
    let low = c * b * b * r.powi(8) / r0.powi(6);
    let high = c * r.powi(6) * b / (r0.powi(6) * (r * r * b + 1.0));
    let switch = 1.0 / (rho * rho);
    let value = if b < switch {
        low
    } else if b > switch {
        high
    } else {
        low.max(high)
    };
    let mut bound = Bound::new("star_shaped", Side::Lower, value, false)
        .constant("c", c)
        .constant("C1", k.c1);
    if !(r <= rho && rho <= r0) {
        bound = bound.fail(format!("needs R ≤ ρ ≤ R0, got R={r}, ρ={rho}, R0={r0}"));
    }
    unknown_constants(bound, k)
}

/// `Cβ²δ²` if `βδ² ≤ 1`, else `Cβ`, for the δ-interior ball condition.
pub fn lb_rolling(delta: f64, beta: f64, k: &BoundConstants) -> Bound {
    let c = k.big_c();
    let b = beta.abs();
    let value = if b * delta * delta <= 1.0 { c * b * b * delta * delta } else { c * b };
    let mut bound = Bound::new("rolling_radius", Side::Lower, value, false)
        .constant("C", c)
        .constant("M", k.m);
    if delta == 0.0 {
        bound = bound.note("δ = 0: trivial bound");
    }
    unknown_constants(bound, k)
}

/// `(1/K) min λ₁(Ωᵢ)` for a covering where each point lies in at most `K` pieces.
pub fn lb_covering(piece_lambda1s: &[f64], multiplicity: usize) -> Result<Bound> {
    if piece_lambda1s.is_empty() || multiplicity == 0 {
        return Err(BoundError::Invalid("covering needs pieces and K ≥ 1".into()));
    }
    let min = piece_lambda1s.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Bound::new("covering", Side::Lower, min / multiplicity as f64, false).constant("K", multiplicity as f64))
}

/// Greedy maximal ε-net of grid points at distance ≥ ε from the boundary,
/// deepest points first. Returns the points and the largest number of balls
/// `B(pᵢ, 2ε)` covering a single grid point of the domain.
pub fn eps_net(spec: &DomainSpec, eps: f64, grid: usize) -> Result<(Vec<[f64; 2]>, usize)> {
    let s = geometry::summarize_with_grid(spec, 256)?;
    if !(eps > 0.0) || eps > s.inradius * (1.0 + 1e-9) + s.inradius_uncertainty {
        return Err(BoundError::Invalid(format!(
            "ε = {eps} leaves no interior points (inradius {})",
            s.inradius
        )));
    }
    let (lo, hi) = spec.bounding_box();
    let grid = grid.max(3) | 1;
    let step = (hi[0] - lo[0]).max(hi[1] - lo[1]) / (grid - 1) as f64;
    let centre = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let half = |ext: f64| ((ext / 2.0) / step + 1e-9).floor() as i64;
    let (hx, hy) = (half(hi[0] - lo[0]), half(hi[1] - lo[1]));
    let mut inside = Vec::new();
    for j in -hy..=hy {
        for i in -hx..=hx {
            let p = [centre[0] + i as f64 * step, centre[1] + j as f64 * step];
            if contains(spec, p) {
                inside.push((p, boundary_distance(spec, p)));
            }
        }
    }
    let quantum = 1e-12 * s.diameter;
    let mut cands: Vec<(usize, i64)> = inside
        .iter()
        .enumerate()
        .filter(|(_, (_, d))| *d >= eps * (1.0 - 1e-9))
        .map(|(k, (_, d))| (k, (d / quantum).round() as i64))
        .collect();
    cands.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut net: Vec<[f64; 2]> = Vec::new();
    for (k, _) in cands {
        let p = inside[k].0;
        if net.iter().all(|q| geometry::dist(p, *q) >= eps * (1.0 + 1e-9)) {
            net.push(p);
        }
    }
    let k_measured = inside
        .iter()
        .map(|(p, _)| net.iter().filter(|q| geometry::dist(*p, **q) < 2.0 * eps).count())
        .max()
        .unwrap_or(0)
        .max(1);
    Ok((net, k_measured))
}

/// `λ₁(Γ, Â) ≤ β/4` for closed curves.
pub fn curve_ub_quarter(beta: f64) -> Bound {
    Bound::new("curve_quarter", Side::Upper, beta.abs() / 4.0, false)
}

const EPS0_CAVEAT: &str = "valid only for h below an unquantified threshold ε₀ depending on the curve";

/// `λ₁(ω_h) ≥ λ₁(Γ) − √β h` for the inner tube of thickness `h`.
pub fn tube_lb(curve_lambda1: f64, beta: f64, h: f64) -> Bound {
    Bound::new(
        "tube",
        Side::Lower,
        (curve_lambda1 - beta.abs().sqrt() * h).max(0.0),
        false,
    )
    .note(EPS0_CAVEAT)
}

/// [`tube_lb`] for a concrete curve, checking that the flux `β|Ω|/2π` is not an integer.
pub fn tube_lb_curve(curve: &CurveSpec, beta: f64, h: f64) -> Result<Bound> {
    let (l, s) = geometry::curve_invariants(curve)?;
    let lam = curve_lambda1(l, s, beta)?;
    let flux = beta * s / (2.0 * PI);
    let b = tube_lb(lam, beta, h);
    if (flux - flux.round()).abs() < 1e-12 {
        return Ok(b.fail(format!("flux β|Ω|/2π = {flux} is an integer")));
    }
    Ok(b)
}

/// `(λ, β) ↦ (λ/α², β/α²)`: the eigenvalue on `αΩ` for the field `β/α²`.
pub fn scale_map(lambda: f64, alpha: f64, beta: f64) -> (f64, f64) {
    (lambda / (alpha * alpha), beta / (alpha * alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Conditional,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Signed distance to violation: positive means the inequality holds.
    pub margin: f64,
    pub lambda1: f64,
}

/// Compares a bound against the first computed eigenvalue, allowing for the
/// solver uncertainty. Strict bounds must hold beyond the uncertainty.
pub fn check(bound: &Bound, spectrum: &Spectrum) -> Verdict {
    check_value(bound, spectrum.eigenvalues[0], spectrum.uncertainty(0))
}

/// As [`check`] for a single eigenvalue with absolute uncertainty `unc`.
pub fn check_value(bound: &Bound, lambda1: f64, unc: f64) -> Verdict {
    let margin = match bound.side {
        Side::Upper => bound.value - lambda1,
        Side::Lower => lambda1 - bound.value,
    };
    let holds = if bound.strict { margin > unc } else { margin >= -unc };
    let status = if !bound.hypotheses_ok {
        Status::Inapplicable
    } else if bound.conditional {
        Status::Conditional
    } else if holds {
        Status::Pass
    } else {
        Status::Fail
    };
    Verdict { status, margin, lambda1 }
}
