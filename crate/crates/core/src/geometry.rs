//! Planar domains and closed curves with their geometric functionals.
//!
//! Every parametric domain is placed in a canonical position: disks, annuli
//! and ellipses are centred at the origin, rectangles are centred at the
//! origin with sides parallel to the axes. The placement matters for the
//! standard potential on non simply connected domains, where the spectrum is
//! not gauge invariant under translations of the hole.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point in the plane.
pub type Point = [f64; 2];

/// Default resolution of the sampled distance transform used for polygon inradii.
pub const DEFAULT_INRADIUS_GRID: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid domain: {0}")]
    Invalid(String),
    #[error("tube thickness {thickness} must stay below the minimal curvature radius {limit} of the curve")]
    Curvature { thickness: f64, limit: f64 },
    #[error("curve is self-intersecting: edges {0} and {1} cross")]
    SelfIntersection(usize, usize),
}

type Result<T> = std::result::Result<T, GeometryError>;

/// Simple closed curve, counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum CurveSpec {
    Circle {
        #[serde(rename = "R")]
        radius: f64,
    },
    /// Semi-axes `a` along x and `b` along y.
    Ellipse { a: f64, b: f64 },
    Polyline { vertices: Vec<Point> },
}

/// Shape of a domain; serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Shape {
    Disk {
        #[serde(rename = "R")]
        radius: f64,
    },
    Rectangle {
        #[serde(rename = "w")]
        width: f64,
        #[serde(rename = "h")]
        height: f64,
    },
    Annulus {
        r_in: f64,
        r_out: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    Polygon {
        vertices: Vec<Point>,
    },
    /// Inner tubular neighbourhood `{x in Ω : dist(x, ∂Ω) < h}` of the curve `∂Ω`.
    Tube {
        curve: CurveSpec,
        #[serde(rename = "h")]
        thickness: f64,
    },
}

/// Strip hypothesis: the domain lies in `(a, b) x (base, ∞)` and contains
/// `(a, b) x (base, base + height)` for the height demanded by the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripCondition {
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub base: f64,
}

/// Caller-asserted class flags. For disks and rectangles the relevant ones are
/// derived automatically by [`DomainSpec::derived_flags`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DomainFlags {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simply_connected: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgraph: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strip: Option<StripCondition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_tiling_lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default)]
    pub flags: DomainFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricSummary {
    pub area: f64,
    pub perimeter: f64,
    pub circumradius: f64,
    pub inradius: f64,
    /// Zero for closed forms; one grid-cell diagonal for sampled polygon inradii.
    pub inradius_uncertainty: f64,
    pub width: f64,
    pub diameter: f64,
    /// Interior ball radius; 0 for domains with corners.
    pub rolling_radius: f64,
    pub simply_connected: bool,
}

impl From<Shape> for DomainSpec {
    fn from(shape: Shape) -> Self {
        DomainSpec {
            shape,
            flags: DomainFlags::default(),
        }
    }
}

/// Short form `kind:key=value,...`, e.g. `disk:R=1`, `rectangle:w=2,h=1`,
/// `square:s=1`, `annulus:r_in=1,r_out=2`, `ellipse:a=1,b=0.5`,
/// `tube:curve=ellipse,a=1,b=0.5,h=0.1` or `tube:curve=circle,R=1.5,h=0.1`.
impl std::str::FromStr for DomainSpec {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| GeometryError::Invalid(format!("expected key=value, got `{part}`")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |k: &str| -> Result<f64> {
            let v = kv.get(k).ok_or_else(|| GeometryError::Invalid(format!("{kind}: missing `{k}`")))?;
            v.parse::<f64>()
                .map_err(|_| GeometryError::Invalid(format!("{kind}: `{k}={v}` is not a number")))
        };
        let spec = match kind.trim() {
            "disk" => DomainSpec::disk(num("R")?),
            "rectangle" | "rect" => DomainSpec::rectangle(num("w")?, num("h")?),
            "square" => DomainSpec::rectangle(num("s")?, num("s")?),
            "annulus" => DomainSpec::annulus(num("r_in")?, num("r_out")?),
            "ellipse" => DomainSpec::ellipse(num("a")?, num("b")?),
            "tube" => {
                let curve = match kv.get("curve").map(String::as_str) {
                    Some("circle") => CurveSpec::Circle { radius: num("R")? },
                    Some("ellipse") => CurveSpec::Ellipse { a: num("a")?, b: num("b")? },
                    other => {
                        return Err(GeometryError::Invalid(format!(
                            "tube: curve must be circle or ellipse, got {other:?}"
                        )))
                    }
                };
                tube_domain(&curve, num("h")?)?
            }
            other => return Err(GeometryError::Invalid(format!("unknown domain kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl DomainSpec {
    pub fn disk(radius: f64) -> Self {
        Shape::Disk { radius }.into()
    }

    pub fn rectangle(width: f64, height: f64) -> Self {
        Shape::Rectangle { width, height }.into()
    }

    pub fn annulus(r_in: f64, r_out: f64) -> Self {
        Shape::Annulus { r_in, r_out }.into()
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Shape::Ellipse { a, b }.into()
    }

    pub fn polygon(vertices: Vec<Point>) -> Self {
        Shape::Polygon { vertices }.into()
    }

    pub fn with_flags(mut self, flags: DomainFlags) -> Self {
        self.flags = flags;
        self
    }

    /// Short identifier used in CSV output, e.g. `disk_R1`.
    pub fn id(&self) -> String {
        match &self.shape {
            Shape::Disk { radius } => format!("disk_R{radius}"),
            Shape::Rectangle { width, height } => format!("rect_{width}x{height}"),
            Shape::Annulus { r_in, r_out } => format!("annulus_{r_in}_{r_out}"),
            Shape::Ellipse { a, b } => format!("ellipse_{a}_{b}"),
            Shape::Polygon { vertices } => format!("polygon_{}", vertices.len()),
            Shape::Tube { curve, thickness } => format!("tube_{}_h{thickness}", curve.id()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(GeometryError::Invalid(format!("{name} must be a positive length, got {v}")))
            }
        }
        match &self.shape {
            Shape::Disk { radius } => positive("R", *radius)?,
            Shape::Rectangle { width, height } => {
                positive("w", *width)?;
                positive("h", *height)?;
            }
            Shape::Annulus { r_in, r_out } => {
                positive("r_in", *r_in)?;
                positive("r_out", *r_out)?;
                if r_in >= r_out {
                    return Err(GeometryError::Invalid(format!(
                        "annulus needs r_in < r_out, got {r_in} >= {r_out}"
                    )));
                }
            }
            Shape::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
            }
            Shape::Polygon { vertices } => validate_polygon(vertices)?,
            Shape::Tube { curve, thickness } => {
                curve.validate()?;
                positive("h", *thickness)?;
                let limit = curve.min_curvature_radius();
                if *thickness >= limit {
                    return Err(GeometryError::Curvature {
                        thickness: *thickness,
                        limit,
                    });
                }
            }
        }
        if let Some(l) = self.flags.self_tiling_lambda {
            positive("self_tiling_lambda", l)?;
        }
        Ok(())
    }

    pub fn is_simply_connected(&self) -> bool {
        match &self.shape {
            Shape::Annulus { .. } | Shape::Tube { .. } => false,
            _ => self.flags.simply_connected.unwrap_or(true),
        }
    }

    /// Flags with the automatically derivable entries filled in: rectangles
    /// are sub-graphs over their bottom side, disks and ellipses are not.
    pub fn derived_flags(&self) -> DomainFlags {
        let mut flags = self.flags.clone();
        flags.simply_connected = Some(self.is_simply_connected());
        match &self.shape {
            Shape::Rectangle { width, height } => {
                flags.subgraph = Some(true);
                if flags.strip.is_none() {
                    flags.strip = Some(StripCondition {
                        a: -width / 2.0,
                        b: width / 2.0,
                        base: -height / 2.0,
                    });
                }
            }
            Shape::Disk { .. } | Shape::Ellipse { .. } | Shape::Annulus { .. } | Shape::Tube { .. } => {
                flags.subgraph.get_or_insert(false);
            }
            Shape::Polygon { .. } => {}
        }
        flags
    }

    /// The domain dilated by `alpha` about the origin.
    pub fn scaled(&self, alpha: f64) -> DomainSpec {
        let shape = match &self.shape {
            Shape::Disk { radius } => Shape::Disk { radius: alpha * radius },
            Shape::Rectangle { width, height } => Shape::Rectangle {
                width: alpha * width,
                height: alpha * height,
            },
            Shape::Annulus { r_in, r_out } => Shape::Annulus {
                r_in: alpha * r_in,
                r_out: alpha * r_out,
            },
            Shape::Ellipse { a, b } => Shape::Ellipse {
                a: alpha * a,
                b: alpha * b,
            },
            Shape::Polygon { vertices } => Shape::Polygon {
                vertices: vertices.iter().map(|p| [alpha * p[0], alpha * p[1]]).collect(),
            },
            Shape::Tube { curve, thickness } => Shape::Tube {
                curve: curve.scaled(alpha),
                thickness: alpha * thickness,
            },
        };
        let mut flags = self.flags.clone();
        if let Some(s) = flags.strip.as_mut() {
            s.a *= alpha;
            s.b *= alpha;
            s.base *= alpha;
        }
        DomainSpec { shape, flags }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.shape {
            Shape::Disk { radius } => ([-radius, -radius], [*radius, *radius]),
            Shape::Rectangle { width, height } => {
                ([-width / 2.0, -height / 2.0], [width / 2.0, height / 2.0])
            }
            Shape::Annulus { r_out, .. } => ([-r_out, -r_out], [*r_out, *r_out]),
            Shape::Ellipse { a, b } => ([-a, -b], [*a, *b]),
            Shape::Polygon { vertices } => polyline_bbox(vertices),
            Shape::Tube { curve, .. } => curve.bounding_box(),
        }
    }

    /// Sample `n` points on each boundary component.
    pub fn boundary_samples(&self, n: usize) -> Vec<Point> {
        let n = n.max(3);
        match &self.shape {
            Shape::Disk { radius } => CurveSpec::Circle { radius: *radius }.samples(n),
            Shape::Rectangle { width, height } => {
                let (w, h) = (width / 2.0, height / 2.0);
                let corners = vec![[-w, -h], [w, -h], [w, h], [-w, h]];
                CurveSpec::Polyline { vertices: corners }.samples(n)
            }
            Shape::Annulus { r_in, r_out } => {
                let mut pts = CurveSpec::Circle { radius: *r_out }.samples(n);
                pts.extend(CurveSpec::Circle { radius: *r_in }.samples(n));
                pts
            }
            Shape::Ellipse { a, b } => CurveSpec::Ellipse { a: *a, b: *b }.samples(n),
            Shape::Polygon { vertices } => CurveSpec::Polyline {
                vertices: vertices.clone(),
            }
            .samples(n),
            Shape::Tube { curve, thickness } => {
                let mut pts = curve.samples(n);
                pts.extend(curve.offset_samples(*thickness, n));
                pts
            }
        }
    }
}

impl CurveSpec {
    pub fn id(&self) -> String {
        match self {
            CurveSpec::Circle { radius } => format!("circle_R{radius}"),
            CurveSpec::Ellipse { a, b } => format!("ellipse_{a}_{b}"),
            CurveSpec::Polyline { vertices } => format!("polyline_{}", vertices.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CurveSpec::Circle { radius } if !(*radius > 0.0 && radius.is_finite()) => Err(
                GeometryError::Invalid(format!("circle radius must be positive, got {radius}")),
            ),
            CurveSpec::Ellipse { a, b } if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) => {
                Err(GeometryError::Invalid(format!(
                    "ellipse semi-axes must be positive, got a={a}, b={b}"
                )))
            }
            CurveSpec::Polyline { vertices } => validate_polygon(vertices),
            _ => Ok(()),
        }
    }

    pub fn scaled(&self, alpha: f64) -> CurveSpec {
        match self {
            CurveSpec::Circle { radius } => CurveSpec::Circle { radius: alpha * radius },
            CurveSpec::Ellipse { a, b } => CurveSpec::Ellipse {
                a: alpha * a,
                b: alpha * b,
            },
            CurveSpec::Polyline { vertices } => CurveSpec::Polyline {
                vertices: vertices.iter().map(|p| [alpha * p[0], alpha * p[1]]).collect(),
            },
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            CurveSpec::Circle { radius } => 2.0 * PI * radius,
            CurveSpec::Ellipse { a, b } => ellipse_perimeter(*a, *b),
            CurveSpec::Polyline { vertices } => polyline_perimeter(vertices),
        }
    }

    pub fn enclosed_area(&self) -> f64 {
        match self {
            CurveSpec::Circle { radius } => PI * radius * radius,
            CurveSpec::Ellipse { a, b } => PI * a * b,
            CurveSpec::Polyline { vertices } => shoelace(vertices),
        }
    }

    /// Smallest radius of curvature; zero for polylines (corners).
    pub fn min_curvature_radius(&self) -> f64 {
        match self {
            CurveSpec::Circle { radius } => *radius,
            CurveSpec::Ellipse { a, b } => {
                let (major, minor) = if a >= b { (*a, *b) } else { (*b, *a) };
                minor * minor / major
            }
            CurveSpec::Polyline { .. } => 0.0,
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            CurveSpec::Circle { radius } => ([-radius, -radius], [*radius, *radius]),
            CurveSpec::Ellipse { a, b } => ([-a, -b], [*a, *b]),
            CurveSpec::Polyline { vertices } => polyline_bbox(vertices),
        }
    }

    /// Point at parameter `t` in `[0, 1)`: angle fraction for circles and
    /// ellipses, arclength fraction for polylines.
    pub fn point(&self, t: f64) -> Point {
        match self {
            CurveSpec::Circle { radius } => {
                let th = 2.0 * PI * t;
                [radius * th.cos(), radius * th.sin()]
            }
            CurveSpec::Ellipse { a, b } => {
                let th = 2.0 * PI * t;
                [a * th.cos(), b * th.sin()]
            }
            CurveSpec::Polyline { vertices } => polyline_point(vertices, t),
        }
    }

    /// Unit inward normal at parameter `t` (smooth curves only).
    pub fn inward_normal(&self, t: f64) -> Point {
        let th = 2.0 * PI * t;
        let (tx, ty) = match self {
            CurveSpec::Circle { .. } => (-th.sin(), th.cos()),
            CurveSpec::Ellipse { a, b } => (-a * th.sin(), b * th.cos()),
            CurveSpec::Polyline { vertices } => {
                let n = vertices.len();
                let s = t.rem_euclid(1.0) * polyline_perimeter(vertices);
                let mut acc = 0.0;
                let mut dir = (1.0, 0.0);
                for i in 0..n {
                    let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                    let len = dist(p, q);
                    dir = (q[0] - p[0], q[1] - p[1]);
                    if acc + len >= s {
                        break;
                    }
                    acc += len;
                }
                dir
            }
        };
        let norm = tx.hypot(ty);
        [-ty / norm, tx / norm]
    }

    /// Parameter of the point at arclength `s` from `point(0)`.
    pub fn param_at_arclength(&self, s: f64) -> f64 {
        let total = self.length();
        let s = s.rem_euclid(total);
        match self {
            CurveSpec::Circle { .. } | CurveSpec::Polyline { .. } => s / total,
            CurveSpec::Ellipse { a, b } => {
                // Newton on s(θ) = ∫_0^θ |γ'|, started from the proportional guess.
                let speed = |th: f64| (a * th.sin()).hypot(b * th.cos());
                let mut th = 2.0 * PI * s / total;
                for _ in 0..50 {
                    let f = ellipse_arc(*a, *b, th) - s;
                    let step = f / speed(th);
                    th -= step;
                    if step.abs() < 1e-15 {
                        break;
                    }
                }
                th / (2.0 * PI)
            }
        }
    }

    /// `n` points equally spaced in arclength.
    pub fn samples(&self, n: usize) -> Vec<Point> {
        let total = self.length();
        (0..n)
            .map(|i| self.point(self.param_at_arclength(total * i as f64 / n as f64)))
            .collect()
    }

    /// `n` points on the inner parallel curve at distance `d` (smooth curves).
    pub fn offset_samples(&self, d: f64, n: usize) -> Vec<Point> {
        let total = self.length();
        (0..n)
            .map(|i| {
                let t = self.param_at_arclength(total * i as f64 / n as f64);
                self.offset_point(t, d)
            })
            .collect()
    }

    pub fn offset_point(&self, t: f64, d: f64) -> Point {
        let p = self.point(t);
        let nrm = self.inward_normal(t);
        [p[0] + d * nrm[0], p[1] + d * nrm[1]]
    }

    /// Parameter of the nearest curve point and the distance to it.
    pub fn nearest(&self, p: Point) -> (f64, f64) {
        match self {
            CurveSpec::Circle { radius } => {
                let r = p[0].hypot(p[1]);
                let t = p[1].atan2(p[0]).rem_euclid(2.0 * PI) / (2.0 * PI);
                (t, (r - radius).abs())
            }
            CurveSpec::Ellipse { a, b } => ellipse_nearest(*a, *b, p),
            CurveSpec::Polyline { vertices } => {
                let n = vertices.len();
                let total = polyline_perimeter(vertices);
                let mut best = (0.0, f64::INFINITY);
                let mut acc = 0.0;
                for i in 0..n {
                    let (q0, q1) = (vertices[i], vertices[(i + 1) % n]);
                    let (u, d) = segment_projection(p, q0, q1);
                    let len = dist(q0, q1);
                    if d < best.1 {
                        best = ((acc + u * len) / total, d);
                    }
                    acc += len;
                }
                best
            }
        }
    }

    pub fn distance(&self, p: Point) -> f64 {
        self.nearest(p).1
    }

    /// Strictly inside the region bounded by the curve.
    pub fn encloses(&self, p: Point) -> bool {
        match self {
            CurveSpec::Circle { radius } => p[0].hypot(p[1]) < *radius,
            CurveSpec::Ellipse { a, b } => (p[0] / a).powi(2) + (p[1] / b).powi(2) < 1.0,
            CurveSpec::Polyline { vertices } => {
                point_in_polygon(vertices, p) && polyline_distance(vertices, p) > 0.0
            }
        }
    }
}

/// Length and enclosed area of a closed curve.
pub fn curve_invariants(curve: &CurveSpec) -> Result<(f64, f64)> {
    curve.validate()?;
    Ok((curve.length(), curve.enclosed_area()))
}

/// One-sided inner tube of thickness `h` around `curve`.
pub fn tube_domain(curve: &CurveSpec, h: f64) -> Result<DomainSpec> {
    let spec: DomainSpec = Shape::Tube {
        curve: curve.clone(),
        thickness: h,
    }
    .into();
    spec.validate()?;
    Ok(spec)
}

pub fn summarize(spec: &DomainSpec) -> Result<GeometricSummary> {
    summarize_with_grid(spec, DEFAULT_INRADIUS_GRID)
}

/// As [`summarize`], with an explicit grid size for sampled polygon inradii.
pub fn summarize_with_grid(spec: &DomainSpec, grid: usize) -> Result<GeometricSummary> {
    spec.validate()?;
    let simply_connected = spec.is_simply_connected();
    let s = match &spec.shape {
        Shape::Disk { radius: r } => GeometricSummary {
            area: PI * r * r,
            perimeter: 2.0 * PI * r,
            circumradius: *r,
            inradius: *r,
            inradius_uncertainty: 0.0,
            width: 2.0 * r,
            diameter: 2.0 * r,
            rolling_radius: *r,
            simply_connected,
        },
        Shape::Rectangle { width, height } => {
            let diag = width.hypot(*height);
            GeometricSummary {
                area: width * height,
                perimeter: 2.0 * (width + height),
                circumradius: diag / 2.0,
                inradius: width.min(*height) / 2.0,
                inradius_uncertainty: 0.0,
                width: width.min(*height),
                diameter: diag,
                rolling_radius: 0.0,
                simply_connected,
            }
        }
        Shape::Annulus { r_in, r_out } => GeometricSummary {
            area: PI * (r_out * r_out - r_in * r_in),
            perimeter: 2.0 * PI * (r_in + r_out),
            circumradius: *r_out,
            inradius: (r_out - r_in) / 2.0,
            inradius_uncertainty: 0.0,
            width: 2.0 * r_out,
            diameter: 2.0 * r_out,
            rolling_radius: (r_out - r_in) / 2.0,
            simply_connected,
        },
        Shape::Ellipse { a, b } => {
            let (major, minor) = if a >= b { (*a, *b) } else { (*b, *a) };
            GeometricSummary {
                area: PI * a * b,
                perimeter: ellipse_perimeter(*a, *b),
                circumradius: major,
                inradius: minor,
                inradius_uncertainty: 0.0,
                width: 2.0 * minor,
                diameter: 2.0 * major,
                rolling_radius: minor * minor / major,
                simply_connected,
            }
        }
        Shape::Polygon { vertices } => {
            let (inradius, cell) = sampled_inradius(spec, vertices, grid);
            let hull = convex_hull(vertices);
            GeometricSummary {
                area: shoelace(vertices),
                perimeter: polyline_perimeter(vertices),
                circumradius: min_enclosing_circle(vertices).1,
                inradius,
                inradius_uncertainty: cell,
                width: convex_width(&hull),
                diameter: diameter(&hull),
                rolling_radius: 0.0,
                simply_connected,
            }
        }
        Shape::Tube { curve, thickness: h } => {
            let length = curve.length();
            let (circumradius, width, diam) = match curve {
                CurveSpec::Circle { radius } => (*radius, 2.0 * radius, 2.0 * radius),
                CurveSpec::Ellipse { a, b } => (a.max(*b), 2.0 * a.min(*b), 2.0 * a.max(*b)),
                CurveSpec::Polyline { vertices } => {
                    let hull = convex_hull(vertices);
                    (min_enclosing_circle(vertices).1, convex_width(&hull), diameter(&hull))
                }
            };
            GeometricSummary {
                area: length * h - PI * h * h,
                perimeter: 2.0 * length - 2.0 * PI * h,
                circumradius,
                inradius: h / 2.0,
                inradius_uncertainty: 0.0,
                width,
                diameter: diam,
                rolling_radius: h / 2.0,
                simply_connected,
            }
        }
    };
    Ok(s)
}

/// True iff `p` lies in the open domain; boundary points are outside.
pub fn contains(spec: &DomainSpec, p: Point) -> bool {
    match &spec.shape {
        Shape::Disk { radius } => p[0].hypot(p[1]) < *radius,
        Shape::Rectangle { width, height } => {
            p[0].abs() < width / 2.0 && p[1].abs() < height / 2.0
        }
        Shape::Annulus { r_in, r_out } => {
            let r = p[0].hypot(p[1]);
            r > *r_in && r < *r_out
        }
        Shape::Ellipse { a, b } => (p[0] / a).powi(2) + (p[1] / b).powi(2) < 1.0,
        Shape::Polygon { vertices } => {
            point_in_polygon(vertices, p) && polyline_distance(vertices, p) > 0.0
        }
        Shape::Tube { curve, thickness } => curve.encloses(p) && curve.distance(p) < *thickness,
    }
}

/// Distance from an interior point to the boundary; negative outside.
pub fn boundary_distance(spec: &DomainSpec, p: Point) -> f64 {
    let d = match &spec.shape {
        Shape::Disk { radius } => return radius - p[0].hypot(p[1]),
        Shape::Rectangle { width, height } => {
            let dx = width / 2.0 - p[0].abs();
            let dy = height / 2.0 - p[1].abs();
            if dx >= 0.0 && dy >= 0.0 {
                return dx.min(dy);
            }
            let ox = (-dx).max(0.0);
            let oy = (-dy).max(0.0);
            return -ox.hypot(oy);
        }
        Shape::Annulus { r_in, r_out } => {
            let r = p[0].hypot(p[1]);
            return (r_out - r).min(r - r_in);
        }
        Shape::Ellipse { a, b } => CurveSpec::Ellipse { a: *a, b: *b }.distance(p),
        Shape::Polygon { vertices } => polyline_distance(vertices, p),
        Shape::Tube { curve, thickness } => {
            let d = curve.distance(p);
            if !curve.encloses(p) {
                return -d;
            }
            return if d <= *thickness {
                d.min(thickness - d)
            } else {
                thickness - d
            };
        }
    };
    if contains(spec, p) {
        d
    } else {
        -d
    }
}

fn validate_polygon(vertices: &[Point]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(GeometryError::Invalid(format!(
            "polygon needs at least 3 vertices, got {n}"
        )));
    }
    if vertices.iter().flatten().any(|c| !c.is_finite()) {
        return Err(GeometryError::Invalid("polygon vertex is not finite".into()));
    }
    for i in 0..n {
        if dist(vertices[i], vertices[(i + 1) % n]) == 0.0 {
            return Err(GeometryError::Invalid(format!("polygon edge {i} has zero length")));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(
                vertices[i],
                vertices[(i + 1) % n],
                vertices[j],
                vertices[(j + 1) % n],
            ) {
                return Err(GeometryError::SelfIntersection(i, j));
            }
        }
    }
    if shoelace_signed(vertices) <= 0.0 {
        return Err(GeometryError::Invalid(
            "polygon vertices must be listed counterclockwise".into(),
        ));
    }
    Ok(())
}

pub(crate) fn dist(p: Point, q: Point) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, c: Point, d: f64| {
        d == 0.0
            && c[0] >= a[0].min(b[0])
            && c[0] <= a[0].max(b[0])
            && c[1] >= a[1].min(b[1])
            && c[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn shoelace_signed(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

pub(crate) fn shoelace(v: &[Point]) -> f64 {
    shoelace_signed(v).abs()
}

fn polyline_perimeter(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| dist(v[i], v[(i + 1) % n])).sum()
}

fn polyline_point(v: &[Point], t: f64) -> Point {
    let n = v.len();
    let s = t.rem_euclid(1.0) * polyline_perimeter(v);
    let mut acc = 0.0;
    for i in 0..n {
        let (p, q) = (v[i], v[(i + 1) % n]);
        let len = dist(p, q);
        if acc + len >= s {
            let u = (s - acc) / len;
            return [p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1])];
        }
        acc += len;
    }
    v[0]
}

fn polyline_bbox(v: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in v {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Returns the segment parameter in `[0, 1]` of the projection and the distance.
fn segment_projection(p: Point, a: Point, b: Point) -> (f64, f64) {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let u = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    let q = [a[0] + u * dx, a[1] + u * dy];
    (u, dist(p, q))
}

pub(crate) fn polyline_distance(v: &[Point], p: Point) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| segment_projection(p, v[i], v[(i + 1) % n]).1)
        .fold(f64::INFINITY, f64::min)
}

/// Even-odd crossing test.
pub(crate) fn point_in_polygon(v: &[Point], p: Point) -> bool {
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0];
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Perimeter of an ellipse by the periodic trapezoid rule, doubled until the
/// change drops below 1e-14 relative (exponential convergence for smooth
/// periodic integrands).
fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let speed = |th: f64| (a * th.sin()).hypot(b * th.cos());
    let mut n = 16usize;
    let mut prev = f64::NAN;
    loop {
        let h = 2.0 * PI / n as f64;
        let l: f64 = (0..n).map(|i| speed(i as f64 * h)).sum::<f64>() * h;
        if (l - prev).abs() <= 1e-14 * l || n > 1 << 20 {
            return l;
        }
        prev = l;
        n *= 2;
    }
}

/// Arclength of the ellipse from θ = 0 to θ (composite 8-point Gauss-Legendre).
fn ellipse_arc(a: f64, b: f64, theta: f64) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329_0,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362_0,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let speed = |th: f64| (a * th.sin()).hypot(b * th.cos());
    let panels = ((theta.abs() / (PI / 64.0)).ceil() as usize).max(1);
    let h = theta / panels as f64;
    let mut s = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W.iter()) {
            s += w * (speed(mid + 0.5 * h * x) + speed(mid - 0.5 * h * x));
        }
    }
    s * 0.5 * h
}

fn ellipse_nearest(a: f64, b: f64, p: Point) -> (f64, f64) {
    let gamma = |th: f64| [a * th.cos(), b * th.sin()];
    let samples = 128;
    let mut best_th = 0.0;
    let mut best_d = f64::INFINITY;
    for i in 0..samples {
        let th = 2.0 * PI * i as f64 / samples as f64;
        let d = dist(gamma(th), p);
        if d < best_d {
            best_d = d;
            best_th = th;
        }
    }
    // Newton on g(θ) = (γ(θ) - p)·γ'(θ), kept inside the bracketing sample cell.
    let step = 2.0 * PI / samples as f64;
    let (lo, hi) = (best_th - step, best_th + step);
    let mut th = best_th;
    for _ in 0..40 {
        let (c, s) = (th.cos(), th.sin());
        let g = (a * c - p[0]) * (-a * s) + (b * s - p[1]) * (b * c);
        let dg = (a * s).powi(2) + (b * c).powi(2) + (a * c - p[0]) * (-a * c) + (b * s - p[1]) * (-b * s);
        if dg <= 0.0 {
            break;
        }
        let next = (th - g / dg).clamp(lo, hi);
        if (next - th).abs() < 1e-15 {
            th = next;
            break;
        }
        th = next;
    }
    let d = dist(gamma(th), p);
    if d < best_d {
        (th.rem_euclid(2.0 * PI) / (2.0 * PI), d)
    } else {
        (best_th / (2.0 * PI), best_d)
    }
}

/// Andrew's monotone chain; counterclockwise without collinear points.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Minimal distance between parallel supporting lines (rotating calipers over hull edges).
fn convex_width(hull: &[Point]) -> f64 {
    let n = hull.len();
    if n < 3 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            let len = dist(a, b);
            hull.iter()
                .map(|&p| cross(a, b, p).abs() / len)
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn diameter(hull: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in hull.iter().enumerate() {
        for q in &hull[i + 1..] {
            d = d.max(dist(*p, *q));
        }
    }
    d
}

/// Minimal enclosing circle (iterative Welzl with move-to-front).
pub(crate) fn min_enclosing_circle(points: &[Point]) -> (Point, f64) {
    let eps = 1e-12;
    let inside = |c: Point, r: f64, p: Point| dist(c, p) <= r * (1.0 + eps) + eps;
    let circle2 = |a: Point, b: Point| {
        let c = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        (c, dist(a, b) / 2.0)
    };
    let circle3 = |a: Point, b: Point, c: Point| {
        let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
        if d.abs() < 1e-300 {
            // Collinear: the widest pair.
            let cands = [circle2(a, b), circle2(a, c), circle2(b, c)];
            return cands.into_iter().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
        }
        let sa = a[0] * a[0] + a[1] * a[1];
        let sb = b[0] * b[0] + b[1] * b[1];
        let sc = c[0] * c[0] + c[1] * c[1];
        let ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d;
        let uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d;
        ([ux, uy], dist([ux, uy], a))
    };
    let pts = points.to_vec();
    let mut c = pts[0];
    let mut r = 0.0;
    for i in 1..pts.len() {
        if inside(c, r, pts[i]) {
            continue;
        }
        c = pts[i];
        r = 0.0;
        for j in 0..i {
            if inside(c, r, pts[j]) {
                continue;
            }
            (c, r) = circle2(pts[i], pts[j]);
            for k in 0..j {
                if !inside(c, r, pts[k]) {
                    (c, r) = circle3(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    (c, r)
}

/// Largest boundary distance over a `grid x grid` sampling of the bounding box.
/// Returns the estimate and the cell diagonal as its uncertainty.
fn sampled_inradius(spec: &DomainSpec, vertices: &[Point], grid: usize) -> (f64, f64) {
    let (lo, hi) = polyline_bbox(vertices);
    let grid = grid.max(2);
    let dx = (hi[0] - lo[0]) / grid as f64;
    let dy = (hi[1] - lo[1]) / grid as f64;
    let mut best: f64 = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let p = [lo[0] + (i as f64 + 0.5) * dx, lo[1] + (j as f64 + 0.5) * dy];
            if contains(spec, p) {
                best = best.max(polyline_distance(vertices, p));
            }
        }
    }
    (best, dx.hypot(dy))
}
