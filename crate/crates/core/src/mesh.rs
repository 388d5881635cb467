//! Triangle meshes for the domain kinds in [`crate::geometry`].
//!
//! Disks, annuli and ellipses get structured ring meshes, rectangles a
//! structured grid, tubes a mesh of offset layers, and general polygons a
//! refined constrained Delaunay triangulation.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use spade::{ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};
use thiserror::Error;

use crate::geometry::{self, CurveSpec, DomainSpec, GeometryError, Point, Shape};

/// Minimal interior angle, in degrees, that [`generate`] guarantees.
pub const MIN_ANGLE_DEG: f64 = 20.0;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("mesh size {h_target} cannot resolve the domain: {reason}")]
    Resolution { h_target: f64, reason: String },
    #[error("mesh quality too low: minimal angle {min_angle:.2} deg")]
    Quality { min_angle: f64 },
    #[error("invalid mesh: {0}")]
    Invalid(String),
    #[error("malformed mesh file, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

type Result<T> = std::result::Result<T, MeshError>;

/// Exact shape of a boundary loop, used to place new boundary nodes on refinement.
#[derive(Debug, Clone, PartialEq)]
pub enum LoopShape {
    Straight,
    /// Inner parallel curve at distance `offset` of `curve`.
    Curve { curve: CurveSpec, offset: f64 },
}

impl LoopShape {
    fn project(&self, p: Point) -> Point {
        match self {
            LoopShape::Straight => p,
            LoopShape::Curve { curve, offset } => {
                if let CurveSpec::Circle { radius } = curve {
                    let r = p[0].hypot(p[1]);
                    let target = radius - offset;
                    return [p[0] * target / r, p[1] * target / r];
                }
                let (t, _) = curve.nearest(p);
                curve.offset_point(t, *offset)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub nodes: Vec<Point>,
    /// Counterclockwise index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary edges `(i, j, loop)` oriented with the domain on the left:
    /// the outer loop (id 0) runs counterclockwise, holes clockwise.
    pub boundary_edges: Vec<(usize, usize, usize)>,
    pub h_max: f64,
    pub loop_shapes: Vec<LoopShape>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub min_angle: f64,
    pub h_max: f64,
    /// Triangles with non-positive or negligible signed area.
    pub degenerate: usize,
}

impl QualityReport {
    pub fn is_acceptable(&self) -> bool {
        self.degenerate == 0 && self.min_angle >= MIN_ANGLE_DEG
    }
}

pub fn generate(spec: &DomainSpec, h_target: f64) -> Result<TriangleMesh> {
    spec.validate()?;
    if !(h_target.is_finite() && h_target > 0.0) {
        return Err(MeshError::Resolution {
            h_target,
            reason: "mesh size must be positive".into(),
        });
    }
    let mesh = match &spec.shape {
        Shape::Disk { radius } => disk_mesh(*radius, h_target),
        Shape::Rectangle { width, height } => rectangle_mesh(*width, *height, h_target),
        Shape::Annulus { r_in, r_out } => annulus_mesh(*r_in, *r_out, h_target),
        Shape::Ellipse { a, b } => ellipse_mesh(*a, *b, h_target),
        Shape::Polygon { vertices } => polygon_mesh(vertices, h_target)?,
        Shape::Tube { curve, thickness } => {
            if h_target > *thickness {
                return Err(MeshError::Resolution {
                    h_target,
                    reason: format!("tube thickness {thickness} is smaller than the mesh size"),
                });
            }
            tube_mesh(curve, *thickness, h_target)
        }
    };
    mesh.validate()?;
    let q = mesh.quality();
    if !q.is_acceptable() {
        return Err(MeshError::Quality { min_angle: q.min_angle });
    }
    Ok(mesh)
}

impl TriangleMesh {
    /// Builds a mesh from nodes and triangles, deriving the boundary loops.
    /// Triangles are reoriented counterclockwise if needed.
    pub fn from_parts(nodes: Vec<Point>, mut triangles: Vec<[usize; 3]>, loop_shapes: Vec<LoopShape>) -> Self {
        for t in triangles.iter_mut() {
            if signed_area(&nodes, *t) < 0.0 {
                t.swap(1, 2);
            }
        }
        let boundary_edges = boundary_loops(&nodes, &triangles);
        let mut mesh = TriangleMesh {
            nodes,
            triangles,
            boundary_edges,
            h_max: 0.0,
            loop_shapes,
        };
        mesh.h_max = mesh.max_edge();
        let loops = mesh.loop_count();
        mesh.loop_shapes.resize(loops, LoopShape::Straight);
        mesh
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn loop_count(&self) -> usize {
        self.boundary_edges.iter().map(|e| e.2 + 1).max().unwrap_or(0)
    }

    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| signed_area(&self.nodes, *t)).sum()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        signed_area(&self.nodes, self.triangles[t])
    }

    /// Sorted, deduplicated list of nodes on the boundary.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self.boundary_edges.iter().flat_map(|e| [e.0, e.1]).collect();
        b.sort_unstable();
        b.dedup();
        b
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| geometry::dist(self.nodes[a], self.nodes[b]))
            .fold(0.0, f64::max)
    }

    pub fn quality(&self) -> QualityReport {
        let mut min_angle = 180.0f64;
        let mut degenerate = 0;
        let scale = self.max_edge().max(f64::MIN_POSITIVE);
        for t in &self.triangles {
            let area = signed_area(&self.nodes, *t);
            if !(area > 1e-14 * scale * scale) {
                degenerate += 1;
                min_angle = 0.0;
                continue;
            }
            for k in 0..3 {
                let p = self.nodes[t[k]];
                let q = self.nodes[t[(k + 1) % 3]];
                let r = self.nodes[t[(k + 2) % 3]];
                let u = [q[0] - p[0], q[1] - p[1]];
                let v = [r[0] - p[0], r[1] - p[1]];
                let ang = (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]);
                min_angle = min_angle.min(ang.to_degrees());
            }
        }
        QualityReport {
            min_angle,
            h_max: self.max_edge(),
            degenerate,
        }
    }

    /// Checks orientation, edge manifoldness, closed loops and index ranges.
    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for (k, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= n) {
                return Err(MeshError::Invalid(format!("triangle {k} has a node index out of range")));
            }
            if signed_area(&self.nodes, *t) <= 0.0 {
                return Err(MeshError::Invalid(format!("triangle {k} is not counterclockwise")));
            }
        }
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if let Some((e, _)) = count.iter().find(|(_, &c)| c > 2) {
            return Err(MeshError::Invalid(format!("edge {e:?} is shared by more than two triangles")));
        }
        let mut out_deg: HashMap<usize, i64> = HashMap::new();
        for &(i, j, _) in &self.boundary_edges {
            if i >= n || j >= n {
                return Err(MeshError::Invalid("boundary edge index out of range".into()));
            }
            *out_deg.entry(i).or_default() += 1;
            *out_deg.entry(j).or_default() -= 1;
        }
        if out_deg.values().any(|&d| d != 0) {
            return Err(MeshError::Invalid("boundary edges do not form closed loops".into()));
        }
        Ok(())
    }

    /// Uniform 4-way split. New boundary nodes are projected onto the exact
    /// boundary of curved loops.
    pub fn refine(&self) -> TriangleMesh {
        let mut nodes = self.nodes.clone();
        let mut loop_of: HashMap<(usize, usize), usize> = HashMap::new();
        for &(i, j, l) in &self.boundary_edges {
            loop_of.insert((i.min(j), i.max(j)), l);
        }
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                let mut m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
                if let Some(&l) = loop_of.get(&key) {
                    if let Some(shape) = self.loop_shapes.get(l) {
                        m = shape.project(m);
                    }
                }
                nodes.push(m);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for t in &self.triangles {
            let ab = midpoint(t[0], t[1], &mut nodes);
            let bc = midpoint(t[1], t[2], &mut nodes);
            let ca = midpoint(t[2], t[0], &mut nodes);
            triangles.push([t[0], ab, ca]);
            triangles.push([ab, t[1], bc]);
            triangles.push([ca, bc, t[2]]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for &(i, j, l) in &self.boundary_edges {
            let m = midpoint(i, j, &mut nodes);
            boundary_edges.push((i, m, l));
            boundary_edges.push((m, j, l));
        }
        let mut mesh = TriangleMesh {
            nodes,
            triangles,
            boundary_edges,
            h_max: 0.0,
            loop_shapes: self.loop_shapes.clone(),
        };
        mesh.h_max = mesh.max_edge();
        mesh
    }

    /// Text format: `nv nt nb`, then node, triangle and boundary edge lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.nodes.len(), self.triangles.len(), self.boundary_edges.len());
        for p in &self.nodes {
            let _ = writeln!(s, "{:?} {:?}", p[0], p[1]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        for e in &self.boundary_edges {
            let _ = writeln!(s, "{} {} {}", e.0, e.1, e.2);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<TriangleMesh> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| {
            lines.next().ok_or(MeshError::Parse {
                line: 0,
                msg: format!("unexpected end of file, expected {what}"),
            })
        };
        fn fields<T: std::str::FromStr>(line: usize, s: &str, n: usize) -> Result<Vec<T>> {
            let v: Vec<T> = s
                .split_whitespace()
                .map(|x| x.parse::<T>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| MeshError::Parse {
                    line: line + 1,
                    msg: format!("cannot parse '{s}'"),
                })?;
            if v.len() != n {
                return Err(MeshError::Parse {
                    line: line + 1,
                    msg: format!("expected {n} fields, found {}", v.len()),
                });
            }
            Ok(v)
        }
        let (ln, header) = next("header")?;
        let h: Vec<usize> = fields(ln, header, 3)?;
        let mut nodes = Vec::with_capacity(h[0]);
        for _ in 0..h[0] {
            let (ln, l) = next("node")?;
            let v: Vec<f64> = fields(ln, l, 2)?;
            nodes.push([v[0], v[1]]);
        }
        let mut triangles = Vec::with_capacity(h[1]);
        for _ in 0..h[1] {
            let (ln, l) = next("triangle")?;
            let v: Vec<usize> = fields(ln, l, 3)?;
            triangles.push([v[0], v[1], v[2]]);
        }
        let mut boundary_edges = Vec::with_capacity(h[2]);
        for _ in 0..h[2] {
            let (ln, l) = next("boundary edge")?;
            let v: Vec<usize> = fields(ln, l, 3)?;
            boundary_edges.push((v[0], v[1], v[2]));
        }
        let mut mesh = TriangleMesh {
            nodes,
            triangles,
            boundary_edges,
            h_max: 0.0,
            loop_shapes: Vec::new(),
        };
        mesh.validate()?;
        mesh.h_max = mesh.max_edge();
        mesh.loop_shapes = vec![LoopShape::Straight; mesh.loop_count()];
        Ok(mesh)
    }
}

pub(crate) fn signed_area(nodes: &[Point], t: [usize; 3]) -> f64 {
    let (a, b, c) = (nodes[t[0]], nodes[t[1]], nodes[t[2]]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

/// Edges used by one triangle, chained into loops. The loop with the largest
/// positive enclosed area gets id 0, holes follow by decreasing size.
fn boundary_loops(nodes: &[Point], triangles: &[[usize; 3]]) -> Vec<(usize, usize, usize)> {
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for t in triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut succ: Vec<(usize, usize)> = Vec::new();
    for t in triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if count[&(a.min(b), a.max(b))] == 1 {
                succ.push((a, b));
            }
        }
    }
    succ.sort_unstable();
    let next: HashMap<usize, usize> = succ.iter().copied().collect();
    let mut used: HashMap<usize, bool> = HashMap::new();
    let mut loops: Vec<Vec<(usize, usize)>> = Vec::new();
    for &(start, _) in &succ {
        if used.contains_key(&start) {
            continue;
        }
        let mut lp = Vec::new();
        let mut cur = start;
        loop {
            used.insert(cur, true);
            let nx = next[&cur];
            lp.push((cur, nx));
            cur = nx;
            if cur == start || used.contains_key(&cur) {
                break;
            }
        }
        loops.push(lp);
    }
    let signed = |lp: &Vec<(usize, usize)>| -> f64 {
        lp.iter()
            .map(|&(i, j)| nodes[i][0] * nodes[j][1] - nodes[j][0] * nodes[i][1])
            .sum::<f64>()
            / 2.0
    };
    loops.sort_by(|a, b| signed(b).total_cmp(&signed(a)));
    let mut out = Vec::new();
    // Outer loop first, then holes with the largest |area| first.
    if let Some((first, rest)) = loops.split_first_mut() {
        out.extend(first.iter().map(|&(i, j)| (i, j, 0)));
        rest.sort_by(|a, b| signed(a).total_cmp(&signed(b)));
        for (l, lp) in rest.iter().enumerate() {
            out.extend(lp.iter().map(|&(i, j)| (i, j, l + 1)));
        }
    }
    out
}

/// Triangulates the strip between two closed loops. `inner` and `outer` hold
/// node indices with their parameter fractions in `[0, 1)`, both starting at 0.
fn strip(nodes: &[Point], inner: &[(usize, f64)], outer: &[(usize, f64)], tris: &mut Vec<[usize; 3]>) {
    let (ni, no) = (inner.len(), outer.len());
    let (mut i, mut j) = (0, 0);
    while i < ni || j < no {
        let advance_inner = if j == no {
            true
        } else if i == ni {
            false
        } else {
            let d_inner = geometry::dist(nodes[inner[(i + 1) % ni].0], nodes[outer[j % no].0]);
            let d_outer = geometry::dist(nodes[inner[i % ni].0], nodes[outer[(j + 1) % no].0]);
            d_inner < d_outer
        };
        if advance_inner {
            tris.push([inner[i % ni].0, outer[j % no].0, inner[(i + 1) % ni].0]);
            i += 1;
        } else {
            tris.push([inner[i % ni].0, outer[j % no].0, outer[(j + 1) % no].0]);
            j += 1;
        }
    }
}

fn push_ring(nodes: &mut Vec<Point>, pts: impl Iterator<Item = (Point, f64)>) -> Vec<(usize, f64)> {
    pts.map(|(p, f)| {
        nodes.push(p);
        (nodes.len() - 1, f)
    })
    .collect()
}

fn disk_mesh(radius: f64, h: f64) -> TriangleMesh {
    let rings = (radius / h).ceil().max(1.0) as usize;
    let mut nodes = vec![[0.0, 0.0]];
    let mut tris = Vec::new();
    let mut prev = vec![(0usize, 0.0)];
    for i in 1..=rings {
        let count = 6 * i;
        let r = if i == rings { radius } else { radius * i as f64 / rings as f64 };
        let ring = push_ring(
            &mut nodes,
            (0..count).map(|k| {
                let f = k as f64 / count as f64;
                let th = 2.0 * PI * f;
                ([r * th.cos(), r * th.sin()], f)
            }),
        );
        if i == 1 {
            for k in 0..count {
                tris.push([0, ring[k].0, ring[(k + 1) % count].0]);
            }
        } else {
            strip(&nodes, &prev, &ring, &mut tris);
        }
        prev = ring;
    }
    TriangleMesh::from_parts(
        nodes,
        tris,
        vec![LoopShape::Curve {
            curve: CurveSpec::Circle { radius },
            offset: 0.0,
        }],
    )
}

fn annulus_mesh(r_in: f64, r_out: f64, h: f64) -> TriangleMesh {
    let layers = ((r_out - r_in) / h).ceil().max(1.0) as usize;
    let dr = (r_out - r_in) / layers as f64;
    let mut nodes = Vec::new();
    let mut tris = Vec::new();
    let mut prev: Vec<(usize, f64)> = Vec::new();
    for i in 0..=layers {
        let r = if i == layers { r_out } else { r_in + dr * i as f64 };
        let count = ((2.0 * PI * r / dr).ceil() as usize).max(6);
        let ring = push_ring(
            &mut nodes,
            (0..count).map(|k| {
                let f = k as f64 / count as f64;
                let th = 2.0 * PI * f;
                ([r * th.cos(), r * th.sin()], f)
            }),
        );
        if i > 0 {
            strip(&nodes, &prev, &ring, &mut tris);
        }
        prev = ring;
    }
    TriangleMesh::from_parts(
        nodes,
        tris,
        vec![
            LoopShape::Curve {
                curve: CurveSpec::Circle { radius: r_out },
                offset: 0.0,
            },
            LoopShape::Curve {
                curve: CurveSpec::Circle { radius: r_out },
                offset: r_out - r_in,
            },
        ],
    )
}

fn ellipse_mesh(a: f64, b: f64, h: f64) -> TriangleMesh {
    let rings = (a.max(b) / h).ceil().max(1.0) as usize;
    let spacing = (a * b).sqrt() / rings as f64;
    let mut nodes = vec![[0.0, 0.0]];
    let mut tris = Vec::new();
    let mut prev = vec![(0usize, 0.0)];
    for i in 1..=rings {
        let s = i as f64 / rings as f64;
        let ring_curve = CurveSpec::Ellipse { a: a * s, b: b * s };
        let len = ring_curve.length();
        let count = ((len / spacing).ceil() as usize).max(6);
        let ring = push_ring(
            &mut nodes,
            (0..count).map(|k| {
                let f = k as f64 / count as f64;
                let t = ring_curve.param_at_arclength(f * len);
                (ring_curve.point(t), f)
            }),
        );
        if i == 1 {
            for k in 0..count {
                tris.push([0, ring[k].0, ring[(k + 1) % count].0]);
            }
        } else {
            strip(&nodes, &prev, &ring, &mut tris);
        }
        prev = ring;
    }
    TriangleMesh::from_parts(
        nodes,
        tris,
        vec![LoopShape::Curve {
            curve: CurveSpec::Ellipse { a, b },
            offset: 0.0,
        }],
    )
}

fn rectangle_mesh(w: f64, hgt: f64, h: f64) -> TriangleMesh {
    let nx = (w / h).ceil().max(1.0) as usize;
    let ny = (hgt / h).ceil().max(1.0) as usize;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let x = if i == nx { w / 2.0 } else { -w / 2.0 + w * i as f64 / nx as f64 };
            let y = if j == ny { hgt / 2.0 } else { -hgt / 2.0 + hgt * j as f64 / ny as f64 };
            nodes.push([x, y]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut tris = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriangleMesh::from_parts(nodes, tris, vec![LoopShape::Straight])
}

fn tube_mesh(curve: &CurveSpec, thickness: f64, h: f64) -> TriangleMesh {
    let layers = ((thickness / h).ceil() as usize).max(2);
    let d = thickness / layers as f64;
    let mut nodes = Vec::new();
    let mut tris = Vec::new();
    let mut prev: Vec<(usize, f64)> = Vec::new();
    // Layer 0 is the curve itself; the innermost layer is the parallel curve at `thickness`.
    for l in 0..=layers {
        let off = if l == layers { thickness } else { d * l as f64 };
        let params = offset_params(curve, off, d);
        let count = params.len();
        let ring = push_ring(
            &mut nodes,
            params
                .iter()
                .enumerate()
                .map(|(k, &t)| (curve.offset_point(t, off), k as f64 / count as f64)),
        );
        if l > 0 {
            strip(&nodes, &ring, &prev, &mut tris);
        }
        prev = ring;
    }
    TriangleMesh::from_parts(
        nodes,
        tris,
        vec![
            LoopShape::Curve {
                curve: curve.clone(),
                offset: 0.0,
            },
            LoopShape::Curve {
                curve: curve.clone(),
                offset: thickness,
            },
        ],
    )
}

/// Curve parameters spaced uniformly in arclength along the parallel curve at
/// distance `off`, with spacing close to `d`.
fn offset_params(curve: &CurveSpec, off: f64, d: f64) -> Vec<f64> {
    let fine = ((curve.length() / d).ceil() as usize * 32).max(2048);
    let ts: Vec<f64> = (0..=fine).map(|k| k as f64 / fine as f64).collect();
    let pts: Vec<Point> = ts.iter().map(|&t| curve.offset_point(t % 1.0, off)).collect();
    let mut cum = vec![0.0; fine + 1];
    for k in 1..=fine {
        cum[k] = cum[k - 1] + geometry::dist(pts[k - 1], pts[k]);
    }
    let total = cum[fine];
    let count = ((total / d).ceil() as usize).max(12);
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    for k in 0..count {
        let target = total * k as f64 / count as f64;
        while cum[seg + 1] < target {
            seg += 1;
        }
        let u = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out.push(ts[seg] + u * (ts[seg + 1] - ts[seg]));
    }
    out
}

fn polygon_mesh(vertices: &[Point], h: f64) -> Result<TriangleMesh> {
    let mut cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::new();
    let n = vertices.len();
    let mut handles = Vec::new();
    // Boundary edges are pre-split to the target size so the constraint
    // segments already satisfy the size bound.
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let pieces = (geometry::dist(p, q) / h).ceil().max(1.0) as usize;
        for s in 0..pieces {
            let u = s as f64 / pieces as f64;
            let pt = Point2::new(p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1]));
            let hdl = cdt.insert(pt).map_err(|e| MeshError::Invalid(format!("{e:?}")))?;
            handles.push(hdl);
        }
    }
    for i in 0..handles.len() {
        cdt.add_constraint(handles[i], handles[(i + 1) % handles.len()]);
    }
    // Equilateral triangle of side h has area (√3/4)h².
    let params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .with_angle_limit(spade::AngleLimit::from_deg(25.0))
        .with_max_allowed_area(0.4 * h * h)
        .with_max_additional_vertices(5_000_000);
    let result = cdt.refine(params);
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut tris = Vec::new();
    for face in cdt.inner_faces() {
        if result.excluded_faces.contains(&face.fix()) {
            continue;
        }
        let mut tri = [0usize; 3];
        for (k, v) in face.vertices().iter().enumerate() {
            let key = v.fix().index();
            tri[k] = *index.entry(key).or_insert_with(|| {
                let p = v.position();
                nodes.push([p.x, p.y]);
                nodes.len() - 1
            });
        }
        tris.push(tri);
    }
    Ok(TriangleMesh::from_parts(nodes, tris, vec![LoopShape::Straight]))
}
