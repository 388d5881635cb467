//! P1 finite elements for the magnetic form
//! `a(u, v) = ∫ (∇u − iAu)·conj(∇v − iAv)` with natural (magnetic Neumann)
//! boundary conditions, its Dirichlet restriction, and the torsion problem.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::Point;
use crate::mesh::TriangleMesh;
use crate::sparse::{Cholesky, CsrMatrix, FactorError};

#[derive(Debug, Error)]
pub enum FemError {
    #[error("solver failure: {0}")]
    Factor(#[from] FactorError),
    #[error("torsion residual {0:e} above tolerance")]
    Residual(f64),
    #[error("Rayleigh quotient of the zero vector")]
    ZeroVector,
    #[error("vector length {got} does not match {expected} degrees of freedom")]
    Dimension { got: usize, expected: usize },
}

type Result<T> = std::result::Result<T, FemError>;

pub type ScalarField = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PotentialField {
    /// `A(x) = (β/2)(−x₂, x₁)`.
    Standard { beta: f64 },
    /// Constant per triangle of `mesh`.
    PerTriangle { mesh: Arc<TriangleMesh>, values: Vec<[f64; 2]> },
    Custom(Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>),
}

impl std::fmt::Debug for PotentialField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PotentialField::Standard { beta } => write!(f, "Standard {{ beta: {beta} }}"),
            PotentialField::PerTriangle { values, .. } => write!(f, "PerTriangle({} triangles)", values.len()),
            PotentialField::Custom(_) => write!(f, "Custom"),
        }
    }
}

pub fn standard_potential(beta: f64) -> PotentialField {
    PotentialField::Standard { beta }
}

impl PotentialField {
    /// Value at `p`, which lies in triangle `tri` of the mesh being assembled.
    fn at(&self, tri: usize, p: Point) -> [f64; 2] {
        match self {
            PotentialField::Standard { beta } => [-0.5 * beta * p[1], 0.5 * beta * p[0]],
            PotentialField::PerTriangle { values, .. } => values[tri],
            PotentialField::Custom(f) => f(p),
        }
    }

    /// Value at an arbitrary point; `None` outside the mesh of a per-triangle field.
    pub fn eval(&self, p: Point) -> Option<[f64; 2]> {
        match self {
            PotentialField::PerTriangle { mesh, values } => {
                locate(mesh, p).map(|t| values[t])
            }
            _ => Some(self.at(0, p)),
        }
    }

    /// `−A`, the potential of the field `−β`.
    pub fn negated(&self) -> PotentialField {
        match self {
            PotentialField::Standard { beta } => PotentialField::Standard { beta: -beta },
            PotentialField::PerTriangle { mesh, values } => PotentialField::PerTriangle {
                mesh: mesh.clone(),
                values: values.iter().map(|v| [-v[0], -v[1]]).collect(),
            },
            PotentialField::Custom(f) => {
                let f = f.clone();
                PotentialField::Custom(Arc::new(move |p| {
                    let v = f(p);
                    [-v[0], -v[1]]
                }))
            }
        }
    }
}

fn locate(mesh: &TriangleMesh, p: Point) -> Option<usize> {
    mesh.triangles.iter().position(|t| {
        let (a, b, c) = (mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
        let s = |u: Point, v: Point| (v[0] - u[0]) * (p[1] - u[1]) - (v[1] - u[1]) * (p[0] - u[0]);
        s(a, b) >= 0.0 && s(b, c) >= 0.0 && s(c, a) >= 0.0
    })
}

#[derive(Debug, Clone)]
pub struct HermitianSystem {
    pub k: CsrMatrix<Complex64>,
    pub m: CsrMatrix<f64>,
    pub dof_count: usize,
    pub boundary_dofs: Vec<usize>,
    /// Mesh node of each degree of freedom.
    pub dof_nodes: Vec<usize>,
}

struct Element {
    area: f64,
    grads: [[f64; 2]; 3],
    mids: [Point; 3],
}

fn element(mesh: &TriangleMesh, t: [usize; 3]) -> Element {
    let p = [mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]];
    let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
    let mut grads = [[0.0; 2]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        grads[i] = [(p[j][1] - p[k][1]) / (2.0 * area), (p[k][0] - p[j][0]) / (2.0 * area)];
    }
    // Midpoint q of the edge opposite vertex i: φ_i(q) = 0, the other two 1/2.
    let mid = |a: Point, b: Point| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let mids = [mid(p[1], p[2]), mid(p[2], p[0]), mid(p[0], p[1])];
    Element { area, grads, mids }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Local 3x3 magnetic stiffness, entry `[i][j]` = a(φ_j, φ_i).
fn local_magnetic(e: &Element, a: &PotentialField, tri: usize) -> [[Complex64; 3]; 3] {
    let w = e.area / 3.0;
    let a_q: Vec<[f64; 2]> = e.mids.iter().map(|&q| a.at(tri, q)).collect();
    let phi = |i: usize, q: usize| if i == q { 0.0 } else { 0.5 };
    let mut k = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut re = e.area * dot(e.grads[i], e.grads[j]);
            let mut im = 0.0;
            for q in 0..3 {
                let aq = a_q[q];
                im += w * (phi(i, q) * dot(aq, e.grads[j]) - phi(j, q) * dot(aq, e.grads[i]));
                re += w * dot(aq, aq) * phi(i, q) * phi(j, q);
            }
            k[i][j] = Complex64::new(re, im);
        }
    }
    k
}

pub fn assemble_magnetic(mesh: &TriangleMesh, a: &PotentialField) -> HermitianSystem {
    let locals: Vec<(f64, [[Complex64; 3]; 3])> = mesh
        .triangles
        .par_iter()
        .enumerate()
        .map(|(ti, &t)| {
            let e = element(mesh, t);
            (e.area, local_magnetic(&e, a, ti))
        })
        .collect();
    let n = mesh.node_count();
    let mut kt = Vec::with_capacity(9 * locals.len());
    let mut mt = Vec::with_capacity(9 * locals.len());
    for (t, (area, k)) in mesh.triangles.iter().zip(&locals) {
        for i in 0..3 {
            for j in 0..3 {
                kt.push((t[i], t[j], k[i][j]));
                let m = if i == j { area / 6.0 } else { area / 12.0 };
                mt.push((t[i], t[j], m));
            }
        }
    }
    HermitianSystem {
        k: CsrMatrix::from_triplets(n, n, &kt),
        m: CsrMatrix::from_triplets(n, n, &mt),
        dof_count: n,
        boundary_dofs: mesh.boundary_nodes(),
        dof_nodes: (0..n).collect(),
    }
}

/// As [`assemble_magnetic`] with boundary degrees of freedom removed.
pub fn assemble_dirichlet(mesh: &TriangleMesh, a: &PotentialField) -> HermitianSystem {
    let full = assemble_magnetic(mesh, a);
    let boundary = mesh.boundary_nodes();
    let interior: Vec<usize> = (0..mesh.node_count())
        .filter(|i| boundary.binary_search(i).is_err())
        .collect();
    HermitianSystem {
        k: full.k.submatrix(&interior),
        m: full.m.submatrix(&interior),
        dof_count: interior.len(),
        boundary_dofs: Vec::new(),
        dof_nodes: interior,
    }
}

impl HermitianSystem {
    /// Coordinate export: one `i j re im` line per stored entry of K.
    pub fn export_k(&self) -> String {
        let mut s = String::new();
        for i in 0..self.k.nrows {
            for (j, v) in self.k.row(i) {
                let _ = writeln!(s, "{i} {j} {:?} {:?}", v.re, v.im);
            }
        }
        s
    }

    /// Entrywise `max |K − Kᴴ| / max |K|`.
    pub fn hermitian_defect(&self) -> f64 {
        let kh = self.k.conj_transpose();
        let mut d: f64 = 0.0;
        for i in 0..self.k.nrows {
            for (j, v) in self.k.row(i) {
                d = d.max((v - kh.get(i, j)).norm());
            }
        }
        d / self.k.max_abs().max(f64::MIN_POSITIVE)
    }
}

pub fn rayleigh(system: &HermitianSystem, v: &[Complex64]) -> Result<f64> {
    if v.len() != system.dof_count {
        return Err(FemError::Dimension {
            got: v.len(),
            expected: system.dof_count,
        });
    }
    let kv = system.k.mul_vec(v);
    let mv = system.m.apply(v);
    let num: f64 = v.iter().zip(&kv).map(|(a, b)| (a.conj() * b).re).sum();
    let den: f64 = v.iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum();
    if !(den > 0.0) {
        return Err(FemError::ZeroVector);
    }
    Ok(num / den)
}

#[derive(Debug, Clone)]
pub struct TorsionField {
    pub mesh: Arc<TriangleMesh>,
    pub values: Vec<f64>,
    /// max |φ|
    pub phi_star: f64,
    pub residual: f64,
}

/// Solves `−∇²φ = β` in the domain with `φ = 0` on the boundary.
pub fn solve_torsion(mesh: &TriangleMesh, beta: &(dyn Fn(Point) -> f64 + Sync)) -> Result<TorsionField> {
    let n = mesh.node_count();
    let mut st = Vec::with_capacity(9 * mesh.triangles.len());
    let mut load = vec![0.0; n];
    for &t in &mesh.triangles {
        let e = element(mesh, t);
        let bq: Vec<f64> = e.mids.iter().map(|&q| beta(q)).collect();
        for i in 0..3 {
            for j in 0..3 {
                st.push((t[i], t[j], e.area * dot(e.grads[i], e.grads[j])));
            }
            let phi_sum: f64 = (0..3).filter(|&q| q != i).map(|q| 0.5 * bq[q]).sum();
            load[t[i]] += e.area / 3.0 * phi_sum;
        }
    }
    let s = CsrMatrix::from_triplets(n, n, &st);
    let boundary = mesh.boundary_nodes();
    let interior: Vec<usize> = (0..n).filter(|i| boundary.binary_search(i).is_err()).collect();
    let mut values = vec![0.0; n];
    let mut residual = 0.0;
    if !interior.is_empty() {
        let a = s.submatrix(&interior);
        let b: Vec<f64> = interior.iter().map(|&i| load[i]).collect();
        let x = Cholesky::factor(&a)?.solve(&b);
        let ax = a.mul_vec(&x);
        let rn = ax.iter().zip(&b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        residual = if bn > 0.0 { rn / bn } else { rn };
        if residual > 1e-10 {
            return Err(FemError::Residual(residual));
        }
        for (&i, v) in interior.iter().zip(x) {
            values[i] = v;
        }
    }
    let phi_star = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(TorsionField {
        mesh: Arc::new(mesh.clone()),
        values,
        phi_star,
        residual,
    })
}

impl TorsionField {
    pub fn gradient(&self, tri: usize) -> [f64; 2] {
        let t = self.mesh.triangles[tri];
        let e = element(&self.mesh, t);
        let mut g = [0.0; 2];
        for i in 0..3 {
            g[0] += self.values[t[i]] * e.grads[i][0];
            g[1] += self.values[t[i]] * e.grads[i][1];
        }
        g
    }

    /// `∫ f(φ(x), x) dx` by edge-midpoint quadrature.
    pub fn integrate(&self, f: impl Fn(f64, Point) -> f64) -> f64 {
        let mut s = 0.0;
        for &t in &self.mesh.triangles {
            let e = element(&self.mesh, t);
            for (q, &mq) in e.mids.iter().enumerate() {
                let phi: f64 = (0..3).filter(|&i| i != q).map(|i| 0.5 * self.values[t[i]]).sum();
                s += e.area / 3.0 * f(phi, mq);
            }
        }
        s
    }
}

/// `A_can = (∂φ/∂x₂, −∂φ/∂x₁)`, constant on each triangle.
pub fn potential_from_torsion(phi: &TorsionField) -> PotentialField {
    let values = (0..phi.mesh.triangles.len())
        .map(|t| {
            let g = phi.gradient(t);
            [g[1], -g[0]]
        })
        .collect();
    PotentialField::PerTriangle {
        mesh: phi.mesh.clone(),
        values,
    }
}

/// Circulation `∮ A·dl` along boundary loop `loop_id`, in the loop's orientation.
pub fn loop_circulation(mesh: &TriangleMesh, a: &PotentialField, loop_id: usize) -> f64 {
    let mut owner = std::collections::HashMap::new();
    for (ti, t) in mesh.triangles.iter().enumerate() {
        for (p, q) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            owner.insert((p, q), ti);
        }
    }
    mesh.boundary_edges
        .iter()
        .filter(|e| e.2 == loop_id)
        .map(|&(i, j, _)| {
            let (p, q) = (mesh.nodes[i], mesh.nodes[j]);
            let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            let tri = owner.get(&(i, j)).copied().unwrap_or(0);
            let v = a.at(tri, m);
            v[0] * (q[0] - p[0]) + v[1] * (q[1] - p[1])
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::mesh::generate;

    #[test]
    fn standard_potential_values() {
        assert_eq!(standard_potential(2.0).eval([1.0, 0.0]), Some([0.0, 1.0]));
        assert_eq!(standard_potential(0.0).eval([3.0, -2.0]), Some([0.0, 0.0]));
        assert_eq!(standard_potential(1.0).eval([1.0, 1.0]), Some([-0.5, 0.5]));
    }

    /// Plain P1 stiffness assembled independently, triangle by triangle.
    fn plain_stiffness(mesh: &TriangleMesh) -> Vec<Vec<f64>> {
        let n = mesh.node_count();
        let mut k = vec![vec![0.0; n]; n];
        for t in &mesh.triangles {
            let p: Vec<Point> = t.iter().map(|&i| mesh.nodes[i]).collect();
            let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
            let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
            let area2 = b[0] * c[1] - b[1] * c[0];
            for i in 0..3 {
                for j in 0..3 {
                    k[t[i]][t[j]] += (b[i] * b[j] + c[i] * c[j]) / (2.0 * area2);
                }
            }
        }
        k
    }

    #[test]
    fn zero_potential_gives_laplacian() {
        let mesh = generate(&DomainSpec::disk(1.0), 0.3).unwrap();
        let sys = assemble_magnetic(&mesh, &standard_potential(0.0));
        let oracle = plain_stiffness(&mesh);
        let dense = sys.k.to_dense();
        for i in 0..mesh.node_count() {
            for j in 0..mesh.node_count() {
                assert!((dense[i][j].re - oracle[i][j]).abs() < 1e-14);
                assert_eq!(dense[i][j].im, 0.0);
            }
        }
    }

    #[test]
    fn hermitian() {
        let mesh = generate(&DomainSpec::annulus(1.0, 2.0), 0.2).unwrap();
        let sys = assemble_magnetic(&mesh, &standard_potential(1.0));
        assert!(sys.hermitian_defect() < 1e-13);
        let ones = vec![Complex64::new(1.0, 0.0); sys.dof_count];
        let mass: f64 = sys.m.apply(&ones).iter().map(|v| v.re).sum();
        assert!((mass - mesh.area()).abs() < 1e-12);
    }

    #[test]
    fn constant_vector_rayleigh() {
        let mesh = generate(&DomainSpec::rectangle(1.0, 1.0), 0.1).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); mesh.node_count()];
        let sys = assemble_magnetic(&mesh, &standard_potential(0.0));
        let q = rayleigh(&sys, &ones).unwrap();
        assert!(q.abs() < 1e-12, "{q}");
        let zero = vec![Complex64::new(0.0, 0.0); mesh.node_count()];
        assert!(matches!(rayleigh(&sys, &zero), Err(FemError::ZeroVector)));
    }

    #[test]
    fn dirichlet_dof_count() {
        let mesh = generate(&DomainSpec::disk(1.0), 0.2).unwrap();
        let sys = assemble_dirichlet(&mesh, &standard_potential(1.0));
        assert_eq!(sys.dof_count, mesh.node_count() - mesh.boundary_nodes().len());
    }

    #[test]
    fn torsion_disk_center() {
        let mesh = generate(&DomainSpec::disk(1.0), 0.05).unwrap();
        let phi = solve_torsion(&mesh, &|_| 1.0).unwrap();
        assert!((phi.values[0] - 0.25).abs() < 2e-3, "{}", phi.values[0]);
        assert!(phi.values.iter().all(|&v| v >= 0.0));
        let zero = solve_torsion(&mesh, &|_| 0.0).unwrap();
        assert_eq!(zero.phi_star, 0.0);
    }

    #[test]
    fn torsion_potential_matches_standard_on_disk() {
        let mesh = generate(&DomainSpec::disk(1.0), 0.05).unwrap();
        let a = potential_from_torsion(&solve_torsion(&mesh, &|_| 1.0).unwrap());
        for p in [[0.3, 0.1], [-0.5, 0.4], [0.0, -0.7]] {
            let v = a.eval(p).unwrap();
            assert!((v[0] + p[1] / 2.0).abs() < 0.05 && (v[1] - p[0] / 2.0).abs() < 0.05, "{v:?} at {p:?}");
        }
    }

    #[test]
    fn canonical_potential_weak_curl() {
        // ∫ A·rot φ_i = ∫ ∇φ·∇φ_i = ∫ β φ_i for interior hats.
        let mesh = generate(&DomainSpec::rectangle(1.0, 1.0), 0.1).unwrap();
        let phi = solve_torsion(&mesh, &|_| 1.0).unwrap();
        let a = potential_from_torsion(&phi);
        let PotentialField::PerTriangle { values, .. } = &a else { unreachable!() };
        let n = mesh.node_count();
        let mut curl = vec![0.0; n];
        let mut hat = vec![0.0; n];
        for (ti, &t) in mesh.triangles.iter().enumerate() {
            let e = element(&mesh, t);
            for i in 0..3 {
                let g = e.grads[i];
                curl[t[i]] += e.area * (values[ti][0] * g[1] - values[ti][1] * g[0]);
                hat[t[i]] += e.area / 3.0;
            }
        }
        for i in (0..n).filter(|i| !mesh.boundary_nodes().contains(i)) {
            assert!((curl[i] - hat[i]).abs() < 1e-12 * hat[i].max(1.0), "node {i}");
        }
    }
}
