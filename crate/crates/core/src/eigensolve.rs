//! Smallest eigenpairs of the Hermitian pencil `K x = λ M x`.
//!
//! Shift-invert block subspace iteration: each sweep applies `(K + sM)⁻¹ M`
//! to the block, M-orthonormalizes it and extracts Ritz pairs. Residuals are
//! measured in the dual norm `‖r‖_{M⁻¹}`, which makes them mesh independent
//! and turns them into eigenvalue error bounds.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fem::{assemble_magnetic, standard_potential, HermitianSystem};
use crate::mesh::TriangleMesh;
use crate::sparse::{Cholesky, FactorError};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_SHIFT: f64 = 0.01;

/// Problems up to this size are solved densely.
const DENSE_LIMIT: usize = 200;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("requested {k} eigenvalues of a pencil of dimension {n}")]
    TooMany { k: usize, n: usize },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("no convergence after {iterations} iterations; best residuals {residuals:?}")]
    NoConvergence { iterations: usize, residuals: Vec<f64> },
    #[error("factorization failed: {0}")]
    Factor(#[from] FactorError),
}

type Result<T> = std::result::Result<T, EigenError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Fem,
    ClosedformDisk,
    ClosedformCircle,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Fem => "fem",
            Method::ClosedformDisk => "closedform-disk",
            Method::ClosedformCircle => "closedform-circle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub beta: f64,
    pub domain_id: String,
    pub method: Method,
    pub h: Option<f64>,
    /// Angular and radial indices `(n, j)` for disk spectra.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<(i64, usize)>,
}

impl Spectrum {
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Absolute eigenvalue uncertainty implied by the residual of entry `j`.
    pub fn uncertainty(&self, j: usize) -> f64 {
        self.residuals[j] * self.eigenvalues[j].max(1.0)
    }

    /// Rows `index,lambda,residual,method,beta,domain_id,h` with a header.
    /// Floats use the shortest representation that round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,lambda,residual,method,beta,domain_id,h\n");
        let h = self.h.map(|h| h.to_string()).unwrap_or_default();
        for (j, (l, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                j + 1,
                l,
                r,
                self.method.tag(),
                self.beta,
                self.domain_id,
                h
            ));
        }
        out
    }

    /// Copy with every eigenvalue multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Spectrum {
        let mut s = self.clone();
        s.eigenvalues.iter_mut().for_each(|l| *l *= factor);
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub shift: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
            max_iter: DEFAULT_MAX_ITER,
            shift: DEFAULT_SHIFT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
    pub iterations: usize,
}

type Block = Vec<Vec<Complex64>>;

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

struct Pencil<'a> {
    sys: &'a HermitianSystem,
    m_factor: Cholesky<f64>,
}

impl Pencil<'_> {
    fn m_apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.sys.m.apply(x)
    }

    /// `‖Kx − λMx‖_{M⁻¹} / (‖x‖_M max(λ, 1))`
    fn residual(&self, x: &[Complex64], lambda: f64) -> f64 {
        let kx = self.sys.k.mul_vec(x);
        let mx = self.m_apply(x);
        let r: Vec<Complex64> = kx.iter().zip(&mx).map(|(a, b)| a - b * lambda).collect();
        let re: Vec<f64> = r.iter().map(|z| z.re).collect();
        let im: Vec<f64> = r.iter().map(|z| z.im).collect();
        let (sr, si) = (self.m_factor.solve(&re), self.m_factor.solve(&im));
        let dual: f64 = (0..r.len()).map(|i| r[i].re * sr[i] + r[i].im * si[i]).sum();
        let xm = inner(x, &mx).re.sqrt();
        dual.max(0.0).sqrt() / (xm * lambda.max(1.0))
    }
}

/// M-orthonormalizes `block` in place (classical Gram-Schmidt, twice) after
/// projecting out `deflate`, which must already be M-orthonormal.
fn m_orthonormalize(block: &mut Block, deflate: &[Vec<Complex64>], pencil: &Pencil, rng: &mut ChaCha8Rng) {
    let n = pencil.sys.dof_count;
    let mut basis: Vec<(Vec<Complex64>, Vec<Complex64>)> = deflate
        .iter()
        .map(|d| (d.clone(), pencil.m_apply(d)))
        .collect();
    let fixed = basis.len();
    for j in 0..block.len() {
        let mut attempts = 0;
        loop {
            let v = &mut block[j];
            let norm0 = inner(v, &pencil.m_apply(v)).re.sqrt();
            for _ in 0..2 {
                let coeffs: Vec<Complex64> = basis.par_iter().map(|(_, mq)| inner(mq, v)).collect();
                for ((q, _), c) in basis.iter().zip(coeffs) {
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= qi * c;
                    }
                }
            }
            let mv = pencil.m_apply(v);
            let norm = inner(v, &mv).re.sqrt();
            if norm > 1e-10 * norm0 && norm > 0.0 {
                let s = 1.0 / norm;
                v.iter_mut().for_each(|x| *x *= s);
                let mv: Vec<Complex64> = mv.iter().map(|x| x * s).collect();
                basis.push((v.clone(), mv));
                break;
            }
            attempts += 1;
            assert!(attempts < 10, "cannot complete an M-orthonormal basis");
            *v = random_vector(n, rng);
        }
    }
    debug_assert_eq!(basis.len(), fixed + block.len());
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Hermitian eigen-decomposition, ascending.
fn dense_eigh(h: DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// `k` smallest eigenpairs, excluding the span of `deflate` (M-orthonormal).
fn solve_pairs(sys: &HermitianSystem, k: usize, opts: &SolverOptions, deflate: &[Vec<Complex64>]) -> Result<Eigenpairs> {
    let n = sys.dof_count;
    if k + deflate.len() > n || k == 0 {
        return Err(EigenError::TooMany { k, n });
    }
    if !(opts.tol > 0.0) {
        return Err(EigenError::BadTolerance);
    }
    let pencil = Pencil {
        sys,
        m_factor: Cholesky::factor(&sys.m)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    if n <= DENSE_LIMIT {
        return dense_pairs(&pencil, k, deflate, &mut rng);
    }
    let p = (2 * k).max(k + 8).min(n - deflate.len());
    let shifted = sys.k.add_scaled(&sys.m, opts.shift, |v| Complex64::new(v, 0.0));
    let factor = Cholesky::factor(&shifted)?;
    let mut block: Block = (0..p).map(|_| random_vector(n, &mut rng)).collect();
    m_orthonormalize(&mut block, deflate, &pencil, &mut rng);
    let mut best = vec![f64::INFINITY; k];
    for iter in 1..=opts.max_iter {
        let mut next: Block = block
            .par_iter()
            .map(|y| factor.solve(&pencil.m_apply(y)))
            .collect();
        m_orthonormalize(&mut next, deflate, &pencil, &mut rng);
        let kz: Block = next.par_iter().map(|z| sys.k.mul_vec(z)).collect();
        let h = DMatrix::from_fn(p, p, |i, j| inner(&next[i], &kz[j]));
        let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let (theta, w) = dense_eigh(h);
        block = (0..p)
            .into_par_iter()
            .map(|c| {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                for (r, z) in next.iter().enumerate() {
                    let wc = w[(r, c)];
                    for (xi, zi) in x.iter_mut().zip(z) {
                        *xi += zi * wc;
                    }
                }
                x
            })
            .collect();
        let res: Vec<f64> = (0..k).into_par_iter().map(|j| pencil.residual(&block[j], theta[j])).collect();
        for (b, r) in best.iter_mut().zip(&res) {
            *b = b.min(*r);
        }
        if res.iter().all(|&r| r <= opts.tol) {
            return Ok(Eigenpairs {
                values: theta[..k].to_vec(),
                residuals: res,
                vectors: block[..k].to_vec(),
                iterations: iter,
            });
        }
    }
    Err(EigenError::NoConvergence {
        iterations: opts.max_iter,
        residuals: best,
    })
}

fn dense_pairs(pencil: &Pencil, k: usize, deflate: &[Vec<Complex64>], rng: &mut ChaCha8Rng) -> Result<Eigenpairs> {
    let n = pencil.sys.dof_count;
    // M-orthonormal basis of the complement of `deflate`, from unit vectors.
    let mut basis: Block = (0..n)
        .map(|i| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[i] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    basis.truncate(n - deflate.len());
    if !deflate.is_empty() {
        basis = (0..n - deflate.len()).map(|_| random_vector(n, rng)).collect();
    }
    m_orthonormalize(&mut basis, deflate, pencil, rng);
    let m = basis.len();
    let kb: Block = basis.iter().map(|b| pencil.sys.k.mul_vec(b)).collect();
    let h = DMatrix::from_fn(m, m, |i, j| inner(&basis[i], &kb[j]));
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let (theta, w) = dense_eigh(h);
    let vectors: Block = (0..k)
        .map(|c| {
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            for (r, z) in basis.iter().enumerate() {
                for (xi, zi) in x.iter_mut().zip(z) {
                    *xi += zi * w[(r, c)];
                }
            }
            x
        })
        .collect();
    let residuals = (0..k).map(|j| pencil.residual(&vectors[j], theta[j])).collect();
    Ok(Eigenpairs {
        values: theta[..k].to_vec(),
        residuals,
        vectors,
        iterations: 1,
    })
}

pub fn smallest_pairs(sys: &HermitianSystem, k: usize, opts: &SolverOptions) -> Result<Eigenpairs> {
    solve_pairs(sys, k, opts, &[])
}

/// The `k` smallest eigenvalues with residual certificates.
pub fn smallest(sys: &HermitianSystem, k: usize, opts: &SolverOptions) -> Result<Spectrum> {
    let pairs = smallest_pairs(sys, k, opts)?;
    Ok(Spectrum {
        eigenvalues: pairs.values.iter().map(|&v| v.max(0.0)).collect(),
        residuals: pairs.residuals,
        beta: f64::NAN,
        domain_id: String::new(),
        method: Method::Fem,
        h: None,
        labels: Vec::new(),
    })
}

/// First positive Neumann eigenvalue of the Laplacian, with the constant
/// mode deflated.
pub fn neumann_lambda2(mesh: &TriangleMesh, opts: &SolverOptions) -> Result<(f64, f64)> {
    let sys = assemble_magnetic(mesh, &standard_potential(0.0));
    let ones = vec![Complex64::new(1.0, 0.0); sys.dof_count];
    let mass = inner(&ones, &sys.m.apply(&ones)).re;
    let c: Vec<Complex64> = ones.iter().map(|v| v / mass.sqrt()).collect();
    let pairs = solve_pairs(&sys, 1, opts, &[c])?;
    Ok((pairs.values[0], pairs.residuals[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::CsrMatrix;

    fn diag_system(d: &[f64]) -> HermitianSystem {
        let n = d.len();
        let t: Vec<_> = d.iter().enumerate().map(|(i, &v)| (i, i, Complex64::new(v, 0.0))).collect();
        HermitianSystem {
            k: CsrMatrix::from_triplets(n, n, &t),
            m: CsrMatrix::identity(n),
            dof_count: n,
            boundary_dofs: vec![],
            dof_nodes: (0..n).collect(),
        }
    }

    #[test]
    fn diagonal() {
        let s = smallest(&diag_system(&[2.0, 1.0]), 2, &SolverOptions::default()).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn too_many() {
        assert!(matches!(
            smallest(&diag_system(&[1.0]), 2, &SolverOptions::default()),
            Err(EigenError::TooMany { .. })
        ));
    }

    #[test]
    fn large_diagonal_iterative() {
        let d: Vec<f64> = (0..500).map(|i| 1.0 + i as f64 * 0.5).collect();
        let s = smallest(&diag_system(&d), 5, &SolverOptions::default()).unwrap();
        for j in 0..5 {
            assert!((s.eigenvalues[j] - d[j]).abs() < 1e-10);
        }
    }
}
