//! Magnetic Neumann Laplacian eigenvalues on planar domains: finite elements,
//! closed forms on disks and circles, geometric bounds and Riesz means.

pub mod bounds;
pub mod closedform;
pub mod eigensolve;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod riesz;
pub mod solve;
pub mod sparse;
pub mod verify;

pub use bounds::{Bound, BoundConstants, Side, Status, Verdict};
pub use eigensolve::{Method, SolverOptions, Spectrum};
pub use fem::{HermitianSystem, PotentialField};
pub use geometry::{CurveSpec, DomainSpec, GeometricSummary, Point, Shape};
pub use mesh::TriangleMesh;
pub use riesz::RieszReport;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Mesh(#[from] mesh::MeshError),
    #[error(transparent)]
    Fem(#[from] fem::FemError),
    #[error(transparent)]
    Eigen(#[from] eigensolve::EigenError),
    #[error(transparent)]
    ClosedForm(#[from] closedform::ClosedFormError),
    #[error(transparent)]
    Bound(#[from] bounds::BoundError),
}

impl Error {
    /// True for errors caused by invalid input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Geometry(_) | Error::Bound(_) => true,
            Error::Mesh(e) => !matches!(e, mesh::MeshError::Quality { .. }),
            Error::Eigen(e) => matches!(e, eigensolve::EigenError::TooMany { .. } | eigensolve::EigenError::BadTolerance),
            Error::ClosedForm(e) => matches!(e, closedform::ClosedFormError::Invalid(_)),
            Error::Fem(e) => matches!(e, fem::FemError::Dimension { .. } | fem::FemError::ZeroVector),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
