//! Bulk-deformed toric potentials, their critical points, Morse and
//! distinct-value certificates, the search for a convenient bulk and the
//! Kodaira–Spencer evaluation.

pub mod critical;
pub mod ghv;
pub mod laurent;
pub mod lattice;
pub mod search;

use thiserror::Error;

use crate::coeff::CoeffError;
use crate::novikov::{LinalgError, NovikovError};

pub use critical::{
    certify_convenient, classify_inside, classify_inside_with_offset, critical_points, hessian_certificate,
    log_hessian, residual_certified, Classification, ConvenientCertificate, CriticalPoint, CriticalSet,
    HessianCertificate, HessianStatus, IssueKind, SolveIssue, DEFAULT_FIELD_BUDGET,
};
pub use ghv::{
    build_fiber_potential, build_ghv, disk_weight, ks_evaluate, ks_monomial, ks_surjectivity_check,
    multi_indices, BulkDeformation, DiskWeight,
};
pub use laurent::NovikovLaurentPoly;
pub use search::{search_convenient_bulk, SearchOptions, SearchOutcome};

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("bulk coefficient {index} is zero")]
    ZeroBulkCoefficient { index: usize },
    #[error("bulk coefficient {index} is not a Gaussian integer")]
    NotGaussianInteger { index: usize },
    #[error("expected {expected} bulk coefficients, got {got}")]
    BulkLengthMismatch { expected: usize, got: usize },
    #[error("polytope is not Delzant")]
    NotDelzant,
    #[error("point is not in the interior of the polytope")]
    NotInterior,
    #[error("critical point {point} lies on facet {facet}")]
    BoundaryCase { point: usize, facet: usize },
    #[error("initial roots need a field of degree above {budget}")]
    FieldBudgetExceeded { budget: usize },
    #[error("log-Jacobian is singular at leading order")]
    JacobianDegenerateAtLeadingOrder,
    #[error("precision is insufficient to decide")]
    PrecisionInsufficient,
    #[error("log-Hessian determinant vanishes")]
    Degenerate,
    #[error("no convenient bulk found after {trials} trials")]
    SearchExhausted { trials: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}
