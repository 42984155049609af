//! Crate error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Construction parameter out of its documented range; names the field.
    OutOfRange { field: &'static str, detail: String },
    /// Riesz kernel requested at z = 0.
    KernelSingularity,
    /// Evaluation point lies on (or numerically on) the boundary of the set.
    PointOnBoundary,
    /// No lower-dimensional context exists (n = 1).
    NoLowerDimension,
    /// Geometric input invalid (empty radii list, degenerate region, ...).
    InvalidGeometry(String),
    /// Field is missing data the quadrature needs (e.g. a Lipschitz bound).
    InvalidField(String),
    /// Perimeter of an unbounded set over the whole space may diverge.
    PerimeterMayDiverge,
    /// Config invariant violated.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { field, detail } => write!(f, "{field} out of range: {detail}"),
            Error::KernelSingularity => write!(f, "kernel singularity: z = 0"),
            Error::PointOnBoundary => write!(f, "evaluation point on boundary"),
            Error::NoLowerDimension => write!(f, "no lower dimension: n = 1"),
            Error::InvalidGeometry(s) => write!(f, "invalid geometry: {s}"),
            Error::InvalidField(s) => write!(f, "invalid field: {s}"),
            Error::PerimeterMayDiverge => write!(f, "perimeter may diverge"),
            Error::InvalidConfig(s) => write!(f, "invalid config: {s}"),
        }
    }
}

impl std::error::Error for Error {}
