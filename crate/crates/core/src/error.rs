use thiserror::Error;

/// Errors produced by the geometry, projection and construction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: lower bound exceeds upper bound")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid direction: zero vector")]
    InvalidDirection,
    #[error("invalid cell: {0}")]
    InvalidCell(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid rectangle [{x0}, {x1}] x [{y0}, {y1}]")]
    InvalidRectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
    #[error("invalid contraction ratio {0}: expected 0 < ratio <= 1/2")]
    InvalidRatio(f64),
    #[error("invalid sample spacing {0}: must be positive")]
    InvalidSpacing(f64),
    #[error("invalid radius {0}: must be positive")]
    InvalidRadius(f64),
    #[error("attractor level {level} exceeds maximum {max}")]
    LevelTooDeep { level: u32, max: u32 },
    #[error("cell budget exceeded: {requested} cells requested, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: usize },
    #[error("empty set")]
    EmptySet,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("probe line y = {a0}x + {b0} belongs to the family (coding point lies in a cell)")]
    ProbeLineInFamily { a0: f64, b0: f64 },
    #[error("set is not in the admissible space: x-projection {0} does not cover [0, 1]")]
    NotInOmega(String),
    #[error("invalid copy count {0}: expected 1 to 8")]
    InvalidCopyCount(usize),
    #[error("insufficient slope coverage: {0}")]
    InsufficientSlopeCoverage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
