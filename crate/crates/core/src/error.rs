use thiserror::Error;

/// Errors raised by the library. Every variant maps onto a stable, upper-case
/// diagnostic code (see [`Error::code`]) that the command-line front end prints.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("simplex {0:?} is listed more than once")]
    DuplicateSimplex(Vec<usize>),
    #[error("vertex tuple {0:?} is not strictly increasing")]
    NonIncreasingTuple(Vec<usize>),
    #[error("vertex labels are not contiguous: {0}")]
    DanglingVertex(String),
    #[error("malformed complex document: {0}")]
    InvalidDocument(String),
    #[error("stored orientation is not a cycle: {0}")]
    OrientationNotCycle(String),
    #[error("degree {degree} is out of range (allowed {allowed})")]
    DegreeOutOfRange { degree: usize, allowed: String },
    #[error("complex is not orientable: {0}")]
    NonOrientable(String),
    #[error("complex is not closed: {0}")]
    ComplexNotClosed(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown simplex {0:?}")]
    UnknownSimplex(Vec<usize>),
    #[error("unknown manifold name {0:?}")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,
    #[error("cochain is not closed: |d omega|_inf = {defect:e} exceeds {tol:e}")]
    CochainNotClosed { defect: f64, tol: f64 },
    #[error("cup product degree {0} exceeds the complex dimension {1}")]
    DegreeOverflow(usize, usize),
    #[error("2-cochain is not a cocycle: {0}")]
    NotACocycle(String),
    #[error("gauge shift is not an integer 1-cocycle")]
    MNotCocycle,
    #[error("objects live on different complexes: {0}")]
    BaseMismatch(String),
    #[error("least-squares solve failed: {0}")]
    SolverFailure(String),
    #[error("vertex-star cover is not good: {0}")]
    CoverNotGood(String),
    #[error("local solve on a star failed: {0}")]
    StarSolveFailure(String),
    #[error("inconsistent verdict: {0}")]
    VerdictInconsistent(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateSimplex(_) => "DUPLICATE_SIMPLEX",
            Error::NonIncreasingTuple(_) => "NON_INCREASING_TUPLE",
            Error::DanglingVertex(_) => "DANGLING_VERTEX",
            Error::InvalidDocument(_) => "PARSE_ERROR",
            Error::OrientationNotCycle(_) => "ORIENTATION_NOT_CYCLE",
            Error::DegreeOutOfRange { .. } => "DEGREE_OUT_OF_RANGE",
            Error::NonOrientable(_) => "NON_ORIENTABLE",
            Error::ComplexNotClosed(_) => "NOT_CLOSED",
            Error::UnknownVertex(_) => "UNKNOWN_VERTEX",
            Error::UnknownSimplex(_) => "UNKNOWN_SIMPLEX",
            Error::UnknownName(_) => "UNKNOWN_NAME",
            Error::BadParameter(_) => "BAD_PARAMETER",
            Error::Overflow => "OVERFLOW",
            Error::CochainNotClosed { .. } => "NOT_CLOSED",
            Error::DegreeOverflow(..) => "DEGREE_OVERFLOW",
            Error::NotACocycle(_) => "NOT_A_COCYCLE",
            Error::MNotCocycle => "M_NOT_COCYCLE",
            Error::BaseMismatch(_) => "BASE_MISMATCH",
            Error::SolverFailure(_) => "SOLVER_FAILURE",
            Error::CoverNotGood(_) => "COVER_NOT_GOOD",
            Error::StarSolveFailure(_) => "STAR_SOLVE_FAILURE",
            Error::VerdictInconsistent(_) => "VERDICT_INCONSISTENT",
        }
    }

    /// True for errors that signal a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::VerdictInconsistent(_) | Error::StarSolveFailure(_) | Error::SolverFailure(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn degree_check(degree: usize, max: usize) -> Result<()> {
    if degree > max {
        return Err(Error::DegreeOutOfRange { degree, allowed: format!("0..={max}") });
    }
    Ok(())
}
