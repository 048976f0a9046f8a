use core::fmt;

/// Errors raised by the numerical engines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    Domain(&'static str),
    /// A structurally invalid argument (bad lengths, overlapping intervals, empty input).
    Argument(&'static str),
    /// An input exceeds a hard size limit of an exponential or dense algorithm.
    Size { limit: usize, got: usize },
    /// Index beyond the available range.
    Index { limit: usize, got: usize },
    /// A precondition on the data (not the types) was violated.
    Precondition(&'static str),
    /// Every derivative through order four vanished at a minimizer.
    UnsupportedDegeneracy { at: f64 },
    /// Finite differences of a user density failed to settle.
    Precision(&'static str),
    /// An iterative method failed to converge.
    NoConvergence(&'static str),
    /// A sample contained repeated eigenvalues twice in a row.
    RepeatedTies { replica: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Argument(what) => write!(f, "invalid argument: {what}"),
            Error::Size { limit, got } => write!(f, "size {got} exceeds limit {limit}"),
            Error::Index { limit, got } => write!(f, "index {got} exceeds limit {limit}"),
            Error::Precondition(what) => write!(f, "precondition violated: {what}"),
            Error::UnsupportedDegeneracy { at } => {
                write!(f, "density is flat to fourth order at minimizer {at}")
            }
            Error::Precision(what) => write!(f, "insufficient precision: {what}"),
            Error::NoConvergence(what) => write!(f, "no convergence: {what}"),
            Error::RepeatedTies { replica } => {
                write!(f, "replica {replica} produced tied eigenvalues after resampling")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
