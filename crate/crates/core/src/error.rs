use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value {0} in input")]
    NonFinite(f64),
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("a sample needs at least one observation, observed or missing")]
    NoObservations,
    #[error("value {0} is not in the pool")]
    NotInPool(f64),
    #[error("sub-multiset is not contained in the pool")]
    NotContained,
    #[error("observed values contain ties; use the general (ties / closed support) bounds")]
    TiesPresent,
    #[error("observed value {0} lies outside the support")]
    OutsideSupport(f64),
    #[error("invalid support: lower bound {lower} must be below upper bound {upper}")]
    InvalidSupport { lower: f64, upper: f64 },
    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("{name}: observed count {observed} exceeds total {total}")]
    CountMismatch { name: &'static str, observed: usize, total: usize },
    #[error("tie profile sums to {got} but the pooled size is {expected}")]
    ProfileMismatch { expected: usize, got: usize },
    #[error("degenerate data: {0}")]
    Degenerate(&'static str),
    #[error(
        "quadrature did not converge: estimate {estimate}, error {error_estimate} after {intervals} subintervals"
    )]
    Quadrature { estimate: f64, error_estimate: f64, intervals: usize },
    #[error("excluded boundary case: {0}")]
    Boundary(&'static str),
}
