use core::fmt;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution parameter is outside its domain (NaN, infinite, non-positive scale, ...).
    InvalidParameter { name: &'static str, value: f64 },
    /// An argument such as a probability level or a density argument is outside its domain.
    Domain { name: &'static str, value: f64 },
    /// Interval endpoints were given in reverse order.
    Ordering { lower: f64, upper: f64 },
    /// The requested family is not registered as a dual pair.
    UnsupportedFamily(&'static str),
    /// The evidence does not fit the family (a count for a location family, ...).
    Evidence(&'static str),
    /// Adaptive quadrature exhausted its panel budget.
    Convergence {
        estimate: f64,
        abs_error_estimate: f64,
        panels: usize,
    },
    /// A root finder failed to bracket or converge.
    RootNotFound(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid parameter {name}: {value}")
            }
            Error::Domain { name, value } => write!(f, "{name} out of domain: {value}"),
            Error::Ordering { lower, upper } => {
                write!(f, "interval endpoints out of order: {lower} > {upper}")
            }
            Error::UnsupportedFamily(name) => write!(f, "no dual registered for family {name}"),
            Error::Evidence(what) => write!(f, "evidence mismatch: {what}"),
            Error::Convergence {
                estimate,
                abs_error_estimate,
                panels,
            } => write!(
                f,
                "quadrature did not converge after {panels} panels \
                 (estimate {estimate}, error estimate {abs_error_estimate})"
            ),
            Error::RootNotFound(what) => write!(f, "root finding failed for {what}"),
        }
    }
}

impl core::error::Error for Error {}
