use thiserror::Error;

/// Errors raised by the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: need 0 < k < n, got n={n}, k={k}")]
    InvalidModel { n: usize, k: usize },

    #[error("{name} must lie in {range}, got {value}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("minus count x={x} has zero probability")]
    ZeroProbability { x: usize },

    #[error("test quality is degenerate: a={a}, b={b} (need both strictly inside (0,1))")]
    DegenerateQuality { a: f64, b: f64 },

    #[error("degenerate posterior: b - lambda*(a+b-1) = {0} <= 0")]
    DegeneratePosterior(f64),

    #[error("ratio {0} <= 1: tests are not informative")]
    NonInformativeRatio(f64),

    #[error("unsupported regime: a + b = {0} <= 1 (solver requires informative tests)")]
    UnsupportedRegime(f64),

    #[error("{what} exceeds the enumeration guard ({actual} > {limit})")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}
