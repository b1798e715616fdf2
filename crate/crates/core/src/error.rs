use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kt must be > 0 (got {0})")]
    NonPositiveTemperature(f64),

    #[error("{0} must be a finite number")]
    NonFiniteInput(&'static str),

    #[error("exponent bookkeeping overflowed (|J|/kT too large to represent)")]
    OverflowGuard,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid temperature bracket [{lo}, {hi}]: need 0 < lo < hi")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),

    #[error("at {point}: {source}")]
    AtPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, point: impl Into<String>) -> Self {
        Error::AtPoint {
            point: point.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by invalid caller input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::NonPositiveTemperature(_)
            | Error::NonFiniteInput(_)
            | Error::InvalidDensityMatrix(_)
            | Error::InvalidBracket { .. }
            | Error::InvalidSweep(_)
            | Error::InvalidGrid(_) => true,
            Error::AtPoint { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}

pub(crate) fn check_finite(value: f64, name: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput(name))
    }
}

pub(crate) fn check_kt(kt: f64) -> Result<()> {
    check_finite(kt, "kt")?;
    if kt > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTemperature(kt))
    }
}
