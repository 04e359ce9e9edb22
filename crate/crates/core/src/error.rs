use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// `Domain` covers inputs outside the mathematical domain of an operation
/// (negative Bessel arguments, non-finite times). `Usage` covers inputs that
/// are well defined but inconsistent with how the routine must be driven
/// (mismatched grids, CFL violations, windows that leave the grid).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}
