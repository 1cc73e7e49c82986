use std::sync::OnceLock;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid forbidden sets: {0}")]
    InvalidForbidden(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not a cycle submatrix: {0}")]
    NotACycle(String),

    #[error(
        "{what} guard exceeded: {actual} > {limit} (set ORIENT_AVOID_GUARD_OVERRIDE=1 to lift)"
    )]
    GuardExceeded {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for enumeration-guard failures (CLI maps these to exit code 2).
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

/// Whether `ORIENT_AVOID_GUARD_OVERRIDE` lifts the enumeration guards.
/// Read once; unsafe to lift for inputs larger than the documented limits.
fn guards_overridden() -> bool {
    static OVERRIDE: OnceLock<bool> = OnceLock::new();
    *OVERRIDE.get_or_init(|| {
        std::env::var_os("ORIENT_AVOID_GUARD_OVERRIDE").is_some_and(|v| v != "0" && !v.is_empty())
    })
}

pub(crate) fn check_guard(what: &'static str, actual: u64, limit: u64) -> Result<()> {
    if actual > limit && !guards_overridden() {
        return Err(Error::GuardExceeded {
            what,
            limit,
            actual,
        });
    }
    Ok(())
}
