use thiserror::Error;

/// Error type shared by all library modules.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument violates a physical or mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A grid, step-size, or scenario setting is unusable as configured.
    #[error("configuration error: {0}")]
    Config(String),

    /// The integrator produced a non-finite field sample.
    #[error("numerical failure at z = {z_m} m: {detail}")]
    Numerical { z_m: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
