use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes:
/// scenario/config problems exit 2, I/O problems exit 3, oracle
/// capacity exits 4.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario: {constraint}")]
    InvalidScenario {
        field: &'static str,
        constraint: String,
    },

    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config error: field `{field}`: {message}")]
    ConfigValidation { field: String, message: String },

    #[error("internal consistency error: {0}")]
    Inconsistency(String),

    #[error("oracle capacity exceeded: {0}")]
    OracleCapacity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn invalid_scenario(field: &'static str, constraint: impl Into<String>) -> Self {
        SimError::InvalidScenario {
            field,
            constraint: constraint.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
