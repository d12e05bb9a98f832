use thiserror::Error;

/// Errors raised while building or evaluating a design.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("genotype must have {expected} genes, got {got}")]
    GenotypeLength { expected: usize, got: usize },
    #[error("gene {index} = {value} lies outside [-1, 1]")]
    GeneOutOfRange { index: usize, value: f64 },
    #[error("parameter `{key}` must be finite and positive, got {value}")]
    InvalidParam { key: &'static str, value: f64 },
    #[error("propellers {first} and {second} coincide")]
    DegenerateLayout { first: usize, second: usize },
    #[error("invalid phenotype: {0}")]
    InvalidPhenotype(&'static str),
    #[error("hover command is all zero")]
    ZeroCommand,
    #[error("inertia tensor is singular")]
    SingularInertia,
}

pub type Result<T, E = ModelError> = core::result::Result<T, E>;
