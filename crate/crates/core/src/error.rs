use alloc::string::String;

/// Failure inside a chart expression: the offending operation and its argument.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DomainFault {
    #[error("square root of non-positive argument {0:e}")]
    SqrtNonPositive(f64),
    #[error("division by near-zero denominator {0:e}")]
    DivisionByZero(f64),
    #[error("chart variable {index} out of range ({available} inputs)")]
    UnboundVariable { index: usize, available: usize },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("form is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("tolerance must be positive, got {0:e}")]
    BadTolerance(f64),

    #[error("domain error in ambient coordinate {coordinate}: {fault}")]
    Domain { coordinate: usize, fault: DomainFault },

    #[error("point lies outside the chart domain: {0}")]
    OutsideDomain(String),

    #[error("chart has {0} variables; at most {max} are supported", max = crate::jets::MAX_VARS)]
    TooManyVariables(usize),

    #[error("immersion fails at this point: tangent frame has rank {rank}, expected {expected}")]
    RankLoss { rank: usize, expected: usize },

    #[error("induced metric is degenerate (radical rank {0}); use the quotient formulation")]
    DegenerateMetric(usize),

    #[error("unknown family id `{0}`")]
    UnknownFamily(String),

    #[error("unknown parameter `{name}` for family `{family}`")]
    UnknownParameter { family: String, name: String },

    #[error("parameter `{name}` = {value} is outside its domain {domain}")]
    ParamOutOfRange { name: String, value: f64, domain: String },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("sample sets differ in size ({0} vs {1})")]
    CountMismatch(usize, usize),

    #[error("input is not totally umbilical: {0}")]
    NotUmbilical(String),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
