use thiserror::Error;

/// Errors raised by frame construction and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFiniteEntries,
    #[error("matrix has no columns or rows")]
    EmptyMatrix,
    #[error("all columns are numerically zero")]
    AllColumnsNumericallyZero,
    #[error("matrix is not positive definite (smallest eigenvalue {lambda_min:e}, largest {lambda_max:e})")]
    NotPositiveDefinite { lambda_min: f64, lambda_max: f64 },
    #[error("invalid tolerance `{name}` = {value}: must lie strictly between 0 and 1")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: a real frame cannot hold complex data")]
    FieldMismatch,
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("vector {index} is numerically zero")]
    ZeroVector { index: usize },
    #[error("vectors do not span the ambient space (rank {rank} < {dim})")]
    NotAFrame { rank: usize, dim: usize },
    #[error("member {index}: weight {weight} is not strictly positive")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("member {index}: spanning set is numerically zero")]
    ZeroSubspace { index: usize },
    #[error("member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<FrameError>,
    },
    #[error("family has no members")]
    NoMembers,
    #[error("not a fusion frame: smallest eigenvalue {lambda_min:e} of the frame operator is below tolerance")]
    NotAFusionFrame { lambda_min: f64 },
    #[error("erasure index {index} out of range for {len} members")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("erasure index {index} listed more than once")]
    DuplicateIndex { index: usize },
    #[error("erasing every member leaves nothing")]
    EmptyRemainder,
    #[error("exhaustive erasure search supports at most {max} members, frame has {len}")]
    TooManyMembers { len: usize, max: usize },
    #[error("operator is singular (smallest singular value {sigma_min:e})")]
    SingularOperator { sigma_min: f64 },
    #[error("eta has {found} vectors, frame has {expected}")]
    WrongEtaCount { expected: usize, found: usize },
    #[error("candidate is not a dual (reconstruction residual {residual:e})")]
    NotADual { residual: f64 },
    #[error("member count mismatch: expected {expected}, found {found}")]
    MemberCountMismatch { expected: usize, found: usize },
    #[error("weights are not all equal to 1")]
    NotUniformWeights,
    #[error("member {member}: local vector {vector} lies outside its subspace (distance {distance:e})")]
    VectorOutsideSubspace {
        member: usize,
        vector: usize,
        distance: f64,
    },
    #[error("member {member}: local vectors do not span the subspace")]
    LocalNotAFrame { member: usize },
    #[error("member {member}: local frame is not Parseval for its subspace (deviation {deviation:e})")]
    LocalNotParseval { member: usize, deviation: f64 },
    #[error("bound violated: {what}")]
    BoundViolation { what: String },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("example `{name}` requires {requirement}")]
    InvalidExampleDimension {
        name: String,
        requirement: &'static str,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported schema version `{0}`")]
    SchemaVersionUnsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl FrameError {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            FrameError::NotSquare { .. } => "NotSquare",
            FrameError::NonFiniteEntries => "NonFiniteEntries",
            FrameError::EmptyMatrix => "EmptyMatrix",
            FrameError::AllColumnsNumericallyZero => "AllColumnsNumericallyZero",
            FrameError::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            FrameError::InvalidTolerance { .. } => "InvalidTolerance",
            FrameError::DimensionMismatch { .. } => "DimensionMismatch",
            FrameError::FieldMismatch => "FieldMismatch",
            FrameError::NotUnitVector { .. } => "NotUnitVector",
            FrameError::ZeroVector { .. } => "ZeroVector",
            FrameError::NotAFrame { .. } => "NotAFrame",
            FrameError::NonPositiveWeight { .. } => "NonPositiveWeight",
            FrameError::ZeroSubspace { .. } => "ZeroSubspace",
            FrameError::Member { source, .. } => source.kind(),
            FrameError::NoMembers => "NoMembers",
            FrameError::NotAFusionFrame { .. } => "NotAFusionFrame",
            FrameError::IndexOutOfRange { .. } => "IndexOutOfRange",
            FrameError::DuplicateIndex { .. } => "DuplicateIndex",
            FrameError::EmptyRemainder => "EmptyRemainder",
            FrameError::TooManyMembers { .. } => "TooManyMembers",
            FrameError::SingularOperator { .. } => "SingularOperator",
            FrameError::WrongEtaCount { .. } => "WrongEtaCount",
            FrameError::NotADual { .. } => "NotADual",
            FrameError::MemberCountMismatch { .. } => "MemberCountMismatch",
            FrameError::NotUniformWeights => "NotUniformWeights",
            FrameError::VectorOutsideSubspace { .. } => "VectorOutsideSubspace",
            FrameError::LocalNotAFrame { .. } => "LocalNotAFrame",
            FrameError::LocalNotParseval { .. } => "LocalNotParseval",
            FrameError::BoundViolation { .. } => "BoundViolation",
            FrameError::UnknownExample(_) => "UnknownExample",
            FrameError::InvalidExampleDimension { .. } => "InvalidExampleDimension",
            FrameError::Parse { .. } => "ParseError",
            FrameError::Schema { .. } => "ParseError",
            FrameError::SchemaVersionUnsupported(_) => "SchemaVersionUnsupported",
            FrameError::Io(_) => "Io",
        }
    }

    /// Member index the error refers to, if any.
    pub fn member_index(&self) -> Option<usize> {
        match self {
            FrameError::Member { index, .. }
            | FrameError::NonPositiveWeight { index, .. }
            | FrameError::ZeroSubspace { index } => Some(*index),
            FrameError::VectorOutsideSubspace { member, .. }
            | FrameError::LocalNotAFrame { member }
            | FrameError::LocalNotParseval { member, .. } => Some(*member),
            _ => None,
        }
    }

    pub(crate) fn at_member(self, index: usize) -> FrameError {
        match self {
            e @ (FrameError::Member { .. }
            | FrameError::NonPositiveWeight { .. }
            | FrameError::ZeroSubspace { .. }) => e,
            e => FrameError::Member {
                index,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, FrameError>;
