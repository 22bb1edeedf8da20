use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("homomorphism matrix has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("matrix does not define a homomorphism: generator {generator} of order {order} is not sent to an element of matching order")]
    NotWellDefined { generator: usize, order: String },
    #[error("homomorphisms are not composable")]
    NotComposable,
    #[error("group is infinite: {0}")]
    Infinite(String),
    #[error("search too large: {size} exceeds the cap {cap}")]
    TooLarge { size: String, cap: u64 },
    #[error("malformed exact-sequence template: {0}")]
    MalformedTemplate(String),
    #[error("cannot parse group: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("unknown cell id `{0}`")]
    UnknownCell(String),
    #[error("duplicate cell id `{0}`")]
    DuplicateCell(String),
    #[error("cell `{cell}` of dimension {dim} has boundary term on `{face}` of dimension {face_dim}")]
    BadBoundaryDimension { cell: String, dim: u32, face: String, face_dim: u32 },
    #[error("fixed cell `{cell}` has boundary term on free cell `{face}`")]
    FixedBoundsFree { cell: String, face: String },
    #[error("fixed cell `{cell}` has a tau-part on fixed face `{face}`")]
    FixedTwisted { cell: String, face: String },
    #[error("boundary of boundary is nonzero: d(d({cell})) has coefficient {coefficient} on `{face}`")]
    BoundarySquaredNonzero { cell: String, face: String, coefficient: String },
    #[error("space file: {0}")]
    Parse(String),
    #[error("gluing: {0}")]
    Glue(String),
    #[error("unknown catalog space `{0}`")]
    UnknownSpace(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("involution reverses orientation of cell `{0}` it maps to itself")]
    OrientationReversingFixed(String),
    #[error("map is not a chain map: {0}")]
    NotChainMap(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("degree {degree} exceeds the truncation range {max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("truncation unstable in degree {degree}: {low} at N={n} vs {high} at N={n1}")]
    Unstable { degree: usize, low: String, high: String, n: usize, n1: usize },
    #[error("exactness fails at position {position}: {detail}")]
    NotExact { position: String, detail: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("space does not satisfy the FKMM-space conditions: {0}")]
    NotFkmmSpace(String),
    #[error("sign vector has length {found}, fixed set has {expected} points")]
    SignLength { expected: usize, found: usize },
    #[error("odd rank requires an empty fixed-point set")]
    OddRankWithFixedPoints,
}
