use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("asymmetric Coxeter matrix: m[{i}][{j}] = {a} but m[{j}][{i}] = {b}")]
    Asymmetry { i: usize, j: usize, a: String, b: String },
    #[error("diagonal entry m[{0}][{0}] must be 1, found {1}")]
    Diagonal(usize, String),
    #[error("bad entry m[{i}][{j}] = {value}: off-diagonal entries must be integers >= 2 or \"inf\"")]
    BadEntry { i: usize, j: usize, value: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("resource cap exceeded: {0}")]
    ResourceExceeded(String),
    #[error("validation mismatch: {0}")]
    ValidationMismatch(String),
    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),
    #[error("no vcd witness: the system has vcd 0")]
    NoWitness,
    #[error("system is not right-angled: every m_st must be 2 or inf")]
    NotRightAngled,
    #[error("element length {length} exceeds building radius {radius}")]
    RadiusExceeded { length: usize, radius: usize },
    #[error("chain support too close to the truncation boundary: {0}")]
    MarginViolation(String),
    #[error("Coxeter system is not Gromov-hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("weighted growth rate is 0 (finite or affine system); the formula is undefined")]
    AffineDegenerate,
    #[error("thin building: {0}")]
    ThinBuilding(String),
    #[error("thickness violates class constancy: {0}")]
    ThicknessClass(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceExceeded(_) | Error::RadiusExceeded { .. } => 3,
            Error::ValidationMismatch(_) => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
