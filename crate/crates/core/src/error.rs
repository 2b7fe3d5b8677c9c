use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^16")]
    BadPrime(u32),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("structure constants are not associative at (e_{0}*e_{1})*e_{2}")]
    NonAssociative(usize, usize, usize),

    #[error("unit vector fails the unit law for basis element e_{0}")]
    BadUnit(usize),

    #[error("invalid group table: {0}")]
    BadGroup(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("action is not an algebra morphism: {0}")]
    NotAModule(String),

    #[error("map is not equivariant under e_{0}")]
    NotEquivariant(usize),

    #[error("objects live over different algebras")]
    AlgebraMismatch,

    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i64),

    #[error("differential at degree {0} is not a module map")]
    BadDifferential(i64),

    #[error("chain map does not commute with differentials at degree {0}")]
    NotAChainMap(i64),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("invalid object at {pointer}: {message}")]
    Invalid { pointer: String, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
