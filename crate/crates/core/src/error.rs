use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("ring mismatch: [{left}] vs [{right}]")]
    RingMismatch { left: String, right: String },

    #[error("unsupported root system {family}{rank}; supported: A1, A2, A3, B2, G2")]
    UnsupportedRootSystem { family: char, rank: usize },

    #[error("unsupported Lie algebra sl{0}; supported: sl2, sl3")]
    UnsupportedAlgebra(usize),

    #[error("operation `{op}` is only defined for {expected}")]
    WrongAlgebra { op: &'static str, expected: &'static str },

    #[error("framing must be a non-zero integer")]
    ZeroFraming,

    #[error("{0} tensor factors supplied for {1} framings")]
    LengthMismatch(usize, usize),

    #[error("polynomial is not ad-invariant: {0}")]
    NotInvariant(String),

    #[error("expected a homogeneous polynomial of even degree, got degree {0}")]
    OddDegree(u32),

    #[error("expected a homogeneous polynomial")]
    NotHomogeneous,

    #[error("series has no invertible leading coefficient")]
    NotInvertible,

    #[error("Weyl group closure exceeded {0} elements")]
    GroupTooLarge(usize),

    #[error("irrep dimension must be positive, got {0}")]
    BadDimension(i64),

    #[error("degree {degree} exceeds the supported bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },

    #[error("diagram error: {0}")]
    Diagram(String),

    #[error("parse error at token {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("Monte Carlo configuration: {0}")]
    MonteCarlo(String),

    #[error("quadratic form is degenerate")]
    DegenerateForm,

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
