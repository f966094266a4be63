use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("point lies in the null band")]
    NullPoint,
    #[error("expected a {expected} point, got {got}")]
    WrongClass {
        expected: &'static str,
        got: &'static str,
    },
    #[error("tance {0} below 1 for a pair of negative points")]
    Domain(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("frame is not orthogonal (residual {0:e})")]
    FrameNotOrthogonal(f64),
    #[error("phases must have unit modulus")]
    BadPhase,
    #[error("complex geodesics are identical")]
    IdenticalGeodesics,
    #[error("complex geodesics are not ultraparallel (tance {0})")]
    NotUltraparallel(f64),
    #[error("point is not on the spine (residual {0:e})")]
    NotOnSpine(f64),
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("triple product vanishes")]
    VanishingTripleProduct,
    #[error("triangle is not transversal")]
    NotTransversal,
    #[error("vertex not in the complex geodesic (residual {0:e})")]
    NotInPlane(f64),
    #[error("signature ({0}, {1}, {2}) is not hyperbolic")]
    NonHyperbolic(u32, u32, u32),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("solver converged but the quadrangle failed: {0}")]
    ConvergedInvalid(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word: {0}")]
    BadWord(String),
    #[error("quadrature did not converge (estimate {estimate}, error {error:e})")]
    Quadrature { estimate: f64, error: f64 },
    #[error("fixed point is not fixed (tance {0})")]
    BadFixedPoint(f64),
    #[error("mesh invalid: {0}")]
    Mesh(String),
    #[error("side pairing mismatch: {0}")]
    HolonomyMismatch(String),
    #[error("plane is not Lagrangian (kaehler value {0})")]
    NonLagrangian(f64),
    #[error("invalid genus/toledo data: {0}")]
    GklBounds(String),
}

pub type Result<T> = std::result::Result<T, Error>;
