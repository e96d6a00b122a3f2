use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root {re} + {im}i is not finite")]
    NonFiniteRoot { re: f64, im: f64 },

    #[error("root {re} + {im}i lies on the positive real axis")]
    PositiveAxisRoot { re: f64, im: f64 },

    #[error("root {re} + {im}i has no matching complex conjugate")]
    UnpairedConjugate { re: f64, im: f64 },

    #[error("coefficient p[{index}] = {value} is negative")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("product form is not a polynomial: {0}")]
    NonPolynomialQuotient(String),

    #[error("invalid product-form pair ({a}, {b}): both entries must be at least 1")]
    InvalidPair { a: u64, b: u64 },

    #[error("probability {0} is outside (0, 1]")]
    InvalidProbability(f64),

    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),

    #[error("angle must be nonzero")]
    ZeroAngle,

    #[error("zeta = 1 is not admissible")]
    RootAtOne,

    #[error("variance is degenerate (sigma^2 = {0})")]
    DegenerateVariance(f64),

    #[error("T must be positive, got {0}")]
    NonpositiveT(f64),

    #[error("e^(i*{t}) coincides with the root angle {angle}")]
    AngleCollision { t: f64, angle: f64 },

    #[error("root class {0} has no proven certificate constant")]
    UnsupportedRootClass(String),

    #[error("A0 = {0} must be below 1/2")]
    InvalidA0(f64),

    #[error("s = {s} is below the admissible minimum {min}")]
    InvalidS { s: f64, min: f64 },

    #[error("constant self-test failed: {0}")]
    ConstantSelfTest(String),

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
