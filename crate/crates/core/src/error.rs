use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dressed frame is degenerate (Ω = 0 and δ = 0): dressed basis undefined")]
    DegenerateFrame,

    #[error("frequency {omega} is outside the tabulated range [{min}, {max}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    #[error("quadrature failed to reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    QuadratureFailure { tolerance: f64, estimate: f64 },

    #[error("frequency {omega} coincides with cavity mode n = {mode}")]
    ResonantMode { omega: f64, mode: u64 },

    #[error("cavity mode sum not converged: relative change {change:e} exceeds {tolerance:e}")]
    NonConvergent { change: f64, tolerance: f64 },

    #[error("RDDI shift for channel {channel} has imaginary part {imag:e} (magnitude {magnitude:e})")]
    ComplexDelta {
        channel: &'static str,
        imag: f64,
        magnitude: f64,
    },

    #[error("dissipator matrix for channel {channel} has negative eigenvalue {eigenvalue:e}")]
    NonPhysicalDissipator { channel: &'static str, eigenvalue: f64 },

    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("state invariant violated at t = {t}: {what}")]
    InvariantViolation { t: f64, what: String },

    #[error("generator kernel is not one-dimensional (singular values {smallest:e}, {second:e}; largest {largest:e})")]
    DegenerateKernel { smallest: f64, second: f64, largest: f64 },

    #[error("closed form has a vanishing denominator: {0}")]
    ZeroDenominator(&'static str),

    #[error("polarization vector has norm {norm}, expected 1")]
    UnnormalizedPolarization { norm: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("failed to read tabulated spectrum: {0}")]
    Io(String),
}
