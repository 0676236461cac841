use thiserror::Error;

/// Everything that can go wrong inside the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGrid(usize),

    #[error("band {band} is not below the Nyquist limit {limit} of the grid")]
    BandTooHigh { band: usize, limit: usize },

    #[error("derivative order {order} exceeds the configured maximum {limit}")]
    OrderTooHigh { order: usize, limit: usize },

    #[error("model structure check failed: {0}")]
    StructureCheck(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("form of degree {got} where degree {expected} was required")]
    DegreeMismatch { expected: u8, got: u8 },

    #[error("field is too close to zero for division (min |f| = {min_abs:.3e})")]
    DivisionNearZero { min_abs: f64 },

    #[error("conjugate gradient stalled after {iterations} iterations (relative residual {residual:.3e})")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("harmonic basis check failed: {0}")]
    HarmonicBasis(String),

    #[error("dense assembly is limited to N <= 12, got N = {0}")]
    DenseTooLarge(usize),

    #[error("geodesic integration failed: {0}")]
    Geodesic(String),

    #[error("vector field too large for the exponential chart: sup|X| = {sup:.3e} > {budget:.3e}")]
    OutsideChart { sup: f64, budget: f64 },

    #[error("map is degenerate: minimum Jacobian determinant {min_det:.3e}")]
    JacobianDegenerate { min_det: f64 },

    #[error("displacement {sup:.3e} too far from the identity")]
    DisplacementTooLarge { sup: f64 },

    #[error("map inversion did not converge (worst residual {worst_residual:.3e})")]
    InversionFailed { worst_residual: f64 },

    #[error("Psi iteration did not converge in {iterations} iterations (defect {defect:.3e})")]
    PsiNotConverged { iterations: usize, defect: f64 },

    #[error("anisotropic J required for {0}")]
    NeedsAnisotropicJ(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
