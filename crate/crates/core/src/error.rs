use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("log_gamma domain error: x = {0} must be positive")]
    GammaDomain(f64),

    #[error("degenerate parameters: {0}")]
    DegenerateParameter(String),

    #[error("invalid potential spec: violates {0}")]
    InvalidSpec(String),

    #[error("singular extension: {polynomial} changes sign or vanishes near x = {x}")]
    SingularExtension { polynomial: String, x: f64 },

    #[error("x = {x} lies outside the open domain ({x_min}, {x_max})")]
    Domain { x: f64, x_min: f64, x_max: f64 },

    #[error("level {n} out of range (n_max = {n_max:?})")]
    LevelRange { n: usize, n_max: Option<usize> },

    #[error("factorization requires positive energy, got E_{n} = {energy}")]
    Factorization { n: usize, energy: f64 },

    #[error("no real Dirac energy: epsilon^2 = {0} < 0")]
    NoRealEnergy(f64),

    #[error("potential not finite at grid node x = {0}")]
    GridSingularity(f64),

    #[error("inverse iteration did not converge for lambda = {0}")]
    DegenerateCluster(f64),

    #[error("truncation too tight: {0}")]
    TruncationTooTight(String),

    #[error("supersymmetry classification inconsistent: {0}")]
    SusyInconsistent(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}
