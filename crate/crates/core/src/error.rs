use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("quadrature did not converge: estimated error {estimate:e} after {subdivisions} subdivisions")]
    Quadrature { estimate: f64, subdivisions: usize },

    #[error("ball (d = {d}, r = {r}) does not contain the evaluation point s = {s}")]
    InfeasibleBall { s: f64, d: f64, r: f64 },

    #[error("best-ball search did not converge at grid points {0:?}")]
    Unconverged(Vec<f64>),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
