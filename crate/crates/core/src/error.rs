use thiserror::Error;

/// Errors raised by the physics and quadrature layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate wavevector: xi and k are both zero")]
    DegenerateWavevector,

    #[error("Clausius-Mossotti divergence: local-field denominator {denominator} is not positive")]
    ClausiusMossottiDivergence { denominator: f64 },

    #[error("resonant denominator: |r R exp(-2 kappa d)| = {product} >= 1 at xi = {xi}, k = {k}")]
    ResonantDenominator { product: f64, xi: f64, k: f64 },

    #[error("non-finite integrand value {value} at abscissa {abscissa}")]
    NonFiniteIntegrand { abscissa: f64, value: f64 },

    #[error("{quantity} did not converge: last {last}, previous {previous}, error estimate {err_est}")]
    NotConverged {
        quantity: &'static str,
        last: f64,
        previous: f64,
        err_est: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
