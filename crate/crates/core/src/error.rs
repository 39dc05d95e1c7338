use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: bounds must be finite with lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("division by an interval containing zero: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },

    #[error("parametric coordinate {0} lies outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("cannot parse interval {input:?}: {reason}")]
    IntervalParse { input: String, reason: String },

    #[error("Brownian motion parameter Nb must be nonzero when the concentration equation is solved")]
    ZeroBrownian,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("invalid eta grid: {0}")]
    InvalidGrid(String),

    #[error("HPM order {requested} exceeds the hard cap of {cap}")]
    OrderTooLarge { requested: usize, cap: usize },

    #[error("order-{order} {field} term failed the residual check (residual {residual:e})")]
    ResidualCheck {
        field: &'static str,
        order: usize,
        residual: f64,
    },

    #[error("integration blew up at eta = {eta}: non-finite state")]
    BlowUp { eta: f64 },

    #[error("shooting did not converge after {iterations} iterations; terminal residuals {residuals:?}")]
    NoConvergence {
        iterations: usize,
        residuals: [f64; 4],
    },

    #[error("shooting Jacobian is singular at unknowns {unknowns:?}")]
    SingularJacobian { unknowns: [f64; 4] },

    #[error("invalid uncertainty specification: {0}")]
    InvalidSpec(String),

    #[error("parameter draw {index} (S={s}, A={a}, M={m}) failed: {source}")]
    Draw {
        index: usize,
        s: f64,
        a: f64,
        m: f64,
        #[source]
        source: Box<Error>,
    },
}
