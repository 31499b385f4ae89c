use crate::model::Asset;

/// Errors produced by validation, the closed-form solvers, the fixed-point
/// solvers, and the brute-force verification machinery.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter or argument violates its documented bound.
    #[error("invalid input: {0}")]
    Domain(String),

    /// The whole equity share is worth less than the required investment.
    #[error("equity cannot finance: share value {share_value:.6} is below required investment {required:.6}")]
    CannotFinance { share_value: f64, required: f64 },

    /// A limiting parameter combination makes the requested quantity undefined.
    #[error("degenerate case: {0}")]
    Degenerate(&'static str),

    /// phi1 = 0 together with phi2 = 0 or lambda = 1 gives a zero token price.
    #[error("token is illiquid: it cannot raise any funds at these liquidity parameters")]
    IlliquidToken,

    /// The fixed-point residual has no admissible root in the search bracket.
    #[error("no equilibrium: {0}")]
    NoEquilibrium(String),

    /// The root search exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: u32, residual: f64 },

    /// A market-clearing bracket does not straddle the target demand.
    #[error("bracket [{lo:.6}, {hi:.6}] does not straddle clearing: demand {demand_lo:.6} / {demand_hi:.6}, target {target:.6}")]
    Bracket {
        lo: f64,
        hi: f64,
        demand_lo: f64,
        demand_hi: f64,
        target: f64,
    },

    /// A configuration file could not be parsed.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

/// A solver failure tagged with the financing leg it occurred on.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{asset} leg failed: {source}")]
pub struct LegError {
    pub asset: Asset,
    pub source: Error,
}

pub type Result<T> = std::result::Result<T, Error>;
