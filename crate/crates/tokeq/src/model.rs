//! Exogenous parameters, validation, and shared derived quantities.
//!
//! Everything downstream works off an immutable [`ModelParams`]. The
//! discount factor is always the reciprocal of the gross risk-free rate and
//! the post-launch token price is pinned at one unit of numeraire, so
//! neither is a field: storing them separately would invite inconsistent
//! states.

use crate::error::{Error, Result};

/// Which financing instrument a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Asset {
    Equity,
    Token,
}

impl std::fmt::Display for Asset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Asset::Equity => write!(f, "equity"),
            Asset::Token => write!(f, "token"),
        }
    }
}

/// All exogenous scalars of the three-period financing model.
///
/// * `r` — gross risk-free rate per period (>= 1).
/// * `lambda` — probability an investor must consume early, in [0, 1].
/// * `phi1` — fraction of the initial token holding sellable in the middle
///   period, in [0, 1].
/// * `phi2` — fraction of the remaining tokens sellable in the final
///   period, in [0, 1].
/// * `y1`, `y2` — digital-good output in the middle and final period (>= 0).
/// * `omega` — per-period fixed production cost (>= 0).
/// * `invest` — required initial investment `I` (> 0).
/// * `wealth` — investor initial wealth `W` (> `invest`, so the bond
///   holding `W - I` stays positive).
/// * `sigma` — relative-risk-aversion curvature (>= 0; 0 is risk neutral).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub r: f64,
    pub lambda: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub y1: f64,
    pub y2: f64,
    pub omega: f64,
    pub invest: f64,
    pub wealth: f64,
    pub sigma: f64,
}

impl Default for ModelParams {
    /// The stock example point used throughout the test suite and as the
    /// CLI default.
    fn default() -> Self {
        Self {
            r: 1.05,
            lambda: 0.1,
            phi1: 0.5,
            phi2: 1.0,
            y1: 10.0,
            y2: 10.0,
            omega: 2.0,
            invest: 5.0,
            wealth: 10.0,
            sigma: 0.0,
        }
    }
}

impl ModelParams {
    /// Checks every parameter bound and returns the same values on success.
    ///
    /// `lambda = 1` passes here; it is only the equity solvers that reject
    /// it. `wealth <= invest` is rejected because the investor bond holding
    /// `W - I` must be positive for the curved-utility problems to be
    /// defined.
    pub fn validate(&self) -> Result<Self> {
        let check_finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be finite, got {v}")))
            }
        };
        for (name, v) in [
            ("R", self.r),
            ("lambda", self.lambda),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
            ("y1", self.y1),
            ("y2", self.y2),
            ("omega", self.omega),
            ("I", self.invest),
            ("W", self.wealth),
            ("sigma", self.sigma),
        ] {
            check_finite(name, v)?;
        }
        if self.r < 1.0 {
            return Err(Error::Domain(format!("R must be >= 1, got {}", self.r)));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Domain(format!(
                "lambda out of [0, 1], got {}",
                self.lambda
            )));
        }
        if !(0.0..=1.0).contains(&self.phi1) {
            return Err(Error::Domain(format!(
                "phi1 out of [0, 1], got {}",
                self.phi1
            )));
        }
        if !(0.0..=1.0).contains(&self.phi2) {
            return Err(Error::Domain(format!(
                "phi2 out of [0, 1], got {}",
                self.phi2
            )));
        }
        if self.y1 < 0.0 {
            return Err(Error::Domain(format!("y1 must be >= 0, got {}", self.y1)));
        }
        if self.y2 < 0.0 {
            return Err(Error::Domain(format!("y2 must be >= 0, got {}", self.y2)));
        }
        if self.omega < 0.0 {
            return Err(Error::Domain(format!(
                "omega must be >= 0, got {}",
                self.omega
            )));
        }
        if self.invest <= 0.0 {
            return Err(Error::Domain(format!("I must be > 0, got {}", self.invest)));
        }
        if self.wealth <= self.invest {
            return Err(Error::Domain(format!(
                "W must exceed I (bond holding W - I must be positive), got W = {}, I = {}",
                self.wealth, self.invest
            )));
        }
        if self.sigma < 0.0 {
            return Err(Error::Domain(format!(
                "sigma must be >= 0, got {}",
                self.sigma
            )));
        }
        Ok(*self)
    }

    /// Discount factor, always exactly `1 / R`.
    pub fn beta(&self) -> f64 {
        1.0 / self.r
    }

    /// Future value of operating profit: `(y1 - omega) * R + y2 - omega`.
    ///
    /// May be negative; callers decide whether that makes economic sense.
    pub fn future_profit(&self) -> f64 {
        (self.y1 - self.omega) * self.r + self.y2 - self.omega
    }

    /// Investor bond holding once the financing budget binds: `W - I`.
    pub fn bond_holding(&self) -> f64 {
        self.wealth - self.invest
    }
}

/// Quantities derived from the parameters that every solver shares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Future value of profit.
    pub pi: f64,
    /// Discount factor `1 / R`.
    pub beta: f64,
}

impl DerivedQuantities {
    pub fn from_params(params: &ModelParams) -> Self {
        Self {
            pi: params.future_profit(),
            beta: params.beta(),
        }
    }
}
