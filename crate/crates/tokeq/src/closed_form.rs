//! Exact risk-neutral equilibrium: prices, required returns, entrepreneur
//! payoffs, issuance quantities, analytic comparative-statics derivatives,
//! and the limiting benchmark cases.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Risk-neutral equity equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquitySolution {
    /// Price of the single share.
    pub q: f64,
    /// Fraction of the share sold, `e = I / q`.
    pub e: f64,
    /// Gross required return `R^E = Pi / q`.
    pub r_equity: f64,
    /// Entrepreneur final-period consumption `(1 - e) * Pi`.
    pub payoff: f64,
    /// Early consumer's consumption: bonds only.
    pub c1_type_a: f64,
    /// Late consumer's consumption: bonds plus the equity dividend.
    pub c2_type_b: f64,
}

/// Risk-neutral token equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TokenSolution {
    /// Launch-period token price.
    pub p0: f64,
    /// Tokens sold at launch, `t0 = I / p0`.
    pub t0: f64,
    /// Gross required return `R^T = 1 / p0`.
    pub r_token: f64,
    /// Entrepreneur final-period consumption.
    pub payoff: f64,
    /// Entrepreneur's new middle-period issuance `y1 - phi1 * t0`.
    pub t1_new: f64,
    /// Entrepreneur's new final-period issuance `y2 - phi2 * (1 - phi1) * t0`.
    pub t2_new: f64,
    /// Early consumer's consumption: bonds plus middle-period token sales.
    pub c1_type_a: f64,
    /// Late consumer's consumption.
    pub c2_type_b: f64,
    /// Set when `t1_new` or `t2_new` is negative: the payoff algebra is
    /// still well-defined, but the entrepreneur would have to issue a
    /// negative quantity for the goods market to clear.
    pub feasibility_warning: bool,
}

/// Weight of launch tokens in the entrepreneur's payoff:
/// `phi2 * (1 - phi1) + phi1 * R`.
pub(crate) fn resale_weight(params: &ModelParams) -> f64 {
    params.phi2 * (1.0 - params.phi1) + params.phi1 * params.r
}

/// Risk-neutral token price: `phi1 / R + (1 - lambda) phi2 (1 - phi1) / R^2`.
pub(crate) fn token_price_rn(params: &ModelParams) -> f64 {
    params.phi1 / params.r
        + (1.0 - params.lambda) * params.phi2 * (1.0 - params.phi1) / (params.r * params.r)
}

/// Solves the risk-neutral equity equilibrium.
///
/// `q = (1 - lambda) Pi / R^2`, `R^E = R^2 / (1 - lambda)`, payoff
/// `Pi - I R^E`. Fails with [`Error::CannotFinance`] when the whole share
/// is worth less than the required investment (`e` would exceed 1), and
/// with [`Error::Degenerate`] at `lambda = 1`.
pub fn solve_equity_rn(params: &ModelParams) -> Result<EquitySolution> {
    if params.lambda >= 1.0 {
        return Err(Error::Degenerate(
            "lambda = 1 leaves no late consumers to hold equity",
        ));
    }
    let pi = params.future_profit();
    let r2 = params.r * params.r;
    let q = (1.0 - params.lambda) * pi / r2;
    if q <= 0.0 || q < params.invest {
        return Err(Error::CannotFinance {
            share_value: q,
            required: params.invest,
        });
    }
    let e = params.invest / q;
    let r_equity = r2 / (1.0 - params.lambda);
    let payoff = pi - params.invest * r_equity;
    let b0 = params.bond_holding();
    let c1_type_a = b0 * params.r;
    let c2_type_b = b0 * r2 + e * pi;
    debug_assert!((payoff - (1.0 - e) * pi).abs() <= 1e-9 * pi.abs().max(1.0));
    Ok(EquitySolution {
        q,
        e,
        r_equity,
        payoff,
        c1_type_a,
        c2_type_b,
    })
}

/// Solves the risk-neutral token equilibrium.
///
/// The payoff is computed from the factored form `Pi - weight * t0`, which
/// avoids the cancellation of re-deriving it from issuance; the
/// issuance-based route is kept as a debug assertion.
pub fn solve_token_rn(params: &ModelParams) -> Result<TokenSolution> {
    let p0 = token_price_rn(params);
    if p0 <= 0.0 {
        return Err(Error::IlliquidToken);
    }
    let pi = params.future_profit();
    let t0 = params.invest / p0;
    let r_token = 1.0 / p0;
    let weight = resale_weight(params);
    let payoff = pi - weight * t0;
    let resold_mid = params.phi1 * t0;
    let resold_final = params.phi2 * (1.0 - params.phi1) * t0;
    let t1_new = params.y1 - resold_mid;
    let t2_new = params.y2 - resold_final;
    let b0 = params.bond_holding();
    let c1_type_a = b0 * params.r + resold_mid;
    let c2_type_b = c1_type_a * params.r + resold_final;
    // Issuance route for the same payoff: sell t2_new at par plus the
    // middle-period retained earnings grown one period.
    debug_assert!({
        let issuance_route = t2_new + (t1_new - params.omega) * params.r - params.omega;
        (payoff - issuance_route).abs() <= 1e-9 * payoff.abs().max(1.0)
    });
    Ok(TokenSolution {
        p0,
        t0,
        r_token,
        payoff,
        t1_new,
        t2_new,
        c1_type_a,
        c2_type_b,
        feasibility_warning: t1_new < 0.0 || t2_new < 0.0,
    })
}

/// Analytic derivatives of the risk-neutral token payoff with respect to
/// the two liquidity parameters.
///
/// Both share the denominator `D = [phi1 (R - (1-lambda) phi2) +
/// (1-lambda) phi2]^2`; the first is `I R^3 lambda phi2 / D >= 0`, the
/// second `-I R^2 (1-phi1) lambda phi1 R / D <= 0`.
pub fn payoff_derivatives_rn(params: &ModelParams) -> Result<(f64, f64)> {
    let r = params.r;
    let lam = params.lambda;
    let denom_root = params.phi1 * (r - (1.0 - lam) * params.phi2) + (1.0 - lam) * params.phi2;
    let denom = denom_root * denom_root;
    if denom == 0.0 {
        return Err(Error::Degenerate(
            "zero token price: payoff derivatives are undefined",
        ));
    }
    let ir2 = params.invest * r * r;
    let d_phi1 = ir2 * r * lam * params.phi2 / denom;
    let d_phi2 = -ir2 * (1.0 - params.phi1) * lam * params.phi1 * r / denom;
    Ok((d_phi1, d_phi2))
}

/// Entrepreneur payoff when financing at the risk-free rate: `Pi - I R^2`.
///
/// Equals the token payoff when the whole holding is sellable in the
/// middle period (`phi1 = 1`).
pub fn bond_benchmark(params: &ModelParams) -> f64 {
    params.future_profit() - params.invest * params.r * params.r
}
