//! Independent verification by brute force.
//!
//! Nothing here reuses the solver pricing formulas: expected utility is
//! written straight from the investor objectives, demand is maximized on a
//! grid, and market clearing is located by bisecting the price. Agreement
//! with the closed forms and fixed-point solvers is therefore evidence,
//! not tautology. The only shared ingredient is the utility function
//! itself.

use crate::closed_form::{payoff_derivatives_rn, solve_token_rn, EquitySolution, TokenSolution};
use crate::crra::{crra_utility, CrraEquitySolution, CrraTokenSolution};
use crate::error::{Error, Result};
use crate::model::{Asset, ModelParams};
use crate::search::golden_max;

/// Grid resolution used when none is given. Coarse-to-fine: the uniform
/// grid locates the basin, golden-section refinement polishes it.
pub const DEFAULT_GRID_POINTS: usize = 10_001;

/// Relative width (of investor wealth) to which the demand optimum is
/// refined.
const REFINE_WIDTH: f64 = 1e-9;

/// Demand tolerance for market clearing, as a fraction of wealth.
const CLEARING_TOL: f64 = 1e-6;

/// Investor consumption in each branch for a given portfolio.
///
/// Equity pays its dividend only to late consumers; tokens pay the
/// middle-period resale fraction to everyone and the remaining sellable
/// fraction to late consumers.
fn consumption_pair(
    params: &ModelParams,
    asset: Asset,
    price: f64,
    risky_spend: f64,
) -> Result<(f64, f64)> {
    if price.is_nan() || price <= 0.0 {
        return Err(Error::Domain(format!(
            "price must be positive, got {price}"
        )));
    }
    if !(0.0..params.wealth).contains(&risky_spend) {
        return Err(Error::Domain(format!(
            "risky_spend must lie in [0, W), got {risky_spend}"
        )));
    }
    let b0 = params.wealth - risky_spend;
    Ok(match asset {
        Asset::Equity => {
            let c1 = b0 * params.r;
            let c2 = b0 * params.r * params.r + risky_spend / price * params.future_profit();
            (c1, c2)
        }
        Asset::Token => {
            let t0 = risky_spend / price;
            let c1 = b0 * params.r + params.phi1 * t0;
            let c2 = c1 * params.r + params.phi2 * (1.0 - params.phi1) * t0;
            (c1, c2)
        }
    })
}

/// Expected discounted utility of putting `risky_spend` into the risky
/// asset at the given price and the rest into bonds.
pub fn expected_utility(
    params: &ModelParams,
    asset: Asset,
    price: f64,
    risky_spend: f64,
) -> Result<f64> {
    let (c1, c2) = consumption_pair(params, asset, price, risky_spend)?;
    let lam = params.lambda;
    let beta = params.beta();
    // Zero-probability branches are skipped entirely so that an infeasible
    // consumption there cannot poison the objective.
    let mut eu = 0.0;
    if lam > 0.0 {
        eu += lam * beta * crra_utility(c1, params.sigma)?;
    }
    if lam < 1.0 {
        eu += (1.0 - lam) * beta * beta * crra_utility(c2, params.sigma)?;
    }
    Ok(eu)
}

/// CRRA utility with its additive constant dropped: `c^(1-sigma)/(1-sigma)`.
///
/// Same maximizer as [`crra_utility`], but at high curvature the constant
/// dominates the value and eats most of the f64 mantissa, flattening the
/// objective below floating-point resolution near the optimum. The demand
/// search maximizes this representation instead.
fn shifted_crra(c: f64, sigma: f64) -> f64 {
    if sigma == 1.0 {
        c.ln()
    } else {
        let a = 1.0 - sigma;
        (a * c.ln()).exp() / a
    }
}

/// The demand search objective: expected discounted utility up to an
/// additive constant, with infeasible points mapped to negative infinity.
fn demand_objective(params: &ModelParams, asset: Asset, price: f64, risky_spend: f64) -> f64 {
    let Ok((c1, c2)) = consumption_pair(params, asset, price, risky_spend) else {
        return f64::NEG_INFINITY;
    };
    let lam = params.lambda;
    let beta = params.beta();
    let mut eu = 0.0;
    if lam > 0.0 {
        if c1 <= 0.0 {
            return f64::NEG_INFINITY;
        }
        eu += lam * beta * shifted_crra(c1, params.sigma);
    }
    if lam < 1.0 {
        if c2 <= 0.0 {
            return f64::NEG_INFINITY;
        }
        eu += (1.0 - lam) * beta * beta * shifted_crra(c2, params.sigma);
    }
    eu
}

/// Grid-maximizes expected utility over the risky spend and refines the
/// best cell by golden section.
///
/// Infeasible points count as utility negative infinity; ties break toward
/// the lower spend, so the result is deterministic regardless of
/// evaluation order.
pub fn grid_demand(
    params: &ModelParams,
    asset: Asset,
    price: f64,
    grid_points: usize,
) -> Result<f64> {
    if grid_points < 3 {
        return Err(Error::Domain(format!(
            "grid_points must be >= 3, got {grid_points}"
        )));
    }
    if price.is_nan() || price <= 0.0 {
        return Err(Error::Domain(format!(
            "price must be positive, got {price}"
        )));
    }
    let objective = |s: f64| demand_objective(params, asset, price, s);
    let s_max = params.wealth * (1.0 - 1e-9);
    let step = s_max / (grid_points - 1) as f64;
    let mut best_i = 0usize;
    let mut best = objective(0.0);
    for i in 1..grid_points {
        let v = objective(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::Domain(
            "expected utility is undefined across the whole spend grid".into(),
        ));
    }
    let lo = if best_i == 0 {
        0.0
    } else {
        (best_i - 1) as f64 * step
    };
    let hi = ((best_i + 1) as f64 * step).min(s_max);
    let (s_star, _) = golden_max(&objective, lo, hi, REFINE_WIDTH * params.wealth, 200);
    Ok(s_star)
}

/// Bisects the asset price until grid demand equals the required
/// investment to within `1e-6 * W`.
///
/// Needs strictly concave demand, so curvature must be positive: with
/// linear utility demand is set-valued at the equilibrium price and the
/// indifference slope is the testable criterion instead.
pub fn clearing_price(params: &ModelParams, asset: Asset, lo: f64, hi: f64) -> Result<f64> {
    clearing_price_with(params, asset, lo, hi, DEFAULT_GRID_POINTS)
}

/// [`clearing_price`] with an explicit demand-grid resolution.
pub fn clearing_price_with(
    params: &ModelParams,
    asset: Asset,
    mut lo: f64,
    mut hi: f64,
    grid_points: usize,
) -> Result<f64> {
    if params.sigma <= 0.0 {
        return Err(Error::Degenerate(
            "market-clearing search needs sigma > 0: linear utility makes demand set-valued",
        ));
    }
    if lo.is_nan() || hi.is_nan() || lo <= 0.0 || lo >= hi {
        return Err(Error::Domain(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let target = params.invest;
    let tol = CLEARING_TOL * params.wealth;
    let demand_lo = grid_demand(params, asset, lo, grid_points)?;
    let demand_hi = grid_demand(params, asset, hi, grid_points)?;
    if !(demand_lo > target && target > demand_hi) {
        return Err(Error::Bracket {
            lo,
            hi,
            demand_lo,
            demand_hi,
            target,
        });
    }
    for iterations in 0.. {
        let mid = 0.5 * (lo + hi);
        let demand = grid_demand(params, asset, mid, grid_points)?;
        if (demand - target).abs() <= tol {
            return Ok(mid);
        }
        if demand > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-12 * mid.max(1.0) || iterations >= 200 {
            return Err(Error::Convergence {
                iterations,
                residual: demand - target,
            });
        }
    }
    unreachable!()
}

/// Central-difference slope of expected utility in the risky spend,
/// evaluated at `risky_spend`.
///
/// At a correct risk-neutral equilibrium price this is zero: the investor
/// is indifferent across portfolios.
pub fn indifference_slope(
    params: &ModelParams,
    asset: Asset,
    price: f64,
    risky_spend: f64,
) -> Result<f64> {
    let h = 1e-6 * params.wealth;
    let up = expected_utility(params, asset, price, risky_spend + h)?;
    let down = expected_utility(params, asset, price, (risky_spend - h).max(0.0))?;
    let width = (risky_spend + h) - (risky_spend - h).max(0.0);
    Ok((up - down) / width)
}

/// A solved equilibrium of any flavor, viewed uniformly for verification.
#[derive(Debug, Clone, Copy)]
pub enum SolvedEquilibrium<'a> {
    EquityRn(&'a EquitySolution),
    TokenRn(&'a TokenSolution),
    EquityCrra(&'a CrraEquitySolution),
    TokenCrra(&'a CrraTokenSolution),
}

impl SolvedEquilibrium<'_> {
    pub fn asset(&self) -> Asset {
        match self {
            Self::EquityRn(_) | Self::EquityCrra(_) => Asset::Equity,
            Self::TokenRn(_) | Self::TokenCrra(_) => Asset::Token,
        }
    }

    pub fn price(&self) -> f64 {
        match self {
            Self::EquityRn(s) => s.q,
            Self::TokenRn(s) => s.p0,
            Self::EquityCrra(s) => s.q,
            Self::TokenCrra(s) => s.p0,
        }
    }

    fn consumption(&self) -> (f64, f64) {
        match self {
            Self::EquityRn(s) => (s.c1_type_a, s.c2_type_b),
            Self::TokenRn(s) => (s.c1_type_a, s.c2_type_b),
            Self::EquityCrra(s) => (s.c1, s.c2),
            Self::TokenCrra(s) => (s.c1, s.c2),
        }
    }

    fn curvature(&self, params: &ModelParams) -> f64 {
        match self {
            Self::EquityRn(_) | Self::TokenRn(_) => 0.0,
            Self::EquityCrra(_) | Self::TokenCrra(_) => params.sigma,
        }
    }

    fn spend(&self) -> f64 {
        match self {
            Self::EquityRn(s) => s.e * s.q,
            Self::TokenRn(s) => s.t0 * s.p0,
            Self::EquityCrra(s) => s.e * s.q,
            Self::TokenCrra(s) => s.t0 * s.p0,
        }
    }
}

/// Signed residuals of the investor first-order conditions with the budget
/// multiplier eliminated by cross-substitution.
///
/// `bond` is the wealth-allocation line priced with the multiplier implied
/// by the asset line; `asset` is the converse. They measure the same
/// stationarity in different units, so both vanish together. `budget` is
/// the plain resource identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocResiduals {
    pub bond: f64,
    pub asset: f64,
    pub budget: f64,
}

impl FocResiduals {
    pub fn max_abs(&self) -> f64 {
        self.bond.abs().max(self.asset.abs()).max(self.budget.abs())
    }
}

/// Evaluates the first-order-condition residuals of a solved equilibrium.
pub fn foc_residual(params: &ModelParams, solution: &SolvedEquilibrium) -> FocResiduals {
    let sigma = solution.curvature(params);
    let (c1, c2) = solution.consumption();
    let price = solution.price();
    let lam = params.lambda;
    let beta = params.beta();
    let marginal = |c: f64| c.powf(-sigma);
    // Marginal value of wealth routed through bonds.
    let mv_bond = lam * beta * marginal(c1) * params.r
        + (1.0 - lam) * beta * beta * marginal(c2) * params.r * params.r;
    // Marginal utility of one unit of the risky asset.
    let mv_asset = match solution.asset() {
        Asset::Equity => (1.0 - lam) * beta * beta * marginal(c2) * params.future_profit(),
        Asset::Token => {
            lam * beta * marginal(c1) * params.phi1
                + (1.0 - lam)
                    * beta
                    * beta
                    * marginal(c2)
                    * (params.phi1 * params.r + params.phi2 * (1.0 - params.phi1))
        }
    };
    FocResiduals {
        bond: mv_bond - mv_asset / price,
        asset: mv_asset - mv_bond * price,
        budget: params.invest - solution.spend(),
    }
}

/// Analytic-versus-finite-difference comparison for the risk-neutral token
/// payoff derivatives.
#[derive(Debug, Clone, Copy)]
pub struct FdReport {
    pub d_phi1_analytic: f64,
    pub d_phi1_fd: f64,
    pub d_phi2_analytic: f64,
    pub d_phi2_fd: f64,
    pub rel_gap_phi1: f64,
    pub rel_gap_phi2: f64,
}

impl FdReport {
    pub fn max_rel_gap(&self) -> f64 {
        self.rel_gap_phi1.max(self.rel_gap_phi2)
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Differentiates `f` at `x` inside `[0, 1]`, central where possible,
/// second-order one-sided hard against the boundary.
fn derivative_in_unit_interval<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, step: f64) -> Result<f64> {
    let h = step.min(0.45);
    if x - h >= 0.0 && x + h <= 1.0 {
        Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
    } else if x + 2.0 * h <= 1.0 {
        Ok((-3.0 * f(x)? + 4.0 * f(x + h)? - f(x + 2.0 * h)?) / (2.0 * h))
    } else {
        Ok((3.0 * f(x)? - 4.0 * f(x - h)? + f(x - 2.0 * h)?) / (2.0 * h))
    }
}

/// Checks the analytic payoff derivatives against finite differences of
/// the risk-neutral token payoff.
pub fn fd_derivative_check(params: &ModelParams, step: f64) -> Result<FdReport> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Domain(format!("step must be positive, got {step}")));
    }
    let (d1, d2) = payoff_derivatives_rn(params)?;
    let payoff_phi1 =
        |phi1: f64| -> Result<f64> { Ok(solve_token_rn(&ModelParams { phi1, ..*params })?.payoff) };
    let payoff_phi2 =
        |phi2: f64| -> Result<f64> { Ok(solve_token_rn(&ModelParams { phi2, ..*params })?.payoff) };
    let fd1 = derivative_in_unit_interval(&payoff_phi1, params.phi1, step)?;
    let fd2 = derivative_in_unit_interval(&payoff_phi2, params.phi2, step)?;
    Ok(FdReport {
        d_phi1_analytic: d1,
        d_phi1_fd: fd1,
        d_phi2_analytic: d2,
        d_phi2_fd: fd2,
        rel_gap_phi1: rel_gap(d1, fd1),
        rel_gap_phi2: rel_gap(d2, fd2),
    })
}

/// One solved equilibrium checked every way the oracle knows how.
#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub asset: Asset,
    pub price_tested: f64,
    /// Grid-optimal wealth allocated to the risky asset at the tested
    /// price. Only meaningful as a clearing check when curvature is
    /// positive.
    pub optimal_risky_spend: f64,
    pub clearing_gap: f64,
    /// Present only for risk-neutral solutions, where demand is flat and
    /// the slope is the testable statement.
    pub indifference_slope: Option<f64>,
    pub foc_residuals: FocResiduals,
    /// Present for token solutions.
    pub fd_report: Option<FdReport>,
}

/// Assembles the full [`OracleReport`] for a solved equilibrium.
pub fn oracle_report(
    params: &ModelParams,
    solution: &SolvedEquilibrium,
    grid_points: usize,
) -> Result<OracleReport> {
    let asset = solution.asset();
    let price = solution.price();
    let sigma = solution.curvature(params);
    let optimal_risky_spend = grid_demand(params, asset, price, grid_points)?;
    let indifference = if sigma == 0.0 {
        Some(indifference_slope(params, asset, price, params.invest)?)
    } else {
        None
    };
    let fd_report = match asset {
        Asset::Token => Some(fd_derivative_check(params, 1e-6)?),
        Asset::Equity => None,
    };
    Ok(OracleReport {
        asset,
        price_tested: price,
        optimal_risky_spend,
        clearing_gap: optimal_risky_spend - params.invest,
        indifference_slope: indifference,
        foc_residuals: foc_residual(params, solution),
        fd_report,
    })
}
