//! Curved-utility equilibria.
//!
//! With constant relative risk aversion the asset price depends on investor
//! consumption, consumption depends on the quantity issued, and the
//! quantity depends on the price, so each financing mode reduces to a
//! one-dimensional fixed point: in the share fraction `e` for equity and in
//! the launch price `p0` for tokens. The investor bond holding is pinned to
//! `W - I` by the financing budget before solving, which is what makes the
//! problem one-dimensional.
//!
//! Roots are located by scanning the residual for sign changes and
//! bisecting; plain iteration of the equity map is not a contraction at
//! high curvature (the slope approaches 1 near the financeable boundary),
//! while bisection always converges inside a sign-change cell.

use crate::closed_form::{resale_weight, solve_equity_rn, solve_token_rn, token_price_rn};
use crate::error::{Error, LegError, Result};
use crate::model::{Asset, ModelParams};
use crate::search::{bisect_root, sign_change_cells};

/// Residual scan resolution used to locate (and count) admissible roots.
const SCAN_CELLS: usize = 256;

/// Exponent magnitude beyond which the premium factor is assembled in log
/// space instead of through `powf` on the consumption ratio.
const LOG_SPACE_THRESHOLD: f64 = 200.0;

/// Tolerances and search interval for the one-dimensional solves.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointConfig {
    /// Absolute residual tolerance on the fixed-point equation.
    pub tol: f64,
    /// Iteration cap for the bisection stage.
    pub max_iter: u32,
    /// Search interval override. `None` uses `[1e-9, 1]` for the equity
    /// share and `[1e-9, 1/R + 1]` for the token price.
    pub bracket: Option<(f64, f64)>,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
            bracket: None,
        }
    }
}

impl FixedPointConfig {
    fn check(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Domain(format!("tol must be > 0, got {}", self.tol)));
        }
        if let Some((lo, hi)) = self.bracket {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return Err(Error::Domain(format!(
                    "bracket_lo must be below bracket_hi, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Convergence record attached to every fixed-point solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointDiagnostics {
    pub iterations: u32,
    /// Fixed-point residual at the returned unknown.
    pub residual: f64,
    /// Bracket actually searched.
    pub bracket: (f64, f64),
    /// More than one admissible root was found; the cheapest-financing one
    /// (smallest share / highest price) was returned.
    pub multiple_roots: bool,
}

impl FixedPointDiagnostics {
    fn exact(x: f64) -> Self {
        Self {
            iterations: 0,
            residual: 0.0,
            bracket: (x, x),
            multiple_roots: false,
        }
    }
}

/// Equity equilibrium under curved utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrraEquitySolution {
    pub q: f64,
    pub e: f64,
    /// Gross required return `Pi / q`.
    pub r_equity: f64,
    pub payoff: f64,
    pub c1: f64,
    pub c2: f64,
    /// `lambda (c2/c1)^sigma + 1 - lambda`; the markup late-consumption
    /// risk puts on the required return.
    pub risk_premium_factor: f64,
    pub diagnostics: FixedPointDiagnostics,
}

/// Token equilibrium under curved utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrraTokenSolution {
    pub p0: f64,
    pub t0: f64,
    /// Gross required return `1 / p0`.
    pub r_token: f64,
    pub payoff: f64,
    pub c1: f64,
    pub c2: f64,
    /// `c1^sigma / (lambda c2^sigma + (1-lambda) c1^sigma)`; the share of
    /// expected marginal utility earned by final-period sales.
    pub smoothing_ratio: f64,
    pub diagnostics: FixedPointDiagnostics,
}

/// Constant-relative-risk-aversion utility `(c^(1-sigma) - 1) / (1-sigma)`,
/// continued as `ln c` at `sigma = 1`.
pub fn crra_utility(c: f64, sigma: f64) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::Domain(format!(
            "consumption must be positive for CRRA utility, got {c}"
        )));
    }
    if sigma == 0.0 {
        Ok(c - 1.0)
    } else if sigma == 1.0 {
        Ok(c.ln())
    } else {
        let a = 1.0 - sigma;
        Ok((a * c.ln()).exp_m1() / a)
    }
}

/// `lambda * ratio^sigma + (1 - lambda)` with saturation instead of NaN for
/// extreme exponents.
pub(crate) fn risk_premium(lambda: f64, ratio: f64, sigma: f64) -> f64 {
    debug_assert!(ratio > 0.0);
    if lambda == 0.0 || sigma == 0.0 {
        return 1.0;
    }
    let log_pow = sigma * ratio.ln();
    let powed = if log_pow.abs() > LOG_SPACE_THRESHOLD {
        // Assemble in log space; exp saturates to 0 / +inf past f64 range,
        // which keeps the residual sign usable for bracketing.
        (lambda.ln() + log_pow).exp() / lambda
    } else {
        ratio.powf(sigma)
    };
    lambda * powed + (1.0 - lambda)
}

/// Share of expected marginal utility accruing to the late branch:
/// `1 / (lambda (c2/c1)^sigma + 1 - lambda)`.
pub(crate) fn smoothing_ratio(lambda: f64, c1: f64, c2: f64, sigma: f64) -> f64 {
    1.0 / risk_premium(lambda, c2 / c1, sigma)
}

enum RootPick {
    Smallest,
    Largest,
}

/// Locates an admissible root of `h` in `[lo, hi]`, preferring the
/// cheapest-financing one when several exist.
fn solve_bracketed<F: Fn(f64) -> f64>(
    h: &F,
    lo: f64,
    hi: f64,
    pick: RootPick,
    cfg: &FixedPointConfig,
    what: &str,
) -> Result<(f64, FixedPointDiagnostics)> {
    let mut cells = sign_change_cells(h, lo, hi, SCAN_CELLS);
    if cells.is_empty() {
        // Near the financeable boundary a root pair can hide inside one
        // coarse cell; rescan finer before giving up.
        cells = sign_change_cells(h, lo, hi, 32 * SCAN_CELLS);
    }
    if cells.is_empty() {
        return Err(Error::NoEquilibrium(format!(
            "{what}: residual has no sign change on [{lo}, {hi}]"
        )));
    }
    let multiple_roots = cells.len() > 1;
    let (cell_lo, cell_hi) = match pick {
        RootPick::Smallest => cells[0],
        RootPick::Largest => *cells.last().unwrap(),
    };
    let root = if cell_lo == cell_hi {
        crate::search::RootResult {
            x: cell_lo,
            residual: 0.0,
            iterations: 0,
        }
    } else {
        bisect_root(h, cell_lo, cell_hi, cfg.tol, cfg.max_iter).map_err(|last| {
            Error::Convergence {
                iterations: last.iterations,
                residual: last.residual,
            }
        })?
    };
    Ok((
        root.x,
        FixedPointDiagnostics {
            iterations: root.iterations,
            residual: root.residual,
            bracket: (lo, hi),
            multiple_roots,
        },
    ))
}

/// Solves the equity equilibrium under curved utility.
///
/// The unknown is the share fraction `e` solving
/// `e = I R^2 * [lambda ((B0 R^2 + e Pi)/(B0 R))^sigma + 1-lambda] / ((1-lambda) Pi)`
/// with `B0 = W - I`. Only roots in `(0, 1]` are admissible; when two
/// exist, the smaller share (higher price, cheaper financing) is returned
/// and flagged in the diagnostics.
pub fn solve_equity_crra(
    params: &ModelParams,
    cfg: &FixedPointConfig,
) -> Result<CrraEquitySolution> {
    cfg.check()?;
    if params.lambda >= 1.0 {
        return Err(Error::Degenerate(
            "lambda = 1 leaves no late consumers to hold equity",
        ));
    }
    if params.sigma == 0.0 {
        let rn = solve_equity_rn(params)?;
        return Ok(CrraEquitySolution {
            q: rn.q,
            e: rn.e,
            r_equity: rn.r_equity,
            payoff: rn.payoff,
            c1: rn.c1_type_a,
            c2: rn.c2_type_b,
            risk_premium_factor: 1.0,
            diagnostics: FixedPointDiagnostics::exact(rn.e),
        });
    }
    let pi = params.future_profit();
    if pi <= 0.0 {
        return Err(Error::NoEquilibrium(format!(
            "equity requires positive future profit, got {pi}"
        )));
    }
    let r2 = params.r * params.r;
    let b0 = params.bond_holding();
    let c1 = b0 * params.r;
    let scale = params.invest * r2 / ((1.0 - params.lambda) * pi);
    let premium_at = |e: f64| {
        let c2 = b0 * r2 + e * pi;
        risk_premium(params.lambda, c2 / c1, params.sigma)
    };
    let (lo, hi) = cfg.bracket.unwrap_or((1e-9, 1.0));
    let (e, diagnostics) = if params.lambda == 0.0 {
        // The premium is identically 1: the map is constant.
        let e = scale;
        if !(lo..=hi).contains(&e) {
            return Err(Error::NoEquilibrium(format!(
                "equity share {e:.6} falls outside ({lo}, {hi}]"
            )));
        }
        (e, FixedPointDiagnostics::exact(e))
    } else {
        let h = |e: f64| e - scale * premium_at(e);
        solve_bracketed(&h, lo, hi, RootPick::Smallest, cfg, "equity share")?
    };
    let q = params.invest / e;
    let c2 = b0 * r2 + e * pi;
    let risk_premium_factor = premium_at(e);
    let payoff = pi - params.invest * r2 / (1.0 - params.lambda) * risk_premium_factor;
    debug_assert!((payoff - (1.0 - e) * pi).abs() <= 1e-8 * pi.abs().max(1.0));
    Ok(CrraEquitySolution {
        q,
        e,
        r_equity: pi / q,
        payoff,
        c1,
        c2,
        risk_premium_factor,
        diagnostics,
    })
}

/// Solves the token equilibrium under curved utility.
///
/// The unknown is the launch price solving
/// `p0 = phi1/R + ((1-lambda) phi2 (1-phi1) / R^2) * c1^sigma / (lambda c2^sigma + (1-lambda) c1^sigma)`
/// with `c1 = (W-I) R + phi1 I/p0` and `c2 = c1 R + phi2 (1-phi1) I/p0`.
/// When several roots exist the highest price (fewest tokens sold, cheapest
/// financing) is returned and flagged.
pub fn solve_token_crra(params: &ModelParams, cfg: &FixedPointConfig) -> Result<CrraTokenSolution> {
    cfg.check()?;
    if token_price_rn(params) <= 0.0 {
        return Err(Error::IlliquidToken);
    }
    if params.sigma == 0.0 {
        let rn = solve_token_rn(params)?;
        return Ok(CrraTokenSolution {
            p0: rn.p0,
            t0: rn.t0,
            r_token: rn.r_token,
            payoff: rn.payoff,
            c1: rn.c1_type_a,
            c2: rn.c2_type_b,
            smoothing_ratio: 1.0,
            diagnostics: FixedPointDiagnostics::exact(rn.p0),
        });
    }
    let r = params.r;
    let b0 = params.bond_holding();
    let late_value = (1.0 - params.lambda) * params.phi2 * (1.0 - params.phi1) / (r * r);
    let consumption_at = |p0: f64| {
        let t0 = params.invest / p0;
        let c1 = b0 * r + params.phi1 * t0;
        let c2 = c1 * r + params.phi2 * (1.0 - params.phi1) * t0;
        (c1, c2)
    };
    let (lo, hi) = cfg.bracket.unwrap_or((1e-9, 1.0 / r + 1.0));
    let (p0, diagnostics) = if late_value == 0.0 {
        // No curved term left: the price is the discounted middle-period
        // resale value exactly.
        let p0 = params.phi1 / r;
        (p0, FixedPointDiagnostics::exact(p0))
    } else {
        let h = |p0: f64| {
            let (c1, c2) = consumption_at(p0);
            p0 - (params.phi1 / r
                + late_value * smoothing_ratio(params.lambda, c1, c2, params.sigma))
        };
        solve_bracketed(&h, lo, hi, RootPick::Largest, cfg, "token price")?
    };
    let t0 = params.invest / p0;
    let (c1, c2) = consumption_at(p0);
    let pi = params.future_profit();
    let payoff = pi - resale_weight(params) * t0;
    Ok(CrraTokenSolution {
        p0,
        t0,
        r_token: 1.0 / p0,
        payoff,
        c1,
        c2,
        smoothing_ratio: smoothing_ratio(params.lambda, c1, c2, params.sigma),
        diagnostics,
    })
}

/// Both entrepreneur payoffs at one parameter point, `(equity, token)`.
///
/// Dispatches to the risk-neutral closed forms at `sigma = 0`. A failed
/// solve is reported with the leg it occurred on.
pub fn payoff_pair(
    params: &ModelParams,
    cfg: &FixedPointConfig,
) -> std::result::Result<(f64, f64), LegError> {
    let equity = solve_equity_crra(params, cfg).map_err(|source| LegError {
        asset: Asset::Equity,
        source,
    })?;
    let token = solve_token_crra(params, cfg).map_err(|source| LegError {
        asset: Asset::Token,
        source,
    })?;
    Ok((equity.payoff, token.payoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn defaults_with_sigma(sigma: f64) -> ModelParams {
        ModelParams {
            sigma,
            ..ModelParams::default()
        }
    }

    fn cfg() -> FixedPointConfig {
        FixedPointConfig::default()
    }

    #[test]
    fn utility_examples() {
        for sigma in [0.0, 0.5, 1.0, 2.0, 7.3] {
            assert_eq!(crra_utility(1.0, sigma).unwrap(), 0.0);
        }
        assert_relative_eq!(crra_utility(3.0, 0.0).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(crra_utility(2.0, 2.0).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(
            crra_utility(2.0, 1.0).unwrap(),
            2f64.ln(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn utility_rejects_nonpositive_consumption() {
        assert!(crra_utility(0.0, 2.0).is_err());
        assert!(crra_utility(-1.0, 0.5).is_err());
    }

    #[test]
    fn utility_is_continuous_at_log_curvature() {
        let c = 2.7;
        let at_one = crra_utility(c, 1.0).unwrap();
        for sigma in [1.0 - 1e-9, 1.0 + 1e-9] {
            assert_relative_eq!(crra_utility(c, sigma).unwrap(), at_one, max_relative = 1e-8);
        }
    }

    /// Independent route to the equity share at quadratic curvature: with
    /// `sigma = 2` the fixed-point condition is a quadratic in `e`, solved
    /// here in closed form.
    fn equity_share_quadratic_oracle(params: &ModelParams) -> f64 {
        assert_eq!(params.sigma, 2.0);
        let pi = params.future_profit();
        let r2 = params.r * params.r;
        let b0 = params.bond_holding();
        let c1 = b0 * params.r;
        let k = params.invest * r2 * params.lambda / (c1 * c1);
        let a = k * pi * pi;
        let b = 2.0 * k * (b0 * r2) * pi - (1.0 - params.lambda) * pi;
        let c = k * (b0 * r2) * (b0 * r2) + params.invest * r2 * (1.0 - params.lambda);
        let disc = b * b - 4.0 * a * c;
        assert!(disc > 0.0, "no real equity share");
        let lo = (-b - disc.sqrt()) / (2.0 * a);
        let hi = (-b + disc.sqrt()) / (2.0 * a);
        assert!(lo > 0.0 && lo <= 1.0);
        assert!(hi > 1.0, "second root should be inadmissible here");
        lo
    }

    #[test]
    fn equity_quadratic_curvature_matches_independent_quadratic() {
        let p = defaults_with_sigma(2.0);
        let s = solve_equity_crra(&p, &cfg()).unwrap();
        let e_oracle = equity_share_quadratic_oracle(&p);
        assert_relative_eq!(s.e, e_oracle, max_relative = 1e-9);
        assert_relative_eq!(s.e, 0.8417999685768618, max_relative = 1e-9);
        assert_relative_eq!(s.q, 5.939653345975942, max_relative = 1e-9);
        assert_relative_eq!(s.r_equity, 2.7611038969321067, max_relative = 1e-9);
        assert_relative_eq!(s.payoff, 2.5944805153394666, max_relative = 1e-8);
        // Loose agreement with the documented approximations.
        assert!((s.e - 0.84182).abs() < 1e-3);
        assert!((s.q - 5.93951).abs() < 1e-2);
        assert!((s.payoff - 2.5942).abs() < 1e-3);
        assert!(!s.diagnostics.multiple_roots);
        assert!(s.diagnostics.residual.abs() <= 1e-12);
    }

    #[test]
    fn equity_solution_satisfies_its_own_equation() {
        let p = defaults_with_sigma(2.0);
        let s = solve_equity_crra(&p, &cfg()).unwrap();
        let pi = p.future_profit();
        let expected_q =
            (1.0 - p.lambda) * pi / (p.r * p.r * risk_premium(p.lambda, s.c2 / s.c1, p.sigma));
        assert_relative_eq!(s.q, expected_q, max_relative = 1e-10);
        assert!((s.e * s.q - p.invest).abs() <= 4.0 * f64::EPSILON * p.invest);
    }

    #[test]
    fn equity_dispatches_to_closed_form_at_zero_curvature() {
        let p = defaults_with_sigma(0.0);
        let s = solve_equity_crra(&p, &cfg()).unwrap();
        let rn = solve_equity_rn(&p).unwrap();
        assert_eq!(s.q, rn.q);
        assert_eq!(s.e, rn.e);
        assert_eq!(s.payoff, rn.payoff);
        assert_eq!(s.risk_premium_factor, 1.0);
        assert_eq!(s.diagnostics.iterations, 0);
    }

    #[test]
    fn equity_without_liquidity_risk_keeps_risk_neutral_price() {
        let p = ModelParams {
            lambda: 0.0,
            sigma: 2.0,
            ..ModelParams::default()
        };
        let s = solve_equity_crra(&p, &cfg()).unwrap();
        let pi = p.future_profit();
        assert_relative_eq!(s.q, pi / (p.r * p.r), max_relative = 1e-14);
        assert_eq!(s.risk_premium_factor, 1.0);
    }

    #[test]
    fn equity_has_no_equilibrium_at_high_curvature_and_thin_wealth() {
        // At the default point the financeable window closes just above
        // sigma = 2; sigma = 4 is far past it.
        let p = defaults_with_sigma(4.0);
        assert!(matches!(
            solve_equity_crra(&p, &cfg()),
            Err(Error::NoEquilibrium(_))
        ));
    }

    #[test]
    fn equity_finances_at_high_curvature_with_deep_wealth() {
        let p = ModelParams {
            sigma: 4.0,
            wealth: 50.0,
            ..ModelParams::default()
        };
        let s = solve_equity_crra(&p, &cfg()).unwrap();
        assert!(s.e > 0.0 && s.e <= 1.0);
        assert!(s.diagnostics.residual.abs() <= 1e-12);
    }

    #[test]
    fn token_quadratic_curvature_matches_damped_iteration() {
        let p = defaults_with_sigma(2.0);
        let s = solve_token_crra(&p, &cfg()).unwrap();
        // Independent route: damped fixed-point iteration from the
        // risk-neutral price.
        let b0 = p.bond_holding();
        let late_value = (1.0 - p.lambda) * p.phi2 * (1.0 - p.phi1) / (p.r * p.r);
        let mut x = token_price_rn(&p);
        for _ in 0..500 {
            let t0 = p.invest / x;
            let c1 = b0 * p.r + p.phi1 * t0;
            let c2 = c1 * p.r + p.phi2 * (1.0 - p.phi1) * t0;
            let g = p.phi1 / p.r + late_value * smoothing_ratio(p.lambda, c1, c2, p.sigma);
            x = 0.5 * x + 0.5 * g;
        }
        assert_relative_eq!(s.p0, x, max_relative = 1e-10);
        assert!((s.p0 - 0.847681).abs() < 1e-4);
        assert!((s.t0 - 5.89845).abs() < 1e-3);
        assert!((s.payoff - 10.3541).abs() < 1e-3);
        assert!(s.diagnostics.residual.abs() <= 1e-12);
    }

    #[test]
    fn token_solution_satisfies_its_own_equation() {
        let p = defaults_with_sigma(2.0);
        let s = solve_token_crra(&p, &cfg()).unwrap();
        let late_value = (1.0 - p.lambda) * p.phi2 * (1.0 - p.phi1) / (p.r * p.r);
        let expected = p.phi1 / p.r + late_value * s.smoothing_ratio;
        assert_relative_eq!(s.p0, expected, max_relative = 1e-10);
        assert!((s.p0 * s.t0 - p.invest).abs() <= 4.0 * f64::EPSILON * p.invest);
    }

    #[test]
    fn token_dispatches_to_closed_form_at_zero_curvature() {
        let p = defaults_with_sigma(0.0);
        let s = solve_token_crra(&p, &cfg()).unwrap();
        let rn = solve_token_rn(&p).unwrap();
        assert_eq!(s.p0, rn.p0);
        assert_eq!(s.t0, rn.t0);
        assert_eq!(s.payoff, rn.payoff);
        assert_eq!(s.smoothing_ratio, 1.0);
    }

    #[test]
    fn fully_liquid_token_price_is_exact_at_any_curvature() {
        for sigma in [0.5, 2.0, 7.0] {
            let p = ModelParams {
                phi1: 1.0,
                sigma,
                ..ModelParams::default()
            };
            let s = solve_token_crra(&p, &cfg()).unwrap();
            assert_eq!(s.p0, p.phi1 / p.r);
            assert_eq!(s.diagnostics.iterations, 0);
        }
    }

    #[test]
    fn equity_like_token_picks_the_cheap_financing_root() {
        // With no middle-period resales the token problem mirrors equity
        // and carries two admissible price roots; the higher price (fewer
        // tokens sold) must be returned and flagged.
        let p = ModelParams {
            phi1: 0.0,
            phi2: 1.0,
            sigma: 2.0,
            ..ModelParams::default()
        };
        let s = solve_token_crra(&p, &cfg()).unwrap();
        assert!(s.diagnostics.multiple_roots);
        let eq = solve_equity_crra(&p, &cfg()).unwrap();
        // Same equilibrium through the equity lens: t0 tokens play the role
        // of the dividend claim e * Pi.
        let implied_price = p.invest / (eq.e * p.future_profit());
        assert_relative_eq!(s.p0, implied_price, max_relative = 1e-8);
        assert_relative_eq!(s.payoff, eq.payoff, max_relative = 1e-7);
    }

    #[test]
    fn near_zero_curvature_matches_risk_neutral_closely() {
        let p = defaults_with_sigma(1e-8);
        let eq = solve_equity_crra(&p, &cfg()).unwrap();
        let tok = solve_token_crra(&p, &cfg()).unwrap();
        let eq_rn = solve_equity_rn(&p).unwrap();
        let tok_rn = solve_token_rn(&p).unwrap();
        assert_relative_eq!(eq.q, eq_rn.q, max_relative = 1e-6);
        assert_relative_eq!(eq.payoff, eq_rn.payoff, max_relative = 1e-6);
        assert_relative_eq!(tok.p0, tok_rn.p0, max_relative = 1e-6);
        assert_relative_eq!(tok.payoff, tok_rn.payoff, max_relative = 1e-6);
    }

    #[test]
    fn curved_prices_never_exceed_risk_neutral_prices() {
        for sigma in [0.25, 0.5, 1.0, 2.0] {
            let p = defaults_with_sigma(sigma);
            let eq = solve_equity_crra(&p, &cfg()).unwrap();
            let tok = solve_token_crra(&p, &cfg()).unwrap();
            assert!(
                eq.q <= solve_equity_rn(&p).unwrap().q + 1e-12,
                "sigma = {sigma}"
            );
            assert!(
                tok.p0 <= solve_token_rn(&p).unwrap().p0 + 1e-12,
                "sigma = {sigma}"
            );
        }
    }

    #[test]
    fn payoff_pair_reports_the_failing_leg() {
        let p = defaults_with_sigma(2.0);
        let (equity, token) = payoff_pair(&p, &cfg()).unwrap();
        assert!((equity - 2.5944).abs() < 1e-3);
        assert!((token - 10.3541).abs() < 1e-3);
        assert!(token >= equity);

        let rn = defaults_with_sigma(0.0);
        let (equity, token) = payoff_pair(&rn, &cfg()).unwrap();
        assert_relative_eq!(equity, 10.275, max_relative = 1e-12);
        assert_relative_eq!(token, 10.604807692307692, max_relative = 1e-12);

        let err = payoff_pair(&defaults_with_sigma(4.0), &cfg()).unwrap_err();
        assert_eq!(err.asset, Asset::Equity);
        assert!(matches!(err.source, Error::NoEquilibrium(_)));
    }

    #[test]
    fn premium_factor_survives_extreme_exponents() {
        let f = risk_premium(0.1, 4.0, 600.0);
        assert!(f.is_infinite() && f > 0.0);
        assert_eq!(risk_premium(0.0, 4.0, 600.0), 1.0);
        // Log-space branch agrees with powf where both are in range.
        let direct = 0.1 * 3.0f64.powf(190.0) + 0.9;
        let via_log = risk_premium(0.1, 3.0, 190.0);
        assert_relative_eq!(via_log, direct, max_relative = 1e-12);
    }

    #[test]
    fn bad_config_is_rejected() {
        let p = defaults_with_sigma(2.0);
        let bad_tol = FixedPointConfig { tol: 0.0, ..cfg() };
        assert!(solve_equity_crra(&p, &bad_tol).is_err());
        let bad_bracket = FixedPointConfig {
            bracket: Some((1.0, 0.5)),
            ..cfg()
        };
        assert!(solve_token_crra(&p, &bad_bracket).is_err());
    }
}
