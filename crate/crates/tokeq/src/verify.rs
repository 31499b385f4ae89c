//! End-to-end verification suite behind the `verify` subcommand.
//!
//! Every check pins its tolerance in code and reports one pass/fail line;
//! the CLI exits nonzero if any check fails. The market-clearing checks
//! drive the brute-force oracle against the fixed-point solvers over a
//! grid of liquidity, risk, and curvature settings, with price brackets
//! derived from a-priori bounds rather than from the solver output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::closed_form::{
    bond_benchmark, payoff_derivatives_rn, solve_equity_rn, solve_token_rn, token_price_rn,
};
use crate::crra::{risk_premium, solve_equity_crra, solve_token_crra, FixedPointConfig};
use crate::model::{Asset, ModelParams};
use crate::oracle::{
    clearing_price_with, expected_utility, fd_derivative_check, foc_residual, indifference_slope,
    SolvedEquilibrium, DEFAULT_GRID_POINTS,
};
use crate::sweep::{figure_data, GridSpec, SweepParam};

/// Outcome of one verification check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

fn defaults() -> ModelParams {
    ModelParams::default()
}

/// Closed-form reproduction at the stock parameter point, 1e-4 absolute.
pub fn check_closed_form_defaults() -> CheckResult {
    const NAME: &str = "closed-form-at-default-point";
    const TOL: f64 = 1e-4;
    let p = defaults();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    match (solve_equity_rn(&p), solve_token_rn(&p)) {
        (Ok(eq), Ok(tok)) => {
            for (label, got, want) in [
                ("q", eq.q, 13.387755),
                ("R^E", eq.r_equity, 1.225),
                ("equity payoff", eq.payoff, 10.2750),
                ("p0", tok.p0, 0.884354),
                ("R^T", tok.r_token, 1.130769),
                ("token payoff", tok.payoff, 10.60481),
            ] {
                let gap = (got - want).abs();
                if gap > worst {
                    worst = gap;
                    detail = format!("worst |{label} - {want}| = {gap:.2e}");
                }
            }
            CheckResult::new(NAME, worst <= TOL, format!("{detail} (tol {TOL:.0e})"))
        }
        other => CheckResult::new(NAME, false, format!("solver failed: {other:?}")),
    }
}

/// Draws a random parameter point with financeable equity, positive middle
/// liquidity, and interior early-consumption probability.
fn random_financeable_point(rng: &mut impl Rng) -> ModelParams {
    loop {
        let r = rng.gen_range(1.0..1.2);
        let lambda = rng.gen_range(0.01..0.95);
        let phi1 = rng.gen_range(0.01..=1.0);
        let phi2 = rng.gen_range(0.0..=1.0);
        let y1: f64 = rng.gen_range(1.0..20.0);
        let y2: f64 = rng.gen_range(1.0..20.0);
        let omega = rng.gen_range(0.0..0.5) * y1.min(y2);
        let pi = (y1 - omega) * r + y2 - omega;
        let invest = rng.gen_range(0.05..0.95) * (1.0 - lambda) * pi / (r * r);
        let wealth = invest + rng.gen_range(0.1..20.0);
        let p = ModelParams {
            r,
            lambda,
            phi1,
            phi2,
            y1,
            y2,
            omega,
            invest,
            wealth,
            sigma: 0.0,
        };
        if p.validate().is_ok() {
            return p;
        }
    }
}

/// Token payoff strictly exceeds equity payoff on randomized valid draws.
pub fn check_token_dominance(draws: usize) -> CheckResult {
    const NAME: &str = "token-dominance-randomized";
    let mut rng = ChaCha8Rng::seed_from_u64(0x746f_6b65_7176_6571);
    let mut min_gap = f64::INFINITY;
    for i in 0..draws {
        let p = random_financeable_point(&mut rng);
        let eq = match solve_equity_rn(&p) {
            Ok(s) => s,
            Err(e) => {
                return CheckResult::new(
                    NAME,
                    false,
                    format!("draw {i}: equity unexpectedly failed: {e} ({p:?})"),
                )
            }
        };
        let tok = match solve_token_rn(&p) {
            Ok(s) => s,
            Err(e) => {
                return CheckResult::new(
                    NAME,
                    false,
                    format!("draw {i}: token unexpectedly failed: {e} ({p:?})"),
                )
            }
        };
        let gap = tok.payoff - eq.payoff;
        if gap <= 0.0 {
            return CheckResult::new(
                NAME,
                false,
                format!("draw {i}: token does not dominate, gap = {gap:e} at {p:?}"),
            );
        }
        min_gap = min_gap.min(gap);
    }
    CheckResult::new(
        NAME,
        true,
        format!("{draws} draws, smallest token lead {min_gap:.3e}"),
    )
}

/// The two limiting identities: late-only tokens equal equity, fully
/// liquid tokens equal the risk-free benchmark, both to 1e-12 absolute.
pub fn check_limit_identities() -> CheckResult {
    const NAME: &str = "equity-and-bond-limit-identities";
    const TOL: f64 = 1e-12;
    let mut worst: f64 = 0.0;
    for lambda in [0.05, 0.1, 0.3, 0.6] {
        let base = ModelParams {
            lambda,
            ..defaults()
        };
        let late_only = ModelParams {
            phi1: 0.0,
            phi2: 1.0,
            ..base
        };
        let (eq, tok) = match (solve_equity_rn(&late_only), solve_token_rn(&late_only)) {
            (Ok(e), Ok(t)) => (e, t),
            other => return CheckResult::new(NAME, false, format!("solve failed: {other:?}")),
        };
        worst = worst.max((tok.payoff - eq.payoff).abs());
        worst = worst.max((tok.r_token - eq.r_equity).abs());
        let liquid = ModelParams { phi1: 1.0, ..base };
        let tok = match solve_token_rn(&liquid) {
            Ok(t) => t,
            Err(e) => return CheckResult::new(NAME, false, format!("solve failed: {e}")),
        };
        worst = worst.max((tok.payoff - bond_benchmark(&liquid)).abs());
        worst = worst.max((tok.r_token - liquid.r).abs());
    }
    CheckResult::new(
        NAME,
        worst <= TOL,
        format!("worst identity gap {worst:.2e} (tol {TOL:.0e})"),
    )
}

/// Analytic payoff derivatives: correct signs and agreement with central
/// finite differences to 1e-6 relative over a 20x20 interior grid.
pub fn check_derivative_grid() -> CheckResult {
    const NAME: &str = "issuance-payoff-derivatives";
    const TOL: f64 = 1e-6;
    let base = defaults();
    let mut worst_gap: f64 = 0.0;
    for i in 1..=20 {
        for j in 1..=20 {
            let p = ModelParams {
                phi1: i as f64 / 21.0,
                phi2: j as f64 / 21.0,
                ..base
            };
            let (d1, d2) = match payoff_derivatives_rn(&p) {
                Ok(d) => d,
                Err(e) => return CheckResult::new(NAME, false, format!("analytic failed: {e}")),
            };
            if d1 < 0.0 || d2 > 0.0 {
                return CheckResult::new(
                    NAME,
                    false,
                    format!(
                        "sign violation at phi1={}, phi2={}: ({d1}, {d2})",
                        p.phi1, p.phi2
                    ),
                );
            }
            let report = match fd_derivative_check(&p, 1e-6) {
                Ok(r) => r,
                Err(e) => return CheckResult::new(NAME, false, format!("fd failed: {e}")),
            };
            worst_gap = worst_gap.max(report.max_rel_gap());
        }
    }
    CheckResult::new(
        NAME,
        worst_gap <= TOL,
        format!("400 interior points, worst relative gap {worst_gap:.2e} (tol {TOL:.0e})"),
    )
}

/// Vanishing curvature: both fixed-point solvers land on the closed forms
/// within 1e-6 relative at sigma = 1e-8.
pub fn check_crra_continuity() -> CheckResult {
    const NAME: &str = "curvature-to-risk-neutral-continuity";
    const TOL: f64 = 1e-6;
    let p = ModelParams {
        sigma: 1e-8,
        ..defaults()
    };
    let cfg = FixedPointConfig::default();
    let mut worst: f64 = 0.0;
    match (
        solve_equity_crra(&p, &cfg),
        solve_token_crra(&p, &cfg),
        solve_equity_rn(&p),
        solve_token_rn(&p),
    ) {
        (Ok(eq), Ok(tok), Ok(eq_rn), Ok(tok_rn)) => {
            for (got, want) in [
                (eq.q, eq_rn.q),
                (eq.payoff, eq_rn.payoff),
                (tok.p0, tok_rn.p0),
                (tok.payoff, tok_rn.payoff),
            ] {
                worst = worst.max((got - want).abs() / want.abs());
            }
            CheckResult::new(
                NAME,
                worst <= TOL,
                format!("worst relative gap {worst:.2e} (tol {TOL:.0e})"),
            )
        }
        other => CheckResult::new(NAME, false, format!("solve failed: {other:?}")),
    }
}

/// One curved verification point: how to reach it and where to bracket the
/// oracle's price search.
struct GridPoint {
    params: ModelParams,
    asset: Asset,
    bracket: (f64, f64),
}

/// A-priori equity price bracket: the price cannot exceed the risk-neutral
/// level and cannot fall below the level at which the whole share sells.
fn equity_bracket(p: &ModelParams) -> (f64, f64) {
    let pi = p.future_profit();
    let q_n = (1.0 - p.lambda) * pi / (p.r * p.r);
    let c1 = p.bond_holding() * p.r;
    let c2_full = p.bond_holding() * p.r * p.r + pi;
    let premium_full = risk_premium(p.lambda, c2_full / c1, p.sigma);
    (q_n / premium_full, q_n * 1.000001)
}

/// A-priori token price bracket from the bounds of the smoothing ratio.
fn token_bracket(p: &ModelParams) -> (f64, f64) {
    let p_n = token_price_rn(p);
    let late_value = (1.0 - p.lambda) * p.phi2 * (1.0 - p.phi1) / (p.r * p.r);
    // Worst consumption tilt as the price goes to zero.
    let ratio_max = p.r + p.phi2 * (1.0 - p.phi1) / p.phi1;
    let smoothing_min = 1.0 / risk_premium(p.lambda, ratio_max, p.sigma);
    let lo = (p.phi1 / p.r + late_value * smoothing_min) * 0.999999;
    (lo, p_n * 1.000001)
}

fn verification_grid() -> Vec<GridPoint> {
    let mut points = Vec::new();
    // Equity legs: independent of the liquidity parameters. High curvature
    // needs deeper wealth to be financeable at all.
    for sigma in [0.5, 1.0, 2.0] {
        for lambda in [0.05, 0.1] {
            let params = ModelParams {
                lambda,
                sigma,
                ..defaults()
            };
            points.push(GridPoint {
                bracket: equity_bracket(&params),
                params,
                asset: Asset::Equity,
            });
        }
    }
    for lambda in [0.05, 0.1] {
        let params = ModelParams {
            lambda,
            sigma: 4.0,
            wealth: 50.0,
            ..defaults()
        };
        points.push(GridPoint {
            bracket: equity_bracket(&params),
            params,
            asset: Asset::Equity,
        });
    }
    // Token legs: interior middle-period liquidity keeps demand strictly
    // concave at the clearing price.
    for sigma in [0.5, 1.0, 2.0, 4.0] {
        for lambda in [0.05, 0.1, 0.3] {
            for phi1 in [0.25, 0.5, 0.75] {
                for phi2 in [0.5, 1.0] {
                    let params = ModelParams {
                        lambda,
                        phi1,
                        phi2,
                        sigma,
                        ..defaults()
                    };
                    points.push(GridPoint {
                        bracket: token_bracket(&params),
                        params,
                        asset: Asset::Token,
                    });
                }
            }
        }
    }
    points
}

/// Runs the solver-versus-oracle grid. Returns the market-clearing check
/// (1e-3 relative price agreement, 1e-8 first-order conditions) and the
/// price-dominance check (curved prices never above risk-neutral ones).
pub fn check_crra_oracle_grid(grid_points: usize) -> (CheckResult, CheckResult) {
    const NAME_CLEAR: &str = "solver-vs-oracle-market-clearing";
    const NAME_DOM: &str = "curved-price-dominance";
    const PRICE_TOL: f64 = 1e-3;
    const FOC_TOL: f64 = 1e-8;
    let cfg = FixedPointConfig::default();
    let mut worst_price: f64 = 0.0;
    let mut worst_foc: f64 = 0.0;
    let mut worst_dominance: f64 = f64::NEG_INFINITY;
    let mut count = 0usize;
    for point in verification_grid() {
        let p = &point.params;
        count += 1;
        let (solver_price, foc, rn_price) = match point.asset {
            Asset::Equity => {
                let s = match solve_equity_crra(p, &cfg) {
                    Ok(s) => s,
                    Err(e) => {
                        return (
                            CheckResult::new(
                                NAME_CLEAR,
                                false,
                                format!("equity solve failed: {e} at {p:?}"),
                            ),
                            CheckResult::new(NAME_DOM, false, "aborted".into()),
                        )
                    }
                };
                let rn = solve_equity_rn(p).map(|s| s.q).unwrap_or(f64::INFINITY);
                (s.q, foc_residual(p, &SolvedEquilibrium::EquityCrra(&s)), rn)
            }
            Asset::Token => {
                let s = match solve_token_crra(p, &cfg) {
                    Ok(s) => s,
                    Err(e) => {
                        return (
                            CheckResult::new(
                                NAME_CLEAR,
                                false,
                                format!("token solve failed: {e} at {p:?}"),
                            ),
                            CheckResult::new(NAME_DOM, false, "aborted".into()),
                        )
                    }
                };
                let rn = solve_token_rn(p).map(|s| s.p0).unwrap_or(f64::INFINITY);
                (s.p0, foc_residual(p, &SolvedEquilibrium::TokenCrra(&s)), rn)
            }
        };
        worst_foc = worst_foc.max(foc.max_abs());
        worst_dominance = worst_dominance.max(solver_price - rn_price);
        let oracle_price = match clearing_price_with(
            p,
            point.asset,
            point.bracket.0,
            point.bracket.1,
            grid_points,
        ) {
            Ok(price) => price,
            Err(e) => {
                return (
                    CheckResult::new(
                        NAME_CLEAR,
                        false,
                        format!("oracle failed on {} at {p:?}: {e}", point.asset),
                    ),
                    CheckResult::new(NAME_DOM, false, "aborted".into()),
                )
            }
        };
        worst_price = worst_price.max((oracle_price - solver_price).abs() / solver_price);
    }
    (
        CheckResult::new(
            NAME_CLEAR,
            worst_price <= PRICE_TOL && worst_foc <= FOC_TOL,
            format!(
                "{count} points: worst price gap {worst_price:.2e} (tol {PRICE_TOL:.0e}), worst FOC {worst_foc:.2e} (tol {FOC_TOL:.0e})"
            ),
        ),
        CheckResult::new(
            NAME_DOM,
            worst_dominance <= 1e-12,
            format!("max (curved - risk-neutral) price = {worst_dominance:.2e} over {count} points"),
        ),
    )
}

/// Risk-neutral investors are indifferent at the closed-form prices: flat
/// expected utility across the spend grid and a vanishing slope.
pub fn check_rn_indifference() -> CheckResult {
    const NAME: &str = "risk-neutral-indifference";
    const FLAT_TOL: f64 = 1e-9;
    const SLOPE_TOL: f64 = 1e-8;
    let p = defaults();
    let mut worst_spread: f64 = 0.0;
    let mut worst_slope: f64 = 0.0;
    for (asset, price) in [
        (Asset::Equity, solve_equity_rn(&p).unwrap().q),
        (Asset::Token, solve_token_rn(&p).unwrap().p0),
    ] {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=100 {
            let s = p.wealth * 0.999 * i as f64 / 100.0;
            let eu = match expected_utility(&p, asset, price, s) {
                Ok(v) => v,
                Err(e) => return CheckResult::new(NAME, false, format!("utility failed: {e}")),
            };
            lo = lo.min(eu);
            hi = hi.max(eu);
        }
        worst_spread = worst_spread.max(hi - lo);
        match indifference_slope(&p, asset, price, p.invest) {
            Ok(s) => worst_slope = worst_slope.max(s.abs()),
            Err(e) => return CheckResult::new(NAME, false, format!("slope failed: {e}")),
        }
    }
    CheckResult::new(
        NAME,
        worst_spread <= FLAT_TOL && worst_slope <= SLOPE_TOL,
        format!(
            "utility spread {worst_spread:.2e} (tol {FLAT_TOL:.0e}), slope {worst_slope:.2e} (tol {SLOPE_TOL:.0e})"
        ),
    )
}

/// Payoff-versus-curvature shape at the figure's parameter point: both
/// curves fall, the token curve stays on top, equity falls further, and
/// the two spot values match their references to 1e-3.
pub fn check_figure_shape() -> CheckResult {
    const NAME: &str = "risk-aversion-payoff-decline";
    const SPOT_TOL: f64 = 1e-3;
    let grid = match GridSpec::new(SweepParam::Sigma, 0.0, 5.0, 21) {
        Ok(g) => g,
        Err(e) => return CheckResult::new(NAME, false, format!("grid: {e}")),
    };
    let rows = match figure_data(&defaults(), &grid, &FixedPointConfig::default()) {
        Ok(r) => r,
        Err(e) => return CheckResult::new(NAME, false, format!("sweep: {e}")),
    };
    if rows.len() != 21 {
        return CheckResult::new(NAME, false, format!("expected 21 rows, got {}", rows.len()));
    }
    let token: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.token.map(|l| (r.grid_value, l.payoff)))
        .collect();
    let equity: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.equity.map(|l| (r.grid_value, l.payoff)))
        .collect();
    if token.len() != 21 {
        return CheckResult::new(NAME, false, "token leg failed somewhere".into());
    }
    if equity.len() < 2 {
        return CheckResult::new(NAME, false, "equity leg solved almost nowhere".into());
    }
    for curve in [&token, &equity] {
        for pair in curve.windows(2) {
            if pair[1].1 > pair[0].1 + 1e-12 {
                return CheckResult::new(
                    NAME,
                    false,
                    format!("payoff rises between sigma {} and {}", pair[0].0, pair[1].0),
                );
            }
        }
    }
    for row in &rows {
        if let (Some(e), Some(t)) = (row.equity, row.token) {
            if t.payoff < e.payoff - 1e-12 {
                return CheckResult::new(
                    NAME,
                    false,
                    format!("equity above token at sigma {}", row.grid_value),
                );
            }
        }
    }
    let equity_decline = equity[0].1 - equity.last().unwrap().1;
    let token_decline = token[0].1 - token.last().unwrap().1;
    if equity_decline <= token_decline {
        return CheckResult::new(
            NAME,
            false,
            format!(
                "equity decline {equity_decline:.4} not above token decline {token_decline:.4}"
            ),
        );
    }
    // Spot references at sigma = 2 (grid index 8) and the risk-neutral end.
    let spot_eq = equity.iter().find(|(s, _)| *s == 2.0).map(|(_, v)| *v);
    let spot_tok = token.iter().find(|(s, _)| *s == 2.0).map(|(_, v)| *v);
    let (Some(spot_eq), Some(spot_tok)) = (spot_eq, spot_tok) else {
        return CheckResult::new(NAME, false, "sigma = 2 row missing a leg".into());
    };
    let gap_eq = (spot_eq - 2.5942).abs();
    let gap_tok = (spot_tok - 10.3541).abs();
    let gap_rn = (equity[0].1 - 10.2750)
        .abs()
        .max((token[0].1 - 10.60481).abs());
    let passed = gap_eq <= SPOT_TOL && gap_tok <= SPOT_TOL && gap_rn <= 1e-4;
    CheckResult::new(
        NAME,
        passed,
        format!(
            "declines {equity_decline:.4} (equity) vs {token_decline:.4} (token); spot gaps {gap_eq:.2e}, {gap_tok:.2e} (tol {SPOT_TOL:.0e})"
        ),
    )
}

/// Budget identities pinned by construction: `e q = I` and `p0 t0 = I` to
/// machine precision, risk-neutral and curved alike.
pub fn check_budget_identities() -> CheckResult {
    const NAME: &str = "budget-identities";
    let cfg = FixedPointConfig::default();
    let mut worst: f64 = 0.0;
    for sigma in [0.0, 0.5, 2.0] {
        let p = ModelParams {
            sigma,
            ..defaults()
        };
        let tol = 4.0 * f64::EPSILON * p.invest;
        match (solve_equity_crra(&p, &cfg), solve_token_crra(&p, &cfg)) {
            (Ok(eq), Ok(tok)) => {
                let gap_e = (eq.e * eq.q - p.invest).abs();
                let gap_t = (tok.p0 * tok.t0 - p.invest).abs();
                worst = worst.max(gap_e.max(gap_t));
                if gap_e > tol || gap_t > tol {
                    return CheckResult::new(
                        NAME,
                        false,
                        format!("identity off at sigma {sigma}: {gap_e:e}, {gap_t:e}"),
                    );
                }
            }
            other => return CheckResult::new(NAME, false, format!("solve failed: {other:?}")),
        }
    }
    CheckResult::new(NAME, true, format!("worst |spend - I| = {worst:.2e}"))
}

/// Runs the whole suite in a fixed order.
pub fn run_all() -> Vec<CheckResult> {
    run_with_grid_points(DEFAULT_GRID_POINTS)
}

/// Full suite with a configurable oracle grid resolution (the coarse grids
/// are only for fast smoke runs; the default resolution is the contract).
pub fn run_with_grid_points(grid_points: usize) -> Vec<CheckResult> {
    let mut results = vec![
        check_closed_form_defaults(),
        check_token_dominance(1000),
        check_limit_identities(),
        check_derivative_grid(),
        check_crra_continuity(),
    ];
    let (clearing, dominance) = check_crra_oracle_grid(grid_points);
    results.push(clearing);
    results.push(dominance);
    results.push(check_rn_indifference());
    results.push(check_figure_shape());
    results.push(check_budget_identities());
    results
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Renders the per-check table printed by the `verify` subcommand.
pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{:<38} {}  {}\n",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        out.push_str(&format!("all {} checks passed\n", results.len()));
    } else {
        out.push_str(&format!("{failed} of {} checks FAILED\n", results.len()));
    }
    out
}
