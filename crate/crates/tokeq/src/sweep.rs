//! Comparative statics over one-dimensional parameter grids.
//!
//! Each grid point is solved independently for both financing modes; a
//! failure on one leg flags the row instead of aborting the sweep, since
//! aggressive grids routinely hit infeasible corners. Row order is grid
//! order and reruns are bit-identical.

use crate::crra::{solve_equity_crra, solve_token_crra, FixedPointConfig};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Parameter a sweep ranges over. Names match the config-file keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    R,
    Lambda,
    Phi1,
    Phi2,
    Y1,
    Y2,
    Omega,
    Invest,
    Wealth,
    Sigma,
}

impl SweepParam {
    pub const ALL_NAMES: &'static str = "R, lambda, phi1, phi2, y1, y2, omega, I, W, sigma";

    pub fn apply(&self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        match self {
            Self::R => p.r = value,
            Self::Lambda => p.lambda = value,
            Self::Phi1 => p.phi1 = value,
            Self::Phi2 => p.phi2 = value,
            Self::Y1 => p.y1 = value,
            Self::Y2 => p.y2 = value,
            Self::Omega => p.omega = value,
            Self::Invest => p.invest = value,
            Self::Wealth => p.wealth = value,
            Self::Sigma => p.sigma = value,
        }
        p
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Self::R),
            "lambda" => Ok(Self::Lambda),
            "phi1" => Ok(Self::Phi1),
            "phi2" => Ok(Self::Phi2),
            "y1" => Ok(Self::Y1),
            "y2" => Ok(Self::Y2),
            "omega" => Ok(Self::Omega),
            "I" => Ok(Self::Invest),
            "W" => Ok(Self::Wealth),
            "sigma" => Ok(Self::Sigma),
            other => Err(Error::Domain(format!(
                "unknown sweep parameter {other:?}; expected one of {}",
                Self::ALL_NAMES
            ))),
        }
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::R => "R",
            Self::Lambda => "lambda",
            Self::Phi1 => "phi1",
            Self::Phi2 => "phi2",
            Self::Y1 => "y1",
            Self::Y2 => "y2",
            Self::Omega => "omega",
            Self::Invest => "I",
            Self::Wealth => "W",
            Self::Sigma => "sigma",
        };
        f.write_str(name)
    }
}

/// An inclusive, linearly spaced grid over one parameter.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(param: SweepParam, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::Domain(format!(
                "grid lo must be below hi, got [{lo}, {hi}]"
            )));
        }
        if steps < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 steps, got {steps}"
            )));
        }
        Ok(Self {
            param,
            lo,
            hi,
            steps,
        })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        let span = self.hi - self.lo;
        let denom = (self.steps - 1) as f64;
        (0..self.steps).map(move |i| self.lo + span * i as f64 / denom)
    }
}

/// Solved values for one financing leg of a sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegValues {
    pub price: f64,
    pub ret: f64,
    pub payoff: f64,
}

/// One evaluated grid point. Legs that failed to solve are `None` and the
/// failure is recorded in `flags`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub grid_value: f64,
    pub equity: Option<LegValues>,
    pub token: Option<LegValues>,
    /// `token payoff - equity payoff`, present when both legs solved.
    pub payoff_diff: Option<f64>,
    pub flags: Vec<String>,
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "invalid_params",
        Error::CannotFinance { .. } => "cannot_finance",
        Error::Degenerate(_) => "degenerate",
        Error::IlliquidToken => "illiquid",
        Error::NoEquilibrium(_) => "no_equilibrium",
        Error::Convergence { .. } => "no_convergence",
        Error::Bracket { .. } => "bracket",
        Error::Parse { .. } => "parse",
    }
}

fn evaluate_point(params: &ModelParams, cfg: &FixedPointConfig) -> SweepRow {
    let mut flags = Vec::new();
    if params.validate().is_err() {
        flags.push("invalid_params".to_string());
        return SweepRow {
            grid_value: f64::NAN,
            equity: None,
            token: None,
            payoff_diff: None,
            flags,
        };
    }
    if params.future_profit() < 0.0 {
        flags.push("warn:negative_pi".to_string());
    }
    let equity = match solve_equity_crra(params, cfg) {
        Ok(s) => {
            if s.diagnostics.multiple_roots {
                flags.push("equity:multiple_roots".to_string());
            }
            Some(LegValues {
                price: s.q,
                ret: s.r_equity,
                payoff: s.payoff,
            })
        }
        Err(e) => {
            flags.push(format!("equity:{}", error_code(&e)));
            None
        }
    };
    let token = match solve_token_crra(params, cfg) {
        Ok(s) => {
            if s.diagnostics.multiple_roots {
                flags.push("token:multiple_roots".to_string());
            }
            let t1_new = params.y1 - params.phi1 * s.t0;
            let t2_new = params.y2 - params.phi2 * (1.0 - params.phi1) * s.t0;
            if t1_new < 0.0 || t2_new < 0.0 {
                flags.push("token:negative_issuance".to_string());
            }
            Some(LegValues {
                price: s.p0,
                ret: s.r_token,
                payoff: s.payoff,
            })
        }
        Err(e) => {
            flags.push(format!("token:{}", error_code(&e)));
            None
        }
    };
    let payoff_diff = match (&equity, &token) {
        (Some(e), Some(t)) => Some(t.payoff - e.payoff),
        _ => None,
    };
    SweepRow {
        grid_value: f64::NAN,
        equity,
        token,
        payoff_diff,
        flags,
    }
}

/// Evaluates both financing modes at every grid point, in grid order.
pub fn sweep_1d(base: &ModelParams, grid: &GridSpec, cfg: &FixedPointConfig) -> Vec<SweepRow> {
    grid.values()
        .map(|v| {
            let params = grid.param.apply(base, v);
            let mut row = evaluate_point(&params, cfg);
            row.grid_value = v;
            row
        })
        .collect()
}

/// The payoff-versus-curvature dataset behind the `figure` subcommand:
/// both payoff curves over a risk-aversion grid at a 10% early-consumption
/// probability.
pub fn figure_data(
    base: &ModelParams,
    sigma_grid: &GridSpec,
    cfg: &FixedPointConfig,
) -> Result<Vec<SweepRow>> {
    if sigma_grid.param != SweepParam::Sigma {
        return Err(Error::Domain(format!(
            "figure grid must range over sigma, got {}",
            sigma_grid.param
        )));
    }
    let base = ModelParams {
        lambda: 0.1,
        ..*base
    };
    Ok(sweep_1d(&base, sigma_grid, cfg))
}

/// Column of a sweep row that [`find_crossing`] can scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepColumn {
    EquityPayoff,
    TokenPayoff,
    PayoffDiff,
}

impl SweepColumn {
    fn get(&self, row: &SweepRow) -> Option<f64> {
        match self {
            Self::EquityPayoff => row.equity.map(|l| l.payoff),
            Self::TokenPayoff => row.token.map(|l| l.payoff),
            Self::PayoffDiff => row.payoff_diff,
        }
    }
}

/// A level crossing between two consecutive grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// Linearly interpolated abscissa; accurate to one grid cell.
    pub at: f64,
}

/// Finds every consecutive pair of rows straddling `level` in the chosen
/// column. Rows with a missing value are skipped; an empty result means
/// the column never crosses.
pub fn find_crossing(rows: &[SweepRow], column: SweepColumn, level: f64) -> Vec<Crossing> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for row in rows {
        let Some(value) = column.get(row) else {
            prev = None;
            continue;
        };
        if let Some((x0, v0)) = prev {
            let d0 = v0 - level;
            let d1 = value - level;
            if d0 == 0.0 {
                out.push(Crossing {
                    grid_lo: x0,
                    grid_hi: x0,
                    at: x0,
                });
            } else if d0 * d1 < 0.0 {
                let t = d0 / (d0 - d1);
                out.push(Crossing {
                    grid_lo: x0,
                    grid_hi: row.grid_value,
                    at: x0 + t * (row.grid_value - x0),
                });
            }
        }
        prev = Some((row.grid_value, value));
    }
    if let Some((x0, v0)) = prev {
        if v0 == level {
            out.push(Crossing {
                grid_lo: x0,
                grid_hi: x0,
                at: x0,
            });
        }
    }
    out
}

fn fmt_cell(v: Option<f64>, full_precision: bool) -> String {
    match v {
        None => String::new(),
        Some(v) if full_precision => format!("{v}"),
        Some(v) => format!("{v:.6}"),
    }
}

/// Fixed CSV header for sweep output.
pub const CSV_HEADER: &str = "grid_value,equity_price,token_price,equity_return,token_return,equity_payoff,token_payoff,payoff_diff,flags";

/// Serializes rows to CSV: fixed header, newline-terminated rows, decimal
/// points regardless of locale, empty cells for failed legs.
pub fn rows_to_csv(rows: &[SweepRow], full_precision: bool) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let cells = [
            fmt_cell(Some(row.grid_value), full_precision),
            fmt_cell(row.equity.map(|l| l.price), full_precision),
            fmt_cell(row.token.map(|l| l.price), full_precision),
            fmt_cell(row.equity.map(|l| l.ret), full_precision),
            fmt_cell(row.token.map(|l| l.ret), full_precision),
            fmt_cell(row.equity.map(|l| l.payoff), full_precision),
            fmt_cell(row.token.map(|l| l.payoff), full_precision),
            fmt_cell(row.payoff_diff, full_precision),
        ];
        out.push_str(&cells.join(","));
        out.push(',');
        out.push_str(&row.flags.join(";"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{solve_equity_rn, solve_token_rn};

    fn defaults() -> ModelParams {
        ModelParams::default()
    }

    fn cfg() -> FixedPointConfig {
        FixedPointConfig::default()
    }

    #[test]
    fn token_payoff_declines_with_early_consumption_risk() {
        let grid = GridSpec::new(SweepParam::Lambda, 0.0, 0.5, 11).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        assert_eq!(rows.len(), 11);
        for pair in rows.windows(2) {
            let a = pair[0].token.unwrap().payoff;
            let b = pair[1].token.unwrap().payoff;
            assert!(b <= a + 1e-12);
        }
    }

    #[test]
    fn token_lead_shrinks_to_zero_with_vanishing_middle_liquidity() {
        let grid = GridSpec::new(SweepParam::Phi1, 0.01, 1.0, 25).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        for row in &rows {
            assert!(row.payoff_diff.unwrap() >= 0.0, "at {}", row.grid_value);
        }
        assert!(rows[0].payoff_diff.unwrap() < 0.01);
        assert!(rows.last().unwrap().payoff_diff.unwrap() > rows[0].payoff_diff.unwrap());
    }

    #[test]
    fn risk_aversion_sweep_flags_the_unfinanceable_tail() {
        let grid = GridSpec::new(SweepParam::Sigma, 0.0, 5.0, 21).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        // Token solves everywhere; equity drops out above the financeable
        // window but the sweep keeps going.
        assert!(rows.iter().all(|r| r.token.is_some()));
        let failed: Vec<_> = rows.iter().filter(|r| r.equity.is_none()).collect();
        assert!(!failed.is_empty());
        assert!(failed
            .iter()
            .all(|r| r.flags.iter().any(|f| f == "equity:no_equilibrium")));
        // Both curves fall where present, and equity falls further.
        let equity: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.equity.map(|l| (r.grid_value, l.payoff)))
            .collect();
        let token: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.grid_value, r.token.unwrap().payoff))
            .collect();
        for pair in equity.windows(2) {
            assert!(pair[1].1 <= pair[0].1 + 1e-12);
        }
        for pair in token.windows(2) {
            assert!(pair[1].1 <= pair[0].1 + 1e-12);
        }
        let equity_decline = equity[0].1 - equity.last().unwrap().1;
        let token_decline = token[0].1 - token.last().unwrap().1;
        assert!(equity_decline > token_decline);
    }

    #[test]
    fn zero_curvature_rows_equal_the_closed_forms_exactly() {
        let grid = GridSpec::new(SweepParam::Lambda, 0.05, 0.45, 9).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        for row in &rows {
            let p = ModelParams {
                lambda: row.grid_value,
                ..defaults()
            };
            let eq = solve_equity_rn(&p).unwrap();
            let tok = solve_token_rn(&p).unwrap();
            assert_eq!(row.equity.unwrap().price, eq.q);
            assert_eq!(row.equity.unwrap().payoff, eq.payoff);
            assert_eq!(row.token.unwrap().price, tok.p0);
            assert_eq!(row.token.unwrap().payoff, tok.payoff);
        }
    }

    #[test]
    fn invalid_grid_points_are_flagged_rows() {
        let grid = GridSpec::new(SweepParam::Lambda, 0.5, 1.5, 3).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        assert_eq!(rows.len(), 3);
        assert!(rows[2].flags.contains(&"invalid_params".to_string()));
        assert!(rows[2].equity.is_none() && rows[2].token.is_none());
    }

    #[test]
    fn figure_grid_is_pinned_to_ten_percent_liquidity_risk() {
        let base = ModelParams {
            lambda: 0.4,
            ..defaults()
        };
        let grid = GridSpec::new(SweepParam::Sigma, 0.0, 1.0, 3).unwrap();
        let rows = figure_data(&base, &grid, &cfg()).unwrap();
        let expected = solve_equity_rn(&ModelParams {
            lambda: 0.1,
            ..base
        })
        .unwrap();
        assert_eq!(rows[0].equity.unwrap().price, expected.q);

        let wrong = GridSpec::new(SweepParam::Lambda, 0.0, 1.0, 3).unwrap();
        assert!(figure_data(&base, &wrong, &cfg()).is_err());
    }

    #[test]
    fn crossings_are_interpolated_between_grid_points() {
        let grid = GridSpec::new(SweepParam::Sigma, 0.0, 2.0, 41).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        let crossings = find_crossing(&rows, SweepColumn::EquityPayoff, 5.0);
        assert_eq!(crossings.len(), 1);
        let c = crossings[0];
        assert!(c.grid_lo < c.at && c.at < c.grid_hi);
        // The straddle is genuine and the interpolated point is accurate to
        // about one grid cell.
        let payoff_at = |sigma: f64| {
            solve_equity_crra(
                &ModelParams {
                    sigma,
                    ..defaults()
                },
                &cfg(),
            )
            .unwrap()
            .payoff
        };
        assert!(payoff_at(c.grid_lo) >= 5.0);
        assert!(payoff_at(c.grid_hi) <= 5.0);
        let cell_drop = payoff_at(c.grid_lo) - payoff_at(c.grid_hi);
        assert!(
            (payoff_at(c.at) - 5.0).abs() <= cell_drop,
            "payoff at crossing: {}",
            payoff_at(c.at)
        );
    }

    #[test]
    fn dominant_token_never_crosses_zero_lead() {
        let grid = GridSpec::new(SweepParam::Phi1, 0.05, 1.0, 20).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        assert!(find_crossing(&rows, SweepColumn::PayoffDiff, 0.0).is_empty());
    }

    #[test]
    fn constant_column_has_no_crossing() {
        let grid = GridSpec::new(SweepParam::Y1, 10.0, 11.0, 5).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        // Level far away from the data: no crossing whatever the column.
        assert!(find_crossing(&rows, SweepColumn::TokenPayoff, -100.0).is_empty());
    }

    #[test]
    fn reruns_are_bit_identical() {
        let grid = GridSpec::new(SweepParam::Sigma, 0.0, 3.0, 13).unwrap();
        let a = rows_to_csv(&sweep_1d(&defaults(), &grid, &cfg()), false);
        let b = rows_to_csv(&sweep_1d(&defaults(), &grid, &cfg()), false);
        assert_eq!(a, b);
    }

    #[test]
    fn csv_layout_is_stable() {
        let grid = GridSpec::new(SweepParam::Sigma, 0.0, 5.0, 3).unwrap();
        let rows = sweep_1d(&defaults(), &grid, &cfg());
        let csv = rows_to_csv(&rows, false);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 9);
        assert_eq!(first[0], "0.000000");
        assert_eq!(first[5], "10.275000");
        // A failed equity leg leaves its cells empty but keeps the shape.
        let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
        assert_eq!(last.len(), 9);
        assert_eq!(last[1], "");
        assert_eq!(last[8], "equity:no_equilibrium");
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(SweepParam::Lambda, 0.5, 0.5, 5).is_err());
        assert!(GridSpec::new(SweepParam::Lambda, 0.0, 0.5, 1).is_err());
        assert!("bogus".parse::<SweepParam>().is_err());
        assert_eq!("phi1".parse::<SweepParam>().unwrap(), SweepParam::Phi1);
    }
}
