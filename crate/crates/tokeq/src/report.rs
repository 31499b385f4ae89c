//! Solution records for the `solve` subcommand: an aligned text block or a
//! flat CSV record, six decimals by default and shortest round-trip
//! representation in verbose mode.

use crate::crra::{CrraEquitySolution, CrraTokenSolution};
use crate::error::Error;
use crate::model::ModelParams;

fn fmt(v: f64, full: bool) -> String {
    if full {
        format!("{v}")
    } else {
        format!("{v:.6}")
    }
}

/// Renders both financing solutions as aligned text. Failed legs print
/// their error instead of numbers.
pub fn solution_text(
    params: &ModelParams,
    equity: &Result<CrraEquitySolution, Error>,
    token: &Result<CrraTokenSolution, Error>,
    verbose: bool,
) -> String {
    let mut out = String::new();
    let p = params;
    out.push_str(&format!(
        "parameters: R={} lambda={} phi1={} phi2={} y1={} y2={} omega={} I={} W={} sigma={}\n",
        p.r, p.lambda, p.phi1, p.phi2, p.y1, p.y2, p.omega, p.invest, p.wealth, p.sigma
    ));
    let pi = p.future_profit();
    out.push_str(&format!("future profit          = {}\n", fmt(pi, verbose)));
    if pi < 0.0 {
        out.push_str(
            "warning: future profit is negative; equilibrium prices lose economic meaning\n",
        );
    }
    out.push('\n');
    match equity {
        Ok(s) => {
            out.push_str("equity:\n");
            out.push_str(&format!("  price q              = {}\n", fmt(s.q, verbose)));
            out.push_str(&format!("  share sold e         = {}\n", fmt(s.e, verbose)));
            out.push_str(&format!(
                "  required return R^E  = {}\n",
                fmt(s.r_equity, verbose)
            ));
            out.push_str(&format!(
                "  entrepreneur payoff  = {}\n",
                fmt(s.payoff, verbose)
            ));
            out.push_str(&format!(
                "  c1 (early consumer)  = {}\n",
                fmt(s.c1, verbose)
            ));
            out.push_str(&format!(
                "  c2 (late consumer)   = {}\n",
                fmt(s.c2, verbose)
            ));
            if verbose {
                out.push_str(&format!(
                    "  risk premium factor  = {}\n  iterations           = {}\n  residual             = {:e}\n  bracket              = [{}, {}]{}\n",
                    fmt(s.risk_premium_factor, true),
                    s.diagnostics.iterations,
                    s.diagnostics.residual,
                    s.diagnostics.bracket.0,
                    s.diagnostics.bracket.1,
                    if s.diagnostics.multiple_roots { " (multiple roots; cheapest financing kept)" } else { "" },
                ));
            }
        }
        Err(e) => out.push_str(&format!("equity: unsolved ({e})\n")),
    }
    out.push('\n');
    match token {
        Ok(s) => {
            out.push_str("token:\n");
            out.push_str(&format!(
                "  price p0             = {}\n",
                fmt(s.p0, verbose)
            ));
            out.push_str(&format!(
                "  tokens sold t0       = {}\n",
                fmt(s.t0, verbose)
            ));
            out.push_str(&format!(
                "  required return R^T  = {}\n",
                fmt(s.r_token, verbose)
            ));
            out.push_str(&format!(
                "  entrepreneur payoff  = {}\n",
                fmt(s.payoff, verbose)
            ));
            out.push_str(&format!(
                "  c1 (early consumer)  = {}\n",
                fmt(s.c1, verbose)
            ));
            out.push_str(&format!(
                "  c2 (late consumer)   = {}\n",
                fmt(s.c2, verbose)
            ));
            let t1_new = p.y1 - p.phi1 * s.t0;
            let t2_new = p.y2 - p.phi2 * (1.0 - p.phi1) * s.t0;
            out.push_str(&format!(
                "  new issuance t1'     = {}\n",
                fmt(t1_new, verbose)
            ));
            out.push_str(&format!(
                "  new issuance t2'     = {}\n",
                fmt(t2_new, verbose)
            ));
            if t1_new < 0.0 || t2_new < 0.0 {
                out.push_str(
                    "  warning: negative new issuance; goods market cannot clear as told\n",
                );
            }
            if verbose {
                out.push_str(&format!(
                    "  smoothing ratio      = {}\n  iterations           = {}\n  residual             = {:e}\n  bracket              = [{}, {}]{}\n",
                    fmt(s.smoothing_ratio, true),
                    s.diagnostics.iterations,
                    s.diagnostics.residual,
                    s.diagnostics.bracket.0,
                    s.diagnostics.bracket.1,
                    if s.diagnostics.multiple_roots { " (multiple roots; cheapest financing kept)" } else { "" },
                ));
            }
        }
        Err(e) => out.push_str(&format!("token: unsolved ({e})\n")),
    }
    if let (Ok(e), Ok(t)) = (equity, token) {
        out.push('\n');
        out.push_str(&format!(
            "payoff difference (token - equity) = {}\n",
            fmt(t.payoff - e.payoff, verbose)
        ));
    }
    out
}

/// Renders both solutions as a two-row flat CSV record.
pub fn solution_csv(
    params: &ModelParams,
    equity: &Result<CrraEquitySolution, Error>,
    token: &Result<CrraTokenSolution, Error>,
    verbose: bool,
) -> String {
    let mut out = String::from("asset,price,quantity,return,payoff,c1,c2,flags\n");
    match equity {
        Ok(s) => out.push_str(&format!(
            "equity,{},{},{},{},{},{},{}\n",
            fmt(s.q, verbose),
            fmt(s.e, verbose),
            fmt(s.r_equity, verbose),
            fmt(s.payoff, verbose),
            fmt(s.c1, verbose),
            fmt(s.c2, verbose),
            if s.diagnostics.multiple_roots {
                "multiple_roots"
            } else {
                ""
            },
        )),
        Err(_) => out.push_str("equity,,,,,,,unsolved\n"),
    }
    match token {
        Ok(s) => {
            let t1_new = params.y1 - params.phi1 * s.t0;
            let t2_new = params.y2 - params.phi2 * (1.0 - params.phi1) * s.t0;
            let mut flags = Vec::new();
            if s.diagnostics.multiple_roots {
                flags.push("multiple_roots");
            }
            if t1_new < 0.0 || t2_new < 0.0 {
                flags.push("negative_issuance");
            }
            out.push_str(&format!(
                "token,{},{},{},{},{},{},{}\n",
                fmt(s.p0, verbose),
                fmt(s.t0, verbose),
                fmt(s.r_token, verbose),
                fmt(s.payoff, verbose),
                fmt(s.c1, verbose),
                fmt(s.c2, verbose),
                flags.join(";"),
            ));
        }
        Err(_) => out.push_str("token,,,,,,,unsolved\n"),
    }
    out
}
