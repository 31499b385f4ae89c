//! C ABI over the tokeq solvers: opaque parameter handles, plain-data
//! solution structs, and integer status codes.
//!
//! Every function is null-safe and reports failures through
//! [`TokeqStatus`]; nothing panics across the boundary. The generated
//! header lands in `include/tokeq.h`.

use std::ffi::c_char;

use tokeq::crra::{solve_equity_crra, solve_token_crra, FixedPointConfig};
use tokeq::model::ModelParams;
use tokeq::{closed_form, Error};

/// Opaque handle to a validated parameter set.
pub struct TokeqParams(ModelParams);

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokeqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Parameter validation failed.
    InvalidParams = 2,
    /// The whole equity share is worth less than the required investment.
    CannotFinance = 3,
    /// A limiting parameter combination makes the quantity undefined.
    Degenerate = 4,
    /// The token cannot raise any funds at these liquidity parameters.
    IlliquidToken = 5,
    /// No admissible fixed-point root in the search bracket.
    NoEquilibrium = 6,
    /// The root search exhausted its iteration budget.
    NoConvergence = 7,
}

impl From<&Error> for TokeqStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse { .. } => TokeqStatus::InvalidParams,
            Error::CannotFinance { .. } => TokeqStatus::CannotFinance,
            Error::Degenerate(_) => TokeqStatus::Degenerate,
            Error::IlliquidToken => TokeqStatus::IlliquidToken,
            Error::NoEquilibrium(_) => TokeqStatus::NoEquilibrium,
            Error::Convergence { .. } | Error::Bracket { .. } => TokeqStatus::NoConvergence,
        }
    }
}

/// Equity equilibrium as plain data.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TokeqEquitySolution {
    /// Share price.
    pub q: f64,
    /// Fraction of the share sold.
    pub e: f64,
    /// Gross required return.
    pub r_equity: f64,
    /// Entrepreneur final-period consumption.
    pub payoff: f64,
    /// Early consumer's consumption.
    pub c1: f64,
    /// Late consumer's consumption.
    pub c2: f64,
    /// Required-return markup for consumption risk (1 when risk neutral).
    pub risk_premium_factor: f64,
    /// Fixed-point iterations (0 for closed-form paths).
    pub iterations: u32,
    /// Fixed-point residual at the solution.
    pub residual: f64,
    /// True when several admissible roots existed and the
    /// cheapest-financing one was returned.
    pub multiple_roots: bool,
}

/// Token equilibrium as plain data.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TokeqTokenSolution {
    /// Launch token price.
    pub p0: f64,
    /// Tokens sold at launch.
    pub t0: f64,
    /// Gross required return.
    pub r_token: f64,
    /// Entrepreneur final-period consumption.
    pub payoff: f64,
    /// Early consumer's consumption.
    pub c1: f64,
    /// Late consumer's consumption.
    pub c2: f64,
    /// Share of expected marginal utility earned by final-period sales
    /// (1 when risk neutral).
    pub smoothing_ratio: f64,
    /// Entrepreneur's new middle-period issuance.
    pub t1_new: f64,
    /// Entrepreneur's new final-period issuance.
    pub t2_new: f64,
    /// True when either new-issuance quantity is negative.
    pub feasibility_warning: bool,
    /// Fixed-point iterations (0 for closed-form paths).
    pub iterations: u32,
    /// Fixed-point residual at the solution.
    pub residual: f64,
    /// True when several admissible roots existed.
    pub multiple_roots: bool,
}

/// Library version as a NUL-terminated static string.
#[no_mangle]
pub extern "C" fn tokeq_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Short NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn tokeq_status_message(status: TokeqStatus) -> *const c_char {
    let message: &'static str = match status {
        TokeqStatus::Ok => "ok\0",
        TokeqStatus::NullPointer => "null pointer argument\0",
        TokeqStatus::InvalidParams => "invalid parameters\0",
        TokeqStatus::CannotFinance => "equity cannot finance the investment\0",
        TokeqStatus::Degenerate => "degenerate parameter combination\0",
        TokeqStatus::IlliquidToken => "token cannot raise any funds\0",
        TokeqStatus::NoEquilibrium => "no admissible equilibrium\0",
        TokeqStatus::NoConvergence => "solver did not converge\0",
    };
    message.as_ptr() as *const c_char
}

/// Allocates the stock example parameter point.
///
/// Free with [`tokeq_params_free`].
#[no_mangle]
pub extern "C" fn tokeq_params_default() -> *mut TokeqParams {
    Box::into_raw(Box::new(TokeqParams(ModelParams::default())))
}

/// Validates and allocates a parameter set, storing the handle in `out`.
///
/// # Safety
/// `out` must be a valid pointer to a `TokeqParams*` slot.
#[no_mangle]
pub unsafe extern "C" fn tokeq_params_new(
    r: f64,
    lambda: f64,
    phi1: f64,
    phi2: f64,
    y1: f64,
    y2: f64,
    omega: f64,
    invest: f64,
    wealth: f64,
    sigma: f64,
    out: *mut *mut TokeqParams,
) -> TokeqStatus {
    if out.is_null() {
        return TokeqStatus::NullPointer;
    }
    let params = ModelParams {
        r,
        lambda,
        phi1,
        phi2,
        y1,
        y2,
        omega,
        invest,
        wealth,
        sigma,
    };
    match params.validate() {
        Ok(p) => {
            unsafe { *out = Box::into_raw(Box::new(TokeqParams(p))) };
            TokeqStatus::Ok
        }
        Err(e) => {
            unsafe { *out = std::ptr::null_mut() };
            TokeqStatus::from(&e)
        }
    }
}

/// Releases a handle returned by `tokeq_params_default` or
/// `tokeq_params_new`. Null is a no-op.
///
/// # Safety
/// `params` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tokeq_params_free(params: *mut TokeqParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// Future value of operating profit for this parameter set.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tokeq_future_profit(
    params: *const TokeqParams,
    out: *mut f64,
) -> TokeqStatus {
    if params.is_null() || out.is_null() {
        return TokeqStatus::NullPointer;
    }
    unsafe { *out = (*params).0.future_profit() };
    TokeqStatus::Ok
}

/// Entrepreneur payoff when financing at the risk-free rate.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tokeq_bond_benchmark(
    params: *const TokeqParams,
    out: *mut f64,
) -> TokeqStatus {
    if params.is_null() || out.is_null() {
        return TokeqStatus::NullPointer;
    }
    unsafe { *out = closed_form::bond_benchmark(&(*params).0) };
    TokeqStatus::Ok
}

/// Solves the equity equilibrium, dispatching on the stored curvature.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tokeq_solve_equity(
    params: *const TokeqParams,
    out: *mut TokeqEquitySolution,
) -> TokeqStatus {
    if params.is_null() || out.is_null() {
        return TokeqStatus::NullPointer;
    }
    let p = unsafe { &(*params).0 };
    match solve_equity_crra(p, &FixedPointConfig::default()) {
        Ok(s) => {
            unsafe {
                *out = TokeqEquitySolution {
                    q: s.q,
                    e: s.e,
                    r_equity: s.r_equity,
                    payoff: s.payoff,
                    c1: s.c1,
                    c2: s.c2,
                    risk_premium_factor: s.risk_premium_factor,
                    iterations: s.diagnostics.iterations,
                    residual: s.diagnostics.residual,
                    multiple_roots: s.diagnostics.multiple_roots,
                };
            }
            TokeqStatus::Ok
        }
        Err(e) => TokeqStatus::from(&e),
    }
}

/// Solves the token equilibrium, dispatching on the stored curvature.
///
/// # Safety
/// `params` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tokeq_solve_token(
    params: *const TokeqParams,
    out: *mut TokeqTokenSolution,
) -> TokeqStatus {
    if params.is_null() || out.is_null() {
        return TokeqStatus::NullPointer;
    }
    let p = unsafe { &(*params).0 };
    match solve_token_crra(p, &FixedPointConfig::default()) {
        Ok(s) => {
            let t1_new = p.y1 - p.phi1 * s.t0;
            let t2_new = p.y2 - p.phi2 * (1.0 - p.phi1) * s.t0;
            unsafe {
                *out = TokeqTokenSolution {
                    p0: s.p0,
                    t0: s.t0,
                    r_token: s.r_token,
                    payoff: s.payoff,
                    c1: s.c1,
                    c2: s.c2,
                    smoothing_ratio: s.smoothing_ratio,
                    t1_new,
                    t2_new,
                    feasibility_warning: t1_new < 0.0 || t2_new < 0.0,
                    iterations: s.diagnostics.iterations,
                    residual: s.diagnostics.residual,
                    multiple_roots: s.diagnostics.multiple_roots,
                };
            }
            TokeqStatus::Ok
        }
        Err(e) => TokeqStatus::from(&e),
    }
}

/// Analytic derivatives of the risk-neutral token payoff with respect to
/// the two liquidity fractions.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tokeq_payoff_derivatives(
    params: *const TokeqParams,
    out_d_phi1: *mut f64,
    out_d_phi2: *mut f64,
) -> TokeqStatus {
    if params.is_null() || out_d_phi1.is_null() || out_d_phi2.is_null() {
        return TokeqStatus::NullPointer;
    }
    match closed_form::payoff_derivatives_rn(unsafe { &(*params).0 }) {
        Ok((d1, d2)) => {
            unsafe {
                *out_d_phi1 = d1;
                *out_d_phi2 = d2;
            }
            TokeqStatus::Ok
        }
        Err(e) => TokeqStatus::from(&e),
    }
}
