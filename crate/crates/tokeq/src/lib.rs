//! Equilibrium pricing for a three-period startup-financing model in which
//! an entrepreneur raises a fixed investment by selling either utility
//! tokens or equity to investors who may need liquidity before the venture
//! pays out.
//!
//! Equity pays only in the final period; tokens can be partially resold
//! along the way, governed by two liquidity fractions. The crate provides:
//!
//! * [`closed_form`] — exact risk-neutral prices, required returns,
//!   entrepreneur payoffs, and analytic comparative-statics derivatives;
//! * [`crra`] — one-dimensional fixed-point solvers for the risk-averse
//!   equilibria, with convergence diagnostics;
//! * [`oracle`] — an independent brute-force check: grid maximization of
//!   investor utility, market-clearing price search, first-order-condition
//!   residuals, and finite-difference derivative validation;
//! * [`sweep`] — comparative statics over parameter grids with per-row
//!   error isolation, CSV output, and level-crossing detection;
//! * [`verify`] — the end-to-end tolerance suite behind the `verify`
//!   subcommand.
//!
//! All value types are plain immutable data and all solvers are pure
//! functions, so parameter grids can be evaluated concurrently without
//! coordination.

pub mod closed_form;
pub mod config;
pub mod crra;
pub mod error;
pub mod model;
pub mod oracle;
pub mod report;
pub mod search;
pub mod svg;
pub mod sweep;
pub mod verify;

pub use error::{Error, LegError, Result};
pub use model::{Asset, DerivedQuantities, ModelParams};
