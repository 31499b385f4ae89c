//! Acceptance suite: every release gate in one place, one printed
//! pass/fail line per criterion. Run with `--nocapture` to see the lines:
//!
//! ```text
//! cargo test -p tokeq --test acceptance -- --nocapture
//! ```

use std::sync::OnceLock;

use tokeq::oracle::DEFAULT_GRID_POINTS;
use tokeq::verify::{
    check_budget_identities, check_closed_form_defaults, check_crra_continuity,
    check_crra_oracle_grid, check_derivative_grid, check_figure_shape, check_limit_identities,
    check_rn_indifference, check_token_dominance, CheckResult,
};

fn assert_check(criterion: &str, check: &CheckResult) {
    let verdict = if check.passed { "PASS" } else { "FAIL" };
    println!(
        "acceptance {criterion}: {verdict} — {} ({})",
        check.name, check.detail
    );
    assert!(check.passed, "{criterion} failed: {}", check.detail);
}

/// The solver-vs-oracle grid is the expensive part and feeds two
/// criteria; solve it once.
fn oracle_grid() -> &'static (CheckResult, CheckResult) {
    static GRID: OnceLock<(CheckResult, CheckResult)> = OnceLock::new();
    GRID.get_or_init(|| check_crra_oracle_grid(DEFAULT_GRID_POINTS))
}

#[test]
fn criterion_1_closed_form_reproduction() {
    assert_check(
        "criterion 1 (closed-form reproduction)",
        &check_closed_form_defaults(),
    );
}

#[test]
fn criterion_2_token_dominance_1000_draws() {
    assert_check(
        "criterion 2 (token dominance, 1000 draws)",
        &check_token_dominance(1000),
    );
}

#[test]
fn criterion_3_limit_identities() {
    assert_check(
        "criterion 3 (equity/bond limit identities)",
        &check_limit_identities(),
    );
}

#[test]
fn criterion_4_derivative_grid() {
    assert_check(
        "criterion 4 (derivative sign and FD grid)",
        &check_derivative_grid(),
    );
}

#[test]
fn criterion_5_crra_consistency() {
    assert_check(
        "criterion 5a (risk-neutral continuity)",
        &check_crra_continuity(),
    );
    assert_check("criterion 5b (solver vs oracle clearing)", &oracle_grid().0);
}

#[test]
fn criterion_6_risk_aversion_figure() {
    assert_check(
        "criterion 6 (payoff decline with risk aversion)",
        &check_figure_shape(),
    );
}

#[test]
fn criterion_7_price_dominance() {
    assert_check("criterion 7 (curved price dominance)", &oracle_grid().1);
}

#[test]
fn criterion_8_verify_subcommand_end_to_end() {
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_tokeq"))
        .arg("verify")
        .output()
        .expect("verify subcommand should spawn");
    let stdout = String::from_utf8_lossy(&output.stdout);
    let passed = output.status.code() == Some(0);
    println!(
        "acceptance criterion 8 (verify subcommand): {} — exit {:?}",
        if passed { "PASS" } else { "FAIL" },
        output.status.code()
    );
    print!("{stdout}");
    assert!(passed, "verify exited {:?}\n{stdout}", output.status.code());
    assert!(
        stdout.contains("all 10 checks passed"),
        "unexpected table:\n{stdout}"
    );
    // One reported line per check.
    assert_eq!(stdout.matches("PASS").count(), 10, "table:\n{stdout}");
}

/// Not numbered in the gate but part of the oracle contract: risk-neutral
/// indifference and exact budget identities.
#[test]
fn supporting_oracle_invariants() {
    assert_check(
        "supporting (risk-neutral indifference)",
        &check_rn_indifference(),
    );
    assert_check("supporting (budget identities)", &check_budget_identities());
}
