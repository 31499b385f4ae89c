//! One-dimensional search primitives: sign-change scanning, bracketed
//! bisection, and golden-section maximization.

/// Outcome of a bracketed bisection run.
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub x: f64,
    pub residual: f64,
    pub iterations: u32,
}

/// Scans `[lo, hi]` on `cells` uniform cells and returns the endpoints of
/// every cell across which `f` changes sign; an exact zero at a grid point
/// becomes a degenerate `(x, x)` cell.
///
/// Non-finite values are treated by their sign (`-inf` counts as negative),
/// which lets callers saturate overflowing residuals instead of guarding.
/// NaN carries no sign information and breaks the scan at that point.
pub fn sign_change_cells<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    cells: usize,
) -> Vec<(f64, f64)> {
    let sgn = |v: f64| -> Option<i8> {
        if v > 0.0 {
            Some(1)
        } else if v < 0.0 {
            Some(-1)
        } else if v == 0.0 {
            Some(0)
        } else {
            None
        }
    };
    let mut out = Vec::new();
    let mut x_prev = lo;
    let mut s_prev = sgn(f(lo));
    if s_prev == Some(0) {
        out.push((lo, lo));
    }
    for i in 1..=cells {
        let x = lo + (hi - lo) * i as f64 / cells as f64;
        let s = sgn(f(x));
        match (s_prev, s) {
            (_, Some(0)) => out.push((x, x)),
            (Some(a), Some(b)) if a != 0 && b != 0 && a != b => out.push((x_prev, x)),
            _ => {}
        }
        x_prev = x;
        s_prev = s;
    }
    out
}

/// Bisects `f` on a bracket with a sign change until `|f| <= tol` or the
/// interval collapses to floating-point resolution.
///
/// Returns `Err` with the last iterate when `max_iter` is exhausted first.
pub fn bisect_root<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: u32,
) -> Result<RootResult, RootResult> {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(RootResult {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(RootResult {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    debug_assert!(
        f_lo.signum() != f_hi.signum(),
        "bisect_root requires a sign change: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
    );
    let mut iterations = 0;
    loop {
        iterations += 1;
        let x = 0.5 * (lo + hi);
        let fx = f(x);
        if fx == 0.0 || fx.abs() <= tol {
            return Ok(RootResult {
                x,
                residual: fx,
                iterations,
            });
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        // Interval at floating-point resolution: accept the midpoint even if
        // the residual tolerance is unreachable for this function's scale.
        if (hi - lo) <= f64::EPSILON * x.abs().max(1.0) {
            return Ok(RootResult {
                x,
                residual: fx,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(RootResult {
                x,
                residual: fx,
                iterations,
            });
        }
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// narrowing the interval to `width`.
///
/// Returns `(x_max, f_max)`.
pub fn golden_max<F: Fn(f64) -> f64>(
    f: &F,
    mut a: f64,
    mut b: f64,
    width: f64,
    max_iter: u32,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while (b - a) > width && iterations < max_iter {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        iterations += 1;
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let r = bisect_root(&f, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
        assert!(r.residual.abs() <= 1e-14);
    }

    #[test]
    fn bisect_reports_iteration_exhaustion() {
        let f = |x: f64| x - 0.3;
        let r = bisect_root(&f, 0.0, 1.0, 0.0, 4);
        assert!(r.is_err());
    }

    #[test]
    fn scan_finds_both_roots_of_a_parabola() {
        // roots at 1 and 3
        let f = |x: f64| (x - 1.0) * (x - 3.0);
        let cells = sign_change_cells(&f, 0.0, 4.0, 64);
        assert_eq!(cells.len(), 2);
        assert!(cells[0].0 <= 1.0 && 1.0 <= cells[0].1);
        assert!(cells[1].0 <= 3.0 && 3.0 <= cells[1].1);
    }

    #[test]
    fn scan_handles_saturated_values() {
        let f = |x: f64| if x < 0.5 { f64::NEG_INFINITY } else { 1.0 };
        let cells = sign_change_cells(&f, 0.0, 1.0, 10);
        assert_eq!(cells.len(), 1);
    }

    #[test]
    fn golden_finds_quadratic_peak() {
        let f = |x: f64| -(x - 0.7) * (x - 0.7);
        let (x, _) = golden_max(&f, 0.0, 2.0, 1e-12, 200);
        assert!((x - 0.7).abs() < 1e-9);
    }
}
