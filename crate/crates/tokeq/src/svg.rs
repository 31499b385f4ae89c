//! Static SVG chart for the payoff-versus-risk-aversion figure. Hand-rolled
//! polylines on a fixed 800x600 canvas; no plotting dependency.

use crate::sweep::SweepRow;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 40.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 70.0;
const TICK_LEN: f64 = 6.0;

fn nice_step(range: f64, target: usize) -> f64 {
    let raw = range / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let factor = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let step = nice_step(hi - lo, target);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(if t.abs() < 1e-12 { 0.0 } else { t });
        t += step;
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.2}")
    }
}

/// Renders the two payoff curves as an 800x600 SVG with linear axes.
///
/// The equity and token polylines carry `id="equity"` and `id="token"`;
/// rows where a leg is unsolved simply contribute no point to that line.
pub fn figure_svg(rows: &[SweepRow]) -> String {
    let equity: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.equity.map(|l| (r.grid_value, l.payoff)))
        .collect();
    let token: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.token.map(|l| (r.grid_value, l.payoff)))
        .collect();

    let xs = rows.iter().map(|r| r.grid_value);
    let x_lo = xs.clone().fold(f64::INFINITY, f64::min);
    let x_hi = xs.fold(f64::NEG_INFINITY, f64::max);
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for &(_, y) in equity.iter().chain(token.iter()) {
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if !y_lo.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if y_hi - y_lo < 1e-9 {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let y_lo = y_lo - pad;
    let y_hi = y_hi + pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_px = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let y_px = |y: f64| HEIGHT - MARGIN_BOTTOM - (y - y_lo) / (y_hi - y_lo) * plot_h;
    let points = |data: &[(f64, f64)]| {
        data.iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", x_px(x), y_px(y)))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    ));

    for t in ticks(x_lo, x_hi, 8) {
        let px = x_px(t);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{y0:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            y0 + TICK_LEN
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            y0 + TICK_LEN + 15.0,
            fmt_tick(t)
        ));
    }
    for t in ticks(y_lo, y_hi, 8) {
        let py = y_px(t);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{x0:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
            x0 - TICK_LEN
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"end\">{}</text>\n",
            x0 - TICK_LEN - 4.0,
            py + 4.0,
            fmt_tick(t)
        ));
    }

    // axis labels
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">sigma</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"22\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 22 {:.2})\">entrepreneur payoff</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    svg.push_str(&format!(
        "<polyline id=\"equity\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"{}\"/>\n",
        points(&equity)
    ));
    svg.push_str(&format!(
        "<polyline id=\"token\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"{}\"/>\n",
        points(&token)
    ));

    // legend
    let lx = x1 - 150.0;
    let ly = y1 + 10.0;
    svg.push_str(&format!(
        "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
        lx + 28.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\">equity</text>\n",
        lx + 34.0,
        ly + 4.0
    ));
    svg.push_str(&format!(
        "<line x1=\"{lx:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n",
        ly + 20.0,
        lx + 28.0,
        ly + 20.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\">token</text>\n",
        lx + 34.0,
        ly + 24.0
    ));
    svg.push_str("</svg>\n");
    svg
}
