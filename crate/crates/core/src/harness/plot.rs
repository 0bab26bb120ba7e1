//! Minimal SVG learning-curve plot: per variant, the per-episode median
//! across seeds as a line over a shaded interquartile band.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Linear-interpolation quantile of a sorted slice.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per-episode `(q1, median, q3)` over curves of possibly unequal length;
/// episode `i` uses the curves that reach it.
pub fn bands(curves: &[Vec<f64>]) -> Vec<(f64, f64, f64)> {
    let n = curves.iter().map(Vec::len).max().unwrap_or(0);
    (0..n)
        .map(|i| {
            let mut col: Vec<f64> = curves.iter().filter_map(|c| c.get(i).copied()).collect();
            col.sort_by(f64::total_cmp);
            (quantile(&col, 0.25), quantile(&col, 0.5), quantile(&col, 0.75))
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `(variant, curves)` series; metric values are assumed in [0, 1].
pub fn curves_svg(title: &str, series: &[(String, Vec<Vec<f64>>)]) -> String {
    let episodes = series
        .iter()
        .flat_map(|(_, c)| c.iter().map(Vec::len))
        .max()
        .unwrap_or(0)
        .max(1);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let x = |i: usize| LEFT + if episodes > 1 { pw * i as f64 / (episodes - 1) as f64 } else { 0.0 };
    let y = |v: f64| TOP + ph * (1.0 - v.clamp(0.0, 1.0));

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{LEFT}" y="18" font-size="14">{}</text>"#, escape(title)).unwrap();
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{LEFT}" y2="{:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v}</text>"#,
            LEFT - 5.0,
            y(v),
            y(v),
            LEFT - 8.0,
            y(v) + 4.0
        )
        .unwrap();
    }
    for k in 0..=4 {
        let ep = 1 + (episodes - 1) * k / 4;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{ep}</text>"#,
            x(ep - 1),
            TOP + ph + 18.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">episode</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    )
    .unwrap();

    for (k, (name, curves)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let b = bands(curves);
        if b.is_empty() {
            continue;
        }
        let mut band = String::new();
        for (i, q) in b.iter().enumerate() {
            write!(band, "{:.2},{:.2} ", x(i), y(q.2)).unwrap();
        }
        for (i, q) in b.iter().enumerate().rev() {
            write!(band, "{:.2},{:.2} ", x(i), y(q.0)).unwrap();
        }
        writeln!(
            s,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.25" stroke="none"/>"#,
            band.trim_end()
        )
        .unwrap();
        let line: Vec<String> = b.iter().enumerate().map(|(i, q)| format!("{:.2},{:.2}", x(i), y(q.1))).collect();
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            line.join(" ")
        )
        .unwrap();
        let ly = TOP + 20.0 * k as f64 + 10.0;
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            LEFT + pw + 10.0,
            LEFT + pw + 30.0,
            LEFT + pw + 35.0,
            ly + 4.0,
            escape(name)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
