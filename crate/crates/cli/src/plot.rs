//! Plot-ready output: two-column `.dat` files and a small self-contained SVG
//! line chart.

use std::fmt::Write as _;

use nsp_core::export::fmt_sig17;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    pub fn new(label: impl Into<String>, x: &[f64], y: &[f64]) -> Self {
        Self { label: label.into(), points: x.iter().copied().zip(y.iter().copied()).collect() }
    }

    /// Horizontal reference line at `y` over `[x0, x1]`.
    pub fn level(label: impl Into<String>, y: f64, x0: f64, x1: f64) -> Self {
        Self { label: label.into(), points: vec![(x0, y), (x1, y)] }
    }
}

/// Whitespace-separated `x y` lines with a `#` header.
pub fn dat_text(curve: &Curve, x_name: &str, y_name: &str) -> CliResult<String> {
    if curve.points.is_empty() {
        return Err(CliError::EmptySeries(curve.label.clone()));
    }
    let mut s = format!("# {x_name} {y_name}\n");
    for (x, y) in &curve.points {
        let _ = writeln!(s, "{} {}", fmt_sig17(*x), fmt_sig17(*y));
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / count as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG line chart of one or more curves. On a log axis, non-positive values are
/// dropped from the drawing.
pub fn svg_chart(spec: &ChartSpec, curves: &[Curve]) -> CliResult<String> {
    if curves.is_empty() || curves.iter().all(|c| c.points.is_empty()) {
        return Err(CliError::EmptySeries(spec.title.clone()));
    }
    let ty = |y: f64| if spec.log_y { y.log10() } else { y };
    let visible: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            c.points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite() && (!spec.log_y || *y > 0.0))
                .map(|(x, y)| (*x, ty(*y)))
                .collect()
        })
        .collect();
    let all: Vec<(f64, f64)> = visible.iter().flatten().copied().collect();
    if all.is_empty() {
        return Err(CliError::EmptySeries(format!("{} (no drawable points)", spec.title)));
    }
    let (mut x0, mut x1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (mut y0, mut y1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 <= y0 {
        let pad = if y0 == 0.0 { 1.0 } else { 0.1 * y0.abs() };
        y0 -= pad;
        y1 += pad;
    } else {
        let pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    if spec.log_y {
        y0 = y0.floor();
        y1 = y1.ceil();
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, escape(&spec.title));
    let _ = writeln!(s, r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##);

    for xt in nice_ticks(x0, x1, 6) {
        let x = px(xt);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##, TOP + ph);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, tick_label(xt));
    }
    let yticks: Vec<f64> = if spec.log_y {
        let step = ((y1 - y0) / 8.0).ceil().max(1.0);
        let mut v = Vec::new();
        let mut e = y0;
        while e <= y1 + 1e-9 {
            v.push(e);
            e += step;
        }
        v
    } else {
        nice_ticks(y0, y1, 6)
    };
    for yt in yticks {
        let y = py(yt);
        let label = if spec.log_y { format!("1e{}", yt as i64) } else { tick_label(yt) };
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 16.0, escape(&spec.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    );

    for (i, (curve, pts)) in curves.iter().zip(&visible).enumerate() {
        let color = COLORS[i % COLORS.len()];
        if !pts.is_empty() {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{}"/>"#, path.join(" "));
        }
        let ly = TOP + 16.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 14.0;
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 24.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&curve.label));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
