//! Standalone SVG scatter rendering: distance records against an optional
//! through-origin line, no external renderer involved.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 56.0;
const TICKS: usize = 5;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn tick_label(value: f64) -> String {
    format!("{value:.2}")
}

/// Render `(d_psi, d_n)` points and, when given, the line `d_n = slope *
/// d_psi`. Axes start at the origin because the metrics are non-negative;
/// an empty point set still produces complete axes.
pub fn render_scatter(points: &[(f64, f64)], slope: Option<f64>, title: &str) -> String {
    let max_x = points
        .iter()
        .map(|p| p.0)
        .fold(0.0_f64, f64::max)
        .max(f64::EPSILON)
        * 1.05;
    let max_y = points
        .iter()
        .map(|p| p.1)
        .fold(0.0_f64, f64::max)
        .max(f64::EPSILON)
        * 1.05;
    let (max_x, max_y) = if points.is_empty() {
        (1.0, 1.0)
    } else {
        (max_x, max_y)
    };
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_LEFT + x / max_x * plot_w,
            HEIGHT - MARGIN_BOTTOM - y / max_y * plot_h,
        )
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    let (origin_x, origin_y) = to_px(0.0, 0.0);
    let (end_x, _) = to_px(max_x, 0.0);
    let (_, end_y) = to_px(0.0, max_y);
    let _ = writeln!(
        svg,
        r#"<line x1="{origin_x}" y1="{origin_y}" x2="{end_x}" y2="{origin_y}" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{origin_x}" y1="{origin_y}" x2="{origin_x}" y2="{end_y}" stroke="black"/>"#
    );
    for k in 0..=TICKS {
        let fx = max_x * k as f64 / TICKS as f64;
        let fy = max_y * k as f64 / TICKS as f64;
        let (px, _) = to_px(fx, 0.0);
        let (_, py) = to_px(0.0, fy);
        let _ = writeln!(
            svg,
            r#"<line x1="{px}" y1="{origin_y}" x2="{px}" y2="{}" stroke="black"/>"#,
            origin_y + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            origin_y + 18.0,
            tick_label(fx)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{py}" x2="{origin_x}" y2="{py}" stroke="black"/>"#,
            origin_x - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            origin_x - 8.0,
            py + 4.0,
            tick_label(fy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">D_psi</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {})">D_n</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    if let Some(slope) = slope {
        if slope.is_finite() && slope >= 0.0 {
            let x_end = if slope * max_x <= max_y {
                max_x
            } else {
                max_y / slope
            };
            let (x1, y1) = to_px(0.0, 0.0);
            let (x2, y2) = to_px(x_end, slope * x_end);
            let _ = writeln!(
                svg,
                r##"<line class="fit" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#555555" stroke-dasharray="6 4"/>"##
            );
        }
    }

    for &(x, y) in points {
        let (px, py) = to_px(x, y);
        let _ = writeln!(
            svg,
            r##"<circle class="mark" cx="{px}" cy="{py}" r="3" fill="#c0392b" fill-opacity="0.65"/>"##
        );
    }
    svg.push_str("</svg>\n");
    svg
}
