//! Minimal SVG chart of Widom factors against the degree.

use std::fmt::Write;

use crate::commands::SweepRecord;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const TICKS: usize = 5;

/// Computed factors as a polyline with markers, the predicted limit as a
/// dashed line and the extrapolated limit, if any, as a dotted line.
pub fn widom_chart(rows: &[SweepRecord], predicted: f64, extrapolated: Option<f64>) -> String {
    let ns = rows.iter().map(|r| r.n as f64);
    let (x0, x1) = span(ns.clone().chain(std::iter::empty()));
    let ys = rows
        .iter()
        .map(|r| r.widom)
        .chain([predicted])
        .chain(extrapolated)
        .filter(|v| v.is_finite());
    let (y0, y1) = span(ys);
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);

    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" stroke="black" fill="none"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (x, y) = (px(xv), py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{xv:.0}</text>"#,
            bottom + 4.0,
            bottom + 16.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.4}</text>"#,
            left - 4.0,
            left - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">Widom factor</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let hline = |s: &mut String, y: f64, dash: &str, colour: &str| {
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{:.2}" x2="{right}" y2="{:.2}" stroke="{colour}" stroke-dasharray="{dash}"/>"#,
            py(y),
            py(y)
        );
    };
    if predicted.is_finite() {
        hline(&mut s, predicted, "6 4", "firebrick");
    }
    if let Some(e) = extrapolated.filter(|e| e.is_finite()) {
        hline(&mut s, e, "2 3", "seagreen");
    }

    let points: Vec<String> = rows
        .iter()
        .filter(|r| r.widom.is_finite())
        .map(|r| format!("{:.2},{:.2}", px(r.n as f64), py(r.widom)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" stroke="steelblue" stroke-width="1.5" fill="none"/>"#,
        points.join(" ")
    );
    for r in rows.iter().filter(|r| r.widom.is_finite()) {
        let colour = if r.flagged { "orange" } else { "steelblue" };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#,
            px(r.n as f64),
            py(r.widom)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Finite range of the values, widened when degenerate.
fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let d = lo.abs().max(1.0) * 1e-3;
        return (lo - d, hi + d);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, widom: f64) -> SweepRecord {
        SweepRecord {
            n,
            grid: 1024,
            norm: 0.0,
            widom,
            certificate: 0.0,
            predicted: 1.7,
            extrapolated: None,
            converged: true,
            flagged: false,
        }
    }

    #[test]
    fn chart_contains_series_and_limit() {
        let svg = widom_chart(&[row(8, 1.6), row(16, 1.65)], 1.7, Some(1.69));
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("stroke-dasharray=\"6 4\""));
        assert!(svg.contains("stroke-dasharray=\"2 3\""));
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn single_row_does_not_divide_by_zero() {
        let svg = widom_chart(&[row(8, 1.6)], 1.6, None);
        assert!(!svg.contains("NaN"));
    }
}
