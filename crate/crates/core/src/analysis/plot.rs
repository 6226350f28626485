use std::fmt::Write as _;

use super::RTCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#d62728", "#2ca02c", "#ff7f0e", "#1f77b4", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// "Nice" tick step covering `span` in about five intervals.
fn tick_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Static SVG of mean RT against set size: one polyline per condition
/// with SEM error bars.
pub fn plot_svg(title: &str, curves: &[RTCurve]) -> String {
    let pts = curves.iter().flat_map(|c| c.points.iter()).filter(|p| p.mean.is_finite());
    let (mut x_max, mut y_min, mut y_max) = (1.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x_max = x_max.max(p.set_size as f64);
        y_min = y_min.min(p.mean - p.sem);
        y_max = y_max.max(p.mean + p.sem);
    }
    if !y_min.is_finite() {
        (y_min, y_max) = (0.0, 1.0);
    }
    y_min = y_min.min(0.0);
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    let y_step = tick_step(y_max - y_min);
    let y_top = (y_max / y_step).ceil() * y_step;
    let x_step = tick_step(x_max);
    let x_right = (x_max / x_step).ceil() * x_step;
    let sx = |x: f64| MARGIN + x / x_right * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_top - y_min) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let (x0, y0) = (sx(0.0), sy(y_min));
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.1},{:.1} L{x0:.1},{y0:.1} L{:.1},{y0:.1}" fill="none" stroke="black"/>"#,
        sy(y_top),
        sx(x_right)
    );
    let mut t = 0.0;
    while t <= x_right + 1e-9 {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{y0:.1}" x2="{0:.1}" y2="{1:.1}" stroke="black"/><text x="{0:.1}" y="{2:.1}" text-anchor="middle">{t}</text>"#,
            sx(t),
            y0 + 5.0,
            y0 + 18.0
        );
        t += x_step;
    }
    let mut t = y_min;
    while t <= y_top + 1e-9 {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{1:.1}" x2="{2:.1}" y2="{1:.1}" stroke="black"/><text x="{3:.1}" y="{4:.1}" text-anchor="end">{t}</text>"#,
            x0 - 5.0,
            sy(t),
            x0,
            x0 - 8.0,
            sy(t) + 4.0
        );
        t += y_step;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Set size</text>"#,
        WIDTH / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">Mean RT (iterations)</text>"#,
        HEIGHT / 2.0
    );

    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let finite: Vec<_> = c.points.iter().filter(|p| p.mean.is_finite()).collect();
        let line: Vec<String> = finite
            .iter()
            .map(|p| format!("{:.1},{:.1}", sx(p.set_size as f64), sy(p.mean)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            line.join(" ")
        );
        for p in &finite {
            let x = sx(p.set_size as f64);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="{color}"/><circle cx="{x:.1}" cy="{:.1}" r="3" fill="{color}"/>"#,
                sy(p.mean - p.sem),
                sy(p.mean + p.sem),
                sy(p.mean)
            );
        }
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="12" height="3" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            MARGIN + 10.0,
            ly - 4.0,
            MARGIN + 28.0,
            ly,
            escape(&c.condition)
        );
    }
    s.push_str("</svg>\n");
    s
}
