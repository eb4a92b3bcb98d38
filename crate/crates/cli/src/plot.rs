//! Minimal static SVG plots: a log-log multi-curve panel for spectra and a
//! linear panel for visibility-versus-order data. No dependencies, output
//! is deterministic byte-for-byte.

use std::fmt::Write as _;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 58.0;

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    /// SVG dash pattern, e.g. "6,4"; empty for a solid line.
    pub dash: &'static str,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn map_x(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn map_y(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        escape(title)
    );
    s
}

fn axes_box(s: &mut String) {
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    );
}

fn axis_labels(s: &mut String, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 14.0,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        escape(ylabel)
    );
}

fn legend(s: &mut String, curves: &[Curve]) {
    let x = MARGIN_LEFT + 14.0;
    let mut y = MARGIN_TOP + 18.0;
    for curve in curves {
        let dash = if curve.dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{}""#, curve.dash)
        };
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="1.6"{dash}/>"#,
            x + 28.0,
            curve.color
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 34.0,
            y + 4.0,
            escape(&curve.label)
        );
        y += 17.0;
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Log-log panel of the given curves. Non-positive samples cannot be drawn
/// on log axes; they break the polyline instead of being clamped.
pub fn log_log_svg(title: &str, xlabel: &str, ylabel: &str, curves: &[Curve]) -> String {
    let mut x_range: Option<(f64, f64)> = None;
    let mut y_range: Option<(f64, f64)> = None;
    for (x, y) in curves.iter().flat_map(|c| &c.points) {
        if *x > 0.0 && *y > 0.0 {
            let (lx, ly) = (x.log10(), y.log10());
            x_range = Some(x_range.map_or((lx, lx), |(a, b)| (a.min(lx), b.max(lx))));
            y_range = Some(y_range.map_or((ly, ly), |(a, b)| (a.min(ly), b.max(ly))));
        }
    }
    let (x0, x1) = x_range.unwrap_or((0.0, 1.0));
    let (y0, y1) = y_range.unwrap_or((0.0, 1.0));
    let frame = Frame {
        x0: x0.floor(),
        x1: x1.ceil().max(x0.floor() + 1.0),
        y0: y0.floor(),
        y1: y1.ceil().max(y0.floor() + 1.0),
    };

    let mut s = header(title);
    // decade grid and tick labels
    for decade in (frame.x0 as i32)..=(frame.x1 as i32) {
        let px = frame.map_x(decade as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.1}" y1="{MARGIN_TOP}" x2="{px:.1}" y2="{:.1}" stroke="#dddddd" stroke-width="0.7"/>"##,
            HEIGHT - MARGIN_BOTTOM
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">1e{decade}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 16.0
        );
    }
    for decade in (frame.y0 as i32)..=(frame.y1 as i32) {
        let py = frame.map_y(decade as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_LEFT}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#dddddd" stroke-width="0.7"/>"##,
            WIDTH - MARGIN_RIGHT
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{py:.1}" font-family="sans-serif" font-size="11" text-anchor="end">1e{decade}</text>"#,
            MARGIN_LEFT - 6.0
        );
    }

    for curve in curves {
        let dash = if curve.dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{}""#, curve.dash)
        };
        // split the trace wherever a sample cannot be placed on log axes
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, s: &mut String| {
            if seg.len() >= 2 {
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.6"{dash}/>"#,
                    seg.join(" "),
                    curve.color
                );
            }
            seg.clear();
        };
        for &(x, y) in &curve.points {
            if x > 0.0 && y > 0.0 {
                segment.push(format!(
                    "{:.2},{:.2}",
                    frame.map_x(x.log10()),
                    frame.map_y(y.log10())
                ));
            } else {
                flush(&mut segment, &mut s);
            }
        }
        flush(&mut segment, &mut s);
    }

    axes_box(&mut s);
    axis_labels(&mut s, xlabel, ylabel);
    legend(&mut s, curves);
    s.push_str("</svg>\n");
    s
}

/// Linear panel: visibility data points (with optional error bars) and the
/// fitted decay curve.
pub fn visibility_svg(title: &str, data: &[(f64, f64, Option<f64>)], fit: &[(f64, f64)]) -> String {
    let x_max = data
        .iter()
        .map(|d| d.0)
        .chain(fit.iter().map(|f| f.0))
        .fold(1.0_f64, f64::max)
        + 0.5;
    let frame = Frame {
        x0: 0.0,
        x1: x_max,
        y0: 0.0,
        y1: 1.0,
    };

    let mut s = header(title);
    // y ticks every 0.2, x ticks at integers
    for i in 0..=5 {
        let v = i as f64 * 0.2;
        let py = frame.map_y(v);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_LEFT}" y1="{py:.1}" x2="{:.1}" y2="{py:.1}" stroke="#dddddd" stroke-width="0.7"/>"##,
            WIDTH - MARGIN_RIGHT
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{py:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.1}</text>"#,
            MARGIN_LEFT - 6.0
        );
    }
    for p in 0..=(x_max as i32) {
        let px = frame.map_x(p as f64);
        let _ = writeln!(
            s,
            r#"<text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{p}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 16.0
        );
    }

    if fit.len() >= 2 {
        let pts: Vec<String> = fit
            .iter()
            .map(|&(x, y)| {
                format!(
                    "{:.2},{:.2}",
                    frame.map_x(x),
                    frame.map_y(y.clamp(0.0, 1.0))
                )
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1.6"/>"##,
            pts.join(" ")
        );
    }
    for &(p, v, sigma) in data {
        let (px, py) = (frame.map_x(p), frame.map_y(v));
        if let Some(sig) = sigma {
            let (lo, hi) = (
                frame.map_y((v - sig).max(0.0)),
                frame.map_y((v + sig).min(1.0)),
            );
            let _ = writeln!(
                s,
                r##"<line x1="{px:.1}" y1="{lo:.1}" x2="{px:.1}" y2="{hi:.1}" stroke="#d62728" stroke-width="1.2"/>"##
            );
        }
        let _ = writeln!(
            s,
            r##"<circle cx="{px:.1}" cy="{py:.1}" r="4" fill="#d62728"/>"##
        );
    }

    axes_box(&mut s);
    axis_labels(&mut s, "diffraction order p", "fringe visibility");
    legend(
        &mut s,
        &[
            Curve {
                label: "measured".into(),
                points: vec![],
                color: "#d62728",
                dash: "",
            },
            Curve {
                label: "Gaussian fit".into(),
                points: vec![],
                color: "#1f77b4",
                dash: "",
            },
        ],
    );
    s.push_str("</svg>\n");
    s
}
