//! Static SVG line chart of mean cumulative regret against round.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use adscale_core::{AggregateCurve, PolicyKind};

use crate::error::{LabError, Result};
use crate::output::create;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn color(policy: PolicyKind) -> &'static str {
    match policy {
        PolicyKind::Aaeas => "#d62728",
        PolicyKind::Broad => "#1f77b4",
        PolicyKind::Ucb => "#2ca02c",
        PolicyKind::Aae => "#ff7f0e",
        PolicyKind::Thompson => "#9467bd",
        PolicyKind::Exp3pp => "#8c564b",
        PolicyKind::Tsallis => "#e377c2",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Tick step from {1, 2, 5}·10^n giving roughly `target` intervals.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1e5 || (v != 0.0 && v.abs() < 1e-3) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders the chart as a string. With `log_x` the round axis is log10.
pub fn render_svg(curves: &[&AggregateCurve], log_x: bool, title: &str) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let xf = |r: u64| if log_x { (r.max(1) as f64).log10() } else { r as f64 };

    let all_rounds = curves.iter().flat_map(|c| c.rounds.iter().copied());
    let (rmin, rmax) = all_rounds.fold((u64::MAX, 0), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let (mut x0, mut x1) = if rmax == 0 { (0.0, 1.0) } else { (if log_x { xf(rmin) } else { 0.0 }, xf(rmax)) };
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    let ymax_raw = curves.iter().flat_map(|c| c.mean.iter().copied()).fold(0.0, f64::max);
    let ystep = nice_step(if ymax_raw > 0.0 { ymax_raw } else { 1.0 }, 5.0);
    let y1 = (ymax_raw / ystep).ceil().max(1.0) * ystep;

    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + plot_h - y / y1 * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // Axes.
    let (ax, ay) = (LEFT, TOP + plot_h);
    let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{}" y2="{ay}" stroke="black"/>"#, LEFT + plot_w);
    let _ = writeln!(s, r#"<line x1="{ax}" y1="{TOP}" x2="{ax}" y2="{ay}" stroke="black"/>"#);

    let mut y = 0.0;
    while y <= y1 + ystep * 1e-9 {
        let yy = py(y);
        let _ = writeln!(s, r##"<line x1="{ax}" y1="{yy:.2}" x2="{}" y2="{yy:.2}" stroke="#e0e0e0"/>"##, LEFT + plot_w);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, ax - 6.0, yy + 4.0, fmt_tick(y));
        y += ystep;
    }
    let xticks: Vec<(f64, String)> = if log_x {
        (x0.ceil() as i64..=x1.floor() as i64).map(|e| (e as f64, format!("1e{e}"))).collect()
    } else {
        let step = nice_step(x1 - x0, 5.0);
        let mut v = Vec::new();
        let mut x = (x0 / step).ceil() * step;
        while x <= x1 + step * 1e-9 {
            v.push((x, fmt_tick(x)));
            x += step;
        }
        v
    };
    for (x, label) in xticks {
        let xx = px(x);
        let _ = writeln!(s, r#"<line x1="{xx:.2}" y1="{ay}" x2="{xx:.2}" y2="{}" stroke="black"/>"#, ay + 5.0);
        let _ = writeln!(s, r#"<text x="{xx:.2}" y="{}" text-anchor="middle">{label}</text>"#, ay + 20.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        if log_x { "round (log scale)" } else { "round" }
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">mean cumulative pseudo-regret</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, c) in curves.iter().enumerate() {
        let pts: Vec<String> =
            c.rounds.iter().zip(&c.mean).map(|(&r, &m)| format!("{:.2},{:.2}", px(xf(r)), py(m))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.8" points="{}"/>"#,
            color(c.policy),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="3"/>"#,
            lx + 25.0,
            color(c.policy)
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, ly + 4.0, c.policy);
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(curves: &[&AggregateCurve], log_x: bool, title: &str, path: &Path) -> Result<()> {
    if curves.is_empty() {
        return Err(LabError::Invalid("no curves to plot".into()));
    }
    let svg = render_svg(curves, log_x, title);
    let mut w = create(path)?;
    w.write_all(svg.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|source| LabError::Io { path: path.to_path_buf(), source })
}
