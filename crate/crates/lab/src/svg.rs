//! Minimal SVG drawings: a heatmap and a log-log scatter with fitted lines.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

/// Viridis-like stops from low to high.
const RAMP: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

const SERIES_COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn color(s: f64) -> String {
    let s = s.clamp(0.0, 1.0) * (RAMP.len() - 1) as f64;
    let k = (s.floor() as usize).min(RAMP.len() - 2);
    let w = s - k as f64;
    let (a, b) = (RAMP[k], RAMP[k + 1]);
    let mix = |x: f64, y: f64| (x + w * (y - x)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axis_labels(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
}

/// Grid of colored cells; `values[row][col]`, rows drawn bottom to top.
/// Missing cells are drawn gray.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<Option<f64>>],
) -> String {
    let mut out = String::new();
    open(&mut out, title);
    axis_labels(&mut out, x_label, y_label);
    let present = values.iter().flatten().flatten();
    let lo = present.clone().fold(f64::INFINITY, |a, &b| a.min(b));
    let hi = present.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let plot_w = WIDTH - 2.0 * MARGIN - 40.0;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let cw = plot_w / xs.len().max(1) as f64;
    let ch = plot_h / ys.len().max(1) as f64;
    for (r, row) in values.iter().enumerate() {
        let y = HEIGHT - MARGIN - (r + 1) as f64 * ch;
        for (c, v) in row.iter().enumerate() {
            let fill = v.map_or_else(|| "#bbbbbb".to_string(), |v| color((v - lo) / span));
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                MARGIN + c as f64 * cw,
                y,
                cw + 0.05,
                ch + 0.05
            );
        }
        if let Some(label) = ys.get(r) {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#,
                MARGIN - 4.0,
                y + ch / 2.0 + 4.0
            );
        }
    }
    let ticks = 4.min(xs.len().saturating_sub(1)).max(1);
    for k in 0..=ticks {
        let c = k * (xs.len().saturating_sub(1)) / ticks;
        if let Some(x) = xs.get(c) {
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x:.3}</text>"#,
                MARGIN + (c as f64 + 0.5) * cw,
                HEIGHT - MARGIN + 16.0
            );
        }
    }
    let bar_x = WIDTH - MARGIN - 20.0;
    for k in 0..32 {
        let s = k as f64 / 31.0;
        let _ = writeln!(
            out,
            r#"<rect x="{bar_x:.1}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#,
            HEIGHT - MARGIN - (k + 1) as f64 * plot_h / 32.0,
            plot_h / 32.0 + 0.05,
            color(s)
        );
    }
    if lo.is_finite() {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">{lo:.4}</text>"#,
            bar_x - 4.0,
            HEIGHT - MARGIN + 16.0
        );
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">{hi:.4}</text>"#, bar_x - 4.0, MARGIN - 6.0);
    }
    out.push_str("</svg>\n");
    out
}

/// One scatter series with an optional fitted power law `y = C x^slope`.
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
    pub fit: Option<(f64, f64)>,
}

/// Log-log scatter; non-positive points are skipped.
pub fn loglog_scatter(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    axis_labels(&mut out, x_label, y_label);
    let usable = |p: &&(f64, f64)| p.0 > 0.0 && p.1 > 0.0;
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().filter(usable).map(|p| (p.0.log10(), p.1.log10())))
        .collect();
    let bounds = |f: fn(&(f64, f64)) -> f64| {
        let lo = all.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = all.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi > lo {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let plot_w = WIDTH - 2.0 * MARGIN - 120.0;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |lx: f64| MARGIN + (lx - x0) / (x1 - x0) * plot_w;
    let py = |ly: f64| HEIGHT - MARGIN - (ly - y0) / (y1 - y0) * plot_h;
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="#444"/>"##
    );
    for k in (x0.ceil() as i32)..=(x1.floor() as i32) {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">1e{k}</text>"#,
            px(k as f64),
            HEIGHT - MARGIN + 16.0
        );
    }
    for k in (y0.ceil() as i32)..=(y1.floor() as i32) {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{k}</text>"#,
            MARGIN - 4.0,
            py(k as f64) + 4.0
        );
    }
    for (k, s) in series.iter().enumerate() {
        let stroke = SERIES_COLORS[k % SERIES_COLORS.len()];
        for p in s.points.iter().filter(usable) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{stroke}"/>"#,
                px(p.0.log10()),
                py(p.1.log10())
            );
        }
        if let Some((slope, constant)) = s.fit {
            let line = |lx: f64| constant.log10() + slope * lx;
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-dasharray="5 3"/>"#,
                px(x0),
                py(line(x0)),
                px(x1),
                py(line(x1))
            );
        }
        let ly = MARGIN + 18.0 * k as f64 + 8.0;
        let label = match s.fit {
            Some((slope, _)) => format!("{} (slope {slope:.3})", s.name),
            None => s.name.to_string(),
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.1}" cy="{ly:.1}" r="4" fill="{stroke}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            WIDTH - MARGIN - 100.0,
            WIDTH - MARGIN - 92.0,
            ly + 4.0,
            escape(&label)
        );
    }
    out.push_str("</svg>\n");
    out
}
