//! Minimal SVG line and cell renderer. Output depends only on the input data.

use std::fmt::Write as _;

const W: f64 = 720.0;
const H: f64 = 480.0;
const ML: f64 = 80.0;
const MR: f64 = 160.0;
const MT: f64 = 40.0;
const MB: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
    /// Filled unit cells centred on these points (for region maps).
    pub cells: Vec<(f64, f64)>,
    pub cell_label: Option<String>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let t = if log { v.log10() } else { v };
            lo = lo.min(t);
            hi = hi.max(t);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-12 {
            lo -= 0.5;
            hi += 0.5;
        }
        if log {
            lo = lo.floor();
            hi = hi.ceil();
        }
        Axis { lo, hi, log }
    }

    fn t(&self, v: f64) -> Option<f64> {
        if !v.is_finite() || (self.log && v <= 0.0) {
            return None;
        }
        let x = if self.log { v.log10() } else { v };
        Some((x - self.lo) / (self.hi - self.lo))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo as i32, self.hi as i32);
            let step = ((b - a) / 8).max(1);
            (a..=b)
                .step_by(step as usize)
                .map(|e| ((f64::from(e) - self.lo) / (self.hi - self.lo), format!("1e{e}")))
                .collect()
        } else {
            (0..=5)
                .map(|k| {
                    let f = f64::from(k) / 5.0;
                    let v = self.lo + f * (self.hi - self.lo);
                    (f, format!("{}", (v * 1e4).round() / 1e4))
                })
                .collect()
        }
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(chart: &Chart) -> String {
    let xs = chart
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .chain(chart.cells.iter().map(|c| c.0));
    let ys = chart
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .chain(chart.cells.iter().map(|c| c.1));
    let ax = Axis::fit(xs, chart.log_x);
    let ay = Axis::fit(ys, chart.log_y);
    let pw = W - ML - MR;
    let ph = H - MT - MB;
    let px = |f: f64| ML + f * pw;
    let py = |f: f64| MT + (1.0 - f) * ph;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        ML + pw / 2.0,
        esc(&chart.title)
    );
    let _ = writeln!(
        s,
        r##"<defs><clipPath id="plot"><rect x="{ML}" y="{MT}" width="{pw}" height="{ph}"/></clipPath></defs>"##
    );
    if !chart.cells.is_empty() {
        // Cell size from the axis span; cells assume unit spacing in data units.
        let cw = if chart.log_x { 4.0 } else { pw / (ax.hi - ax.lo + 1.0) };
        let ch = if chart.log_y { 4.0 } else { ph / (ay.hi - ay.lo + 1.0) };
        let _ = writeln!(s, r##"<g clip-path="url(#plot)" fill="#c6dbef">"##);
        for &(x, y) in &chart.cells {
            if let (Some(fx), Some(fy)) = (ax.t(x), ay.t(y)) {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
                    px(fx) - cw / 2.0,
                    py(fy) - ch / 2.0,
                    cw,
                    ch
                );
            }
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(
        s,
        r##"<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>"##
    );
    for (f, label) in ax.ticks() {
        let x = px(f);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##,
            MT + ph,
            MT + ph + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MT + ph + 18.0,
            esc(&label)
        );
    }
    for (f, label) in ay.ticks() {
        let y = py(f);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{ML}" y2="{y:.2}" stroke="#000"/>"##,
            ML - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ML - 8.0,
            y + 4.0,
            esc(&label)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        ML + pw / 2.0,
        H - 15.0,
        esc(&chart.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        MT + ph / 2.0,
        MT + ph / 2.0,
        esc(&chart.y_label)
    );
    let _ = writeln!(s, r#"<g clip-path="url(#plot)" fill="none" stroke-width="1.5">"#);
    for (k, series) in chart.series.iter().enumerate() {
        let pts: Vec<String> = series
            .points
            .iter()
            .filter_map(|&(x, y)| Some(format!("{:.2},{:.2}", px(ax.t(x)?), py(ay.t(y)?))))
            .collect();
        if pts.len() >= 2 {
            let _ = writeln!(
                s,
                r#"<polyline stroke="{}" points="{}"/>"#,
                PALETTE[k % PALETTE.len()],
                pts.join(" ")
            );
        }
    }
    let _ = writeln!(s, "</g>");
    let mut ly = MT + 10.0;
    let lx = W - MR + 12.0;
    if let Some(label) = &chart.cell_label {
        let _ = writeln!(
            s,
            r##"<rect x="{lx}" y="{:.1}" width="14" height="10" fill="#c6dbef"/>"##,
            ly - 9.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}">{}</text>"#, lx + 20.0, esc(label));
        ly += 18.0;
    }
    for (k, series) in chart.series.iter().enumerate() {
        let c = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{c}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 14.0,
            ly - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}">{}</text>"#,
            lx + 20.0,
            esc(&series.name)
        );
        ly += 18.0;
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_is_deterministic() {
        let chart = Chart {
            title: "t".into(),
            series: vec![Series {
                name: "a<b".into(),
                points: vec![(1.0, 1.0), (10.0, 100.0)],
            }],
            cells: vec![(2.0, 3.0)],
            log_y: true,
            ..Chart::default()
        };
        let a = render(&chart);
        assert_eq!(a, render(&chart));
        assert!(a.starts_with("<svg") && a.contains("polyline") && a.contains("a&lt;b"));
    }
}
