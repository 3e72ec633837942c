//! Self-contained SVG plots of result tables.
//!
//! Output depends only on the table and the request: coordinates are
//! printed with fixed precision and nothing external is referenced.

use std::fmt::Write as _;

use super::table::ResultTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    Line,
    Loglog,
    Heatmap,
}

/// Which columns to draw. `value` is the colour column of a heatmap.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRequest {
    pub kind: PlotKind,
    pub x: String,
    pub y: Vec<String>,
    pub value: Option<String>,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlotError {
    #[error("column {0:?} is not in the table")]
    MissingColumn(String),
    #[error("table has no rows to plot")]
    EmptyData,
    #[error("log axes need positive values in column {0:?}")]
    NonPositive(String),
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub fn plot(table: &ResultTable, request: &PlotRequest) -> Result<String, PlotError> {
    let column = |name: &str| table.column(name).ok_or_else(|| PlotError::MissingColumn(name.to_string()));
    let x = column(&request.x)?;
    let ys = request
        .y
        .iter()
        .map(|name| column(name))
        .collect::<Result<Vec<_>, _>>()?;
    if request.y.is_empty() {
        return Err(PlotError::MissingColumn(String::new()));
    }
    let value = match (&request.kind, &request.value) {
        (PlotKind::Heatmap, Some(v)) => Some(column(v)?),
        (PlotKind::Heatmap, None) => return Err(PlotError::MissingColumn("value".into())),
        _ => None,
    };
    if table.is_empty() {
        return Err(PlotError::EmptyData);
    }
    let mut svg = Svg::new(&request.title);
    match request.kind {
        PlotKind::Line => series_plot(&mut svg, request, &x, &ys, false)?,
        PlotKind::Loglog => series_plot(&mut svg, request, &x, &ys, true)?,
        PlotKind::Heatmap => heatmap(&mut svg, request, &x, &ys[0], &value.expect("checked above")),
    }
    Ok(svg.finish())
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(body, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + 0.5 * (WIDTH - LEFT - RIGHT),
            escape(title)
        );
        Svg { body }
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{}</text>"#,
            escape(s)
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}"/>"#
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-3..1e4).contains(&v.abs()) {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Linear map from data range to pixel range, padded when degenerate.
struct Axis {
    lo: f64,
    hi: f64,
    p0: f64,
    p1: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, p0: f64, p1: f64) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if lo == hi {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            lo -= pad;
            hi += pad;
        }
        Axis { lo, hi, p0, p1 }
    }

    fn map(&self, v: f64) -> f64 {
        self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=4).map(|i| self.lo + (self.hi - self.lo) * i as f64 / 4.0).collect()
    }
}

fn frame(svg: &mut Svg, xa: &Axis, ya: &Axis, xlabel: &str, ylabel: &str, log: bool) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    svg.line(x0, y0, x1, y0, "black");
    svg.line(x0, y0, x0, y1, "black");
    let fmt = |v: f64| if log { format!("1e{v:.1}") } else { label(v) };
    for t in xa.ticks() {
        let p = xa.map(t);
        svg.line(p, y0, p, y0 + 4.0, "black");
        svg.text(p, y0 + 16.0, "middle", &fmt(t));
    }
    for t in ya.ticks() {
        let p = ya.map(t);
        svg.line(x0 - 4.0, p, x0, p, "black");
        svg.text(x0 - 6.0, p + 4.0, "end", &fmt(t));
    }
    svg.text(0.5 * (x0 + x1), HEIGHT - 12.0, "middle", xlabel);
    svg.text(14.0, TOP - 10.0, "start", ylabel);
}

fn series_plot(svg: &mut Svg, request: &PlotRequest, x: &[f64], ys: &[Vec<f64>], log: bool) -> Result<(), PlotError> {
    let tx = |v: f64| if log { v.log10() } else { v };
    if log {
        if x.iter().any(|v| !(*v > 0.0)) {
            return Err(PlotError::NonPositive(request.x.clone()));
        }
        for (name, y) in request.y.iter().zip(ys) {
            if y.iter().any(|v| !(*v > 0.0)) {
                return Err(PlotError::NonPositive(name.clone()));
            }
        }
    }
    let xa = Axis::new(x.iter().map(|v| tx(*v)), LEFT, WIDTH - RIGHT);
    let ya = Axis::new(ys.iter().flatten().map(|v| tx(*v)), HEIGHT - BOTTOM, TOP);
    frame(svg, &xa, &ya, &request.x, &request.y.join(", "), log);
    for (i, (name, y)) in request.y.iter().zip(ys).enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = x
            .iter()
            .zip(y)
            .map(|(a, b)| format!("{:.2},{:.2}", xa.map(tx(*a)), ya.map(tx(*b))))
            .collect();
        let _ = writeln!(
            svg.body,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        for p in &points {
            let (px, py) = p.split_once(',').expect("formatted pair");
            let _ = writeln!(svg.body, r#"<circle cx="{px}" cy="{py}" r="2" fill="{colour}"/>"#);
        }
        let ly = TOP + 16.0 * i as f64 + 8.0;
        svg.line(WIDTH - RIGHT + 10.0, ly, WIDTH - RIGHT + 30.0, ly, colour);
        svg.text(WIDTH - RIGHT + 34.0, ly + 4.0, "start", name);
    }
    if log && x.len() >= 2 {
        let slope = fitted_slope(x, &ys[0]);
        let ly = TOP + 16.0 * request.y.len() as f64 + 16.0;
        svg.text(WIDTH - RIGHT + 10.0, ly, "start", &format!("slope {slope:.3}"));
    }
    Ok(())
}

/// Least-squares slope of `log y` against `log x`.
pub fn fitted_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn distinct(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Cells on the distinct `(x, y)` pairs, coloured by the mean value of the
/// rows that land on them.
fn heatmap(svg: &mut Svg, request: &PlotRequest, x: &[f64], y: &[f64], value: &[f64]) {
    let xs = distinct(x);
    let ys = distinct(y);
    let mut sum = vec![0.0; xs.len() * ys.len()];
    let mut count = vec![0usize; xs.len() * ys.len()];
    for ((a, b), v) in x.iter().zip(y).zip(value) {
        let i = xs.iter().position(|q| q == a).expect("distinct x");
        let j = ys.iter().position(|q| q == b).expect("distinct y");
        sum[j * xs.len() + i] += v;
        count[j * xs.len() + i] += 1;
    }
    let cells: Vec<Option<f64>> = sum
        .iter()
        .zip(&count)
        .map(|(s, n)| (*n > 0).then(|| s / *n as f64))
        .collect();
    let (lo, hi) = cells
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (x0, y0) = (LEFT, TOP);
    let w = (WIDTH - LEFT - RIGHT) / xs.len() as f64;
    let h = (HEIGHT - TOP - BOTTOM) / ys.len() as f64;
    for (j, _) in ys.iter().enumerate() {
        for (i, _) in xs.iter().enumerate() {
            let Some(v) = cells[j * xs.len() + i] else { continue };
            let colour = shade((v - lo) / span);
            let top = y0 + (ys.len() - 1 - j) as f64 * h;
            let _ = writeln!(
                svg.body,
                r#"<rect x="{:.2}" y="{top:.2}" width="{w:.2}" height="{h:.2}" fill="{colour}"/>"#,
                x0 + i as f64 * w
            );
        }
    }
    for (i, v) in xs.iter().enumerate() {
        svg.text(x0 + (i as f64 + 0.5) * w, HEIGHT - BOTTOM + 16.0, "middle", &label(*v));
    }
    for (j, v) in ys.iter().enumerate() {
        let centre = y0 + (ys.len() - 1 - j) as f64 * h + 0.5 * h;
        svg.text(x0 - 6.0, centre + 4.0, "end", &label(*v));
    }
    svg.text(0.5 * (LEFT + WIDTH - RIGHT), HEIGHT - 12.0, "middle", &request.x);
    svg.text(14.0, TOP - 10.0, "start", &request.y[0]);
    let bar = WIDTH - RIGHT + 20.0;
    for s in 0..=20 {
        let f = s as f64 / 20.0;
        let top = HEIGHT - BOTTOM - (f * (HEIGHT - TOP - BOTTOM - 20.0)) - 15.0;
        let _ = writeln!(
            svg.body,
            r#"<rect x="{bar:.2}" y="{top:.2}" width="16" height="15" fill="{}"/>"#,
            shade(f)
        );
    }
    svg.text(bar + 20.0, HEIGHT - BOTTOM - 4.0, "start", &label(lo));
    svg.text(bar + 20.0, TOP + 4.0, "start", &label(hi));
    svg.text(bar, TOP - 10.0, "start", request.value.as_deref().unwrap_or(""));
}

fn shade(f: f64) -> String {
    let f = f.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(247.0, 8.0), lerp(251.0, 48.0), lerp(255.0, 107.0))
}
