//! Vector-graphics output: Moran scatter plots, correlograms and histograms
//! of local values. Output is byte-for-byte deterministic.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::stats::{CorrelogramPoint, MoranScatter, Quadrant};

/// Styling constants shared by every plot.
pub mod style {
    pub const WIDTH: f64 = 480.0;
    pub const HEIGHT: f64 = 360.0;
    pub const MARGIN_LEFT: f64 = 60.0;
    pub const MARGIN_RIGHT: f64 = 20.0;
    pub const MARGIN_TOP: f64 = 30.0;
    pub const MARGIN_BOTTOM: f64 = 45.0;
    pub const FONT: &str = "Helvetica, Arial, sans-serif";
    pub const FONT_SIZE: f64 = 12.0;
    pub const AXIS: &str = "#333333";
    pub const GUIDE: &str = "#999999";
    pub const MARKER_RADIUS: f64 = 4.0;
    pub const STROKE_WIDTH: f64 = 1.5;
    pub const HH: &str = "#d7301f";
    pub const HL: &str = "#fc8d59";
    pub const LH: &str = "#74a9cf";
    pub const LL: &str = "#0570b0";
    pub const SERIES: &str = "#1f5fbf";
    pub const BAR: &str = "#b0b0b0";
    pub const HIGHLIGHT: &str = "#f28e2b";
    pub const DEFAULT_ALPHA: f64 = 0.01;
    pub const DEFAULT_OUTLIER_K: f64 = 2.0;
}

fn quadrant_color(q: Quadrant) -> &'static str {
    match q {
        Quadrant::HH => style::HH,
        Quadrant::HL => style::HL,
        Quadrant::LH => style::LH,
        Quadrant::LL => style::LL,
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// Short decimal with a typographic minus, e.g. `−0.25`.
pub fn format_number(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    let s = if s == "-0" { "0".to_string() } else { s };
    s.replace('-', "\u{2212}")
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Maps data coordinates into the plotting area.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new((x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Self {
        let pad = |a: f64, b: f64| {
            if (b - a).abs() < 1e-12 {
                let h = if a == 0.0 { 1.0 } else { a.abs() * 0.5 };
                (a - h, b + h)
            } else {
                let m = (b - a) * 0.05;
                (a - m, b + m)
            }
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Frame { x0, x1, y0, y1 }
    }

    fn x(&self, v: f64) -> f64 {
        let w = style::WIDTH - style::MARGIN_LEFT - style::MARGIN_RIGHT;
        style::MARGIN_LEFT + (v - self.x0) / (self.x1 - self.x0) * w
    }

    fn y(&self, v: f64) -> f64 {
        let h = style::HEIGHT - style::MARGIN_TOP - style::MARGIN_BOTTOM;
        style::HEIGHT - style::MARGIN_BOTTOM - (v - self.y0) / (self.y1 - self.y0) * h
    }
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="{f}" font-size="{fs}">"#,
        w = style::WIDTH,
        h = style::HEIGHT,
        f = style::FONT,
        fs = style::FONT_SIZE
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        px(style::WIDTH / 2.0),
        px(style::MARGIN_TOP - 10.0),
        escape(title)
    );
    s
}

fn axes(s: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (l, r) = (style::MARGIN_LEFT, style::WIDTH - style::MARGIN_RIGHT);
    let (t, b) = (style::MARGIN_TOP, style::HEIGHT - style::MARGIN_BOTTOM);
    let _ = writeln!(
        s,
        r#"<rect class="axes" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{}"/>"#,
        px(l),
        px(t),
        px(r - l),
        px(b - t),
        style::AXIS
    );
    for (v, anchor_x) in [(frame.x0, frame.x(frame.x0)), (frame.x1, frame.x(frame.x1))] {
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{}" y="{}" text-anchor="middle">{}</text>"#,
            px(anchor_x),
            px(b + 15.0),
            format_number(v)
        );
    }
    for (v, anchor_y) in [(frame.y0, frame.y(frame.y0)), (frame.y1, frame.y(frame.y1))] {
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{}" y="{}" text-anchor="end">{}</text>"#,
            px(l - 5.0),
            px(anchor_y + 4.0),
            format_number(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        px((l + r) / 2.0),
        px(style::HEIGHT - 8.0),
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
        px(15.0),
        px((t + b) / 2.0),
        px(15.0),
        px((t + b) / 2.0),
        escape(y_label)
    );
}

fn marker(s: &mut String, class: &str, cx: f64, cy: f64, color: &str, solid: bool, extra: &str) {
    let fill = if solid { color } else { "none" };
    let _ = writeln!(
        s,
        r#"<circle class="{class} {}" cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{color}" stroke-width="{}"{extra}/>"#,
        if solid { "solid" } else { "open" },
        px(cx),
        px(cy),
        style::MARKER_RADIUS,
        style::STROKE_WIDTH
    );
}

fn significant(p: Option<f64>, alpha: f64) -> bool {
    p.is_some_and(|p| p < alpha)
}

#[derive(Debug, Clone)]
pub struct ScatterOptions {
    pub alpha: f64,
    /// Residual threshold in standard deviations; `None` disables labels.
    pub outlier_k: Option<f64>,
    /// Node labels indexed by node, used for outliers.
    pub labels: Option<Vec<String>>,
    pub title: String,
}

impl Default for ScatterOptions {
    fn default() -> Self {
        ScatterOptions {
            alpha: style::DEFAULT_ALPHA,
            outlier_k: Some(style::DEFAULT_OUTLIER_K),
            labels: None,
            title: "Moran scatter plot".into(),
        }
    }
}

/// `p_values` is indexed by node. Without it every point is solid.
pub fn scatter_svg(scatter: &MoranScatter, p_values: Option<&[Option<f64>]>, opts: &ScatterOptions) -> Result<String> {
    if scatter.points.is_empty() {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    }
    let xs = extent(scatter.points.iter().map(|p| p.z).chain([0.0]));
    let ys = extent(scatter.points.iter().map(|p| p.lag).chain([0.0]));
    let frame = Frame::new(xs, ys);
    let mut s = header(&opts.title);
    axes(&mut s, &frame, "z", "spatial lag of z");
    let _ = writeln!(
        s,
        r#"<line class="zero" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
        px(frame.x(frame.x0)),
        px(frame.y(0.0)),
        px(frame.x(frame.x1)),
        px(frame.y(0.0)),
        style::GUIDE
    );
    let _ = writeln!(
        s,
        r#"<line class="zero" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
        px(frame.x(0.0)),
        px(frame.y(frame.y0)),
        px(frame.x(0.0)),
        px(frame.y(frame.y1)),
        style::GUIDE
    );
    // Regression line through the origin, clipped to the frame.
    let b = scatter.slope;
    let (mut lx0, mut lx1) = (frame.x0, frame.x1);
    if b.abs() > 1e-12 {
        let (ya, yb) = (frame.y0 / b, frame.y1 / b);
        let (lo, hi) = if ya < yb { (ya, yb) } else { (yb, ya) };
        lx0 = lx0.max(lo);
        lx1 = lx1.min(hi);
    }
    let _ = writeln!(
        s,
        r#"<line class="slope" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}" stroke-dasharray="2 3"/>"#,
        px(frame.x(lx0)),
        px(frame.y(b * lx0)),
        px(frame.x(lx1)),
        px(frame.y(b * lx1)),
        style::AXIS,
        style::STROKE_WIDTH
    );
    let _ = writeln!(
        s,
        r#"<text class="slope-label" x="{}" y="{}" text-anchor="end">I = {}</text>"#,
        px(style::WIDTH - style::MARGIN_RIGHT - 5.0),
        px(style::MARGIN_TOP + 15.0),
        format_number(b)
    );
    for p in &scatter.points {
        let solid = match p_values {
            Some(ps) => significant(ps.get(p.node).copied().flatten(), opts.alpha),
            None => true,
        };
        marker(
            &mut s,
            &format!("point {}", p.quadrant.as_str()),
            frame.x(p.z),
            frame.y(p.lag),
            quadrant_color(p.quadrant),
            solid,
            &format!(r#" data-node="{}""#, p.node),
        );
    }
    if let Some(k) = opts.outlier_k {
        for idx in scatter.outliers(k) {
            let p = &scatter.points[idx];
            let label = opts
                .labels
                .as_ref()
                .and_then(|l| l.get(p.node))
                .cloned()
                .unwrap_or_else(|| p.node.to_string());
            let _ = writeln!(
                s,
                r#"<text class="outlier" x="{}" y="{}">{}</text>"#,
                px(frame.x(p.z) + 6.0),
                px(frame.y(p.lag) - 6.0),
                escape(&label)
            );
        }
    }
    let mut present: Vec<Quadrant> = scatter.points.iter().map(|p| p.quadrant).collect();
    present.sort_by_key(|q| q.as_str());
    present.dedup();
    for (row, q) in present.iter().enumerate() {
        let y = style::MARGIN_TOP + 15.0 + 15.0 * (row as f64 + 1.0);
        let x = style::MARGIN_LEFT + 10.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><circle cx="{}" cy="{}" r="{}" fill="{c}"/><text x="{}" y="{}">{}</text></g>"#,
            px(x),
            px(y - 4.0),
            style::MARKER_RADIUS,
            px(x + 8.0),
            px(y),
            q.as_str(),
            c = quadrant_color(*q)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct CorrelogramOptions {
    pub alpha: f64,
    pub title: String,
    pub y_label: String,
}

impl Default for CorrelogramOptions {
    fn default() -> Self {
        CorrelogramOptions {
            alpha: style::DEFAULT_ALPHA,
            title: "Correlogram".into(),
            y_label: "I(d)".into(),
        }
    }
}

pub fn correlogram_svg(points: &[CorrelogramPoint], opts: &CorrelogramOptions) -> Result<String> {
    let valued: Vec<&CorrelogramPoint> = points.iter().filter(|p| p.value.is_some()).collect();
    if valued.is_empty() {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    }
    let xs = extent(points.iter().map(|p| p.d as f64));
    let ys = extent(valued.iter().filter_map(|p| p.value).chain([0.0]));
    let frame = Frame::new(xs, ys);
    let mut s = header(&opts.title);
    axes(&mut s, &frame, "distance d", &opts.y_label);
    let _ = writeln!(
        s,
        r#"<line class="zero" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
        px(frame.x(frame.x0)),
        px(frame.y(0.0)),
        px(frame.x(frame.x1)),
        px(frame.y(0.0)),
        style::GUIDE
    );
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for p in points {
        match p.value {
            Some(v) => runs
                .last_mut()
                .expect("nonempty")
                .push((frame.x(p.d as f64), frame.y(v))),
            None => runs.push(Vec::new()),
        }
    }
    for run in runs.iter().filter(|r| r.len() > 1) {
        let coords: Vec<String> = run.iter().map(|(x, y)| format!("{},{}", px(*x), px(*y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" points="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            coords.join(" "),
            style::SERIES,
            style::STROKE_WIDTH
        );
    }
    for p in &valued {
        marker(
            &mut s,
            "marker",
            frame.x(p.d as f64),
            frame.y(p.value.expect("filtered")),
            style::SERIES,
            significant(p.p_value, opts.alpha),
            &format!(r#" data-d="{}""#, p.d),
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct HistogramOptions {
    pub alpha: f64,
    /// Bin count; `None` uses Sturges' rule.
    pub bins: Option<usize>,
    pub title: String,
    pub x_label: String,
}

impl Default for HistogramOptions {
    fn default() -> Self {
        HistogramOptions {
            alpha: style::DEFAULT_ALPHA,
            bins: None,
            title: "Local values".into(),
            x_label: "I_i".into(),
        }
    }
}

/// One bar of a histogram: `[lo, hi)` except the last, which is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub highlighted: bool,
}

/// Bins the present values; a bin is highlighted if any of its nodes has
/// `p < alpha`.
pub fn histogram_bins(
    values: &[Option<f64>],
    p_values: &[Option<f64>],
    alpha: f64,
    bins: Option<usize>,
) -> Result<Vec<Bin>> {
    if values.len() != p_values.len() {
        return Err(Error::DimensionMismatch {
            expected: values.len(),
            got: p_values.len(),
        });
    }
    let present: Vec<(f64, Option<f64>)> = values
        .iter()
        .zip(p_values)
        .filter_map(|(v, p)| v.map(|v| (v, *p)))
        .collect();
    if present.is_empty() {
        return Err(Error::InsufficientData { needed: 1, found: 0 });
    }
    let n_bins = bins
        .unwrap_or_else(|| (present.len() as f64).log2().ceil() as usize + 1)
        .max(1);
    let (lo, hi) = extent(present.iter().map(|(v, _)| *v));
    let width = if hi > lo { (hi - lo) / n_bins as f64 } else { 1.0 };
    let mut out: Vec<Bin> = (0..n_bins)
        .map(|b| Bin {
            lo: lo + b as f64 * width,
            hi: if b + 1 == n_bins && hi > lo {
                hi
            } else {
                lo + (b + 1) as f64 * width
            },
            count: 0,
            highlighted: false,
        })
        .collect();
    for (v, p) in present {
        let b = (((v - lo) / width).floor() as usize).min(n_bins - 1);
        out[b].count += 1;
        out[b].highlighted |= significant(p, alpha);
    }
    Ok(out)
}

pub fn histogram_svg(values: &[Option<f64>], p_values: &[Option<f64>], opts: &HistogramOptions) -> Result<String> {
    let bins = histogram_bins(values, p_values, opts.alpha, opts.bins)?;
    let max_count = bins.iter().map(|b| b.count).max().unwrap_or(0) as f64;
    let frame = Frame::new((bins[0].lo, bins[bins.len() - 1].hi), (0.0, max_count));
    let mut s = header(&opts.title);
    axes(&mut s, &frame, &opts.x_label, "count");
    for b in &bins {
        let (x0, x1) = (frame.x(b.lo), frame.x(b.hi));
        let (y0, y1) = (frame.y(0.0), frame.y(b.count as f64));
        let _ = writeln!(
            s,
            r#"<rect class="bin{}" x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="white" data-count="{}"/>"#,
            if b.highlighted { " highlighted" } else { "" },
            px(x0),
            px(y1),
            px((x1 - x0).max(0.0)),
            px((y0 - y1).max(0.0)),
            if b.highlighted { style::HIGHLIGHT } else { style::BAR },
            b.count
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn write(path: &Path, svg: &str) -> Result<()> {
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

pub fn render_scatter(
    scatter: &MoranScatter,
    p_values: Option<&[Option<f64>]>,
    opts: &ScatterOptions,
    out: impl AsRef<Path>,
) -> Result<()> {
    write(out.as_ref(), &scatter_svg(scatter, p_values, opts)?)
}

pub fn render_correlogram(points: &[CorrelogramPoint], opts: &CorrelogramOptions, out: impl AsRef<Path>) -> Result<()> {
    write(out.as_ref(), &correlogram_svg(points, opts)?)
}

pub fn render_local_histogram(
    values: &[Option<f64>],
    p_values: &[Option<f64>],
    opts: &HistogramOptions,
    out: impl AsRef<Path>,
) -> Result<()> {
    write(out.as_ref(), &histogram_svg(values, p_values, opts)?)
}
