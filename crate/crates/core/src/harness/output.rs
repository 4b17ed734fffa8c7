//! CSV reports and SVG line charts.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{ExperimentReport, HarnessError};

pub const CSV_HEADER: [&str; 13] = [
    "function",
    "N",
    "m",
    "theta",
    "weights",
    "mode",
    "trials",
    "avg_rel_err",
    "median_rel_err",
    "std_rel_err",
    "success_rate",
    "master_seed",
    "wall_ms",
];

/// One CSV line, flattened from an [`ExperimentReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub function: String,
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub weights: String,
    pub mode: String,
    pub trials: usize,
    pub avg_rel_err: f64,
    pub median_rel_err: f64,
    pub std_rel_err: f64,
    pub success_rate: f64,
    pub master_seed: u64,
    pub wall_ms: u64,
}

impl From<&ExperimentReport> for CsvRow {
    fn from(r: &ExperimentReport) -> Self {
        Self {
            function: r.config.function.name().to_string(),
            n: r.config.degree,
            m: r.config.m,
            theta: r.config.theta,
            weights: r.config.weights.label().to_string(),
            mode: r.config.mode.as_str().to_string(),
            trials: r.trials,
            avg_rel_err: r.avg_rel_err,
            median_rel_err: r.median_rel_err,
            std_rel_err: r.std_rel_err,
            success_rate: r.success_rate,
            master_seed: r.config.master_seed,
            wall_ms: r.wall_ms,
        }
    }
}

/// Seventeen significant digits.
fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl CsvRow {
    fn record(&self) -> [String; 13] {
        [
            self.function.clone(),
            self.n.to_string(),
            self.m.to_string(),
            float(self.theta),
            self.weights.clone(),
            self.mode.clone(),
            self.trials.to_string(),
            float(self.avg_rel_err),
            float(self.median_rel_err),
            float(self.std_rel_err),
            float(self.success_rate),
            self.master_seed.to_string(),
            self.wall_ms.to_string(),
        ]
    }
}

pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|source| HarnessError::Io {
        path: "<csv>".into(),
        source,
    })?;
    Ok(())
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `rows` under the fixed header, in the given order.
pub fn emit_csv(rows: &[CsvRow], path: &Path) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut buf = BufWriter::new(file);
    write_csv(rows, &mut buf)?;
    buf.flush().map_err(io_error(path))
}

/// A labeled polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
    /// Distinct x values placed at equal spacing.
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: AxisScale,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        let e = v.abs().log10().round();
        if (v.abs() - 10f64.powf(e)).abs() <= 1e-9 * v.abs() {
            format!("{}1e{}", if v < 0.0 { "-" } else { "" }, e as i64)
        } else {
            format!("{v:.1e}")
        }
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders a standalone SVG 1.1 chart with a logarithmic y axis.
pub fn render_svg(series: &[Series], axes: &Axes) -> Result<String, HarnessError> {
    if series.is_empty() {
        return Err(HarnessError::Config(
            "a chart needs at least one series".into(),
        ));
    }
    let plotted = |&(x, y): &(f64, f64)| {
        y.is_finite() && y > 0.0 && x.is_finite() && (axes.x_scale != AxisScale::Log || x > 0.0)
    };
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(plotted)
        .collect();

    let mut categories: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    categories.sort_by(f64::total_cmp);
    categories.dedup();

    let (ylo, yhi) = if all.is_empty() {
        (-1.0, 0.0)
    } else {
        let lo = all
            .iter()
            .map(|p| p.1)
            .fold(f64::INFINITY, f64::min)
            .log10()
            .floor();
        let hi = all
            .iter()
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max)
            .log10()
            .ceil();
        if hi > lo {
            (lo, hi)
        } else {
            (lo, lo + 1.0)
        }
    };
    let xmap = |x: f64| -> f64 {
        match axes.x_scale {
            AxisScale::Linear => x,
            AxisScale::Log => x.log10(),
            AxisScale::Categorical => categories.iter().position(|c| *c == x).unwrap_or(0) as f64,
        }
    };
    let (xlo, xhi) = match axes.x_scale {
        AxisScale::Categorical => (0.0, (categories.len().max(2) - 1) as f64),
        _ => {
            let xs: Vec<f64> = all.iter().map(|p| xmap(p.0)).collect();
            let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        }
    };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (xmap(x) - xlo) / (xhi - xlo) * pw;
    let py = |y: f64| TOP + (yhi - y.log10()) / (yhi - ylo) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&axes.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let _ = writeln!(s, r#"<g class="y-ticks">"#);
    for e in (ylo as i64)..=(yhi as i64) {
        let y = py(10f64.powi(e as i32));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(s, "</g>");

    let xticks: Vec<f64> = match axes.x_scale {
        AxisScale::Categorical => categories.clone(),
        AxisScale::Log => ((xlo.floor() as i64)..=(xhi.ceil() as i64))
            .map(|e| 10f64.powi(e as i32))
            .collect(),
        AxisScale::Linear => (0..=5)
            .map(|i| xlo + (xhi - xlo) * i as f64 / 5.0)
            .collect(),
    };
    let _ = writeln!(s, r#"<g class="x-ticks">"#);
    for t in xticks {
        let x = px(t);
        if !(LEFT - 0.5..=LEFT + pw + 0.5).contains(&x) {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0,
            tick_label(t)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0,
        escape(&axes.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&axes.y_label)
    );

    for (i, ser) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<(f64, f64)> = ser.points.iter().copied().filter(plotted).collect();
        let _ = writeln!(s, r#"<g class="series">"#);
        if pts.len() >= 2 {
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in &pts {
            let _ = writeln!(
                s,
                r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            );
        }
        let _ = writeln!(s, "</g>");
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            s,
            r#"<g class="legend-entry"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_svg(series: &[Series], axes: &Axes, path: &Path) -> Result<(), HarnessError> {
    let svg = render_svg(series, axes)?;
    std::fs::write(path, svg).map_err(io_error(path))
}
