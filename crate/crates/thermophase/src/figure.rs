//! Static SVG line plots of scan tables.
//!
//! Output depends only on the table contents, so identical tables give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    /// `δΦ` and the piston reference `δθ` against `k/k0`.
    PhaseScan,
    /// `C(z₁, z₂)` and `N(z₂, z₂)` against depth.
    Correlation,
    /// `Q/√(Δz₂/w₀)` against `z₁`.
    StrainRatio,
    /// `Ϝ(z₂)` for each requested `α`.
    NoiseRatio,
}

impl FigureKind {
    pub fn name(self) -> &'static str {
        match self {
            FigureKind::PhaseScan => "phase-scan",
            FigureKind::Correlation => "correlation",
            FigureKind::StrainRatio => "strain-ratio",
            FigureKind::NoiseRatio => "noise-ratio",
        }
    }

    pub fn required_columns(self) -> &'static [&'static str] {
        match self {
            FigureKind::PhaseScan => &["k_over_k0", "delta_theta", "delta_phi"],
            FigureKind::Correlation => &["z2_over_w0", "C", "N_z2z2"],
            FigureKind::StrainRatio => &["z1_over_w0", "Q_over_sqrt_dz2"],
            FigureKind::NoiseRatio => &["z2_over_w0", "series", "alpha", "F"],
        }
    }

    fn axis_labels(self) -> (&'static str, &'static str) {
        match self {
            FigureKind::PhaseScan => ("k/k₀", "δΦ/|δθ(k₀)|"),
            FigureKind::Correlation => ("z₂/w₀", "C(z₁,z₂), N(z₂,z₂)"),
            FigureKind::StrainRatio => ("z₁/w₀", "Q/√(Δz₂/w₀)"),
            FigureKind::NoiseRatio => ("z₂/w₀", "Ϝ"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("{kind} figure needs column `{column}`")]
    MissingColumn { kind: &'static str, column: &'static str },
    #[error("{kind} figure: the scan has no rows")]
    Empty { kind: &'static str },
    #[error("cannot write figure: {0}")]
    Io(#[from] std::io::Error),
}

struct Series {
    label: String,
    dashed: bool,
    points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 55.0;
const COLORS: [&str; 6] = ["#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555"];

fn series_for(table: &Table, kind: FigureKind) -> Vec<Series> {
    let col = |name: &str| table.column(name).expect("checked");
    let pair = |x: &[f64], y: Vec<f64>| x.iter().copied().zip(y).collect::<Vec<_>>();
    match kind {
        FigureKind::PhaseScan => {
            let x = col("k_over_k0");
            vec![
                Series { label: "δΦ".into(), dashed: false, points: pair(&x, col("delta_phi")) },
                Series { label: "δθ".into(), dashed: true, points: pair(&x, col("delta_theta")) },
            ]
        }
        FigureKind::Correlation => {
            let x = col("z2_over_w0");
            vec![
                Series { label: "C(z₁,z₂)".into(), dashed: false, points: pair(&x, col("C")) },
                Series { label: "N(z₂,z₂)".into(), dashed: true, points: pair(&x, col("N_z2z2")) },
            ]
        }
        FigureKind::StrainRatio => {
            let x = col("z1_over_w0");
            vec![Series {
                label: "Q/√(Δz₂/w₀)".into(),
                dashed: false,
                points: pair(&x, col("Q_over_sqrt_dz2")),
            }]
        }
        FigureKind::NoiseRatio => {
            let (x, s, a, f) = (col("z2_over_w0"), col("series"), col("alpha"), col("F"));
            let extra = table.column("F_with_transverse");
            let mut ids: Vec<f64> = Vec::new();
            for v in &s {
                if !ids.contains(v) {
                    ids.push(*v);
                }
            }
            let mut out = Vec::new();
            for id in ids {
                let rows: Vec<usize> = (0..s.len()).filter(|&i| s[i] == id).collect();
                let first = a[rows[0]];
                let label = if rows.iter().all(|&i| a[i] == first) {
                    format!("α = {}", trim_number(first))
                } else {
                    "α = α_min(z₂)".into()
                };
                out.push(Series {
                    label: label.clone(),
                    dashed: false,
                    points: rows.iter().map(|&i| (x[i], f[i])).collect(),
                });
                if let Some(e) = &extra {
                    out.push(Series {
                        label: format!("{label}, transverse"),
                        dashed: true,
                        points: rows.iter().map(|&i| (x[i], e[i])).collect(),
                    });
                }
            }
            out
        }
    }
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" { "0".into() } else { s.into() }
}

/// Tick positions at 1, 2 or 5 times a power of ten, about five per axis.
fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    let values = (first..=last).map(|i| i as f64 * step).collect();
    (values, decimals)
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 0.5 } else { 0.1 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `table` as the figure `kind`.
pub fn emit_figure(table: &Table, kind: FigureKind) -> Result<String, FigureError> {
    for column in kind.required_columns() {
        if table.index(column).is_none() {
            return Err(FigureError::MissingColumn { kind: kind.name(), column });
        }
    }
    if table.rows.is_empty() {
        return Err(FigureError::Empty { kind: kind.name() });
    }
    let series = series_for(table, kind);
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = range(all().map(|p| p.0)).ok_or(FigureError::Empty { kind: kind.name() })?;
    let (y0, y1) = range(all().map(|p| p.1)).ok_or(FigureError::Empty { kind: kind.name() })?;
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);

    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    let (xt, xd) = ticks(x0, x1);
    for t in xt {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t:.xd$}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
        );
    }
    let (yt, yd) = ticks(y0, y1);
    for t in yt {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t:.yd$}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
        );
    }
    let (xl, yl) = kind.axis_labels();
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(xl)
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle" font-size="14">{}</text>"#,
        TOP + ph / 2.0,
        escape(yl)
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        // Non-finite samples split the trace.
        for run in s.points.split(|p| !(p.0.is_finite() && p.1.is_finite())) {
            if run.is_empty() {
                continue;
            }
            let pts: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                pts.join(" ")
            );
        }
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let lx = LEFT + pw - 150.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            lx + 30.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes the figure; nothing is written if rendering fails.
pub fn write_figure(table: &Table, kind: FigureKind, path: &Path) -> Result<(), FigureError> {
    let svg = emit_figure(table, kind)?;
    fs::write(path, svg)?;
    Ok(())
}
