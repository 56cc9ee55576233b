//! SVG scatter of bits/link against mean query time, one colour per method.

use std::fmt::Write as _;
use std::io::Read;

use anyhow::{bail, Context, Result};

use crate::bench::CSV_HEADER;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const PAD_LEFT: f64 = 70.0;
const PAD_RIGHT: f64 = 20.0;
const PAD_TOP: f64 = 40.0;
const PAD_BOTTOM: f64 = 50.0;
const MARGIN: f64 = 0.05;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub method: String,
    pub param1: String,
    pub param2: String,
    pub bits_per_link: f64,
    pub mean_us: f64,
}

/// Parses a CSV written by [`crate::bench::write_csv`].
pub fn read_points<R: Read>(source: R) -> Result<Vec<PlotPoint>> {
    let mut reader = csv::Reader::from_reader(source);
    let header = reader.headers().context("reading CSV header")?;
    if header.iter().ne(CSV_HEADER) {
        bail!(
            "unexpected CSV header {:?}",
            header.iter().collect::<Vec<_>>()
        );
    }
    let mut points = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.with_context(|| format!("CSV record {}", i + 1))?;
        let number = |col: usize| -> Result<f64> {
            let v: f64 = row[col].parse().with_context(|| {
                format!(
                    "CSV record {}: bad {} {:?}",
                    i + 1,
                    CSV_HEADER[col],
                    &row[col]
                )
            })?;
            if !v.is_finite() {
                bail!("CSV record {}: {} is not finite", i + 1, CSV_HEADER[col]);
            }
            Ok(v)
        };
        points.push(PlotPoint {
            method: row[0].to_string(),
            param1: row[1].to_string(),
            param2: row[2].to_string(),
            bits_per_link: number(3)?,
            mean_us: number(4)?,
        });
    }
    if points.is_empty() {
        bail!("CSV has no records");
    }
    Ok(points)
}

/// Data range widened by 5% of its span on both sides. A zero span is
/// widened by 5% of the value (or by 1 around zero).
pub fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = hi - lo;
    let pad = if span > 0.0 {
        span * MARGIN
    } else if lo != 0.0 {
        lo.abs() * MARGIN
    } else {
        1.0
    };
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn label(p: &PlotPoint) -> String {
    if p.param2.is_empty() {
        p.param1.clone()
    } else {
        format!("{}/{}", p.param1, p.param2)
    }
}

pub fn render_svg(points: &[PlotPoint]) -> Result<String> {
    if points.is_empty() {
        bail!("nothing to plot");
    }
    let (x_min, x_max) = padded_range(points.iter().map(|p| p.bits_per_link));
    let (y_min, y_max) = padded_range(points.iter().map(|p| p.mean_us));
    let plot_w = WIDTH - PAD_LEFT - PAD_RIGHT;
    let plot_h = HEIGHT - PAD_TOP - PAD_BOTTOM;
    let sx = |x: f64| PAD_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| PAD_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut methods: Vec<&str> = Vec::new();
    for p in points {
        if !methods.contains(&p.method.as_str()) {
            methods.push(&p.method);
        }
    }
    let colour =
        |m: &str| PALETTE[methods.iter().position(|&x| x == m).unwrap_or(0) % PALETTE.len()];

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">
<rect width="100%" height="100%" fill="white"/>
<g class="axes" data-x-min="{x_min}" data-x-max="{x_max}" data-y-min="{y_min}" data-y-max="{y_max}" stroke="black">
<line x1="{PAD_LEFT}" y1="{b}" x2="{r}" y2="{b}"/>
<line x1="{PAD_LEFT}" y1="{PAD_TOP}" x2="{PAD_LEFT}" y2="{b}"/>
</g>"#,
        b = PAD_TOP + plot_h,
        r = PAD_LEFT + plot_w,
    )?;
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x_min + t * (x_max - x_min), y_min + t * (y_max - y_min));
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.3}</text><text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.3}</text>"#,
            sx(xv),
            PAD_TOP + plot_h + 16.0,
            PAD_LEFT - 6.0,
            sy(yv) + 4.0,
        )?;
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">bits/link</text>
<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">mean time per query (us)</text>"#,
        PAD_LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        PAD_TOP + plot_h / 2.0,
    )?;
    for (i, m) in methods.iter().enumerate() {
        let y = 14.0 + 14.0 * i as f64;
        writeln!(
            svg,
            r#"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            WIDTH - 130.0,
            y - 9.0,
            colour(m),
            WIDTH - 115.0,
            y,
            escape(m)
        )?;
    }
    for p in points {
        let (cx, cy) = (sx(p.bits_per_link), sy(p.mean_us));
        writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="{}" data-method="{}"><title>{} {}: {} bits/link, {} us</title></circle><text x="{:.2}" y="{:.2}" font-size="9">{}</text>"#,
            colour(&p.method),
            escape(&p.method),
            escape(&p.method),
            escape(&label(p)),
            p.bits_per_link,
            p.mean_us,
            cx + 6.0,
            cy - 6.0,
            escape(&label(p)),
        )?;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
