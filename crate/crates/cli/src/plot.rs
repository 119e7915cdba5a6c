//! Deterministic, dependency-free SVG rendering of experiment outputs.

use std::fmt::Write as _;
use std::fs::File;
use std::path::Path;

use netstab::experiment::MeasureSummary;
use serde::Deserialize;

use crate::error::{CliError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct ScatterPoint {
    pub measure: String,
    pub original: f64,
    pub perturbed: f64,
}

pub struct SweepPoint {
    pub measure: String,
    pub swap_count: f64,
    pub jaccard: f64,
}

/// Reads a CSV and returns each record's values for `columns`, in order.
fn read_columns(path: &Path, columns: &[&str]) -> Result<Vec<Vec<String>>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        .clone();
    let mut index = Vec::with_capacity(columns.len());
    for col in columns {
        let i = headers
            .iter()
            .position(|h| h == *col)
            .ok_or_else(|| CliError::usage(format!("{}: missing column `{col}`", path.display())))?;
        index.push(i);
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        rows.push(index.iter().map(|&i| record.get(i).unwrap_or("").to_owned()).collect());
    }
    Ok(rows)
}

fn number(path: &Path, column: &str, raw: &str) -> Result<f64> {
    raw.parse()
        .map_err(|_| CliError::usage(format!("{}: bad value `{raw}` in column `{column}`", path.display())))
}

pub fn read_scatter(path: &Path) -> Result<Vec<ScatterPoint>> {
    read_columns(path, &["rank_original", "rank_perturbed", "measure"])?
        .into_iter()
        .map(|row| {
            Ok(ScatterPoint {
                original: number(path, "rank_original", &row[0])?,
                perturbed: number(path, "rank_perturbed", &row[1])?,
                measure: row[2].clone(),
            })
        })
        .collect()
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepPoint>> {
    read_columns(path, &["swap_count", "measure", "jaccard"])?
        .into_iter()
        .map(|row| {
            Ok(SweepPoint {
                swap_count: number(path, "swap_count", &row[0])?,
                measure: row[1].clone(),
                jaccard: number(path, "jaccard", &row[2])?,
            })
        })
        .collect()
}

#[derive(Deserialize)]
struct ReportSummary {
    summary: Vec<MeasureSummary>,
}

/// The `summary` section of a JSON stability report.
pub fn read_report(path: &Path) -> Result<Vec<MeasureSummary>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let report: ReportSummary = serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| CliError::usage(format!("{}: not a JSON stability report: {e}", path.display())))?;
    Ok(report.summary)
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Canvas {
    body: String,
    x_max: f64,
    y_max: f64,
}

impl Canvas {
    fn new(title: &str, x_label: &str, y_label: &str, x_max: f64, y_max: f64) -> Self {
        let x_max = if x_max > 0.0 { x_max } else { 1.0 };
        let y_max = if y_max > 0.0 { y_max } else { 1.0 };
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(body, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
        let _ = writeln!(
            body,
            r#"<path class="axes" d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            body,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 20.0,
            escape(x_label)
        );
        let _ = writeln!(
            body,
            r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(y_label)
        );
        let mut canvas = Canvas { body, x_max, y_max };
        canvas.ticks();
        canvas
    }

    fn ticks(&mut self) {
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let (x, y) = (self.x(f * self.x_max), self.y(f * self.y_max));
            let _ = writeln!(
                self.body,
                r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
                HEIGHT - MARGIN + 16.0,
                fmt(f * self.x_max)
            );
            let _ = writeln!(
                self.body,
                r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                MARGIN - 6.0,
                y + 4.0,
                fmt(f * self.y_max)
            );
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN + v / self.x_max * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - v / self.y_max * (HEIGHT - 2.0 * MARGIN)
    }

    fn legend(&mut self, entries: &[(String, &str)]) {
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = MARGIN + 14.0 * i as f64;
            let _ = writeln!(
                self.body,
                r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
                WIDTH - MARGIN - 110.0,
                y,
                WIDTH - MARGIN - 95.0,
                y + 9.0,
                escape(label)
            );
        }
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Groups values by measure in first-appearance order.
fn by_measure<T>(items: &[T], key: impl Fn(&T) -> &str) -> Vec<(String, Vec<&T>)> {
    let mut groups: Vec<(String, Vec<&T>)> = Vec::new();
    for item in items {
        match groups.iter_mut().find(|(m, _)| m == key(item)) {
            Some((_, v)) => v.push(item),
            None => groups.push((key(item).to_owned(), vec![item])),
        }
    }
    groups
}

/// Original rank against perturbed rank, one colour per measure, with the
/// identity diagonal.
pub fn scatter_svg(points: &[ScatterPoint]) -> String {
    let max = points
        .iter()
        .flat_map(|p| [p.original, p.perturbed])
        .fold(1.0_f64, f64::max);
    let mut c = Canvas::new(
        "Rank before vs after perturbation",
        "original rank",
        "perturbed rank",
        max,
        max,
    );
    let _ = writeln!(
        c.body,
        r#"<line class="diagonal" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
        c.x(0.0),
        c.y(0.0),
        c.x(max),
        c.y(max)
    );
    let groups = by_measure(points, |p| &p.measure);
    for (i, (measure, pts)) in groups.iter().enumerate() {
        let _ = writeln!(c.body, r#"<g class="series" data-measure="{}">"#, escape(measure));
        for p in pts {
            let _ = writeln!(
                c.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{}" fill-opacity="0.6"/>"#,
                c.x(p.original),
                c.y(p.perturbed),
                color(i)
            );
        }
        c.body.push_str("</g>\n");
    }
    let legend: Vec<(String, &str)> = groups
        .iter()
        .enumerate()
        .map(|(i, (m, _))| (m.clone(), color(i)))
        .collect();
    c.legend(&legend);
    c.finish()
}

/// Mean 1/μ and 1/σ per measure. Measures whose rankings never moved have no
/// finite inverse and are listed as omitted.
pub fn bars_svg(summary: &[MeasureSummary]) -> String {
    let shown: Vec<(&MeasureSummary, f64, f64)> = summary
        .iter()
        .filter_map(|s| Some((s, s.inverse_mu_mean?, s.inverse_sigma_mean?)))
        .collect();
    let max = shown.iter().flat_map(|&(_, a, b)| [a, b]).fold(0.0_f64, f64::max) * 1.1;
    let mut c = Canvas::new("Ranking stability", "measure", "mean inverse deviation", 1.0, max);
    let slot = (WIDTH - 2.0 * MARGIN) / shown.len().max(1) as f64;
    for (i, &(s, inv_mu, inv_sigma)) in shown.iter().enumerate() {
        let left = MARGIN + slot * i as f64 + slot * 0.15;
        let bar = slot * 0.35;
        let id = s.measure.id();
        for (j, (value, kind)) in [(inv_mu, "inverse_mu"), (inv_sigma, "inverse_sigma")]
            .into_iter()
            .enumerate()
        {
            let top = c.y(value);
            let _ = writeln!(
                c.body,
                r#"<rect class="{kind}" data-measure="{id}" x="{:.2}" y="{top:.2}" width="{bar:.2}" height="{:.2}" fill="{}"/>"#,
                left + bar * j as f64,
                HEIGHT - MARGIN - top,
                color(j)
            );
        }
        let _ = writeln!(
            c.body,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{id}</text>"#,
            left + bar,
            HEIGHT - MARGIN + 32.0
        );
    }
    let mut legend = vec![("1/mu".to_owned(), color(0)), ("1/sigma".to_owned(), color(1))];
    let omitted: Vec<&str> = summary
        .iter()
        .filter(|s| s.inverse_mu_mean.is_none() || s.inverse_sigma_mean.is_none())
        .map(|s| s.measure.id())
        .collect();
    if !omitted.is_empty() {
        legend.push((format!("omitted (mu=0): {}", omitted.join(", ")), "none"));
    }
    c.legend(&legend);
    c.finish()
}

/// Top-k Jaccard against swap count, one polyline per measure.
pub fn sweep_svg(points: &[SweepPoint]) -> String {
    let max = points.iter().map(|p| p.swap_count).fold(0.0_f64, f64::max);
    let mut c = Canvas::new(
        "Top-k overlap under assortativity steering",
        "swaps",
        "Jaccard",
        max,
        1.0,
    );
    let groups = by_measure(points, |p| &p.measure);
    for (i, (measure, pts)) in groups.iter().enumerate() {
        let mut pts = pts.clone();
        pts.sort_by(|a, b| a.swap_count.total_cmp(&b.swap_count));
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.2},{:.2}", c.x(p.swap_count), c.y(p.jaccard)))
            .collect();
        let _ = writeln!(
            c.body,
            r#"<polyline class="series" data-measure="{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            escape(measure),
            coords.join(" "),
            color(i)
        );
    }
    let legend: Vec<(String, &str)> = groups
        .iter()
        .enumerate()
        .map(|(i, (m, _))| (m.clone(), color(i)))
        .collect();
    c.legend(&legend);
    c.finish()
}
