//! CSV, SVG and plain-text renderings of a learning curve.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::{AggregateRow, EvalSet, LearningCurve};
use crate::error::{Error, Result};
use crate::metrics::{ALL, MACRO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Svg,
    Summary,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 3] = [ReportFormat::Csv, ReportFormat::Svg, ReportFormat::Summary];

    pub fn file_name(self) -> &'static str {
        match self {
            ReportFormat::Csv => "curve.csv",
            ReportFormat::Svg => "curve.svg",
            ReportFormat::Summary => "summary.txt",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "svg" | "svg-plot" => Ok(ReportFormat::Svg),
            "summary" | "summary-text" | "text" => Ok(ReportFormat::Summary),
            other => Err(Error::Config(format!("unknown report format `{other}`"))),
        }
    }
}

/// Writes one report file into `dir` and returns its path.
pub fn emit_report(curve: &LearningCurve, format: ReportFormat, dir: &Path) -> Result<PathBuf> {
    if curve.is_empty() {
        return Err(Error::Data("cannot report an empty learning curve".into()));
    }
    let text = match format {
        ReportFormat::Csv => curve_csv(curve)?,
        ReportFormat::Svg => curve_svg(curve),
        ReportFormat::Summary => summary(curve),
    };
    fs::create_dir_all(dir)?;
    let path = dir.join(format.file_name());
    fs::write(&path, text)?;
    Ok(path)
}

/// Raw rows, one per (condition, set, size, repeat, complexity, label),
/// followed by one `mean` row per slice with the standard deviation.
pub fn curve_csv(curve: &LearningCurve) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "condition", "set", "train_size", "repeat", "complexity", "label", "n", "accuracy", "std",
    ])?;
    for r in &curve.rows {
        w.write_record([
            r.condition.as_str(),
            r.set.as_str(),
            &r.train_size.to_string(),
            &r.repeat.to_string(),
            &r.complexity,
            &r.label,
            &r.n.to_string(),
            &format!("{:.6}", r.accuracy),
            "",
        ])?;
    }
    for a in curve.aggregates() {
        w.write_record([
            a.condition.as_str(),
            a.set.as_str(),
            &a.train_size.to_string(),
            "mean",
            &a.complexity,
            &a.label,
            &a.n.to_string(),
            &format!("{:.6}", a.mean),
            &format!("{:.6}", a.std),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Mean accuracy against train size, a panel per label slice and a line
/// per condition with a band of one standard deviation. Regression series
/// are dashed.
pub fn curve_svg(curve: &LearningCurve) -> String {
    const PW: f64 = 320.0;
    const PH: f64 = 220.0;
    const ML: f64 = 50.0;
    const MT: f64 = 40.0;
    const GAP: f64 = 40.0;
    let aggs: Vec<AggregateRow> = curve
        .aggregates()
        .into_iter()
        .filter(|a| a.complexity == ALL && a.label != MACRO)
        .collect();
    let mut panels: Vec<&str> = Vec::new();
    for a in &aggs {
        if !panels.contains(&a.label.as_str()) {
            panels.push(&a.label);
        }
    }
    let max_x = aggs.iter().map(|a| a.train_size).max().unwrap_or(0).max(1) as f64;
    let n_cond = curve.conditions.len();
    let width = ML + panels.len() as f64 * (PW + GAP);
    let legend_h = 18.0 * (n_cond as f64 + 1.0);
    let height = MT + PH + 50.0 + legend_h;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (pi, label) in panels.iter().enumerate() {
        let x0 = ML + pi as f64 * (PW + GAP);
        let px = |v: f64| x0 + v / max_x * PW;
        let py = |v: f64| MT + (1.0 - v) * PH;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#, x0 + PW / 2.0, MT - 14.0, xml_escape(label));
        let _ = writeln!(s, r##"<rect x="{x0:.1}" y="{MT:.1}" width="{PW:.1}" height="{PH:.1}" fill="none" stroke="#444"/>"##);
        for t in 0..=4 {
            let v = t as f64 / 4.0;
            let _ = writeln!(s, r##"<line x1="{x0:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"##, x0 + PW, x0 - 4.0, py(v) + 4.0, y = py(v));
            let xv = max_x * v;
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.0}</text>"#, px(xv), MT + PH + 14.0);
        }
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">training examples</text>"#, x0 + PW / 2.0, MT + PH + 30.0);
        for (ci, cond) in curve.conditions.iter().enumerate() {
            let color = PALETTE[ci % PALETTE.len()];
            for set in [EvalSet::Test, EvalSet::Regression] {
                let pts: Vec<&AggregateRow> = aggs
                    .iter()
                    .filter(|a| a.condition == cond.name && a.set == set && a.label == *label)
                    .collect();
                if pts.is_empty() {
                    continue;
                }
                let mut band: Vec<String> = pts
                    .iter()
                    .map(|a| format!("{:.1},{:.1}", px(a.train_size as f64), py((a.mean + a.std).min(1.0))))
                    .collect();
                band.extend(pts.iter().rev().map(|a| {
                    format!("{:.1},{:.1}", px(a.train_size as f64), py((a.mean - a.std).max(0.0)))
                }));
                let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="none"/>"#, band.join(" "));
                let line: Vec<String> = pts
                    .iter()
                    .map(|a| format!("{:.1},{:.1}", px(a.train_size as f64), py(a.mean)))
                    .collect();
                let dash = if set == EvalSet::Regression { r#" stroke-dasharray="5,3""# } else { "" };
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#, line.join(" "));
            }
        }
    }
    let ly = MT + PH + 50.0;
    for (ci, cond) in curve.conditions.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let y = ly + 18.0 * ci as f64;
        let _ = writeln!(s, r#"<line x1="{ML:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#, ML + 20.0, ML + 26.0, y + 4.0, xml_escape(&cond.name));
    }
    if curve.rows.iter().any(|r| r.set == EvalSet::Regression) {
        let y = ly + 18.0 * n_cond as f64;
        let _ = writeln!(s, r##"<line x1="{ML:.1}" x2="{:.1}" y1="{y:.1}" y2="{y:.1}" stroke="#444" stroke-dasharray="5,3"/><text x="{:.1}" y="{:.1}">regression set</text>"##, ML + 20.0, ML + 26.0, y + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

/// First and last schedule point per condition, every label slice.
pub fn summary(curve: &LearningCurve) -> String {
    let aggs = curve.aggregates();
    let mut s = format!("adapter {}\n", curve.adapter);
    for cond in &curve.conditions {
        let _ = writeln!(s, "\n{}", cond.name);
        for (dim, (train, test)) in &cond.control_tags {
            let _ = writeln!(s, "  {dim}: {train} -> {test}");
        }
        for set in [EvalSet::Test, EvalSet::Regression] {
            let rows: Vec<&AggregateRow> = aggs
                .iter()
                .filter(|a| a.condition == cond.name && a.set == set && a.complexity == ALL)
                .collect();
            let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
                continue;
            };
            for size in [first.train_size, last.train_size] {
                let _ = write!(s, "  {} k={size}:", set.as_str());
                for a in rows.iter().filter(|a| a.train_size == size) {
                    let _ = write!(s, " {}={:.4}±{:.4}", a.label, a.mean, a.std);
                }
                s.push('\n');
            }
        }
    }
    for f in &curve.failures {
        let _ = writeln!(s, "failed: {} repeat {} at k={}: {}", f.condition, f.repeat, f.train_size, f.message);
    }
    s
}
