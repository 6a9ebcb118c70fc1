//! CSV and SVG output of sweep results.
//!
//! CSV columns, in order: `policy,network,rate,map_seed,accuracy,latency_s,energy_j,area_norm`.
//! SVG output is `accuracy.svg` (mean accuracy against fault rate, one
//! polyline per policy) and `latency.svg`, `energy.svg`, `area.svg` (one bar
//! per policy).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::sweep::{SweepResult, SweepRow};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "policy",
    "network",
    "rate",
    "map_seed",
    "accuracy",
    "latency_s",
    "energy_j",
    "area_norm",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

pub fn csv_string(result: &SweepResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &result.rows {
        w.serialize(row).map_err(|e| Error::invalid(e.to_string()))?;
    }
    if result.rows.is_empty() {
        w.write_record(CSV_HEADER).map_err(|e| Error::invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(result)?).map_err(|e| Error::io(path, e))
}

pub fn parse_csv(text: &str) -> Result<SweepResult> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::invalid(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != CSV_HEADER {
        return Err(Error::invalid(format!("unexpected CSV header {header:?}")));
    }
    let rows = r
        .deserialize::<SweepRow>()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::invalid(e.to_string()))?;
    Ok(SweepResult { rows })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"];
const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn svg_open(s: &mut String, title: &str) {
    let _ = write!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n\
         <line x1=\"{LEFT}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{}\" stroke=\"black\"/>\n",
        (W - RIGHT + LEFT) / 2.0,
        H - BOTTOM,
        W - RIGHT,
        H - BOTTOM,
        H - BOTTOM,
    );
}

/// Mean accuracy against fault rate; one polyline per policy.
pub fn accuracy_svg(result: &SweepResult) -> String {
    let rates = result.rates();
    let policies = result.policies();
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let x_of = |i: usize| {
        if rates.len() <= 1 {
            LEFT + plot_w / 2.0
        } else {
            LEFT + plot_w * i as f64 / (rates.len() - 1) as f64
        }
    };
    let y_of = |acc: f64| TOP + plot_h * (1.0 - acc);
    let mut s = String::new();
    svg_open(&mut s, "Accuracy vs. fault rate");
    for tick in 0..=4 {
        let acc = f64::from(tick) / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{:.0}%</text>",
            LEFT - 6.0,
            y_of(acc) + 4.0,
            acc * 100.0
        );
    }
    for (i, rate) in rates.iter().enumerate() {
        let _ = writeln!(
            s,
            "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\">{rate}</text>",
            x_of(i),
            H - BOTTOM + 18.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">fault rate</text>",
        LEFT + plot_w / 2.0,
        H - 10.0
    );
    for (p, policy) in policies.iter().enumerate() {
        let color = COLORS[p % COLORS.len()];
        let points: Vec<String> = rates
            .iter()
            .enumerate()
            .filter_map(|(i, &r)| {
                result
                    .mean_accuracy(*policy, r)
                    .map(|a| format!("{:.2},{:.2}", x_of(i), y_of(a)))
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline class=\"series\" data-policy=\"{policy}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>",
            points.join(" ")
        );
        let ly = TOP + 18.0 * p as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{}\" y=\"{}\">{policy}</text>",
            W - RIGHT + 15.0,
            W - RIGHT + 35.0,
            W - RIGHT + 40.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One bar per policy for a cost metric.
pub fn bar_svg(title: &str, unit: &str, bars: &[(String, f64)]) -> String {
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let max = bars.iter().map(|b| b.1).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let slot = plot_w / bars.len().max(1) as f64;
    let mut s = String::new();
    svg_open(&mut s, title);
    for (i, (label, value)) in bars.iter().enumerate() {
        let h = plot_h * value / max;
        let x = LEFT + slot * i as f64 + slot * 0.15;
        let _ = writeln!(
            s,
            "<rect class=\"bar\" data-policy=\"{label}\" x=\"{x:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{h:.2}\" fill=\"{}\"/>\n\
             <text x=\"{:.2}\" y=\"{}\" text-anchor=\"middle\">{label}</text>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{value:.4e}</text>",
            TOP + plot_h - h,
            slot * 0.7,
            COLORS[i % COLORS.len()],
            x + slot * 0.35,
            H - BOTTOM + 18.0,
            x + slot * 0.35,
            TOP + plot_h - h - 4.0,
        );
    }
    let _ = writeln!(s, "<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">{unit}</text>", TOP + plot_h / 2.0, TOP + plot_h / 2.0);
    s.push_str("</svg>\n");
    s
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the report files into `dir`; returns the paths written.
pub fn emit_report(result: &SweepResult, format: ReportFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    if result.rows.is_empty() {
        return Err(Error::invalid("cannot report an empty sweep"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match format {
        ReportFormat::Csv => Ok(vec![write(dir.join("sweep.csv"), &csv_string(result)?)?]),
        ReportFormat::Svg => {
            let mut out = vec![write(dir.join("accuracy.svg"), &accuracy_svg(result))?];
            let policies = result.policies();
            let costs: Vec<_> = policies
                .iter()
                .filter_map(|&p| result.mean_cost(p).map(|c| (p.to_string(), c)))
                .collect();
            let metrics: [(&str, &str, &str, fn(&(f64, f64, f64)) -> f64); 3] = [
                ("latency.svg", "Latency per inference", "seconds", |c| c.0),
                ("energy.svg", "Energy per inference", "joules", |c| c.1),
                ("area.svg", "Area (normalized)", "area", |c| c.2),
            ];
            for (file, title, unit, pick) in metrics {
                let bars: Vec<_> = costs.iter().map(|(l, c)| (l.clone(), pick(c))).collect();
                out.push(write(dir.join(file), &bar_svg(title, unit, &bars))?);
            }
            Ok(out)
        }
    }
}
