//! CSV, JSON and SVG emission.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const CSV_HEADER: &str = "swept,q,ps,fidelity,negativity";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub swept: f64,
    pub q: Option<f64>,
    pub ps: Option<f64>,
    pub fidelity: Option<f64>,
    pub negativity: Option<f64>,
}

impl Record {
    pub fn failed(swept: f64, q: Option<f64>) -> Record {
        Record {
            swept,
            q,
            ps: None,
            fidelity: None,
            negativity: None,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.q.is_some() && self.ps.is_some() && self.fidelity.is_some() && self.negativity.is_some()
    }
}

fn field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv(records: &[Record]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out += &format!(
            "{},{},{},{},{}\n",
            r.swept,
            field(r.q),
            field(r.ps),
            field(r.fidelity),
            field(r.negativity)
        );
    }
    out
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes to `path`, or to stdout when there is none.
pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(io_err(Path::new("<stdout>")))
        }
    }
}

/// `dir/stem_<tag>.ext`, used when one run produces several files.
pub fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{tag}.{ext}"),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

const PANEL_W: f64 = 300.0;
const PANEL_H: f64 = 220.0;
const MARGIN: f64 = 48.0;

/// Three side-by-side panels (PS, F, N) against the swept value.
pub fn svg(records: &[Record], swept_label: &str, log_x: bool) -> String {
    let series: [(&str, fn(&Record) -> Option<f64>); 3] = [
        ("PS", |r| r.ps),
        ("F", |r| r.fidelity),
        ("N", |r| r.negativity),
    ];
    let width = 3.0 * (PANEL_W + MARGIN) + MARGIN;
    let height = PANEL_H + 2.0 * MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" font-family=\"sans-serif\" font-size=\"11\">\n"
    );
    let xmap = |x: f64| if log_x { x.log10() } else { x };
    let xs: Vec<f64> = records.iter().map(|r| xmap(r.swept)).collect();
    let (x0, x1) = bounds(xs.iter().copied());
    for (k, (name, get)) in series.iter().enumerate() {
        let left = MARGIN + k as f64 * (PANEL_W + MARGIN);
        let (y0, y1) = bounds(records.iter().filter_map(get));
        let px = |x: f64| left + (xmap(x) - x0) / (x1 - x0) * PANEL_W;
        let py = |y: f64| MARGIN + PANEL_H - (y - y0) / (y1 - y0) * PANEL_H;
        out += &format!(
            "<rect x=\"{left}\" y=\"{MARGIN}\" width=\"{PANEL_W}\" height=\"{PANEL_H}\" fill=\"none\" stroke=\"black\"/>\n"
        );
        out += &format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{name}</text>\n",
            left + PANEL_W / 2.0,
            MARGIN - 8.0
        );
        out += &format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{swept_label}{}</text>\n",
            left + PANEL_W / 2.0,
            MARGIN + PANEL_H + 32.0,
            if log_x { " (log)" } else { "" }
        );
        for (v, y) in [(y0, MARGIN + PANEL_H), (y1, MARGIN + 10.0)] {
            out += &format!("<text x=\"{}\" y=\"{y}\" text-anchor=\"end\">{v:.3}</text>\n", left - 4.0);
        }
        let (xa, xb) = (records.first(), records.last());
        if let (Some(a), Some(b)) = (xa, xb) {
            out += &format!(
                "<text x=\"{left}\" y=\"{}\">{}</text>\n<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                MARGIN + PANEL_H + 14.0,
                a.swept,
                left + PANEL_W,
                MARGIN + PANEL_H + 14.0,
                b.swept
            );
        }
        // one polyline per run of consecutive finite points
        let mut runs: Vec<Vec<String>> = vec![Vec::new()];
        for r in records {
            match get(r) {
                Some(y) => runs.last_mut().unwrap().push(format!("{:.2},{:.2}", px(r.swept), py(y))),
                None => runs.push(Vec::new()),
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            out += &format!(
                "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                run.join(" ")
            );
        }
    }
    out += "</svg>\n";
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_writes_nulls_as_empty_fields() {
        let rows = [
            Record {
                swept: 0.5,
                q: Some(0.15),
                ps: Some(0.01),
                fidelity: Some(0.9),
                negativity: Some(-0.26),
            },
            Record::failed(0.6, None),
        ];
        assert_eq!(
            csv(&rows),
            "swept,q,ps,fidelity,negativity\n0.5,0.15,0.01,0.9,-0.26\n0.6,,,,\n"
        );
    }

    #[test]
    fn tagged_paths_keep_extension() {
        assert_eq!(tagged_path(Path::new("out/run.csv"), "ps0.01"), PathBuf::from("out/run_ps0.01.csv"));
        assert_eq!(tagged_path(Path::new("run"), "kappa0.3"), PathBuf::from("run_kappa0.3"));
    }

    #[test]
    fn svg_has_three_panels() {
        let rows: Vec<Record> = (1..5)
            .map(|i| Record {
                swept: i as f64,
                q: Some(1.0),
                ps: Some(i as f64 / 10.0),
                fidelity: Some(1.0 - i as f64 / 20.0),
                negativity: if i == 2 { None } else { Some(-0.3) },
            })
            .collect();
        let s = svg(&rows, "Q", true);
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<rect").count(), 3);
        assert_eq!(s.matches("<polyline").count(), 4);
    }
}
