//! Per-level CSV table and indicator dumps.

use std::fmt::Write as _;
use std::path::Path;

use crate::adaptivity::LevelRecord;
use crate::estimator::EstimatorReport;
use crate::{Error, Result};

pub const HEADER: &str = "level,ndof,err_u,err_p,err_p_energy,eta,mu,case,marked,triangles,seconds";

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// The table as CSV text. `comment` becomes a leading `# ...` line.
pub fn format_table(records: &[LevelRecord], comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(s, "# {line}").unwrap();
        }
    }
    writeln!(s, "{HEADER}").unwrap();
    for r in records {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.level,
            r.ndof,
            opt(r.err_u),
            opt(r.err_p),
            opt(r.err_p_energy),
            r.eta,
            r.mu,
            r.case.as_str(),
            r.marked,
            r.triangles,
            opt(r.seconds),
        )
        .unwrap();
    }
    s
}

pub fn emit_table(records: &[LevelRecord], comment: Option<&str>, path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("no levels to write".into()));
    }
    std::fs::write(path, format_table(records, comment)).map_err(|e| Error::io(path, e))
}

/// Reads a table written by [`format_table`]. The `ξ²` column is not stored
/// and comes back as `None`.
pub fn read_table(text: &str) -> Result<Vec<LevelRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == HEADER => {}
        Some((i, h)) => return Err(Error::parse(i + 1, format!("unexpected header `{h}`"))),
        None => return Err(Error::parse(1, "missing header")),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let ln = i + 1;
        let cells: Vec<&str> = line.trim().split(',').collect();
        if cells.len() != 11 {
            return Err(Error::parse(ln, format!("expected 11 fields, got {}", cells.len())));
        }
        let int = |k: usize| -> Result<usize> {
            cells[k].parse().map_err(|_| Error::parse(ln, format!("bad integer `{}`", cells[k])))
        };
        let float = |k: usize| -> Result<f64> {
            cells[k].parse().map_err(|_| Error::parse(ln, format!("bad number `{}`", cells[k])))
        };
        let maybe = |k: usize| -> Result<Option<f64>> {
            if cells[k].is_empty() {
                Ok(None)
            } else {
                float(k).map(Some)
            }
        };
        out.push(LevelRecord {
            level: int(0)?,
            ndof: int(1)?,
            err_u: maybe(2)?,
            err_p: maybe(3)?,
            err_p_energy: maybe(4)?,
            eta: float(5)?,
            mu: float(6)?,
            case: cells[7].parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?,
            marked: int(8)?,
            triangles: int(9)?,
            seconds: maybe(10)?,
            xi_sq: None,
        });
    }
    Ok(out)
}

/// One row per edge (`η²`) and per triangle (`osc²`, `div²`, `flux²`).
pub fn format_indicators(report: &EstimatorReport) -> String {
    let mut s = String::from("kind,id,eta_sq,osc_sq,div_sq,flux_sq\n");
    for (e, v) in report.eta_sq.iter().enumerate() {
        writeln!(s, "edge,{e},{v},,,").unwrap();
    }
    for (t, v) in report.mu_parts.iter().enumerate() {
        writeln!(s, "triangle,{t},,{},{},{}", v.osc, v.div, v.flux).unwrap();
    }
    s
}
