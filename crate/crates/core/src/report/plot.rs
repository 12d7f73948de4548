//! Log-log convergence plots as static SVG.

use std::fmt::Write as _;
use std::path::Path;

use crate::adaptivity::LevelRecord;
use crate::{Error, Result};

/// Least-squares slope of `log y` against `log x`. `None` with fewer than
/// two usable points or no spread in `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Number of trailing levels used for slopes: the last half, at least two.
pub fn tail_len(n: usize) -> usize {
    n.div_ceil(2).max(2).min(n)
}

/// Slope of `series` against Ndof over the last half of the levels.
pub fn tail_slope(records: &[LevelRecord], series: impl Fn(&LevelRecord) -> Option<f64>) -> Option<f64> {
    let tail = &records[records.len() - tail_len(records.len())..];
    let mut x = Vec::new();
    let mut y = Vec::new();
    for r in tail {
        if let Some(v) = series(r) {
            x.push(r.ndof as f64);
            y.push(v);
        }
    }
    fit_slope(&x, &y)
}

struct Series {
    label: &'static str,
    color: &'static str,
    points: Vec<(f64, f64)>,
    slope: Option<f64>,
}

type Pick = fn(&LevelRecord) -> Option<f64>;

const SERIES: [(&str, &str, Pick); 4] = [
    ("‖u - u_h‖", "#1f77b4", |r| r.err_u),
    ("‖p - p_h‖", "#d62728", |r| r.err_p),
    ("η", "#2ca02c", |r| Some(r.eta)),
    ("μ", "#9467bd", |r| Some(r.mu)),
];

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

fn decades(lo: f64, hi: f64) -> (f64, f64) {
    let (a, b) = (lo.log10().floor(), hi.log10().ceil());
    if a == b {
        (a, a + 1.0)
    } else {
        (a, b)
    }
}

/// SVG with the error and estimator series against Ndof, dashed guides for
/// each of `reference_slopes` and the fitted tail slope of every series in
/// the legend.
pub fn convergence_plot(records: &[LevelRecord], reference_slopes: &[f64]) -> Result<String> {
    if records.len() < 2 {
        return Err(Error::Config("a convergence plot needs at least two levels".into()));
    }
    let series: Vec<Series> = SERIES
        .iter()
        .filter_map(|&(label, color, pick)| {
            let points: Vec<(f64, f64)> = records
                .iter()
                .filter_map(|r| pick(r).filter(|v| *v > 0.0).map(|v| (r.ndof as f64, v)))
                .collect();
            (!points.is_empty()).then(|| Series { label, color, points, slope: tail_slope(records, pick) })
        })
        .collect();
    let xs = records.iter().map(|r| r.ndof as f64);
    let (x0, x1) = decades(xs.clone().fold(f64::INFINITY, f64::min), xs.fold(0.0, f64::max));
    let ys = series.iter().flat_map(|s| s.points.iter().map(|p| p.1));
    let (y0, y1) = decades(ys.clone().fold(f64::INFINITY, f64::min), ys.fold(0.0, f64::max));
    let px = |x: f64| LEFT + (x.log10() - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y.log10() - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    )
    .unwrap();
    for d in (x0 as i32)..=(x1 as i32) {
        let x = px(10f64.powi(d));
        writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{}" stroke="#ddd"/>"##, H - BOTTOM).unwrap();
        writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"#, H - BOTTOM + 16.0).unwrap();
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = py(10f64.powi(d));
        writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##, W - RIGHT).unwrap();
        writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"#, LEFT - 6.0, y + 4.0).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">Ndof</text>"#, (LEFT + W - RIGHT) / 2.0, H - 12.0).unwrap();

    // guides through the first point of the first series
    let anchor = series[0].points[0];
    let xe = records.last().map_or(anchor.0, |r| r.ndof as f64);
    for &k in reference_slopes {
        let ye = anchor.1 * (xe / anchor.0).powf(k);
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
            px(anchor.0),
            py(anchor.1),
            px(xe),
            py(ye)
        )
        .unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="gray">Ndof^{k}</text>"#, px(xe) + 4.0, py(ye)).unwrap();
    }
    for (i, ser) in series.iter().enumerate() {
        let path: Vec<String> = ser.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        writeln!(s, r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#, path.join(" "), ser.color).unwrap();
        for &(x, y) in &ser.points {
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"/>"#, px(x), py(y), ser.color).unwrap();
        }
        let ly = TOP + 16.0 + 20.0 * i as f64;
        let lx = W - RIGHT + 14.0;
        let slope = ser.slope.map_or("n/a".to_string(), |k| format!("{k:.3}"));
        writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"#, lx + 20.0, ser.color).unwrap();
        writeln!(s, r#"<text x="{}" y="{}">{} slope {slope}</text>"#, lx + 26.0, ly + 4.0, ser.label).unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

pub fn emit_convergence_plot(records: &[LevelRecord], reference_slopes: &[f64], path: &Path) -> Result<()> {
    let svg = convergence_plot(records, reference_slopes)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::CaseLabel;

    fn records(f: impl Fn(f64) -> f64) -> Vec<LevelRecord> {
        [100usize, 400, 1600, 6400, 25600]
            .iter()
            .enumerate()
            .map(|(level, &ndof)| {
                let v = f(ndof as f64);
                LevelRecord {
                    level,
                    ndof,
                    err_u: Some(v),
                    err_p: Some(2.0 * v),
                    err_p_energy: Some(2.0 * v),
                    eta: 3.0 * v,
                    mu: (ndof as f64).powf(-0.25),
                    case: CaseLabel::A,
                    marked: 1,
                    triangles: ndof / 2,
                    seconds: None,
                    xi_sq: None,
                }
            })
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let x: Vec<f64> = (1..20).map(|i| 10.0 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-0.5)).collect();
        assert!((fit_slope(&x, &y).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_points() {
        let k = fit_slope(&[10.0, 1000.0], &[0.3, 0.01]).unwrap();
        assert!((k - (0.01f64 / 0.3).ln() / 100f64.ln()).abs() < 1e-14);
        assert_eq!(fit_slope(&[1.0], &[1.0]), None);
        assert_eq!(fit_slope(&[5.0, 5.0], &[1.0, 2.0]), None);
    }

    #[test]
    fn tail() {
        assert_eq!(tail_len(1), 1);
        assert_eq!(tail_len(2), 2);
        assert_eq!(tail_len(3), 2);
        assert_eq!(tail_len(7), 4);
        let r = records(|n| n.powf(-0.5));
        assert!((tail_slope(&r, |l| l.err_u).unwrap() + 0.5).abs() < 1e-12);
        assert!((tail_slope(&r, |l| Some(l.mu)).unwrap() + 0.25).abs() < 1e-12);
    }

    #[test]
    fn svg_contents() {
        let r = records(|n| n.powf(-0.5));
        let svg = convergence_plot(&r, &[-0.5, -0.25]).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert!(svg.contains("slope -0.500"));
        assert!(svg.contains("slope -0.250"));
        assert!(convergence_plot(&r[..1], &[-0.5]).is_err());
    }

    #[test]
    fn missing_errors_drop_series() {
        let mut r = records(|n| n.powf(-0.5));
        for l in &mut r {
            l.err_u = None;
            l.err_p = None;
        }
        let svg = convergence_plot(&r, &[-0.5]).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
    }
}
