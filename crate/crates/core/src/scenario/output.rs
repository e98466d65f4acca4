//! Run artifacts: force-displacement CSV, gap-sample CSV, legacy VTK
//! snapshots and the run summary.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::beam::interpolate;
use crate::contact::GapSample;
use crate::error::{Error, Result};
use crate::model::{Configuration, Model};

pub const CURVE_HEADER: [&str; 7] = [
    "step",
    "u_x",
    "u_x_over_l",
    "F_x",
    "F_x_normalized",
    "newton_iters",
    "branch",
];

/// Centerline points written per element.
pub const VTK_POINTS_PER_ELEMENT: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub step: usize,
    pub u_x: f64,
    pub u_x_over_l: f64,
    #[serde(rename = "F_x")]
    pub f_x: f64,
    #[serde(rename = "F_x_normalized")]
    pub f_x_normalized: f64,
    pub newton_iters: usize,
    pub branch: String,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        what: "CSV".into(),
        message: e.to_string(),
    }
}

pub fn write_curve(path: &Path, records: &[CurveRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(CURVE_HEADER).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.step.to_string(),
            format_real(r.u_x),
            format_real(r.u_x_over_l),
            format_real(r.f_x),
            format_real(r.f_x_normalized),
            r.newton_iters.to_string(),
            r.branch.clone(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a curve CSV, rejecting any header other than the fixed schema.
pub fn read_curve(path: &Path) -> Result<Vec<CurveRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    let header = r.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CURVE_HEADER) {
        return Err(Error::Parse {
            what: path.display().to_string(),
            message: format!("unexpected curve header `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    r.deserialize().map(|rec| rec.map_err(csv_error)).collect()
}

pub fn write_gaps(path: &Path, rows: &[(usize, f64, &[GapSample])], radius: f64) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record([
        "step",
        "u_x",
        "slave_element",
        "slave_xi",
        "master_element",
        "master_xi",
        "gap",
        "gap_over_R",
        "x",
        "y",
        "fallback",
    ])
    .map_err(csv_error)?;
    for (step, u_x, samples) in rows {
        for s in samples.iter() {
            w.write_record([
                step.to_string(),
                format_real(*u_x),
                s.slave_element.to_string(),
                format_real(s.slave_xi),
                s.master_element.to_string(),
                format_real(s.master_xi),
                format_real(s.gap),
                format_real(s.gap / radius),
                format_real(s.midpoint.x),
                format_real(s.midpoint.y),
                u8::from(s.fallback).to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Centerline samples of one fiber, shared element endpoints written once.
pub fn centerline(model: &Model, q: &DVector<f64>, fiber: usize) -> Vec<Vector2<f64>> {
    let config = Configuration { model, q };
    let mesh = &model.fibers[fiber];
    let mut points = Vec::with_capacity(mesh.n_elements * VTK_POINTS_PER_ELEMENT + 1);
    for e in 0..mesh.n_elements {
        let element = mesh.element(e);
        let qe = config.element_vector(fiber, e);
        let first = if e == 0 { 0 } else { 1 };
        for k in first..=VTK_POINTS_PER_ELEMENT {
            let xi = -1.0 + 2.0 * k as f64 / VTK_POINTS_PER_ELEMENT as f64;
            points.push(interpolate(&element, xi, &qe).0);
        }
    }
    points
}

/// Legacy ASCII polydata with one polyline per fiber and point data `fiber_id`.
pub fn fibers_vtk(model: &Model, q: &DVector<f64>, title: &str) -> String {
    let lines: Vec<Vec<Vector2<f64>>> = (0..model.fibers.len()).map(|f| centerline(model, q, f)).collect();
    let n_points: usize = lines.iter().map(Vec::len).sum();
    let mut s = String::new();
    writeln!(s, "# vtk DataFile Version 4.2\n{title}\nASCII\nDATASET POLYDATA").unwrap();
    writeln!(s, "POINTS {n_points} double").unwrap();
    for p in lines.iter().flatten() {
        writeln!(s, "{} {} 0", format_real(p.x), format_real(p.y)).unwrap();
    }
    writeln!(s, "LINES {} {}", lines.len(), n_points + lines.len()).unwrap();
    let mut offset = 0;
    for line in &lines {
        let ids: Vec<String> = (offset..offset + line.len()).map(|i| i.to_string()).collect();
        writeln!(s, "{} {}", line.len(), ids.join(" ")).unwrap();
        offset += line.len();
    }
    writeln!(s, "POINT_DATA {n_points}\nSCALARS fiber_id int 1\nLOOKUP_TABLE default").unwrap();
    for (f, line) in lines.iter().enumerate() {
        for _ in line {
            writeln!(s, "{f}").unwrap();
        }
    }
    s
}

/// Legacy ASCII polydata of gap-sample midpoints with scalar `gap_over_R`.
pub fn gaps_vtk(samples: &[GapSample], radius: f64, title: &str) -> String {
    let n = samples.len();
    let mut s = String::new();
    writeln!(s, "# vtk DataFile Version 4.2\n{title}\nASCII\nDATASET POLYDATA").unwrap();
    writeln!(s, "POINTS {n} double").unwrap();
    for g in samples {
        writeln!(s, "{} {} 0", format_real(g.midpoint.x), format_real(g.midpoint.y)).unwrap();
    }
    writeln!(s, "VERTICES {n} {}", 2 * n).unwrap();
    for i in 0..n {
        writeln!(s, "1 {i}").unwrap();
    }
    writeln!(s, "POINT_DATA {n}\nSCALARS gap_over_R double 1\nLOOKUP_TABLE default").unwrap();
    for g in samples {
        writeln!(s, "{}", format_real(g.gap / radius)).unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Force used to normalize `F_x`.
    #[serde(rename = "F_ref")]
    pub f_ref: f64,
    /// Reference force of the simulated fiber itself.
    #[serde(rename = "F_ref_own")]
    pub f_ref_own: f64,
    pub u_at_max: f64,
    /// Largest normalized force.
    #[serde(rename = "F_max")]
    pub f_max: f64,
    pub u_at_min: f64,
    /// Smallest normalized force.
    #[serde(rename = "F_min")]
    pub f_min: f64,
    /// Last converged displacement of a branch that ended early, NaN if the
    /// sweep reached its end.
    pub branch_terminus_u: f64,
    pub mean_newton_iters: f64,
    #[serde(rename = "min_gap_over_R")]
    pub min_gap_over_r: f64,
    pub u_at_min_gap: f64,
    pub branch: String,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
}

impl Summary {
    /// Force extrema and iteration statistics of a curve.
    pub fn extrema(records: &[CurveRecord]) -> Option<(f64, f64, f64, f64, f64)> {
        let first = records.first()?;
        let (mut max, mut min) = (first, first);
        for r in records {
            if r.f_x_normalized > max.f_x_normalized {
                max = r;
            }
            if r.f_x_normalized < min.f_x_normalized {
                min = r;
            }
        }
        let mean = records.iter().map(|r| r.newton_iters as f64).sum::<f64>() / records.len() as f64;
        Some((max.u_x, max.f_x_normalized, min.u_x, min.f_x_normalized, mean))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary is always serializable")
    }

    pub fn load(path: &Path) -> Result<Self> {
        toml::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Parse {
            what: path.display().to_string(),
            message: e.to_string(),
        })
    }
}
