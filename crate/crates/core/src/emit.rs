//! Deterministic CSV/JSON serialization of trajectories and tables.
//!
//! Floats print in Rust's shortest round-trip form, so repeated runs are
//! byte-identical and every value parses back to the exact bit pattern.

use std::fmt::Write as _;

use crate::flow::Trajectory;
use crate::{Error, Result};

/// Output format selector shared by all exporters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Domain(format!("unknown format '{other}' (csv|json)"))),
        }
    }
}

/// Exact CSV header of trajectory exports.
pub const TRAJECTORY_HEADER: &str = "t,x,y,z,zdot,res_speed,res_grayson";

/// CSV rendering of a trajectory: the fixed header, then one row per
/// sample at full double precision.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &traj.samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.t, s.x, s.y, s.z, s.zdot, s.res_speed, s.res_grayson
        )
        .expect("string write");
    }
    out
}

/// JSON rendering: `{"meta": {a,b,c,k,h,class,tol}, "samples": [...]}`
/// with the samples in the same field order as the CSV columns.
pub fn trajectory_json(traj: &Trajectory) -> Result<String> {
    serde_json::to_string_pretty(traj).map_err(|e| Error::Io(e.to_string()))
}

/// Generic CSV table: a header line and shortest round-trip float rows.
pub fn table_csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Generic JSON table with named columns.
pub fn table_json(columns: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|row| {
            columns
                .iter()
                .zip(row)
                .map(|(c, v)| ((*c).to_string(), serde_json::json!(v)))
                .collect()
        })
        .collect();
    serde_json::to_string_pretty(&objects).map_err(|e| Error::Io(e.to_string()))
}
