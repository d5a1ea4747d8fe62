use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use super::{Axis, SweepOutput};
use crate::closed_forms::CLOSED_FORM_TOLERANCE;
use crate::fock::{Family, TAIL_TOLERANCE};
use crate::minimizer::{QOptions, CROSS_CHECK_TOLERANCE, DEGENERACY_TOLERANCE};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest representation that parses back to the same `f64`.
fn num(x: f64) -> String {
    // `{:?}` is shortest round-trip, switching to exponent form for very
    // small or large magnitudes.
    format!("{:?}", if x == 0.0 { 0.0 } else { x })
}

/// Header columns: swept axes, then `Q,q1,q2,q3,method,degenerate_flag`.
pub fn write_csv<W: Write>(out: &SweepOutput, mut w: W) -> io::Result<()> {
    let mut header: Vec<&str> = out.spec.axes.iter().map(|a| a.name.as_str()).collect();
    header.extend(["Q", "q1", "q2", "q3", "method", "degenerate_flag"]);
    writeln!(w, "{}", header.join(","))?;
    for row in &out.rows {
        let mut fields: Vec<String> = row.coords.iter().map(|&c| num(c)).collect();
        match &row.result {
            Some(r) => {
                fields.push(num(r.q_min));
                fields.extend(r.q_bar.q.iter().map(|&c| num(c)));
                fields.push(r.method.name().to_string());
                fields.push(r.diagnostics.degenerate.to_string());
            }
            None => {
                fields.extend(["", "", "", "", ""].map(String::from));
                fields.push("undefined".to_string());
            }
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub convergence: f64,
    pub tail: f64,
    pub degeneracy: f64,
    pub closed_form: f64,
    pub cross_check: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepMetadata {
    pub family: Family,
    pub preset: Option<String>,
    pub fixed: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
    /// `n_max` per mode, or `"adaptive"`.
    pub cutoff: serde_json::Value,
    pub cross_check: bool,
    pub tool_version: &'static str,
    pub tolerances: Tolerances,
    pub notes: Vec<String>,
}

impl SweepMetadata {
    pub fn of(out: &SweepOutput) -> Self {
        let spec = &out.spec;
        let options = QOptions::default();
        SweepMetadata {
            family: spec.family,
            preset: spec.preset.clone(),
            fixed: spec.fixed.clone(),
            axes: spec.axes.clone(),
            cutoff: spec.cutoff.map_or_else(|| "adaptive".into(), |n| n.into()),
            cross_check: spec.cross_check,
            tool_version: TOOL_VERSION,
            tolerances: Tolerances {
                convergence: options.convergence_tolerance,
                tail: TAIL_TOLERANCE,
                degeneracy: DEGENERACY_TOLERANCE,
                closed_form: CLOSED_FORM_TOLERANCE,
                cross_check: CROSS_CHECK_TOLERANCE,
            },
            notes: spec.notes.clone(),
        }
    }
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(flatten)]
    coords: BTreeMap<String, f64>,
    #[serde(rename = "Q")]
    q: Option<f64>,
    q_bar: Option<[f64; 3]>,
    theta: Option<f64>,
    phi: Option<f64>,
    method: Option<&'static str>,
    degenerate_flag: String,
}

#[derive(Serialize)]
struct JsonDocument {
    metadata: SweepMetadata,
    rows: Vec<JsonRow>,
}

/// A `{"metadata": …, "rows": […]}` document.
pub fn write_json<W: Write>(out: &SweepOutput, mut w: W) -> io::Result<()> {
    let rows = out
        .rows
        .iter()
        .map(|row| {
            let coords = out.spec.axes.iter().map(|a| a.name.clone()).zip(row.coords.iter().copied()).collect();
            match &row.result {
                Some(r) => JsonRow {
                    coords,
                    q: Some(r.q_min),
                    q_bar: Some([r.q_bar.q.x, r.q_bar.q.y, r.q_bar.q.z]),
                    theta: Some(r.q_bar.theta),
                    phi: Some(r.q_bar.phi),
                    method: Some(r.method.name()),
                    degenerate_flag: r.diagnostics.degenerate.to_string(),
                },
                None => JsonRow {
                    coords,
                    q: None,
                    q_bar: None,
                    theta: None,
                    phi: None,
                    method: None,
                    degenerate_flag: "undefined".to_string(),
                },
            }
        })
        .collect();
    let doc = JsonDocument { metadata: SweepMetadata::of(out), rows };
    serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::other)?;
    writeln!(w)
}
