use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{discrepancy_ledger, evaluate_closed_form, ClosedFormReport, Discrepancy, Reading, Verdict};
use crate::error::{Error, Result};
use crate::fock::{realize, Family, TruncationPolicy, TwoModeState};
use crate::minimizer::reduce_to_sphere_quadratic;
use crate::moments::{moments_of_realization, SphereDirection};

/// `n` well-spread directions (Fibonacci lattice), deterministic.
pub fn spread_directions(n: usize) -> Vec<SphereDirection> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            SphereDirection::from_vector(nalgebra::Vector3::new(rho * t.cos(), rho * t.sin(), z))
        })
        .collect()
}

/// States and directions used to check a family's closed form.
pub fn standard_grid(family: Family) -> Result<Vec<(TwoModeState, Vec<SphereDirection>)>> {
    let mut states = Vec::new();
    let mut directions = spread_directions(10);
    match family {
        Family::Fock => {
            for n1 in 0..=4 {
                for n2 in 0..=4 {
                    if n1 + n2 > 0 {
                        states.push(TwoModeState::Fock { n1, n2 });
                    }
                }
            }
        }
        Family::SqueezedCoherent => {
            let displacements = [(0.0, 0.0, 1.0, 0.4), (0.7, 1.1, 0.5, 2.0), (1.5, -0.6, 2.0, 0.3), (0.0, 0.0, 3.0, PI / 2.0)];
            let squeezes = [(0.3, 0.1), (0.8, 0.8), (0.2, 0.9)];
            for &(u, pu, v, pv) in &displacements {
                for &(a, b) in &squeezes {
                    states.push(TwoModeState::SqueezedCoherent {
                        z1: Complex64::from_polar(u, pu),
                        z2: Complex64::from_polar(v, pv),
                        a,
                        b,
                    });
                }
            }
        }
        Family::SqueezedThermal => {
            directions = spread_directions(8);
            directions.push(SphereDirection::north());
            for beta in [0.5, 1.0, 2.0, 4.0] {
                for (a, b) in [(0.0, 0.0), (0.3, 0.6), (0.5, 0.5), (1.0, 0.2)] {
                    states.push(TwoModeState::SqueezedThermal { beta, a, b });
                }
            }
        }
        Family::Superposition => {
            directions = spread_directions(5);
            for (u1, u2, v1) in [(0.5, 0.5, 1.0), (0.5, 1.0, 1.0), (1.5, 1.0, 1.0), (1.5, 1.0, 0.5)] {
                for r in [0.5, 1.0] {
                    for eta in [0.0, 1.0, 2.0, PI, 4.5] {
                        states.push(TwoModeState::CoherentSuperposition { u1, u2, v1, v2: 0.0, r, eta });
                    }
                }
            }
        }
        Family::Explicit => return Err(Error::Parse("explicit density matrices have no closed form".to_string())),
    }
    Ok(states.into_iter().map(|s| (s, directions.clone())).collect())
}

/// Named real parameters of a parametric state.
pub fn state_parameters(state: &TwoModeState) -> Vec<(&'static str, f64)> {
    match *state {
        TwoModeState::SqueezedCoherent { z1, z2, a, b } => vec![
            ("z1", z1.norm()),
            ("phase1", z1.arg()),
            ("z2", z2.norm()),
            ("phase2", z2.arg()),
            ("a", a),
            ("b", b),
        ],
        TwoModeState::SqueezedThermal { beta, a, b } => vec![("beta", beta), ("a", a), ("b", b)],
        TwoModeState::CoherentSuperposition { u1, u2, v1, v2, r, eta } => {
            vec![("u1", u1), ("u2", u2), ("v1", v1), ("v2", v2), ("r", r), ("eta", eta)]
        }
        TwoModeState::Fock { n1, n2 } => vec![("n1", n1 as f64), ("n2", n2 as f64)],
        TwoModeState::ExplicitDensityMatrix(_) => Vec::new(),
    }
}

#[derive(Clone, Debug)]
pub struct ValidationPoint {
    pub state: TwoModeState,
    pub direction: SphereDirection,
    pub report: ClosedFormReport,
}

#[derive(Clone, Debug)]
pub struct ValidationSummary {
    pub family: Family,
    pub reading: Reading,
    pub tolerance: f64,
    pub points: Vec<ValidationPoint>,
}

impl ValidationSummary {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.points.iter().filter(|p| p.report.verdict == verdict).count()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ValidationPoint> {
        self.points.iter().filter(|p| p.report.verdict == Verdict::Mismatch)
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.points.iter().filter_map(|p| p.report.abs_diff).fold(0.0, f64::max)
    }
}

/// Checks a closed form against the oracle at every direction for one state.
pub fn validate_state(
    state: &TwoModeState,
    directions: &[SphereDirection],
    reading: Reading,
    policy: &TruncationPolicy,
    tolerance: f64,
) -> Result<Vec<ValidationPoint>> {
    let (moments, _) = moments_of_realization(&realize(state, policy)?);
    let sq = reduce_to_sphere_quadratic(&moments)?;
    directions
        .iter()
        .map(|d| {
            let value = evaluate_closed_form(state, d, reading)
                .ok_or_else(|| Error::Parse(format!("{} has no closed form", state.family())))??;
            Ok(ValidationPoint {
                state: state.clone(),
                direction: *d,
                report: ClosedFormReport::compare(value, sq.objective(&d.q), tolerance),
            })
        })
        .collect()
}

/// Runs [`validate_state`] over [`standard_grid`].
pub fn validate_family(
    family: Family,
    reading: Reading,
    policy: &TruncationPolicy,
    tolerance: f64,
) -> Result<ValidationSummary> {
    let grid = standard_grid(family)?;
    let per_state: Vec<Result<Vec<ValidationPoint>>> = grid
        .par_iter()
        .map(|(state, dirs)| validate_state(state, dirs, reading, policy, tolerance))
        .collect();
    let mut points = Vec::new();
    for p in per_state {
        points.extend(p?);
    }
    Ok(ValidationSummary { family, reading, tolerance, points })
}

#[derive(Serialize)]
struct LedgerEntry {
    parameters: std::collections::BTreeMap<&'static str, f64>,
    theta: f64,
    phi: f64,
    closed_form: f64,
    oracle: Option<f64>,
    abs_diff: Option<f64>,
}

#[derive(Serialize)]
struct LedgerDocument<'a> {
    family: Family,
    reading: Reading,
    tolerance: f64,
    points_checked: usize,
    known_discrepancies: Vec<&'a Discrepancy>,
    mismatches: Vec<LedgerEntry>,
}

/// Writes every mismatching point, with both values, as JSON.
pub fn write_ledger<W: Write>(summary: &ValidationSummary, mut w: W) -> io::Result<()> {
    let doc = LedgerDocument {
        family: summary.family,
        reading: summary.reading,
        tolerance: summary.tolerance,
        points_checked: summary.points.len(),
        known_discrepancies: discrepancy_ledger().iter().filter(|d| d.family == summary.family).collect(),
        mismatches: summary
            .mismatches()
            .map(|p| LedgerEntry {
                parameters: state_parameters(&p.state).into_iter().collect(),
                theta: p.direction.theta,
                phi: p.direction.phi,
                closed_form: p.report.value,
                oracle: p.report.oracle_value,
                abs_diff: p.report.abs_diff,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::other)?;
    writeln!(w)
}
