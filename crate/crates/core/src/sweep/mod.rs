//! Parameter grids over the parametric families, evaluated in parallel and
//! emitted in a fixed row order.

mod output;
mod presets;

use std::collections::{BTreeMap, HashMap};

use nalgebra::Matrix3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use output::{write_csv, write_json, SweepMetadata, TOOL_VERSION};
pub use presets::{preset, preset_names, DEFAULT_SQUEEZE_RANGE};

use crate::error::{Error, Result};
use crate::fock::{mode_specs, realize, realize_mode, Family, ModeSpec, TwoModeState};
use crate::minimizer::{
    invariant_mandel_q_from_moments, invariant_mandel_q_from_realization, CrossCheck, QOptions, QResult,
};
use crate::moments::{moments_from_gram, product_gram};

/// Output encoding of a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// The values taken by one swept parameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AxisValues {
    /// `steps` evenly spaced values from `min` to `max` inclusive.
    Range { min: f64, max: f64, steps: usize },
    /// `steps` evenly spaced values on `[min, max)`, for periodic parameters.
    Periodic { min: f64, max: f64, steps: usize },
    List { values: Vec<f64> },
}

impl AxisValues {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            AxisValues::Range { min, max, steps } => (0..steps)
                .map(|i| if i + 1 == steps { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 })
                .collect(),
            AxisValues::Periodic { min, max, steps } => {
                (0..steps).map(|i| min + (max - min) * i as f64 / steps as f64).collect()
            }
            AxisValues::List { ref values } => values.clone(),
        }
    }

    fn check(&self, name: &str) -> Result<()> {
        let bad = |reason| Err(Error::Parse(format!("axis {name}: {reason}")));
        match *self {
            AxisValues::Range { min, max, steps } | AxisValues::Periodic { min, max, steps } => {
                if steps < 2 {
                    return bad("needs at least 2 steps");
                }
                if !(min.is_finite() && max.is_finite() && min < max) {
                    return bad("needs finite min < max");
                }
            }
            AxisValues::List { ref values } => {
                if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                    return bad("needs a non-empty list of finite values");
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    #[serde(flatten)]
    pub values: AxisValues,
}

/// Parameters that may be swept.
pub const SWEEPABLE: [&str; 5] = ["a", "b", "eta", "beta", "r"];

/// Parameter names of a sweepable family and their defaults, if any.
pub fn family_parameters(family: Family) -> Result<&'static [(&'static str, Option<f64>)]> {
    match family {
        Family::SqueezedCoherent => Ok(&[
            ("z1", None),
            ("phase1", Some(0.0)),
            ("z2", None),
            ("phase2", Some(0.0)),
            ("a", None),
            ("b", None),
        ]),
        Family::SqueezedThermal => Ok(&[("beta", None), ("a", None), ("b", None)]),
        Family::Superposition => Ok(&[
            ("u1", None),
            ("u2", None),
            ("v1", None),
            ("v2", Some(0.0)),
            ("r", None),
            ("eta", None),
        ]),
        other => Err(Error::Parse(format!("family {other} cannot be swept"))),
    }
}

/// A grid over one or two parameters of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub fixed: BTreeMap<String, f64>,
    /// Row-major: the first axis varies slowest.
    pub axes: Vec<Axis>,
    /// Fixed `n_max` per mode; adaptive when `None`.
    pub cutoff: Option<usize>,
    pub cross_check: bool,
    pub format: Format,
    pub preset: Option<String>,
    pub notes: Vec<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let params = family_parameters(self.family)?;
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Parse(format!("a sweep needs 1 or 2 axes, got {}", self.axes.len())));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            if !SWEEPABLE.contains(&axis.name.as_str()) || !params.iter().any(|(p, _)| *p == axis.name) {
                return Err(Error::Parse(format!("{} is not a sweepable parameter of {}", axis.name, self.family)));
            }
            if self.fixed.contains_key(&axis.name) {
                return Err(Error::Parse(format!("{} is both fixed and swept", axis.name)));
            }
            if self.axes[..i].iter().any(|a| a.name == axis.name) {
                return Err(Error::Parse(format!("axis {} given twice", axis.name)));
            }
            axis.values.check(&axis.name)?;
        }
        for (name, value) in &self.fixed {
            if !params.iter().any(|(p, _)| p == name) {
                return Err(Error::Parse(format!("{name} is not a parameter of {}", self.family)));
            }
            if !value.is_finite() {
                return Err(Error::Parse(format!("{name} must be finite")));
            }
        }
        for (name, default) in params {
            let given = self.fixed.contains_key(*name) || self.axes.iter().any(|a| a.name == *name);
            if !given && default.is_none() {
                return Err(Error::Parse(format!("missing parameter {name} for {}", self.family)));
            }
        }
        Ok(())
    }

    /// Grid coordinates in emission order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            let values = axis.values.values();
            points = points
                .into_iter()
                .flat_map(|p| values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                }))
                .collect();
        }
        points
    }

    /// The state at one grid point.
    pub fn state_at(&self, coords: &[f64]) -> Result<TwoModeState> {
        let params = family_parameters(self.family)?;
        let get = |name: &str| -> f64 {
            if let Some(i) = self.axes.iter().position(|a| a.name == name) {
                return coords[i];
            }
            if let Some(v) = self.fixed.get(name) {
                return *v;
            }
            params.iter().find(|(p, _)| *p == name).and_then(|(_, d)| *d).unwrap_or(f64::NAN)
        };
        let state = match self.family {
            Family::SqueezedCoherent => TwoModeState::SqueezedCoherent {
                z1: Complex64::from_polar(get("z1"), get("phase1")),
                z2: Complex64::from_polar(get("z2"), get("phase2")),
                a: get("a"),
                b: get("b"),
            },
            Family::SqueezedThermal => TwoModeState::SqueezedThermal { beta: get("beta"), a: get("a"), b: get("b") },
            Family::Superposition => TwoModeState::CoherentSuperposition {
                u1: get("u1"),
                u2: get("u2"),
                v1: get("v1"),
                v2: get("v2"),
                r: get("r"),
                eta: get("eta"),
            },
            other => return Err(Error::Parse(format!("family {other} cannot be swept"))),
        };
        state.validate()?;
        Ok(state)
    }

    pub fn options(&self) -> QOptions {
        let mut options = QOptions {
            cross_check: if self.cross_check { CrossCheck::IfValidated } else { CrossCheck::Off },
            ..QOptions::default()
        };
        if let Some(n) = self.cutoff {
            options.truncation.n_max = Some(n);
        }
        options
    }
}

/// Result at one grid point. Degenerate points carry `None`.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub result: Option<QResult>,
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// Evaluates every grid point.
///
/// Points with zero mean photon number are recorded as undefined; any other
/// error aborts the sweep. Product states share mode realizations across the
/// grid, so each distinct single-mode input is built once.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput> {
    spec.validate()?;
    let options = spec.options();
    let points = spec.points();
    let states: Vec<TwoModeState> = points.iter().map(|p| spec.state_at(p)).collect::<Result<_>>()?;

    let mut distinct: Vec<ModeSpec> = Vec::new();
    let mut seen = HashMap::new();
    for s in &states {
        for m in mode_specs(s).into_iter().flatten() {
            if seen.insert(m.key(), ()).is_none() {
                distinct.push(m);
            }
        }
    }
    let realized: Vec<Result<CachedMode>> = distinct
        .par_iter()
        .map(|m| {
            let mode = realize_mode(m, &options.truncation)?;
            Ok(CachedMode { gram: mode.gram(), extended: mode.gram_extended(), levels: mode.levels })
        })
        .collect();
    let cache: HashMap<_, _> = distinct.iter().map(|m| m.key()).zip(realized).collect();

    let evaluated: Vec<Result<Option<QResult>>> = states
        .par_iter()
        .map(|state| {
            let outcome = match mode_specs(state) {
                Some([m1, m2]) => product_point(&cache[&m1.key()], &cache[&m2.key()], state, &options),
                None => realize(state, &options.truncation)
                    .and_then(|r| invariant_mandel_q_from_realization(state, &r, &options)),
            };
            match outcome {
                Ok(r) => Ok(Some(r)),
                Err(Error::ZeroIntensity(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();

    let rows = points
        .into_iter()
        .zip(evaluated)
        .map(|(coords, result)| Ok(SweepRow { coords, result: result? }))
        .collect::<Result<_>>()?;
    Ok(SweepOutput { spec: spec.clone(), rows })
}

#[derive(Clone, Copy, Debug)]
struct CachedMode {
    gram: Matrix3<Complex64>,
    extended: Matrix3<Complex64>,
    levels: usize,
}

fn product_point(
    m1: &Result<CachedMode>,
    m2: &Result<CachedMode>,
    state: &TwoModeState,
    options: &QOptions,
) -> Result<QResult> {
    let (m1, m2) = (m1.clone()?, m2.clone()?);
    let moments = moments_from_gram(&product_gram(&m1.gram, &m2.gram));
    let extended = moments_from_gram(&product_gram(&m1.extended, &m2.extended));
    let mut result = invariant_mandel_q_from_moments(&moments, Some(&extended), options)?;
    result.diagnostics.levels = Some((m1.levels, m2.levels));
    if options.cross_check != CrossCheck::Off {
        result.diagnostics.closed_form_check = crate::minimizer::closed_form_cross_check(state, &result, options)?;
    }
    Ok(result)
}
