use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{Axis, AxisValues, Format, SweepSpec};
use crate::fock::Family;

/// Range used for the squeeze axes when none is given.
pub const DEFAULT_SQUEEZE_RANGE: (f64, f64, usize) = (0.0, 1.5, 31);

const ETA_STEPS: usize = 72;

const NAMES: [&str; 20] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d",
    "fig4a", "fig4b", "fig4c", "fig4d", "fig5a", "fig5b", "fig5c", "fig5d",
];

pub fn preset_names() -> &'static [&'static str] {
    &NAMES
}

fn squeeze_axes() -> Vec<Axis> {
    let (min, max, steps) = DEFAULT_SQUEEZE_RANGE;
    ["a", "b"]
        .iter()
        .map(|n| Axis { name: n.to_string(), values: AxisValues::Range { min, max, steps } })
        .collect()
}

fn fixed(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// The sweep behind one figure panel.
pub fn preset(name: &str) -> Option<SweepSpec> {
    let range_note = "a and b ranges are defaults; the figures do not state them".to_string();
    let coherent = |z1: f64, z2: f64, phase1: f64, phase2: f64| SweepSpec {
        family: Family::SqueezedCoherent,
        fixed: fixed(&[("z1", z1), ("phase1", phase1), ("z2", z2), ("phase2", phase2)]),
        axes: squeeze_axes(),
        cutoff: None,
        cross_check: false,
        format: Format::Csv,
        preset: Some(name.to_string()),
        notes: vec![range_note.clone()],
    };
    let phases = [(0.0, 0.0), (0.0, FRAC_PI_4), (0.0, FRAC_PI_2), (FRAC_PI_2, FRAC_PI_2)];
    let panel = name.strip_prefix("fig")?;
    let (figure, letter) = panel.split_at(1);
    let index = match letter {
        "a" => 0,
        "b" => 1,
        "c" => 2,
        "d" => 3,
        _ => return None,
    };
    let spec = match figure {
        "1" => {
            let z2 = if index == 0 { 0.0 } else { 3.0 };
            let phase2 = [0.0, 0.0, FRAC_PI_4, FRAC_PI_2][index];
            coherent(0.0, z2, 0.0, phase2)
        }
        "2" => coherent(2.0, 2.0, phases[index].0, phases[index].1),
        "3" => coherent(2.0, 4.0, phases[index].0, phases[index].1),
        "4" => SweepSpec {
            family: Family::SqueezedThermal,
            fixed: fixed(&[("beta", [0.5, 1.0, 2.0, 4.0][index])]),
            ..coherent(0.0, 0.0, 0.0, 0.0)
        },
        "5" => {
            let (u1, u2, v1) = [(0.5, 0.5, 1.0), (0.5, 1.0, 1.0), (1.5, 1.0, 1.0), (1.5, 1.0, 0.5)][index];
            SweepSpec {
                family: Family::Superposition,
                fixed: fixed(&[("u1", u1), ("u2", u2), ("v1", v1), ("v2", 0.0)]),
                axes: vec![
                    Axis { name: "r".to_string(), values: AxisValues::List { values: vec![0.5, 1.0] } },
                    Axis {
                        name: "eta".to_string(),
                        values: AxisValues::Periodic { min: 0.0, max: 2.0 * PI, steps: ETA_STEPS },
                    },
                ],
                notes: vec!["eta spacing is a default; the figures do not state it".to_string()],
                ..coherent(0.0, 0.0, 0.0, 0.0)
            }
        }
        _ => return None,
    };
    Some(spec)
}
