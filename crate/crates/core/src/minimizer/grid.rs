use std::f64::consts::PI;

use nalgebra::{Vector2, Vector3};

use super::sphere::{precedes, DEGENERACY_TOLERANCE};
use super::{Diagnostics, Method, QResult};
use crate::error::{Error, Result};
use crate::moments::{alpha_of_q, SphereDirection};

/// Resolution and stopping rules for the grid-plus-refinement minimizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    /// Polar samples including both poles.
    pub n_theta: usize,
    /// Azimuthal samples on `[0, 2π)`.
    pub n_phi: usize,
    /// Simplex diameter (radians) at which refinement stops.
    pub refine_tol: f64,
    pub max_iter: usize,
    /// Number of separated grid minima used as refinement starts.
    pub starts: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n_theta: 181, n_phi: 360, refine_tol: 1e-10, max_iter: 2000, starts: 5 }
    }
}

impl GridConfig {
    pub fn dense() -> Self {
        GridConfig { n_theta: 721, n_phi: 1440, ..Self::default() }
    }
}

/// Minimizes `f` over the sphere by sampling a (θ, φ) grid, then refining the
/// best separated samples with Nelder–Mead in tangent-plane coordinates.
pub fn minimize_grid<F>(f: F, config: &GridConfig) -> Result<QResult>
where
    F: Fn(&SphereDirection) -> f64,
{
    assert!(config.n_theta >= 2 && config.n_phi >= 1);
    let d_theta = PI / (config.n_theta - 1) as f64;
    let d_phi = 2.0 * PI / config.n_phi as f64;
    let (sin_phi, cos_phi): (Vec<f64>, Vec<f64>) =
        (0..config.n_phi).map(|j| (j as f64 * d_phi).sin_cos()).unzip();

    let direction = |i: usize, j: usize| -> SphereDirection {
        if i == 0 {
            SphereDirection::north()
        } else if i + 1 == config.n_theta {
            SphereDirection::south()
        } else {
            let theta = i as f64 * d_theta;
            let (st, ct) = theta.sin_cos();
            SphereDirection {
                q: Vector3::new(st * cos_phi[j], st * sin_phi[j], ct),
                theta,
                phi: j as f64 * d_phi,
            }
        }
    };
    let row_len = |i: usize| if i == 0 || i + 1 == config.n_theta { 1 } else { config.n_phi };

    // values[i] holds row i of the grid; the poles are single samples.
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(config.n_theta);
    let mut evaluations = 0usize;
    for i in 0..config.n_theta {
        let mut row = Vec::with_capacity(row_len(i));
        for j in 0..row_len(i) {
            let dir = direction(i, j);
            let value = f(&dir);
            evaluations += 1;
            if value.is_nan() {
                return Err(Error::NumericalFailure(format!(
                    "objective is NaN at theta = {}, phi = {}",
                    dir.theta, dir.phi
                )));
            }
            row.push(value);
        }
        values.push(row);
    }

    // Only discrete local minima can seed a basin; ranking them is far
    // cheaper than sorting the whole grid.
    let at = |i: usize, j: usize| values[i][if row_len(i) == 1 { 0 } else { j }];
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..config.n_theta {
        for j in 0..row_len(i) {
            let v = values[i][j];
            let is_min = if row_len(i) == 1 {
                let next = if i == 0 { 1 } else { config.n_theta - 2 };
                values[next].iter().all(|&w| v <= w)
            } else {
                let left = (j + config.n_phi - 1) % config.n_phi;
                let right = (j + 1) % config.n_phi;
                v <= at(i, left) && v <= at(i, right) && v <= at(i - 1, j) && v <= at(i + 1, j)
            };
            if is_min {
                candidates.push((v, i, j));
            }
        }
    }
    // Stable: equal values keep grid order, which is the tie-break order.
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let separation = 3.0 * d_theta.max(d_phi);
    let mut starts: Vec<(f64, SphereDirection)> = Vec::new();
    for &(value, i, j) in &candidates {
        if starts.len() == config.starts {
            break;
        }
        let dir = direction(i, j);
        if starts.iter().all(|(_, s)| angle_between(&s.q, &dir.q) > separation) {
            starts.push((value, dir));
        }
    }

    let step = d_theta.max(d_phi);
    let mut refined: Vec<(f64, SphereDirection)> = Vec::new();
    let mut iterations = 0usize;
    for &(value, dir) in &starts {
        let mut best = (value, dir);
        // A second pass re-centres the chart on the improved point.
        for pass in 0..2 {
            let scale = if pass == 0 { step } else { step * 1e-3 };
            let (v, d, it) = nelder_mead(&f, &best.1, scale, config)?;
            iterations += it;
            if v < best.0 {
                best = (v, d);
            }
        }
        refined.push(best);
    }

    let mut winner = refined[0];
    for cand in &refined[1..] {
        if cand.0 < winner.0 - DEGENERACY_TOLERANCE
            || ((cand.0 - winner.0).abs() <= DEGENERACY_TOLERANCE && precedes(&cand.1, &winner.1))
        {
            winner = *cand;
        }
    }
    let degenerate = refined.iter().any(|(v, d)| {
        (v - winner.0).abs() <= DEGENERACY_TOLERANCE && angle_between(&d.q, &winner.1.q) > 1e-3
    });

    Ok(QResult {
        q_min: winner.0,
        q_bar: winner.1,
        alpha_bar: alpha_of_q(&winner.1),
        method: Method::GridRefine,
        diagnostics: Diagnostics {
            grid: Some((config.n_theta, config.n_phi)),
            grid_evaluations: evaluations,
            refine_iterations: iterations,
            degenerate,
            ..Diagnostics::default()
        },
    })
}

fn angle_between(x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
    x.cross(y).norm().atan2(x.dot(y))
}

/// Nelder–Mead on the chart `x ↦ normalize(q0 + x1 e1 + x2 e2)`.
fn nelder_mead<F>(
    f: &F,
    start: &SphereDirection,
    step: f64,
    config: &GridConfig,
) -> Result<(f64, SphereDirection, usize)>
where
    F: Fn(&SphereDirection) -> f64,
{
    let q0 = start.q;
    let helper = if q0.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (helper - q0 * q0.dot(&helper)).normalize();
    let e2 = q0.cross(&e1);
    let chart = |x: &Vector2<f64>| SphereDirection::from_vector(q0 + e1 * x.x + e2 * x.y);
    let eval = |x: &Vector2<f64>| -> Result<f64> {
        let v = f(&chart(x));
        if v.is_nan() {
            Err(Error::NumericalFailure("objective is NaN during refinement".to_string()))
        } else {
            Ok(v)
        }
    };

    let mut simplex = [Vector2::zeros(), Vector2::new(step, 0.0), Vector2::new(0.0, step)];
    let mut values = [eval(&simplex[0])?, eval(&simplex[1])?, eval(&simplex[2])?];
    let mut it = 0;
    while it < config.max_iter {
        it += 1;
        // Sort by value; the stable order keeps the start vertex first on ties.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);

        let diameter = (simplex[1] - simplex[0]).norm().max((simplex[2] - simplex[0]).norm());
        if diameter < config.refine_tol {
            break;
        }
        let centroid = 0.5 * (simplex[0] + simplex[1]);
        let reflect = centroid + (centroid - simplex[2]);
        let fr = eval(&reflect)?;
        if fr < values[0] {
            let expand = centroid + 2.0 * (centroid - simplex[2]);
            let fe = eval(&expand)?;
            if fe < fr {
                simplex[2] = expand;
                values[2] = fe;
            } else {
                simplex[2] = reflect;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflect;
            values[2] = fr;
        } else {
            let contract = if fr < values[2] {
                centroid + 0.5 * (reflect - centroid)
            } else {
                centroid + 0.5 * (simplex[2] - centroid)
            };
            let fc = eval(&contract)?;
            if fc < values[2].min(fr) {
                simplex[2] = contract;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0]);
                    values[k] = eval(&simplex[k])?;
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| values[i].total_cmp(&values[j])).expect("three vertices");
    Ok((values[best], chart(&simplex[best]), it))
}
