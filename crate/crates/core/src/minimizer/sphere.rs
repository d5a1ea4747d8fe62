use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::{Diagnostics, Method, QResult};
use crate::error::{Error, Result};
use crate::moments::{alpha_of_q, MomentSummary, SphereDirection, S_MIN};

/// `scale · (qᵀAq + b·q + c)` restricted to the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereQuadratic {
    pub a: Matrix3<f64>,
    pub b: Vector3<f64>,
    pub c: f64,
    pub scale: f64,
}

impl SphereQuadratic {
    pub fn objective(&self, q: &Vector3<f64>) -> f64 {
        self.scale * ((q.transpose() * self.a * q)[(0, 0)] + self.b.dot(q) + self.c)
    }

    /// Upper bound on `|self(q) − other(q)|` over the sphere.
    pub fn max_difference(&self, other: &SphereQuadratic) -> f64 {
        let da = (self.a * self.scale - other.a * other.scale).norm();
        let db = (self.b * self.scale - other.b * other.scale).norm();
        let dc = (self.c * self.scale - other.c * other.scale).abs();
        da + db + dc
    }
}

/// Expands the reduced Mandel function into `A`, `b`, `c` and `1/(8s)`.
pub fn reduce_to_sphere_quadratic(m: &MomentSummary) -> Result<SphereQuadratic> {
    if m.s <= S_MIN {
        return Err(Error::ZeroIntensity("vacuum state".to_string()));
    }
    let r_sym = 0.5 * (m.r + m.r.transpose());
    Ok(SphereQuadratic {
        a: -r_sym - 4.0 * m.u * m.u.transpose(),
        b: 2.0 * m.v - 8.0 * m.s * m.u,
        c: m.r.trace() - 4.0 * m.s * m.s,
        scale: 1.0 / (8.0 * m.s),
    })
}

/// Orders candidate minimizers: smaller polar angle first, then smaller azimuth.
pub(crate) fn precedes(x: &SphereDirection, y: &SphereDirection) -> bool {
    const TIE: f64 = 1e-9;
    if (x.theta - y.theta).abs() > TIE {
        x.theta < y.theta
    } else {
        x.phi < y.phi - TIE
    }
}

/// Two minima closer than this in value are treated as a tie.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Global minimum on the sphere via the secular equation.
///
/// Stationary points satisfy `(A − μ) q = −b/2`; the global one has
/// `μ <= λ_min(A)`. Writing `β = Vᵀ b / 2` in the eigenbasis, `μ` solves
/// `Σ β_i² / (λ_i − μ)² = 1` below `λ_min`, unless `b` has no component along
/// the bottom eigenspace and the remaining part of `q` has norm below one (the
/// hard case), where `μ = λ_min` and the rest of `q` lies in that eigenspace.
pub fn minimize_sphere_quadratic(sq: &SphereQuadratic) -> Result<QResult> {
    let finite = sq.a.iter().chain(sq.b.iter()).all(|x| x.is_finite())
        && sq.c.is_finite()
        && sq.scale.is_finite()
        && sq.scale > 0.0;
    if !finite {
        return Err(Error::NumericalFailure("non-finite sphere quadratic".to_string()));
    }
    let sym = 0.5 * (sq.a + sq.a.transpose());
    let eig = SymmetricEigen::new(sym);
    let eig_residual =
        (sym * eig.eigenvectors - eig.eigenvectors * Matrix3::from_diagonal(&eig.eigenvalues)).norm();
    if eig_residual > 1e-10 * sym.norm().max(1.0) {
        return Err(Error::NumericalFailure(format!("eigendecomposition residual {eig_residual:e}")));
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lam: [f64; 3] = order.map(|i| eig.eigenvalues[i]);
    let vecs: [Vector3<f64>; 3] = order.map(|i| eig.eigenvectors.column(i).into_owned());
    let beta: [f64; 3] = vecs.map(|v| 0.5 * v.dot(&sq.b));

    let magnitude = 1.0f64.max(sym.norm()).max(sq.b.norm());
    let cluster = 1e-12 * magnitude;
    let bottom: Vec<usize> = (0..3).filter(|&i| lam[i] - lam[0] <= cluster).collect();
    let beta_bottom = bottom.iter().map(|&i| beta[i] * beta[i]).sum::<f64>().sqrt();

    let evaluate = |q: &Vector3<f64>| sq.objective(q);
    let mut hard_case = false;
    let mut degenerate = false;
    let (mu, q) = if beta_bottom <= 1e-12 * magnitude {
        let mut p = Vector3::zeros();
        for i in 0..3 {
            if !bottom.contains(&i) {
                p -= vecs[i] * (beta[i] / (lam[i] - lam[0]));
            }
        }
        if p.norm() <= 1.0 {
            hard_case = true;
            let t = (1.0 - p.norm_squared()).max(0.0).sqrt();
            let q = hard_case_point(&p, t, &bottom, &vecs);
            degenerate = t > 1e-7 || bottom.len() > 1;
            (lam[0], q)
        } else {
            (secular_root(&lam, &beta)?, Vector3::zeros())
        }
    } else {
        (secular_root(&lam, &beta)?, Vector3::zeros())
    };
    let q = if hard_case {
        q
    } else {
        let y: Vec<f64> = (0..3).map(|i| -beta[i] / (lam[i] - mu)).collect();
        let q: Vector3<f64> = (0..3).map(|i| vecs[i] * y[i]).sum();
        q / q.norm()
    };

    let mut best = SphereDirection::from_vector(q);
    let mut value = evaluate(&best.q);
    if !hard_case {
        // A nearly-hard case leaves a mirror image with almost the same value.
        let w = &vecs[0];
        let mirror = SphereDirection::from_vector(best.q - 2.0 * best.q.dot(w) * w);
        if (mirror.q - best.q).norm() > 1e-9 {
            let mirror_value = evaluate(&mirror.q);
            if (mirror_value - value).abs() < DEGENERACY_TOLERANCE {
                degenerate = true;
                if precedes(&mirror, &best) {
                    best = mirror;
                    value = mirror_value;
                }
            }
        }
    }
    let residual = ((sym - Matrix3::identity() * mu) * best.q + 0.5 * sq.b).norm();

    Ok(QResult {
        q_min: value,
        q_bar: best,
        alpha_bar: alpha_of_q(&best),
        method: Method::SecularExact,
        diagnostics: Diagnostics {
            multiplier: Some(mu),
            lambda_min: Some(lam[0]),
            stationarity_residual: Some(residual),
            hard_case,
            degenerate,
            ..Diagnostics::default()
        },
    })
}

/// `p + t w` with `w` a unit vector of the bottom eigenspace chosen by the
/// tie-break (largest `q3`, then largest `q1`, then largest `q2`).
fn hard_case_point(p: &Vector3<f64>, t: f64, bottom: &[usize], vecs: &[Vector3<f64>; 3]) -> Vector3<f64> {
    if t == 0.0 {
        return p / p.norm();
    }
    let project = |target: Vector3<f64>| -> Vector3<f64> {
        bottom.iter().map(|&i| vecs[i] * vecs[i].dot(&target)).sum()
    };
    let mut w = Vector3::zeros();
    for axis in [Vector3::z(), Vector3::x(), Vector3::y()] {
        let cand = project(axis);
        if cand.norm() > 1e-9 {
            w = cand / cand.norm();
            break;
        }
    }
    if w == Vector3::zeros() {
        w = vecs[bottom[0]];
    }
    let plus = SphereDirection::from_vector(p + w * t);
    let minus = SphereDirection::from_vector(p - w * t);
    if precedes(&minus, &plus) {
        minus.q
    } else {
        plus.q
    }
}

/// Root of `1/‖y(μ)‖ = 1` on `μ < λ_min`, safeguarded Newton.
fn secular_root(lam: &[f64; 3], beta: &[f64; 3]) -> Result<f64> {
    let beta_norm = beta.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_y = |mu: f64| -> (f64, f64) {
        let mut n2 = 0.0;
        let mut d3 = 0.0;
        for i in 0..3 {
            let gap = lam[i] - mu;
            n2 += beta[i] * beta[i] / (gap * gap);
            d3 += beta[i] * beta[i] / (gap * gap * gap);
        }
        (n2.sqrt(), d3)
    };
    let mut lo = lam[0] - beta_norm;
    let mut hi = lam[0];
    let mut mu = lo;
    for _ in 0..500 {
        let (ny, d3) = norm_y(mu);
        let g = 1.0 / ny - 1.0;
        if !g.is_finite() {
            return Err(Error::NumericalFailure(format!("secular function not finite at mu = {mu}")));
        }
        if g.abs() < 1e-15 || hi - lo <= 4.0 * f64::EPSILON * mu.abs().max(1.0) {
            return Ok(mu);
        }
        if g > 0.0 {
            lo = mu;
        } else {
            hi = mu;
        }
        let slope = -d3 / (ny * ny * ny);
        let newton = mu - g / slope;
        mu = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Err(Error::NumericalFailure("secular iteration did not converge".to_string()))
}
