use super::Reading;
use crate::error::{Error, Result};
use crate::moments::S_MIN;

/// `(|u1, u2⟩ + r e^{iη} |v1, 0⟩) / N` with real displacements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuperpositionParams {
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub r: f64,
    pub eta: f64,
}

/// Mandel function of a two-branch coherent superposition in direction `(θ, φ)`.
///
/// [`Reading::Printed`] omits the `N²` normalization from the denominator and
/// uses the printed interference prefactor in the squared intensity bracket.
pub fn q_superposition(p: &SuperpositionParams, theta: f64, phi: f64, reading: Reading) -> Result<f64> {
    let SuperpositionParams { u1, u2, v1, r, eta } = *p;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let st = theta.sin();
    let ce = eta.cos();
    let overlap = (-0.5 * (u2 * u2 + (u1 - v1).powi(2))).exp();
    let norm_sqr = 1.0 + r * r + 2.0 * overlap * r * ce;

    let intensity = u1 * u1 + u2 * u2 + r * r * v1 * v1
        + 2.0 * (-0.5 * (u1 * u1 + u2 * u2 + v1 * v1) + u1 * v1).exp() * r * u1 * v1 * ce;
    if intensity <= S_MIN {
        return Err(Error::ZeroIntensity("superposition with zero mean photon number".to_string()));
    }
    let den = match reading {
        Reading::Printed => 4.0 * intensity,
        Reading::Resolved => 4.0 * norm_sqr * intensity,
    };

    let a1 = norm_sqr;
    let b1 = 4.0 * (u1.powi(4) + r * r * v1.powi(4)) * c.powi(4)
        + 4.0 * u2.powi(4) * s.powi(4)
        + 8.0 * u1.powi(3) * u2 * c * c * phi.cos() * st
        + 8.0 * u1 * u2.powi(3) * phi.cos() * s * s * st
        + 2.0 * u1 * u1 * u2 * u2 * (2.0 + (2.0 * phi).cos()) * st * st;
    let a2 = r * (overlap * (1.0 + r * r) + 2.0 * (-u2 * u2 - (u1 - v1).powi(2)).exp() * r * ce);
    let b2 = 8.0 * u1 * u1 * v1 * v1 * c.powi(4) * ce
        + 8.0 * u1 * u2 * v1 * v1 * c * c * (eta + phi).cos() * st
        + 2.0 * u2 * u2 * v1 * v1 * (eta + 2.0 * phi).cos() * st * st;
    let interference = match reading {
        Reading::Printed => 0.5 * (-0.5 * (u2 * u2 + 2.0 * (u1 - v1).powi(2))).exp(),
        Reading::Resolved => overlap,
    };
    let mode = 2.0 * (u1 * u1 + r * r * v1 * v1) * c * c
        + 2.0 * u2 * u2 * s * s
        + 2.0 * u1 * u2 * phi.cos() * st
        + interference * r * (4.0 * u1 * v1 * c * c * ce + 2.0 * u2 * v1 * (eta + phi).cos() * st);
    Ok((a1 * b1 + a2 * b2 - mode * mode) / den)
}
