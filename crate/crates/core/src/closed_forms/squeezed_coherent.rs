use super::Reading;
use crate::error::{Error, Result};
use crate::moments::S_MIN;

/// `U(a,b) |u e^{iφu}, v e^{iφv}⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedCoherentParams {
    pub u: f64,
    pub phi_u: f64,
    pub v: f64,
    pub phi_v: f64,
    pub a: f64,
    pub b: f64,
}

/// The expression split as printed: denominator, thirty numerator terms and
/// the mode-intensity bracket `X`, with `Q = 2 (Σ T − X²) / den`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedCoherentTerms {
    pub den: f64,
    /// `t[k]` is printed term `k + 1`.
    pub t: [f64; 30],
    pub x: f64,
}

impl SqueezedCoherentTerms {
    pub fn value(&self) -> f64 {
        2.0 * (self.t.iter().sum::<f64>() - self.x * self.x) / self.den
    }
}

/// Mandel function of a squeezed coherent state in direction `(θ, φ)`.
pub fn q_squeezed_coherent(p: &SqueezedCoherentParams, theta: f64, phi: f64, reading: Reading) -> Result<f64> {
    let terms = squeezed_coherent_terms(p, theta, phi, reading);
    if !(terms.den > S_MIN) {
        return Err(Error::ZeroIntensity("squeezed coherent state with zero mean photon number".to_string()));
    }
    Ok(terms.value())
}

/// Term-by-term evaluation.
///
/// [`Reading::Resolved`] evaluates at `(a/2, b/2)` and applies the
/// corrections recorded in [`super::discrepancy_ledger`]: the second mode's
/// hyperbolics use `a + b` throughout, term 8 carries `sin θ` on the whole
/// bracket, and the `sin φ` part of `X` changes sign.
pub fn squeezed_coherent_terms(
    p: &SqueezedCoherentParams,
    theta: f64,
    phi: f64,
    reading: Reading,
) -> SqueezedCoherentTerms {
    let resolved = reading == Reading::Resolved;
    let (a, b) = reading.strengths(p.a, p.b);
    let SqueezedCoherentParams { u, phi_u: pu, v, phi_v: pv, .. } = *p;
    let (ct, st) = (theta.cos(), theta.sin());
    let c2 = (theta / 2.0).cos().powi(2);
    let s2 = (theta / 2.0).sin().powi(2);
    let (cph, sph) = (phi.cos(), phi.sin());
    let (cos, sin, cosh, sinh) = (f64::cos, f64::sin, f64::cosh, f64::sinh);
    let (u2, v2) = (u * u, v * v);
    let (u4, v4) = (u2 * u2, v2 * v2);
    let uv = u * v;
    let st2 = st * st;
    // Printed as a − b in several second-mode terms.
    let am = a - b;
    let ap = if resolved { a + b } else { a - b };

    let mut t = [0.0; 30];
    t[0] = (5.0 + u4 + v4 + 2.0 * (u2 + v2)) / 8.0;
    t[1] = v4 * cos(4.0 * pv) * (-1.0 + ct) / 8.0;
    t[2] = (u2 - v2) * (2.0 + u2 + v2) * ct / 8.0;
    t[3] = -u4 * cos(4.0 * pu) * (1.0 + ct) / 8.0;
    t[4] = -(1.0 + u2 * (2.0 + u2 - u2 * cos(4.0 * pu)) + v2 * (2.0 + v2 - v2 * cos(4.0 * pv))) * st2 / 16.0;
    t[5] = uv
        * cosh(2.0 * a)
        * (-8.0 * cph * cos(pu - pv) - (2.0 + u2 + v2 + (u2 - v2) * ct) * sph * sin(pu - pv)
            - u2 * (1.0 + ct) * sph * sin(3.0 * pu + pv)
            + v2 * (1.0 - ct) * sph * sin(pu + 3.0 * pv))
        * st
        / 4.0;
    t[6] = uv
        * (-8.0 * cph * cos(pu + pv) - (u2 - v2 + (2.0 + u2 + v2) * ct) * sph * sin(pu + pv)
            - v2 * (1.0 - ct) * sph * sin(pu - 3.0 * pv)
            - u2 * (1.0 + ct) * sph * sin(3.0 * pu - pv))
        * st
        * sinh(2.0 * a)
        / 4.0;
    let t8_inner_first = 8.0 * sph * sin(pu - pv);
    let t8_mid = cph * cos(pu - pv) * (2.0 + u2 + v2 + (u2 - v2) * ct) - cph * 2.0 * u2 * cos(3.0 * pu + pv) * c2;
    let t8_last = 2.0 * v2 * cph * cos(pu + 3.0 * pv) * s2;
    t[7] = if resolved {
        uv * cosh(-2.0 * b) * (t8_inner_first + t8_mid - t8_last) * st / 4.0
    } else {
        uv * cosh(-2.0 * b) * (t8_inner_first * st + t8_mid - t8_last * st) / 4.0
    };
    t[8] = uv
        * (v2 * cph * cos(pu - 3.0 * pv) * (-1.0 + ct) + u2 * cph * cos(3.0 * pu - pv) * (1.0 + ct)
            - cph * cos(pu + pv) * (u2 - v2 + (2.0 + u2 + v2) * ct)
            - 8.0 * sph * sin(pu + pv))
        * st
        * sinh(-2.0 * b)
        / 4.0;
    t[9] = (3.0 + 12.0 * u2 + 6.0 * u4 + 2.0 * u4 * cos(4.0 * pu)) * c2 * c2 * cosh(4.0 * am) / 8.0;
    t[10] = (3.0 + 12.0 * v2 + 6.0 * v4 + 2.0 * v4 * cos(4.0 * pv)) * cosh(4.0 * (a + b)) * s2 * s2 / 8.0;
    t[11] = u2 * (3.0 + 2.0 * u2) * cos(2.0 * pu) * c2 * c2 * sinh(4.0 * am) / 2.0;
    t[12] = v2 * (3.0 + 2.0 * v2) * cos(2.0 * pv) * s2 * s2 * sinh(4.0 * (a + b)) / 2.0;
    t[13] = cosh(2.0 * am) * (-(1.0 + 2.0 * u2) * c2 + u2 * v2 * cos(2.0 * pu) * sin(2.0 * phi) * sin(2.0 * pv) * st2 / 2.0);
    t[14] = cosh(2.0 * ap) * (-(1.0 + 2.0 * v2) * s2 - u2 * v2 * cos(2.0 * pv) * sin(2.0 * phi) * sin(2.0 * pu) * st2 / 2.0);
    t[15] = (-u2 * cos(2.0 * pu) * (1.0 + ct) + (1.0 + 2.0 * u2) * v2 * sin(2.0 * phi) * sin(2.0 * pv) * st2 / 4.0)
        * sinh(2.0 * am);
    t[16] = (v2 * cos(2.0 * pv) * (-1.0 + ct) - u2 * (1.0 + 2.0 * v2) * sin(2.0 * phi) * sin(2.0 * pu) * st2 / 4.0)
        * sinh(2.0 * ap);
    t[17] = ((1.0 + 2.0 * u2) * (1.0 + 2.0 * v2) + 2.0 * u2 * v2 * cos(2.0 * phi) * cos(2.0 * pu) * cos(2.0 * pv))
        * cosh(2.0 * am)
        * cosh(2.0 * ap)
        * st2
        / 4.0;
    t[18] = (4.0 * u2 * (1.0 + 2.0 * v2) * cos(2.0 * pu) + 2.0 * (1.0 + 2.0 * u2) * v2 * cos(2.0 * phi) * cos(2.0 * pv))
        * cosh(2.0 * ap)
        * st2
        * sinh(2.0 * am)
        / 8.0;
    t[19] = ((1.0 + 2.0 * u2) * (1.0 + 2.0 * v2) * cos(2.0 * phi) + 8.0 * u2 * v2 * cos(2.0 * pu) * cos(2.0 * pv))
        * st2
        * sinh(2.0 * am)
        * sinh(2.0 * ap)
        / 8.0;
    t[20] = (2.0 * u2 * (1.0 + 2.0 * v2) * cos(2.0 * phi) * cos(2.0 * pu) + 4.0 * (1.0 + 2.0 * u2) * v2 * cos(2.0 * pv))
        * cosh(2.0 * am)
        * st2
        * sinh(2.0 * ap)
        / 8.0;
    t[21] = uv * cph * (3.0 * (1.0 + u2) * cos(pu - pv) + u2 * cos(3.0 * pu + pv)) * c2 * cosh(2.0 * (2.0 * a - b)) * st / 2.0;
    t[22] = uv * cph * (u2 * cos(3.0 * pu - pv) + 3.0 * (1.0 + u2) * cos(pu + pv)) * c2 * st * sinh(2.0 * (2.0 * a - b)) / 2.0;
    t[23] = uv * cph * (3.0 * (1.0 + v2) * cos(pu - pv) + v2 * cos(pu + 3.0 * pv)) * cosh(2.0 * (2.0 * a + b)) * s2 * st / 2.0;
    t[24] = uv * cph * (v2 * cos(pu - 3.0 * pv) + 3.0 * (1.0 + v2) * cos(pu + pv)) * s2 * st * sinh(2.0 * (2.0 * a + b)) / 2.0;
    t[25] = uv * c2 * sph * (-u2 * sin(3.0 * pu - pv) + 3.0 * (1.0 + u2) * sin(pu + pv)) * st * sinh(2.0 * (a - 2.0 * b)) / 2.0;
    t[26] = uv * sph * (v2 * sin(pu - 3.0 * pv) + 3.0 * (1.0 + v2) * sin(pu + pv)) * s2 * st * sinh(-2.0 * (a + 2.0 * b)) / 2.0;
    t[27] = -uv * cosh(-2.0 * (a + 2.0 * b)) * sph * (3.0 * (1.0 + v2) * sin(pu - pv) + v2 * sin(pu + 3.0 * pv)) * s2 * st / 2.0;
    t[28] = uv * c2 * cosh(2.0 * (a - 2.0 * b)) * sph * (-3.0 * (1.0 + u2) * sin(pu - pv) + u2 * sin(3.0 * pu + pv)) * st / 2.0;
    t[29] = u2 * v2 * cos(2.0 * phi) * sin(2.0 * pu) * sin(2.0 * pv) * st2 / 2.0;

    let sin_sign = if resolved { -1.0 } else { 1.0 };
    let x = -0.5
        + (1.0 + ct) * ((1.0 + 2.0 * u2) * cosh(2.0 * am) + 2.0 * u2 * cos(2.0 * pu) * sinh(2.0 * am)) / 4.0
        + (1.0 - ct) * ((1.0 + 2.0 * v2) * cosh(2.0 * ap) + 2.0 * v2 * cos(2.0 * pv) * sinh(2.0 * ap)) / 4.0
        + uv * st
            * (sin_sign * sph * (cosh(-2.0 * b) * sin(pu - pv) - sin(pu + pv) * sinh(-2.0 * b))
                + cph * (cos(pu - pv) * cosh(2.0 * a) + cos(pu + pv) * sinh(2.0 * a)));
    let den = -2.0 + cosh(2.0 * am) + 2.0 * u2 * cosh(2.0 * am) + cosh(2.0 * (a + b)) + 2.0 * v2 * cosh(2.0 * (a + b))
        + 2.0 * u2 * cos(2.0 * pu) * sinh(2.0 * am)
        + 2.0 * v2 * cos(2.0 * pv) * sinh(2.0 * (a + b));
    SqueezedCoherentTerms { den, t, x }
}
