use super::Reading;
use crate::error::{Error, Result};
use crate::moments::SphereDirection;

/// The printed squeezed-thermal expression in direction `q`.
///
/// Known not to agree with the oracle under any bracket placement; see
/// [`super::discrepancy_ledger`]. With [`Reading::Resolved`] it is evaluated
/// at `(a/2, b/2)`, which fixes the squeeze strengths but not the structure.
pub fn q_squeezed_thermal(beta: f64, a: f64, b: f64, q: &SphereDirection, reading: Reading) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidTemperature(beta));
    }
    let (a, b) = reading.strengths(a, b);
    let terms = ThermalTerms::new(beta, a, b, q);
    Ok((terms.t1 + terms.t2 + terms.t3) / terms.den)
}

/// The printed expression split into its denominator and three numerator groups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalTerms {
    pub den: f64,
    /// The group with the overall factor ¼.
    pub t1: f64,
    /// The term linear in `q3`.
    pub t2: f64,
    /// Minus half the squared mode-intensity bracket.
    pub t3: f64,
}

impl ThermalTerms {
    pub fn new(beta: f64, a: f64, b: f64, q: &SphereDirection) -> Self {
        let [q1, q2, q3] = [q.q.x, q.q.y, q.q.z];
        let e = beta.exp();
        let c2 = (2.0 * a).cosh() * (2.0 * b).cosh();
        let (ch4a, ch4b) = ((4.0 * a).cosh(), (4.0 * b).cosh());
        let ss = (2.0 * a).sinh() * (2.0 * b).sinh();
        let ep = 1.0 + e;
        let den = (e - 1.0) * (2.0 * (1.0 - e) + 2.0 * ep * c2);
        let t1 = 0.25
            * ((1.0 - q3 * q3)
                * (2.0 * (1.0 - e).powi(2) + 4.0 * (1.0 - e * e) * c2 + ep * ep * (ch4a + ch4b))
                + ep * ep * (q1 * q1 - q2 * q2) * (ch4a - ch4b)
                - 0.5
                    * (1.0 + q3 * q3)
                    * (10.0 - 12.0 * e + 10.0 * e * e + 16.0 * (1.0 - e * e) * c2 + 6.0 * ep * ep * ch4a * ch4b));
        let t2 = -0.5 * ep * q3 * (4.0 - 4.0 * e + 6.0 * ep * c2) * ss;
        let bracket = 2.0 - 2.0 * e + 2.0 * (e * e - 1.0) * c2 + ep * q3 * ss;
        let t3 = -0.5 * bracket * bracket;
        ThermalTerms { den, t1, t2, t3 }
    }
}
