use crate::error::{Error, Result};
use crate::moments::SphereDirection;

/// Mandel function of the number state `|n1, n2⟩` in direction `q`.
pub fn q_fock(n1: usize, n2: usize, q: &SphereDirection) -> Result<f64> {
    if n1 + n2 == 0 {
        return Err(Error::ZeroIntensity("Fock state |0,0>".to_string()));
    }
    let (x1, x2) = (n1 as f64, n2 as f64);
    let n = x1 + x2;
    let [q1, q2, q3] = [q.q.x, q.q.y, q.q.z];
    let transverse = (x1 * (1.0 - x1) + x2 * (1.0 - x2)) * (q1 * q1 + q2 * q2);
    Ok((-2.0 * n + n * n + transverse - 2.0 * (x1 - x2) * q3 - n * n * q3 * q3) / (4.0 * n))
}
