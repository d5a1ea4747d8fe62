use nalgebra::{ComplexField, DMatrix};

/// Taylor terms kept after scaling. With `||A / 2^s||_1 <= 1/2` the first
/// omitted term is below `0.5^19 / 19! ~ 1.6e-23`.
const TAYLOR_ORDER: usize = 18;

/// Matrix exponential by scaling and squaring with a fixed-order Taylor core.
pub fn expm<T>(m: &DMatrix<T>) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm needs a square matrix");
    let norm1 = (0..n)
        .map(|j| m.column(j).iter().map(|z| z.clone().modulus()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.map(|z| z * T::from_real(0.5f64.powi(squarings as i32)));

    let mut result = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for k in 1..=TAYLOR_ORDER {
        term = &term * &scaled;
        term.apply(|z| *z = z.clone() * T::from_real(1.0 / k as f64));
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    #[test]
    fn rotation_generator_exponentiates_to_rotation() {
        let t = 2.7;
        let g = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&g);
        assert!((e[(0, 0)] - t.cos()).abs() < 1e-14);
        assert!((e[(1, 0)] - t.sin()).abs() < 1e-14);
    }

    #[test]
    fn diagonal_complex() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 1.0),
            Complex64::new(-1.0, 0.5),
        ]));
        let e = expm(&d);
        assert!((e[(0, 0)] - Complex64::new(3.0, 1.0).exp()).norm() < 1e-12);
        assert!((e[(1, 1)] - Complex64::new(-1.0, 0.5).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() == 0.0);
    }
}
