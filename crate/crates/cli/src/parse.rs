use num_complex::Complex64;

use mandelq::sweep::AxisValues;

/// `re`, `re,im` or `mag@phase`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let z = if let Some((mag, phase)) = s.split_once('@') {
        Complex64::from_polar(num(mag)?, num(phase)?)
    } else if let Some((re, im)) = s.split_once(',') {
        Complex64::new(num(re)?, num(im)?)
    } else {
        Complex64::new(num(s)?, 0.0)
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// `name=value`.
pub fn assignment(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let value = value.trim().parse::<f64>().map_err(|_| format!("not a number: {value:?}"))?;
    Ok((name.trim().to_string(), value))
}

/// `name=min:max:steps`, `name=min:max:steps:periodic` or `name=v1,v2,...`.
pub fn axis(s: &str) -> Result<(String, AxisValues), String> {
    let (name, rest) = s.split_once('=').ok_or_else(|| format!("expected name=min:max:steps, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let parts: Vec<&str> = rest.split(':').collect();
    let values = match parts.as_slice() {
        [min, max, steps] | [min, max, steps, "periodic"] => {
            let (min, max) = (num(min)?, num(max)?);
            let steps = steps.trim().parse::<usize>().map_err(|_| format!("not a step count: {steps:?}"))?;
            if parts.len() == 4 {
                AxisValues::Periodic { min, max, steps }
            } else {
                AxisValues::Range { min, max, steps }
            }
        }
        [list] => AxisValues::List { values: list.split(',').map(num).collect::<Result<_, _>>()? },
        _ => return Err(format!("cannot parse axis {s:?}")),
    };
    Ok((name.trim().to_string(), values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(complex("-1,2").unwrap(), Complex64::new(-1.0, 2.0));
        let z = complex("3@1.5707963267948966").unwrap();
        assert!((z - Complex64::new(0.0, 3.0)).norm() < 1e-15);
        assert!(complex("x").is_err());
    }

    #[test]
    fn axis_forms() {
        assert_eq!(axis("a=0:1:11").unwrap().1, AxisValues::Range { min: 0.0, max: 1.0, steps: 11 });
        assert_eq!(
            axis("eta=0:6.25:8:periodic").unwrap().1,
            AxisValues::Periodic { min: 0.0, max: 6.25, steps: 8 }
        );
        assert_eq!(axis("r=0.5,1").unwrap().1, AxisValues::List { values: vec![0.5, 1.0] });
        assert!(axis("a=0:1").is_err());
    }
}
