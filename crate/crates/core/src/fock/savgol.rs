use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Least-squares projector of a window onto polynomials of degree
/// `polyorder`: row `j` maps the window samples to the `j`-th coefficient of
/// the fit in the scaled offset `s = (i − half)/half`.
fn projector(window: usize, polyorder: usize) -> Result<DMatrix<f64>> {
    let half = (window / 2).max(1) as f64;
    let vander = DMatrix::from_fn(window, polyorder + 1, |i, j| ((i as f64 - (window / 2) as f64) / half).powi(j as i32));
    vander
        .pseudo_inverse(1e-13)
        .map_err(|e| Error::Internal(format!("Savitzky-Golay fit failed: {e}")))
}

fn check(window: usize, polyorder: usize) -> Result<()> {
    if window.is_multiple_of(2) || window == 0 {
        return Err(Error::InvalidArgument(format!("window {window} must be odd")));
    }
    if polyorder >= window {
        return Err(Error::InvalidArgument(format!("polyorder {polyorder} must be below window {window}")));
    }
    Ok(())
}

fn evaluate(coeffs: &DVector<f64>, s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
}

/// Savitzky-Golay smoothing. Interior points use the centred window; the
/// first and last `window/2` points take the value of the polynomial fitted
/// to the one-sided window at the edge.
pub fn savgol_average(signal: &[f64], window: usize, polyorder: usize) -> Result<Vec<f64>> {
    check(window, polyorder)?;
    let n = signal.len();
    if n < window {
        return Err(Error::InvalidArgument(format!("signal of length {n} shorter than window {window}")));
    }
    let proj = projector(window, polyorder)?;
    let half = window / 2;
    let centre = proj.row(0).transpose();
    let mut out = vec![0.0; n];
    for i in half..n - half {
        out[i] = centre.dot(&DVector::from_column_slice(&signal[i - half..=i + half]));
    }
    let scale = half.max(1) as f64;
    let head = &proj * DVector::from_column_slice(&signal[..window]);
    let tail = &proj * DVector::from_column_slice(&signal[n - window..]);
    for i in 0..half {
        out[i] = evaluate(&head, (i as f64 - half as f64) / scale);
        let j = n - half + i;
        out[j] = evaluate(&tail, (i + 1) as f64 / scale);
    }
    Ok(out)
}

/// Smoothed value at the centre sample of an odd-length window.
pub fn savgol_center(signal: &[f64], polyorder: usize) -> Result<f64> {
    check(signal.len(), polyorder)?;
    let proj = projector(signal.len(), polyorder)?;
    Ok(proj.row(0).transpose().dot(&DVector::from_column_slice(signal)))
}

/// Odd sample count closest to `periods × samples_per_period`.
pub fn odd_window(periods: f64, samples_per_period: usize) -> usize {
    let n = (periods * samples_per_period as f64).round() as usize;
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n.max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_unchanged() {
        let s = vec![3.25; 40];
        for x in savgol_average(&s, 9, 3).unwrap() {
            assert!((x - 3.25).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_is_reproduced() {
        let s: Vec<f64> = (0..50).map(|i| 0.3 * (i as f64).powi(2) - 2.0 * i as f64 + 1.0).collect();
        let out = savgol_average(&s, 11, 2).unwrap();
        for (a, b) in out.iter().zip(&s) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn classic_five_point_weights() {
        // (−3, 12, 17, 12, −3)/35 for a quadratic fit
        let mut impulse = vec![0.0; 5];
        impulse[2] = 1.0;
        assert!((savgol_center(&impulse, 2).unwrap() - 17.0 / 35.0).abs() < 1e-14);
        impulse[2] = 0.0;
        impulse[0] = 1.0;
        assert!((savgol_center(&impulse, 2).unwrap() + 3.0 / 35.0).abs() < 1e-14);
    }

    #[test]
    fn ripple_is_averaged_out() {
        let s: Vec<f64> = (0..400)
            .map(|i| {
                let t = i as f64 / 32.0;
                1.0 + 0.01 * t + 0.2 * (2.0 * std::f64::consts::PI * t).cos()
            })
            .collect();
        let out = savgol_average(&s, odd_window(4.0, 32), 3).unwrap();
        for (i, y) in out.iter().enumerate().take(300).skip(100) {
            let t = i as f64 / 32.0;
            // ripple of amplitude 0.2 suppressed at least tenfold
            assert!((y - (1.0 + 0.01 * t)).abs() < 2e-2);
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(savgol_average(&[1.0; 10], 4, 2).is_err());
        assert!(savgol_average(&[1.0; 10], 5, 5).is_err());
        assert!(savgol_average(&[1.0; 3], 5, 2).is_err());
    }
}
