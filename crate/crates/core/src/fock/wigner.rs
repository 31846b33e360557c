use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::quadrature_matrix;
use super::state::QuantumState;
use crate::error::{Error, Result};

/// Wigner function `W(x, p) = (1/π) Σ_n (−1)^n |⟨n|D(−β)ψ⟩|²` with
/// `β = (x + ip)/√2`, so the vacuum is `e^{−x²−p²}/π`. Row `i` is `xs[i]`,
/// column `j` is `ps[j]`.
///
/// Displacements are exponentials of `x̂ = (a + a†)/√2` and `p̂ = F x̂ F†`
/// (`F = diag(iⁿ)`) taken from one eigendecomposition on a padded space.
pub fn wigner(psi: &QuantumState, xs: &[f64], ps: &[f64]) -> Result<DMatrix<f64>> {
    if xs.iter().chain(ps).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("phase-space grid must be finite".into()));
    }
    let max_sq = xs.iter().map(|x| x * x).fold(0.0, f64::max) + ps.iter().map(|p| p * p).fold(0.0, f64::max);
    let d = psi.dim();
    let dim = (2 * d).max(d + (2.0 * max_sq).ceil() as usize + 80);
    let x_op = quadrature_matrix(dim) * std::f64::consts::FRAC_1_SQRT_2;
    let eig = SymmetricEigen::new(x_op);
    let u = eig.eigenvectors.map(|v| Complex64::new(v, 0.0));
    let ut = u.transpose();
    let xi = eig.eigenvalues;
    let rot = |sign: f64| DVector::from_fn(dim, |n, _| Complex64::new(0.0, sign).powu(n as u32));
    let (f, f_inv) = (rot(1.0), rot(-1.0));
    let parity = DVector::from_fn(dim, |n, _| if n % 2 == 0 { 1.0 } else { -1.0 });
    let padded = psi.resized(dim).into_amplitudes();
    // coordinates of F†ψ in the x̂ eigenbasis
    let base = &ut * padded.component_mul(&f_inv);
    let mut out = DMatrix::zeros(xs.len(), ps.len());
    let mut work = DVector::zeros(dim);
    for (i, &x) in xs.iter().enumerate() {
        // D(−α_r) with α_r = x/√2 is F e^{i x x̂} F†
        for k in 0..dim {
            work[k] = base[k] * Complex64::from_polar(1.0, x * xi[k]);
        }
        let shifted = (&u * &work).component_mul(&f);
        let coords = &ut * shifted;
        for (j, &p) in ps.iter().enumerate() {
            // D(−iα_i) with α_i = p/√2 is e^{−i p x̂}
            for k in 0..dim {
                work[k] = coords[k] * Complex64::from_polar(1.0, -p * xi[k]);
            }
            let v = &u * &work;
            let w: f64 = v.iter().zip(parity.iter()).map(|(c, s)| s * c.norm_sqr()).sum();
            out[(i, j)] = w / std::f64::consts::PI;
        }
    }
    Ok(out)
}

/// Trapezoidal `∬ W dx dp` over the grid.
pub fn wigner_integral(w: &DMatrix<f64>, xs: &[f64], ps: &[f64]) -> f64 {
    let weights = |g: &[f64]| -> Vec<f64> {
        (0..g.len())
            .map(|i| {
                let left = if i > 0 { g[i] - g[i - 1] } else { 0.0 };
                let right = if i + 1 < g.len() { g[i + 1] - g[i] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect()
    };
    let (wx, wp) = (weights(xs), weights(ps));
    let mut total = 0.0;
    for (i, a) in wx.iter().enumerate() {
        for (j, b) in wp.iter().enumerate() {
            total += a * b * w[(i, j)];
        }
    }
    total
}
