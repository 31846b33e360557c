use nalgebra::DMatrix;

use crate::algebra::{ModeMonomial, OperatorPolynomial, Params};
use crate::error::{Error, Result};

/// `√(n!/(n−q)!)`, the amplitude of `a^q |n⟩`.
fn lowering_amplitude(n: usize, q: usize) -> f64 {
    ((n - q + 1)..=n).map(|k| (k as f64).sqrt()).product()
}

/// Index of `(a†)^p a^q |n⟩` together with its amplitude, if nonzero and
/// inside the truncation.
fn apply_single(p: u32, q: u32, n: usize, dim: usize) -> Option<(usize, f64)> {
    let (p, q) = (p as usize, q as usize);
    if q > n {
        return None;
    }
    let mid = n - q;
    let m = mid + p;
    if m >= dim {
        return None;
    }
    Some((m, lowering_amplitude(n, q) * lowering_amplitude(m, p)))
}

/// Matrix of a single-mode polynomial on the Fock states `|0⟩..|dim−1⟩`.
/// Entries are exact matrix elements of the untruncated operator.
pub fn matrix_of(p: &OperatorPolynomial, params: &Params, dim: usize) -> Result<DMatrix<f64>> {
    matrix_of_modes(p, params, &[dim])
}

/// Matrix on the product basis `⊗_j {|0⟩..|dims[j]−1⟩}`, mode 0 most
/// significant.
pub fn matrix_of_modes(p: &OperatorPolynomial, params: &Params, dims: &[usize]) -> Result<DMatrix<f64>> {
    if let Some(mode) = p.max_mode() {
        if mode as usize >= dims.len() {
            return Err(Error::InvalidArgument(format!(
                "operator acts on mode {mode} but only {} mode dimension(s) given",
                dims.len()
            )));
        }
    }
    let total: usize = dims.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * dims[j + 1];
    }
    let terms: Vec<(&ModeMonomial, f64)> = p
        .terms()
        .map(|(m, c)| c.evaluate(params).map(|v| (m, v)))
        .collect::<Result<_>>()?;
    let mut out = DMatrix::<f64>::zeros(total, total);
    let mut occ = vec![0usize; dims.len()];
    for col in 0..total {
        let mut rem = col;
        for j in 0..dims.len() {
            occ[j] = rem / strides[j];
            rem %= strides[j];
        }
        'term: for &(m, c) in &terms {
            let mut row = col;
            let mut amp = c;
            for f in m.factors() {
                let j = f.mode as usize;
                let Some((n2, a)) = apply_single(f.creation, f.annihilation, occ[j], dims[j]) else {
                    continue 'term;
                };
                row = row - occ[j] * strides[j] + n2 * strides[j];
                amp *= a;
            }
            out[(row, col)] += amp;
        }
    }
    Ok(out)
}

/// [`matrix_of`] restricted to Hermitian input.
pub fn hamiltonian_matrix(p: &OperatorPolynomial, params: &Params, dim: usize) -> Result<DMatrix<f64>> {
    if !p.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    matrix_of(p, params, dim)
}

/// Truncated annihilation operator.
pub fn annihilation_matrix(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// `a + a†` on the truncated space.
pub fn quadrature_matrix(dim: usize) -> DMatrix<f64> {
    let a = annihilation_matrix(dim);
    &a + a.transpose()
}
