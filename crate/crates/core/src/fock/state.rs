use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::{annihilation_matrix, quadrature_matrix};
use crate::error::{Error, Result};

/// Largest admissible leakage for a prepared state.
pub const LEAKAGE_THRESHOLD: f64 = 1e-6;

/// Extra levels used when a state is built on a larger space and truncated.
const PADDING: usize = 60;

/// Complex amplitudes over `|0⟩..|D−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    amplitudes: DVector<Complex64>,
}

impl QuantumState {
    pub fn from_amplitudes(amplitudes: DVector<Complex64>) -> Self {
        QuantumState { amplitudes }
    }

    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidArgument(format!("Fock state {n} outside dimension {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[n] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.unscale_mut(n);
        }
        self
    }

    /// Probability in the top 10% of the basis (at least one level).
    pub fn leakage(&self) -> f64 {
        let d = self.dim();
        let top = d.div_ceil(10).max(1);
        self.amplitudes.rows(d - top, top).norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `⟨a⟩`.
    pub fn expect_a(&self) -> Complex64 {
        let v = &self.amplitudes;
        (1..v.len())
            .map(|n| v[n - 1].conj() * v[n] * (n as f64).sqrt())
            .sum()
    }

    /// `⟨a†a⟩`.
    pub fn expect_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// `e^{iθ a†a} |ψ⟩`.
    pub fn rotated(&self, theta: f64) -> Self {
        QuantumState {
            amplitudes: DVector::from_iterator(
                self.dim(),
                self.amplitudes
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c * Complex64::from_polar(1.0, theta * n as f64)),
            ),
        }
    }

    /// Keeps the first `dim` amplitudes (zero-padding if larger).
    pub fn resized(&self, dim: usize) -> Self {
        QuantumState {
            amplitudes: self.amplitudes.clone().resize_vertically(dim, Complex64::new(0.0, 0.0)),
        }
    }
}

/// Truncates a state computed on a padded space and rejects it when more than
/// `threshold` of probability is lost or sits in the top 10% of the target
/// basis. The suggested dimension is the smallest one that would pass,
/// judged from the padded vector.
fn truncate_checked(full: DVector<Complex64>, dim: usize, threshold: f64, fallback_dim: usize) -> Result<QuantumState> {
    let tail_from = |d: usize| -> f64 {
        let top = d.div_ceil(10).max(1);
        let start = d.saturating_sub(top).min(full.len());
        full.rows(start, full.len() - start).norm_squared()
    };
    let leakage = tail_from(dim);
    if leakage > threshold {
        let suggested_dim = ((dim + 1)..=full.len())
            .find(|&d| tail_from(d) + full.rows(d, full.len() - d).norm_squared() <= 0.5 * threshold)
            .unwrap_or(fallback_dim.max(2 * full.len()));
        return Err(Error::Leakage {
            leakage,
            threshold,
            suggested_dim,
        });
    }
    Ok(QuantumState::from_amplitudes(full).resized(dim).normalized())
}

/// Coherent state `|α⟩` from its Poisson amplitudes.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<QuantumState> {
    let full_dim = dim.max(1) + PADDING + (alpha.norm_sqr() * 2.0) as usize;
    let mut v = DVector::zeros(full_dim);
    let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 0..full_dim {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        v[n] = c;
    }
    let a = alpha.norm();
    truncate_checked(v, dim, LEAKAGE_THRESHOLD, (a * a + 10.0 * a + 20.0).ceil() as usize)
}

fn padded(dim: usize) -> usize {
    (dim + PADDING).max(2 * dim)
}

/// `e^{(r/2)(a†² − a²)}|0⟩` by matrix exponential on a padded space.
pub fn squeezed_vacuum(r: f64, dim: usize) -> Result<QuantumState> {
    let p = padded(dim);
    truncate_checked(squeezed_vector(r, p), dim, LEAKAGE_THRESHOLD, 2 * dim)
}

fn squeezed_vector(r: f64, p: usize) -> DVector<Complex64> {
    let a = annihilation_matrix(p);
    let ad = a.transpose();
    let gen: DMatrix<f64> = (&ad * &ad - &a * &a) * (0.5 * r);
    let u = gen.exp();
    u.column(0).map(|x| Complex64::new(x, 0.0))
}

/// `e^{iγq³} e^{(r/2)(a†² − a²)}|0⟩` with `q = (a + a†)/√2`.
pub fn cubic_phase_state(gamma: f64, r: f64, dim: usize) -> Result<QuantumState> {
    cubic_phase_state_with_threshold(gamma, r, dim, LEAKAGE_THRESHOLD)
}

/// [`cubic_phase_state`] with an explicit leakage threshold.
pub fn cubic_phase_state_with_threshold(gamma: f64, r: f64, dim: usize, threshold: f64) -> Result<QuantumState> {
    let p = padded(dim).max(2 * dim + 100);
    let sq = squeezed_vector(r, p);
    let q = quadrature_matrix(p) * std::f64::consts::FRAC_1_SQRT_2;
    let eig = SymmetricEigen::new(q);
    let u = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let mut coords = u.adjoint() * sq;
    for (c, &x) in coords.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= Complex64::from_polar(1.0, gamma * x * x * x);
    }
    truncate_checked(&u * coords, dim, threshold, 2 * dim)
}

/// `|⟨φ|ψ⟩|²`.
pub fn fidelity(psi: &QuantumState, phi: &QuantumState) -> Result<f64> {
    Ok(phi.inner(psi)?.norm_sqr().min(1.0))
}
