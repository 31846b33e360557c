use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::spectrum::eigenspectrum;
use super::state::QuantumState;
use crate::error::{Error, Result};

type CVector = DVector<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `|⟨a⟩|` along a time grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    pub abs_expect_a: Vec<f64>,
    pub snapshots: Option<Vec<QuantumState>>,
    /// Largest `|‖ψ‖ − 1|` seen along the grid.
    pub max_norm_drift: f64,
}

/// Exact propagation `ψ(t) = Σ_k e^{−iE_k t} ⟨k|ψ₀⟩ |k⟩` under a static
/// real symmetric `H`.
pub fn evolve_static(h: &DMatrix<f64>, psi0: &QuantumState, times: &[f64], keep_states: bool) -> Result<EvolutionRecord> {
    if h.nrows() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            left: h.nrows(),
            right: psi0.dim(),
        });
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    let spec = eigenspectrum(h);
    let v = spec.vectors.map(|x| Complex64::new(x, 0.0));
    let coords = v.adjoint() * psi0.amplitudes();
    let mut record = EvolutionRecord {
        times: times.to_vec(),
        abs_expect_a: Vec::with_capacity(times.len()),
        snapshots: keep_states.then(Vec::new),
        max_norm_drift: 0.0,
    };
    let mut phased = coords.clone();
    for &t in times {
        for (k, c) in phased.iter_mut().enumerate() {
            *c = coords[k] * Complex64::from_polar(1.0, -spec.values[k] * t);
        }
        let state = QuantumState::from_amplitudes(&v * &phased);
        record.max_norm_drift = record.max_norm_drift.max((state.norm() - 1.0).abs());
        record.abs_expect_a.push(state.expect_a().norm());
        if let Some(s) = record.snapshots.as_mut() {
            s.push(state);
        }
    }
    Ok(record)
}

/// A Hamiltonian `H(t)` acting on state vectors.
pub trait TimeDependentHamiltonian {
    fn dim(&self) -> usize;
    /// `out = H(t) ψ`.
    fn apply(&self, t: f64, psi: &CVector, out: &mut CVector);
}

/// Adapter for a builder `t ↦ H(t)` returning a dense complex matrix.
pub struct MatrixBuilder<F> {
    dim: usize,
    build: F,
}

impl<F: Fn(f64) -> DMatrix<Complex64>> MatrixBuilder<F> {
    pub fn new(dim: usize, build: F) -> Self {
        MatrixBuilder { dim, build }
    }
}

impl<F: Fn(f64) -> DMatrix<Complex64>> TimeDependentHamiltonian for MatrixBuilder<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, psi: &CVector, out: &mut CVector) {
        out.gemv(Complex64::new(1.0, 0.0), &(self.build)(t), psi, Complex64::new(0.0, 0.0));
    }
}

/// Step-size control for [`evolve_timedep`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` picks one from the first derivative.
    pub initial_step: Option<f64>,
    /// Upper bound on the step.
    pub max_step: Option<f64>,
}

impl Tolerance {
    pub fn new(tol: f64) -> Self {
        Tolerance {
            rtol: tol,
            atol: tol,
            initial_step: None,
            max_step: None,
        }
    }
}

/// Integration statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub norm_drift: f64,
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `i ∂ψ/∂t = H(t) ψ` from `t = 0` to `t_end` with adaptive
/// Dormand–Prince 5(4) steps.
pub fn evolve_timedep(h: &impl TimeDependentHamiltonian, psi0: &QuantumState, t_end: f64, tol: Tolerance) -> Result<(QuantumState, StepStats)> {
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: psi0.dim(),
        });
    }
    if !(tol.rtol > 0.0 && tol.atol > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!("end time {t_end} must be finite and nonnegative")));
    }
    let dim = h.dim();
    let rhs = |t: f64, y: &CVector, out: &mut CVector| {
        h.apply(t, y, out);
        *out *= -I;
    };
    let mut y = psi0.amplitudes().clone();
    let mut stats = StepStats::default();
    if t_end == 0.0 {
        return Ok((psi0.clone(), stats));
    }
    let mut k: Vec<CVector> = (0..7).map(|_| CVector::zeros(dim)).collect();
    rhs(0.0, &y, &mut k[0]);
    let max_step = tol.max_step.unwrap_or(t_end).min(t_end);
    let mut step = tol.initial_step.unwrap_or_else(|| {
        let d = k[0].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if d > 0.0 {
            0.01 * (tol.rtol.powf(0.2)) / d
        } else {
            t_end
        }
    });
    step = step.min(max_step);
    let mut t = 0.0;
    let mut stage = CVector::zeros(dim);
    let mut y_new = CVector::zeros(dim);
    let initial_norm = y.norm();
    while t_end - t > 1e-15 * t_end {
        if t + step > t_end {
            step = t_end - t;
        }
        if step <= 1e-14 * t.abs().max(t_end) {
            return Err(Error::StepSizeUnderflow { t, h: step });
        }
        for s in 1..7 {
            stage.copy_from(&y);
            for (j, &a) in A[s - 1].iter().enumerate() {
                if a != 0.0 {
                    stage.axpy(Complex64::new(step * a, 0.0), &k[j], Complex64::new(1.0, 0.0));
                }
            }
            rhs(t + C[s - 1] * step, &stage, &mut k[s]);
            if s == 6 {
                y_new.copy_from(&stage);
            }
        }
        // k[6] = f(t + h, y_new): the FSAL stage.
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, &ej) in E.iter().enumerate() {
                if ej != 0.0 {
                    e += k[j][i] * ej;
                }
            }
            let scale = tol.atol + tol.rtol * y[i].norm().max(y_new[i].norm());
            err = err.max((e * step).norm() / scale);
        }
        if err <= 1.0 {
            t += step;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            stats.accepted += 1;
            stats.norm_drift = stats.norm_drift.max((y.norm() - initial_norm).abs());
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        step = (step * if err <= 1.0 { factor } else { factor.min(1.0) }).min(max_step);
    }
    Ok((QuantumState::from_amplitudes(y), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_operator, Params, Symbol};
    use crate::fock::{coherent_state, matrix_of};

    #[test]
    fn zero_hamiltonian_is_identity() {
        let psi = coherent_state(Complex64::new(1.0, 0.5), 30).unwrap();
        let h = MatrixBuilder::new(30, |_| DMatrix::zeros(30, 30));
        let (out, _) = evolve_timedep(&h, &psi, 3.0, Tolerance::new(1e-10)).unwrap();
        assert!((out.amplitudes() - psi.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn static_builder_matches_spectral_propagation() {
        let params = Params::single_mode(1.0, &[(4, 0.01)]);
        let hm = matrix_of(&parse_operator("w*ad a + g4*(a+ad)^4").unwrap(), &params, 40).unwrap();
        let psi = coherent_state(Complex64::new(1.5, 0.0), 40).unwrap();
        let hc = hm.map(|x| Complex64::new(x, 0.0));
        let builder = MatrixBuilder::new(40, move |_| hc.clone());
        let (out, stats) = evolve_timedep(&builder, &psi, 5.0, Tolerance::new(1e-11)).unwrap();
        let exact = evolve_static(&hm, &psi, &[5.0], true).unwrap().snapshots.unwrap().remove(0);
        assert!((out.amplitudes() - exact.amplitudes()).norm() < 1e-8);
        assert!(stats.norm_drift < 1e-8);
    }

    #[test]
    fn harmonic_keeps_abs_expectation() {
        let params = Params::single_mode(2.0, &[]);
        let h = matrix_of(&parse_operator("w*ad a").unwrap(), &params, 40).unwrap();
        let psi = coherent_state(Complex64::new(2.0, 0.0), 40).unwrap();
        let times: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
        let rec = evolve_static(&h, &psi, &times, false).unwrap();
        assert!(rec.abs_expect_a.iter().all(|x| (x - 2.0).abs() < 1e-8));
        assert!(rec.max_norm_drift < 1e-12);
    }

    #[test]
    fn kerr_revival() {
        let k = 0.05;
        let params = Params::single_mode(1.0, &[]).with_symbol(Symbol::named("K"), k);
        let h = matrix_of(&parse_operator("w*ad a + K/2*ad^2 a^2").unwrap(), &params, 50).unwrap();
        let psi = coherent_state(Complex64::new(2.0, 0.0), 50).unwrap();
        let t = 2.0 * std::f64::consts::PI / k;
        let rec = evolve_static(&h, &psi, &[0.5 * t, t], false).unwrap();
        assert!(rec.abs_expect_a[0] < 0.1);
        assert!((rec.abs_expect_a[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_grids() {
        let h = DMatrix::<f64>::identity(3, 3);
        let psi = QuantumState::fock(0, 3).unwrap();
        assert!(evolve_static(&h, &psi, &[1.0, 0.5], false).is_err());
        assert!(evolve_static(&h, &QuantumState::fock(0, 4).unwrap(), &[1.0], false).is_err());
    }
}
