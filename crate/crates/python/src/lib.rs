//! Python bindings. All frequencies are angular, as in the Rust API.

use bosonic_sw::algebra::{CouplingPolynomial, OperatorPolynomial, Params};
use bosonic_sw::circuit::{taylor_couplings, CouplingSet, DeviceSpec};
use bosonic_sw::fock::{self, Averaging, QuantumState};
use bosonic_sw::sw::{self, EffectiveExpansion, PerturbationProblem};
use nalgebra::DVector;
use num_complex::Complex64;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

fn err(e: bosonic_sw::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Normal-ordered boson polynomial with exact rational coefficients.
#[pyclass(name = "Operator", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyOperator(OperatorPolynomial);

#[pymethods]
impl PyOperator {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        expr.parse().map(PyOperator).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator('{}')", self.0)
    }

    fn __add__(&self, other: &PyOperator) -> PyOperator {
        PyOperator(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyOperator) -> PyOperator {
        PyOperator(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyOperator) -> PyOperator {
        PyOperator(&self.0 * &other.0)
    }

    fn __neg__(&self) -> PyOperator {
        PyOperator(-self.0.clone())
    }

    fn commutator(&self, other: &PyOperator) -> PyOperator {
        PyOperator(self.0.commutator(&other.0))
    }

    fn adjoint(&self) -> PyOperator {
        PyOperator(self.0.adjoint())
    }

    fn is_hermitian(&self) -> bool {
        self.0.is_hermitian()
    }

    fn is_diagonal(&self) -> bool {
        self.0.is_diagonal()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `(monomial, coefficient)` pairs in canonical order.
    fn terms(&self) -> Vec<(String, String)> {
        self.0.terms().map(|(m, c)| (m.to_string(), c.to_string())).collect()
    }
}

fn single_mode_params(omega: f64, g3: f64, g4: f64) -> Params {
    Params::single_mode(omega, &[(3, g3), (4, g4)])
}

fn evaluate(coefficients: &[CouplingPolynomial], params: &Params) -> PyResult<Vec<f64>> {
    coefficients.iter().map(|c| c.evaluate(params).map_err(err)).collect()
}

/// Order-by-order effective Hamiltonian of `ω a†a + V`.
#[pyclass(name = "EffectiveHamiltonian", frozen)]
pub struct PyEffectiveHamiltonian(EffectiveExpansion);

#[pymethods]
impl PyEffectiveHamiltonian {
    #[new]
    #[pyo3(signature = (v = "g3*(a+ad)^3 + g4*(a+ad)^4", order = 2))]
    fn new(v: &str, order: usize) -> PyResult<Self> {
        let v: OperatorPolynomial = v.parse().map_err(err)?;
        let problem = PerturbationProblem::single_mode(v, order).map_err(err)?;
        sw::effective_hamiltonian(&problem).map(PyEffectiveHamiltonian).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn generator(&self, m: usize) -> PyResult<PyOperator> {
        self.check(m)?;
        Ok(PyOperator(self.0.generator(m).clone()))
    }

    fn diagonal_term(&self, m: usize) -> PyResult<PyOperator> {
        self.check(m)?;
        Ok(PyOperator(self.0.diagonal_term(m).clone()))
    }

    fn effective(&self) -> PyOperator {
        PyOperator(self.0.effective())
    }

    /// `c_k` keeping only the φ-degrees complete at the expansion order.
    fn coefficients(&self) -> PyResult<Vec<String>> {
        let c = self.0.consistent_coefficients(self.0.order()).map_err(err)?;
        Ok(c.iter().map(ToString::to_string).collect())
    }

    /// Every generated term of `c_k`.
    fn full_coefficients(&self) -> PyResult<Vec<String>> {
        let c = self.0.diagonal_coefficients().map_err(err)?;
        Ok(c.iter().map(ToString::to_string).collect())
    }

    #[pyo3(signature = (omega, g3, g4, complete_only = true))]
    fn coefficient_values(&self, omega: f64, g3: f64, g4: f64, complete_only: bool) -> PyResult<Vec<f64>> {
        let c = if complete_only {
            self.0.consistent_coefficients(self.0.order())
        } else {
            self.0.diagonal_coefficients()
        }
        .map_err(err)?;
        evaluate(&c, &single_mode_params(omega, g3, g4))
    }

    /// `E_n` for `n = 0..=n_max` from every generated term.
    fn energies(&self, n_max: usize, omega: f64, g3: f64, g4: f64) -> PyResult<Vec<f64>> {
        sw::perturbative_energies(&self.0, n_max, &single_mode_params(omega, g3, g4)).map_err(err)
    }
}

impl PyEffectiveHamiltonian {
    fn check(&self, m: usize) -> PyResult<()> {
        if m == 0 || m > self.0.order() {
            return Err(PyIndexError::new_err(format!("order {m} outside 1..={}", self.0.order())));
        }
        Ok(())
    }
}

/// `g₃` at which the self-Kerr vanishes through `order`, searched in
/// `(0.5, 1.5)·√(g₄ω/5)`.
#[pyfunction]
#[pyo3(signature = (omega, g4, order = 2))]
fn kerr_free_g3(omega: f64, g4: f64, order: usize) -> PyResult<f64> {
    let problem = PerturbationProblem::quadrature_nonlinearity(&[3, 4], order).map_err(err)?;
    let e = sw::effective_hamiltonian(&problem).map_err(err)?;
    let lead = (g4 * omega / 5.0).abs().sqrt();
    sw::kerr_free_point(&e, order)
        .and_then(|r| r.solve_g3(g4, omega, (0.5 * lead, 1.5 * lead)))
        .map_err(err)
}

/// Taylor data of a device potential at its minimum.
#[pyclass(name = "Couplings", frozen, get_all)]
pub struct PyCouplings {
    phi_min: f64,
    taylor: Vec<f64>,
    g: Vec<f64>,
    omega_shift: f64,
}

impl From<CouplingSet> for PyCouplings {
    fn from(c: CouplingSet) -> Self {
        PyCouplings {
            phi_min: c.phi_min,
            taylor: c.taylor,
            g: c.g,
            omega_shift: c.omega_shift,
        }
    }
}

#[pyfunction]
#[pyo3(signature = (alpha, n, phi_ext, e_j, phi_zpf, n_max = 6))]
fn snail_couplings(alpha: f64, n: u32, phi_ext: f64, e_j: f64, phi_zpf: f64, n_max: usize) -> PyResult<PyCouplings> {
    let spec = DeviceSpec::snail(alpha, n, phi_ext, e_j, phi_zpf).map_err(err)?;
    taylor_couplings(&spec, n_max).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alpha, n, phi_sigma, phi_delta, e_j, phi_zpf, n_max = 6))]
fn ats_couplings(
    alpha: f64,
    n: u32,
    phi_sigma: f64,
    phi_delta: f64,
    e_j: f64,
    phi_zpf: f64,
    n_max: usize,
) -> PyResult<PyCouplings> {
    let spec = DeviceSpec::ats(alpha, n, phi_sigma, phi_delta, e_j, phi_zpf).map_err(err)?;
    taylor_couplings(&spec, n_max).map(Into::into).map_err(err)
}

/// Lowest reliable eigenvalues of `ω a†a + g₃(a+a†)³ + g₄(a+a†)⁴`.
#[pyfunction]
#[pyo3(signature = (omega, g3, g4, dim = 160))]
fn exact_energies(omega: f64, g3: f64, g4: f64, dim: usize) -> Vec<f64> {
    fock::reported_energies(&fock::QuadratureMatrices::new(dim).hamiltonian(omega, g3, g4))
}

/// `(E_n − E_0) − n(E_1 − E_0)`.
#[pyfunction]
fn delta_e(energies: Vec<f64>) -> Vec<f64> {
    fock::delta_e(&energies)
}

#[pyclass(name = "KerrOscillator", frozen, get_all)]
pub struct PyKerrOscillator {
    omega: f64,
    g3: f64,
    g4: f64,
    alpha0: f64,
    dim: usize,
}

impl PyKerrOscillator {
    fn inner(&self) -> fock::KerrOscillator {
        fock::KerrOscillator {
            omega: self.omega,
            g3: self.g3,
            g4: self.g4,
            alpha0: self.alpha0,
            dim: self.dim,
        }
    }
}

#[pymethods]
impl PyKerrOscillator {
    #[new]
    #[pyo3(signature = (omega, g3, g4, alpha0 = 2.0, dim = 60))]
    fn new(omega: f64, g3: f64, g4: f64, alpha0: f64, dim: usize) -> Self {
        PyKerrOscillator { omega, g3, g4, alpha0, dim }
    }

    fn revival_time(&self) -> PyResult<f64> {
        self.inner().revival_time().map_err(err)
    }

    /// `(times, |⟨a⟩|, smoothed |⟨a⟩|)` from 0 to `t_end`.
    #[pyo3(signature = (t_end, samples_per_period = 32))]
    fn evolve(&self, t_end: f64, samples_per_period: usize) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let osc = self.inner();
        let avg = Averaging {
            samples_per_period,
            ..Averaging::default()
        };
        let times = osc.time_grid(t_end, samples_per_period);
        let (rec, smooth) = osc.evolve(&times, avg).map_err(err)?;
        Ok((times, rec.abs_expect_a, smooth))
    }

    fn averaged_abs_a(&self, t: f64) -> PyResult<f64> {
        fock::averaged_abs_a(&self.inner(), t, Averaging::default()).map_err(err)
    }

    /// `(g3, envelope)` maximizing the envelope at `t` over `[g3_min, g3_max]`.
    #[pyo3(signature = (g3_min, g3_max, t, samples = 13))]
    fn optimize_g3(&self, g3_min: f64, g3_max: f64, t: f64, samples: usize) -> PyResult<(f64, f64)> {
        let best = fock::optimize_g3(&self.inner(), (g3_min, g3_max), samples, t, Averaging::default()).map_err(err)?;
        Ok((best.g3, best.value))
    }
}

/// Error map of the driven cubic-phase preparation.
#[pyclass(name = "CubicPhaseSweep", frozen, get_all)]
pub struct PyCubicPhaseSweep {
    deltas: Vec<f64>,
    g3_dc: Vec<f64>,
    /// `error[i][j]` at `deltas[i]`, `g3_dc[j]`.
    error: Vec<Vec<f64>>,
    error_free_rotation: Vec<Vec<f64>>,
    optimum: (usize, usize),
    dim: usize,
}

#[pyfunction]
#[pyo3(signature = (omega_r, g4_dc, g3_ac, gamma, r, deltas, g3_dc, dim = 60, tol = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn cubic_phase_sweep(
    py: Python<'_>,
    omega_r: f64,
    g4_dc: f64,
    g3_ac: f64,
    gamma: f64,
    r: f64,
    deltas: Vec<f64>,
    g3_dc: Vec<f64>,
    dim: usize,
    tol: f64,
) -> PyResult<PyCubicPhaseSweep> {
    let problem = fock::CubicPhaseProblem {
        omega_r,
        g4_dc,
        g3_ac,
        gamma,
        r,
        dim,
        tol,
    };
    let s = py
        .detach(|| fock::cubic_phase_sweep(&problem, &deltas, &g3_dc))
        .map_err(err)?;
    let rows = |m: &nalgebra::DMatrix<f64>| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    Ok(PyCubicPhaseSweep {
        error: rows(&s.error),
        error_free_rotation: rows(&s.error_free_rotation),
        deltas: s.deltas,
        g3_dc: s.g3_dc,
        optimum: s.optimum,
        dim: s.dim,
    })
}

/// Fock amplitudes of `e^{iγq̂³}` applied to a squeezed vacuum.
#[pyfunction]
fn cubic_phase_state(gamma: f64, r: f64, dim: usize) -> PyResult<Vec<Complex64>> {
    let psi = fock::cubic_phase_state(gamma, r, dim).map_err(err)?;
    Ok(psi.amplitudes().iter().copied().collect())
}

#[pyfunction]
fn coherent_state(alpha: Complex64, dim: usize) -> PyResult<Vec<Complex64>> {
    let psi = fock::coherent_state(alpha, dim).map_err(err)?;
    Ok(psi.amplitudes().iter().copied().collect())
}

/// `W[i][j]` at `(xs[i], ps[j])` for the state with the given amplitudes.
#[pyfunction]
fn wigner(amplitudes: Vec<Complex64>, xs: Vec<f64>, ps: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let psi = QuantumState::from_amplitudes(DVector::from_vec(amplitudes));
    let w = fock::wigner(&psi, &xs, &ps).map_err(err)?;
    Ok((0..w.nrows()).map(|i| w.row(i).iter().copied().collect()).collect())
}

#[pymodule(name = "bosonic_sw")]
pub fn bosonic_sw_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyEffectiveHamiltonian>()?;
    m.add_class::<PyCouplings>()?;
    m.add_class::<PyKerrOscillator>()?;
    m.add_class::<PyCubicPhaseSweep>()?;
    m.add_function(wrap_pyfunction!(kerr_free_g3, m)?)?;
    m.add_function(wrap_pyfunction!(snail_couplings, m)?)?;
    m.add_function(wrap_pyfunction!(ats_couplings, m)?)?;
    m.add_function(wrap_pyfunction!(exact_energies, m)?)?;
    m.add_function(wrap_pyfunction!(delta_e, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_phase_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(cubic_phase_state, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_state, m)?)?;
    m.add_function(wrap_pyfunction!(wigner, m)?)?;
    Ok(())
}
