#![allow(dead_code)]

use bosonic_sw::algebra::{ratio, CouplingPolynomial, ModeMonomial, OperatorPolynomial, Params};
use bosonic_sw::circuit::{potential, potential_derivative, taylor_couplings, DeviceSpec};
use bosonic_sw::fock::{
    coherent_state, evolve_static, evolve_timedep, matrix_of_modes, quadrature_matrix, MatrixBuilder, QuantumState,
    Tolerance,
};
use bosonic_sw::sw::{effective_hamiltonian, PerturbationProblem};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{RngSeed, TestCaseError};

pub type Check = std::result::Result<(), TestCaseError>;

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

const DIM: usize = 9;

pub fn monomial() -> impl Strategy<Value = ModeMonomial> {
    (0u32..3, 0u32..3, 0u32..3, 0u32..3).prop_map(|(p0, q0, p1, q1)| ModeMonomial::new([(0, p0, q0), (1, p1, q1)]))
}

/// Two-mode polynomials with small rational coefficients.
pub fn polynomial() -> impl Strategy<Value = OperatorPolynomial> {
    prop::collection::vec((monomial(), -4i64..5, 1i64..4), 1..4).prop_map(|terms| {
        terms.into_iter().fold(OperatorPolynomial::zero(), |acc, (m, n, d)| {
            acc + OperatorPolynomial::term(m, CouplingPolynomial::constant(ratio(n, d)))
        })
    })
}

fn matrix(p: &OperatorPolynomial) -> DMatrix<f64> {
    matrix_of_modes(p, &Params::new(), &[DIM, DIM]).unwrap()
}

/// Largest creation power per mode.
fn reach(p: &OperatorPolynomial) -> [usize; 2] {
    let mut r = [0; 2];
    for (m, _) in p.terms() {
        for (mode, slot) in r.iter_mut().enumerate() {
            *slot = (*slot).max(m.powers(mode as u16).0 as usize);
        }
    }
    r
}

/// The normal-ordered product agrees with the product of truncated matrices
/// on every column whose intermediate states stay inside the truncation.
pub fn check_product(a: &OperatorPolynomial, b: &OperatorPolynomial) -> Check {
    let (ma, mb, mab) = (matrix(a), matrix(b), matrix(&(a * b)));
    let prod = &ma * &mb;
    let r = reach(b);
    for l in 0..DIM * DIM {
        let (l0, l1) = (l / DIM, l % DIM);
        if l0 + r[0] >= DIM || l1 + r[1] >= DIM {
            continue;
        }
        for k in 0..DIM * DIM {
            prop_assert!((prod[(k, l)] - mab[(k, l)]).abs() <= 1e-9 * (1.0 + prod[(k, l)].abs()));
        }
    }
    Ok(())
}

pub fn check_antisymmetry(a: &OperatorPolynomial, b: &OperatorPolynomial) -> Check {
    prop_assert_eq!(a.commutator(b), -b.commutator(a));
    Ok(())
}

pub fn check_jacobi(a: &OperatorPolynomial, b: &OperatorPolynomial, c: &OperatorPolynomial) -> Check {
    let sum = a.commutator(&b.commutator(c)) + b.commutator(&c.commutator(a)) + c.commutator(&a.commutator(b));
    prop_assert!(sum.is_zero());
    Ok(())
}

pub fn check_adjoint(a: &OperatorPolynomial, b: &OperatorPolynomial) -> Check {
    prop_assert_eq!((a * b).adjoint(), &b.adjoint() * &a.adjoint());
    Ok(())
}

/// `V → λV` scales `H^(m)` and `S^(m)` by `λ^m` for `m ≤ 3`.
pub fn check_lambda_scaling(n: i64, d: i64) -> Check {
    let lambda = ratio(n, d);
    let base = PerturbationProblem::quadrature_nonlinearity(&[3, 4], 3).unwrap();
    let scaled = PerturbationProblem::single_mode(base.v().scale(&lambda), 3).unwrap();
    let (e0, e1) = (effective_hamiltonian(&base).unwrap(), effective_hamiltonian(&scaled).unwrap());
    let mut factor = ratio(1, 1);
    for m in 1..=3 {
        factor *= &lambda;
        prop_assert_eq!(e1.diagonal_term(m).clone(), e0.diagonal_term(m).scale(&factor));
        prop_assert_eq!(e1.generator(m).clone(), e0.generator(m).scale(&factor));
    }
    Ok(())
}

fn random_hermitian(entries: &[f64], dim: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |i, j| entries[(i * dim + j) % entries.len()]);
    (&m + m.transpose()) * 0.5
}

pub fn check_static_norm(entries: &[f64], alpha: (f64, f64), t: f64) -> Check {
    let h = random_hermitian(entries, 20);
    let psi = coherent_state(Complex64::new(alpha.0, alpha.1), 20).unwrap();
    let rec = evolve_static(&h, &psi, &[t, t + 1.0], true).unwrap();
    prop_assert!(rec.max_norm_drift <= 1e-8);
    Ok(())
}

pub fn check_driven_norm(entries: &[f64], drive: f64, freq: f64) -> Check {
    let h0 = random_hermitian(entries, 12).map(|x| Complex64::new(x, 0.0));
    let x = quadrature_matrix(12).map(|x| Complex64::new(x, 0.0));
    let h = MatrixBuilder::new(12, move |t| &h0 + &x * Complex64::new(drive * (freq * t).cos(), 0.0));
    let psi = QuantumState::from_amplitudes(DVector::from_fn(12, |n, _| Complex64::new(1.0 / (1.0 + n as f64), 0.0)))
        .normalized();
    let (out, stats) = evolve_timedep(&h, &psi, 5.0, Tolerance::new(1e-10)).unwrap();
    prop_assert!(stats.norm_drift <= 1e-8);
    prop_assert!((out.norm() - 1.0).abs() <= 1e-8);
    Ok(())
}

pub fn device() -> impl Strategy<Value = DeviceSpec> {
    (0.05f64..0.6, 1u32..5, -3.0f64..3.0, 0.05f64..0.5)
        .prop_map(|(alpha, n, phi_ext, zpf)| DeviceSpec::snail(alpha, n, phi_ext, 1.0, zpf).unwrap())
}

/// Analytic `U^(k)` against a fourth-order central difference of `U^(k−1)`.
pub fn check_derivative(spec: &DeviceSpec, phi: f64, k: u32) -> Check {
    let h = 1e-3;
    let f = |x: f64| if k == 1 { potential(spec, x) } else { potential_derivative(spec, x, k - 1) };
    let fd = (f(phi - 2.0 * h) - 8.0 * f(phi - h) + 8.0 * f(phi + h) - f(phi + 2.0 * h)) / (12.0 * h);
    let exact = potential_derivative(spec, phi, k);
    prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(spec.e_j));
    Ok(())
}

pub fn check_snail_odd(alpha: f64, n: u32, zpf: f64) -> Check {
    let spec = DeviceSpec::snail(alpha, n, 0.0, 1.0, zpf).unwrap();
    let c = taylor_couplings(&spec, 7).unwrap();
    prop_assert!(c.phi_min.abs() < 1e-9);
    for k in [3, 5, 7] {
        prop_assert!(c.g(k).abs() < 1e-9 * c.g(4).abs().max(1e-12));
    }
    Ok(())
}

pub fn check_rotation_invariance(amps: &[(f64, f64)], theta: f64) -> Check {
    let psi = QuantumState::from_amplitudes(DVector::from_iterator(amps.len(), amps.iter().map(|&(r, i)| Complex64::new(r, i))));
    let rotated = psi.rotated(theta);
    prop_assert!((psi.expect_a().norm() - rotated.expect_a().norm()).abs() <= 1e-12 * (1.0 + psi.expect_a().norm()));
    prop_assert!((psi.norm() - rotated.norm()).abs() <= 1e-12);
    Ok(())
}
