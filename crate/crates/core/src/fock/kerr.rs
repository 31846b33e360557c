use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::evolve::{evolve_static, EvolutionRecord};
use super::matrix::matrix_of;
use super::savgol::{odd_window, savgol_average, savgol_center};
use super::state::coherent_state;
use crate::algebra::{OperatorPolynomial, Params};
use crate::error::{Error, Result};
use crate::optim::grid_golden_max;

/// `H = ω a†a + g₃(a + a†)³ + g₄(a + a†)⁴` started from the coherent state
/// `|α₀⟩`, all in angular units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KerrOscillator {
    pub omega: f64,
    pub g3: f64,
    pub g4: f64,
    pub alpha0: f64,
    pub dim: usize,
}

/// Number operator and the cubic and quartic quadrature powers on one space.
#[derive(Clone, Debug)]
pub struct QuadratureMatrices {
    pub number: DMatrix<f64>,
    pub x3: DMatrix<f64>,
    pub x4: DMatrix<f64>,
}

impl QuadratureMatrices {
    pub fn new(dim: usize) -> Self {
        let p = Params::new();
        let m = |op: &OperatorPolynomial| matrix_of(op, &p, dim).expect("numeric operator");
        QuadratureMatrices {
            number: m(&OperatorPolynomial::number(0)),
            x3: m(&OperatorPolynomial::quadrature_power(0, 3)),
            x4: m(&OperatorPolynomial::quadrature_power(0, 4)),
        }
    }

    pub fn hamiltonian(&self, omega: f64, g3: f64, g4: f64) -> DMatrix<f64> {
        &self.number * omega + &self.x3 * g3 + &self.x4 * g4
    }
}

/// Smoothing of `|⟨a⟩|(t)` over the fast `ω` ripple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Averaging {
    /// Window length in periods `2π/ω`.
    pub periods: f64,
    pub samples_per_period: usize,
    pub polyorder: usize,
}

impl Default for Averaging {
    fn default() -> Self {
        Averaging {
            periods: 4.0,
            samples_per_period: 32,
            polyorder: 3,
        }
    }
}

impl Averaging {
    pub fn window(&self) -> usize {
        odd_window(self.periods, self.samples_per_period)
    }
}

impl KerrOscillator {
    pub fn hamiltonian(&self) -> DMatrix<f64> {
        QuadratureMatrices::new(self.dim).hamiltonian(self.omega, self.g3, self.g4)
    }

    /// `T = 2π/K = π/(6g₄)` for the leading-order Kerr `K = 12g₄`.
    pub fn revival_time(&self) -> Result<f64> {
        if self.g4 == 0.0 {
            return Err(Error::InvalidArgument("revival time undefined for g4 = 0".into()));
        }
        Ok(PI / (6.0 * self.g4.abs()))
    }

    /// `|⟨a⟩|` on the given grid, with its Savitzky-Golay envelope.
    pub fn evolve(&self, times: &[f64], averaging: Averaging) -> Result<(EvolutionRecord, Vec<f64>)> {
        let psi0 = coherent_state(Complex64::new(self.alpha0, 0.0), self.dim)?;
        let rec = evolve_static(&self.hamiltonian(), &psi0, times, false)?;
        let window = averaging.window();
        let smooth = if rec.abs_expect_a.len() >= window {
            savgol_average(&rec.abs_expect_a, window, averaging.polyorder)?
        } else {
            rec.abs_expect_a.clone()
        };
        Ok((rec, smooth))
    }

    /// Uniform grid from 0 to `t_end` sampling each period `2π/ω` with
    /// `samples_per_period` points.
    pub fn time_grid(&self, t_end: f64, samples_per_period: usize) -> Vec<f64> {
        let dt = 2.0 * PI / self.omega / samples_per_period as f64;
        let n = (t_end / dt).ceil() as usize;
        (0..=n).map(|i| i as f64 * dt).collect()
    }
}

/// Envelope of `|⟨a⟩|` at time `t`: a window of `averaging.periods` periods
/// centred on `t` is smoothed and evaluated at its centre.
pub fn averaged_abs_a(osc: &KerrOscillator, t: f64, averaging: Averaging) -> Result<f64> {
    let mats = QuadratureMatrices::new(osc.dim);
    averaged_abs_a_with(osc, &mats, t, averaging)
}

fn averaged_abs_a_with(osc: &KerrOscillator, mats: &QuadratureMatrices, t: f64, averaging: Averaging) -> Result<f64> {
    let window = averaging.window();
    let dt = 2.0 * PI / osc.omega / averaging.samples_per_period as f64;
    let half = (window / 2) as f64;
    let times: Vec<f64> = (0..window).map(|i| t + (i as f64 - half) * dt).collect();
    let psi0 = coherent_state(Complex64::new(osc.alpha0, 0.0), osc.dim)?;
    let h = mats.hamiltonian(osc.omega, osc.g3, osc.g4);
    let rec = evolve_static(&h, &psi0, &times, false)?;
    savgol_center(&rec.abs_expect_a, averaging.polyorder)
}

/// Result of [`optimize_g3`].
#[derive(Clone, Debug, PartialEq)]
pub struct G3Optimum {
    pub g3: f64,
    pub value: f64,
    pub grid: Vec<(f64, f64)>,
    /// Set when the best grid point lies on the scan boundary.
    pub diagnostic: Option<String>,
}

/// Maximizes the averaged `|⟨a⟩|` at time `t` over `g₃ ∈ range` by a grid
/// scan with golden-section refinement. The `g3` field of `template` is
/// ignored.
pub fn optimize_g3(template: &KerrOscillator, range: (f64, f64), samples: usize, t: f64, averaging: Averaging) -> Result<G3Optimum> {
    let mats = QuadratureMatrices::new(template.dim);
    coherent_state(Complex64::new(template.alpha0, 0.0), template.dim)?;
    let mut failure = None;
    let xtol = 1e-6 * (range.1 - range.0).abs();
    let scan = grid_golden_max(
        |g3| match averaged_abs_a_with(&KerrOscillator { g3, ..*template }, &mats, t, averaging) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        range.0,
        range.1,
        samples,
        xtol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let diagnostic = scan.at_edge.then(|| {
        format!(
            "maximum at the edge of the scan range [{}, {}]; widen the range",
            range.0, range.1
        )
    });
    Ok(G3Optimum {
        g3: scan.argmax,
        value: scan.value,
        grid: scan.grid,
        diagnostic,
    })
}
