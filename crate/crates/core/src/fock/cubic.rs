use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::evolve::{evolve_timedep, StepStats, TimeDependentHamiltonian, Tolerance};
use super::kerr::QuadratureMatrices;
use super::state::{cubic_phase_state, squeezed_vacuum, QuantumState};
use crate::error::{Error, Result};
use crate::optim::golden_section_max;

/// Real matrix stored by its nonzero diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    dim: usize,
    /// `(offset d, values)` with `values[i] = M[i + d, i]` for `d ≥ 0` and
    /// `M[i, i − d]` for `d < 0`.
    bands: Vec<(isize, Vec<f64>)>,
}

impl BandedMatrix {
    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let dim = m.nrows();
        let mut bands = Vec::new();
        for d in -(dim as isize - 1)..=(dim as isize - 1) {
            let len = dim - d.unsigned_abs();
            let values: Vec<f64> = (0..len)
                .map(|i| if d >= 0 { m[(i + d as usize, i)] } else { m[(i, i + d.unsigned_abs())] })
                .collect();
            if values.iter().any(|&v| v != 0.0) {
                bands.push((d, values));
            }
        }
        BandedMatrix { dim, bands }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `out += scale · M v`.
    fn mul_add(&self, scale: f64, v: &DVector<Complex64>, out: &mut DVector<Complex64>) {
        for (d, values) in &self.bands {
            let shift = d.unsigned_abs();
            if *d >= 0 {
                for (i, &m) in values.iter().enumerate() {
                    out[i + shift] += v[i] * (scale * m);
                }
            } else {
                for (i, &m) in values.iter().enumerate() {
                    out[i] += v[i + shift] * (scale * m);
                }
            }
        }
    }
}

/// `H(t) = Σ_j f_j(t) e^{iΩNt} M_j e^{−iΩNt}`: a lab-frame Hamiltonian
/// `ΩN + Σ_j f_j(t) M_j` seen in the frame rotating at `Ω`.
pub struct RotatingFrameHamiltonian<F> {
    pub frame_frequency: f64,
    pub terms: Vec<(BandedMatrix, F)>,
}

impl<F: Fn(f64) -> f64> TimeDependentHamiltonian for RotatingFrameHamiltonian<F> {
    fn dim(&self) -> usize {
        self.terms.first().map_or(0, |(m, _)| m.dim())
    }

    fn apply(&self, t: f64, psi: &DVector<Complex64>, out: &mut DVector<Complex64>) {
        let phases: Vec<Complex64> = (0..psi.len())
            .map(|n| Complex64::from_polar(1.0, -self.frame_frequency * n as f64 * t))
            .collect();
        let u = DVector::from_iterator(psi.len(), psi.iter().zip(&phases).map(|(c, p)| c * p));
        out.fill(Complex64::new(0.0, 0.0));
        for (m, f) in &self.terms {
            let s = f(t);
            if s != 0.0 {
                m.mul_add(s, &u, out);
            }
        }
        for (o, p) in out.iter_mut().zip(&phases) {
            *o *= p.conj();
        }
    }
}

/// Driven cubic-phase preparation: `H(t) = ω̃ a†a + g₃(t)X³ + g₄X⁴` with
/// `g₃(t) = g₃^dc + g₃^ac[cos ω_r t + cos 3ω_r t]`, `ω̃ = ω_r + δ`, run for
/// `τ = 2γ/(√8 g₃^ac)` from a squeezed vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicPhaseProblem {
    pub omega_r: f64,
    pub g4_dc: f64,
    pub g3_ac: f64,
    pub gamma: f64,
    pub r: f64,
    pub dim: usize,
    pub tol: f64,
}

impl CubicPhaseProblem {
    pub fn tau(&self) -> Result<f64> {
        if self.g3_ac == 0.0 || self.gamma == 0.0 {
            return Err(Error::InvalidArgument(
                "cubic-phase preparation needs nonzero g3_ac and gamma".into(),
            ));
        }
        let tau = 2.0 * self.gamma / (8f64.sqrt() * self.g3_ac);
        if tau <= 0.0 {
            return Err(Error::InvalidArgument("gamma and g3_ac must have the same sign".into()));
        }
        Ok(tau)
    }

    /// In the frame rotating at `ω_r` the resonant part of the drive is
    /// `(g₃^ac/2)X³ = √2 g₃^ac q³`, so the ideal evolution is `e^{−iγq³}`.
    pub fn target(&self) -> Result<QuantumState> {
        cubic_phase_state(-self.gamma, self.r, self.dim)
    }

    /// Copy whose dimension passes the leakage guard of the target state.
    pub fn with_guarded_dim(&self) -> Result<Self> {
        let mut p = *self;
        for _ in 0..8 {
            match p.target() {
                Ok(_) => return Ok(p),
                Err(Error::Leakage { suggested_dim, .. }) if suggested_dim > p.dim => p.dim = suggested_dim,
                Err(e) => return Err(e),
            }
        }
        p.target().map(|_| p)
    }
}

/// Outcome of one preparation run.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicPhaseOutcome {
    /// `1 − |⟨γ,r|e^{iω̃a†aτ}ψ(τ)⟩|²`.
    pub error: f64,
    /// Error after maximizing the fidelity over a free rotation `e^{iθa†a}`.
    pub error_free_rotation: f64,
    pub theta: f64,
    /// The state in the frame rotating at `ω̃`.
    pub state: QuantumState,
    pub stats: StepStats,
}

fn banded_terms(mats: &QuadratureMatrices) -> (BandedMatrix, BandedMatrix) {
    (BandedMatrix::from_dense(&mats.x3), BandedMatrix::from_dense(&mats.x4))
}

/// Evolves the squeezed vacuum for `τ` at one `(δ, g₃^dc)` point.
pub fn prepare_cubic_phase(problem: &CubicPhaseProblem, delta: f64, g3_dc: f64) -> Result<CubicPhaseOutcome> {
    let target = problem.target()?;
    let mats = QuadratureMatrices::new(problem.dim);
    run_point(problem, &target, &banded_terms(&mats), delta, g3_dc)
}

fn run_point(
    problem: &CubicPhaseProblem,
    target: &QuantumState,
    (x3, x4): &(BandedMatrix, BandedMatrix),
    delta: f64,
    g3_dc: f64,
) -> Result<CubicPhaseOutcome> {
    let tau = problem.tau()?;
    let psi0 = squeezed_vacuum(problem.r, problem.dim)?;
    let omega_r = problem.omega_r;
    let g3_ac = problem.g3_ac;
    let g4 = problem.g4_dc;
    type Coefficient = Box<dyn Fn(f64) -> f64 + Send + Sync>;
    let h = RotatingFrameHamiltonian::<Coefficient> {
        frame_frequency: omega_r + delta,
        terms: vec![
            (
                x3.clone(),
                Box::new(move |t| g3_dc + g3_ac * ((omega_r * t).cos() + (3.0 * omega_r * t).cos())),
            ),
            (x4.clone(), Box::new(move |_| g4)),
        ],
    };
    let mut tol = Tolerance::new(problem.tol);
    tol.max_step = Some(0.25 * 2.0 * PI / (3.0 * omega_r));
    let (state, stats) = evolve_timedep(&h, &psi0, tau, tol)?;
    let overlap = |theta: f64| target.inner(&state.rotated(theta)).map_or(0.0, |c| c.norm_sqr());
    let error = (1.0 - overlap(0.0)).clamp(0.0, 1.0);
    let (theta, best) = best_rotation(overlap);
    Ok(CubicPhaseOutcome {
        error,
        error_free_rotation: (1.0 - best.max(overlap(0.0))).clamp(0.0, 1.0),
        theta,
        state,
        stats,
    })
}

fn best_rotation(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let samples = 256;
    let (mut arg, mut val) = (0.0, f(0.0));
    for i in 1..samples {
        let th = -PI + 2.0 * PI * i as f64 / samples as f64;
        let v = f(th);
        if v > val {
            arg = th;
            val = v;
        }
    }
    let cell = 2.0 * PI / samples as f64;
    let (x, y) = golden_section_max(&f, arg - cell, arg + cell, 1e-10);
    if y > val {
        (x, y)
    } else {
        (arg, val)
    }
}

/// Error map over `δ × g₃^dc`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub deltas: Vec<f64>,
    pub g3_dc: Vec<f64>,
    /// `error[(i, j)]` at `deltas[i]`, `g3_dc[j]`.
    pub error: DMatrix<f64>,
    pub error_free_rotation: DMatrix<f64>,
    pub norm_drift: DMatrix<f64>,
    pub optimum: (usize, usize),
    pub dim: usize,
}

impl SweepResult {
    pub fn optimum_delta(&self) -> f64 {
        self.deltas[self.optimum.0]
    }

    pub fn optimum_g3_dc(&self) -> f64 {
        self.g3_dc[self.optimum.1]
    }

    pub fn optimum_error(&self) -> f64 {
        self.error[self.optimum]
    }
}

/// Runs every grid point on the rayon pool; results are gathered by index.
pub fn cubic_phase_sweep(problem: &CubicPhaseProblem, deltas: &[f64], g3_dc: &[f64]) -> Result<SweepResult> {
    if deltas.is_empty() || g3_dc.is_empty() {
        return Err(Error::InvalidArgument("sweep grids must be nonempty".into()));
    }
    problem.tau()?;
    let problem = problem.with_guarded_dim()?;
    let target = problem.target()?;
    let mats = QuadratureMatrices::new(problem.dim);
    let terms = banded_terms(&mats);
    let points: Vec<(usize, usize)> = (0..deltas.len())
        .flat_map(|i| (0..g3_dc.len()).map(move |j| (i, j)))
        .collect();
    let outcomes: Vec<Result<(f64, f64, f64)>> = points
        .par_iter()
        .map(|&(i, j)| {
            run_point(&problem, &target, &terms, deltas[i], g3_dc[j])
                .map(|o| (o.error, o.error_free_rotation, o.stats.norm_drift))
        })
        .collect();
    let (n, m) = (deltas.len(), g3_dc.len());
    let mut error = DMatrix::zeros(n, m);
    let mut free = DMatrix::zeros(n, m);
    let mut drift = DMatrix::zeros(n, m);
    for (&(i, j), o) in points.iter().zip(outcomes) {
        let (e, f, d) = o?;
        error[(i, j)] = e;
        free[(i, j)] = f;
        drift[(i, j)] = d;
    }
    let optimum = points
        .iter()
        .copied()
        .min_by(|&a, &b| error[a].total_cmp(&error[b]))
        .expect("nonempty grid");
    Ok(SweepResult {
        deltas: deltas.to_vec(),
        g3_dc: g3_dc.to_vec(),
        error,
        error_free_rotation: free,
        norm_drift: drift,
        optimum,
        dim: problem.dim,
    })
}
