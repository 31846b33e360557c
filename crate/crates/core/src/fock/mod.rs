//! Numerical verification on truncated Fock spaces.

mod cubic;
mod evolve;
mod kerr;
mod matrix;
mod savgol;
mod spectrum;
mod state;
mod wigner;

pub use evolve::{evolve_static, evolve_timedep, EvolutionRecord, MatrixBuilder, StepStats, TimeDependentHamiltonian, Tolerance};
pub use matrix::{annihilation_matrix, hamiltonian_matrix, matrix_of, matrix_of_modes, quadrature_matrix};
pub use spectrum::{delta_e, eigenspectrum, reported_energies, reported_levels, Spectrum, REPORTED_FRACTION};
pub use cubic::{cubic_phase_sweep, prepare_cubic_phase, BandedMatrix, CubicPhaseOutcome, CubicPhaseProblem, RotatingFrameHamiltonian, SweepResult};
pub use state::{coherent_state, cubic_phase_state, cubic_phase_state_with_threshold, fidelity, squeezed_vacuum, QuantumState, LEAKAGE_THRESHOLD};
pub use kerr::{averaged_abs_a, optimize_g3, Averaging, G3Optimum, KerrOscillator, QuadratureMatrices};
pub use savgol::{odd_window, savgol_average, savgol_center};
pub use wigner::{wigner, wigner_integral};
