//! SNAIL and ATS potentials, their Taylor expansion about the potential
//! minimum, and the simplified map to oscillator couplings `g_n`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::algebra::Params;
use crate::error::{Error, Result};
use crate::optim::bracketed_root;

/// Label attached to every [`CouplingSet`]: the map ignores capacitive
/// renormalization and mode hybridization.
pub const MAPPING_LABEL: &str = "simplified: g_k = U^(k)(phi_min)/k! * phi_zpf^k, omega_shift = 2*c_2*phi_zpf^2";

/// Number of points in the minimum pre-scan.
pub const PRESCAN_POINTS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeviceKind {
    /// `U = −αE_J cos φ − nE_J cos((φ_ext − φ)/n)`.
    Snail { phi_ext: f64 },
    /// `U = −2αE_J cos φ_Σ cos(φ + φ_Δ) − nE_J cos(φ/n)`, assuming two
    /// identical small junctions.
    Ats { phi_sigma: f64, phi_delta: f64 },
}

/// Which flux a sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FluxAxis {
    /// `φ_ext` of a SNAIL.
    External,
    Sigma,
    Delta,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviceSpec {
    pub kind: DeviceKind,
    pub alpha: f64,
    pub n: u32,
    /// Josephson energy in angular-frequency units.
    pub e_j: f64,
    pub phi_zpf: f64,
}

/// `(φ_Σ, φ_Δ)` from the two loop fluxes: `2φ_Σ = φ_ext + φ_ext′`,
/// `2φ_Δ = φ_ext − φ_ext′`.
pub fn ats_fluxes_from_loops(phi_ext: f64, phi_ext_prime: f64) -> (f64, f64) {
    (0.5 * (phi_ext + phi_ext_prime), 0.5 * (phi_ext - phi_ext_prime))
}

impl DeviceSpec {
    pub fn snail(alpha: f64, n: u32, phi_ext: f64, e_j: f64, phi_zpf: f64) -> Result<Self> {
        DeviceSpec {
            kind: DeviceKind::Snail { phi_ext },
            alpha,
            n,
            e_j,
            phi_zpf,
        }
        .validated()
    }

    pub fn ats(alpha: f64, n: u32, phi_sigma: f64, phi_delta: f64, e_j: f64, phi_zpf: f64) -> Result<Self> {
        DeviceSpec {
            kind: DeviceKind::Ats { phi_sigma, phi_delta },
            alpha,
            n,
            e_j,
            phi_zpf,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha = {} outside (0, 1)", self.alpha)));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("junction count n must be at least 1".into()));
        }
        if self.phi_zpf.is_nan() || self.phi_zpf <= 0.0 {
            return Err(Error::InvalidArgument(format!("phi_zpf = {} must be positive", self.phi_zpf)));
        }
        if !(self.e_j > 0.0 && self.e_j.is_finite()) {
            return Err(Error::InvalidArgument(format!("E_J = {} must be positive", self.e_j)));
        }
        Ok(self)
    }

    /// Copy with one flux replaced.
    pub fn with_flux(&self, axis: FluxAxis, value: f64) -> Result<Self> {
        let kind = match (self.kind, axis) {
            (DeviceKind::Snail { .. }, FluxAxis::External) => DeviceKind::Snail { phi_ext: value },
            (DeviceKind::Ats { phi_delta, .. }, FluxAxis::Sigma) => DeviceKind::Ats { phi_sigma: value, phi_delta },
            (DeviceKind::Ats { phi_sigma, .. }, FluxAxis::Delta) => DeviceKind::Ats { phi_sigma, phi_delta: value },
            (kind, axis) => {
                return Err(Error::InvalidArgument(format!("flux axis {axis:?} does not apply to {kind:?}")));
            }
        };
        Ok(DeviceSpec { kind, ..*self })
    }

    pub fn with_phi_zpf(&self, phi_zpf: f64) -> Result<Self> {
        DeviceSpec { phi_zpf, ..*self }.validated()
    }

    /// The potential as `Σ A cos(aφ + b)`.
    fn cosine_terms(&self) -> [(f64, f64, f64); 2] {
        let n = self.n as f64;
        match self.kind {
            DeviceKind::Snail { phi_ext } => [
                (-self.alpha * self.e_j, 1.0, 0.0),
                (-n * self.e_j, -1.0 / n, phi_ext / n),
            ],
            DeviceKind::Ats { phi_sigma, phi_delta } => [
                (-2.0 * self.alpha * self.e_j * phi_sigma.cos(), 1.0, phi_delta),
                (-n * self.e_j, 1.0 / n, 0.0),
            ],
        }
    }
}

pub fn potential(spec: &DeviceSpec, phi: f64) -> f64 {
    spec.cosine_terms()
        .iter()
        .map(|&(amp, a, b)| amp * (a * phi + b).cos())
        .sum()
}

/// `d^k U/dφ^k` from `d^k/dφ^k cos(aφ + b) = a^k cos(aφ + b + kπ/2)`.
pub fn potential_derivative(spec: &DeviceSpec, phi: f64, k: u32) -> f64 {
    let shift = (k % 4) as f64 * FRAC_PI_2;
    spec.cosine_terms()
        .iter()
        .map(|&(amp, a, b)| amp * a.powi(k as i32) * (a * phi + b + shift).cos())
        .sum()
}

/// Global minimum of `U` inside `bracket`: a [`PRESCAN_POINTS`] scan picks
/// the lowest sample (ties toward smaller `|φ|`), then the root of `U′` in
/// the neighbouring cells is refined and polished by Newton steps.
pub fn find_minimum(spec: &DeviceSpec, bracket: (f64, f64)) -> Result<f64> {
    let (lo, hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let step = (hi - lo) / (PRESCAN_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..PRESCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let mut best = 0;
    let mut best_u = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let u = potential(spec, x);
        let tie = (u - best_u).abs() <= 1e-14 * spec.e_j;
        if (u < best_u && !tie) || (tie && x.abs() < xs[best].abs()) {
            best = i;
            best_u = u;
        }
    }
    // a minimum on the bracket edge still needs a cell on both sides
    let (a, b) = (xs[best] - step, xs[best] + step);
    let d1 = |x: f64| potential_derivative(spec, x, 1);
    let mut phi = if d1(a) == 0.0 {
        a
    } else if d1(b) == 0.0 {
        b
    } else {
        bracketed_root(d1, a, b, 1e-15).map_err(|_| Error::NoSignChange { lo: a, hi: b })?
    };
    for _ in 0..4 {
        let curvature = potential_derivative(spec, phi, 2);
        if curvature <= 0.0 {
            break;
        }
        let next = phi - d1(phi) / curvature;
        if (next - phi).abs() > step {
            break;
        }
        phi = next;
    }
    if potential_derivative(spec, phi, 2) <= 0.0 {
        return Err(Error::NotAMinimum { phi });
    }
    Ok(phi)
}

/// [`find_minimum`] over `[−π, π]`.
pub fn find_default_minimum(spec: &DeviceSpec) -> Result<f64> {
    find_minimum(spec, (-PI, PI))
}

/// Taylor data of the potential at its minimum and the derived couplings.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingSet {
    pub phi_min: f64,
    /// `c̃_k = U^(k)(φ_min)/k!` for `k = 0..=n_max`.
    pub taylor: Vec<f64>,
    pub phi_zpf: f64,
    /// `2 c̃₂ φ_zpf²`, to be added to a bare frequency.
    pub omega_shift: f64,
    /// `g_k = c̃_k φ_zpf^k` for `k = 0..=n_max`; entries below 3 are zero.
    pub g: Vec<f64>,
    pub label: &'static str,
}

impl CouplingSet {
    /// `g_k`, zero outside the computed range.
    pub fn g(&self, k: usize) -> f64 {
        if k < 3 {
            return 0.0;
        }
        self.g.get(k).copied().unwrap_or(0.0)
    }

    /// Numeric parameters for the single-mode Hamiltonian at frequency `omega`.
    pub fn params(&self, omega: f64) -> Params {
        let mut p = Params::new().with_frequency(0, omega);
        for k in 3..self.g.len() {
            p.set_symbol(crate::algebra::Symbol::Coupling(k as u32), self.g[k]);
        }
        p
    }
}

/// Couplings from the Taylor expansion about the default minimum.
pub fn taylor_couplings(spec: &DeviceSpec, n_max: usize) -> Result<CouplingSet> {
    let phi_min = find_default_minimum(spec)?;
    Ok(couplings_at(spec, phi_min, n_max))
}

/// Couplings from the Taylor expansion about a given expansion point.
pub fn couplings_at(spec: &DeviceSpec, phi_min: f64, n_max: usize) -> CouplingSet {
    let mut taylor = Vec::with_capacity(n_max + 1);
    let mut factorial = 1.0;
    for k in 0..=n_max {
        if k > 0 {
            factorial *= k as f64;
        }
        let d = if k == 0 {
            potential(spec, phi_min)
        } else {
            potential_derivative(spec, phi_min, k as u32)
        };
        taylor.push(d / factorial);
    }
    let g = taylor
        .iter()
        .enumerate()
        .map(|(k, &c)| if k >= 3 { c * spec.phi_zpf.powi(k as i32) } else { 0.0 })
        .collect();
    CouplingSet {
        phi_min,
        omega_shift: 2.0 * taylor.get(2).copied().unwrap_or(0.0) * spec.phi_zpf.powi(2),
        taylor,
        phi_zpf: spec.phi_zpf,
        g,
        label: MAPPING_LABEL,
    }
}

/// Sign changes of `g₄(x) − 5g₃(x)²/ω_r` on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct KerrFreeScan {
    pub roots: Vec<f64>,
    /// Set when no root was found.
    pub diagnostic: Option<String>,
}

/// Roots of `g₄ − 5g₃²/ω_r` for an arbitrary coupling family `x ↦ (g₃, g₄)`.
/// Sign changes across a jump of the family (e.g. the minimum switching
/// wells) are discarded.
pub fn kerr_free_roots(
    mut couplings: impl FnMut(f64) -> Option<(f64, f64)>,
    range: (f64, f64),
    samples: usize,
    omega_r: f64,
) -> KerrFreeScan {
    let mut f = |x: f64| couplings(x).map_or(f64::NAN, |(g3, g4)| g4 - 5.0 * g3 * g3 / omega_r);
    let samples = samples.max(2);
    let xs: Vec<f64> = (0..samples)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (samples - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..samples - 1 {
        let (ya, yb) = (ys[i], ys[i + 1]);
        if !(ya.is_finite() && yb.is_finite()) {
            continue;
        }
        if ya == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if yb == 0.0 || ya.signum() == yb.signum() {
            continue;
        }
        let tol = 1e-13 * (xs[i + 1] - xs[i]).abs().max(xs[i].abs());
        if let Ok(r) = bracketed_root(&mut f, xs[i], xs[i + 1], tol) {
            let y = f(r);
            if y.abs() <= 1e-6 * ya.abs().max(yb.abs()) {
                roots.push(r);
            }
        }
    }
    if ys[samples - 1] == 0.0 {
        roots.push(xs[samples - 1]);
    }
    let diagnostic = roots.is_empty().then(|| {
        format!(
            "no Kerr-free point in [{}, {}] with {samples} samples",
            range.0, range.1
        )
    });
    KerrFreeScan { roots, diagnostic }
}

/// Flux values where the Kerr-free condition changes sign for a device
/// family swept along `axis`.
pub fn kerr_free_flux(template: &DeviceSpec, axis: FluxAxis, range: (f64, f64), samples: usize, omega_r: f64) -> Result<KerrFreeScan> {
    template.with_flux(axis, range.0)?;
    Ok(kerr_free_roots(
        |x| {
            let spec = template.with_flux(axis, x).ok()?;
            let c = taylor_couplings(&spec, 4).ok()?;
            Some((c.g(3), c.g(4)))
        },
        range,
        samples,
        omega_r,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn snail(phi_ext: f64) -> DeviceSpec {
        DeviceSpec::snail(0.29, 3, phi_ext, 1.0, 0.1).unwrap()
    }

    #[test]
    fn values_at_simple_points() {
        assert_eq!(potential(&snail(0.0), 0.0), -(0.29 + 3.0));
        let ats = DeviceSpec::ats(0.2, 5, FRAC_PI_2, 0.3, 2.0, 0.1).unwrap();
        for phi in [-1.0, 0.0, 0.7] {
            assert_relative_eq!(potential(&ats, phi), -10.0 * (phi / 5.0).cos(), epsilon = 1e-12);
        }
        let x = 0.4 * 2.0 * PI;
        assert_relative_eq!(potential(&snail(x), 0.0), -0.29 - 3.0 * (x / 3.0).cos(), epsilon = 1e-15);
    }

    #[test]
    fn validation() {
        assert!(DeviceSpec::snail(1.2, 3, 0.0, 1.0, 0.1).is_err());
        assert!(DeviceSpec::snail(0.3, 0, 0.0, 1.0, 0.1).is_err());
        assert!(DeviceSpec::snail(0.3, 3, 0.0, 1.0, 0.0).is_err());
        assert!(snail(0.0).with_flux(FluxAxis::Sigma, 1.0).is_err());
    }

    #[test]
    fn loop_flux_conversion() {
        let (s, d) = ats_fluxes_from_loops(1.0, 0.4);
        assert_relative_eq!(2.0 * s, 1.4);
        assert_relative_eq!(2.0 * d, 0.6);
    }

    #[test]
    fn symmetric_minima() {
        assert!(find_default_minimum(&snail(0.0)).unwrap().abs() < 1e-12);
        let ats = DeviceSpec::ats(0.2, 5, 0.0, 0.0, 1.0, 0.1).unwrap();
        assert!(find_default_minimum(&ats).unwrap().abs() < 1e-12);
    }

    #[test]
    fn minimum_at_half_flux_matches_dense_scan() {
        let s = snail(PI);
        let phi = find_default_minimum(&s).unwrap();
        assert!(potential_derivative(&s, phi, 1).abs() <= 1e-12);
        assert!(potential_derivative(&s, phi, 2) > 0.0);
        let dense = (0..200_001)
            .map(|i| -PI + 2.0 * PI * i as f64 / 200_000.0)
            .min_by(|a, b| potential(&s, *a).total_cmp(&potential(&s, *b)))
            .unwrap();
        assert!((phi - dense).abs() < 1e-4);
    }

    #[test]
    fn edge_without_stationary_point_is_rejected() {
        let s = snail(0.0);
        assert!(find_minimum(&s, (2.0, 3.0)).is_err());
    }

    #[test]
    fn couplings_scale_with_phi_zpf() {
        let s = snail(0.8);
        let a = taylor_couplings(&s, 6).unwrap();
        let b = taylor_couplings(&s.with_phi_zpf(0.2).unwrap(), 6).unwrap();
        for k in 3..=6 {
            assert_eq!(b.g(k) / a.g(k), 2f64.powi(k as i32));
        }
        assert_eq!(a.label, MAPPING_LABEL);
    }

    #[test]
    fn synthetic_kerr_free_root() {
        let w = 10.0;
        let x0 = 0.37;
        let scan = kerr_free_roots(|x| Some((x, 5.0 * x * x / w + (x - x0))), (0.0, 1.0), 50, w);
        assert_eq!(scan.roots.len(), 1);
        assert!((scan.roots[0] - x0).abs() < 1e-12);
        let none = kerr_free_roots(|_| Some((0.0, 1.0)), (0.0, 1.0), 10, w);
        assert!(none.roots.is_empty() && none.diagnostic.is_some());
    }
}
