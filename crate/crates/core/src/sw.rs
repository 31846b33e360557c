//! Order-by-order Schrieffer-Wolff diagonalization of `H = H0 + λV`.
//!
//! The transformed Hamiltonian `e^S H e^{−S}` with `S = Σ_m λ^m S^(m)` is
//! expanded as the λ-graded series of nested commutators. At order `m` the
//! coefficient `V^(m)` depends only on `S^(1)..S^(m−1)` apart from the
//! contribution `[S^(m), H0]`, which the generator rule `S^(m) = V^(m)_N / Δ`
//! chooses to cancel the off-diagonal part `V^(m)_N` exactly.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{
    CouplingPolynomial, FrequencyCombination, Frequencies, ModeMonomial, OperatorPolynomial, Params, Symbol,
};
use crate::error::{Error, Result};
use crate::fock::matrix_of_modes;
use crate::optim::bracketed_root;

/// `H0 = Σ_j ω_j a†_j a_j` plus a Hermitian perturbation `V`, to be
/// diagonalized through order `M` in `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationProblem {
    h0: OperatorPolynomial,
    v: OperatorPolynomial,
    order: usize,
    frequencies: Frequencies,
}

impl PerturbationProblem {
    /// Validates `H0` (only `ω_b a†_j a_j` terms with unit coefficient) and
    /// the hermiticity of `V`.
    pub fn new(h0: OperatorPolynomial, v: OperatorPolynomial, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("perturbation order must be at least 1".into()));
        }
        let mut bases: BTreeMap<u16, usize> = BTreeMap::new();
        for (m, c) in h0.terms() {
            let [f] = m.factors() else {
                return Err(Error::InvalidFreeHamiltonian(format!("unexpected monomial `{m}`")));
            };
            if f.creation != 1 || f.annihilation != 1 {
                return Err(Error::InvalidFreeHamiltonian(format!("unexpected monomial `{m}`")));
            }
            let base = c
                .as_single_term()
                .filter(|(k, _)| k.is_one())
                .and_then(|(_, mono)| {
                    let mut symbols = mono.symbols();
                    let mut freqs = mono.frequencies();
                    match (symbols.next(), freqs.next(), freqs.next()) {
                        (None, Some((combo, 1)), None) => combo.as_base(),
                        _ => None,
                    }
                })
                .ok_or_else(|| {
                    Error::InvalidFreeHamiltonian(format!("coefficient `{c}` of `{m}` is not a bare frequency symbol"))
                })?;
            bases.insert(f.mode, base);
        }
        let modes = bases.keys().next_back().map_or(0, |&j| j as usize + 1);
        let needed = v.max_mode().map_or(0, |j| j as usize + 1);
        if bases.len() != modes || needed > modes {
            return Err(Error::InvalidFreeHamiltonian(
                "every mode acted on must carry its own ω a†a term".into(),
            ));
        }
        if !v.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        Ok(PerturbationProblem {
            h0,
            v,
            order,
            frequencies: Frequencies::from_bases(bases.into_values().collect()),
        })
    }

    /// `H0 = ω a†a` with the given perturbation.
    pub fn single_mode(v: OperatorPolynomial, order: usize) -> Result<Self> {
        let h0 = OperatorPolynomial::term(ModeMonomial::single(0, 1, 1), CouplingPolynomial::frequency(0));
        Self::new(h0, v, order)
    }

    /// `V = Σ_n g_n (a + a†)^n` over the listed powers.
    pub fn quadrature_nonlinearity(powers: &[u32], order: usize) -> Result<Self> {
        let mut v = OperatorPolynomial::zero();
        for &n in powers {
            v += &OperatorPolynomial::quadrature_power(0, n).scale_by(&CouplingPolynomial::coupling(n));
        }
        Self::single_mode(v, order)
    }

    pub fn h0(&self) -> &OperatorPolynomial {
        &self.h0
    }

    pub fn v(&self) -> &OperatorPolynomial {
        &self.v
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn frequencies(&self) -> &Frequencies {
        &self.frequencies
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.h0.clone(), self.v.clone(), order)
    }
}

/// Per-order generators and diagonal contributions.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveExpansion {
    problem: PerturbationProblem,
    generators: Vec<OperatorPolynomial>,
    diagonal: Vec<OperatorPolynomial>,
    off_diagonal: Vec<OperatorPolynomial>,
}

impl EffectiveExpansion {
    pub fn problem(&self) -> &PerturbationProblem {
        &self.problem
    }

    pub fn order(&self) -> usize {
        self.generators.len()
    }

    /// `S^(m)` for `m = 1..=M`.
    pub fn generator(&self, m: usize) -> &OperatorPolynomial {
        &self.generators[m - 1]
    }

    pub fn generators(&self) -> &[OperatorPolynomial] {
        &self.generators
    }

    /// `H^(m)`, the diagonal part of the order-`m` coefficient.
    pub fn diagonal_term(&self, m: usize) -> &OperatorPolynomial {
        &self.diagonal[m - 1]
    }

    pub fn diagonal_terms(&self) -> &[OperatorPolynomial] {
        &self.diagonal
    }

    /// `V^(m)_N`, the off-diagonal part removed by `S^(m)`.
    pub fn off_diagonal_term(&self, m: usize) -> &OperatorPolynomial {
        &self.off_diagonal[m - 1]
    }

    /// `Σ_{m ≤ order} H^(m)`, the correction to `H0`.
    pub fn correction(&self, order: usize) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for h in self.diagonal.iter().take(order) {
            out += h;
        }
        out
    }

    /// `H0 + Σ_m H^(m)`.
    pub fn effective(&self) -> OperatorPolynomial {
        &self.problem.h0 + &self.correction(self.order())
    }

    /// Coefficients `c_n` of `a†ⁿaⁿ` in the single-mode correction through
    /// `order`, for `n = 0..=max generated`.
    pub fn coefficients_through(&self, order: usize) -> Result<Vec<CouplingPolynomial>> {
        let h = self.correction(order);
        if h.max_mode().is_some_and(|j| j > 0) {
            return Err(Error::InvalidArgument("diagonal coefficients are defined for a single mode".into()));
        }
        let n_max = h.terms().map(|(m, _)| m.powers(0).0).max().unwrap_or(0);
        Ok((0..=n_max)
            .map(|n| h.coefficient(&ModeMonomial::single(0, n, n)))
            .collect())
    }

    /// Highest φ-degree whose terms are all present at this order. A λ^m
    /// term built from couplings `g_n` with `n ≥ 3` has φ-degree at least
    /// `m + 2`, so every degree up to `M + 2` is complete.
    pub fn complete_phi_degree(&self) -> i32 {
        self.order() as i32 + 2
    }

    /// `c_n` through `order`, keeping only the φ-degrees complete at that
    /// order.
    pub fn consistent_coefficients(&self, order: usize) -> Result<Vec<CouplingPolynomial>> {
        Ok(self
            .coefficients_through(order)?
            .iter()
            .map(|c| c.truncate_phi_degree(order as i32 + 2))
            .collect())
    }

    /// All `c_n` at the full order of the expansion.
    pub fn diagonal_coefficients(&self) -> Result<Vec<CouplingPolynomial>> {
        self.coefficients_through(self.order())
    }

    /// Largest monomial degree generated at each order, for judging the
    /// validity of the truncation.
    pub fn max_degree_per_order(&self) -> Vec<u32> {
        self.generators
            .iter()
            .zip(&self.diagonal)
            .map(|(s, h)| s.max_degree().max(h.max_degree()))
            .collect()
    }
}

/// Generator for an off-diagonal polynomial: each monomial's coefficient is
/// divided by its rotation frequency `Σ_j (p_j − q_j) ω_j`.
pub fn solve_generator(v_off: &OperatorPolynomial, frequencies: &Frequencies) -> Result<OperatorPolynomial> {
    let mut out = OperatorPolynomial::zero();
    for (m, c) in v_off.terms() {
        let inv = frequencies.inverse_rotation(m)?;
        out += &OperatorPolynomial::term(m.clone(), c * &inv);
    }
    Ok(out)
}

/// `[S, H0] = −Σ_m Δ_m c_m m` for `S = Σ_m c_m m`.
fn commutator_with_free(s: &OperatorPolynomial, frequencies: &Frequencies) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero();
    for (m, c) in s.terms() {
        if let Some(delta) = frequencies.rotation_factor(m) {
            out -= &OperatorPolynomial::term(m.clone(), c * &delta);
        }
    }
    out
}

fn graded_bch(
    h0: &OperatorPolynomial,
    frequencies: &Frequencies,
    v: &OperatorPolynomial,
    generators: &[OperatorPolynomial],
    max_order: usize,
) -> Vec<OperatorPolynomial> {
    let mut total = vec![OperatorPolynomial::zero(); max_order + 1];
    let mut current = vec![OperatorPolynomial::zero(); max_order + 1];
    current[0] = h0.clone();
    if max_order >= 1 {
        current[1] = v.clone();
    }
    for j in 1.. {
        for (t, c) in total.iter_mut().zip(&current) {
            *t += c;
        }
        if j > max_order || current.iter().all(OperatorPolynomial::is_zero) {
            break;
        }
        let inv_j = BigRational::new(1.into(), j.into());
        let mut next = vec![OperatorPolynomial::zero(); max_order + 1];
        for (o, term) in current.iter().enumerate() {
            if term.is_zero() {
                continue;
            }
            for (n, s) in generators.iter().enumerate().map(|(i, s)| (i + 1, s)) {
                if o + n > max_order || s.is_zero() {
                    continue;
                }
                let c = if j == 1 && o == 0 {
                    commutator_with_free(s, frequencies)
                } else {
                    s.commutator(term)
                };
                next[o + n] += &c.scale(&inv_j);
            }
        }
        current = next;
    }
    total
}

/// Coefficients of `λ^0..λ^M` in `e^S (H0 + λV) e^{−S}` with
/// `S = Σ_n λ^n S^(n)` built from the given generators.
pub fn bch_order_coefficients(problem: &PerturbationProblem, generators: &[OperatorPolynomial]) -> Result<Vec<OperatorPolynomial>> {
    if generators.len() > problem.order {
        return Err(Error::InvalidArgument(format!(
            "{} generators supplied for an order-{} problem",
            generators.len(),
            problem.order
        )));
    }
    Ok(graded_bch(&problem.h0, &problem.frequencies, &problem.v, generators, problem.order))
}

/// Runs the iteration through the problem's order and verifies that the
/// transformed Hamiltonian is diagonal at every order.
pub fn effective_hamiltonian(problem: &PerturbationProblem) -> Result<EffectiveExpansion> {
    let mut generators = Vec::with_capacity(problem.order);
    let mut diagonal = Vec::with_capacity(problem.order);
    let mut off_diagonal = Vec::with_capacity(problem.order);
    for m in 1..=problem.order {
        let coeffs = graded_bch(&problem.h0, &problem.frequencies, &problem.v, &generators, m);
        let (d, o) = coeffs[m].split_diagonal();
        let s = solve_generator(&o, &problem.frequencies).map_err(|e| match e {
            Error::ZeroFrequency(msg) => Error::Internal(format!("secular term survived splitting: {msg}")),
            other => other,
        })?;
        if !s.is_anti_hermitian() {
            return Err(Error::Internal(format!("generator at order {m} is not anti-Hermitian")));
        }
        generators.push(s);
        diagonal.push(d);
        off_diagonal.push(o);
    }
    let check = graded_bch(&problem.h0, &problem.frequencies, &problem.v, &generators, problem.order);
    for (m, c) in check.iter().enumerate() {
        let (_, o) = c.split_diagonal();
        if !o.is_zero() {
            return Err(Error::Internal(format!("order {m} not diagonal after transformation: {o}")));
        }
    }
    Ok(EffectiveExpansion {
        problem: problem.clone(),
        generators,
        diagonal,
        off_diagonal,
    })
}

/// Time-averaged second-order effective Hamiltonian
/// `h0 + Σ_n (1/ω_n)[h_n†, h_n]` for an interaction-picture Hamiltonian
/// `Σ_n h_n e^{−iω_n t} + h.c.`.
pub fn james_second_order(h0: &OperatorPolynomial, harmonics: &[(OperatorPolynomial, CouplingPolynomial)]) -> Result<OperatorPolynomial> {
    let mut out = h0.clone();
    for (i, (h, w)) in harmonics.iter().enumerate() {
        if w.is_zero() {
            return Err(Error::ZeroFrequency(format!("harmonic {i} ({h})")));
        }
        if harmonics[..i].iter().any(|(_, u)| u == w) {
            return Err(Error::InvalidArgument(format!("harmonic frequency {w} appears twice")));
        }
        let inv = w.reciprocal().ok_or_else(|| {
            Error::InvalidArgument(format!("harmonic frequency {w} is not invertible"))
        })?;
        out += &h.adjoint().commutator(h).scale_by(&inv);
    }
    Ok(out)
}

/// Splits `V` into its static part and the harmonics `h_n e^{−iω_n t}`
/// (lowering-type monomials, `ω_n > 0`) seen in the interaction picture of
/// `Σ ω_j a†_j a_j`.
pub fn james_harmonics(v: &OperatorPolynomial, frequencies: &Frequencies) -> (OperatorPolynomial, Vec<(OperatorPolynomial, CouplingPolynomial)>) {
    let (diag, off) = v.split_diagonal();
    let mut groups: BTreeMap<Vec<i64>, OperatorPolynomial> = BTreeMap::new();
    for (m, c) in off.terms() {
        let mut w = frequencies.rotation_weights(m);
        while w.last() == Some(&0) {
            w.pop();
        }
        match FrequencyCombination::primitive(&w) {
            Some((k, _)) if k < 0 => {
                let neg: Vec<i64> = w.iter().map(|x| -x).collect();
                *groups.entry(neg).or_default() += &OperatorPolynomial::term(m.clone(), c.clone());
            }
            _ => {}
        }
    }
    let harmonics = groups
        .into_iter()
        .map(|(w, h)| {
            let mut freq = CouplingPolynomial::zero();
            for (b, k) in w.into_iter().enumerate() {
                if k != 0 {
                    freq += &CouplingPolynomial::frequency(b).scale(&BigRational::from_integer(k.into()));
                }
            }
            (h, freq)
        })
        .collect();
    (diag, harmonics)
}

/// Coupling relation at which the self-Kerr coefficient `c₂` vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct KerrFreeRelation {
    /// `c₂` as a polynomial in the couplings.
    pub c2: CouplingPolynomial,
    /// `g₄*` in closed form when `c₂` is linear in `g₄` with a rational slope.
    pub g4_closed_form: Option<CouplingPolynomial>,
}

impl KerrFreeRelation {
    pub fn from_c2(c2: CouplingPolynomial) -> Self {
        let g4 = Symbol::Coupling(4);
        let g4_closed_form = (c2.degree_in(&g4) == 1)
            .then(|| c2.coefficient_of(&g4, 1).as_constant())
            .flatten()
            .filter(|slope| !slope.is_zero())
            .map(|slope| c2.coefficient_of(&g4, 0).scale(&(-slope.recip())));
        KerrFreeRelation { c2, g4_closed_form }
    }

    fn c2_at(&self, g3: f64, g4: f64, omega: f64) -> Result<f64> {
        self.c2.evaluate(&Params::single_mode(omega, &[(3, g3), (4, g4)]))
    }

    /// Root in `g₄` of `c₂(g₃, g₄, ω)` inside `bracket`.
    pub fn solve_g4(&self, g3: f64, omega: f64, bracket: (f64, f64)) -> Result<f64> {
        self.c2_at(g3, 0.0, omega)?;
        bracketed_root(
            |g4| self.c2_at(g3, g4, omega).unwrap_or(f64::NAN),
            bracket.0,
            bracket.1,
            1e-15 * bracket.0.abs().max(bracket.1.abs()),
        )
        .map_err(|_| Error::NoKerrFreePoint)
    }

    /// Root in `g₃` of `c₂(g₃, g₄, ω)` inside `bracket`.
    pub fn solve_g3(&self, g4: f64, omega: f64, bracket: (f64, f64)) -> Result<f64> {
        self.c2_at(0.0, g4, omega)?;
        bracketed_root(
            |g3| self.c2_at(g3, g4, omega).unwrap_or(f64::NAN),
            bracket.0,
            bracket.1,
            1e-15 * bracket.0.abs().max(bracket.1.abs()),
        )
        .map_err(|_| Error::NoKerrFreePoint)
    }
}

/// Kerr-free relation from `c₂` through λ-order `order`, truncated to the
/// φ-degree complete at that order. At order 2 this gives `g₄* = 5g₃²/ω`.
pub fn kerr_free_point(expansion: &EffectiveExpansion, order: usize) -> Result<KerrFreeRelation> {
    if order == 0 || order > expansion.order() {
        return Err(Error::InvalidArgument(format!(
            "order {order} outside 1..={}",
            expansion.order()
        )));
    }
    let c = expansion.consistent_coefficients(order)?;
    Ok(KerrFreeRelation::from_c2(c.get(2).cloned().unwrap_or_default()))
}

/// Absolute energies `E_n = ω n + Σ_k c_k n!/(n−k)!` for `n = 0..=n_max`.
pub fn perturbative_energies(expansion: &EffectiveExpansion, n_max: usize, params: &Params) -> Result<Vec<f64>> {
    perturbative_energies_from(&expansion.diagonal_coefficients()?, n_max, params)
}

/// [`perturbative_energies`] from an explicit coefficient list, e.g. one
/// truncated in φ-degree.
pub fn perturbative_energies_from(coefficients: &[CouplingPolynomial], n_max: usize, params: &Params) -> Result<Vec<f64>> {
    let omega = params
        .frequency(0)
        .ok_or_else(|| Error::UnresolvedSymbol("w".into()))?;
    let c: Vec<f64> = coefficients.iter().map(|c| c.evaluate(params)).collect::<Result<_>>()?;
    Ok((0..=n_max)
        .map(|n| {
            let mut e = omega * n as f64;
            let mut falling = 1.0;
            for (k, ck) in c.iter().enumerate() {
                if k > n {
                    break;
                }
                if k > 0 {
                    falling *= (n - k + 1) as f64;
                }
                e += ck * falling;
            }
            e
        })
        .collect())
}

/// Relative residual of the matrix-element identity
/// `⟨k|S^(m)|l⟩ = ⟨k|V^(m)_N|l⟩ / (E_k − E_l)` on a truncated Fock space.
pub fn generator_matrix_identity_check(expansion: &EffectiveExpansion, params: &Params, dim: usize, m: usize) -> Result<f64> {
    if m == 0 || m > expansion.order() {
        return Err(Error::InvalidArgument(format!("order {m} outside 1..={}", expansion.order())));
    }
    let problem = expansion.problem();
    let dims = vec![dim; problem.frequencies().modes().max(1)];
    let s: DMatrix<f64> = matrix_of_modes(expansion.generator(m), params, &dims)?;
    let v = matrix_of_modes(expansion.off_diagonal_term(m), params, &dims)?;
    let h0 = matrix_of_modes(problem.h0(), params, &dims)?;
    let scale = s.abs().max();
    let mut worst: f64 = 0.0;
    for k in 0..s.nrows() {
        for l in 0..s.ncols() {
            let gap = h0[(k, k)] - h0[(l, l)];
            let target = if gap == 0.0 {
                if v[(k, l)] != 0.0 {
                    return Err(Error::Resonance(format!("matrix element ({k}, {l}) couples degenerate levels")));
                }
                0.0
            } else {
                v[(k, l)] / gap
            };
            worst = worst.max((s[(k, l)] - target).abs());
        }
    }
    Ok(if scale > 0.0 { worst / scale } else { worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_operator;

    fn op(s: &str) -> OperatorPolynomial {
        parse_operator(s).unwrap()
    }

    #[test]
    fn rejects_bad_free_hamiltonians() {
        assert!(matches!(
            PerturbationProblem::new(op("w*ad a + ad^2 a^2"), op("g3*(a+ad)"), 2),
            Err(Error::InvalidFreeHamiltonian(_))
        ));
        assert!(matches!(
            PerturbationProblem::new(op("2*w*ad a"), op("g3*(a+ad)"), 2),
            Err(Error::InvalidFreeHamiltonian(_))
        ));
        assert!(matches!(PerturbationProblem::single_mode(op("ad"), 2), Err(Error::NotHermitian)));
        assert!(PerturbationProblem::single_mode(op("a + ad"), 0).is_err());
    }

    #[test]
    fn generator_rejects_secular_terms() {
        assert!(matches!(
            solve_generator(&op("ad a"), &Frequencies::single_mode()),
            Err(Error::ZeroFrequency(_))
        ));
    }

    #[test]
    fn degenerate_modes_are_resonant() {
        let f = Frequencies::from_bases(vec![0, 0]);
        assert!(matches!(solve_generator(&op("ad a1"), &f), Err(Error::Resonance(_))));
        let s = solve_generator(&op("g*(ad a1 - a ad1)"), &Frequencies::distinct(2)).unwrap();
        assert_eq!(s, op("g/(w-w1)*(ad a1 + a ad1)"));
    }

    #[test]
    fn first_generator_for_quadrature_terms() {
        let p = PerturbationProblem::quadrature_nonlinearity(&[3, 4], 1).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        let expected = op("g3/w*(1/3*ad^3 + 3*ad a ad - 1/3*a^3 - 3*a ad a) + g4/w*(1/4*ad^4 + 2*ad^3 a + 3*ad^2 - 1/4*a^4 - 2*ad a^3 - 3*a^2)");
        assert_eq!(e.generator(1), &expected);
    }

    #[test]
    fn second_order_kerr_and_shift() {
        let p = PerturbationProblem::quadrature_nonlinearity(&[3, 4], 2).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        let full = e.diagonal_coefficients().unwrap();
        assert_eq!(full[1], "12*g4 - (60*g3^2 + 288*g4^2)/w".parse::<CouplingPolynomial>().unwrap());
        let c = e.consistent_coefficients(2).unwrap();
        let target = "12*g4 - 60*g3^2/w".parse::<CouplingPolynomial>().unwrap();
        assert_eq!(c[1], target);
        assert_eq!(c[2].scale(&BigRational::from_integer(2.into())), target);
    }

    #[test]
    fn empty_generators_leave_hamiltonian() {
        let p = PerturbationProblem::quadrature_nonlinearity(&[3], 3).unwrap();
        let c = bch_order_coefficients(&p, &[]).unwrap();
        assert_eq!(c, vec![p.h0().clone(), p.v().clone(), OperatorPolynomial::zero(), OperatorPolynomial::zero()]);
    }

    #[test]
    fn diagonal_perturbation_is_untouched() {
        let v = op("K/2*ad^2 a^2");
        let p = PerturbationProblem::single_mode(v.clone(), 3).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        assert!(e.generators().iter().all(OperatorPolynomial::is_zero));
        assert_eq!(e.diagonal_term(1), &v);
        assert!(e.diagonal_term(2).is_zero());
    }

    #[test]
    fn james_with_lowering_harmonics() {
        let h = james_second_order(
            &OperatorPolynomial::zero(),
            &[(op("3*g3*a ad a"), op("w").coefficient(&ModeMonomial::identity())), (op("g3*a^3"), "3*w".parse().unwrap())],
        )
        .unwrap();
        let (_, rest) = h.split_diagonal();
        assert!(rest.is_zero());
        let expected = op("-30*g3^2/w*(ad^2 a^2 + 2*ad a)");
        let without_constant = &h - &OperatorPolynomial::scalar(h.coefficient(&ModeMonomial::identity()));
        assert_eq!(without_constant, expected);
    }

    #[test]
    fn james_single_harmonic_and_errors() {
        let h = james_second_order(&OperatorPolynomial::zero(), &[(op("g*ad"), CouplingPolynomial::frequency(0))]).unwrap();
        // (g²/ω)[a, a†]
        assert_eq!(h, op("g^2/w"));
        assert!(james_second_order(&OperatorPolynomial::zero(), &[(op("ad"), CouplingPolynomial::zero())]).is_err());
        assert_eq!(james_second_order(&op("w*ad a"), &[]).unwrap(), op("w*ad a"));
    }

    #[test]
    fn harmonic_decomposition() {
        let v = op("g3*(a+ad)^3");
        let (d, h) = james_harmonics(&v, &Frequencies::single_mode());
        assert!(d.is_zero());
        assert_eq!(h.len(), 2);
        assert_eq!(h[0], (op("3*g3*(ad a^2 + a)"), CouplingPolynomial::frequency(0)));
        assert_eq!(h[1].0, op("g3*a^3"));
    }

    #[test]
    fn kerr_free_leading_order() {
        let p = PerturbationProblem::quadrature_nonlinearity(&[3, 4], 2).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        let k = kerr_free_point(&e, 2).unwrap();
        assert_eq!(k.g4_closed_form.clone().unwrap(), "5*g3^2/w".parse().unwrap());
        let w = 2.0 * std::f64::consts::PI * 4e9;
        let g4 = 2.0 * std::f64::consts::PI * 0.5e6;
        let g3 = k.solve_g3(g4, w, (1.0, 0.1 * w)).unwrap();
        assert!((g3 / (2.0 * std::f64::consts::PI) - 20e6).abs() < 1.0);
        assert_eq!(k.solve_g4(0.0, w, (-1.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(k.solve_g4(1e6, w, (1e9, 2e9)), Err(Error::NoKerrFreePoint)));
    }

    #[test]
    fn pure_quartic_energies() {
        let p = PerturbationProblem::quadrature_nonlinearity(&[3, 4], 1).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        let params = Params::single_mode(10.0, &[(3, 0.0), (4, 0.01)]);
        let en = perturbative_energies(&e, 6, &params).unwrap();
        for (n, &x) in en.iter().enumerate() {
            let nf = n as f64;
            let raw = x - nf * en[1];
            assert!((raw - (0.06 * nf * (nf - 1.0) + 0.03 * (1.0 - nf))).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_identity_on_matrices() {
        let p = PerturbationProblem::quadrature_nonlinearity(&[3, 4], 2).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        let params = Params::single_mode(1.0, &[(3, 0.02), (4, 0.001)]);
        for m in 1..=2 {
            assert!(generator_matrix_identity_check(&e, &params, 16, m).unwrap() < 1e-12);
        }
        let d = effective_hamiltonian(&PerturbationProblem::single_mode(op("K*ad^2 a^2"), 1).unwrap()).unwrap();
        let params = Params::single_mode(1.0, &[]).with_symbol(Symbol::named("K"), 0.1);
        assert_eq!(generator_matrix_identity_check(&d, &params, 12, 1).unwrap(), 0.0);
    }

    #[test]
    fn two_mode_cross_kerr() {
        let h0 = op("w*ad a + w1*ad1 a1");
        let p = PerturbationProblem::new(h0, op("g4*(a+ad)^2*(a1+ad1)^2"), 2).unwrap();
        let e = effective_hamiltonian(&p).unwrap();
        let cross = ModeMonomial::new([(0, 1, 1), (1, 1, 1)]);
        assert_eq!(e.diagonal_term(1).coefficient(&cross), "4*g4".parse().unwrap());
        let params = Params::single_mode(1.0, &[(4, 0.01)]).with_frequency(1, 1.7);
        for m in 1..=2 {
            assert!(generator_matrix_identity_check(&e, &params, 8, m).unwrap() < 1e-10);
        }
    }
}
