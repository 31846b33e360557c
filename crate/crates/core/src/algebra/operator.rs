use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coupling::{CouplingMonomial, CouplingPolynomial, FrequencyCombination};
use super::monomial::ModeMonomial;
use crate::error::{Error, Result};

/// Canonical sum of normal-ordered monomials with exact coupling coefficients.
///
/// No monomial maps to a zero coefficient, so structural equality is
/// semantic equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorPolynomial {
    terms: BTreeMap<ModeMonomial, CouplingPolynomial>,
}

impl OperatorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(CouplingPolynomial::one())
    }

    pub fn scalar(c: CouplingPolynomial) -> Self {
        Self::term(ModeMonomial::identity(), c)
    }

    pub fn term(monomial: ModeMonomial, coefficient: CouplingPolynomial) -> Self {
        let mut p = Self::zero();
        if !coefficient.is_zero() {
            p.terms.insert(monomial, coefficient);
        }
        p
    }

    /// Unit-coefficient monomial.
    pub fn monomial(monomial: ModeMonomial) -> Self {
        Self::term(monomial, CouplingPolynomial::one())
    }

    pub fn creation(mode: u16) -> Self {
        Self::monomial(ModeMonomial::single(mode, 1, 0))
    }

    pub fn annihilation(mode: u16) -> Self {
        Self::monomial(ModeMonomial::single(mode, 0, 1))
    }

    /// `a†_j a_j`.
    pub fn number(mode: u16) -> Self {
        Self::monomial(ModeMonomial::single(mode, 1, 1))
    }

    /// Normal-ordered `(a_j + a†_j)^n` with unit coefficient, built by
    /// repeated multiplication.
    pub fn quadrature_power(mode: u16, n: u32) -> Self {
        let x = &Self::creation(mode) + &Self::annihilation(mode);
        (0..n).fold(Self::identity(), |acc, _| &acc * &x)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModeMonomial, &CouplingPolynomial)> {
        self.terms.iter()
    }

    /// Coefficient of `monomial` (zero when absent).
    pub fn coefficient(&self, monomial: &ModeMonomial) -> CouplingPolynomial {
        self.terms.get(monomial).cloned().unwrap_or_default()
    }

    /// Highest operator degree present.
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Largest mode index referenced, if any.
    pub fn max_mode(&self) -> Option<u16> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|f| f.mode))
            .max()
    }

    fn add_term(&mut self, monomial: ModeMonomial, coefficient: CouplingPolynomial) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            Entry::Vacant(e) => {
                e.insert(coefficient);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &coefficient;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_term_scaled(&mut self, monomial: ModeMonomial, coefficient: &CouplingPolynomial, k: &BigRational) {
        match self.terms.entry(monomial) {
            Entry::Vacant(e) => {
                e.insert(coefficient.scale(k));
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_scaled(coefficient, k);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        OperatorPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(factor)))
                .collect(),
        }
    }

    /// Multiplies every coefficient by a coupling polynomial.
    pub fn scale_by(&self, factor: &CouplingPolynomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    /// Normal-ordered product `self · rhs`.
    pub fn multiply(&self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let coeff = ca * cb;
                for (k, m) in ma.product(mb) {
                    out.add_term_scaled(m, &coeff, &BigRational::from_integer(k));
                }
            }
        }
        out
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        // The fully uncontracted k = 0 products cancel pairwise; computing
        // both orders and subtracting keeps the code uniform.
        let mut out = OperatorPolynomial::zero();
        let minus_one = -BigRational::one();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let coeff = ca * cb;
                for (k, m) in ma.product(mb) {
                    out.add_term_scaled(m, &coeff, &BigRational::from_integer(k));
                }
                for (k, m) in mb.product(ma) {
                    out.add_term_scaled(m, &coeff, &(BigRational::from_integer(k) * &minus_one));
                }
            }
        }
        out
    }

    /// Hermitian conjugate; coefficients are real so only `(p, q)` swap.
    pub fn adjoint(&self) -> OperatorPolynomial {
        OperatorPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.adjoint(), c.clone()))
                .collect(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.adjoint() == -self
    }

    /// `(diagonal, off-diagonal)` with `self = diagonal + off-diagonal`.
    pub fn split_diagonal(&self) -> (OperatorPolynomial, OperatorPolynomial) {
        let (d, o): (BTreeMap<_, _>, BTreeMap<_, _>) = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .partition(|(m, _)| m.is_diagonal());
        (OperatorPolynomial { terms: d }, OperatorPolynomial { terms: o })
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|m| m.is_diagonal())
    }

    /// `⟨n|P|n⟩` for a diagonal `P` at occupation vector `n` (mode-indexed),
    /// using the falling factorial `n!/(n−k)!` for each `a†^k a^k`.
    pub fn diagonal_matrix_element(&self, occupation: &[u64]) -> Result<CouplingPolynomial> {
        let mut out = CouplingPolynomial::zero();
        for (m, c) in &self.terms {
            if !m.is_diagonal() {
                return Err(Error::NotDiagonal(m.to_string()));
            }
            let mut weight = BigInt::one();
            for f in m.factors() {
                let n = occupation.get(f.mode as usize).copied().unwrap_or(0);
                let k = f.creation as u64;
                if k > n {
                    weight = BigInt::zero();
                    break;
                }
                for i in 0..k {
                    weight *= n - i;
                }
            }
            if !weight.is_zero() {
                out.add_scaled(c, &BigRational::from_integer(weight));
            }
        }
        Ok(out)
    }

    /// Drops coefficient terms of φ-degree above `max_degree`.
    pub fn truncate_phi_degree(&self, max_degree: i32) -> OperatorPolynomial {
        let mut out = OperatorPolynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.truncate_phi_degree(max_degree));
        }
        out
    }

    /// Applies `f` to each coefficient, dropping any that become zero.
    pub fn map_coefficients(&self, mut f: impl FnMut(&CouplingPolynomial) -> CouplingPolynomial) -> Self {
        let mut out = OperatorPolynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

/// Assignment of a base frequency symbol to each mode. Two modes sharing a
/// base symbol are degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frequencies {
    bases: Vec<usize>,
}

impl Frequencies {
    /// Mode `j` rotates at its own symbol `ω_j`.
    pub fn distinct(modes: usize) -> Self {
        Frequencies {
            bases: (0..modes).collect(),
        }
    }

    pub fn single_mode() -> Self {
        Self::distinct(1)
    }

    /// Explicit mode → base-symbol map.
    pub fn from_bases(bases: Vec<usize>) -> Self {
        Frequencies { bases }
    }

    pub fn bases(&self) -> &[usize] {
        &self.bases
    }

    pub fn modes(&self) -> usize {
        self.bases.len()
    }

    fn base_of(&self, mode: u16) -> usize {
        self.bases
            .get(mode as usize)
            .copied()
            .unwrap_or(mode as usize)
    }

    /// Integer weights over base symbols of `Σ_j (p_j − q_j) ω_j`.
    pub fn rotation_weights(&self, m: &ModeMonomial) -> Vec<i64> {
        let mut w: Vec<i64> = Vec::new();
        for f in m.factors() {
            let b = self.base_of(f.mode);
            if w.len() <= b {
                w.resize(b + 1, 0);
            }
            w[b] += f.creation as i64 - f.annihilation as i64;
        }
        w
    }

    /// `Σ_j (p_j − q_j) ω_j` as a linear coupling polynomial.
    pub fn rotation_frequency(&self, m: &ModeMonomial) -> CouplingPolynomial {
        let mut out = CouplingPolynomial::zero();
        for (b, k) in self.rotation_weights(m).into_iter().enumerate() {
            if k != 0 {
                out += &CouplingPolynomial::frequency(b).scale(&BigRational::from_integer(k.into()));
            }
        }
        out
    }

    /// The rotation frequency of `m` as `k·combo`, a single monomial so that
    /// it cancels the `combo^{-1}` of [`Self::inverse_rotation`]; `None` when
    /// `m` does not rotate.
    pub(crate) fn rotation_factor(&self, m: &ModeMonomial) -> Option<CouplingPolynomial> {
        let (k, combo) = FrequencyCombination::primitive(&self.rotation_weights(m))?;
        Some(CouplingPolynomial::term(
            BigRational::from_integer(BigInt::from(k)),
            CouplingMonomial::frequency(combo, 1),
        ))
    }

    /// `1/Δ` for the rotation frequency `Δ` of `m`, as `(1/k)·combo^{-1}`.
    pub(crate) fn inverse_rotation(&self, m: &ModeMonomial) -> Result<CouplingPolynomial> {
        let weights = self.rotation_weights(m);
        let Some((k, combo)) = FrequencyCombination::primitive(&weights) else {
            return Err(if m.is_diagonal() {
                Error::ZeroFrequency(m.to_string())
            } else {
                Error::Resonance(m.to_string())
            });
        };
        Ok(CouplingPolynomial::term(
            BigRational::new(BigInt::one(), BigInt::from(k)),
            CouplingMonomial::frequency(combo, -1),
        ))
    }
}

/// Rotation frequency `Σ_j (p_j − q_j) ω_j` of `m` in the interaction picture.
pub fn rotation_frequency(m: &ModeMonomial, frequencies: &Frequencies) -> CouplingPolynomial {
    frequencies.rotation_frequency(m)
}

impl From<CouplingPolynomial> for OperatorPolynomial {
    fn from(c: CouplingPolynomial) -> Self {
        Self::scalar(c)
    }
}

impl Add for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn add(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn add(mut self, rhs: OperatorPolynomial) -> OperatorPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&OperatorPolynomial> for OperatorPolynomial {
    fn add_assign(&mut self, rhs: &OperatorPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&OperatorPolynomial> for OperatorPolynomial {
    fn sub_assign(&mut self, rhs: &OperatorPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Sub for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn sub(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn sub(mut self, rhs: OperatorPolynomial) -> OperatorPolynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn neg(self) -> OperatorPolynomial {
        OperatorPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn neg(self) -> OperatorPolynomial {
        -&self
    }
}

impl Mul for &OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn mul(self, rhs: &OperatorPolynomial) -> OperatorPolynomial {
        self.multiply(rhs)
    }
}

impl Mul for OperatorPolynomial {
    type Output = OperatorPolynomial;
    fn mul(self, rhs: OperatorPolynomial) -> OperatorPolynomial {
        self.multiply(&rhs)
    }
}

/// `(coefficient) * monomial` terms joined by ` + `, e.g.
/// `(-30*g3^2/w) * ad^2 a^2 + (-60*g3^2/w) * ad a`. Identity terms print
/// as the bare parenthesized coefficient.
impl fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m.is_identity() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) * {m}")?;
            }
        }
        Ok(())
    }
}
