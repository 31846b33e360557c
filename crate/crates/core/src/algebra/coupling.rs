//! Exact coupling coefficients: multivariate polynomials with rational
//! scalars in the coupling constants `g_n`, free named parameters, and
//! integer (possibly negative) powers of mode-frequency combinations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for an exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A coupling symbol. `Coupling(n)` is the nonlinear coupling `g_n` of the
/// `(a + a†)^n` term; `Named` is any other scalar parameter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Coupling(u32),
    Named(String),
}

impl Symbol {
    pub fn named(name: impl Into<String>) -> Self {
        Symbol::Named(name.into())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Coupling(n) => write!(f, "g{n}"),
            Symbol::Named(s) => f.write_str(s),
        }
    }
}

/// Integer linear combination `Σ_b k_b ω_b` of base frequency symbols,
/// stored primitive: trailing zeros trimmed, gcd of the entries is one and
/// the first nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrequencyCombination(Vec<i64>);

impl FrequencyCombination {
    /// The single base frequency `ω_b`.
    pub fn base(b: usize) -> Self {
        let mut v = vec![0; b + 1];
        v[b] = 1;
        FrequencyCombination(v)
    }

    /// Splits an arbitrary integer vector into `scale · primitive`.
    /// Returns `None` for the zero vector.
    pub fn primitive(weights: &[i64]) -> Option<(i64, Self)> {
        let mut v: Vec<i64> = weights.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        let first = *v.iter().find(|&&k| k != 0)?;
        let mut g = v.iter().fold(0i64, |acc, &k| acc.gcd(&k));
        if first < 0 {
            g = -g;
        }
        v.iter_mut().for_each(|k| *k /= g);
        Some((g, FrequencyCombination(v)))
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    /// Index of the base frequency when this combination is a single `ω_b`.
    pub fn as_base(&self) -> Option<usize> {
        let nz: Vec<_> = self.0.iter().enumerate().filter(|(_, &k)| k != 0).collect();
        match nz.as_slice() {
            [(b, &1)] => Some(*b),
            _ => None,
        }
    }

    fn evaluate(&self, params: &Params) -> Result<f64> {
        let mut acc = 0.0;
        for (b, &k) in self.0.iter().enumerate() {
            if k != 0 {
                let w = params
                    .frequencies
                    .get(b)
                    .copied()
                    .flatten()
                    .ok_or_else(|| Error::UnresolvedSymbol(base_name(b)))?;
                acc += k as f64 * w;
            }
        }
        Ok(acc)
    }
}

pub(crate) fn base_name(b: usize) -> String {
    if b == 0 {
        "w".to_string()
    } else {
        format!("w{b}")
    }
}

impl fmt::Display for FrequencyCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = self.as_base() {
            return f.write_str(&base_name(b));
        }
        f.write_str("(")?;
        let mut first = true;
        for (b, &k) in self.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let sign = if k < 0 { "-" } else if first { "" } else { "+" };
            let mag = k.abs();
            if mag == 1 {
                write!(f, "{sign}{}", base_name(b))?;
            } else {
                write!(f, "{sign}{mag}*{}", base_name(b))?;
            }
            first = false;
        }
        f.write_str(")")
    }
}

/// Numeric values for symbols and base frequencies.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    symbols: BTreeMap<Symbol, f64>,
    frequencies: Vec<Option<f64>>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Single-mode parameters: `ω` plus `(n, g_n)` couplings.
    pub fn single_mode(omega: f64, couplings: &[(u32, f64)]) -> Self {
        let mut p = Params::new().with_frequency(0, omega);
        for &(n, g) in couplings {
            p = p.with_coupling(n, g);
        }
        p
    }

    pub fn with_frequency(mut self, base: usize, value: f64) -> Self {
        self.set_frequency(base, value);
        self
    }

    pub fn with_coupling(mut self, n: u32, value: f64) -> Self {
        self.symbols.insert(Symbol::Coupling(n), value);
        self
    }

    pub fn with_symbol(mut self, symbol: Symbol, value: f64) -> Self {
        self.symbols.insert(symbol, value);
        self
    }

    pub fn set_frequency(&mut self, base: usize, value: f64) {
        if self.frequencies.len() <= base {
            self.frequencies.resize(base + 1, None);
        }
        self.frequencies[base] = Some(value);
    }

    pub fn set_symbol(&mut self, symbol: Symbol, value: f64) {
        self.symbols.insert(symbol, value);
    }

    pub fn symbol(&self, symbol: &Symbol) -> Option<f64> {
        self.symbols.get(symbol).copied()
    }

    pub fn frequency(&self, base: usize) -> Option<f64> {
        self.frequencies.get(base).copied().flatten()
    }
}

/// Product of symbol powers and frequency-combination powers, without scalar.
///
/// Ordered by net inverse-frequency power first, so polynomials print as
/// `a + b/w + c/w^2 + ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CouplingMonomial {
    symbols: BTreeMap<Symbol, u32>,
    frequencies: BTreeMap<FrequencyCombination, i32>,
}

impl CouplingMonomial {
    fn inverse_frequency_power(&self) -> i32 {
        -self.frequencies.values().sum::<i32>()
    }
}

impl Ord for CouplingMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.inverse_frequency_power()
            .cmp(&other.inverse_frequency_power())
            .then_with(|| self.symbols.cmp(&other.symbols))
            .then_with(|| self.frequencies.cmp(&other.frequencies))
    }
}

impl PartialOrd for CouplingMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl CouplingMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn symbol(symbol: Symbol, exp: u32) -> Self {
        let mut m = Self::one();
        if exp > 0 {
            m.symbols.insert(symbol, exp);
        }
        m
    }

    pub fn frequency(combo: FrequencyCombination, exp: i32) -> Self {
        let mut m = Self::one();
        if exp != 0 {
            m.frequencies.insert(combo, exp);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.symbols.is_empty() && self.frequencies.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Symbol, u32)> {
        self.symbols.iter().map(|(s, &e)| (s, e))
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (&FrequencyCombination, i32)> {
        self.frequencies.iter().map(|(c, &e)| (c, e))
    }

    pub fn exponent(&self, symbol: &Symbol) -> u32 {
        self.symbols.get(symbol).copied().unwrap_or(0)
    }

    pub fn frequency_exponent(&self, combo: &FrequencyCombination) -> i32 {
        self.frequencies.get(combo).copied().unwrap_or(0)
    }

    /// Copy of `self` with `symbol` removed.
    pub fn without(&self, symbol: &Symbol) -> Self {
        let mut m = self.clone();
        m.symbols.remove(symbol);
        m
    }

    /// Degree in the zero-point phase fluctuation under the bookkeeping
    /// `g_n ~ φ^n`, `ω ~ φ²`. `None` when a named symbol has no assigned degree.
    pub fn phi_degree(&self) -> Option<i32> {
        let mut d = 0i32;
        for (s, &e) in &self.symbols {
            match s {
                Symbol::Coupling(n) => d += (*n as i32) * e as i32,
                Symbol::Named(_) => return None,
            }
        }
        for &e in self.frequencies.values() {
            d += 2 * e;
        }
        Some(d)
    }

    pub fn evaluate(&self, params: &Params) -> Result<f64> {
        let mut acc = 1.0;
        for (s, &e) in &self.symbols {
            let v = params
                .symbol(s)
                .ok_or_else(|| Error::UnresolvedSymbol(s.to_string()))?;
            acc *= v.powi(e as i32);
        }
        for (c, &e) in &self.frequencies {
            acc *= c.evaluate(params)?.powi(e);
        }
        Ok(acc)
    }
}

impl Mul for &CouplingMonomial {
    type Output = CouplingMonomial;

    fn mul(self, rhs: &CouplingMonomial) -> CouplingMonomial {
        let mut out = self.clone();
        for (s, &e) in &rhs.symbols {
            *out.symbols.entry(s.clone()).or_insert(0) += e;
        }
        for (c, &e) in &rhs.frequencies {
            let slot = out.frequencies.entry(c.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                out.frequencies.remove(c);
            }
        }
        out
    }
}

/// Exact polynomial over [`CouplingMonomial`]s with rational scalars.
/// Zero scalars are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CouplingPolynomial {
    terms: BTreeMap<CouplingMonomial, BigRational>,
}

impl CouplingPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(value: BigRational) -> Self {
        Self::term(value, CouplingMonomial::one())
    }

    pub fn integer(value: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn term(scalar: BigRational, monomial: CouplingMonomial) -> Self {
        let mut p = Self::zero();
        if !scalar.is_zero() {
            p.terms.insert(monomial, scalar);
        }
        p
    }

    pub fn symbol(symbol: Symbol) -> Self {
        Self::term(BigRational::one(), CouplingMonomial::symbol(symbol, 1))
    }

    /// `g_n`.
    pub fn coupling(n: u32) -> Self {
        Self::symbol(Symbol::Coupling(n))
    }

    /// Base frequency `ω_b`.
    pub fn frequency(base: usize) -> Self {
        Self::term(
            BigRational::one(),
            CouplingMonomial::frequency(FrequencyCombination::base(base), 1),
        )
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

    pub fn terms(&self) -> impl Iterator<Item = (&CouplingMonomial, &BigRational)> {
        self.terms.iter()
    }

    /// The scalar when this polynomial has no symbolic dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    /// The single `(scalar, monomial)` pair when there is exactly one term.
    pub fn as_single_term(&self) -> Option<(&BigRational, &CouplingMonomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// Multiplicative inverse when it stays inside the ring: a nonzero
    /// rational, a monomial in frequency combinations only, or an integer
    /// combination of base frequencies `Σ k_b ω_b`.
    pub fn reciprocal(&self) -> Option<Self> {
        if let Some(k) = self.as_constant() {
            return (!k.is_zero()).then(|| Self::constant(k.recip()));
        }
        if let Some((k, m)) = self.as_single_term() {
            if m.symbols.is_empty() {
                let inv = CouplingMonomial {
                    symbols: BTreeMap::new(),
                    frequencies: m.frequencies.iter().map(|(c, &e)| (c.clone(), -e)).collect(),
                };
                return Some(Self::term(k.recip(), inv));
            }
        }
        let mut weights: Vec<i64> = Vec::new();
        for (m, k) in &self.terms {
            if !m.symbols.is_empty() || !k.is_integer() || m.frequencies.len() != 1 {
                return None;
            }
            let (combo, &e) = m.frequencies.iter().next()?;
            let b = combo.as_base().filter(|_| e == 1)?;
            if weights.len() <= b {
                weights.resize(b + 1, 0);
            }
            weights[b] += k.to_integer().to_i64()?;
        }
        let (scale, combo) = FrequencyCombination::primitive(&weights)?;
        Some(Self::term(
            BigRational::new(BigInt::one(), BigInt::from(scale)),
            CouplingMonomial::frequency(combo, -1),
        ))
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        CouplingPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, monomial: &CouplingMonomial) -> Self {
        CouplingPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m * monomial, c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, monomial: CouplingMonomial, scalar: BigRational) {
        if scalar.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(scalar);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += scalar;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &CouplingPolynomial, factor: &BigRational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    /// Sum of the terms in which `symbol` appears with exactly `exp`,
    /// with `symbol` stripped from them.
    pub fn coefficient_of(&self, symbol: &Symbol, exp: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.exponent(symbol) == exp {
                out.add_term(m.without(symbol), c.clone());
            }
        }
        out
    }

    /// Highest power of `symbol` among the terms.
    pub fn degree_in(&self, symbol: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(symbol)).max().unwrap_or(0)
    }

    /// Keeps only terms whose φ-degree is at most `max_degree`. Terms with
    /// named symbols are kept.
    pub fn truncate_phi_degree(&self, max_degree: i32) -> Self {
        CouplingPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.phi_degree().is_none_or(|d| d <= max_degree))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest φ-degree among terms (named symbols ignored).
    pub fn max_phi_degree(&self) -> Option<i32> {
        self.terms.keys().filter_map(|m| m.phi_degree()).max()
    }

    /// Evaluates with exact arithmetic kept until each term's scalar is
    /// converted to `f64`.
    pub fn evaluate(&self, params: &Params) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += rational_to_f64(c) * m.evaluate(params)?;
        }
        Ok(acc)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: fall back to scaled division.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl From<BigRational> for CouplingPolynomial {
    fn from(value: BigRational) -> Self {
        Self::constant(value)
    }
}

impl From<i64> for CouplingPolynomial {
    fn from(value: i64) -> Self {
        Self::integer(value)
    }
}

impl Add for &CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn add(self, rhs: &CouplingPolynomial) -> CouplingPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn add(mut self, rhs: CouplingPolynomial) -> CouplingPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&CouplingPolynomial> for CouplingPolynomial {
    fn add_assign(&mut self, rhs: &CouplingPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&CouplingPolynomial> for CouplingPolynomial {
    fn sub_assign(&mut self, rhs: &CouplingPolynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Sub for &CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn sub(self, rhs: &CouplingPolynomial) -> CouplingPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn sub(mut self, rhs: CouplingPolynomial) -> CouplingPolynomial {
        self -= &rhs;
        self
    }
}

impl Neg for &CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn neg(self) -> CouplingPolynomial {
        CouplingPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn neg(self) -> CouplingPolynomial {
        -&self
    }
}

impl Mul for &CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn mul(self, rhs: &CouplingPolynomial) -> CouplingPolynomial {
        let mut out = CouplingPolynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma * mb, ca * cb);
            }
        }
        out
    }
}

impl Mul for CouplingPolynomial {
    type Output = CouplingPolynomial;
    fn mul(self, rhs: CouplingPolynomial) -> CouplingPolynomial {
        &self * &rhs
    }
}

fn write_power(out: &mut String, base: &str, exp: u32) {
    out.push_str(base);
    if exp > 1 {
        out.push('^');
        out.push_str(&exp.to_string());
    }
}

/// Renders `|scalar| · monomial` without sign, e.g. `30*g3^2/w`, `g3/(3*w)`.
fn render_unsigned(scalar: &BigRational, m: &CouplingMonomial) -> String {
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    let numer = scalar.numer().abs();
    let denom = scalar.denom().clone();
    let has_num_symbols =
        !m.symbols.is_empty() || m.frequencies.values().any(|&e| e > 0);
    if !numer.is_one() || !has_num_symbols {
        num.push(numer.to_string());
    }
    for (s, &e) in &m.symbols {
        let mut f = String::new();
        write_power(&mut f, &s.to_string(), e);
        num.push(f);
    }
    if !denom.is_one() {
        den.push(denom.to_string());
    }
    for (c, &e) in &m.frequencies {
        let mut f = String::new();
        write_power(&mut f, &c.to_string(), e.unsigned_abs());
        if e > 0 {
            num.push(f);
        } else {
            den.push(f);
        }
    }
    let mut out = num.join("*");
    match den.len() {
        0 => {}
        1 => {
            out.push('/');
            out.push_str(&den[0]);
        }
        _ => {
            out.push_str("/(");
            out.push_str(&den.join("*"));
            out.push(')');
        }
    }
    out
}

impl fmt::Display for CouplingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = render_unsigned(c, m);
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32) -> CouplingPolynomial {
        CouplingPolynomial::coupling(n)
    }

    fn w_inv() -> CouplingMonomial {
        CouplingMonomial::frequency(FrequencyCombination::base(0), -1)
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = &g(3) - &g(3);
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn identical_signatures_merge() {
        let p = &g(3) + &g(3);
        assert_eq!(p.len(), 1);
        assert_eq!(p.to_string(), "2*g3");
    }

    #[test]
    fn frequency_powers_cancel() {
        let w = CouplingPolynomial::frequency(0);
        let p = w.mul_monomial(&w_inv());
        assert_eq!(p, CouplingPolynomial::one());
    }

    #[test]
    fn rendering_grammar() {
        let p = (&g(3) * &g(3)).mul_monomial(&w_inv()).scale(&ratio(-30, 1));
        assert_eq!(p.to_string(), "-30*g3^2/w");
        let q = g(3).mul_monomial(&w_inv()).scale(&ratio(1, 3));
        assert_eq!(q.to_string(), "g3/(3*w)");
        let r = &g(4).scale(&ratio(12, 1)) + &p.scale(&ratio(2, 1));
        assert_eq!(r.to_string(), "12*g4 - 60*g3^2/w");
        assert_eq!(CouplingPolynomial::integer(-2).to_string(), "-2");
    }

    #[test]
    fn frequency_combination_is_primitive() {
        let (k, c) = FrequencyCombination::primitive(&[-2, 2, 0]).unwrap();
        assert_eq!(k, -2);
        assert_eq!(c.weights(), &[1, -1]);
        assert_eq!(c.to_string(), "(w-w1)");
        let (k, c) = FrequencyCombination::primitive(&[0, 3]).unwrap();
        assert_eq!((k, c.as_base()), (3, Some(1)));
        assert!(FrequencyCombination::primitive(&[0, 0]).is_none());
    }

    #[test]
    fn phi_degree_bookkeeping() {
        let m = (&(&g(3) * &g(3)) * &g(4)).mul_monomial(&CouplingMonomial::frequency(
            FrequencyCombination::base(0),
            -2,
        ));
        assert_eq!(m.max_phi_degree(), Some(6));
        assert!(m.truncate_phi_degree(5).is_zero());
    }

    #[test]
    fn evaluation_and_unresolved_symbol() {
        let p = (&g(3) * &g(3)).mul_monomial(&w_inv()).scale(&ratio(5, 1));
        let params = Params::single_mode(4.0, &[(3, 2.0)]);
        assert_eq!(p.evaluate(&params).unwrap(), 5.0);
        let err = g(4).evaluate(&params).unwrap_err();
        assert_eq!(err, Error::UnresolvedSymbol("g4".into()));
        let err = p.evaluate(&Params::new().with_coupling(3, 1.0)).unwrap_err();
        assert_eq!(err, Error::UnresolvedSymbol("w".into()));
    }

    #[test]
    fn coefficient_extraction() {
        let p = &g(4).scale(&ratio(6, 1)) + &(&g(3) * &g(3)).mul_monomial(&w_inv()).scale(&ratio(-30, 1));
        let g4 = Symbol::Coupling(4);
        assert_eq!(p.coefficient_of(&g4, 1), CouplingPolynomial::integer(6));
        assert_eq!(p.coefficient_of(&g4, 0).to_string(), "-30*g3^2/w");
        assert_eq!(p.degree_in(&g4), 1);
    }
}
