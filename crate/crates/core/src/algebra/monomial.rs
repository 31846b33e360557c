use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// One mode's contribution `(a†_j)^creation (a_j)^annihilation`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeFactor {
    pub mode: u16,
    pub creation: u32,
    pub annihilation: u32,
}

/// Normal-ordered multimode string `∏_j (a†_j)^{p_j} (a_j)^{q_j}`.
///
/// Factors are sorted by mode and factors with `p_j = q_j = 0` are never
/// stored, so the derived ordering is lexicographic in `(mode, p, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeMonomial {
    factors: Vec<ModeFactor>,
}

impl ModeMonomial {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a monomial from `(mode, p, q)` triples. Repeated modes are
    /// rejected by panicking since they would not be normal ordered.
    pub fn new(factors: impl IntoIterator<Item = (u16, u32, u32)>) -> Self {
        let mut v: Vec<ModeFactor> = factors
            .into_iter()
            .filter(|&(_, p, q)| p + q > 0)
            .map(|(mode, creation, annihilation)| ModeFactor {
                mode,
                creation,
                annihilation,
            })
            .collect();
        v.sort();
        assert!(
            v.windows(2).all(|w| w[0].mode != w[1].mode),
            "mode listed twice in ModeMonomial::new"
        );
        ModeMonomial { factors: v }
    }

    /// Single-mode `(a†_mode)^p (a_mode)^q`.
    pub fn single(mode: u16, p: u32, q: u32) -> Self {
        Self::new([(mode, p, q)])
    }

    pub fn factors(&self) -> &[ModeFactor] {
        &self.factors
    }

    /// `(p_j, q_j)` for `mode`, zero when absent.
    pub fn powers(&self, mode: u16) -> (u32, u32) {
        self.factors
            .iter()
            .find(|f| f.mode == mode)
            .map_or((0, 0), |f| (f.creation, f.annihilation))
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// `p_j = q_j` for every mode.
    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|f| f.creation == f.annihilation)
    }

    /// `p_j − q_j`.
    pub fn net_excitation(&self, mode: u16) -> i64 {
        let (p, q) = self.powers(mode);
        p as i64 - q as i64
    }

    /// Total operator count `Σ_j p_j + q_j`.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.creation + f.annihilation).sum()
    }

    pub fn adjoint(&self) -> Self {
        ModeMonomial {
            factors: self
                .factors
                .iter()
                .map(|f| ModeFactor {
                    mode: f.mode,
                    creation: f.annihilation,
                    annihilation: f.creation,
                })
                .collect(),
        }
    }

    /// Normal-ordered expansion of `self · rhs` as integer-weighted monomials.
    pub fn product(&self, rhs: &ModeMonomial) -> Vec<(BigInt, ModeMonomial)> {
        let mut acc: Vec<(BigInt, Vec<ModeFactor>)> = vec![(BigInt::one(), Vec::new())];
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &rhs.factors);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].mode < b[j].mode);
            let take_b = i >= a.len() || (j < b.len() && b[j].mode < a[i].mode);
            if take_a {
                acc.iter_mut().for_each(|(_, f)| f.push(a[i]));
                i += 1;
            } else if take_b {
                acc.iter_mut().for_each(|(_, f)| f.push(b[j]));
                j += 1;
            } else {
                let (fa, fb) = (a[i], b[j]);
                let expansion = wick_single_mode(
                    fa.creation,
                    fa.annihilation,
                    fb.creation,
                    fb.annihilation,
                );
                let mut next = Vec::with_capacity(acc.len() * expansion.len());
                for (c, f) in &acc {
                    for (k, p, q) in &expansion {
                        let mut f2 = f.clone();
                        if p + q > 0 {
                            f2.push(ModeFactor {
                                mode: fa.mode,
                                creation: *p,
                                annihilation: *q,
                            });
                        }
                        next.push((c * k, f2));
                    }
                }
                acc = next;
                i += 1;
                j += 1;
            }
        }
        acc.into_iter()
            .map(|(c, factors)| (c, ModeMonomial { factors }))
            .collect()
    }
}

/// `a†^p a^q · a†^r a^s = Σ_k k!·C(q,k)·C(r,k) · a†^{p+r−k} a^{q+s−k}`.
pub(crate) fn wick_single_mode(p: u32, q: u32, r: u32, s: u32) -> Vec<(BigInt, u32, u32)> {
    let kmax = q.min(r);
    let mut out = Vec::with_capacity(kmax as usize + 1);
    // k!·C(q,k)·C(r,k) = q!/(q−k)! · C(r,k); accumulate both factors incrementally.
    let mut falling = BigInt::one();
    let mut binom = BigInt::one();
    for k in 0..=kmax {
        if k > 0 {
            falling *= q - k + 1;
            binom = binom * (r - k + 1) / k;
        }
        out.push((&falling * &binom, p + r - k, q + s - k));
    }
    out
}

pub(crate) fn mode_names(mode: u16) -> (String, String) {
    if mode == 0 {
        ("ad".into(), "a".into())
    } else {
        (format!("ad{mode}"), format!("a{mode}"))
    }
}

impl fmt::Display for ModeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        for fac in &self.factors {
            let (cr, an) = mode_names(fac.mode);
            for (name, e) in [(cr, fac.creation), (an, fac.annihilation)] {
                match e {
                    0 => {}
                    1 => parts.push(name),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
        }
        f.write_str(&parts.join(" "))
    }
}
