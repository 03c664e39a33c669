use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Exps = SmallVec<[u32; 8]>;

/// A power product `x_1^{a_1} ... x_n^{a_n}` with cached total degree.
///
/// Exponents are `u32`; every operation that could leave that range reports
/// a limit error instead of wrapping.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
    degree: u64,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
            degree: 0,
        }
    }

    pub fn new(exps: &[u32]) -> Self {
        Monomial {
            degree: exps.iter().map(|&e| e as u64).sum(),
            exps: Exps::from_slice(exps),
        }
    }

    pub(crate) fn from_exps(exps: Exps) -> Self {
        Monomial {
            degree: exps.iter().map(|&e| e as u64).sum(),
            exps,
        }
    }

    pub fn var(nvars: usize, i: usize, power: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = power;
        m.degree = power as u64;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut exps = Exps::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(
                a.checked_add(*b)
                    .ok_or_else(|| Error::limit("monomial exponent overflow"))?,
            );
        }
        Ok(Monomial {
            exps,
            degree: self.degree + other.degree,
        })
    }

    /// Product without overflow checks; callers guarantee the degree cap.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let exps: Exps = other.exps.iter().zip(self.exps.iter()).map(|(b, a)| b - a).collect();
        Some(Monomial {
            exps,
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::from_exps(exps)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u64) -> Result<Monomial> {
        let mut exps = Exps::with_capacity(self.exps.len());
        for &a in &self.exps {
            let v = (a as u64)
                .checked_mul(k)
                .filter(|v| *v <= u32::MAX as u64)
                .ok_or_else(|| Error::limit("monomial exponent overflow"))?;
            exps.push(v as u32);
        }
        Ok(Monomial::from_exps(exps))
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// Bitmask of the support (first 64 variables).
    #[inline]
    pub(crate) fn support_mask(&self) -> u64 {
        let mut mask = 0u64;
        for (i, &e) in self.exps.iter().enumerate().take(64) {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// Admissible monomial orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, `x_1 > x_2 > ... > x_n`.
    #[default]
    Grevlex,
    /// Pure lexicographic, `x_1 > x_2 > ... > x_n`.
    Lex,
    /// Elimination order for the first `k` variables: the two blocks are
    /// compared lexicographically, each by grevlex.
    Block(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => a.degree.cmp(&b.degree).then_with(|| grevlex_tail(&a.exps, &b.exps)),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Block(k) => {
                let k = k.min(a.exps.len());
                let (a1, a2) = a.exps.split_at(k);
                let (b1, b2) = b.exps.split_at(k);
                grevlex_slice(a1, b1).then_with(|| grevlex_slice(a2, b2))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Grevlex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block(k) => format!("block:{k}"),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            other => match other.strip_prefix("block:").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Ok(MonomialOrder::Block(k)),
                _ => Err(Error::input(format!("unknown monomial order '{other}'"))),
            },
        }
    }

    /// Whether the order compares total degree first.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::Grevlex)
    }
}

fn grevlex_slice(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| grevlex_tail(a, b))
}

// equal degrees: the smaller exponent in the last differing variable wins
#[inline]
fn grevlex_tail(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}
