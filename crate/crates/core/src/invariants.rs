//! Numerical invariants of `R = S/J` over `F_q`: Hilbert-Kunz lengths,
//! Hilbert-Samuel multiplicity, Frobenius splitting numbers, the `ν_e`
//! sequence of a polynomial and convergence diagnostics.
//!
//! All lengths are `F_q`-dimensions of quotients by `m`-primary ideals, with
//! `m = (x_1, ..., x_n)`; these agree with lengths over the completion.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::fedder_chain_colength;
use crate::groebner::Ideal;
use crate::poly::Polynomial;
use crate::ring::{ensure_same, Ring};

pub type Rational = Ratio<i128>;

/// `R = S/J` with `m` the ideal of all variables.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    defining: Ideal,
    dim: usize,
}

impl QuotientPresentation {
    pub fn new(defining: Ideal) -> Result<Self> {
        if !defining.is_in_maximal() {
            return Err(Error::input("defining ideal is not contained in (x_1, ..., x_n)"));
        }
        let dim = defining.krull_dim()?;
        Ok(QuotientPresentation { defining, dim })
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<Self> {
        QuotientPresentation::new(Ideal::parse(ring, gens)?)
    }

    /// The polynomial ring itself, `J = 0`.
    pub fn regular(ring: &Ring) -> Self {
        QuotientPresentation {
            defining: Ideal::zero(ring),
            dim: ring.nvars(),
        }
    }

    pub fn ring(&self) -> &Ring {
        self.defining.ring()
    }

    pub fn defining(&self) -> &Ideal {
        &self.defining
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.ring().field().p()
    }

    /// `S/(J + (fs))`.
    pub fn quotient_by(&self, fs: &[Polynomial]) -> Result<Self> {
        QuotientPresentation::new(self.defining.with_generators(fs.iter().cloned())?)
    }

    /// `J = (f)` for a single nonzero generator, if the presentation is
    /// principal as given.
    pub fn principal_generator(&self) -> Option<&Polynomial> {
        match self.defining.generators() {
            [f] => Some(f),
            _ => None,
        }
    }
}

pub(crate) fn pow_u64(base: u64, exp: u64) -> Result<u64> {
    let exp = u32::try_from(exp).map_err(|_| Error::limit("exponent out of range"))?;
    base.checked_pow(exp)
        .ok_or_else(|| Error::limit(format!("{base}^{exp} exceeds 64 bits")))
}

fn rational(num: u64, den: u64) -> Rational {
    Rational::new(num as i128, den as i128)
}

/// `dim S/I` for `I ⊇ m^[q]`; non-homogeneous ideals go through the local
/// order truncated at `m^{n(q-1)+1} ⊆ m^[q]`.
fn box_quotient_length(i: &Ideal, q: u64) -> Result<u64> {
    if i.is_homogeneous() {
        return quotient_length(i);
    }
    let n = i.ring().nvars() as u64;
    i.local_colength(n * (q - 1) + 1)
}

/// `dim S/I`, with the unit ideal having length 0.
fn quotient_length(i: &Ideal) -> Result<u64> {
    if i.is_unit()? {
        return Ok(0);
    }
    i.colength()
}

/// `(f_1, ..., f_k)` is a parameter sequence on `R`: each element drops the
/// dimension by one.
pub fn parameter_check(r: &QuotientPresentation, fs: &[Polynomial]) -> Result<bool> {
    for f in fs {
        ensure_same(r.ring(), f.ring())?;
        if !f.constant_term().is_zero() {
            return Err(Error::input(format!("{f} is a unit of the local ring")));
        }
    }
    let mut dim = r.dim();
    let mut ideal = r.defining().clone();
    for f in fs {
        ideal = ideal.with_generators([f.clone()])?;
        let next = ideal.krull_dim()?;
        if next + 1 != dim {
            return Ok(false);
        }
        dim = next;
    }
    Ok(true)
}

/// `ℓ(R/m^[p^e]) = dim S/(J + m^[p^e])`.
pub fn hk_length(r: &QuotientPresentation, e: u32) -> Result<u64> {
    let box_ideal = Ideal::maximal_frobenius(r.ring(), e)?;
    let q = pow_u64(r.p() as u64, e as u64)?;
    box_quotient_length(&r.defining().sum(&box_ideal)?, q)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkRow {
    pub e: u32,
    pub q: u64,
    pub length: u64,
    /// `length / q^d`
    pub normalized: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkSeries {
    pub p: u32,
    pub d: usize,
    pub rows: Vec<HkRow>,
}

/// Hilbert-Kunz lengths for `e = 1, ..., e_max`.
pub fn hk_series(r: &QuotientPresentation, e_max: u32) -> Result<HkSeries> {
    if e_max == 0 {
        return Err(Error::input("e_max must be at least 1"));
    }
    let p = r.p();
    let d = r.dim();
    let rows = (1..=e_max)
        .into_par_iter()
        .map(|e| {
            let q = pow_u64(p as u64, e as u64)?;
            let length = hk_length(r, e)?;
            let qd = pow_u64(q, d as u64)?;
            Ok(HkRow {
                e,
                q,
                length,
                normalized: rational(length, qd),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HkSeries { p, d, rows })
}

/// A limit estimate with its spread between the last two extrapolations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Estimate {
    pub value: Rational,
    pub spread: Rational,
    /// Only one extrapolation was available, so `spread` carries no
    /// information.
    pub single_step: bool,
}

impl Estimate {
    pub fn to_f64(r: &Rational) -> f64 {
        *r.numer() as f64 / *r.denom() as f64
    }
}

/// One Richardson step on `f_e` with error model `C p^{-e}`:
/// `est_e = (p f_{e+1} - f_e) / (p - 1)`.
pub fn richardson(p: u32, values: &[Rational]) -> Result<Estimate> {
    if values.len() < 2 {
        return Err(Error::input("at least two rows are needed for an estimate"));
    }
    let p = Rational::from_integer(p as i128);
    let one = Rational::from_integer(1);
    let ests: Vec<Rational> = values.windows(2).map(|w| (p * w[1] - w[0]) / (p - one)).collect();
    let value = *ests.last().expect("nonempty");
    let (spread, single_step) = match ests.len() {
        1 => (Rational::zero(), true),
        k => ((ests[k - 1] - ests[k - 2]).abs(), false),
    };
    Ok(Estimate {
        value,
        spread,
        single_step,
    })
}

pub fn ehk_estimate(series: &HkSeries) -> Result<Estimate> {
    let vals: Vec<Rational> = series.rows.iter().map(|r| r.normalized).collect();
    richardson(series.p, &vals)
}

/// Hilbert-Samuel multiplicity from `ℓ(s) = dim S/(J + m^s)` by `d`-th
/// finite differences, accepted once three consecutive differences agree.
pub fn hs_multiplicity(r: &QuotientPresentation) -> Result<u64> {
    const MAX_S: u64 = 60;
    let d = r.dim();
    let j = r.defining();
    let lengths: Box<dyn Fn(u64) -> Result<u64> + Sync> = if j.is_homogeneous() {
        // for homogeneous J, ℓ(s) sums the Hilbert function of S/J below s
        let hf = if j.is_zero() {
            crate::groebner::Staircase::new(r.ring().nvars(), []).hilbert_function(MAX_S)
        } else {
            j.grevlex()?.staircase().hilbert_function(MAX_S)
        };
        let mut partial = Vec::with_capacity(hf.len() + 1);
        let mut acc: u128 = 0;
        partial.push(0u128);
        for v in hf {
            acc += v;
            partial.push(acc);
        }
        Box::new(move |s| u64::try_from(partial[s as usize]).map_err(|_| Error::limit("length exceeds 64 bits")))
    } else {
        Box::new(|s| {
            let ms = Ideal::maximal_power(r.ring(), s as u32)?;
            j.sum(&ms)?.colength()
        })
    };
    let mut ell: Vec<i128> = Vec::new();
    let mut diffs: Vec<i128> = Vec::new();
    for s in 1..=MAX_S {
        ell.push(lengths(s)? as i128);
        if ell.len() > d {
            let k = ell.len() - 1;
            let mut delta: i128 = 0;
            let mut binom: i128 = 1;
            for i in 0..=d {
                let term = binom * ell[k - i];
                delta += if i % 2 == 0 { term } else { -term };
                binom = binom * (d - i) as i128 / (i + 1) as i128;
            }
            diffs.push(delta);
            if let [.., a, b, c] = diffs[..] {
                if a == b && b == c {
                    return u64::try_from(c).map_err(|_| Error::invariant("negative multiplicity"));
                }
            }
        }
    }
    Err(Error::limit(format!(
        "Hilbert-Samuel differences did not stabilize by s = {MAX_S}"
    )))
}

/// `f^{q-1}` truncated to the box `[0, q)^n`, as the product of the Frobenius
/// twists of `f^{p-1}`.
pub(crate) fn power_q_minus_one_in_box(f: &Polynomial, e: u32) -> Result<Polynomial> {
    let p = f.field().p() as u64;
    let q = pow_u64(p, e as u64)?;
    let q32 = u32::try_from(q).map_err(|_| Error::limit("p^e exceeds the exponent range"))?;
    let bounds = vec![q32; f.ring().nvars()];
    let base = f.truncate(&bounds).pow_truncated(p - 1, &bounds)?;
    let mut acc = base.clone();
    for i in 1..e {
        let twist = base.frobenius_pow(i)?.truncate(&bounds);
        if twist.is_zero() {
            return Ok(twist);
        }
        acc = acc.mul_truncated(&twist, &bounds)?;
    }
    Ok(acc)
}

/// Which colon computation [`splitting_number_with`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColonMethod {
    /// [`ColonMethod::Chain`] for principal `J`, the general colon otherwise.
    Auto,
    /// Always compute `J^[q] : J` by intersections.
    General,
    /// Principal `J = (f)` only: `(f^q) : (f) = (f^{q-1})` and the box
    /// quotient of that single generator.
    Principal,
    /// Principal `J = (f)` only: `a_e = dim S/(m^[q] : f^{q-1})` through
    /// `I_k = I_{k-1}^[p] : f^{p-1}`, each colon a module basis in a
    /// truncated local order.
    Chain,
}

/// `a_e(S/J) = q^n - dim S/((J^[q] : J) + m^[q])`.
pub fn splitting_number(r: &QuotientPresentation, e: u32) -> Result<u64> {
    splitting_number_with(r, e, ColonMethod::Auto)
}

pub fn splitting_number_with(r: &QuotientPresentation, e: u32, method: ColonMethod) -> Result<u64> {
    let n = r.ring().nvars() as u64;
    let p = r.p() as u64;
    let total = pow_u64(p, e as u64 * n)?;
    let j = r.defining();
    if j.is_zero() {
        return Ok(total);
    }
    let principal = r.principal_generator();
    if matches!(method, ColonMethod::Chain | ColonMethod::Principal) && principal.is_none() {
        return Err(Error::input("this colon method needs a principal defining ideal"));
    }
    if let (ColonMethod::Auto | ColonMethod::Chain, Some(f)) = (method, principal) {
        return fedder_chain_colength(f, e);
    }
    let box_ideal = Ideal::maximal_frobenius(r.ring(), e)?;
    let colon = match (method, principal) {
        (ColonMethod::Principal, Some(f)) => {
            let big = power_q_minus_one_in_box(f, e)?;
            Ideal::new(r.ring(), vec![big])?
        }
        _ => j.frobenius_power(e)?.colon(j)?,
    };
    let q = pow_u64(p, e as u64)?;
    let len = box_quotient_length(&colon.sum(&box_ideal)?, q)?;
    Ok(total - len)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingRow {
    pub e: u32,
    pub q: u64,
    pub a_e: u64,
    /// `a_e / q^d`
    pub normalized: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingSeries {
    pub p: u32,
    pub d: usize,
    pub rows: Vec<SplittingRow>,
}

pub fn splitting_series(r: &QuotientPresentation, e_max: u32) -> Result<SplittingSeries> {
    if e_max == 0 {
        return Err(Error::input("e_max must be at least 1"));
    }
    let p = r.p();
    let d = r.dim();
    let rows = (1..=e_max)
        .into_par_iter()
        .map(|e| {
            let q = pow_u64(p as u64, e as u64)?;
            let a_e = splitting_number(r, e)?;
            let qd = pow_u64(q, d as u64)?;
            if a_e > qd {
                return Err(Error::invariant(format!("a_{e} = {a_e} exceeds q^d = {qd}")));
            }
            Ok(SplittingRow {
                e,
                q,
                a_e,
                normalized: rational(a_e, qd),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplittingSeries { p, d, rows })
}

pub fn fsig_estimate(series: &SplittingSeries) -> Result<Estimate> {
    let vals: Vec<Rational> = series.rows.iter().map(|r| r.normalized).collect();
    richardson(series.p, &vals)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuRow {
    pub e: u32,
    pub q: u64,
    pub nu: u64,
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuSeries {
    pub p: u32,
    pub rows: Vec<NuRow>,
}

/// `f^t ∉ m^[q]`, i.e. `f^t` has a term inside the box `[0, q)^n`.
fn power_survives(f: &Polynomial, t: u64, bounds: &[u32]) -> Result<bool> {
    Ok(!f.pow_truncated(t, bounds)?.is_zero())
}

/// `ν_e(f) = max { t : f^t ∉ m^[p^e] }` for `e = 1, ..., e_max`.
pub fn nu_series(f: &Polynomial, e_max: u32) -> Result<NuSeries> {
    if f.is_zero() {
        return Err(Error::input("ν is undefined for the zero polynomial"));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::input(format!("{f} is not in the maximal ideal")));
    }
    if e_max == 0 {
        return Err(Error::input("e_max must be at least 1"));
    }
    let p = f.field().p() as u64;
    let n = f.ring().nvars() as u64;
    let mut rows = Vec::new();
    let mut prev = 0u64;
    for e in 1..=e_max {
        f.ring().limits().check_deadline()?;
        let q = pow_u64(p, e as u64)?;
        let bounds = vec![u32::try_from(q).map_err(|_| Error::limit("p^e exceeds the exponent range"))?; n as usize];
        // f^{p ν_{e-1}} ∉ m^[q] by flatness of Frobenius; f^{n(q-1)+1} ∈ m^[q]
        // because every term has degree above n(q-1)
        let mut lo = p * prev;
        let cap = n * (q - 1) + 1;
        let mut step = 1u64;
        let mut hi = loop {
            let t = (lo + step).min(cap);
            if t == cap || !power_survives(f, t, &bounds)? {
                break t;
            }
            lo = t;
            step *= 2;
        };
        // invariant: f^lo survives, f^hi does not
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if power_survives(f, mid, &bounds)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        rows.push(NuRow {
            e,
            q,
            nu: lo,
            lower: rational(lo, q),
            upper: rational(lo + 1, q),
        });
        prev = lo;
    }
    Ok(NuSeries { p: p as u32, rows })
}

/// `[ν_E / q, (ν_E + 1) / q]` at the last row.
pub fn fpt_estimate(series: &NuSeries) -> Result<(Rational, Rational)> {
    let last = series.rows.last().ok_or_else(|| Error::input("empty ν series"))?;
    Ok((last.lower, last.upper))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceDiagnostic {
    /// `(e, |v_{e+1} - p^d v_e| / p^{e(d-1)})`
    pub deviations: Vec<(u32, Rational)>,
    /// Largest deviation.
    pub constant: Rational,
}

/// Deviations of consecutive terms of an integer series `(e, v_e)` from
/// exact `p^d`-scaling.
pub fn convergence_diagnostic(p: u32, d: usize, values: &[(u32, u64)]) -> Result<ConvergenceDiagnostic> {
    if values.len() < 2 {
        return Err(Error::input("at least two rows are needed"));
    }
    let p = p as i128;
    let pd = p.checked_pow(d as u32).ok_or_else(|| Error::limit("p^d overflow"))?;
    let mut deviations = Vec::new();
    for w in values.windows(2) {
        let (e, a) = w[0];
        let (_, b) = w[1];
        let diff = (b as i128 - pd * a as i128).abs();
        let scale_exp = e as i64 * (d as i64 - 1);
        let dev = if scale_exp >= 0 {
            let s = p
                .checked_pow(scale_exp as u32)
                .ok_or_else(|| Error::limit("scale overflow"))?;
            Rational::new(diff, s)
        } else {
            let s = p
                .checked_pow((-scale_exp) as u32)
                .ok_or_else(|| Error::limit("scale overflow"))?;
            Rational::from_integer(diff * s)
        };
        deviations.push((e, dev));
    }
    let constant = deviations.iter().map(|&(_, v)| v).max().expect("nonempty");
    Ok(ConvergenceDiagnostic { deviations, constant })
}

impl HkSeries {
    pub fn diagnostic(&self) -> Result<ConvergenceDiagnostic> {
        let v: Vec<(u32, u64)> = self.rows.iter().map(|r| (r.e, r.length)).collect();
        convergence_diagnostic(self.p, self.d, &v)
    }
}

impl SplittingSeries {
    pub fn diagnostic(&self) -> Result<ConvergenceDiagnostic> {
        let v: Vec<(u32, u64)> = self.rows.iter().map(|r| (r.e, r.a_e)).collect();
        convergence_diagnostic(self.p, self.d, &v)
    }
}
