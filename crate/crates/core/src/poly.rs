//! Sparse multivariate polynomials over `F_q`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::monomial::{Exps, Monomial, MonomialOrder};
use crate::ring::{ensure_same, Ring};

pub type Term = (Monomial, Fq);

/// A polynomial with nonzero coefficients, terms stored in descending
/// grevlex order so that equality is structural.
#[derive(Clone)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: Fq) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Fq::ONE)
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1), Fq::ONE)
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Fq) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Build from arbitrary terms: like monomials are combined and zeros
    /// dropped.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = Term>) -> Self {
        let field = ring.field();
        let mut acc: HashMap<Monomial, Fq> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            let e = acc.entry(m).or_insert(Fq::ZERO);
            *e = field.add(*e, c);
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, Fq>) -> Self {
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms already free of duplicates and zeros, in any order.
    pub(crate) fn from_distinct_terms(ring: &Ring, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    /// Terms in descending grevlex order.
    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    /// Terms in descending order under `order`.
    pub fn terms_in(&self, order: MonomialOrder) -> Vec<Term> {
        let mut t = self.terms.clone();
        if order != MonomialOrder::Grevlex {
            t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        t
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Fq {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => *c,
            _ => Fq::ZERO,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Fq {
        self.terms.iter().find(|(t, _)| t == m).map_or(Fq::ZERO, |(_, c)| *c)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Lowest total degree of a term (the m-adic order).
    pub fn order(&self) -> Option<u64> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.first(), self.terms.last()) {
            (Some(a), Some(b)) => a.0.degree() == b.0.degree(),
            _ => true,
        }
    }

    /// Largest term under `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Result<Term> {
        let best = self
            .terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .ok_or_else(|| Error::input("leading term of the zero polynomial"))?;
        Ok(best.clone())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        ensure_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, Fq::ONE))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        ensure_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, self.field().neg(Fq::ONE)))
    }

    // self + c * other, both sorted
    fn merge(&self, other: &Polynomial, c: Fq) -> Polynomial {
        let field = self.field();
        let order = MonomialOrder::Grevlex;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match order.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), field.mul(c, b.1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = field.add(a.1, field.mul(c, b.1));
                    if !s.is_zero() {
                        out.push((a.0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, b)| (m.clone(), field.mul(c, *b))));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(*c))).collect(),
        }
    }

    pub fn scale(&self, c: Fq) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(*a, c))).collect(),
        }
    }

    /// Multiply by `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: Fq) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let field = self.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, a) in &self.terms {
            terms.push((t.mul(m)?, field.mul(*a, c)));
        }
        // multiplication by a monomial preserves any monomial order
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        ensure_same(&self.ring, &other.ring)?;
        self.mul_filtered(other, |_| true)
    }

    /// Product modulo the monomial ideal `(x_i^{bounds[i]})`: terms with any
    /// exponent reaching its bound are discarded.
    pub fn mul_truncated(&self, other: &Polynomial, bounds: &[u32]) -> Result<Polynomial> {
        ensure_same(&self.ring, &other.ring)?;
        self.mul_filtered(other, |m| m.exps().iter().zip(bounds).all(|(e, b)| e < b))
    }

    fn mul_filtered(&self, other: &Polynomial, keep: impl Fn(&Monomial) -> bool) -> Result<Polynomial> {
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let (a, b) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if a.terms.len() == 1 {
            let (m, c) = &a.terms[0];
            let p = b.mul_term(m, *c)?;
            let terms = p.terms.into_iter().filter(|(m, _)| keep(m)).collect();
            return Ok(Polynomial {
                ring: self.ring.clone(),
                terms,
            });
        }
        if let (Some(da), Some(db)) = (a.total_degree(), b.total_degree()) {
            if da + db > u32::MAX as u64 {
                return Err(Error::limit("product degree overflow"));
            }
        }
        let field = self.field();
        let mut acc: HashMap<Exps, Fq> = HashMap::with_capacity(a.terms.len() * b.terms.len() / 2 + 1);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul_unchecked(mb);
                if !keep(&m) {
                    continue;
                }
                let prod = field.mul(*ca, *cb);
                let e = acc.entry(m.exps().into()).or_insert(Fq::ZERO);
                *e = field.add(*e, prod);
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial::from_exps(e), c))
            .collect();
        Ok(Polynomial::from_distinct_terms(&self.ring, terms))
    }

    pub fn pow(&self, t: u64) -> Result<Polynomial> {
        self.pow_filtered(t, None)
    }

    /// `self^t` modulo `(x_i^{bounds[i]})`.
    pub fn pow_truncated(&self, t: u64, bounds: &[u32]) -> Result<Polynomial> {
        self.pow_filtered(t, Some(bounds))
    }

    fn pow_filtered(&self, mut t: u64, bounds: Option<&[u32]>) -> Result<Polynomial> {
        let mul = |a: &Polynomial, b: &Polynomial| match bounds {
            Some(bd) => a.mul_truncated(b, bd),
            None => a.mul(b),
        };
        let mut acc = Polynomial::one(&self.ring);
        if let Some(bd) = bounds {
            acc = acc.truncate(bd);
        }
        let mut base = match bounds {
            Some(bd) => self.truncate(bd),
            None => self.clone(),
        };
        if t > 0 && bounds.is_none() {
            if let Some(d) = self.total_degree() {
                if d.checked_mul(t).is_none_or(|v| v > u32::MAX as u64) {
                    return Err(Error::limit("power degree overflow"));
                }
            }
        }
        while t > 0 {
            if t & 1 == 1 {
                acc = mul(&acc, &base)?;
                if acc.is_zero() {
                    return Ok(acc);
                }
            }
            t >>= 1;
            if t > 0 {
                base = mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Drop every term with some exponent `>= bounds[i]`.
    pub fn truncate(&self, bounds: &[u32]) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps().iter().zip(bounds).all(|(e, b)| e < b))
                .cloned()
                .collect(),
        }
    }

    /// `f^{p^e}`: Frobenius on coefficients and exponents scaled by `p^e`.
    pub fn frobenius_pow(&self, e: u32) -> Result<Polynomial> {
        let field = self.field();
        let q = (field.p() as u64)
            .checked_pow(e)
            .ok_or_else(|| Error::limit("p^e overflows 64 bits"))?;
        if let Some(d) = self.total_degree() {
            if d.checked_mul(q).is_none_or(|v| v > u32::MAX as u64) {
                return Err(Error::limit(format!("degree {d} times {q} exceeds the exponent range")));
            }
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.pow(q)?, field.frobenius(*c, e)));
        }
        // scaling exponents preserves grevlex order
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let field = self.field();
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exps()[var];
            if e == 0 {
                continue;
            }
            let k = field.from_int((e % field.p()) as i64);
            if k.is_zero() {
                continue;
            }
            let mut exps: Exps = m.exps().into();
            exps[var] -= 1;
            terms.push((Monomial::from_exps(exps), field.mul(*c, k)));
        }
        Polynomial::from_distinct_terms(&self.ring, terms)
    }

    pub fn monic(&self, order: MonomialOrder) -> Result<Polynomial> {
        let (_, lc) = self.leading_term(order)?;
        Ok(self.scale(self.field().inv(lc)?))
    }

    /// Exact quotient `self / divisor`; fails when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        ensure_same(&self.ring, &divisor.ring)?;
        if divisor.is_zero() {
            return Err(Error::Arithmetic("division by the zero polynomial".into()));
        }
        let field = self.field();
        let (lm, lc) = divisor.terms[0].clone();
        let lc_inv = field.inv(lc)?;
        let mut rem = self.clone();
        let mut quo = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            let Some(qm) = lm.quotient_of(&m) else {
                return Err(Error::Arithmetic("division is not exact".into()));
            };
            let qc = field.mul(c, lc_inv);
            rem = rem.merge(&divisor.mul_term(&qm, qc)?, field.neg(Fq::ONE));
            quo.push((qm, qc));
        }
        Ok(Polynomial::from_distinct_terms(&self.ring, quo))
    }

    /// Map into `target` by sending variable `i` to variable `map[i]`.
    pub fn remap(&self, target: &Ring, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.ring.nvars() || self.field() != target.field() {
            return Err(Error::input("incompatible ring map"));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps: Exps = smallvec::smallvec![0; target.nvars()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    exps[map[i]] += e;
                }
            }
            terms.push((Monomial::from_exps(exps), *c));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Substitute polynomials (in a common ring) for the variables.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        let Some(first) = images.first() else {
            return Err(Error::input("no images given"));
        };
        if images.len() != self.ring.nvars() {
            return Err(Error::input("one image per variable required"));
        }
        let target = first.ring().clone();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, *c);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e as u64)?)?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Value at a point of `F_q^n`.
    pub fn evaluate(&self, point: &[Fq]) -> Fq {
        let field = self.field();
        let mut acc = Fq::ZERO;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    v = field.mul(v, field.pow(point[i], e as u64));
                }
            }
            acc = field.add(acc, v);
        }
        acc
    }

    /// Terms whose total degree is below `n`.
    pub fn truncate_degree(&self, n: u64) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() < n).cloned().collect(),
        }
    }

    /// Render with terms in descending `order`.
    pub fn to_text(&self, order: MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let field = self.field();
        let vars = self.ring.vars();
        let mut parts = Vec::new();
        for (m, c) in self.terms_in(order) {
            let mono: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        vars[i].clone()
                    } else {
                        format!("{}^{e}", vars[i])
                    }
                })
                .collect();
            let coords = field.coords(c);
            for (k, &ck) in coords.iter().enumerate().rev() {
                if ck == 0 {
                    continue;
                }
                let mut atoms = Vec::new();
                if ck != 1 || (k == 0 && mono.is_empty()) {
                    atoms.push(ck.to_string());
                }
                match k {
                    0 => {}
                    1 => atoms.push("g".into()),
                    _ => atoms.push(format!("g^{k}")),
                }
                atoms.extend(mono.iter().cloned());
                parts.push(atoms.join("*"));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(MonomialOrder::Grevlex))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::parse::parse_poly;
    use crate::ring::RingSpec;

    fn ring(p: u32, vars: &[&str]) -> Ring {
        RingSpec::new(Field::prime(p).unwrap(), vars).unwrap()
    }

    #[test]
    fn difference_of_squares_f5() {
        let r = ring(5, &["x", "y"]);
        let a = parse_poly("x+y", &r).unwrap();
        let b = parse_poly("x-y", &r).unwrap();
        assert_eq!(a.mul(&b).unwrap(), parse_poly("x^2 + 4*y^2", &r).unwrap());
        assert!(a.mul(&Polynomial::zero(&r)).unwrap().is_zero());
    }

    #[test]
    fn cube_is_additive_in_char_three() {
        let r = ring(3, &["x", "y"]);
        let f = parse_poly("x+y", &r).unwrap();
        let cube = parse_poly("x^3+y^3", &r).unwrap();
        assert_eq!(f.pow(3).unwrap(), cube);
        assert_eq!(f.frobenius_pow(1).unwrap(), cube);
        assert_eq!(f.frobenius_pow(0).unwrap(), f);
    }

    #[test]
    fn frobenius_on_f4_coefficients() {
        let field = Field::new(FieldSpec::extension(2, 2, vec![1, 1])).unwrap();
        let r = RingSpec::new(field, &["z"]).unwrap();
        let f = parse_poly("g*z", &r).unwrap();
        assert_eq!(f.frobenius_pow(1).unwrap(), parse_poly("g*z^2 + z^2", &r).unwrap());
    }

    #[test]
    fn frobenius_overflow_is_a_limit_error() {
        let r = ring(3, &["x"]);
        let f = parse_poly("x^1000", &r).unwrap();
        assert!(matches!(f.frobenius_pow(19), Err(Error::Limit(_))));
    }

    #[test]
    fn leading_terms() {
        let r = ring(3, &["x", "y", "t"]);
        let f = parse_poly("x*y + t^2", &r).unwrap();
        assert_eq!(
            f.leading_term(MonomialOrder::Grevlex).unwrap().0,
            Monomial::new(&[1, 1, 0])
        );
        let r2 = ring(3, &["x", "y"]);
        let g = parse_poly("x + y^2", &r2).unwrap();
        assert_eq!(g.leading_term(MonomialOrder::Lex).unwrap().0, Monomial::new(&[1, 0]));
        let r7 = ring(7, &["x"]);
        let c = parse_poly("5", &r7).unwrap();
        assert_eq!(
            c.leading_term(MonomialOrder::Grevlex).unwrap(),
            (Monomial::one(1), Fq(5))
        );
        assert!(Polynomial::zero(&r7).leading_term(MonomialOrder::Lex).is_err());
    }

    #[test]
    fn exact_division() {
        let r = ring(5, &["x", "y"]);
        let f = parse_poly("x^2 - y^2", &r).unwrap();
        let g = parse_poly("x + y", &r).unwrap();
        assert_eq!(f.div_exact(&g).unwrap(), parse_poly("x - y", &r).unwrap());
        assert!(parse_poly("x^2 + 1", &r).unwrap().div_exact(&g).is_err());
    }

    #[test]
    fn truncated_power_matches_full_power() {
        let r = ring(3, &["x", "y"]);
        let f = parse_poly("x^2 + x*y + 2*y^3", &r).unwrap();
        let bounds = [9, 9];
        for t in 0..8 {
            assert_eq!(
                f.pow_truncated(t, &bounds).unwrap(),
                f.pow(t).unwrap().truncate(&bounds)
            );
        }
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let r = ring(3, &["x", "y"]);
        let f = parse_poly("x^3 + y^3", &r).unwrap();
        assert!(f.derivative(0).is_zero() && f.derivative(1).is_zero());
    }
}
