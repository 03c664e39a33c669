//! Finite fields `F_q`, `q = p^m`, as coordinate vectors over `F_p` modulo an
//! explicit irreducible polynomial.
//!
//! An element is stored as a single integer code `sum c_i p^i` where
//! `c_0, ..., c_{m-1}` are its coordinates on the basis `1, g, ..., g^{m-1}`
//! and `g` is the class of the indeterminate. For `q <= 2^16` multiplication
//! and inversion go through discrete log / antilog tables built once at
//! construction; larger fields fall back to direct polynomial arithmetic.

use std::fmt;

use crate::error::{Error, Result};

/// Largest characteristic accepted.
pub const MAX_CHARACTERISTIC: u32 = 1 << 16;

const TABLE_LIMIT: u64 = 1 << 16;

/// User-facing description of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Coefficients of the defining polynomial, constant term first, without
    /// the leading 1. Empty when `m == 1`.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec {
            p,
            m: 1,
            modulus: Vec::new(),
        }
    }

    pub fn extension(p: u32, m: u32, modulus: Vec<u32>) -> Self {
        FieldSpec { p, m, modulus }
    }

    /// `F_{p^m}` using the first monic irreducible polynomial of degree `m`
    /// in the ordering by coefficient code (constant term least significant).
    pub fn with_default_modulus(p: u32, m: u32) -> Result<Self> {
        check_prime(p)?;
        if m <= 1 {
            return Ok(FieldSpec::prime(p));
        }
        let count = checked_pow(p as u64, m)?;
        for code in 0..count {
            let coeffs = digits(code, p, m as usize);
            if is_irreducible(p, &coeffs) {
                return Ok(FieldSpec::extension(p, m, coeffs));
            }
        }
        Err(Error::invariant(format!(
            "no irreducible polynomial of degree {m} over F_{p}"
        )))
    }
}

/// An element of `F_q`, meaningful only together with the [`Field`] it came
/// from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The element with integer code `c = sum c_i p^i`; `c` must be below `q`.
    #[inline]
    pub fn from_code(c: u32) -> Fq {
        Fq(c)
    }

    /// Integer code `sum c_i p^i`.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }
}

/// Arithmetic context for `F_q`.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

#[derive(Clone)]
struct Tables {
    // exp[i] = w^i for a primitive element w, i in [0, 2(q-1))
    exp: Vec<u32>,
    // log[a] for a != 0
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.spec.p)
            .field("m", &self.spec.m)
            .field("modulus", &self.spec.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        check_prime(spec.p)?;
        if spec.m == 0 {
            return Err(Error::input("extension degree must be at least 1"));
        }
        if spec.m == 1 {
            if !spec.modulus.is_empty() {
                return Err(Error::input("prime field takes no modulus"));
            }
        } else {
            if spec.modulus.len() != spec.m as usize {
                return Err(Error::input(format!(
                    "modulus must list {} coefficients (constant term first, leading 1 omitted)",
                    spec.m
                )));
            }
            if spec.modulus.iter().any(|&c| c >= spec.p) {
                return Err(Error::input("modulus coefficients must lie in [0, p)"));
            }
            if !is_irreducible(spec.p, &spec.modulus) {
                return Err(Error::input(format!(
                    "modulus {:?} is reducible over F_{}",
                    spec.modulus, spec.p
                )));
            }
        }
        let q = checked_pow(spec.p as u64, spec.m)?;
        if q > u32::MAX as u64 / 2 {
            return Err(Error::limit(format!("field order {q} exceeds 2^31")));
        }
        let mut field = Field {
            spec,
            q: q as u32,
            tables: None,
        };
        if field.spec.m > 1 && q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Field::new(FieldSpec::prime(p))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.spec.m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.spec.m == 1
    }

    /// The class of the indeterminate, written `g` in polynomial text.
    pub fn generator(&self) -> Result<Fq> {
        if self.spec.m == 1 {
            Err(Error::input("prime field has no extension generator"))
        } else {
            Ok(Fq(self.spec.p))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq> {
        if coords.len() != self.spec.m as usize || coords.iter().any(|&c| c >= self.spec.p) {
            return Err(Error::input("coordinates out of range"));
        }
        let mut code = 0u64;
        for &c in coords.iter().rev() {
            code = code * self.spec.p as u64 + c as u64;
        }
        Ok(Fq(code as u32))
    }

    pub fn coords(&self, a: Fq) -> Vec<u32> {
        digits(a.0 as u64, self.spec.p, self.spec.m as usize)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> Fq {
        Fq(v.rem_euclid(self.spec.p as i64) as u32)
    }

    /// The element lies in the prime subfield; returns its residue.
    pub fn as_prime(&self, a: Fq) -> Option<u32> {
        (a.0 < self.spec.p).then_some(a.0)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.spec.p;
        if self.spec.m == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Fq(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        while x != 0 || y != 0 {
            let d = (x % p + y % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        Fq(out)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.spec.p;
        if a.0 == 0 {
            return a;
        }
        if self.spec.m == 1 {
            return Fq(p - a.0);
        }
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut scale = 1u32;
        while x != 0 {
            let d = x % p;
            out += ((p - d) % p) * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
        }
        Fq(out)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        if self.spec.m == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % self.spec.p as u64) as u32);
        }
        match &self.tables {
            Some(t) => Fq(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        if self.spec.m == 1 {
            return Ok(Fq(inv_mod(a.0 as u64, self.spec.p as u64) as u32));
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                Ok(Fq(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
            }
            None => Ok(self.pow(a, self.q as u64 - 2)),
        }
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, mut k: u64) -> Fq {
        if k == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        if let Some(t) = &self.tables {
            let order = (self.q - 1) as u64;
            let l = (t.log[a.0 as usize] as u64 * (k % order)) % order;
            return Fq(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = Fq::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a^{p^e}`. The Frobenius has order `m`, so only `e mod m` matters.
    pub fn frobenius(&self, a: Fq, e: u32) -> Fq {
        let m = self.spec.m;
        if m == 1 || a.0 == 0 {
            return a;
        }
        let mut out = a;
        for _ in 0..(e % m) {
            out = self.pow(out, self.spec.p as u64);
        }
        out
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let p = self.spec.p as u64;
        let m = self.spec.m as usize;
        let x = digits(a.0 as u64, self.spec.p, m);
        let y = digits(b.0 as u64, self.spec.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // g^m = -(modulus)
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &mi) in self.spec.modulus.iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + (p - c) * mi as u64) % p;
            }
        }
        let mut code = 0u64;
        for &c in prod[..m].iter().rev() {
            code = code * p + c;
        }
        Fq(code as u32)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let order = q - 1;
        let prime_factors = factor(order as u64);
        let primitive = (2..q as u32)
            .map(Fq)
            .find(|&w| {
                prime_factors
                    .iter()
                    .all(|&r| self.pow_slow(w, (order as u64) / r) != Fq::ONE)
            })
            .unwrap_or(Fq(1));
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; q];
        let mut cur = Fq::ONE;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, primitive);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Tables { exp, log }
    }

    fn pow_slow(&self, a: Fq, mut k: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        acc
    }

    /// Render an element as polynomial text in `g` (e.g. `g + 1`). Prime
    /// field elements print as their residue.
    pub fn format(&self, a: Fq) -> String {
        if self.spec.m == 1 {
            return a.0.to_string();
        }
        let coords = self.coords(a);
        let mut parts = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let g = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (c, g.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => g,
                (_, false) => format!("{c}*{g}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub(crate) fn check_prime(p: u32) -> Result<()> {
    if !(2..=MAX_CHARACTERISTIC).contains(&p) || !is_prime(p as u64) {
        return Err(Error::input(format!("characteristic {p} is not a prime in [2, 2^16]")));
    }
    Ok(())
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::limit(format!("{base}^{exp} overflows 64 bits")))
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quo = old_r / r;
        (old_r, r) = (r, old_r - quo * r);
        (old_s, s) = (s, old_s - quo * s);
    }
    old_s.rem_euclid(p as i64) as u64
}

/// Irreducibility of the monic polynomial `x^m + sum modulus[i] x^i` by trial
/// division with every monic polynomial of degree `1..=m/2`.
pub(crate) fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let m = modulus.len();
    if m <= 1 {
        return true;
    }
    let mut target: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    target.push(1);
    for deg in 1..=m / 2 {
        let count = match (p as u64).checked_pow(deg as u32) {
            Some(c) => c,
            None => return false,
        };
        for code in 0..count {
            let mut divisor: Vec<u64> = digits(code, p, deg).into_iter().map(u64::from).collect();
            divisor.push(1);
            if divides_monic(&divisor, &target, p as u64) {
                return false;
            }
        }
    }
    true
}

fn divides_monic(divisor: &[u64], target: &[u64], p: u64) -> bool {
    let mut rem = target.to_vec();
    let dd = divisor.len() - 1;
    for k in (dd..rem.len()).rev() {
        let c = rem[k] % p;
        if c == 0 {
            continue;
        }
        for (i, &di) in divisor.iter().enumerate() {
            let idx = k - dd + i;
            rem[idx] = (rem[idx] + (p - c) * di) % p;
        }
    }
    rem[..dd].iter().all(|&c| c % p == 0)
}
