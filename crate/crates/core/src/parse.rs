//! Polynomial text grammar:
//!
//! ```text
//! poly := term (('+' | '-') term)*
//! term := atom ('*' atom)*
//! atom := integer | 'g' ('^' nat)? | var ('^' nat)?
//! ```
//!
//! Whitespace is insignificant. A leading sign before the first term is also
//! accepted. Integers are reduced mod `p`; `g` is the extension generator.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::monomial::{Exps, Monomial};
use crate::poly::Polynomial;
use crate::ring::Ring;

pub fn parse_poly(text: &str, ring: &Ring) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    p.poly()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let field = self.ring.field();
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return self.err(self.pos, "empty polynomial"),
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if sign { field.neg(c) } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => sign = false,
                Some(b'-') => sign = true,
                Some(ch) => return self.err(self.pos, format!("unexpected character '{}'", ch as char)),
            }
            self.pos += 1;
        }
        Ok(Polynomial::from_terms(self.ring, terms))
    }

    fn term(&mut self) -> Result<(Monomial, Fq)> {
        let n = self.ring.nvars();
        let mut exps: Exps = smallvec::smallvec![0; n];
        let mut coeff = Fq::ONE;
        loop {
            self.atom(&mut exps, &mut coeff)?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_exps(exps), coeff))
    }

    fn atom(&mut self, exps: &mut Exps, coeff: &mut Fq) -> Result<()> {
        let field = self.ring.field();
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return self.err(self.pos, "expected a factor, found end of input"),
        };
        let ch = self.src[start];
        if ch.is_ascii_digit() {
            let p = field.p() as u64;
            let mut v = 0u64;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                v = (v * 10 + (self.src[self.pos] - b'0') as u64) % p;
                self.pos += 1;
            }
            *coeff = field.mul(*coeff, field.from_int(v as i64));
            return Ok(());
        }
        if ch.is_ascii_alphabetic() || ch == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
            let power = self.exponent()?;
            if name == "g" {
                let g = match field.generator() {
                    Ok(g) => g,
                    Err(_) => return self.err(start, "'g' denotes the extension generator but the field is prime"),
                };
                *coeff = field.mul(*coeff, field.pow(g, power as u64));
                return Ok(());
            }
            let Some(i) = self.ring.var_index(name) else {
                return self.err(start, format!("unknown identifier '{name}'"));
            };
            exps[i] = match exps[i].checked_add(power) {
                Some(v) => v,
                None => return self.err(start, "exponent overflow"),
            };
            return Ok(());
        }
        self.err(start, format!("unexpected character '{}'", ch as char))
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "malformed exponent: expected a natural number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        match digits.parse::<u32>() {
            Ok(v) => Ok(v),
            Err(_) => self.err(start, "malformed exponent: out of range"),
        }
    }
}
