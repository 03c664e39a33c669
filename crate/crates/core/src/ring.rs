use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::field::Field;

/// Resource caps applied to every Gröbner computation in a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_basis: usize,
    pub max_degree: u64,
    /// Checked cooperatively between S-pair reductions.
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 5000,
            max_degree: 1 << 20,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_timeout(mut self, secs: f64) -> Self {
        self.deadline = Some(Instant::now() + Duration::from_secs_f64(secs));
        self
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::limit("time budget exhausted")),
            _ => Ok(()),
        }
    }
}

/// A polynomial ring `F_q[x_1, ..., x_n]`.
pub struct RingSpec {
    field: Field,
    vars: Vec<String>,
    limits: Limits,
}

/// Rings are shared by every polynomial and ideal that lives in them.
pub type Ring = Arc<RingSpec>;

impl RingSpec {
    pub fn new(field: Field, vars: &[&str]) -> Result<Ring> {
        Self::with_limits(field, vars.iter().map(|s| s.to_string()).collect(), Limits::default())
    }

    pub fn with_limits(field: Field, vars: Vec<String>, limits: Limits) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::input("a ring needs at least one variable"));
        }
        let mut seen = HashSet::new();
        for v in &vars {
            if !is_identifier(v) {
                return Err(Error::input(format!("'{v}' is not a valid variable name")));
            }
            if v == "g" {
                return Err(Error::input("'g' is reserved for the field generator"));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::input(format!("duplicate variable '{v}'")));
            }
        }
        Ok(Arc::new(RingSpec { field, vars, limits }))
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same field and limits, different variables.
    pub fn with_vars(&self, vars: Vec<String>) -> Result<Ring> {
        RingSpec::with_limits(self.field.clone(), vars, self.limits)
    }

    /// This ring with `extra` prepended to the variable list.
    pub(crate) fn prepend_vars(&self, extra: &[String]) -> Result<Ring> {
        let mut vars = extra.to_vec();
        vars.extend(self.vars.iter().cloned());
        self.with_vars(vars)
    }

    /// Structural equality: same field and variable names.
    pub fn same_as(&self, other: &RingSpec) -> bool {
        std::ptr::eq(self, other) || (self.field == other.field && self.vars == other.vars)
    }
}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.field.q(), self.vars.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn ensure_same(a: &RingSpec, b: &RingSpec) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::input(format!("ring mismatch: {a:?} vs {b:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_variables() {
        let f = Field::prime(3).unwrap();
        assert!(RingSpec::new(f.clone(), &[]).is_err());
        assert!(RingSpec::new(f.clone(), &["x", "x"]).is_err());
        assert!(RingSpec::new(f.clone(), &["g"]).is_err());
        assert!(RingSpec::new(f.clone(), &["2x"]).is_err());
        let r = RingSpec::new(f, &["x", "y_1"]).unwrap();
        assert_eq!(r.var_index("y_1"), Some(1));
    }
}
