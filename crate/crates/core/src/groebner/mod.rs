//! Gröbner bases and the ideal algebra built on them.

mod colon;
mod engine;
mod ideal;
mod staircase;

use std::fmt;

pub use ideal::{is_squarefree_hypersurface, monomials_of_degree, subalgebra_presentation, Ideal};
pub use staircase::Staircase;

pub(crate) use colon::fedder_chain_colength;
pub(crate) use engine::{Element, Engine, Reducers};

use crate::error::Result;
use crate::field::Fq;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Term};
use crate::ring::{ensure_same, Ring};

/// A reduced Gröbner basis: monic elements, sorted by ascending leading
/// monomial, no term of any element divisible by another leading monomial.
#[derive(Clone)]
pub struct GroebnerBasis {
    ring: Ring,
    order: MonomialOrder,
    elements: Vec<Element>,
}

impl GroebnerBasis {
    pub(crate) fn from_elements(ring: Ring, order: MonomialOrder, elements: Vec<Element>) -> Self {
        GroebnerBasis { ring, order, elements }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether this is the basis `{1}` of the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].lead().is_one()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elements
            .iter()
            .map(|e| Polynomial::from_distinct_terms(&self.ring, e.terms.clone()))
            .collect()
    }

    /// Element terms, descending under the basis order.
    pub fn element_terms(&self) -> impl Iterator<Item = &[Term]> {
        self.elements.iter().map(|e| e.terms.as_slice())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|e| e.lead().clone()).collect()
    }

    pub fn staircase(&self) -> Staircase {
        Staircase::new(self.ring.nvars(), self.leading_monomials())
    }

    pub(crate) fn engine(&self) -> Engine<'_> {
        Engine::new(self.ring.field(), self.order, self.ring.nvars(), *self.ring.limits())
    }

    /// Fully reduced remainder of `f`.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        ensure_same(&self.ring, f.ring())?;
        if f.is_zero() || self.elements.is_empty() {
            return Ok(f.clone());
        }
        let engine = self.engine();
        let reducers = Reducers::new(self.ring.nvars(), self.elements.iter().collect());
        let terms = engine.sorted(f.terms().to_vec());
        let rem = engine.reduce(&terms, &reducers);
        Ok(Polynomial::from_distinct_terms(&self.ring, rem))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Membership of a single monomial.
    pub fn contains_monomial(&self, m: &Monomial) -> Result<bool> {
        self.contains(&Polynomial::monomial(&self.ring, m.clone(), Fq::ONE))
    }

    /// Basis elements rendered in the basis order.
    pub fn to_strings(&self) -> Vec<String> {
        self.polynomials().iter().map(|p| p.to_text(self.order)).collect()
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring)
            && self.order == other.order
            && self.elements.len() == other.elements.len()
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|(a, b)| a.terms == b.terms)
    }
}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroebnerBasis")
            .field("order", &self.order)
            .field("elements", &self.to_strings())
            .finish()
    }
}
