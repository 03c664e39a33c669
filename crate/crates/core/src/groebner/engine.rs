//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller installation of both criteria.
//!
//! Polynomials inside the engine are plain term vectors sorted in descending
//! order under the active monomial order. Reduction uses a heap of pending
//! monomials plus a coefficient map, so a reduction step costs the size of
//! the reducer rather than the size of the polynomial being reduced.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Term;
use crate::ring::Limits;

type Key = SmallVec<[u32; 10]>;

/// Sort key whose lexicographic comparison agrees with `order`.
pub(crate) fn order_key(order: MonomialOrder, m: &Monomial) -> Key {
    let e = m.exps();
    let mut key = Key::with_capacity(e.len() + 2);
    let grevlex = |part: &[u32], key: &mut Key| {
        let d: u64 = part.iter().map(|&x| x as u64).sum();
        key.push(d.min(u32::MAX as u64) as u32);
        key.extend(part.iter().rev().map(|&x| u32::MAX - x));
    };
    match order {
        MonomialOrder::Grevlex => grevlex(e, &mut key),
        MonomialOrder::Lex => key.extend_from_slice(e),
        MonomialOrder::Block(k) => {
            let k = k.min(e.len());
            grevlex(&e[..k], &mut key);
            grevlex(&e[k..], &mut key);
        }
    }
    key
}

/// Local degree order used for truncated computations: lower degree is
/// larger, ties broken as in grevlex.
/// With a position variable `w`, the exponent of `w` (the module
/// component) is compared first.
fn local_key(m: &Monomial, position: Option<usize>) -> Key {
    let e = m.exps();
    let mut key = Key::with_capacity(e.len() + 2);
    let w = position.map_or(0, |i| e[i]);
    if position.is_some() {
        key.push(w);
    }
    key.push(u32::MAX - (m.degree() - w as u64).min(u32::MAX as u64) as u32);
    key.extend(e.iter().rev().map(|&x| u32::MAX - x));
    key
}

struct HeapEntry {
    key: Key,
    mono: Monomial,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Pending sum of scaled polynomials, drained from the largest monomial down.
struct Accumulator<'a> {
    engine: &'a Engine<'a>,
    coeffs: HashMap<Monomial, Fq>,
    heap: BinaryHeap<HeapEntry>,
}

impl<'a> Accumulator<'a> {
    fn new(engine: &'a Engine<'a>) -> Self {
        Accumulator {
            engine,
            coeffs: HashMap::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn add(&mut self, m: Monomial, c: Fq) {
        if c.is_zero() || self.engine.truncated(&m) {
            return;
        }
        match self.coeffs.entry(m) {
            Entry::Occupied(mut o) => {
                let v = self.engine.field.add(*o.get(), c);
                *o.get_mut() = v;
            }
            Entry::Vacant(v) => {
                let key = self.engine.key(v.key());
                self.heap.push(HeapEntry {
                    key,
                    mono: v.key().clone(),
                });
                v.insert(c);
            }
        }
    }

    /// Add `c * shift * terms`.
    fn add_scaled(&mut self, terms: &[Term], shift: &Monomial, c: Fq) {
        for (m, a) in terms {
            self.add(m.mul_unchecked(shift), self.engine.field.mul(*a, c));
        }
    }

    fn pop(&mut self) -> Option<Term> {
        while let Some(HeapEntry { mono, .. }) = self.heap.pop() {
            if let Some(c) = self.coeffs.remove(&mono) {
                if !c.is_zero() {
                    return Some((mono, c));
                }
            }
        }
        None
    }
}

/// A monic basis element with cached leading data.
#[derive(Clone)]
pub(crate) struct Element {
    pub terms: Vec<Term>,
    lead: Monomial,
    mask: u64,
}

impl Element {
    fn new(terms: Vec<Term>) -> Self {
        let lead = terms[0].0.clone();
        let mask = lead.support_mask();
        Element { terms, lead, mask }
    }

    #[inline]
    pub fn lead(&self) -> &Monomial {
        &self.lead
    }
}

/// Reducer set with a fast path for pure powers `x_i^b`.
pub(crate) struct Reducers<'e> {
    elems: Vec<&'e Element>,
    /// Pure-power bounds per module component.
    pure_bounds: [Vec<u32>; 2],
    position: Option<usize>,
}

impl<'e> Reducers<'e> {
    pub fn new(nvars: usize, elems: Vec<&'e Element>) -> Self {
        Reducers::with_position(nvars, elems, None)
    }

    fn with_position(nvars: usize, elems: Vec<&'e Element>, position: Option<usize>) -> Self {
        let mut pure_bounds = [vec![u32::MAX; nvars], vec![u32::MAX; nvars]];
        for e in &elems {
            if e.terms.len() == 1 {
                let comp = position.map_or(0, |w| e.lead.exps()[w] as usize);
                let mut support = e.lead.support().filter(|&i| Some(i) != position);
                if let (Some(i), None) = (support.next(), support.next()) {
                    pure_bounds[comp][i] = pure_bounds[comp][i].min(e.lead.exps()[i]);
                }
            }
        }
        Reducers {
            elems,
            pure_bounds,
            position,
        }
    }

    #[inline]
    fn component(&self, m: &Monomial) -> usize {
        self.position.map_or(0, |w| m.exps()[w] as usize)
    }

    #[inline]
    fn killed_by_pure_power(&self, m: &Monomial) -> bool {
        let bounds = &self.pure_bounds[self.component(m)];
        m.exps()
            .iter()
            .enumerate()
            .any(|(i, e)| Some(i) != self.position && *e >= bounds[i])
    }

    fn find(&self, m: &Monomial) -> Option<&'e Element> {
        let mask = m.support_mask();
        let comp = self.component(m);
        self.elems
            .iter()
            .find(|e| e.mask & !mask == 0 && e.lead.divides(m) && self.component(&e.lead) == comp)
            .copied()
    }
}

pub(crate) struct Engine<'a> {
    pub field: &'a Field,
    pub order: MonomialOrder,
    pub nvars: usize,
    pub limits: Limits,
    /// `Some(D)` switches to the local degree order and discards every term
    /// of degree `>= D`; valid only for ideals containing `m^D`.
    pub local_bound: Option<u64>,
    /// Variable whose exponent (0 or 1) marks the component of `S^2`; the
    /// engine then computes a submodule basis and never multiplies by it.
    /// Only meaningful together with `local_bound`.
    pub position: Option<usize>,
}

impl<'a> Engine<'a> {
    pub fn new(field: &'a Field, order: MonomialOrder, nvars: usize, limits: Limits) -> Self {
        Engine {
            field,
            order,
            nvars,
            limits,
            local_bound: None,
            position: None,
        }
    }

    fn reducers<'e>(&self, elems: Vec<&'e Element>) -> Reducers<'e> {
        Reducers::with_position(self.nvars, elems, self.position)
    }

    #[inline]
    fn component(&self, m: &Monomial) -> u32 {
        self.position.map_or(0, |w| m.exps()[w])
    }

    /// Divisibility inside one module component.
    #[inline]
    fn divides(&self, a: &Monomial, b: &Monomial) -> bool {
        a.divides(b) && self.component(a) == self.component(b)
    }

    #[inline]
    fn local_degree(&self, m: &Monomial) -> u64 {
        m.degree() - self.component(m) as u64
    }

    fn key(&self, m: &Monomial) -> Key {
        match self.local_bound {
            Some(_) => local_key(m, self.position),
            None => order_key(self.order, m),
        }
    }

    #[inline]
    fn truncated(&self, m: &Monomial) -> bool {
        self.local_bound.is_some_and(|d| self.local_degree(m) >= d)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.local_bound {
            Some(_) => local_key(a, self.position).cmp(&local_key(b, self.position)),
            None => self.order.cmp(a, b),
        }
    }

    /// Drop terms beyond the truncation degree.
    pub fn truncate(&self, terms: Vec<Term>) -> Vec<Term> {
        match self.local_bound {
            Some(d) => terms.into_iter().filter(|(m, _)| self.local_degree(m) < d).collect(),
            None => terms,
        }
    }

    /// Sort descending under the engine order.
    pub fn sorted(&self, mut terms: Vec<Term>) -> Vec<Term> {
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        terms
    }

    /// Fully reduce `c * shift * terms` (summed over `parts`) modulo the
    /// reducers. Returns the remainder sorted descending.
    fn reduce_parts(&self, parts: &[(&[Term], Monomial, Fq)], reducers: &Reducers<'_>) -> Vec<Term> {
        let field = self.field;
        let mut acc = Accumulator::new(self);
        for (terms, shift, c) in parts {
            acc.add_scaled(terms, shift, *c);
        }
        let mut out = Vec::new();
        while let Some((m, c)) = acc.pop() {
            if reducers.killed_by_pure_power(&m) {
                continue;
            }
            match reducers.find(&m) {
                Some(g) => {
                    if g.terms.len() > 1 {
                        let shift = g.lead.quotient_of(&m).expect("divisor found");
                        acc.add_scaled(&g.terms[1..], &shift, field.neg(c));
                    }
                }
                None => {
                    out.push((m, c));
                    // local tails spread over every degree below the bound,
                    // so only the leading term is reduced there
                    if self.local_bound.is_some() {
                        while let Some(t) = acc.pop() {
                            if !reducers.killed_by_pure_power(&t.0) {
                                out.push(t);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn reduce(&self, terms: &[Term], reducers: &Reducers<'_>) -> Vec<Term> {
        let one = Monomial::one(self.nvars);
        self.reduce_parts(&[(terms, one, Fq::ONE)], reducers)
    }

    fn make_monic(&self, mut terms: Vec<Term>) -> Result<Vec<Term>> {
        let lc = terms[0].1;
        if lc != Fq::ONE {
            let inv = self.field.inv(lc)?;
            for t in terms.iter_mut() {
                t.1 = self.field.mul(t.1, inv);
            }
        }
        Ok(terms)
    }

    fn check_degree(&self, terms: &[Term]) -> Result<()> {
        let max = self.limits.max_degree;
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.degree() > max) {
            return Err(Error::limit(format!(
                "polynomial degree {} exceeds the cap {max}",
                m.degree()
            )));
        }
        Ok(())
    }

    /// Reduced Gröbner basis of the ideal generated by `gens` (each sorted
    /// descending under the engine order). Output is sorted by ascending
    /// leading monomial.
    pub fn groebner(&self, gens: Vec<Vec<Term>>) -> Result<Vec<Element>> {
        let mut state = State {
            elems: Vec::new(),
            alive: Vec::new(),
            pairs: Vec::new(),
        };
        let mut gens: Vec<Vec<Term>> = gens.into_iter().filter(|g| !g.is_empty()).collect();
        for g in &gens {
            self.check_degree(g)?;
        }
        gens.sort_by(|a, b| self.cmp(&a[0].0, &b[0].0).then(a.len().cmp(&b.len())));
        for g in gens {
            let h = {
                let reducers = self.reducers(state.alive_elems());
                self.reduce(&g, &reducers)
            };
            if !h.is_empty() {
                let h = self.make_monic(h)?;
                if h[0].0.is_one() {
                    return Ok(vec![Element::new(h)]);
                }
                self.insert(&mut state, h)?;
            }
        }
        while let Some(pair) = state.pairs.pop() {
            self.limits.check_deadline()?;
            let (gi, gj) = (&state.elems[pair.i], &state.elems[pair.j]);
            let si = gi.lead.quotient_of(&pair.lcm).expect("lcm");
            let sj = gj.lead.quotient_of(&pair.lcm).expect("lcm");
            let h = {
                let reducers = self.reducers(state.alive_elems());
                self.reduce_parts(
                    &[
                        (&gi.terms[1..], si, Fq::ONE),
                        (&gj.terms[1..], sj, self.field.neg(Fq::ONE)),
                    ],
                    &reducers,
                )
            };
            if h.is_empty() {
                continue;
            }
            self.check_degree(&h)?;
            let h = self.make_monic(h)?;
            if h[0].0.is_one() {
                return Ok(vec![Element::new(h)]);
            }
            self.insert(&mut state, h)?;
            if state.elems.len() > self.limits.max_basis {
                return Err(Error::limit(format!(
                    "basis size exceeds the cap {}",
                    self.limits.max_basis
                )));
            }
        }
        if self.local_bound.is_some() {
            let mut alive: Vec<Element> = state.alive_elems().into_iter().cloned().collect();
            alive.sort_by(|a, b| self.cmp(&a.lead, &b.lead));
            return Ok(alive);
        }
        self.interreduce(&state)
    }

    fn interreduce(&self, state: &State) -> Result<Vec<Element>> {
        let mut alive: Vec<&Element> = state
            .elems
            .iter()
            .zip(&state.alive)
            .filter(|(_, &a)| a)
            .map(|(e, _)| e)
            .collect();
        alive.sort_by(|a, b| self.cmp(&a.lead, &b.lead));
        let mut out = Vec::with_capacity(alive.len());
        for (idx, e) in alive.iter().enumerate() {
            let others: Vec<&Element> = alive
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .map(|(_, e)| *e)
                .collect();
            let reducers = self.reducers(others);
            let one = Monomial::one(self.nvars);
            let mut terms = vec![e.terms[0].clone()];
            terms.extend(self.reduce_parts(&[(&e.terms[1..], one, Fq::ONE)], &reducers));
            out.push(Element::new(terms));
        }
        Ok(out)
    }

    fn insert(&self, state: &mut State, h: Vec<Term>) -> Result<()> {
        let h = Element::new(h);
        let hl = h.lead.clone();
        let new_idx = state.elems.len();

        // candidate pairs (h, g) for alive g in the same component
        let mut cands: Vec<Pair> = state
            .alive
            .iter()
            .enumerate()
            .filter(|(g, &a)| a && self.component(&state.elems[*g].lead) == self.component(&hl))
            .map(|(g, _)| {
                let gl = &state.elems[g].lead;
                Pair::new(self, g, new_idx, hl.lcm(gl), hl.is_coprime(gl))
            })
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(c) = cands.pop() {
            let dominated = !c.coprime && cands.iter().chain(kept.iter()).any(|o| o.lcm.divides(&c.lcm));
            if !dominated {
                kept.push(c);
            }
        }
        // product criterion
        kept.retain(|c| !c.coprime);

        // prune old pairs whose lcm is divisible by lt(h) strictly
        state.pairs.retain(|pr| {
            if !self.divides(&hl, &pr.lcm) {
                return true;
            }
            let li = hl.lcm(&state.elems[pr.i].lead);
            let lj = hl.lcm(&state.elems[pr.j].lead);
            li == pr.lcm || lj == pr.lcm
        });

        for (g, a) in state.alive.iter_mut().enumerate() {
            if *a && self.divides(&hl, &state.elems[g].lead) {
                *a = false;
            }
        }
        state.elems.push(h);
        state.alive.push(true);

        state.pairs.extend(kept);
        // descending, so pop() yields the smallest
        state.pairs.sort_by(|a, b| b.cmp_select(a));
        Ok(())
    }
}

struct State {
    elems: Vec<Element>,
    alive: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State {
    fn alive_elems(&self) -> Vec<&Element> {
        self.elems
            .iter()
            .zip(&self.alive)
            .filter(|(_, &a)| a)
            .map(|(e, _)| e)
            .collect()
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    key: Key,
    coprime: bool,
}

impl Pair {
    fn new(engine: &Engine<'_>, i: usize, j: usize, lcm: Monomial, coprime: bool) -> Self {
        let key = engine.key(&lcm);
        Pair {
            i,
            j,
            lcm,
            key,
            coprime,
        }
    }

    // normal strategy: lcm degree, then the order on lcm, then indices
    fn cmp_select(&self, other: &Pair) -> Ordering {
        self.lcm
            .degree()
            .cmp(&other.lcm.degree())
            .then_with(|| self.key.cmp(&other.key))
            .then_with(|| (self.i, self.j).cmp(&(other.i, other.j)))
    }
}
