use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::monomial::{Monomial, MonomialOrder};
use crate::parse::parse_poly;
use crate::poly::Polynomial;
use crate::ring::{ensure_same, Ring};

use super::{Engine, GroebnerBasis, Staircase};

/// An ideal given by generators, with reduced Gröbner bases cached per
/// monomial order.
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    cache: Mutex<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "Ideal({})", gens.join(", "))
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: &Ring, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            ensure_same(ring, g.ring())?;
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<Self> {
        let polys = gens.iter().map(|s| parse_poly(s, ring)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn unit(ring: &Ring) -> Self {
        Ideal::new(ring, vec![Polynomial::one(ring)]).expect("same ring")
    }

    /// The homogeneous maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(ring: &Ring) -> Self {
        let gens = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        Ideal::new(ring, gens).expect("same ring")
    }

    /// `m^[p^e] = (x_1^{p^e}, ..., x_n^{p^e})`.
    pub fn maximal_frobenius(ring: &Ring, e: u32) -> Result<Self> {
        Ideal::maximal(ring).frobenius_power(e)
    }

    /// `m^s`, generated by all monomials of degree `s`.
    pub fn maximal_power(ring: &Ring, s: u32) -> Result<Self> {
        let gens = monomials_of_degree(ring.nvars(), s as u64, 2_000_000)?
            .into_iter()
            .map(|m| Polynomial::monomial(ring, m, Fq::ONE))
            .collect();
        Ideal::new(ring, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Every generator lies in `m = (x_1, ..., x_n)`.
    pub fn is_in_maximal(&self) -> bool {
        self.gens.iter().all(|g| g.constant_term().is_zero())
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial>) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Ideal::new(&self.ring, gens)
    }

    pub fn groebner_basis(&self, order: MonomialOrder) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.cache.lock().expect("cache lock").get(&order) {
            return Ok(gb.clone());
        }
        let engine = Engine::new(self.ring.field(), order, self.ring.nvars(), *self.ring.limits());
        let gens = self.gens.iter().map(|g| engine.sorted(g.terms().to_vec())).collect();
        let elements = engine.groebner(gens)?;
        let gb = Arc::new(GroebnerBasis::from_elements(self.ring.clone(), order, elements));
        // deterministic, so a concurrent insertion holds an identical basis
        let mut cache = self.cache.lock().expect("cache lock");
        Ok(cache.entry(order).or_insert(gb).clone())
    }

    pub fn grevlex(&self) -> Result<Arc<GroebnerBasis>> {
        self.groebner_basis(MonomialOrder::Grevlex)
    }

    /// Check that every generator reduces to zero against every cached basis.
    pub fn verify_cache(&self) -> Result<()> {
        let cache = self.cache.lock().expect("cache lock").clone();
        for (order, gb) in cache {
            for g in &self.gens {
                if !gb.contains(g)? {
                    return Err(Error::invariant(format!(
                        "generator {g} does not reduce to 0 against the cached {} basis",
                        order.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.grevlex()?.contains(f)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.grevlex()?.is_unit())
    }

    pub fn is_subset_of(&self, other: &Ideal) -> Result<bool> {
        ensure_same(&self.ring, &other.ring)?;
        let gb = other.grevlex()?;
        for g in &self.gens {
            if !gb.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of ideals via their reduced bases under `order`.
    pub fn equals(&self, other: &Ideal, order: MonomialOrder) -> Result<bool> {
        ensure_same(&self.ring, &other.ring)?;
        Ok(*self.groebner_basis(order)? == *other.groebner_basis(order)?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        ensure_same(&self.ring, &other.ring)?;
        self.with_generators(other.gens.iter().cloned())
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        ensure_same(&self.ring, &other.ring)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b)?);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `I^[p^e]`, generated by the `p^e`-th powers of the generators.
    pub fn frobenius_power(&self, e: u32) -> Result<Ideal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.frobenius_pow(e))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// `I ∩ (x_{k+1}, ..., x_n)`-subring, as an ideal of the ring on the last
    /// `n - k` variables.
    pub fn eliminate(&self, k: usize) -> Result<Ideal> {
        let n = self.ring.nvars();
        if k == 0 || k >= n {
            return Err(Error::input(format!(
                "can eliminate between 1 and {} variables, not {k}",
                n - 1
            )));
        }
        let sub = self.ring.with_vars(self.ring.vars()[k..].to_vec())?;
        self.eliminate_into(k, &sub)
    }

    fn eliminate_into(&self, k: usize, sub: &Ring) -> Result<Ideal> {
        let gb = self.groebner_basis(MonomialOrder::Block(k))?;
        let n = self.ring.nvars();
        let mut map = vec![0usize; n];
        for (i, slot) in map.iter_mut().enumerate().skip(k) {
            *slot = i - k;
        }
        let mut gens = Vec::new();
        for p in gb.polynomials() {
            let lead = p.leading_term(MonomialOrder::Block(k))?.0;
            if lead.exps()[..k].iter().all(|&e| e == 0) {
                gens.push(p.remap(sub, &map)?);
            }
        }
        Ideal::new(sub, gens)
    }

    /// `I ∩ J` by eliminating a tag variable `w` from `w I + (1 - w) J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        ensure_same(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let tag = fresh_name(&self.ring, "_w");
        let big = self.ring.prepend_vars(&[tag])?;
        let n = self.ring.nvars();
        let shift: Vec<usize> = (1..=n).collect();
        let w = Polynomial::var(&big, 0);
        let one_minus_w = Polynomial::one(&big).sub(&w)?;
        let mut gens = Vec::with_capacity(self.gens.len() + other.gens.len());
        for f in &self.gens {
            gens.push(w.mul(&f.remap(&big, &shift)?)?);
        }
        for g in &other.gens {
            gens.push(one_minus_w.mul(&g.remap(&big, &shift)?)?);
        }
        Ideal::new(&big, gens)?.eliminate_into(1, &self.ring)
    }

    /// `I : (f)`, as `(I ∩ (f)) / f`.
    pub fn colon_poly(&self, f: &Polynomial) -> Result<Ideal> {
        ensure_same(&self.ring, f.ring())?;
        if f.is_zero() {
            return Err(Error::input("colon by the zero ideal"));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let principal = Ideal::new(&self.ring, vec![f.clone()])?;
        let inter = self.intersect(&principal)?;
        let gens = inter
            .gens
            .iter()
            .map(|g| g.div_exact(f))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::invariant(format!("intersection with (f) not divisible by f: {e}")))?;
        Ideal::new(&self.ring, gens)
    }

    /// `I : J = {g : gJ ⊆ I}`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        ensure_same(&self.ring, &other.ring)?;
        if other.is_zero() {
            return Err(Error::input("colon by the zero ideal"));
        }
        let mut acc: Option<Ideal> = None;
        for f in &other.gens {
            let part = self.colon_poly(f)?;
            acc = Some(match acc {
                None => part,
                Some(a) => a.intersect(&part)?,
            });
        }
        Ok(acc.expect("nonzero ideal has a generator"))
    }

    /// Krull dimension of `S/I`.
    pub fn krull_dim(&self) -> Result<usize> {
        let gb = self.grevlex()?;
        if gb.is_unit() {
            return Err(Error::input("the unit ideal has an empty zero set"));
        }
        gb.staircase().dimension()
    }

    fn check_local_artinian(&self) -> Result<Arc<GroebnerBasis>> {
        if !self.is_in_maximal() {
            return Err(Error::input(
                "ideal is not contained in the maximal ideal (x_1, ..., x_n)",
            ));
        }
        let gb = self.grevlex()?;
        if gb.is_unit() {
            return Err(Error::input(
                "ideal is not contained in the maximal ideal (x_1, ..., x_n)",
            ));
        }
        if !gb.staircase().is_zero_dimensional() {
            return Err(Error::input("ideal is not zero-dimensional"));
        }
        Ok(gb)
    }

    /// `dim_{F_q} S/I`, the number of standard monomials.
    pub fn colength(&self) -> Result<u64> {
        let gb = self.check_local_artinian()?;
        let count = gb
            .staircase()
            .count()
            .ok_or_else(|| Error::invariant("zero-dimensional staircase with infinite count"))?;
        u64::try_from(count).map_err(|_| Error::limit("colength exceeds 64 bits"))
    }

    /// `dim S/I` for an ideal known to contain `m^bound`, computed with the
    /// local degree order on `S/m^bound`. Much cheaper than [`Ideal::colength`]
    /// for non-homogeneous ideals, whose global bases drag along high-degree
    /// tails. The containment is the caller's obligation.
    pub(crate) fn local_colength(&self, bound: u64) -> Result<u64> {
        let n = self.ring.nvars();
        let mut engine = Engine::new(self.ring.field(), MonomialOrder::Grevlex, n, *self.ring.limits());
        engine.local_bound = Some(bound);
        let gens = self
            .gens
            .iter()
            .map(|g| engine.sorted(engine.truncate(g.terms().to_vec())))
            .collect();
        let basis = engine.groebner(gens)?;
        if basis.iter().any(|e| e.lead().is_one()) {
            return Ok(0);
        }
        // m^bound is zero here: count standard monomials of degree < bound
        let st = Staircase::new(n, basis.iter().map(|e| e.lead().clone()));
        let count: u128 = st.hilbert_function(bound.saturating_sub(1)).iter().sum();
        u64::try_from(count).map_err(|_| Error::limit("colength exceeds 64 bits"))
    }

    /// Smallest `N >= 1` with `m^N ⊆ I`.
    pub fn m_power_in(&self) -> Result<u64> {
        let gb = self.check_local_artinian()?;
        let st = gb.staircase();
        // a standard monomial of degree D is a non-member, so m^D is not inside
        let lower = st.max_standard_degree()?.map_or(1, |d| d + 1);
        let homogeneous = gb
            .element_terms()
            .all(|t| t.first().map(|f| f.0.degree()) == t.last().map(|l| l.0.degree()));
        if homogeneous {
            return Ok(lower);
        }
        // an m-primary ideal of colength L contains m^L
        let upper = st.count().unwrap_or(0) as u64;
        let n = self.ring.nvars();
        for deg in lower..=upper.max(lower) {
            let monos = monomials_of_degree(n, deg, 5_000_000)?;
            let mut all_in = true;
            for m in &monos {
                if !gb.contains_monomial(m)? {
                    all_in = false;
                    break;
                }
            }
            if all_in {
                return Ok(deg);
            }
        }
        Err(Error::input(
            "ideal is zero-dimensional but not primary to (x_1, ..., x_n)",
        ))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Polynomial::is_homogeneous)
    }
}

pub(crate) fn fresh_name(ring: &Ring, base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while ring.var_index(&name).is_some() {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// All monomials of total degree `deg` in `n` variables.
pub fn monomials_of_degree(n: usize, deg: u64, cap: usize) -> Result<Vec<Monomial>> {
    let deg = u32::try_from(deg).map_err(|_| Error::limit("degree exceeds the exponent range"))?;
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>, cap: usize) -> Result<()> {
        if i + 1 == cur.len() {
            cur[i] = left;
            if out.len() >= cap {
                return Err(Error::limit(format!("more than {cap} monomials of one degree")));
            }
            out.push(Monomial::new(cur));
            return Ok(());
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out, cap)?;
        }
        cur[i] = 0;
        Ok(())
    }
    rec(0, deg, &mut cur, &mut out, cap)?;
    Ok(out)
}

/// Kernel of `F_q[a_1, ..., a_s] -> S`, `a_i -> gens[i]`, as an ideal of a
/// new ring on variables `a1, ..., as`.
pub fn subalgebra_presentation(gens: &[Polynomial]) -> Result<Ideal> {
    let Some(first) = gens.first() else {
        return Err(Error::input("at least one generator is required"));
    };
    let ring = first.ring().clone();
    for g in gens {
        ensure_same(&ring, g.ring())?;
        if g.is_constant() {
            return Err(Error::input(format!("generator {g} is constant")));
        }
    }
    let n = ring.nvars();
    let s = gens.len();
    let prefix = ["a", "b", "u", "v", "w"]
        .into_iter()
        .find(|pre| (1..=s).all(|i| ring.var_index(&format!("{pre}{i}")).is_none()))
        .unwrap_or("_a");
    let new_vars: Vec<String> = (1..=s).map(|i| format!("{prefix}{i}")).collect();
    let target = ring.with_vars(new_vars.clone())?;
    let mut all_vars = ring.vars().to_vec();
    all_vars.extend(new_vars);
    let big = ring.with_vars(all_vars)?;
    let embed: Vec<usize> = (0..n).collect();
    let mut rel = Vec::with_capacity(s);
    for (i, g) in gens.iter().enumerate() {
        let a = Polynomial::var(&big, n + i);
        rel.push(a.sub(&g.remap(&big, &embed)?)?);
    }
    Ideal::new(&big, rel)?.eliminate_into(n, &target)
}

/// Squarefreeness of `f` over a perfect field: some partial derivative is
/// nonzero and the singular locus `V(f, ∂f)` has codimension at least 2.
pub fn is_squarefree_hypersurface(f: &Polynomial) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::input("constant polynomial is not a hypersurface"));
    }
    let ring = f.ring();
    let n = ring.nvars();
    let derivs: Vec<Polynomial> = (0..n).map(|i| f.derivative(i)).collect();
    if derivs.iter().all(Polynomial::is_zero) {
        // a p-th power over a perfect field
        return Ok(false);
    }
    let mut gens = vec![f.clone()];
    gens.extend(derivs);
    let sing = Ideal::new(ring, gens)?;
    if sing.is_unit()? {
        return Ok(true);
    }
    Ok(sing.krull_dim()? + 2 <= n)
}
