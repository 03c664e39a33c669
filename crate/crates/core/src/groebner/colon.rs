//! `K : u` for an ideal `K ⊇ m^D`, as a submodule computation in the
//! truncated local ring.
//!
//! Inside `(S/m^D)^2` the module generated by `(u, 1)` and `(k, 0)` for
//! `k ∈ K` meets the second component exactly in `K : u`. A basis under a
//! position-over-term local order hands that intersection back directly:
//! its elements led by the second component have zero first component.
//! The local order keeps lowest-degree forms in front, so a non-homogeneous
//! input behaves like its tangent cone instead of dragging high-degree tails.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Term};
use crate::ring::Limits;

use super::engine::Engine;
use super::Staircase;

fn with_position(m: &Monomial, w: u32) -> Monomial {
    let mut exps = m.exps().to_vec();
    exps.push(w);
    Monomial::new(&exps)
}

fn without_position(m: &Monomial) -> Monomial {
    let e = m.exps();
    Monomial::new(&e[..e.len() - 1])
}

/// A local-order basis of `K : u`, truncated at degree `bound`, where
/// `m^bound ⊆ K`.
fn local_colon(
    field: &Field,
    limits: Limits,
    nvars: usize,
    k_gens: &[Vec<Term>],
    u: &[Term],
    bound: u64,
) -> Result<Vec<Vec<Term>>> {
    let mut engine = Engine::new(field, MonomialOrder::Grevlex, nvars + 1, limits);
    engine.local_bound = Some(bound);
    engine.position = Some(nvars);
    let mut gens: Vec<Vec<Term>> = k_gens
        .iter()
        .map(|k| k.iter().map(|(m, c)| (with_position(m, 1), *c)).collect())
        .collect();
    let mut pair: Vec<Term> = u.iter().map(|(m, c)| (with_position(m, 1), *c)).collect();
    pair.push((Monomial::one(nvars + 1), Fq::ONE));
    gens.push(pair);
    let gens = gens.into_iter().map(|g| engine.sorted(engine.truncate(g))).collect();
    let basis = engine.groebner(gens)?;
    Ok(basis
        .into_iter()
        .filter(|e| e.lead().exps()[nvars] == 0)
        .map(|e| e.terms.iter().map(|(m, c)| (without_position(m), *c)).collect())
        .collect())
}

fn pure_power(nvars: usize, i: usize, d: u32) -> Vec<Term> {
    let mut exps = vec![0; nvars];
    exps[i] = d;
    vec![(Monomial::new(&exps), Fq::ONE)]
}

/// Number of monomials of degree below `bound` outside the leading terms,
/// and the smallest `d` with `m^d` inside the ideal.
fn truncated_count(nvars: usize, basis: &[Vec<Term>], bound: u64) -> (u64, u64) {
    if basis.iter().any(|g| g[0].0.is_one()) {
        return (0, 0);
    }
    let st = Staircase::new(nvars, basis.iter().map(|g| g[0].0.clone()));
    let hf = st.hilbert_function(bound.saturating_sub(1));
    let top = hf.iter().rposition(|&c| c > 0).map_or(0, |d| d as u64 + 1);
    (hf.iter().sum::<u128>() as u64, top)
}

/// `dim S/(m^[q] : f^{q-1})` for `q = p^e`, through the chain `I_0 = m`,
/// `I_k = I_{k-1}^[p] : f^{p-1}`.
///
/// Step `k` truncates at a degree `D` with `m^D ⊆ I_{k-1}^[p]`: both
/// `n(p^k - 1) + 1` (as `I_{k-1} ⊇ m^[p^{k-1}]`) and `p(d - 1) + n(p - 1) + 1`
/// when `m^d ⊆ I_{k-1}` qualify, and the smaller one keeps tails short.
pub(crate) fn fedder_chain_colength(f: &Polynomial, e: u32) -> Result<u64> {
    let ring = f.ring();
    let n = ring.nvars();
    let field = ring.field();
    let p = field.p() as u64;
    let u = f.pow(p - 1)?;
    let u_terms = u.terms().to_vec();
    let mut basis: Vec<Vec<Term>> = (0..n).map(|i| pure_power(n, i, 1)).collect();
    let mut count = 1;
    let mut d = 1u64;
    let mut q = 1u64;
    for _ in 0..e {
        q = q
            .checked_mul(p)
            .filter(|&v| v <= u32::MAX as u64)
            .ok_or_else(|| Error::limit("p^e exceeds the exponent range"))?;
        let bound = (n as u64 * (q - 1) + 1).min(p * (d - 1) + n as u64 * (p - 1) + 1);
        // I^[p] = (g^p) + m^[p^k]: the truncated basis together with
        // m^[p^{k-1}] already generates I
        let mut k_gens = Vec::with_capacity(basis.len() + n);
        for g in &basis {
            let mut t = Vec::with_capacity(g.len());
            for (m, c) in g {
                t.push((m.pow(p)?, field.frobenius(*c, 1)));
            }
            k_gens.push(t);
        }
        k_gens.extend((0..n).map(|i| pure_power(n, i, q as u32)));
        basis = local_colon(field, *ring.limits(), n, &k_gens, &u_terms, bound)?;
        (count, d) = truncated_count(n, &basis, bound);
        if count == 0 {
            break;
        }
    }
    Ok(count)
}
