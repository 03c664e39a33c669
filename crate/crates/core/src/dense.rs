//! Dense linear-algebra reference computations.
//!
//! Nothing here touches the Gröbner engine: every answer comes from row
//! reduction of explicit spanning sets inside a finite set of monomials.
//! These routines are slow by design and exist to cross-check the fast paths.

use std::collections::HashMap;

use crate::field::{Field, Fq};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

type SparseRow = Vec<(u64, Fq)>;

/// Incremental row echelon form over `F_q` with sparse rows keyed by column.
pub struct Echelon<'a> {
    field: &'a Field,
    pivots: HashMap<u64, SparseRow>,
}

impl<'a> Echelon<'a> {
    pub fn new(field: &'a Field) -> Self {
        Echelon {
            field,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` (any column order) to zero or to a row whose leading
    /// column has no pivot yet. Leading column = largest column index.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let mut row = normalize(self.field, row);
        while let Some(&(lead, c)) = row.last() {
            let Some(piv) = self.pivots.get(&lead) else { break };
            row = axpy(self.field, &row, self.field.neg(c), piv);
        }
        row
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some(&(lead, c)) = row.last() else { return false };
        let inv = self.field.inv(c).expect("nonzero");
        let row = row.into_iter().map(|(k, v)| (k, self.field.mul(v, inv))).collect();
        self.pivots.insert(lead, row);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }
}

fn normalize(field: &Field, mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|&(k, _)| k);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (k, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = field.add(last.1, v),
            _ => out.push((k, v)),
        }
    }
    out.retain(|&(_, v)| !v.is_zero());
    out
}

// a + s*b for rows sorted ascending by column
fn axpy(field: &Field, a: &SparseRow, s: Fq, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(s, b[j].1)));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(s, b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// All monomials in `n` variables of total degree at most `max_deg`.
pub fn monomials_up_to(n: usize, max_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(Monomial::new(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_deg, &mut cur, &mut out);
    out
}

fn index_of(monos: &[Monomial]) -> HashMap<&Monomial, u64> {
    monos.iter().enumerate().map(|(i, m)| (m, i as u64)).collect()
}

fn row_in(index: &HashMap<&Monomial, u64>, terms: impl IntoIterator<Item = (Monomial, Fq)>) -> Option<SparseRow> {
    let mut row = Vec::new();
    for (m, c) in terms {
        row.push((*index.get(&m)?, c));
    }
    Some(row)
}

fn shifted(g: &Polynomial, mu: &Monomial) -> Vec<(Monomial, Fq)> {
    g.terms()
        .iter()
        .map(|(m, c)| (m.mul(mu).expect("small exponents"), *c))
        .collect()
}

/// Membership of `f` in `(gens)` witnessed in degrees `<= max_deg`: `f` lies
/// in the span of all `mu * g` of total degree at most `max_deg`. Exact for
/// homogeneous generators; otherwise a sound one-sided test.
pub fn member_up_to_degree(gens: &[Polynomial], f: &Polynomial, max_deg: u32) -> bool {
    let Some(first) = gens.first() else { return f.is_zero() };
    let field = first.field();
    let n = first.ring().nvars();
    let monos = monomials_up_to(n, max_deg);
    let index = index_of(&monos);
    let mut ech = Echelon::new(field);
    for g in gens {
        let Some(gd) = g.total_degree() else { continue };
        for mu in &monos {
            if mu.degree() + gd <= max_deg as u64 {
                let row = row_in(&index, shifted(g, mu)).expect("degree bounded");
                ech.insert(row);
            }
        }
    }
    match row_in(&index, f.terms().iter().cloned()) {
        Some(row) => ech.contains(row),
        None => false,
    }
}

/// Exact membership for ideals known to contain `m^k`: work in `S/m^k`,
/// where `(gens)` is spanned by the truncations of `mu * g` with `deg mu < k`.
pub fn member_mod_m_power(gens: &[Polynomial], f: &Polynomial, k: u32) -> bool {
    let Some(first) = gens.first() else { return f.is_zero() };
    let field = first.field();
    let n = first.ring().nvars();
    let monos = monomials_up_to(n, k.saturating_sub(1));
    let index = index_of(&monos);
    let keep = |terms: Vec<(Monomial, Fq)>| terms.into_iter().filter(|(m, _)| m.degree() < k as u64);
    let mut ech = Echelon::new(field);
    for g in gens {
        for mu in &monos {
            let row = row_in(&index, keep(shifted(g, mu))).expect("truncated");
            ech.insert(row);
        }
    }
    let row = row_in(&index, keep(f.terms().to_vec())).expect("truncated");
    ech.contains(row)
}

/// `dim S/((gens) + m^k)` by row reduction in `S/m^k`.
pub fn colength_mod_m_power(gens: &[Polynomial], n: usize, field: &Field, k: u32) -> u64 {
    let monos = monomials_up_to(n, k.saturating_sub(1));
    let index = index_of(&monos);
    let mut ech = Echelon::new(field);
    for g in gens {
        for mu in &monos {
            let terms = shifted(g, mu).into_iter().filter(|(m, _)| m.degree() < k as u64);
            ech.insert(row_in(&index, terms).expect("truncated"));
        }
    }
    (monos.len() - ech.rank()) as u64
}

/// `dim S/((gens) + m^[q])` for generators homogeneous with respect to the
/// positive integer weight vector `weights`.
///
/// The quotient `S/m^[q]` has the box monomials as a basis and `(gens)` is
/// spanned there by the truncated products `mu * g`. Homogeneity splits that
/// span into one independent block per target weight, so only one block is
/// ever held in memory.
pub fn box_colength_weighted(gens: &[Polynomial], n: usize, field: &Field, q: u32, weights: &[u64]) -> u64 {
    assert_eq!(weights.len(), n);
    assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
    let weight = |exps: &[u32]| -> u64 { exps.iter().zip(weights).map(|(&e, &w)| e as u64 * w).sum() };
    let code = |exps: &[u32]| -> u64 { exps.iter().rev().fold(0u64, |acc, &e| acc * q as u64 + e as u64) };
    let gens: Vec<(&Polynomial, u64)> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let w = weight(g.terms()[0].0.exps());
            assert!(
                g.terms().iter().all(|(m, _)| weight(m.exps()) == w),
                "generator is not weighted homogeneous"
            );
            (g, w)
        })
        .collect();
    let max_weight: u64 = weights.iter().map(|&w| w * (q as u64 - 1)).sum();
    let total = (q as u64).pow(n as u32);
    let mut rank = 0u64;
    for target in 0..=max_weight {
        let mut ech = Echelon::new(field);
        for &(g, gw) in &gens {
            let Some(src) = target.checked_sub(gw) else { continue };
            for_each_box_monomial_of_weight(n, q, weights, src, &mut |mu| {
                let row: SparseRow = g
                    .terms()
                    .iter()
                    .filter_map(|(m, c)| {
                        let prod: Vec<u32> = m.exps().iter().zip(mu).map(|(a, b)| a + b).collect();
                        prod.iter().all(|&e| e < q).then(|| (code(&prod), *c))
                    })
                    .collect();
                ech.insert(row);
            });
        }
        rank += ech.rank() as u64;
    }
    total - rank
}

fn for_each_box_monomial_of_weight(n: usize, q: u32, weights: &[u64], w: u64, f: &mut dyn FnMut(&[u32])) {
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u64, q: u32, weights: &[u64], cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        let n = cur.len();
        if i + 1 == n {
            if left.is_multiple_of(weights[i]) && left / weights[i] < q as u64 {
                cur[i] = (left / weights[i]) as u32;
                f(cur);
            }
            return;
        }
        let mut e = 0u32;
        while e < q && e as u64 * weights[i] <= left {
            cur[i] = e;
            rec(i + 1, left - e as u64 * weights[i], q, weights, cur, f);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, w, q, weights, &mut cur, f);
}

/// `f^t` truncated to the box `[0, q)^n`, by repeated multiplication.
pub fn power_in_box(f: &Polynomial, t: u64, q: u32) -> Polynomial {
    let bounds = vec![q; f.ring().nvars()];
    let mut acc = Polynomial::one(f.ring()).truncate(&bounds);
    for _ in 0..t {
        acc = acc.mul(f).expect("same ring").truncate(&bounds);
    }
    acc
}

/// Splitting number of the hypersurface `S/(f)` at level `q = p^e`, as the
/// rank of multiplication by `f^{q-1}` on `S/m^[q]`, for `f` weighted
/// homogeneous.
pub fn hypersurface_splitting_number(f: &Polynomial, q: u32, weights: &[u64]) -> u64 {
    let n = f.ring().nvars();
    let big = power_in_box(f, q as u64 - 1, q);
    let total = (q as u64).pow(n as u32);
    total - box_colength_weighted(&[big], n, f.field(), q, weights)
}

/// `dim S/((gens) + m^[q])` with no grading: one echelon over the whole box.
pub fn box_colength(gens: &[Polynomial], n: usize, field: &Field, q: u32) -> u64 {
    let code = |exps: &[u32]| -> u64 { exps.iter().rev().fold(0u64, |acc, &e| acc * q as u64 + e as u64) };
    let total = (q as u64).pow(n as u32);
    let mut ech = Echelon::new(field);
    for g in gens.iter().filter(|g| !g.is_zero()) {
        for c in 0..total {
            let mut mu = vec![0u32; n];
            let mut rest = c;
            for slot in mu.iter_mut() {
                *slot = (rest % q as u64) as u32;
                rest /= q as u64;
            }
            let row: SparseRow = g
                .terms()
                .iter()
                .filter_map(|(m, coef)| {
                    let prod: Vec<u32> = m.exps().iter().zip(&mu).map(|(a, b)| a + b).collect();
                    prod.iter().all(|&e| e < q).then(|| (code(&prod), *coef))
                })
                .collect();
            ech.insert(row);
        }
    }
    total - ech.rank() as u64
}

/// Splitting number of `S/(f)` for arbitrary `f`, as the rank of
/// multiplication by `f^{q-1}` on `S/m^[q]`.
pub fn hypersurface_splitting_number_ungraded(f: &Polynomial, q: u32) -> u64 {
    let n = f.ring().nvars();
    let big = power_in_box(f, q as u64 - 1, q);
    (q as u64).pow(n as u32) - box_colength(&[big], n, f.field(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::ring::RingSpec;

    #[test]
    fn box_colength_of_small_examples() {
        let r = RingSpec::new(Field::prime(3).unwrap(), &["x", "y", "t"]).unwrap();
        let f = parse_poly("x*y + t^2", &r).unwrap();
        assert_eq!(box_colength_weighted(&[f], 3, r.field(), 3, &[1, 1, 1]), 13);
        assert_eq!(box_colength_weighted(&[], 3, r.field(), 3, &[1, 1, 1]), 27);
    }

    #[test]
    fn truncated_colength_and_membership() {
        let r = RingSpec::new(Field::prime(5).unwrap(), &["x", "y"]).unwrap();
        let f = parse_poly("x^2", &r).unwrap();
        // colength of (x^2) + m^s is 2s - 1
        for s in 1..6 {
            assert_eq!(
                colength_mod_m_power(std::slice::from_ref(&f), 2, r.field(), s),
                2 * s as u64 - 1
            );
        }
        let g = parse_poly("x^2*y + x^3", &r).unwrap();
        assert!(member_up_to_degree(std::slice::from_ref(&f), &g, 4));
        assert!(!member_up_to_degree(
            std::slice::from_ref(&f),
            &parse_poly("x*y", &r).unwrap(),
            4
        ));
        assert!(member_mod_m_power(&[f], &parse_poly("y^3", &r).unwrap(), 3));
    }
}
