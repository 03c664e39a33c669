//! Trace-form discriminants of `A[z]/(f)` over a polynomial base `A`, with
//! `f` monic in `z`.
//!
//! Elements of `A` and of `A[z]` both live in one ring whose last variable is
//! `z`; "an element of `A`" means a polynomial not involving `z`.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::poly::Polynomial;
use crate::ring::{ensure_same, Ring};

pub type Matrix = Vec<Vec<Polynomial>>;

/// `A[z]/(f)` with the power basis `1, z, ..., z^{n-1}`.
#[derive(Debug, Clone)]
pub struct FiniteExtension {
    ring: Ring,
    z: usize,
    /// `f = z^n + sum_{i<n} coeffs[i] z^i`
    coeffs: Vec<Polynomial>,
}

impl FiniteExtension {
    /// `f` must be monic in the last variable of its ring, of positive degree.
    pub fn new(f: &Polynomial) -> Result<Self> {
        let ring = f.ring().clone();
        let z = ring.nvars() - 1;
        let parts = split_in(f, z);
        let n = parts.len().saturating_sub(1);
        if n == 0 {
            return Err(Error::input(format!("{f} has degree 0 in {}", ring.vars()[z])));
        }
        let lead = &parts[n];
        if !(lead.is_constant() && lead.constant_term() == Fq::ONE) {
            return Err(Error::input(format!("{f} is not monic in {}", ring.vars()[z])));
        }
        Ok(FiniteExtension {
            ring,
            z,
            coeffs: parts[..n].to_vec(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Rank `n` of `A[z]/(f)` over `A`.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn relation(&self) -> Polynomial {
        let mut f = Polynomial::var(&self.ring, self.z)
            .pow(self.degree() as u64)
            .expect("small degree");
        for (i, c) in self.coeffs.iter().enumerate() {
            f = f.add(&c.mul(&self.z_pow(i)).expect("same ring")).expect("same ring");
        }
        f
    }

    fn z_pow(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ring, self.z).pow(i as u64).expect("small degree")
    }

    /// Coordinates of `g mod f` on the power basis.
    pub fn reduce(&self, g: &Polynomial) -> Result<Vec<Polynomial>> {
        ensure_same(&self.ring, g.ring())?;
        let n = self.degree();
        let mut parts = split_in(g, self.z);
        if parts.len() < n {
            parts.resize(n, Polynomial::zero(&self.ring));
        }
        // z^k = z^{k-n} z^n = -z^{k-n} sum_{i<n} coeffs[i] z^i
        for k in (n..parts.len()).rev() {
            let c = std::mem::replace(&mut parts[k], Polynomial::zero(&self.ring));
            if c.is_zero() {
                continue;
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                let t = c.mul(a)?;
                parts[k - n + i] = parts[k - n + i].sub(&t)?;
            }
        }
        parts.truncate(n);
        Ok(parts)
    }

    /// Multiplication by `g`: column `i` holds the coordinates of `g z^i`.
    pub fn mult_matrix(&self, g: &Polynomial) -> Result<Matrix> {
        let n = self.degree();
        let mut m = vec![vec![Polynomial::zero(&self.ring); n]; n];
        for i in 0..n {
            let col = self.reduce(&g.mul(&self.z_pow(i))?)?;
            for (row, c) in m.iter_mut().zip(col) {
                row[i] = c;
            }
        }
        Ok(m)
    }

    pub fn trace(&self, g: &Polynomial) -> Result<Polynomial> {
        let m = self.mult_matrix(g)?;
        let mut t = Polynomial::zero(&self.ring);
        for (i, row) in m.iter().enumerate() {
            t = t.add(&row[i])?;
        }
        Ok(t)
    }

    /// `Tr(b_i b_j)` for an arbitrary `A`-basis `b`.
    pub fn trace_form(&self, basis: &[Polynomial]) -> Result<Matrix> {
        let n = basis.len();
        let mut t = vec![vec![Polynomial::zero(&self.ring); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.trace(&basis[i].mul(&basis[j])?)?;
                t[j][i] = v.clone();
                t[i][j] = v;
            }
        }
        Ok(t)
    }

    pub fn power_basis(&self) -> Vec<Polynomial> {
        (0..self.degree()).map(|i| self.z_pow(i)).collect()
    }

    /// `Tr(z^{i+j})`, computed from the traces of `z^0, ..., z^{2n-2}`.
    pub fn trace_matrix(&self) -> Result<Matrix> {
        let n = self.degree();
        let traces = (0..2 * n - 1)
            .map(|k| self.trace(&self.z_pow(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..n)
            .map(|i| (0..n).map(|j| traces[i + j].clone()).collect())
            .collect())
    }

    /// `det (Tr(z^{i+j}))`, an element of `A`.
    pub fn discriminant(&self) -> Result<Polynomial> {
        determinant(&self.trace_matrix()?)
    }

    /// Discriminant of `A[z]/(f + eps)`; `eps` must have `z`-degree below `n`.
    pub fn perturbed(&self, eps: &Polynomial) -> Result<FiniteExtension> {
        ensure_same(&self.ring, eps.ring())?;
        if split_in(eps, self.z).len() > self.degree() {
            return Err(Error::input("perturbation must have z-degree below the rank"));
        }
        FiniteExtension::new(&self.relation().add(eps)?)
    }
}

/// Coefficients of `g` as a polynomial in variable `z`, lowest first.
fn split_in(g: &Polynomial, z: usize) -> Vec<Polynomial> {
    let ring = g.ring();
    let mut buckets: Vec<Vec<_>> = Vec::new();
    for (m, c) in g.terms() {
        let k = m.exps()[z] as usize;
        if buckets.len() <= k {
            buckets.resize(k + 1, Vec::new());
        }
        let mut exps = m.exps().to_vec();
        exps[z] = 0;
        buckets[k].push((crate::monomial::Monomial::new(&exps), *c));
    }
    buckets
        .into_iter()
        .map(|terms| Polynomial::from_terms(ring, terms))
        .collect()
}

/// Fraction-free (Bareiss) determinant; every division is exact.
pub fn determinant(m: &Matrix) -> Result<Polynomial> {
    let n = m.len();
    if n == 0 {
        return Err(Error::input("empty matrix"));
    }
    let ring = m[0][0].ring().clone();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::input("matrix is not square"));
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = Polynomial::one(&ring);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(Polynomial::zero(&ring)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// Outcome of comparing `Dis(f)` with `Dis(f + eps)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub base: Polynomial,
    pub perturbed: Polynomial,
    /// Smallest total degree in `eps`'s coefficients, i.e. the `M` with
    /// `eps ∈ m_A^M`; `None` for `eps = 0`.
    pub eps_order: Option<u64>,
    /// Largest `n'` with `Dis(f) ≡ Dis(f + eps) mod m_A^{n'}`; `None` means
    /// congruent to every order.
    pub order: Option<u64>,
    pub target: u64,
    pub pass: bool,
}

pub fn disc_congruence_check(ext: &FiniteExtension, eps: &Polynomial, target: u64) -> Result<CongruenceReport> {
    let base = ext.discriminant()?;
    let perturbed = ext.perturbed(eps)?.discriminant()?;
    let order = base.sub(&perturbed)?.order();
    let eps_order = split_in(eps, ext.z).iter().filter_map(Polynomial::order).min();
    Ok(CongruenceReport {
        pass: order.is_none_or(|o| o >= target),
        base,
        perturbed,
        eps_order,
        order,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::parse::parse_poly;
    use crate::ring::RingSpec;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let r = RingSpec::new(Field::prime(7).unwrap(), &["u", "v"]).unwrap();
        let p = |s: &str| parse_poly(s, &r).unwrap();
        let m = vec![
            vec![p("u"), p("v + 1"), p("2")],
            vec![p("u*v"), p("0"), p("u^2")],
            vec![p("1"), p("v"), p("u + v")],
        ];
        let cof = m[0][0]
            .mul(
                &m[1][1]
                    .mul(&m[2][2])
                    .unwrap()
                    .sub(&m[1][2].mul(&m[2][1]).unwrap())
                    .unwrap(),
            )
            .unwrap()
            .sub(
                &m[0][1]
                    .mul(
                        &m[1][0]
                            .mul(&m[2][2])
                            .unwrap()
                            .sub(&m[1][2].mul(&m[2][0]).unwrap())
                            .unwrap(),
                    )
                    .unwrap(),
            )
            .unwrap()
            .add(
                &m[0][2]
                    .mul(
                        &m[1][0]
                            .mul(&m[2][1])
                            .unwrap()
                            .sub(&m[1][1].mul(&m[2][0]).unwrap())
                            .unwrap(),
                    )
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(determinant(&m).unwrap(), cof);
        let zero_col = vec![vec![p("0"), p("u")], vec![p("0"), p("v")]];
        assert!(determinant(&zero_col).unwrap().is_zero());
        let swap = vec![vec![p("0"), p("u")], vec![p("v"), p("1")]];
        assert_eq!(determinant(&swap).unwrap(), p("-u*v"));
    }
}
