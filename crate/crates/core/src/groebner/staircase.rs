//! Combinatorics of monomial ideals: standard-monomial counts, Hilbert
//! functions, Krull dimension and enumeration.
//!
//! Counting works by slicing along the last variable: the slice of the
//! staircase at height `c` is the staircase of the corners whose last
//! exponent is at most `c`, and it only changes at the finitely many last
//! exponents that occur among the corners.

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// The set of monomials outside a monomial ideal, described by the minimal
/// generators (corners) of the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Staircase {
    nvars: usize,
    corners: Vec<Monomial>,
}

impl Staircase {
    /// Minimalizes `gens` under divisibility.
    pub fn new(nvars: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut gens: Vec<Monomial> = gens.into_iter().collect();
        gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.exps().cmp(b.exps())));
        gens.dedup();
        let mut corners: Vec<Monomial> = Vec::new();
        for g in gens {
            if !corners.iter().any(|c| c.divides(&g)) {
                corners.push(g);
            }
        }
        Staircase { nvars, corners }
    }

    pub fn corners(&self) -> &[Monomial] {
        &self.corners
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `m` lies under the staircase (is divisible by no corner).
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.corners.iter().any(|c| c.divides(m))
    }

    /// Exponent of the pure-power corner in each variable, if present.
    pub fn pure_powers(&self) -> Vec<Option<u32>> {
        let mut out = vec![None; self.nvars];
        for c in &self.corners {
            let mut support = c.support();
            match (support.next(), support.next()) {
                (None, _) => return vec![Some(0); self.nvars],
                (Some(i), None) => out[i] = Some(c.exps()[i]),
                _ => {}
            }
        }
        out
    }

    pub fn is_zero_dimensional(&self) -> bool {
        self.pure_powers().iter().all(Option::is_some)
    }

    /// Number of standard monomials; `None` when infinite.
    pub fn count(&self) -> Option<u128> {
        let rows: Vec<Vec<u32>> = self.corners.iter().map(|c| c.exps().to_vec()).collect();
        count_rec(&rows, self.nvars)
    }

    /// Largest degree of a standard monomial; `Ok(None)` when there are none.
    pub fn max_standard_degree(&self) -> Result<Option<u64>> {
        if !self.is_zero_dimensional() {
            return Err(Error::input("staircase is infinite"));
        }
        let rows: Vec<Vec<u32>> = self.corners.iter().map(|c| c.exps().to_vec()).collect();
        Ok(max_deg_rec(&rows, self.nvars))
    }

    /// `hf[d]` = number of standard monomials of degree `d`, for `d <= max_deg`.
    pub fn hilbert_function(&self, max_deg: u64) -> Vec<u128> {
        let rows: Vec<Vec<u32>> = self.corners.iter().map(|c| c.exps().to_vec()).collect();
        hf_rec(&rows, self.nvars, max_deg)
    }

    /// Krull dimension of `S / (corners)`: the largest set of variables
    /// containing the support of no corner.
    pub fn dimension(&self) -> Result<usize> {
        if self.corners.iter().any(Monomial::is_one) {
            return Err(Error::input("dimension of the unit ideal is undefined"));
        }
        if self.nvars > 24 {
            return Err(Error::limit("dimension search supports at most 24 variables"));
        }
        let masks: Vec<u64> = self.corners.iter().map(Monomial::support_mask).collect();
        let mut best = 0usize;
        for subset in 0u64..(1u64 << self.nvars) {
            let size = subset.count_ones() as usize;
            if size > best && masks.iter().all(|&m| m & !subset != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// All standard monomials, up to `cap` of them.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Monomial>> {
        if !self.is_zero_dimensional() {
            return Err(Error::input("staircase is infinite"));
        }
        let bounds: Vec<u32> = self.pure_powers().into_iter().map(|b| b.unwrap_or(0)).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        self.enum_rec(0, &bounds, &mut cur, &mut out, cap)?;
        Ok(out)
    }

    fn enum_rec(
        &self,
        i: usize,
        bounds: &[u32],
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
        cap: usize,
    ) -> Result<()> {
        if i == self.nvars {
            let m = Monomial::new(cur);
            if self.is_standard(&m) {
                if out.len() >= cap {
                    return Err(Error::limit(format!("more than {cap} standard monomials")));
                }
                out.push(m);
            }
            return Ok(());
        }
        for e in 0..bounds[i] {
            cur[i] = e;
            // prune: if the prefix is already divisible by a corner supported
            // on the first i+1 variables, so is every extension
            let prefix = Monomial::new(cur);
            if !self.is_standard(&prefix) {
                break;
            }
            self.enum_rec(i + 1, bounds, cur, out, cap)?;
        }
        cur[i] = 0;
        Ok(())
    }
}

// Distinct last exponents, ascending, always starting at 0.
fn breakpoints(rows: &[Vec<u32>], k: usize) -> Vec<u32> {
    let mut v: Vec<u32> = rows.iter().map(|r| r[k]).collect();
    v.push(0);
    v.sort_unstable();
    v.dedup();
    v
}

fn slice(rows: &[Vec<u32>], k: usize, c: u32) -> Vec<Vec<u32>> {
    rows.iter().filter(|r| r[k] <= c).map(|r| r[..k].to_vec()).collect()
}

fn count_rec(rows: &[Vec<u32>], n: usize) -> Option<u128> {
    if n == 0 {
        return Some(if rows.is_empty() { 1 } else { 0 });
    }
    if n == 1 {
        return rows.iter().map(|r| r[0] as u128).min();
    }
    let k = n - 1;
    let bps = breakpoints(rows, k);
    let mut total: u128 = 0;
    for (idx, &start) in bps.iter().enumerate() {
        let sub = count_rec(&slice(rows, k, start), k);
        match bps.get(idx + 1) {
            Some(&end) => total += (end - start) as u128 * sub?,
            None => {
                if sub != Some(0) {
                    return None;
                }
            }
        }
    }
    Some(total)
}

fn max_deg_rec(rows: &[Vec<u32>], n: usize) -> Option<u64> {
    if n == 0 {
        return if rows.is_empty() { Some(0) } else { None };
    }
    if n == 1 {
        let b = rows.iter().map(|r| r[0]).min()?;
        return b.checked_sub(1).map(u64::from);
    }
    let k = n - 1;
    let bps = breakpoints(rows, k);
    let mut best: Option<u64> = None;
    for w in bps.windows(2) {
        if let Some(d) = max_deg_rec(&slice(rows, k, w[0]), k) {
            let cand = d + (w[1] - 1) as u64;
            best = Some(best.map_or(cand, |b| b.max(cand)));
        }
    }
    best
}

fn hf_rec(rows: &[Vec<u32>], n: usize, max_deg: u64) -> Vec<u128> {
    let len = max_deg as usize + 1;
    let mut out = vec![0u128; len];
    if n == 0 {
        if rows.is_empty() {
            out[0] = 1;
        }
        return out;
    }
    if n == 1 {
        let b = rows.iter().map(|r| r[0] as u64).min().unwrap_or(u64::MAX);
        for (d, slot) in out.iter_mut().enumerate() {
            if (d as u64) < b {
                *slot = 1;
            }
        }
        return out;
    }
    let k = n - 1;
    let bps = breakpoints(rows, k);
    for (idx, &start) in bps.iter().enumerate() {
        if start as u64 > max_deg {
            break;
        }
        let end = bps.get(idx + 1).map_or(max_deg + 1, |&e| (e as u64).min(max_deg + 1));
        let sub = hf_rec(&slice(rows, k, start), k, max_deg - start as u64);
        for c in start as u64..end {
            for d in 0..=(max_deg - c) as usize {
                out[d + c as usize] += sub[d];
            }
        }
    }
    out
}
