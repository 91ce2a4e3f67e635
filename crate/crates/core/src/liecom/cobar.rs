use std::collections::BTreeMap;

use crate::algcog::{complex_of, Vector};
use crate::error::{Error, Result};
use crate::linhom::{format_scalar, sign, ChainComplex, LinComb};
use crate::verdict::Verdict;

use super::coalgebra::CurvedLieCoalgebra;

/// A monomial of S(s⁻¹C): generator indices in nondecreasing order, odd ones
/// at most once.
pub type Monomial = Vec<usize>;

/// Ω_C C = S(s⁻¹C) with the derivation
/// d(s⁻¹x) = θ(x)1 − s⁻¹dx − Σ (−1)^{|x₁|} s⁻¹x₁ · s⁻¹x₂,
/// truncated by a positive weight on the basis of C.
#[derive(Clone, Debug)]
pub struct ComCobar {
    coalgebra: CurvedLieCoalgebra,
    weights: Vec<usize>,
    max_weight: usize,
}

impl ComCobar {
    pub fn coalgebra(&self) -> &CurvedLieCoalgebra {
        &self.coalgebra
    }

    pub fn gen_degree(&self, i: usize) -> i64 {
        self.coalgebra.degree(i) - 1
    }

    pub fn degree(&self, m: &[usize]) -> i64 {
        m.iter().map(|g| self.gen_degree(*g)).sum()
    }

    pub fn weight(&self, m: &[usize]) -> usize {
        m.iter().map(|g| self.weights[*g]).sum()
    }

    pub fn show(&self, m: &[usize]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        m.iter().map(|g| format!("s⁻¹{}", self.coalgebra.labels()[*g])).collect::<Vec<_>>().join("·")
    }

    pub fn show_poly(&self, z: &LinComb<Monomial>) -> String {
        if z.is_zero() {
            return "0".into();
        }
        z.iter().map(|(m, c)| format!("{}*{}", format_scalar(c), self.show(m))).collect::<Vec<_>>().join(" + ")
    }

    /// Sorts a product of generators with the Koszul sign; zero if an odd generator repeats.
    pub fn normalize(&self, mut m: Vec<usize>) -> Option<(i64, Monomial)> {
        let mut s = 0i64;
        for i in 1..m.len() {
            let mut j = i;
            while j > 0 && m[j - 1] > m[j] {
                s += self.gen_degree(m[j - 1]) * self.gen_degree(m[j]);
                m.swap(j - 1, j);
                j -= 1;
            }
        }
        if m.windows(2).any(|p| p[0] == p[1] && self.gen_degree(p[0]) % 2 != 0) {
            return None;
        }
        Some((s, m))
    }

    pub fn mul(&self, a: &LinComb<Monomial>, b: &LinComb<Monomial>) -> LinComb<Monomial> {
        let mut out = LinComb::zero();
        for (x, c) in a {
            for (y, e) in b {
                if let Some((s, m)) = self.normalize([x.as_slice(), y].concat()) {
                    out.add_term(m, c * e * sign(s));
                }
            }
        }
        out
    }

    pub fn d_gen(&self, i: usize) -> LinComb<Monomial> {
        let c = &self.coalgebra;
        let mut out = LinComb::zero();
        out.add_term(Vec::new(), c.theta_basis(i).clone());
        for (j, x) in c.d_basis(i) {
            out.add_term(vec![*j], -x.clone());
        }
        for ((a, b), x) in c.delta_basis(i) {
            if let Some((s, m)) = self.normalize(vec![*a, *b]) {
                out.add_term(m, -(x * sign(c.degree(*a) + s)));
            }
        }
        out
    }

    /// The derivation on a monomial.
    pub fn d_monomial(&self, m: &[usize]) -> LinComb<Monomial> {
        let mut out = LinComb::zero();
        let mut before = 0i64;
        for (k, g) in m.iter().enumerate() {
            let s = sign(before);
            let pre = LinComb::single(m[..k].to_vec());
            let post = LinComb::single(m[k + 1..].to_vec());
            out.add_scaled(&self.mul(&self.mul(&pre, &self.d_gen(*g)), &post), &s);
            before += self.gen_degree(*g);
        }
        out
    }

    pub fn d(&self, z: &LinComb<Monomial>) -> LinComb<Monomial> {
        z.map_linear(|m| self.d_monomial(m))
    }

    /// Monomials of weight ≤ `max_weight`, by weight.
    pub fn basis(&self) -> Vec<Monomial> {
        let n = self.coalgebra.dim();
        let mut out = vec![Vec::new()];
        // extend monomials by generators ≥ the last one
        let mut frontier: Vec<Monomial> = vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.last().copied().unwrap_or(0);
                for g in start..n {
                    if m.last() == Some(&g) && self.gen_degree(g) % 2 != 0 {
                        continue;
                    }
                    if self.weight(m) + self.weights[g] <= self.max_weight {
                        let mut e = m.clone();
                        e.push(g);
                        next.push(e);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort_by_key(|m| (self.weight(m), m.clone()));
        out
    }

    pub fn check_square_zero(&self) -> Verdict {
        let mut v = Verdict::new();
        for m in self.basis() {
            v.tick();
            let dd = self.d(&self.d_monomial(&m));
            if !dd.is_zero() {
                v.fail(format!("d² at {}", self.show(&m)), self.show_poly(&dd));
            }
        }
        v
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        let basis = self.basis();
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let labels: Vec<String> = basis.iter().map(|m| self.show(m)).collect();
        let degrees: Vec<i64> = basis.iter().map(|m| self.degree(m)).collect();
        complex_of(&labels, &degrees, &|i| -> Vector { self.d_monomial(&basis[i]).iter().map(|(m, c)| (index[m], c.clone())).collect() })
    }
}

/// Ω_C C truncated by weight. Weights must be positive, additive under δ and
/// non-increasing under d.
pub fn cobar_com(c: &CurvedLieCoalgebra, weights: Vec<usize>, max_weight: usize) -> Result<ComCobar> {
    if weights.len() != c.dim() {
        return Err(Error::DimensionMismatch("one weight per basis element".into()));
    }
    for i in 0..c.dim() {
        if weights[i] == 0 {
            return Err(Error::Invalid(format!("{} has weight 0", c.labels()[i])));
        }
        if c.delta_basis(i).keys().any(|(a, b)| weights[*a] + weights[*b] > weights[i]) {
            return Err(Error::Invalid(format!("δ({}) raises weight", c.labels()[i])));
        }
        if c.d_basis(i).keys().any(|j| weights[*j] > weights[i]) {
            return Err(Error::Invalid(format!("d({}) raises weight", c.labels()[i])));
        }
    }
    Ok(ComCobar { coalgebra: c.clone(), weights, max_weight })
}
