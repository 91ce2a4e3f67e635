use std::collections::BTreeMap;
use std::ops::RangeInclusive;


use crate::error::{Error, Result};
use crate::linhom::{format_scalar, is_filtered_quasi_iso, sign, ChainComplex, FilteredComplex, FilteredQisoReport, LinComb};
use crate::verdict::Verdict;

use super::algebra::{Indexed, UnitalAssocAlgebra, Vector};
use super::coalgebra::CurvedCoalgebra;
use super::words::bar_algebra;

/// A word in the generators s⁻¹c_i of a cobar construction; empty is the unit.
pub type CobarWord = Vec<usize>;

/// Unital cobar construction Ω_u C = (T(s⁻¹C), d) of a curved coalgebra,
/// truncated to words of total weight ≤ `max_weight`.
///
/// On generators d(s⁻¹x) = θ(x)·1 − s⁻¹dx − Σ (−1)^{|x₁|} s⁻¹x₁ s⁻¹x₂.
#[derive(Clone, Debug)]
pub struct CobarAlgebra {
    coalgebra: CurvedCoalgebra,
    weights: Vec<usize>,
    max_weight: usize,
}

impl CobarAlgebra {
    pub fn coalgebra(&self) -> &CurvedCoalgebra {
        &self.coalgebra
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn gen_degree(&self, i: usize) -> i64 {
        self.coalgebra.degree(i) - 1
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|i| self.gen_degree(*i)).sum()
    }

    pub fn word_weight(&self, w: &[usize]) -> usize {
        w.iter().map(|i| self.weights[*i]).sum()
    }

    pub fn show(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|i| format!("s-{}", self.coalgebra.labels()[*i])).collect::<Vec<_>>().join("·")
    }

    pub fn show_poly(&self, z: &LinComb<CobarWord>) -> String {
        if z.is_zero() {
            return "0".into();
        }
        z.iter().map(|(w, c)| format!("{}*{}", format_scalar(c), self.show(w))).collect::<Vec<_>>().join(" + ")
    }

    pub fn d_gen(&self, i: usize) -> LinComb<CobarWord> {
        let c = &self.coalgebra;
        let mut out = LinComb::zero();
        out.add_term(Vec::new(), c.theta_basis(i).clone());
        for (j, x) in c.d_basis(i) {
            out.add_term(vec![*j], -x.clone());
        }
        for ((a, b), x) in c.delta_basis(i) {
            out.add_term(vec![*a, *b], -(x * sign(c.degree(*a))));
        }
        out
    }

    pub fn d_word(&self, w: &[usize]) -> LinComb<CobarWord> {
        let mut out = LinComb::zero();
        let mut before = 0i64;
        for (k, g) in w.iter().enumerate() {
            let s = sign(before);
            for (u, x) in &self.d_gen(*g) {
                let mut nw = w[..k].to_vec();
                nw.extend(u);
                nw.extend_from_slice(&w[k + 1..]);
                out.add_term(nw, x * &s);
            }
            before += self.gen_degree(*g);
        }
        out
    }

    pub fn d(&self, z: &LinComb<CobarWord>) -> LinComb<CobarWord> {
        z.map_linear(|w| self.d_word(w))
    }

    /// All words of total weight ≤ `max_weight`, by weight then lexicographically.
    pub fn basis(&self) -> Vec<CobarWord> {
        let mut by_weight: Vec<Vec<CobarWord>> = vec![vec![Vec::new()]];
        for w in 1..=self.max_weight {
            let mut cur = Vec::new();
            for g in 0..self.coalgebra.dim() {
                let k = self.weights[g];
                if k > w {
                    continue;
                }
                for rest in &by_weight[w - k] {
                    let mut nw = vec![g];
                    nw.extend(rest);
                    cur.push(nw);
                }
            }
            cur.sort();
            by_weight.push(cur);
        }
        by_weight.into_iter().flatten().collect()
    }

    /// d² = 0 on the whole truncation.
    pub fn check_square_zero(&self) -> Verdict {
        let mut v = Verdict::new();
        for w in self.basis() {
            v.tick();
            let dd = self.d(&self.d_word(&w));
            if !dd.is_zero() {
                v.fail(format!("d² at {}", self.show(&w)), self.show_poly(&dd));
            }
        }
        v
    }

    fn indexed(&self) -> Result<(Vec<CobarWord>, BTreeMap<CobarWord, usize>, Indexed)> {
        let basis = self.basis();
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let labels: Vec<String> = basis.iter().map(|w| self.show(w)).collect();
        let degrees: Vec<i64> = basis.iter().map(|w| self.word_degree(w)).collect();
        Ok((basis, index, Indexed::new(&labels, &degrees)?))
    }

    /// The truncation as a chain complex, filtered by total weight.
    pub fn filtered_complex(&self) -> Result<FilteredComplex> {
        let (basis, index, ix) = self.indexed()?;
        let d = ix.map_to(&ix, -1, &|i| self.d_word(&basis[i]).iter().map(|(u, c)| (index[u], c.clone())).collect())?;
        let mut levels = Vec::new();
        for n in 0..=self.max_weight {
            let lvl = ix
                .space
                .degrees()
                .map(|deg| {
                    let vs = ix.component(deg).iter().filter(|i| self.word_weight(&basis[**i]) <= n).map(|i| Vector::single(*i));
                    (deg, ix.subspace(deg, vs))
                })
                .collect();
            levels.push(lvl);
        }
        FilteredComplex::new(ix.space.clone(), d, levels)
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        let f = self.filtered_complex()?;
        ChainComplex::new(f.space.clone(), f.differential.blocks().clone())
    }
}

/// Ω_u C truncated by a weight on the basis of C.
///
/// Weights must be positive, additive under Δ, non-increasing under d, and θ
/// may only be nonzero where d of the unit word is allowed (any weight).
pub fn cobar_coalgebra(c: &CurvedCoalgebra, weights: Vec<usize>, max_weight: usize) -> Result<CobarAlgebra> {
    if weights.len() != c.dim() {
        return Err(Error::DimensionMismatch("one weight per basis element".into()));
    }
    for i in 0..c.dim() {
        if weights[i] == 0 {
            return Err(Error::Invalid(format!("{} has weight 0", c.labels()[i])));
        }
        if c.delta_basis(i).keys().any(|(a, b)| weights[*a] + weights[*b] > weights[i]) {
            return Err(Error::Invalid(format!("Δ({}) raises weight", c.labels()[i])));
        }
        if c.d_basis(i).keys().any(|j| weights[*j] > weights[i]) {
            return Err(Error::Invalid(format!("d({}) raises weight", c.labels()[i])));
        }
    }
    Ok(CobarAlgebra { coalgebra: c.clone(), weights, max_weight })
}

/// Ω_u B_c A truncated to total bar-word length ≤ `max_len`.
pub fn cobar_bar(a: &UnitalAssocAlgebra, max_len: usize) -> Result<CobarAlgebra> {
    let b = bar_algebra(a, max_len)?;
    let words = b.alphabet().words_up_to(max_len);
    let c = b.to_coalgebra()?;
    cobar_coalgebra(&c, words.iter().map(|w| w.len()).collect(), max_len)
}

/// The counit ε: Ω_u B_c A → A on a word of [`cobar_bar`]; s⁻¹[sa] ↦ a, other generators ↦ 0.
pub fn counit(a: &UnitalAssocAlgebra, w: &[usize]) -> Vector {
    let n = a.dim();
    let mut out = a.unit().clone();
    for g in w {
        // generator g is the bar word with index g; single letters come first
        if *g >= n {
            return Vector::zero();
        }
        out = a.mul(&out, &Vector::single(*g));
    }
    out
}

/// Compares ε: Ω_u B_c A → A on graded pieces.
///
/// The source is filtered by total bar-word length (pieces G_0 … G_N), the
/// target by F_0 = 𝕂·1, F_n = A for n ≥ 1.
pub fn counit_graded_qiso(a: &UnitalAssocAlgebra, max_len: usize, degrees: RangeInclusive<i64>) -> Result<FilteredQisoReport> {
    let omega = cobar_bar(a, max_len)?;
    let src = omega.filtered_complex()?;
    let basis = omega.basis();
    let (sl, sd): (Vec<String>, Vec<i64>) = basis.iter().map(|w| (omega.show(w), omega.word_degree(w))).unzip();
    let six = Indexed::new(&sl, &sd)?;
    let tix = Indexed::new(a.labels(), a.degrees())?;
    let f = six.map_to(&tix, 0, &|i| counit(a, &basis[i]))?;
    let carrier = a.carrier()?;
    let unit_deg = 0;
    let mut levels = vec![tix
        .space
        .degrees()
        .map(|d| (d, if d == unit_deg { tix.subspace(d, [a.unit().clone()]) } else { tix.subspace(d, []) }))
        .collect()];
    for _ in 1..=max_len {
        levels.push(tix.space.degrees().map(|d| (d, tix.subspace(d, (0..a.dim()).filter(|i| a.degree(*i) == d).map(Vector::single)))).collect());
    }
    let tgt = FilteredComplex::new(carrier.space.clone(), carrier.differential.clone(), levels)?;
    is_filtered_quasi_iso(&f, &src, &tgt, degrees)
}
