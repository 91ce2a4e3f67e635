use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linhom::{sign, LinComb, Scalar};

use super::algebra::Vector;
use super::coalgebra::{CurvedCoalgebra, Tensor2};
use super::algebra::UnitalAssocAlgebra;
use super::twisted::{bar_alpha, CCoalgebra, UasAlgebra};
use super::words::bar_algebra;
use crate::nsoperad::TruncatedDgOperad;
use crate::opbarcobar::OpTwisting;
use super::words::{CofreeCurvedCoalgebra, Word};

/// Sign conventions for turning a uAs¡-coalgebra 𝒟 into a curved coalgebra on s𝒟.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslationSigns {
    /// exponent of (−1) in front of sy₁ ⊗ sy₂ is a + b|y₁| + c|y₂|
    pub delta: (bool, bool, bool),
    pub theta: bool,
    pub d: bool,
}

/// The conventions under which uAs¡-coalgebras become curved coalgebras.
pub const UAS_TRANSLATION: TranslationSigns = TranslationSigns { delta: (false, true, false), theta: false, d: false };

/// s𝒟 with Δ read off the sμ-component of the structure map, θ off the
/// sξ-component and d(sx) = ±s(dx).
pub fn uas_coalgebra_to_curved<D: CCoalgebra>(dc: &D, signs: TranslationSigns) -> Result<CurvedCoalgebra> {
    let g = dc.cooperad().cogens();
    let smu = g.parse("smu")?;
    let sxi = g.parse("sxi")?;
    let n = dc.dim();
    let mut delta = vec![Tensor2::zero(); n];
    let mut theta = vec![Scalar::zero(); n];
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        for ((l, ys), c) in &dc.decompose(i)? {
            if *l == smu {
                let (a, b, cc) = signs.delta;
                let e = a as i64 + b as i64 * dc.degree(ys[0]) + cc as i64 * dc.degree(ys[1]);
                delta[i].add_term((ys[0], ys[1]), c * sign(e));
            } else if *l == sxi {
                theta[i] += c * sign(signs.theta as i64);
            }
        }
        d.push(dc.d(i)?.scaled(&sign(signs.d as i64)));
    }
    let labels = (0..n).map(|i| format!("s{}", dc.label(i))).collect();
    let degrees = (0..n).map(|i| dc.degree(i) + 1).collect();
    CurvedCoalgebra::unchecked(labels, degrees, delta, d, theta)
}

/// The map f(x) = Σ g^{⊗k} Δ^{(k−1)}(x) into a cofree curved coalgebra, for a
/// projection g onto its letters.
pub fn cofree_map(c: &CurvedCoalgebra, g: &[LinComb<u32>], max_len: usize) -> Vec<LinComb<Word>> {
    (0..c.dim())
        .map(|i| {
            let mut out = LinComb::zero();
            for k in 0..max_len {
                for (parts, x) in &c.iterated_delta(&Vector::single(i), k) {
                    let mut acc: Vec<(Word, Scalar)> = vec![(Vec::new(), x.clone())];
                    for p in parts {
                        let mut next = Vec::new();
                        for (w, y) in &acc {
                            for (l, z) in &g[*p] {
                                let mut nw = w.clone();
                                nw.push(*l);
                                next.push((nw, y * z));
                            }
                        }
                        acc = next;
                    }
                    for (w, y) in acc {
                        out.add_term(w, y);
                    }
                }
            }
            out
        })
        .collect()
}

/// Checks that `f` is an isomorphism of curved coalgebras onto the words of
/// length ≤ `max_len` of `target`: bijective, f d = d f and θ f = θ.
pub fn check_cofree_iso(c: &CurvedCoalgebra, f: &[LinComb<Word>], target: &CofreeCurvedCoalgebra) -> Result<()> {
    let words = target.alphabet().words_up_to(target.max_len());
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    if words.len() != c.dim() {
        return Err(Error::DimensionMismatch(format!("{} words but {} basis elements", words.len(), c.dim())));
    }
    let cols = f
        .iter()
        .map(|z| z.iter().map(|(w, x)| index.get(w).map(|i| (*i, x.clone())).ok_or_else(|| Error::WindowTooSmall("image outside the words".into()))).collect())
        .collect::<Result<Vec<_>>>()?;
    if crate::linhom::SparseMatrix::from_columns(words.len(), cols).rank() != words.len() {
        return Err(Error::Invalid("the comparison map is not bijective".into()));
    }
    for i in 0..c.dim() {
        let lhs = target.d(&f[i]);
        let rhs = c.d_basis(i).map_linear(|j| f[*j].clone());
        if lhs != rhs {
            return Err(Error::NotAChainMap(format!("d f ≠ f d at {}", c.labels()[i])));
        }
        if target.theta(&f[i]) != *c.theta_basis(i) {
            return Err(Error::CurvatureMismatch(format!("θ f ≠ θ at {}", c.labels()[i])));
        }
    }
    Ok(())
}

/// Compares B_κ𝒜 (a uAs¡-coalgebra) with B_c𝒜 on words of length ≤ `max_len`:
/// translates with [`UAS_TRANSLATION`] and maps s(|; a) ↦ sa, s(sξ) ↦ v.
pub fn compare_bar_kappa_with_bar_algebra(kappa: &OpTwisting<TruncatedDgOperad>, a: &UnitalAssocAlgebra, max_len: usize) -> Result<()> {
    let ua = UasAlgebra::new(a, kappa.target)?;
    let bk = bar_alpha(kappa, &ua, 2 * max_len - 1)?;
    let c = uas_coalgebra_to_curved(&bk, UAS_TRANSLATION)?;
    let v = c.check();
    if let Some(w) = v.witness() {
        return Err(Error::CurvatureMismatch(format!("translated coalgebra fails at {}: {}", w.at, w.residual)));
    }
    let sxi = kappa.source.cogens().parse("sxi")?;
    let n = a.dim() as u32;
    let g: Vec<LinComb<u32>> = bk
        .basis()
        .iter()
        .map(|(t, w)| {
            if t.is_trivial() {
                LinComb::single(w[0] as u32)
            } else if *t == sxi {
                LinComb::single(n)
            } else {
                LinComb::zero()
            }
        })
        .collect();
    let f = cofree_map(&c, &g, max_len);
    check_cofree_iso(&c, &f, &bar_algebra(a, max_len)?)
}
