use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::linhom::{sign, ChainComplex, LinComb};
use crate::nscoop::{koszul_dual, TruncatedCurvedCooperad};
use crate::nsoperad::{Presentation, Tree, TruncatedDgOperad, Window};

use super::algebra::Indexed;

/// Basis element p ⊗ (c₁, …, c_k) of q𝒫 ∘ q𝒫¡.
pub type KoszulTerm = (Tree, Vec<Tree>);

/// Which differential to use; the mutation negates the κ-term acting on the
/// last input, which is not induced by any automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KoszulVariant {
    Correct,
    FlipLastInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulPiece {
    pub arity: usize,
    pub weight: usize,
    pub dims: BTreeMap<i64, usize>,
    /// None when d² ≠ 0
    pub betti: Option<BTreeMap<i64, usize>>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulComplexReport {
    pub window: (usize, usize),
    pub pieces: Vec<KoszulPiece>,
    pub acyclic: bool,
}

/// The Koszul complex q𝒫 ∘_κ q𝒫¡ of the quadratic part of a presentation.
pub struct KoszulComplex {
    qp: TruncatedDgOperad,
    dual: TruncatedCurvedCooperad,
    presentation: Presentation,
    window: Window,
    variant: KoszulVariant,
}

impl KoszulComplex {
    pub fn new(p: &Presentation, window: Window, variant: KoszulVariant) -> Result<Self> {
        let q = p.quadratic_presentation();
        let wide = Window::new(window.max_arity + window.max_weight, window.max_weight);
        let qp = TruncatedDgOperad::quotient_by_ideal(&q, wide)?;
        let dual = koszul_dual(&q, window)?.dual;
        Ok(KoszulComplex { qp, dual, presentation: q, window, variant })
    }

    fn degree(&self, (p, cs): &KoszulTerm) -> i64 {
        p.degree() + cs.iter().map(|c| c.degree()).sum::<i64>()
    }

    /// Basis of the (arity, weight) component.
    pub fn basis(&self, arity: usize, weight: usize) -> Result<Vec<KoszulTerm>> {
        let mut out = Vec::new();
        for k in 0..=arity + weight {
            for p in self.qp.normal_forms(k) {
                if p.weight() > weight {
                    continue;
                }
                for cs in self.tuples(k, arity, weight - p.weight())? {
                    out.push((p.clone(), cs));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    // k-tuples of cooperad keys with the given total arity and weight
    fn tuples(&self, k: usize, arity: usize, weight: usize) -> Result<Vec<Vec<Tree>>> {
        if k == 0 {
            return Ok(if arity == 0 && weight == 0 { vec![Vec::new()] } else { Vec::new() });
        }
        let mut out = Vec::new();
        for a in 0..=arity {
            for w in 0..=weight {
                let keys = self.dual.basis(a, w)?;
                if keys.is_empty() {
                    continue;
                }
                for rest in self.tuples(k - 1, arity - a, weight - w)? {
                    for c in &keys {
                        let mut t = vec![c.clone()];
                        t.extend(rest.iter().cloned());
                        out.push(t);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn d(&self, (p, cs): &KoszulTerm) -> Result<LinComb<KoszulTerm>> {
        let mut out = LinComb::zero();
        let mut before = p.degree();
        for (j, c) in cs.iter().enumerate() {
            let passed = before - p.degree();
            let flip = self.variant == KoszulVariant::FlipLastInput && j + 1 == cs.len();
            for (t, x) in &self.dual.element(c)? {
                if t.is_trivial() {
                    continue;
                }
                let (neg, outer, block) = t.extract_block(0, &[0]);
                let root = block.root().expect("nontrivial");
                let kx = Tree::corolla(self.presentation.generators.symbol(root.label));
                let ys: Vec<Tree> = outer.children(0).into_iter().map(|i| outer.subtree(i)).collect();
                if !ys.iter().all(|y| self.dual.is_key(y)) {
                    continue;
                }
                let s = sign(before + kx.degree() * passed + (neg ^ flip) as i64);
                let comp = self.qp.graft(&LinComb::single(p.clone()), j + 1, &LinComb::single(kx))?;
                for (q, y) in &comp {
                    let mut ncs = cs[..j].to_vec();
                    ncs.extend(ys.iter().cloned());
                    ncs.extend_from_slice(&cs[j + 1..]);
                    out.add_term((q.clone(), ncs), x * y * &s);
                }
            }
            before += c.degree();
        }
        Ok(out)
    }

    /// The (arity, weight) component as a complex; Err(Invalid) when d² ≠ 0.
    pub fn complex(&self, arity: usize, weight: usize) -> Result<(BTreeMap<i64, usize>, Result<ChainComplex>)> {
        let basis = self.basis(arity, weight)?;
        let index: BTreeMap<&KoszulTerm, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let labels: Vec<String> = basis.iter().map(|(p, cs)| format!("{}; {}", self.qp_show(p), cs.iter().map(|c| self.dual.show(c)).collect::<Vec<_>>().join(", "))).collect();
        let degrees: Vec<i64> = basis.iter().map(|t| self.degree(t)).collect();
        let mut dims = BTreeMap::new();
        for d in &degrees {
            *dims.entry(*d).or_insert(0) += 1;
        }
        let ix = Indexed::new(&labels, &degrees)?;
        let images: Vec<_> = basis.iter().map(|t| self.d(t)).collect::<Result<_>>()?;
        let map = ix.map_to(&ix, -1, &|i| images[i].iter().map(|(u, c)| (index[u], c.clone())).collect())?;
        Ok((dims, ChainComplex::new(ix.space.clone(), map.blocks().clone())))
    }

    fn qp_show(&self, p: &Tree) -> String {
        self.presentation.generators.show(p)
    }

    /// Homology is 𝕂 in (arity 1, weight 0) and zero elsewhere.
    pub fn check(&self) -> Result<KoszulComplexReport> {
        let mut pieces = Vec::new();
        for n in 0..=self.window.max_arity {
            for w in 0..=self.window.max_weight {
                let (dims, c) = self.complex(n, w)?;
                let betti = match c {
                    Ok(c) => Some(c.betti_numbers()?.into_iter().filter(|(_, b)| *b > 0).collect::<BTreeMap<_, _>>()),
                    Err(_) => None,
                };
                let expected: BTreeMap<i64, usize> = if (n, w) == (1, 0) { BTreeMap::from([(0, 1)]) } else { BTreeMap::new() };
                let ok = betti.as_ref() == Some(&expected);
                pieces.push(KoszulPiece { arity: n, weight: w, dims, betti, ok });
            }
        }
        let acyclic = pieces.iter().all(|p| p.ok);
        Ok(KoszulComplexReport { window: (self.window.max_arity, self.window.max_weight), pieces, acyclic })
    }
}

/// Builds q𝒫 ∘_κ q𝒫¡ and checks its homology in every (arity, weight) of the window.
pub fn koszul_complex_check(p: &Presentation, window: Window) -> Result<KoszulComplexReport> {
    KoszulComplex::new(p, window, KoszulVariant::Correct)?.check()
}
