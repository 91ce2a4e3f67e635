use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linhom::{LinComb, Scalar, SparseMatrix, SparseVec, Subspace};
use crate::nsoperad::{GeneratorSet, Presentation, Symbol, Tree, TreeEnumerator, Window};

use super::cooperad::{relabel_all, sgn, Component, Components, TruncatedCurvedCooperad};

/// The Koszul dual cooperad 𝒫¡ ⊆ 𝕋^c(s𝒱) and the canonical twisting morphism
/// κ: 𝒫¡ ↠ s𝒱 → 𝒱, recorded on cogenerator corollas.
#[derive(Clone, Debug)]
pub struct KoszulDualResult {
    pub dual: TruncatedCurvedCooperad,
    pub kappa: BTreeMap<Tree, LinComb<Tree>>,
    /// s²qR per arity, inside the span of two-vertex trees of 𝕋^c(s𝒱)
    pub s2qr: BTreeMap<usize, Component>,
}

struct QuadraticData {
    comp: Component,
    annihilators: Vec<SparseVec>,
    phi1: BTreeMap<Tree, LinComb<Tree>>,
    phi0: BTreeMap<Tree, Scalar>,
}

/// Computes 𝒫¡ weight by weight as the joint kernel of the projections that
/// collapse one internal edge into 𝕋²(s𝒱)/s²qR; the coderivation and
/// curvature come from φ₁ and φ₀. Closure under Δ₂ and D and the curved
/// identities are verified before returning.
pub fn koszul_dual(p: &Presentation, window: Window) -> Result<KoszulDualResult> {
    let qparts = p.quadratic_parts()?;
    let mut cogens = GeneratorSet::new();
    for s in p.generators.symbols() {
        let g = p.generators.get(s.label);
        cogens.push(&format!("s{}", g.name), g.arity, g.degree + 1, 1)?;
    }
    let susp = |s: &Symbol| cogens.symbol(s.label);
    let mut e = TreeEnumerator::new(&cogens);

    let mut quad: BTreeMap<usize, QuadraticData> = BTreeMap::new();
    for k in 0..=window.max_arity + window.max_weight {
        let trees = e.trees(k, 2);
        if trees.is_empty() {
            continue;
        }
        let mut space = Subspace::zero(trees.len());
        let mut phi1 = BTreeMap::new();
        let mut phi0 = BTreeMap::new();
        if let Some(qp) = qparts.get(&k) {
            for (piv, b) in qp.space.basis() {
                // s²(x ⊗ y) = (−1)^{|x|} sx ⊗ sy; renormalize so the pivot coefficient stays 1
                let eps = |t: &Tree| t.root().unwrap().odd();
                let pt = relabel_all(&qp.trees[piv], susp);
                let flip = eps(&qp.trees[piv]);
                let mut v = SparseVec::new();
                for (i, c) in b {
                    let st = relabel_all(&qp.trees[*i], susp);
                    let j = trees.binary_search(&st).map_err(|_| Error::WindowTooSmall("relation outside the quadratic trees".into()))?;
                    v.insert(j, sgn(eps(&qp.trees[*i]) ^ flip) * c);
                }
                space.insert(v);
                let p1: LinComb<Tree> = qp.phi1[&piv].iter().map(|(t, c)| (relabel_all(t, susp), sgn(flip) * c)).collect();
                if !p1.is_zero() {
                    phi1.insert(pt.clone(), p1);
                }
                let p0 = sgn(flip) * &qp.phi0[&piv];
                if !p0.is_zero() {
                    phi0.insert(pt, p0);
                }
            }
        }
        let basis = SparseMatrix::from_columns(trees.len(), space.basis_vectors());
        let annihilators = basis.transpose().kernel_basis();
        quad.insert(k, QuadraticData { comp: Component { trees, space }, annihilators, phi1, phi0 });
    }

    let mut comps = BTreeMap::new();
    for n in 0..=window.max_arity + window.max_weight {
        for w in 1..=window.max_weight {
            let trees = e.trees(n, w);
            if trees.is_empty() {
                continue;
            }
            let space = if w == 1 {
                Subspace::full(trees.len())
            } else {
                edge_kernel(&trees, &quad)
            };
            if space.dim() > 0 {
                comps.insert((n, w), Component { trees, space });
            }
        }
    }

    let phi = |b: &Tree| -> Result<LinComb<Tree>> {
        Ok(if b.vertex_count() == 2 { quad.get(&b.arity()).and_then(|q| q.phi1.get(b)).cloned().unwrap_or_default() } else { LinComb::zero() })
    };
    let theta = |t: &Tree| -> Result<Scalar> {
        Ok(if t.vertex_count() == 2 { quad.get(&1).and_then(|q| q.phi0.get(t)).cloned().unwrap_or_else(Scalar::zero) } else { Scalar::zero() })
    };
    let dual = TruncatedCurvedCooperad::tabulate(cogens.clone(), window, Components::Sub(comps), 2, phi, theta)?;
    let verdict = dual.check_curved()?;
    if let Some(f) = verdict.witness() {
        return Err(if f.at.contains("closure") {
            Error::NotClosedUnderDecomposition(format!("{}: {}", f.at, f.residual))
        } else {
            Error::CurvatureMismatch(format!("{}: {}", f.at, f.residual))
        });
    }
    let kappa = p
        .generators
        .symbols()
        .map(|s| (Tree::corolla(cogens.symbol(s.label)), LinComb::single(Tree::corolla(s))))
        .collect();
    let s2qr = quad.into_iter().map(|(k, q)| (k, q.comp)).collect();
    Ok(KoszulDualResult { dual, kappa, s2qr })
}

/// Joint kernel over all internal edges of the collapse-to-𝕋²/s²qR projections.
fn edge_kernel(trees: &[Tree], quad: &BTreeMap<usize, QuadraticData>) -> Subspace {
    let mut rows: BTreeMap<(Tree, usize), SparseVec> = BTreeMap::new();
    for (j, t) in trees.iter().enumerate() {
        let parents = t.parents();
        for (c, _) in t.vertices() {
            let Some(u) = parents[c] else { continue };
            let (neg, outer, block) = t.extract_block(u, &[u, c]);
            let q = &quad[&block.arity()];
            let bi = q.comp.trees.binary_search(&block).expect("two-vertex block enumerated");
            for (fi, f) in q.annihilators.iter().enumerate() {
                let Some(x) = f.get(&bi) else { continue };
                let row = rows.entry((outer.clone(), fi)).or_default();
                let e = row.entry(j).or_insert_with(Scalar::zero);
                *e += sgn(neg) * x;
                if e.is_zero() {
                    row.remove(&j);
                }
            }
        }
    }
    let m = SparseMatrix::from_columns(trees.len(), rows.into_values().collect()).transpose();
    Subspace::spanned_by(trees.len(), m.kernel_basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::int;

    pub(crate) fn uas() -> Presentation {
        let mut g = GeneratorSet::new();
        g.add("mu", 2, 0).unwrap();
        g.add("xi", 0, 0).unwrap();
        let p = |s: &str| g.parse(s).unwrap();
        let assoc = LinComb::from_terms([(p("(mu mu |)"), int(1)), (p("(mu | mu)"), int(-1))]);
        let lu = LinComb::from_terms([(p("(mu xi |)"), int(1)), (Tree::trivial(), int(-1))]);
        let ru = LinComb::from_terms([(p("(mu | xi)"), int(1)), (Tree::trivial(), int(-1))]);
        Presentation::new(g, vec![assoc, lu, ru]).unwrap()
    }

    #[test]
    fn uas_dual_arity_three() {
        let r = koszul_dual(&uas(), Window::new(4, 4)).unwrap();
        let c = &r.dual;
        let ks = c.basis(3, 2).unwrap();
        assert_eq!(ks.len(), 1);
        let x = c.element(&ks[0]).unwrap();
        let g = c.cogens();
        let a = g.parse("(smu smu |)").unwrap();
        let b = g.parse("(smu | smu)").unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.coeff(&a), -x.coeff(&b));
    }

    #[test]
    fn uas_dual_curvature() {
        let r = koszul_dual(&uas(), Window::new(3, 3)).unwrap();
        let g = r.dual.cogens();
        assert_eq!(r.dual.theta_tree(&g.parse("(smu sxi |)").unwrap()), int(-1));
        assert_eq!(r.dual.theta_tree(&g.parse("(smu | sxi)").unwrap()), int(-1));
        assert!(r.dual.phi_table().is_empty());
    }

    #[test]
    fn purely_quadratic_has_no_coderivation() {
        let q = uas().quadratic_presentation();
        let r = koszul_dual(&q, Window::new(3, 3)).unwrap();
        assert!(r.dual.phi_table().is_empty());
        assert!(r.dual.theta_table().is_empty());
    }
}
