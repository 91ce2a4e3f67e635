use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linhom::{format_scalar, sign, LinComb, Scalar};
use crate::nscoop::TruncatedCurvedCooperad;
use crate::nsoperad::{evaluate_tree, DgOperad, Tree, HOLE};
use crate::verdict::Verdict;

use super::construct::{BarConstruction, CobarConstruction};

/// A degree −1 map α: 𝒞̄ → 𝒫 given on basis keys of 𝒞̄ (absent keys map to 0).
pub struct OpTwisting<'a, P: DgOperad> {
    pub source: &'a TruncatedCurvedCooperad,
    pub target: &'a P,
    pub alpha: BTreeMap<Tree, LinComb<P::Key>>,
}

impl<'a, P: DgOperad> OpTwisting<'a, P> {
    pub fn new(source: &'a TruncatedCurvedCooperad, target: &'a P, alpha: BTreeMap<Tree, LinComb<P::Key>>) -> Result<Self> {
        for (x, img) in &alpha {
            if !source.is_key(x) {
                return Err(Error::Invalid(format!("{} is not a basis key of the cooperad", source.show(x))));
            }
            for k in img.keys() {
                if target.key_arity(k) != x.arity() || target.key_degree(k) != x.degree() - 1 {
                    return Err(Error::Invalid(format!("α({}) has the wrong arity or degree", source.show(x))));
                }
            }
        }
        Ok(OpTwisting { source, target, alpha })
    }

    /// α read off an arbitrary tree polynomial at key trees.
    pub fn apply(&self, z: &LinComb<Tree>) -> LinComb<P::Key> {
        let mut out = LinComb::zero();
        for (t, c) in z {
            if let Some(a) = self.alpha.get(t) {
                out.add_scaled(a, c);
            }
        }
        out
    }

    /// ∂(α)(x) + γ(α⊗α)Δ₂(x) − θ(x)1 on one basis key.
    pub fn residual(&self, key: &Tree) -> Result<LinComb<P::Key>> {
        let c = self.source;
        let x = c.element(key)?;
        let mut res = self.target.differential(&self.apply(&x))?;
        res.add(&self.apply(&c.d(&x)));
        for ((l, i, u), coef) in &c.delta2(&x) {
            let (al, au) = (self.alpha.get(l), self.alpha.get(u));
            let (Some(al), Some(au)) = (al, au) else { continue };
            let comp = self.target.compose(al, *i, au)?;
            res.add_scaled(&comp, &(sign(l.degree()) * coef));
        }
        let th = c.theta(&x);
        if !th.is_zero() {
            res.add_scaled(&self.target.unit(), &-th);
        }
        Ok(res)
    }
}

/// Evaluates the twisting equation on every basis key of 𝒞̄ in the window.
pub fn check_op_twisting<P: DgOperad>(t: &OpTwisting<P>) -> Result<Verdict> {
    let mut v = Verdict::new();
    for k in t.source.reduced_basis()? {
        v.tick();
        let r = t.residual(&k)?;
        if !r.is_zero() {
            v.fail(t.source.show(&k), t.target.show(&r));
        }
    }
    Ok(v)
}

/// ι: 𝒞̄ → s⁻¹𝒞̄ ⊆ Ω_u𝒞.
pub fn canonical_iota<'a>(c: &'a TruncatedCurvedCooperad, cobar: &'a CobarConstruction) -> Result<OpTwisting<'a, crate::nsoperad::TruncatedDgOperad>> {
    let mut alpha = BTreeMap::new();
    for k in &cobar.keys {
        alpha.insert(k.clone(), LinComb::single(cobar.desusp(k)?));
    }
    OpTwisting::new(c, &cobar.operad, alpha)
}

/// κ: 𝒫¡ ↠ s𝒱 → 𝒱 → 𝒫 for a Koszul dual computed from the presentation of `p`.
pub fn canonical_kappa<'a>(k: &'a crate::nscoop::KoszulDualResult, p: &'a crate::nsoperad::TruncatedDgOperad) -> Result<OpTwisting<'a, crate::nsoperad::TruncatedDgOperad>> {
    let mut alpha = BTreeMap::new();
    for (x, img) in &k.kappa {
        let r = p.reduce(img)?;
        if !r.is_zero() {
            alpha.insert(x.clone(), r);
        }
    }
    OpTwisting::new(&k.dual, p, alpha)
}

/// π: B_c𝒫 ↠ s𝒫 → 𝒫.
pub fn canonical_pi<'a, P: DgOperad>(p: &'a P, bar: &'a BarConstruction<P::Key>) -> Result<OpTwisting<'a, P>> {
    let mut alpha = BTreeMap::new();
    for (l, k) in &bar.keys {
        alpha.insert(Tree::corolla(bar.coop.cogens().symbol(*l)), LinComb::single(k.clone()));
    }
    OpTwisting::new(&bar.coop, p, alpha)
}

/// Operad morphism Ω_u𝒞 → 𝒫 given on generators.
#[derive(Clone, Debug)]
pub struct OperadMorphism<K: Ord> {
    pub images: BTreeMap<u32, LinComb<K>>,
}

impl<K: Ord + Clone + std::fmt::Debug> OperadMorphism<K> {
    pub fn apply_tree<P: DgOperad<Key = K>>(&self, p: &P, t: &Tree) -> Result<LinComb<K>> {
        evaluate_tree(p, t, &|s| Ok(self.images.get(&s.label).cloned().unwrap_or_default()))
    }

    pub fn apply<P: DgOperad<Key = K>>(&self, p: &P, z: &LinComb<Tree>) -> Result<LinComb<K>> {
        z.try_map_linear(|t| self.apply_tree(p, t))
    }
}

/// Checks F∘d = d∘F on every basis tree of Ω_u𝒞 in the window.
pub fn check_operad_morphism<P: DgOperad>(f: &OperadMorphism<P::Key>, cobar: &CobarConstruction, p: &P) -> Result<Verdict> {
    let op = &cobar.operad;
    let mut v = Verdict::new();
    for n in 0..=op.window().max_arity {
        for t in op.normal_forms(n) {
            v.tick();
            let lhs = f.apply(p, &op.d(&LinComb::single(t.clone()))?)?;
            let rhs = p.differential(&f.apply_tree(p, &t)?)?;
            if lhs != rhs {
                let mut r = lhs;
                r.sub(&rhs);
                v.fail(op.generators().show(&t), p.show(&r));
            }
        }
    }
    Ok(v)
}

/// F_α: Ω_u𝒞 → 𝒫 with F(s⁻¹x) = α(x), verified to commute with differentials.
pub fn twisting_to_operad_morphism<P: DgOperad>(t: &OpTwisting<P>, cobar: &CobarConstruction) -> Result<OperadMorphism<P::Key>> {
    let v = check_op_twisting(t)?;
    if let Some(f) = v.witness() {
        return Err(Error::NotATwistingMorphism(format!("residual at {}: {}", f.at, f.residual)));
    }
    let mut images = BTreeMap::new();
    for (l, k) in cobar.keys.iter().enumerate() {
        if let Some(a) = t.alpha.get(k) {
            images.insert(l as u32, a.clone());
        }
    }
    let f = OperadMorphism { images };
    let v = check_operad_morphism(&f, cobar, t.target)?;
    if let Some(w) = v.witness() {
        return Err(Error::NotAChainMap(format!("F_α fails at {}: {}", w.at, w.residual)));
    }
    Ok(f)
}

/// α = F∘ι for an operad morphism F: Ω_u𝒞 → 𝒫.
pub fn operad_morphism_to_twisting<'a, P: DgOperad>(
    f: &OperadMorphism<P::Key>,
    c: &'a TruncatedCurvedCooperad,
    cobar: &CobarConstruction,
    p: &'a P,
) -> Result<OpTwisting<'a, P>> {
    let mut alpha = BTreeMap::new();
    for (l, k) in cobar.keys.iter().enumerate() {
        if let Some(img) = f.images.get(&(l as u32)) {
            if !img.is_zero() {
                alpha.insert(k.clone(), img.clone());
            }
        }
    }
    OpTwisting::new(c, p, alpha)
}

/// Morphism of curved cooperads 𝒞 → B_c𝒫, stored on basis keys of 𝒞.
#[derive(Clone, Debug)]
pub struct CoopMorphism {
    pub images: BTreeMap<Tree, LinComb<Tree>>,
}

/// f̃ on one tree of 𝕋^c: Σ over block partitions, each block sent to `g(block)`.
pub fn cofree_extension(t: &Tree, g: &dyn Fn(&Tree) -> LinComb<Tree>) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for (neg, quotient, blocks) in t.block_partitions() {
        let imgs: Vec<LinComb<Tree>> = blocks.iter().map(|b| if b.is_trivial() { LinComb::single(b.clone()) } else { g(b) }).collect();
        if imgs.iter().any(|i| i.is_zero()) {
            continue;
        }
        if blocks.is_empty() {
            out.add_term(quotient, crate::nscoop::cooperad::sgn(neg));
            continue;
        }
        // expand the tensor product of block images
        let mut partial: Vec<(Vec<crate::nsoperad::Symbol>, Scalar)> = vec![(Vec::new(), crate::nscoop::cooperad::sgn(neg))];
        for img in &imgs {
            let mut next = Vec::new();
            for (syms, c) in &partial {
                for (cor, d) in img {
                    let mut s = syms.clone();
                    s.push(cor.root().unwrap());
                    next.push((s, c * d));
                }
            }
            partial = next;
        }
        for (syms, c) in partial {
            let nodes: Vec<_> = quotient.nodes().iter().map(|s| if s.label == HOLE { syms[s.weight as usize] } else { *s }).collect();
            out.add_term(Tree::from_nodes(nodes).expect("block images keep arities"), c);
        }
    }
    out
}

impl CoopMorphism {
    pub fn apply(&self, z: &LinComb<Tree>) -> LinComb<Tree> {
        let mut out = LinComb::zero();
        for (t, c) in z {
            if t.is_trivial() {
                out.add_term(t.clone(), c.clone());
            } else if let Some(i) = self.images.get(t) {
                out.add_scaled(i, c);
            }
        }
        out
    }
}

/// f_α: 𝒞 → B_c𝒫, the cofree extension of x ↦ sα(x) + θ(x)v, verified to
/// commute with coderivations, curvatures and Δ₂ on the window.
pub fn twisting_to_coop_morphism<P: DgOperad>(t: &OpTwisting<P>, bar: &BarConstruction<P::Key>) -> Result<CoopMorphism> {
    let v = check_op_twisting(t)?;
    if let Some(f) = v.witness() {
        return Err(Error::NotATwistingMorphism(format!("residual at {}: {}", f.at, f.residual)));
    }
    let c = t.source;
    let mut gtab: BTreeMap<Tree, LinComb<Tree>> = BTreeMap::new();
    for (b, a) in &t.alpha {
        gtab.entry(b.clone()).or_default().add(&bar.suspend(a)?);
    }
    for (b, th) in c.theta_table() {
        if c.is_key(b) {
            gtab.entry(b.clone()).or_default().add_term(Tree::corolla(bar.v), th.clone());
        }
    }
    let g = |b: &Tree| gtab.get(b).cloned().unwrap_or_default();
    let ext = |z: &LinComb<Tree>| z.map_linear(|tr| cofree_extension(tr, &g));
    let mut images = BTreeMap::new();
    let mut verdict = Verdict::new();
    for k in c.reduced_basis()? {
        let x = c.element(&k)?;
        let fx = ext(&x);
        verdict.tick();
        let lhs = bar.coop.d(&fx);
        let rhs = ext(&c.d(&x));
        if lhs != rhs {
            verdict.fail(format!("D f at {}", c.show(&k)), bar.coop.show_poly(&lhs));
        }
        verdict.tick();
        if bar.coop.theta(&fx) != c.theta(&x) {
            verdict.fail(format!("θ f at {}", c.show(&k)), format_scalar(&bar.coop.theta(&fx)));
        }
        verdict.tick();
        let dl = bar.coop.delta2(&fx);
        let mut dr = LinComb::zero();
        for ((l, i, u), coef) in &c.delta2(&x) {
            for (fl, a) in &ext(&LinComb::single(l.clone())) {
                for (fu, b) in &ext(&LinComb::single(u.clone())) {
                    dr.add_term((fl.clone(), *i, fu.clone()), coef * a * b);
                }
            }
        }
        if dl != dr {
            verdict.fail(format!("Δ₂ f at {}", c.show(&k)), "decompositions differ");
        }
        images.insert(k, fx);
    }
    if let Some(w) = verdict.witness() {
        return Err(Error::NotAChainMap(format!("{}: {}", w.at, w.residual)));
    }
    Ok(CoopMorphism { images })
}
