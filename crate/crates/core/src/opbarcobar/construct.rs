use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linhom::{sign, LinComb, Scalar};
use crate::nscoop::TruncatedCurvedCooperad;
use crate::nsoperad::{DgOperad, GeneratorSet, Symbol, Tree, TruncatedDgOperad, Window, RESERVED_V};

/// Turns an s-expression into a single token: `(a b |)` becomes `[a,b,|]`.
pub(crate) fn compact(s: &str) -> String {
    s.replace('(', "[").replace(')', "]").replace(' ', ",")
}

fn unique_name(g: &GeneratorSet, base: String) -> String {
    if g.lookup(&base).is_none() && base != RESERVED_V {
        return base;
    }
    (2..).map(|i| format!("{base}#{i}")).find(|n| g.lookup(n).is_none()).unwrap()
}

/// B_c𝒫 = 𝕋^c(s𝒫 ⊕ 𝕂v) with the cogenerator labels of s𝒫 tied to basis keys of 𝒫.
#[derive(Clone, Debug)]
pub struct BarConstruction<K: Ord> {
    pub coop: TruncatedCurvedCooperad,
    pub keys: BTreeMap<u32, K>,
    pub labels: BTreeMap<K, u32>,
    pub v: Symbol,
}

impl<K: Ord + Clone> BarConstruction<K> {
    /// The corolla s k.
    pub fn s(&self, k: &K) -> Result<Tree> {
        let l = self.labels.get(k).ok_or_else(|| Error::WindowTooSmall("basis element outside the bar cogenerators".into()))?;
        Ok(Tree::corolla(self.coop.cogens().symbol(*l)))
    }

    pub fn suspend(&self, p: &LinComb<K>) -> Result<LinComb<Tree>> {
        p.try_map_linear(|k| Ok(LinComb::single(self.s(k)?)))
    }

    /// s⁻¹ on corollas s p; `None` on v and on larger trees.
    pub fn desuspend(&self, t: &Tree) -> Option<&K> {
        if t.vertex_count() != 1 {
            return None;
        }
        self.keys.get(&t.root()?.label)
    }

    /// The canonical projection B_c𝒫 ↠ s𝒫 → 𝒫 on tree polynomials.
    pub fn project(&self, z: &LinComb<Tree>) -> LinComb<K> {
        let mut out = LinComb::zero();
        for (t, c) in z {
            if let Some(k) = self.desuspend(t) {
                out.add_term(k.clone(), c.clone());
            }
        }
        out
    }
}

/// Bar construction of a dg operad in a window. The coderivation extends
/// sx ↦ −s dx, v ↦ s1 and sa ∘_i sb ↦ (−1)^{|a|} s(a ∘_i b); θ(v) = 1.
pub fn bar_operad<P: DgOperad>(p: &P, window: Window) -> Result<BarConstruction<P::Key>> {
    let nullary = p.max_arity() == 0 || !p.basis(0)?.is_empty();
    let amax = if nullary { window.max_arity + window.max_weight.saturating_sub(1) } else { window.max_arity };
    if p.max_arity() < amax {
        return Err(Error::WindowTooSmall(format!("bar window needs operad arities up to {amax}, have {}", p.max_arity())));
    }
    let mut cogens = GeneratorSet::new();
    let mut keys = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for a in 0..=amax {
        for k in p.basis(a)? {
            let name = unique_name(&cogens, format!("s{}", compact(&p.key_name(&k))));
            let s = cogens.push(&name, a as u32, (p.key_degree(&k) + 1) as i32, 1)?;
            keys.insert(s.label, k.clone());
            labels.insert(k, s.label);
        }
    }
    let v = cogens.push(RESERVED_V, 1, 2, 1)?;
    let cor = |k: &P::Key| -> Result<Tree> {
        let l = labels.get(k).ok_or_else(|| Error::WindowTooSmall(format!("{} lies outside the bar cogenerators", p.key_name(k))))?;
        Ok(Tree::corolla(cogens.symbol(*l)))
    };
    let susp = |x: &LinComb<P::Key>| x.try_map_linear(|k| Ok::<_, Error>(LinComb::single(cor(k)?)));
    let phi = |b: &Tree| -> Result<LinComb<Tree>> {
        let verts: Vec<(usize, Symbol)> = b.vertices().collect();
        if verts.iter().any(|(_, s)| *s == v) {
            return if verts.len() == 1 { susp(&p.unit()) } else { Ok(LinComb::zero()) };
        }
        match verts.len() {
            1 => Ok(susp(&p.differential_basis(&keys[&verts[0].1.label])?)?.neg()),
            2 => {
                let (a, b2) = (&keys[&verts[0].1.label], &keys[&verts[1].1.label]);
                let i = b.leaves_before(verts[1].0) + 1;
                Ok(susp(&p.compose_basis(i, a, b2)?)?.scaled(&sign(p.key_degree(a))))
            }
            _ => Ok(LinComb::zero()),
        }
    };
    let theta = |t: &Tree| Ok(if *t == Tree::corolla(v) { Scalar::one() } else { Scalar::zero() });
    let coop = TruncatedCurvedCooperad::cofree(cogens.clone(), window, 2, phi, theta)?;
    Ok(BarConstruction { coop, keys, labels, v })
}

/// Ω_u𝒞 = 𝕋(s⁻¹𝒞̄) with generator labels tied to basis keys of 𝒞̄.
#[derive(Clone, Debug)]
pub struct CobarConstruction {
    pub operad: TruncatedDgOperad,
    pub keys: Vec<Tree>,
    pub labels: BTreeMap<Tree, u32>,
}

impl CobarConstruction {
    /// The generator s⁻¹x as a corolla.
    pub fn desusp(&self, key: &Tree) -> Result<Tree> {
        let l = self.labels.get(key).ok_or_else(|| Error::WindowTooSmall("cooperad element outside the cobar generators".into()))?;
        Ok(Tree::corolla(self.operad.generators().symbol(*l)))
    }

    pub fn key_of(&self, label: u32) -> &Tree {
        &self.keys[label as usize]
    }
}

/// Cobar construction of a curved cooperad; the window weight counts total
/// 𝒞-weight. D(s⁻¹x) = θ(x)1 − s⁻¹dx − Σ (−1)^{|x₁|} s⁻¹x₁ ∘_i s⁻¹x₂.
pub fn cobar_operad(c: &TruncatedCurvedCooperad, window: Window) -> Result<CobarConstruction> {
    let cw = c.window();
    if window.max_weight > cw.max_weight {
        return Err(Error::WindowTooSmall("cobar weight exceeds the cooperad window".into()));
    }
    let nullary = (1..=window.max_weight).any(|w| c.basis(0, w).is_ok_and(|b| !b.is_empty()));
    let mut gens = GeneratorSet::new();
    let mut keys = Vec::new();
    let mut labels = BTreeMap::new();
    for w in 1..=window.max_weight {
        let nmax = if nullary { window.max_arity + window.max_weight - w } else { window.max_arity };
        for n in 0..=nmax {
            for k in c.basis(n, w)? {
                let name = unique_name(&gens, format!("s-{}", compact(&c.show(&k))));
                let s = gens.push(&name, n as u32, (k.degree() - 1) as i32, w as u32)?;
                labels.insert(k.clone(), s.label);
                keys.push(k);
            }
        }
    }
    let gen = |k: &Tree| -> Result<Tree> {
        let l = labels.get(k).ok_or_else(|| Error::WindowTooSmall(format!("{} is not a cobar generator", c.show(k))))?;
        Ok(Tree::corolla(gens.symbol(*l)))
    };
    let mut derivation = BTreeMap::new();
    for k in &keys {
        let x = c.element(k)?;
        let mut img = LinComb::zero();
        let th = c.theta(&x);
        if !th.is_zero() {
            img.add_term(Tree::trivial(), th);
        }
        for (t, coef) in &c.coordinates(&c.d(&x)) {
            img.add_term(gen(t)?, -coef.clone());
        }
        for ((l, i, u), coef) in &c.delta2(&x) {
            if !c.is_key(l) || !c.is_key(u) {
                continue;
            }
            let (neg, g) = gen(l)?.graft(*i, &gen(u)?)?;
            let s = if neg ^ l.odd() { Scalar::one() } else { -Scalar::one() };
            img.add_term(g, s * coef);
        }
        if !img.is_zero() {
            derivation.insert(labels[k], img);
        }
    }
    let operad = TruncatedDgOperad::free(gens, window, derivation)?;
    Ok(CobarConstruction { operad, keys, labels })
}
