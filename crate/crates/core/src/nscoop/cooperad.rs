use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linhom::{FilteredComplex, GradedMap, GradedSpace, LinComb, Scalar, SparseMatrix, SparseVec, Subspace};
use crate::nsoperad::{GeneratorSet, Symbol, Tree, TreeEnumerator, Window};
use crate::verdict::Verdict;

pub(crate) fn sgn(neg: bool) -> Scalar {
    if neg {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// One (arity, weight) component of a sub-cooperad of 𝕋^c(V): a subspace of
/// the span of `trees` in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Component {
    pub trees: Vec<Tree>,
    pub space: Subspace,
}

impl Component {
    pub fn vector(&self, p: &LinComb<Tree>) -> Option<SparseVec> {
        p.iter().map(|(t, c)| self.trees.binary_search(t).ok().map(|i| (i, c.clone()))).collect()
    }

    pub fn element(&self, v: &SparseVec) -> LinComb<Tree> {
        v.iter().map(|(i, c)| (self.trees[*i].clone(), c.clone())).collect()
    }

    pub fn contains(&self, p: &LinComb<Tree>) -> bool {
        self.vector(p).is_some_and(|v| self.space.contains(&v))
    }

    /// Pivot trees, one per basis element.
    pub fn keys(&self) -> Vec<Tree> {
        self.space.pivots().map(|i| self.trees[i].clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Components {
    /// Every tree of 𝕋^c(V) in the window.
    Cofree,
    /// Components computed for arity ≤ A + W and weight ≤ W.
    Sub(BTreeMap<(usize, usize), Component>),
}

/// Window of a curved conilpotent nonsymmetric cooperad realized inside the
/// cofree cooperad 𝕋^c(V): decomposition is degrafting, the coderivation is
/// D_φ for φ given on small blocks, and θ is given on arity-one trees.
///
/// Basis elements are identified by a key tree: the tree itself in the cofree
/// case, the pivot tree of the echelon basis vector otherwise. Coordinates of
/// an element of the cooperad (or of a tensor power) are read at key trees.
#[derive(Clone, Debug)]
pub struct TruncatedCurvedCooperad {
    cogens: GeneratorSet,
    window: Window,
    components: Components,
    phi: BTreeMap<Tree, LinComb<Tree>>,
    max_block: usize,
    theta: BTreeMap<Tree, Scalar>,
}

/// Blocks (connected vertex sets with at most `max_block` vertices) of the given trees.
fn blocks_of<'a>(trees: impl Iterator<Item = &'a Tree>, max_block: usize) -> BTreeSet<Tree> {
    let mut out = BTreeSet::new();
    for t in trees {
        for (r, _) in t.vertices() {
            for set in t.connected_sets(r, max_block) {
                out.insert(t.extract_block(r, &set).2);
            }
        }
    }
    out
}

impl TruncatedCurvedCooperad {
    /// Builds the cofree cooperad 𝕋^c(V) in a window with the coderivation D_φ
    /// and curvature θ obtained by tabulating `phi` on blocks of at most
    /// `max_block` vertices and `theta` on arity-one trees. Fails with
    /// `CurvatureMismatch` when the curved identities do not hold.
    pub fn cofree(
        cogens: GeneratorSet,
        window: Window,
        max_block: usize,
        phi: impl Fn(&Tree) -> Result<LinComb<Tree>>,
        theta: impl Fn(&Tree) -> Result<Scalar>,
    ) -> Result<Self> {
        let c = Self::tabulate(cogens, window, Components::Cofree, max_block, phi, theta)?;
        let v = c.check_curved()?;
        if let Some(f) = v.witness() {
            return Err(Error::CurvatureMismatch(format!("at {}: {}", f.at, f.residual)));
        }
        Ok(c)
    }

    /// Like [`TruncatedCurvedCooperad::cofree`] but for a sub-cooperad given by
    /// its components; no validation is performed.
    pub fn tabulate(
        cogens: GeneratorSet,
        window: Window,
        components: Components,
        max_block: usize,
        phi: impl Fn(&Tree) -> Result<LinComb<Tree>>,
        theta: impl Fn(&Tree) -> Result<Scalar>,
    ) -> Result<Self> {
        let mut c = TruncatedCurvedCooperad { cogens, window, components, phi: BTreeMap::new(), max_block, theta: BTreeMap::new() };
        let trees = c.window_trees();
        for b in blocks_of(trees.iter(), max_block) {
            let img = phi(&b)?;
            for (t, _) in &img {
                if t.vertex_count() != 1 || t.arity() != b.arity() || t.degree() != b.degree() - 1 {
                    return Err(Error::Invalid(format!("φ({}) is not a cogenerator of the right arity and degree", c.cogens.show(&b))));
                }
            }
            if !img.is_zero() {
                c.phi.insert(b, img);
            }
        }
        let mut e = TreeEnumerator::new(&c.cogens);
        for w in 1..=window.max_weight {
            for t in e.trees(1, w) {
                let x = theta(&t)?;
                if !x.is_zero() {
                    if t.degree() != 2 {
                        return Err(Error::Invalid(format!("θ is nonzero on {} of degree {}", c.cogens.show(&t), t.degree())));
                    }
                    c.theta.insert(t, x);
                }
            }
        }
        Ok(c)
    }

    /// Replaces the coderivation and curvature tables (used for mutation tests and JSON input).
    pub fn with_tables(mut self, phi: BTreeMap<Tree, LinComb<Tree>>, theta: BTreeMap<Tree, Scalar>) -> Self {
        self.max_block = phi.keys().map(|t| t.vertex_count()).max().unwrap_or(1);
        self.phi = phi;
        self.theta = theta;
        self
    }

    pub fn cogens(&self) -> &GeneratorSet {
        &self.cogens
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    pub fn is_cofree(&self) -> bool {
        matches!(self.components, Components::Cofree)
    }

    pub fn phi_table(&self) -> &BTreeMap<Tree, LinComb<Tree>> {
        &self.phi
    }

    pub fn theta_table(&self) -> &BTreeMap<Tree, Scalar> {
        &self.theta
    }

    pub fn show(&self, t: &Tree) -> String {
        self.cogens.show(t)
    }

    pub fn show_poly(&self, p: &LinComb<Tree>) -> String {
        self.cogens.show_poly(p)
    }

    fn window_trees(&self) -> Vec<Tree> {
        match &self.components {
            Components::Cofree => {
                let mut e = TreeEnumerator::new(&self.cogens);
                let mut out = Vec::new();
                for n in 0..=self.window.max_arity {
                    for w in 0..=self.window.max_weight {
                        out.extend(e.trees(n, w));
                    }
                }
                out
            }
            Components::Sub(m) => m.values().flat_map(|c| c.trees.iter().cloned()).collect(),
        }
    }

    fn component(&self, arity: usize, weight: usize) -> Result<Option<&Component>> {
        match &self.components {
            Components::Cofree => Ok(None),
            Components::Sub(m) => {
                if weight > self.window.max_weight || arity > self.window.max_arity + self.window.max_weight {
                    return Err(Error::WindowTooSmall(format!("component ({arity}, {weight}) outside the computed range")));
                }
                Ok(m.get(&(arity, weight)))
            }
        }
    }

    /// Basis keys of the (arity, weight) component; the unit | is the key of (1, 0).
    pub fn basis(&self, arity: usize, weight: usize) -> Result<Vec<Tree>> {
        if weight == 0 {
            return Ok(if arity == 1 { vec![Tree::trivial()] } else { Vec::new() });
        }
        match &self.components {
            Components::Cofree => {
                if arity > self.window.max_arity || weight > self.window.max_weight {
                    return Err(Error::WindowTooSmall(format!("component ({arity}, {weight}) outside the window")));
                }
                Ok(TreeEnumerator::new(&self.cogens).trees(arity, weight))
            }
            Components::Sub(_) => Ok(self.component(arity, weight)?.map(|c| c.keys()).unwrap_or_default()),
        }
    }

    /// Keys of C̄ in the window (weight ≥ 1, arity ≤ A).
    pub fn reduced_basis(&self) -> Result<Vec<Tree>> {
        let mut out = Vec::new();
        for n in 0..=self.window.max_arity {
            for w in 1..=self.window.max_weight {
                out.extend(self.basis(n, w)?);
            }
        }
        Ok(out)
    }

    /// The basis element with key `k`.
    pub fn element(&self, k: &Tree) -> Result<LinComb<Tree>> {
        if k.is_trivial() || self.is_cofree() {
            return Ok(LinComb::single(k.clone()));
        }
        let c = self
            .component(k.arity(), k.weight())?
            .ok_or_else(|| Error::Invalid(format!("{} is not a basis key", self.show(k))))?;
        let i = c.trees.binary_search(k).map_err(|_| Error::Invalid(format!("{} is not a basis key", self.show(k))))?;
        let v = c.space.basis().find(|(p, _)| *p == i).map(|(_, v)| v.clone());
        v.map(|v| c.element(&v)).ok_or_else(|| Error::Invalid(format!("{} is not a basis key", self.show(k))))
    }

    pub fn is_key(&self, t: &Tree) -> bool {
        if t.is_trivial() || self.is_cofree() {
            return true;
        }
        match self.component(t.arity(), t.weight()) {
            Ok(Some(c)) => c.trees.binary_search(t).is_ok_and(|i| c.space.pivots().any(|p| p == i)),
            _ => false,
        }
    }

    /// Coordinates of an element of the cooperad in the key basis.
    pub fn coordinates(&self, z: &LinComb<Tree>) -> LinComb<Tree> {
        z.iter().filter(|(t, _)| self.is_key(t)).map(|(t, c)| (t.clone(), c.clone())).collect()
    }

    /// Whether `z` lies in the cooperad.
    pub fn contains(&self, z: &LinComb<Tree>) -> Result<bool> {
        if self.is_cofree() {
            return Ok(true);
        }
        let mut by: BTreeMap<(usize, usize), LinComb<Tree>> = BTreeMap::new();
        for (t, c) in z {
            by.entry((t.arity(), t.weight())).or_default().add_term(t.clone(), c.clone());
        }
        for ((n, w), p) in by {
            if w == 0 {
                continue;
            }
            match self.component(n, w)? {
                Some(c) if c.contains(&p) => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// The coderivation D_φ on a single tree of 𝕋^c(V).
    pub fn d_tree(&self, t: &Tree) -> LinComb<Tree> {
        let mut out = LinComb::zero();
        for (r, _) in t.vertices() {
            let pre = t.odd_before(r);
            for set in t.connected_sets(r, self.max_block) {
                let (neg, outer, block) = t.extract_block(r, &set);
                let Some(img) = self.phi.get(&block) else { continue };
                for (cor, c) in img {
                    out.add_term(outer.relabel(r, cor.root().unwrap()), sgn(neg ^ pre) * c);
                }
            }
        }
        out
    }

    pub fn d(&self, z: &LinComb<Tree>) -> LinComb<Tree> {
        z.map_linear(|t| self.d_tree(t))
    }

    /// θ extended linearly (zero off the table).
    pub fn theta(&self, z: &LinComb<Tree>) -> Scalar {
        z.iter().fold(Scalar::zero(), |acc, (t, c)| acc + self.theta.get(t).map_or_else(Scalar::zero, |x| x * c))
    }

    pub fn theta_tree(&self, t: &Tree) -> Scalar {
        self.theta.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Reduced infinitesimal decomposition Δ₂(z) = Σ ± L ⊗_i U.
    pub fn delta2(&self, z: &LinComb<Tree>) -> LinComb<(Tree, usize, Tree)> {
        let mut out = LinComb::zero();
        for (t, c) in z {
            for (neg, l, i, u) in t.two_level_splits() {
                out.add_term((l, i, u), sgn(neg) * c);
            }
        }
        out
    }

    /// (θ ⊗ Id − Id ⊗ θ)Δ₂(z).
    pub fn curvature_term(&self, z: &LinComb<Tree>) -> LinComb<Tree> {
        let mut out = LinComb::zero();
        for ((l, _, u), c) in &self.delta2(z) {
            if l.arity() == 1 {
                let th = self.theta_tree(l);
                if !th.is_zero() {
                    out.add_term(u.clone(), th * c);
                }
            }
            if u.arity() == 1 {
                let th = self.theta_tree(u);
                if !th.is_zero() {
                    out.add_term(l.clone(), -th * c);
                }
            }
        }
        out
    }

    /// Full decomposition Δ(z) = Σ ± lower ⊗ (upper₁, …, upper_k), including trivial parts.
    pub fn delta_full(&self, z: &LinComb<Tree>) -> LinComb<Vec<Tree>> {
        let mut out = LinComb::zero();
        for (t, c) in z {
            for (neg, lower, uppers) in t.root_splits() {
                let mut key = vec![lower];
                key.extend(uppers);
                out.add_term(key, sgn(neg) * c);
            }
        }
        out
    }

    /// Whether a tensor of trees lies in C^{⊗k}: every one-factor slice must lie in C.
    pub fn tensor_in_cooperad(&self, z: &LinComb<Vec<Tree>>) -> Result<bool> {
        if self.is_cofree() {
            return Ok(true);
        }
        let k = z.keys().next().map_or(0, |v| v.len());
        for j in 0..k {
            let mut slices: BTreeMap<(Vec<Tree>, usize, usize), LinComb<Tree>> = BTreeMap::new();
            for (v, c) in z {
                let mut rest = v.clone();
                let t = rest.remove(j);
                slices.entry((rest, t.arity(), t.weight())).or_default().add_term(t, c.clone());
            }
            for s in slices.values() {
                if !self.contains(s)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks, on every basis element of C̄ in the window: D² = (θ⊗Id − Id⊗θ)Δ₂,
    /// θD = 0, and (for sub-cooperads) closure under D and Δ₂.
    pub fn check_curved(&self) -> Result<Verdict> {
        let mut v = Verdict::new();
        for k in self.reduced_basis()? {
            let x = self.element(&k)?;
            let dx = self.d(&x);
            v.tick();
            let mut res = self.d(&dx);
            res.sub(&self.curvature_term(&x));
            if !res.is_zero() {
                v.fail(format!("D² at {}", self.show(&k)), self.show_poly(&res));
            }
            v.tick();
            let th = self.theta(&dx);
            if !th.is_zero() {
                v.fail(format!("θD at {}", self.show(&k)), crate::linhom::format_scalar(&th));
            }
            if !self.is_cofree() {
                v.tick();
                if !self.contains(&dx)? {
                    v.fail(format!("D-closure at {}", self.show(&k)), self.show_poly(&dx));
                }
                v.tick();
                let d2: LinComb<Vec<Tree>> = self.delta2(&x).iter().map(|((l, _, u), c)| (vec![l.clone(), u.clone()], c.clone())).collect();
                if !self.tensor_in_cooperad(&d2)? {
                    v.fail(format!("Δ₂-closure at {}", self.show(&k)), "decomposition leaves C ∘₍₁₎ C");
                }
            }
        }
        Ok(v)
    }

    /// Key basis of arity `n` (weights 0..=W) grouped by degree.
    fn arity_basis(&self, n: usize) -> Result<BTreeMap<i64, Vec<Tree>>> {
        let mut by: BTreeMap<i64, Vec<Tree>> = BTreeMap::new();
        for w in 0..=self.window.max_weight {
            for k in self.basis(n, w)? {
                by.entry(k.degree()).or_default().push(k);
            }
        }
        Ok(by)
    }

    /// Coradical filtration of C(n): F_m = C(n) ∩ 𝕋^{≤m}, with F_0 = ℐ.
    pub fn coradical_filtration(&self, n: usize) -> Result<FilteredComplex> {
        let basis = self.arity_basis(n)?;
        let labels = basis.iter().map(|(d, ks)| (*d, ks.iter().map(|k| self.show(k)).collect())).collect();
        let space = GradedSpace::from_components(labels)?;
        let mut level_of = BTreeMap::new();
        for k in basis.values().flatten() {
            let x = self.element(k)?;
            let counts: BTreeSet<usize> = x.keys().map(|t| t.vertex_count()).collect();
            if counts.len() != 1 {
                return Err(Error::Invalid(format!("basis element {} is not homogeneous in vertex count", self.show(k))));
            }
            level_of.insert(k.clone(), *counts.iter().next().unwrap());
        }
        let mut blocks = BTreeMap::new();
        for (d, ks) in &basis {
            let Some(tgt) = basis.get(&(d - 1)) else { continue };
            let cols = ks
                .iter()
                .map(|k| {
                    let dx = self.coordinates(&self.d(&self.element(k)?));
                    Ok(dx.iter().map(|(t, c)| (tgt.binary_search(t).expect("D leaves the arity basis"), c.clone())).collect())
                })
                .collect::<Result<Vec<SparseVec>>>()?;
            blocks.insert(*d, SparseMatrix::from_columns(tgt.len(), cols));
        }
        let diff = GradedMap::new(space.clone(), space.clone(), -1, blocks)?;
        let top = level_of.values().copied().max().unwrap_or(0);
        let levels = (0..=top)
            .map(|m| {
                basis
                    .iter()
                    .map(|(d, ks)| {
                        let vs = ks.iter().enumerate().filter(|(_, k)| level_of[*k] <= m).map(|(i, _)| [(i, Scalar::one())].into_iter().collect());
                        (*d, Subspace::spanned_by(ks.len(), vs))
                    })
                    .collect()
            })
            .collect();
        FilteredComplex::new(space, diff, levels)
    }

    /// Δ(F_n C) ⊆ Σ_{p₀+⋯+p_k ≤ n} F_{p₀}C ⊗ (F_{p₁}C ⊗ ⋯ ⊗ F_{p_k}C), checked on basis elements.
    pub fn check_lemma_cooptech(&self, n: usize) -> Result<Verdict> {
        let mut v = Verdict::new();
        for m in 0..=self.window.max_arity {
            for w in 0..=self.window.max_weight {
                for k in self.basis(m, w)? {
                    let x = self.element(&k)?;
                    if x.keys().any(|t| t.vertex_count() > n) {
                        continue;
                    }
                    v.tick();
                    let dz = self.delta_full(&x);
                    let levels_ok = dz.keys().all(|parts| parts.iter().map(|t| t.vertex_count()).sum::<usize>() <= n);
                    if !levels_ok || !self.tensor_in_cooperad(&dz)? {
                        v.fail(format!("Δ at {}", self.show(&k)), "decomposition leaves the filtration pieces");
                    }
                }
            }
        }
        Ok(v)
    }

    /// Conilpotency surrogate: the coradical filtration reaches every basis element by level W.
    pub fn is_conilpotent(&self) -> Result<bool> {
        for k in self.reduced_basis()? {
            if self.element(&k)?.keys().any(|t| t.vertex_count() > self.window.max_weight) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Relabels every vertex of `t` by `f(label)` (same arity).
pub(crate) fn relabel_all(t: &Tree, f: impl Fn(&Symbol) -> Symbol) -> Tree {
    let nodes = t.nodes().iter().map(|s| if s.is_leaf() { *s } else { f(s) }).collect();
    Tree::from_nodes(nodes).expect("relabeling preserves arities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::int;

    fn binary() -> GeneratorSet {
        let mut g = GeneratorSet::new();
        g.add("m", 2, 1).unwrap();
        g
    }

    #[test]
    fn zero_coderivation_is_valid() {
        let c = TruncatedCurvedCooperad::cofree(binary(), Window::new(4, 3), 2, |_| Ok(LinComb::zero()), |_| Ok(Scalar::zero())).unwrap();
        assert!(c.check_curved().unwrap().passed());
        assert_eq!(c.basis(3, 2).unwrap().len(), 2);
    }

    #[test]
    fn cofree_filtration_is_by_vertex_count() {
        let c = TruncatedCurvedCooperad::cofree(binary(), Window::new(4, 3), 2, |_| Ok(LinComb::zero()), |_| Ok(Scalar::zero())).unwrap();
        let f = c.coradical_filtration(3).unwrap();
        assert_eq!(f.level(0, 2).dim(), 0);
        assert_eq!(f.level(2, 2).dim(), 2);
        assert!(c.check_lemma_cooptech(2).unwrap().passed());
        assert!(c.check_lemma_cooptech(0).unwrap().passed());
    }

    #[test]
    fn unit_only_filtration() {
        let c = TruncatedCurvedCooperad::cofree(GeneratorSet::new(), Window::new(2, 2), 2, |_| Ok(LinComb::zero()), |_| Ok(Scalar::zero())).unwrap();
        let f = c.coradical_filtration(1).unwrap();
        assert_eq!(f.num_levels(), 1);
        assert_eq!(f.level(0, 0).dim(), 1);
    }

    fn bar_of_ground_field(sign: i64) -> Result<TruncatedCurvedCooperad> {
        // B_c(𝕂): cogenerators s1 (degree 1) and v (degree 2), φ(v) = s1,
        // φ(s1 ∘ s1) = s1, θ(v) = 1
        let mut g = GeneratorSet::new();
        let s1 = g.add("s1", 1, 1).unwrap();
        let v = g.push("v", 1, 2, 1).unwrap();
        TruncatedCurvedCooperad::cofree(
            g,
            Window::new(1, 4),
            2,
            move |t| {
                let one = LinComb::single(Tree::corolla(s1));
                Ok(match (t.vertex_count(), t.root()) {
                    (1, Some(r)) if r == v => one,
                    (2, _) if t.nodes().iter().all(|x| x.is_leaf() || *x == s1) => one.scaled(&int(sign)),
                    _ => LinComb::zero(),
                })
            },
            move |t| Ok(if *t == Tree::corolla(v) { int(1) } else { Scalar::zero() }),
        )
    }

    #[test]
    fn bar_of_ground_field_is_curved() {
        let c = bar_of_ground_field(1).unwrap();
        assert_eq!(c.basis(1, 4).unwrap().len(), 16);
        assert!(c.check_curved().unwrap().checked > 0);
    }

    #[test]
    fn flipped_sign_is_detected() {
        assert!(matches!(bar_of_ground_field(-1), Err(Error::CurvatureMismatch(_))));
    }
}
