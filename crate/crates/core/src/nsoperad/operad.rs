use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::linhom::{LinComb, SparseVec, Subspace};
use crate::verdict::Verdict;

use super::enumerate::TreeEnumerator;
use super::free::{check_generator_map, extend_derivation, sgn, Window};
use super::generators::GeneratorSet;
use super::presentation::Presentation;
use super::tree::{Symbol, Tree, HOLE};

/// Finite window of a dg nonsymmetric operad with a chosen basis.
///
/// Partial compositions follow the planar Koszul convention; full composition
/// γ(p; q₁, …, q_k) corresponds to the tensor order p ⊗ q₁ ⊗ … ⊗ q_k.
pub trait DgOperad {
    type Key: Clone + Ord + Debug;

    fn max_arity(&self) -> usize;
    fn basis(&self, arity: usize) -> Result<Vec<Self::Key>>;
    fn key_degree(&self, k: &Self::Key) -> i64;
    fn key_arity(&self, k: &Self::Key) -> usize;
    fn key_name(&self, k: &Self::Key) -> String;
    fn compose_basis(&self, i: usize, a: &Self::Key, b: &Self::Key) -> Result<LinComb<Self::Key>>;
    fn differential_basis(&self, a: &Self::Key) -> Result<LinComb<Self::Key>>;
    fn unit(&self) -> LinComb<Self::Key>;

    fn compose(&self, a: &LinComb<Self::Key>, i: usize, b: &LinComb<Self::Key>) -> Result<LinComb<Self::Key>> {
        let mut out = LinComb::zero();
        for (x, c) in a {
            for (y, d) in b {
                out.add_scaled(&self.compose_basis(i, x, y)?, &(c * d));
            }
        }
        Ok(out)
    }

    fn differential(&self, a: &LinComb<Self::Key>) -> Result<LinComb<Self::Key>> {
        a.try_map_linear(|k| self.differential_basis(k))
    }

    /// γ(p; q₁, …, q_k) by left-to-right partial compositions.
    fn full_compose(&self, p: &LinComb<Self::Key>, children: &[LinComb<Self::Key>]) -> Result<LinComb<Self::Key>> {
        let mut acc = p.clone();
        let mut pos = 1;
        for q in children {
            let ar = q.keys().next().map(|k| self.key_arity(k));
            acc = self.compose(&acc, pos, q)?;
            match ar {
                Some(a) => pos += a,
                None => return Ok(LinComb::zero()),
            }
        }
        Ok(acc)
    }

    fn show(&self, a: &LinComb<Self::Key>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        a.iter()
            .map(|(k, c)| format!("{}*{}", crate::linhom::format_scalar(c), self.key_name(k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Clone, Debug)]
struct IdealData {
    trees: Vec<Tree>,
    index: HashMap<Tree, usize>,
    ideal: Subspace,
}

impl IdealData {
    fn vector(&self, p: &LinComb<Tree>) -> Result<SparseVec> {
        p.iter()
            .map(|(t, c)| {
                self.index
                    .get(t)
                    .map(|&i| (i, c.clone()))
                    .ok_or_else(|| Error::WindowTooSmall(format!("tree of weight {} outside quotient window", t.weight())))
            })
            .collect()
    }
}

/// Free or presented operad in a window, with a derivation of degree −1
/// given on generators.
#[derive(Clone, Debug)]
pub struct TruncatedDgOperad {
    generators: GeneratorSet,
    window: Window,
    ideal: Option<BTreeMap<usize, IdealData>>,
    derivation: BTreeMap<u32, LinComb<Tree>>,
}

impl TruncatedDgOperad {
    /// Free operad 𝕋(V) with derivation extending `derivation`.
    pub fn free(generators: GeneratorSet, window: Window, derivation: BTreeMap<u32, LinComb<Tree>>) -> Result<Self> {
        check_generator_map(&derivation, &generators, -1)?;
        Ok(TruncatedDgOperad { generators, window, ideal: None, derivation })
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_free(&self) -> bool {
        self.ideal.is_none()
    }

    pub fn derivation(&self) -> &BTreeMap<u32, LinComb<Tree>> {
        &self.derivation
    }

    /// Quotient 𝕋(V)/(R) computed in the window: the ideal is spanned by all
    /// ways of inserting a relation into a context, keeping every term in the window.
    pub fn quotient_by_ideal(p: &Presentation, window: Window) -> Result<Self> {
        p.quadratic_parts()?;
        let gens = &p.generators;
        let mut tree_enum = TreeEnumerator::new(gens);
        let mut data: BTreeMap<usize, IdealData> = BTreeMap::new();
        for n in 0..=window.max_arity {
            let mut trees = Vec::new();
            for w in 0..=window.max_weight {
                trees.extend(tree_enum.trees(n, w));
            }
            trees.sort();
            let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
            let dim = trees.len();
            data.insert(n, IdealData { trees, index, ideal: Subspace::zero(dim) });
        }
        for r in &p.relations {
            let k = r.keys().next().unwrap().arity() as u32;
            let deg = r.keys().next().unwrap().degree() as i32;
            let maxw = r.keys().map(|t| t.weight()).max().unwrap_or(0).max(1) as u32;
            let hole = Symbol::new(HOLE, k, deg, maxw);
            let mut syms: Vec<Symbol> = gens.symbols().collect();
            syms.push(hole);
            let mut ctx_enum = TreeEnumerator::from_symbols(syms);
            for n in 0..=window.max_arity {
                for w in maxw as usize..=window.max_weight {
                    for ctx in ctx_enum.trees(n, w) {
                        let holes: Vec<usize> = ctx.nodes().iter().enumerate().filter(|(_, s)| s.label == HOLE).map(|(i, _)| i).collect();
                        if holes.len() != 1 {
                            continue;
                        }
                        let mut elt = LinComb::zero();
                        for (t, c) in r {
                            let (neg, full) = ctx.substitute(holes[0], t);
                            elt.add_term(full, sgn(neg) * c);
                        }
                        let d = data.get_mut(&n).unwrap();
                        let v = d.vector(&elt)?;
                        d.ideal.insert(v);
                    }
                }
            }
        }
        let op = TruncatedDgOperad { generators: gens.clone(), window, ideal: Some(data), derivation: BTreeMap::new() };
        op.check_low_weight_ideal(p)?;
        Ok(op)
    }

    /// (R) ∩ 𝕋^{≤2}(V) = span R within the window.
    fn check_low_weight_ideal(&self, p: &Presentation) -> Result<()> {
        let Some(data) = &self.ideal else { return Ok(()) };
        for (n, d) in data {
            let low = Subspace::spanned_by(
                d.trees.len(),
                d.trees.iter().enumerate().filter(|(_, t)| t.vertex_count() <= 2).map(|(i, _)| [(i, num::One::one())].into_iter().collect()),
            );
            let meet = d.ideal.intersection(&low);
            let rels = Subspace::spanned_by(
                d.trees.len(),
                p.relations.iter().filter(|r| r.keys().next().map(|t| t.arity()) == Some(*n)).map(|r| d.vector(r)).collect::<Result<Vec<_>>>()?,
            );
            if meet != rels {
                return Err(Error::InconsistentPresentation(format!(
                    "the ideal meets trees of weight ≤ 2 in arity {n} beyond the span of the relations"
                )));
            }
        }
        Ok(())
    }

    /// Installs a derivation (degree −1 on generators); for quotients the
    /// ideal must be preserved.
    pub fn with_derivation(mut self, derivation: BTreeMap<u32, LinComb<Tree>>) -> Result<Self> {
        check_generator_map(&derivation, &self.generators, -1)?;
        self.derivation = derivation;
        if let Some(data) = &self.ideal {
            for d in data.values() {
                for v in d.ideal.basis_vectors() {
                    let elt: LinComb<Tree> = v.iter().map(|(i, c)| (d.trees[*i].clone(), c.clone())).collect();
                    let img = elt.map_linear(|t| extend_derivation(&self.derivation, -1, t));
                    if img.keys().any(|t| !self.window.contains(t)) {
                        continue;
                    }
                    let dv = data[&img.keys().next().map_or(0, |t| t.arity())].vector(&img)?;
                    if !img.is_zero() && !data[&img.keys().next().unwrap().arity()].ideal.contains(&dv) {
                        return Err(Error::Invalid("derivation does not preserve the ideal".into()));
                    }
                }
            }
        }
        Ok(self)
    }

    /// Normal form of a tree polynomial.
    pub fn reduce(&self, p: &LinComb<Tree>) -> Result<LinComb<Tree>> {
        for t in p.keys() {
            if !self.window.contains(t) {
                return Err(Error::WindowTooSmall(format!(
                    "tree of arity {} and weight {} outside window ({}, {})",
                    t.arity(),
                    t.weight(),
                    self.window.max_arity,
                    self.window.max_weight
                )));
            }
        }
        let Some(data) = &self.ideal else { return Ok(p.clone()) };
        let mut by_arity: BTreeMap<usize, LinComb<Tree>> = BTreeMap::new();
        for (t, c) in p {
            by_arity.entry(t.arity()).or_default().add_term(t.clone(), c.clone());
        }
        let mut out = LinComb::zero();
        for (n, q) in by_arity {
            let d = &data[&n];
            let r = d.ideal.reduce(&d.vector(&q)?);
            for (i, c) in r {
                out.add_term(d.trees[i].clone(), c);
            }
        }
        Ok(out)
    }

    /// Basis trees of arity `n`: normal forms (quotients) or all window trees (free).
    pub fn normal_forms(&self, n: usize) -> Vec<Tree> {
        match &self.ideal {
            Some(data) => match data.get(&n) {
                Some(d) => {
                    let piv: std::collections::BTreeSet<usize> = d.ideal.pivots().collect();
                    d.trees.iter().enumerate().filter(|(i, _)| !piv.contains(i)).map(|(_, t)| t.clone()).collect()
                }
                None => Vec::new(),
            },
            None => {
                let mut e = TreeEnumerator::new(&self.generators);
                (0..=self.window.max_weight).flat_map(|w| e.trees(n, w)).collect()
            }
        }
    }

    pub fn graft(&self, a: &LinComb<Tree>, i: usize, b: &LinComb<Tree>) -> Result<LinComb<Tree>> {
        self.reduce(&super::free::graft_poly(a, i, b)?)
    }

    pub fn d(&self, a: &LinComb<Tree>) -> Result<LinComb<Tree>> {
        self.reduce(&a.map_linear(|t| extend_derivation(&self.derivation, -1, t)))
    }

    /// d² = 0 on every basis element of the window.
    pub fn check_square_zero(&self) -> Result<Verdict> {
        let mut v = Verdict::new();
        for n in 0..=self.window.max_arity {
            for t in self.normal_forms(n) {
                v.tick();
                let dd = self.d(&self.d(&LinComb::single(t.clone()))?)?;
                if !dd.is_zero() {
                    v.fail(self.generators.show(&t), self.generators.show_poly(&dd));
                }
            }
        }
        Ok(v)
    }

    /// Sequential and parallel associativity on in-window basis triples, plus unit laws.
    pub fn check_operad_axioms(&self, max_arity: usize) -> Result<Verdict> {
        let mut v = Verdict::new();
        let basis: Vec<Tree> = (0..=max_arity).flat_map(|n| self.normal_forms(n)).collect();
        let one = LinComb::single(Tree::trivial());
        for a in &basis {
            let la = LinComb::single(a.clone());
            v.tick();
            if self.graft(&one, 1, &la)? != la {
                v.fail(format!("unit ∘ {}", self.generators.show(a)), "left unit law");
            }
            for i in 1..=a.arity() {
                if self.graft(&la, i, &one)? != la {
                    v.fail(format!("{} ∘_{i} unit", self.generators.show(a)), "right unit law");
                }
            }
            for b in &basis {
                for c in &basis {
                    if a.weight() + b.weight() + c.weight() > self.window.max_weight
                        || a.arity() + b.arity() + c.arity() > self.window.max_arity + 2
                        || a.arity() + b.arity() > self.window.max_arity + 1
                        || a.arity() + c.arity() > self.window.max_arity + 1
                        || b.arity() + c.arity() > self.window.max_arity + 1
                    {
                        continue;
                    }
                    let (lb, lc) = (LinComb::single(b.clone()), LinComb::single(c.clone()));
                    for i in 1..=a.arity() {
                        // sequential: (a ∘_i b) ∘_{i+j-1} c = a ∘_i (b ∘_j c)
                        for j in 1..=b.arity() {
                            v.tick();
                            let lhs = self.graft(&self.graft(&la, i, &lb)?, i + j - 1, &lc)?;
                            let rhs = self.graft(&la, i, &self.graft(&lb, j, &lc)?)?;
                            if lhs != rhs {
                                v.fail(format!("sequential ({i},{j})"), "composition not associative");
                            }
                        }
                        // parallel: (a ∘_i b) ∘_{k+l-1} c = ± (a ∘_k c) ∘_i b for i < k
                        for k in i + 1..=a.arity() {
                            v.tick();
                            let lhs = self.graft(&self.graft(&la, i, &lb)?, k + b.arity() - 1, &lc)?;
                            let rhs = self.graft(&self.graft(&la, k, &lc)?, i, &lb)?;
                            let s = if b.odd() && c.odd() { rhs.neg() } else { rhs };
                            if lhs != s {
                                v.fail(format!("parallel ({i},{k})"), "parallel composition axiom");
                            }
                        }
                    }
                }
            }
        }
        Ok(v)
    }

    /// Derivation law d(a ∘_i b) = da ∘_i b + (−1)^{|a|} a ∘_i db on in-window pairs.
    pub fn check_derivation_law(&self, max_arity: usize) -> Result<Verdict> {
        let mut v = Verdict::new();
        let basis: Vec<Tree> = (0..=max_arity).flat_map(|n| self.normal_forms(n)).collect();
        for a in &basis {
            for b in &basis {
                if a.weight() + b.weight() > self.window.max_weight || a.arity() + b.arity() > self.window.max_arity + 1 {
                    continue;
                }
                let (la, lb) = (LinComb::single(a.clone()), LinComb::single(b.clone()));
                for i in 1..=a.arity() {
                    v.tick();
                    let lhs = self.d(&self.graft(&la, i, &lb)?)?;
                    let mut rhs = self.graft(&self.d(&la)?, i, &lb)?;
                    let t = self.graft(&la, i, &self.d(&lb)?)?;
                    rhs.add_scaled(&t, &crate::linhom::sign(a.degree()));
                    if lhs != rhs {
                        v.fail(format!("{} ∘_{i} {}", self.generators.show(a), self.generators.show(b)), "derivation law");
                    }
                }
            }
        }
        Ok(v)
    }

    /// Dimension of the arity-n component.
    pub fn dim(&self, n: usize) -> usize {
        self.normal_forms(n).len()
    }
}

impl DgOperad for TruncatedDgOperad {
    type Key = Tree;

    fn max_arity(&self) -> usize {
        self.window.max_arity
    }

    fn basis(&self, arity: usize) -> Result<Vec<Tree>> {
        if arity > self.window.max_arity {
            return Err(Error::WindowTooSmall(format!("arity {arity} beyond operad window")));
        }
        Ok(self.normal_forms(arity))
    }

    fn key_degree(&self, k: &Tree) -> i64 {
        k.degree()
    }

    fn key_arity(&self, k: &Tree) -> usize {
        k.arity()
    }

    fn key_name(&self, k: &Tree) -> String {
        self.generators.show(k)
    }

    fn compose_basis(&self, i: usize, a: &Tree, b: &Tree) -> Result<LinComb<Tree>> {
        let (neg, t) = a.graft(i, b)?;
        self.reduce(&LinComb::term(t, sgn(neg)))
    }

    fn differential_basis(&self, a: &Tree) -> Result<LinComb<Tree>> {
        self.d(&LinComb::single(a.clone()))
    }

    fn unit(&self) -> LinComb<Tree> {
        LinComb::single(Tree::trivial())
    }
}

/// Evaluates a tree of P-elements: each vertex of `t` is sent to `f(label)`,
/// and the results are composed along the tree (degree-0 evaluation, no signs).
pub fn evaluate_tree<P: DgOperad>(p: &P, t: &Tree, f: &dyn Fn(&Symbol) -> Result<LinComb<P::Key>>) -> Result<LinComb<P::Key>> {
    fn go<P: DgOperad>(p: &P, t: &Tree, pos: usize, f: &dyn Fn(&Symbol) -> Result<LinComb<P::Key>>) -> Result<LinComb<P::Key>> {
        let s = t.nodes()[pos];
        if s.is_leaf() {
            return Ok(p.unit());
        }
        let root = f(&s)?;
        let kids = t.children(pos);
        if kids.iter().all(|&c| t.nodes()[c].is_leaf()) {
            return Ok(root);
        }
        let ch = kids.iter().map(|&c| go(p, t, c, f)).collect::<Result<Vec<_>>>()?;
        p.full_compose(&root, &ch)
    }
    go(p, t, 0, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::int;

    fn uas() -> Presentation {
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
    fn uas_is_one_dimensional() {
        let op = TruncatedDgOperad::quotient_by_ideal(&uas(), Window::new(4, 5)).unwrap();
        for n in 0..=4 {
            assert_eq!(op.dim(n), 1, "arity {n}");
        }
        assert_eq!(op.normal_forms(1), vec![Tree::trivial()]);
        assert_eq!(op.generators().show(&op.normal_forms(0)[0]), "xi");
    }

    #[test]
    fn uas_axioms_hold() {
        let op = TruncatedDgOperad::quotient_by_ideal(&uas(), Window::new(4, 5)).unwrap();
        assert!(op.check_operad_axioms(3).unwrap().passed());
        assert!(op.check_square_zero().unwrap().passed());
    }

    #[test]
    fn empty_relations_give_free_counts() {
        let mut g = GeneratorSet::new();
        g.add("mu", 2, 0).unwrap();
        let p = Presentation::new(g, vec![]).unwrap();
        let op = TruncatedDgOperad::quotient_by_ideal(&p, Window::new(4, 3)).unwrap();
        assert_eq!(op.dim(3), 2);
        assert_eq!(op.dim(4), 5);
    }

    #[test]
    fn relation_in_linear_part_is_rejected() {
        let mut g = GeneratorSet::new();
        g.add("mu", 2, 0).unwrap();
        g.add("nu", 2, 0).unwrap();
        let p = |s: &str| g.parse(s).unwrap();
        let r1 = LinComb::from_terms([(p("(mu mu |)"), int(1)), (p("mu"), int(1))]);
        let r2 = LinComb::from_terms([(p("(mu mu |)"), int(1)), (p("nu"), int(1))]);
        assert!(matches!(Presentation::new(g, vec![r1, r2]), Err(Error::InconsistentPresentation(_))));
    }
}
