use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linhom::{LinComb, Scalar, SparseVec, Subspace};

use super::generators::GeneratorSet;
use super::tree::Tree;

/// Quadratic-linear-constant presentation (V, R) with R ⊆ ℐ ⊕ 𝕋^{≤2}(V).
///
/// Each relation r splits as r = q(r) + φ(q(r)) with q(r) its weight-2 part;
/// so φ = (φ₀, φ₁) is read off as the constant and linear parts of r.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: GeneratorSet,
    pub relations: Vec<LinComb<Tree>>,
}

/// Basis of qR in one arity, with φ transported along the echelon form.
#[derive(Clone, Debug)]
pub struct QuadraticPart {
    pub trees: Vec<Tree>,
    pub space: Subspace,
    /// φ₀ and φ₁ of each basis vector, keyed by pivot index
    pub phi0: BTreeMap<usize, Scalar>,
    pub phi1: BTreeMap<usize, LinComb<Tree>>,
}

impl QuadraticPart {
    pub fn vector(&self, p: &LinComb<Tree>) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (t, c) in p {
            let i = self.trees.binary_search(t).ok()?;
            v.insert(i, c.clone());
        }
        Some(v)
    }

    pub fn element(&self, v: &SparseVec) -> LinComb<Tree> {
        v.iter().map(|(i, c)| (self.trees[*i].clone(), c.clone())).collect()
    }

    /// φ evaluated on an element of qR: (φ₀, φ₁).
    pub fn phi(&self, q: &LinComb<Tree>) -> Option<(Scalar, LinComb<Tree>)> {
        let v = self.vector(q)?;
        if !self.space.contains(&v) {
            return None;
        }
        let mut c0 = Scalar::zero();
        let mut c1 = LinComb::zero();
        for (p, c) in self.space.coordinates(&v) {
            c0 += self.phi0.get(&p).cloned().unwrap_or_else(Scalar::zero) * &c;
            if let Some(x) = self.phi1.get(&p) {
                c1.add_scaled(x, &c);
            }
        }
        Some((c0, c1))
    }
}

impl Presentation {
    pub fn new(generators: GeneratorSet, relations: Vec<LinComb<Tree>>) -> Result<Self> {
        let p = Presentation { generators, relations };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for (k, r) in self.relations.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::InconsistentPresentation(format!("relation {k} is zero")));
            }
            let ar: Vec<usize> = r.keys().map(|t| t.arity()).collect();
            let dg: Vec<i64> = r.keys().map(|t| t.degree()).collect();
            if ar.windows(2).any(|w| w[0] != w[1]) || dg.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::InconsistentPresentation(format!("relation {k} is not homogeneous")));
            }
            for t in r.keys() {
                if t.vertex_count() > 2 {
                    return Err(Error::InconsistentPresentation(format!("relation {k} has a term of weight > 2")));
                }
            }
        }
        // R ∩ (ℐ ⊕ V) = 0 ⟺ q is injective on span(R) ⟺ φ is well defined
        self.quadratic_parts()?;
        Ok(())
    }

    pub fn quadratic(r: &LinComb<Tree>) -> LinComb<Tree> {
        r.iter().filter(|(t, _)| t.vertex_count() == 2).map(|(t, c)| (t.clone(), c.clone())).collect()
    }

    /// qR per arity with φ transported; fails if R meets ℐ ⊕ V.
    pub fn quadratic_parts(&self) -> Result<BTreeMap<usize, QuadraticPart>> {
        let mut by_arity: BTreeMap<usize, Vec<&LinComb<Tree>>> = BTreeMap::new();
        for r in &self.relations {
            let a = r.keys().next().map(|t| t.arity()).unwrap_or(0);
            by_arity.entry(a).or_default().push(r);
        }
        let mut out = BTreeMap::new();
        for (a, rels) in by_arity {
            let mut trees: Vec<Tree> = rels.iter().flat_map(|r| Self::quadratic(r).keys().cloned().collect::<Vec<_>>()).collect();
            trees.sort();
            trees.dedup();
            let mut space = Subspace::tracking(trees.len());
            let mut phis: Vec<(Scalar, LinComb<Tree>)> = Vec::new();
            for r in &rels {
                let q = Self::quadratic(r);
                let v: SparseVec = q.iter().map(|(t, c)| (trees.binary_search(t).unwrap(), c.clone())).collect();
                space.insert(v);
                let mut c0 = Scalar::zero();
                let mut c1 = LinComb::zero();
                for (t, c) in r.iter() {
                    match t.vertex_count() {
                        0 => c0 += c,
                        1 => c1.add_term(t.clone(), c.clone()),
                        _ => {}
                    }
                }
                phis.push((c0, c1));
            }
            for rel in space.relations() {
                // a combination of relations with vanishing quadratic part must vanish
                let mut c0 = Scalar::zero();
                let mut c1 = LinComb::zero();
                for (i, c) in rel {
                    c0 += &phis[*i].0 * c;
                    c1.add_scaled(&phis[*i].1, c);
                }
                if !c0.is_zero() || !c1.is_zero() {
                    return Err(Error::InconsistentPresentation(format!(
                        "a combination of arity-{a} relations lies in I ⊕ V"
                    )));
                }
            }
            let mut phi0 = BTreeMap::new();
            let mut phi1 = BTreeMap::new();
            for p in space.pivots().collect::<Vec<_>>() {
                let tag = space.tag(p).unwrap();
                let mut c0 = Scalar::zero();
                let mut c1 = LinComb::zero();
                for (i, c) in tag {
                    c0 += &phis[*i].0 * c;
                    c1.add_scaled(&phis[*i].1, c);
                }
                phi0.insert(p, c0);
                phi1.insert(p, c1);
            }
            out.insert(a, QuadraticPart { trees, space, phi0, phi1 });
        }
        Ok(out)
    }

    /// Presentation with φ dropped: the quadratic presentation (V, qR).
    pub fn quadratic_presentation(&self) -> Presentation {
        let relations = self.relations.iter().map(Self::quadratic).filter(|q| !q.is_zero()).collect();
        Presentation { generators: self.generators.clone(), relations }
    }

    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.keys().all(|t| t.vertex_count() == 2))
    }
}
