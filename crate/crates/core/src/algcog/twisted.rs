use std::collections::BTreeMap;
use std::fmt::Debug;

use num::Zero;

use crate::error::{Error, Result};
use crate::linhom::{format_scalar, sign, LinComb};
use crate::nscoop::TruncatedCurvedCooperad;
use crate::nsoperad::{DgOperad, Tree, TruncatedDgOperad};
use crate::opbarcobar::OpTwisting;
use crate::verdict::Verdict;

use super::algebra::{UnitalAssocAlgebra, Vector};

/// An algebra over an operad: a finite graded basis, a differential and the
/// action of operad basis elements on basis inputs.
pub trait PAlgebra {
    type Key: Clone + Ord + Debug;
    fn dim(&self) -> usize;
    fn degree(&self, i: usize) -> i64;
    fn label(&self, i: usize) -> String;
    fn d(&self, i: usize) -> Vector;
    fn act(&self, p: &Self::Key, inputs: &[usize]) -> Result<Vector>;

    /// γ(p; x₁, …, x_n) extended multilinearly.
    fn act_vectors(&self, p: &Self::Key, inputs: &[Vector]) -> Result<Vector> {
        let mut out = Vector::zero();
        let mut stack: Vec<(Vec<usize>, crate::Scalar)> = vec![(Vec::new(), crate::linhom::int(1))];
        for x in inputs {
            let mut next = Vec::new();
            for (w, c) in &stack {
                for (i, y) in x {
                    let mut nw = w.clone();
                    nw.push(*i);
                    next.push((nw, c * y));
                }
            }
            stack = next;
        }
        for (w, c) in stack {
            out.add_scaled(&self.act(p, &w)?, &c);
        }
        Ok(out)
    }
}

/// A unital associative algebra as an algebra over uAs: μ acts by the
/// product and ξ by the unit.
pub struct UasAlgebra<'a> {
    pub algebra: &'a UnitalAssocAlgebra,
    mu: u32,
    xi: u32,
}

impl<'a> UasAlgebra<'a> {
    /// `p` must be generated by operations named `mu` (arity 2) and `xi` (arity 0).
    pub fn new(algebra: &'a UnitalAssocAlgebra, p: &TruncatedDgOperad) -> Result<Self> {
        let find = |name: &str| p.generators().lookup(name).map(|s| s.label).ok_or_else(|| Error::Invalid(format!("operad has no generator {name}")));
        Ok(UasAlgebra { algebra, mu: find("mu")?, xi: find("xi")? })
    }

    fn eval(&self, t: &Tree, pos: &mut usize, inputs: &[usize], next: &mut usize) -> Result<Vector> {
        let s = t.nodes()[*pos];
        *pos += 1;
        if s.is_leaf() {
            let i = *inputs.get(*next).ok_or_else(|| Error::DimensionMismatch("too few inputs".into()))?;
            *next += 1;
            Ok(Vector::single(i))
        } else if s.label == self.mu {
            let a = self.eval(t, pos, inputs, next)?;
            let b = self.eval(t, pos, inputs, next)?;
            Ok(self.algebra.mul(&a, &b))
        } else if s.label == self.xi {
            Ok(self.algebra.unit().clone())
        } else {
            Err(Error::Invalid("operation outside uAs".into()))
        }
    }
}

impl PAlgebra for UasAlgebra<'_> {
    type Key = Tree;

    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn degree(&self, i: usize) -> i64 {
        self.algebra.degree(i)
    }

    fn label(&self, i: usize) -> String {
        self.algebra.label(i).to_string()
    }

    fn d(&self, i: usize) -> Vector {
        self.algebra.d_basis(i)
    }

    fn act(&self, p: &Tree, inputs: &[usize]) -> Result<Vector> {
        if p.arity() != inputs.len() {
            return Err(Error::DimensionMismatch(format!("operation of arity {} on {} inputs", p.arity(), inputs.len())));
        }
        let (mut pos, mut next) = (0, 0);
        self.eval(p, &mut pos, inputs, &mut next)
    }
}

/// A coalgebra over a curved cooperad on a finite basis: the structure map
/// Δ: 𝒟 → 𝒞 ∘ 𝒟 returns (cooperad key, inputs) pairs.
pub trait CCoalgebra {
    fn cooperad(&self) -> &TruncatedCurvedCooperad;
    fn dim(&self) -> usize;
    fn degree(&self, i: usize) -> i64;
    fn weight(&self, i: usize) -> usize;
    fn label(&self, i: usize) -> String;
    fn d(&self, i: usize) -> Result<Vector>;
    fn decompose(&self, i: usize) -> Result<LinComb<(Tree, Vec<usize>)>>;

    /// (θ ∘ Id)Δ.
    fn curvature_term(&self, i: usize) -> Result<Vector> {
        let c = self.cooperad();
        let mut out = Vector::zero();
        for ((l, ys), x) in &self.decompose(i)? {
            if ys.len() == 1 {
                let th = c.theta(&c.element(l)?);
                out.add_term(ys[0], x * th);
            }
        }
        Ok(out)
    }

    /// d² = (θ ∘ Id)Δ on every basis element.
    fn check_curved(&self) -> Result<Verdict> {
        let mut v = Verdict::new();
        for i in 0..self.dim() {
            v.tick();
            let mut r = Vector::zero();
            for (j, x) in &self.d(i)? {
                r.add_scaled(&self.d(*j)?, x);
            }
            r.sub(&self.curvature_term(i)?);
            if !r.is_zero() {
                let shown = r.iter().map(|(j, x)| format!("{}*{}", format_scalar(x), self.label(*j))).collect::<Vec<_>>().join(" + ");
                v.fail(format!("curvature at {}", self.label(i)), shown);
            }
        }
        Ok(v)
    }
}

/// Basis element (c; a₁, …, a_n) of 𝒞 ∘ 𝒜.
pub type CompositeKey = (Tree, Vec<usize>);

/// The twisted composite 𝒞 ∘_α 𝒜 truncated to arity(c) + weight(c) ≤ `bound`.
pub struct TwistedBar<'a, P: DgOperad, A: PAlgebra<Key = P::Key>> {
    alpha: &'a OpTwisting<'a, P>,
    algebra: &'a A,
    basis: Vec<CompositeKey>,
    index: BTreeMap<CompositeKey, usize>,
}

fn words(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w: Vec<usize>| (0..dim).map(move |i| [w.clone(), vec![i]].concat())).collect();
    }
    out
}

/// B_α𝒜 = (𝒞 ∘_α 𝒜, d) with the coderivation extending d_𝒜(ε ∘ Id) + γ_𝒜(α ∘ Id).
///
/// Keeps the elements (c; a) with arity(c) + weight(c) ≤ `bound` and weight(c)
/// within the cooperad window; both conditions are stable under d and Δ.
pub fn bar_alpha<'a, P: DgOperad, A: PAlgebra<Key = P::Key>>(alpha: &'a OpTwisting<'a, P>, algebra: &'a A, bound: usize) -> Result<TwistedBar<'a, P, A>> {
    let c = alpha.source;
    let mut basis = Vec::new();
    for n in 0..=bound {
        for w in 0..=(bound - n).min(c.window().max_weight) {
            for key in c.basis(n, w)? {
                for a in words(algebra.dim(), n) {
                    basis.push((key.clone(), a));
                }
            }
        }
    }
    let index = basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    Ok(TwistedBar { alpha, algebra, basis, index })
}

impl<'a, P: DgOperad, A: PAlgebra<Key = P::Key>> TwistedBar<'a, P, A> {
    pub fn basis(&self) -> &[CompositeKey] {
        &self.basis
    }

    pub fn index_of(&self, k: &CompositeKey) -> Result<usize> {
        self.index.get(k).copied().ok_or_else(|| Error::WindowTooSmall(format!("{} outside the truncation", self.show_key(k))))
    }

    pub fn show_key(&self, (c, a): &CompositeKey) -> String {
        let args = a.iter().map(|i| self.algebra.label(*i)).collect::<Vec<_>>().join(",");
        format!("{}({args})", self.alpha.source.show(c))
    }

    fn gamma(&self, u: &Tree, inputs: &[usize]) -> Result<Vector> {
        let mut out = Vector::zero();
        for (k, x) in &self.alpha.apply(&LinComb::single(u.clone())) {
            out.add_scaled(&self.algebra.act(k, inputs)?, x);
        }
        Ok(out)
    }

    fn push(&self, out: &mut Vector, k: CompositeKey, x: crate::Scalar) -> Result<()> {
        if !x.is_zero() {
            out.add_term(self.index_of(&k)?, x);
        }
        Ok(())
    }
}

impl<P: DgOperad, A: PAlgebra<Key = P::Key>> CCoalgebra for TwistedBar<'_, P, A> {
    fn cooperad(&self) -> &TruncatedCurvedCooperad {
        self.alpha.source
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn degree(&self, i: usize) -> i64 {
        let (c, a) = &self.basis[i];
        c.degree() + a.iter().map(|j| self.algebra.degree(*j)).sum::<i64>()
    }

    fn weight(&self, i: usize) -> usize {
        self.basis[i].0.weight()
    }

    fn label(&self, i: usize) -> String {
        self.show_key(&self.basis[i])
    }

    fn d(&self, i: usize) -> Result<Vector> {
        let co = self.alpha.source;
        let (c, a) = &self.basis[i];
        let x = co.element(c)?;
        let mut out = Vector::zero();
        for (t, y) in &co.coordinates(&co.d(&x)) {
            self.push(&mut out, (t.clone(), a.clone()), y.clone())?;
        }
        let mut before = c.degree();
        for (k, ak) in a.iter().enumerate() {
            for (b, y) in &self.algebra.d(*ak) {
                let mut na = a.clone();
                na[k] = *b;
                self.push(&mut out, (c.clone(), na), y * sign(before))?;
            }
            before += self.algebra.degree(*ak);
        }
        for (b, y) in &self.gamma(c, a)? {
            self.push(&mut out, (Tree::trivial(), vec![*b]), y.clone())?;
        }
        for ((l, i, u), y) in &co.delta2(&x) {
            if !co.is_key(l) || !co.is_key(u) {
                continue;
            }
            let (i, m) = (*i - 1, u.arity());
            let pre: i64 = a[..i].iter().map(|j| self.algebra.degree(*j)).sum();
            let s = sign(l.degree() + (u.degree() - 1) * pre);
            for (b, z) in &self.gamma(u, &a[i..i + m])? {
                let mut na = a[..i].to_vec();
                na.push(*b);
                na.extend_from_slice(&a[i + m..]);
                self.push(&mut out, (l.clone(), na), y * z * &s)?;
            }
        }
        Ok(out)
    }

    fn decompose(&self, i: usize) -> Result<LinComb<(Tree, Vec<usize>)>> {
        let co = self.alpha.source;
        let (c, a) = &self.basis[i];
        let mut out = LinComb::zero();
        for (t, y) in &co.element(c)? {
            for (neg, l, us) in t.root_splits() {
                if !co.is_key(&l) || !us.iter().all(|u| co.is_key(u)) {
                    continue;
                }
                let mut pos = 0;
                let mut parity = neg as i64;
                let mut passed = 0i64;
                let mut ys = Vec::with_capacity(us.len());
                for u in &us {
                    let m = u.arity();
                    parity += u.degree() * passed;
                    let block = a[pos..pos + m].to_vec();
                    passed += block.iter().map(|j| self.algebra.degree(*j)).sum::<i64>();
                    ys.push(self.index_of(&(u.clone(), block))?);
                    pos += m;
                }
                out.add_term((l, ys), y * sign(parity));
            }
        }
        Ok(out)
    }
}

/// Basis element p ⊗ (x₁, …, x_k) of 𝒫 ∘ 𝒟.
pub type CobarKey = (Tree, Vec<usize>);

/// 𝒫 ∘_α 𝒟 truncated to total weight ≤ `max_weight`, where an element of 𝒟
/// has the weight reported by [`CCoalgebra::weight`].
pub struct TwistedCobar<'a, D: CCoalgebra> {
    alpha: &'a OpTwisting<'a, TruncatedDgOperad>,
    coalgebra: &'a D,
    basis: Vec<CobarKey>,
    index: BTreeMap<CobarKey, usize>,
}

/// Ω_α𝒟 = (𝒫 ∘_α 𝒟, d) with the derivation extending x ↦ d_𝒟x − (α ∘ Id)Δ(x).
pub fn cobar_alpha<'a, D: CCoalgebra>(alpha: &'a OpTwisting<'a, TruncatedDgOperad>, coalgebra: &'a D, max_weight: usize) -> Result<TwistedCobar<'a, D>> {
    let p = alpha.target;
    let by_weight: Vec<Vec<usize>> = (0..=max_weight).map(|w| (0..coalgebra.dim()).filter(|i| coalgebra.weight(*i) == w).collect()).collect();
    fn tuples(by_weight: &[Vec<usize>], k: usize, budget: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for w in 0..=budget {
            for rest in tuples(by_weight, k - 1, budget - w) {
                for x in &by_weight[w] {
                    let mut t = vec![*x];
                    t.extend(&rest);
                    out.push(t);
                }
            }
        }
        out
    }
    let mut basis = Vec::new();
    for k in 0..=p.window().max_arity {
        for t in p.normal_forms(k) {
            if t.weight() > max_weight {
                continue;
            }
            for xs in tuples(&by_weight, k, max_weight - t.weight()) {
                basis.push((t.clone(), xs));
            }
        }
    }
    basis.sort();
    let index = basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    Ok(TwistedCobar { alpha, coalgebra, basis, index })
}

impl<'a, D: CCoalgebra> TwistedCobar<'a, D> {
    pub fn basis(&self) -> &[CobarKey] {
        &self.basis
    }

    pub fn degree(&self, (p, xs): &CobarKey) -> i64 {
        p.degree() + xs.iter().map(|x| self.coalgebra.degree(*x)).sum::<i64>()
    }

    pub fn show(&self, (p, xs): &CobarKey) -> String {
        let args = xs.iter().map(|x| self.coalgebra.label(*x)).collect::<Vec<_>>().join(", ");
        format!("{}[{args}]", self.alpha.target.generators().show(p))
    }

    fn push(&self, out: &mut LinComb<usize>, k: CobarKey, x: crate::Scalar) -> Result<()> {
        if x.is_zero() {
            return Ok(());
        }
        let i = self.index.get(&k).ok_or_else(|| Error::WindowTooSmall(format!("{} outside the truncation", self.show(&k))))?;
        out.add_term(*i, x);
        Ok(())
    }

    pub fn d(&self, i: usize) -> Result<LinComb<usize>> {
        let p = self.alpha.target;
        let (t, xs) = &self.basis[i];
        let mut out = LinComb::zero();
        for (q, y) in &p.d(&LinComb::single(t.clone()))? {
            self.push(&mut out, (q.clone(), xs.clone()), y.clone())?;
        }
        let mut passed = 0i64;
        for (j, x) in xs.iter().enumerate() {
            let s = sign(t.degree() + passed);
            for (z, y) in &self.coalgebra.d(*x)? {
                let mut nxs = xs.clone();
                nxs[j] = *z;
                self.push(&mut out, (t.clone(), nxs), y * &s)?;
            }
            for ((c, ys), y) in &self.coalgebra.decompose(*x)? {
                let a = self.alpha.apply(&LinComb::single(c.clone()));
                if a.is_zero() {
                    continue;
                }
                let comp = p.graft(&LinComb::single(t.clone()), j + 1, &a)?;
                for (q, z) in &comp {
                    let s2 = sign(t.degree() + passed + (c.degree() - 1) * passed + 1);
                    let mut nxs = xs[..j].to_vec();
                    nxs.extend(ys);
                    nxs.extend_from_slice(&xs[j + 1..]);
                    self.push(&mut out, (q.clone(), nxs), y * z * s2)?;
                }
            }
            passed += self.coalgebra.degree(*x);
        }
        Ok(out)
    }

    /// d² = 0 on the truncation.
    pub fn check_square_zero(&self) -> Result<Verdict> {
        let mut v = Verdict::new();
        for i in 0..self.basis.len() {
            v.tick();
            let mut r = LinComb::<usize>::zero();
            for (j, x) in &self.d(i)? {
                r.add_scaled(&self.d(*j)?, x);
            }
            if !r.is_zero() {
                v.fail(format!("d² at {}", self.show(&self.basis[i])), format!("{} terms", r.len()));
            }
        }
        Ok(v)
    }
}

/// A degree 0 map φ: 𝒟 → 𝒜 relative to α, given on basis elements of 𝒟.
pub struct AlgTwisting<'a, P: DgOperad, D: CCoalgebra, A: PAlgebra<Key = P::Key>> {
    pub alpha: &'a OpTwisting<'a, P>,
    pub source: &'a D,
    pub target: &'a A,
    pub phi: Vec<Vector>,
}

impl<P: DgOperad, D: CCoalgebra, A: PAlgebra<Key = P::Key>> AlgTwisting<'_, P, D, A> {
    /// ∂(φ)(x) + γ_𝒜(α ∘ φ)Δ(x).
    pub fn residual(&self, i: usize) -> Result<Vector> {
        let phi = |z: &Vector| -> Vector { z.map_linear(|j| self.phi[*j].clone()) };
        let mut r = Vector::zero();
        for (j, x) in &self.phi[i] {
            r.add_scaled(&self.target.d(*j), x);
        }
        r.sub(&phi(&self.source.d(i)?));
        for ((c, ys), y) in &self.source.decompose(i)? {
            let a = self.alpha.apply(&LinComb::single(c.clone()));
            if a.is_zero() {
                continue;
            }
            let inputs: Vec<Vector> = ys.iter().map(|j| self.phi[*j].clone()).collect();
            for (k, z) in &a {
                r.add_scaled(&self.target.act_vectors(k, &inputs)?, &(y * z));
            }
        }
        Ok(r)
    }
}

/// Evaluates the α-twisting equation on every basis element of 𝒟.
pub fn check_alg_twisting<P: DgOperad, D: CCoalgebra, A: PAlgebra<Key = P::Key>>(t: &AlgTwisting<P, D, A>) -> Result<Verdict> {
    let mut v = Verdict::new();
    for i in 0..t.source.dim() {
        v.tick();
        let r = t.residual(i)?;
        if !r.is_zero() {
            let shown = r.iter().map(|(j, x)| format!("{}*{}", format_scalar(x), t.target.label(*j))).collect::<Vec<_>>().join(" + ");
            v.fail(t.source.label(i), shown);
        }
    }
    Ok(v)
}

/// The projection 𝒞 ∘_α 𝒜 → 𝒜 onto (|; a).
pub fn bar_projection<P: DgOperad, A: PAlgebra<Key = P::Key>>(b: &TwistedBar<P, A>) -> Vec<Vector> {
    b.basis().iter().map(|(c, a)| if c.is_trivial() { Vector::single(a[0]) } else { Vector::zero() }).collect()
}
