use crate::algcog::{Tensor2, Vector};
use crate::error::{Error, Result};
use crate::linhom::{frac, int, sign, LinComb, Scalar};
use crate::verdict::Verdict;

use super::bar::{LieBar, UnitalCommAlgebra};
use super::cobar::ComCobar;
use super::coalgebra::CurvedLieCoalgebra;

/// A degree −1 map α: C → A given on basis elements of C.
pub struct LieTwisting<'a> {
    pub source: &'a CurvedLieCoalgebra,
    pub target: &'a UnitalCommAlgebra,
    pub alpha: Vec<Vector>,
}

impl LieTwisting<'_> {
    /// ∂α(x) + γ(α ⊗ α)δ(x) − θ(x)1, with ∂α = d_A α + α d_C.
    pub fn residual(&self, i: usize) -> Vector {
        let a = self.target.algebra();
        let c = self.source;
        let alpha = |z: &Vector| -> Vector { z.map_linear(|j| self.alpha[*j].clone()) };
        let mut r = a.d(&self.alpha[i]);
        r.add(&alpha(c.d_basis(i)));
        for ((p, q), x) in c.delta_basis(i) {
            r.add_scaled(&a.mul(&self.alpha[*p], &self.alpha[*q]), &(x * sign(c.degree(*p))));
        }
        r.add_scaled(a.unit(), &-c.theta_basis(i).clone());
        r
    }
}

/// Evaluates the twisting equation on every basis element of the source.
pub fn check_lie_twisting(t: &LieTwisting) -> Result<Verdict> {
    let a = t.target.algebra();
    if t.alpha.len() != t.source.dim() {
        return Err(Error::DimensionMismatch("one image per basis element expected".into()));
    }
    for (i, img) in t.alpha.iter().enumerate() {
        if img.keys().any(|j| *j >= a.dim() || a.degree(*j) != t.source.degree(i) - 1) {
            return Err(Error::Invalid(format!("α({}) has the wrong degree", t.source.labels()[i])));
        }
    }
    let mut v = Verdict::new();
    for i in 0..t.source.dim() {
        v.tick();
        let r = t.residual(i);
        if !r.is_zero() {
            v.fail(t.source.labels()[i].clone(), a.show(&r));
        }
    }
    Ok(v)
}

/// The canonical twisting morphism B_L A ↠ sA → A.
pub fn canonical_lie_twisting(bar: &LieBar, a: &UnitalCommAlgebra) -> Vec<Vector> {
    let n = a.algebra().dim() as u32;
    bar.words.iter().map(|w| if w.len() == 1 && w[0] < n { Vector::single(w[0] as usize) } else { Vector::zero() }).collect()
}

/// The algebra map Ω_C C → A extending s⁻¹x ↦ α(x), on the basis of the truncation.
pub fn twisting_to_algebra_map(alpha: &[Vector], cobar: &ComCobar, a: &UnitalCommAlgebra) -> Vec<Vector> {
    let a = a.algebra();
    cobar.basis().iter().map(|m| m.iter().fold(a.unit().clone(), |acc, g| a.mul(&acc, &alpha[*g]))).collect()
}

/// Restriction of an algebra map Ω_C C → A to the generators.
pub fn algebra_map_to_twisting(cobar: &ComCobar, images: &[Vector]) -> Result<Vec<Vector>> {
    let basis = cobar.basis();
    (0..cobar.coalgebra().dim())
        .map(|g| {
            basis
                .iter()
                .position(|m| m == &[g])
                .map(|p| images[p].clone())
                .ok_or_else(|| Error::WindowTooSmall(format!("generator {} is outside the truncation", cobar.coalgebra().labels()[g])))
        })
        .collect()
}

/// Checks that images of the monomial basis define a unital dg algebra map Ω_C C → A.
pub fn check_algebra_map(cobar: &ComCobar, a: &UnitalCommAlgebra, images: &[Vector]) -> Verdict {
    let a = a.algebra();
    let basis = cobar.basis();
    let f = |z: &LinComb<Vec<usize>>| -> Vector {
        let mut out = Vector::zero();
        for (m, c) in z {
            let p = basis.iter().position(|x| x == m).expect("d stays in the truncation");
            out.add_scaled(&images[p], c);
        }
        out
    };
    let mut v = Verdict::new();
    for (m, img) in basis.iter().zip(images) {
        v.tick();
        let prod = m.iter().fold(a.unit().clone(), |acc, g| a.mul(&acc, &f(&LinComb::single(vec![*g]))));
        if &prod != img {
            v.fail(format!("multiplicativity at {}", cobar.show(m)), a.show(&prod));
        }
        v.tick();
        let mut r = f(&cobar.d_monomial(m));
        r.sub(&a.d(img));
        if !r.is_zero() {
            v.fail(format!("chain map at {}", cobar.show(m)), a.show(&r));
        }
    }
    v
}

/// The Lie coalgebra map C → B_L A determined by α:
/// F(x) = Σ_k (2^{k−1}/k) [p^{⊗k} (δ ⊗ Id^{⊗k−2}) ⋯ (δ ⊗ Id)δ(x)], with p(x) = sα(x) + θ(x)v.
/// The coefficient is the Dynkin normalization for the cobracket ½(1 − τ)Δ̄.
pub fn twisting_to_coalgebra_map(t: &LieTwisting, bar: &LieBar) -> Result<Vec<Vector>> {
    let c = t.source;
    let n = t.target.algebra().dim() as u32;
    let p = |i: usize| -> LinComb<u32> {
        let mut out: LinComb<u32> = t.alpha[i].iter().map(|(j, x)| (*j as u32, x.clone())).collect();
        out.add_term(n, c.theta_basis(i).clone());
        out
    };
    let max = bar.cofree.max_weight();
    let mut images = Vec::new();
    for i in 0..c.dim() {
        let mut out = LinComb::zero();
        let mut cur: LinComb<Vec<usize>> = LinComb::single(vec![i]);
        let mut k = 1usize;
        while !cur.is_zero() {
            let mut words: LinComb<Vec<u32>> = LinComb::zero();
            for (slots, x) in &cur {
                let mut acc: LinComb<Vec<u32>> = LinComb::single(Vec::new());
                for s in slots {
                    let ps = p(*s);
                    acc = acc.map_linear(|w| ps.iter().map(|(l, y)| ([w.as_slice(), &[*l]].concat(), y.clone())).collect());
                }
                words.add_scaled(&acc, x);
            }
            if !words.is_zero() {
                if k > max {
                    return Err(Error::WindowTooSmall(format!("image of {} reaches weight {k}", c.labels()[i])));
                }
                let coeff = frac(1 << (k - 1), k as i64);
                out.add_scaled(&bar.vector(&words)?, &coeff);
            }
            cur = cur.map_linear(|w| {
                c.delta_basis(w[0]).iter().map(|((a, b), x)| ([&[*a, *b], &w[1..]].concat(), x.clone())).collect()
            });
            k += 1;
        }
        images.push(out);
    }
    Ok(images)
}

/// Composite of a map C → B_L A with B_L A ↠ sA → A.
pub fn coalgebra_map_to_twisting(bar: &LieBar, a: &UnitalCommAlgebra, f: &[Vector]) -> Vec<Vector> {
    let n = a.algebra().dim() as u32;
    f.iter()
        .map(|img| img.iter().filter_map(|(j, x)| (bar.words[*j].len() == 1 && bar.words[*j][0] < n).then(|| (bar.words[*j][0] as usize, x.clone()))).collect())
        .collect()
}

/// Checks δF = (F ⊗ F)δ, dF = Fd and θF = θ on basis elements of the source.
pub fn check_lie_coalgebra_map(src: &CurvedLieCoalgebra, tgt: &CurvedLieCoalgebra, f: &[Vector]) -> Verdict {
    let ff = |z: &Vector| -> Vector { z.map_linear(|j| f[*j].clone()) };
    let mut v = Verdict::new();
    for i in 0..src.dim() {
        let name = &src.labels()[i];
        v.tick();
        let mut r = tgt.delta(&f[i]);
        for ((a, b), x) in src.delta_basis(i) {
            let mut t = Tensor2::zero();
            for (p, y) in &f[*a] {
                for (q, z) in &f[*b] {
                    t.add_term((*p, *q), x * y * z);
                }
            }
            r.sub(&t);
        }
        if !r.is_zero() {
            v.fail(format!("cobracket at {name}"), format!("{} terms", r.len()));
        }
        v.tick();
        let mut r = tgt.d(&f[i]);
        r.sub(&ff(src.d_basis(i)));
        if !r.is_zero() {
            v.fail(format!("differential at {name}"), tgt.show(&r));
        }
        v.tick();
        let r: Scalar = tgt.theta(&f[i]) - src.theta_basis(i);
        if r != int(0) {
            v.fail(format!("curvature at {name}"), crate::linhom::format_scalar(&r));
        }
    }
    v
}
