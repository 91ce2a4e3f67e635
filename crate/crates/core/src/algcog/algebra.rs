use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linhom::{sign, ChainComplex, GradedMap, GradedSpace, LinComb, SparseMatrix, SparseVec, Subspace};
use crate::nsoperad::DgOperad;
use crate::verdict::Verdict;

/// Element of a finite-dimensional algebra in its basis.
pub type Vector = LinComb<usize>;

/// Finite-dimensional unital associative dg algebra given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitalAssocAlgebra {
    labels: Vec<String>,
    degrees: Vec<i64>,
    product: BTreeMap<(usize, usize), Vector>,
    differential: BTreeMap<usize, Vector>,
    unit: Vector,
}

impl UnitalAssocAlgebra {
    /// Validates associativity, unit laws, d(1) = 0, d² = 0, the Leibniz rule and degrees.
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<i64>,
        product: BTreeMap<(usize, usize), Vector>,
        differential: BTreeMap<usize, Vector>,
        unit: Vector,
    ) -> Result<Self> {
        let a = Self::unchecked(labels, degrees, product, differential, unit)?;
        let v = a.check();
        if let Some(f) = v.witness() {
            return Err(Error::Invalid(format!("not a unital dg algebra: {} ({})", f.at, f.residual)));
        }
        Ok(a)
    }

    /// Builds the structure with only shape checks (used for non-associative examples).
    pub fn unchecked(
        labels: Vec<String>,
        degrees: Vec<i64>,
        product: BTreeMap<(usize, usize), Vector>,
        differential: BTreeMap<usize, Vector>,
        unit: Vector,
    ) -> Result<Self> {
        let n = labels.len();
        if degrees.len() != n {
            return Err(Error::DimensionMismatch("labels and degrees differ in length".into()));
        }
        let deg_of = |v: &Vector| -> Result<Option<i64>> {
            let mut d = None;
            for i in v.keys() {
                if *i >= n {
                    return Err(Error::IndexOutOfRange { index: *i, max: n });
                }
                if d.is_some_and(|x| x != degrees[*i]) {
                    return Err(Error::Invalid("inhomogeneous structure constant".into()));
                }
                d = Some(degrees[*i]);
            }
            Ok(d)
        };
        for ((i, j), v) in &product {
            if let Some(d) = deg_of(v)? {
                if d != degrees[*i] + degrees[*j] {
                    return Err(Error::Invalid(format!("product {}·{} has the wrong degree", labels[*i], labels[*j])));
                }
            }
        }
        for (i, v) in &differential {
            if let Some(d) = deg_of(v)? {
                if d != degrees[*i] - 1 {
                    return Err(Error::Invalid(format!("d({}) has the wrong degree", labels[*i])));
                }
            }
        }
        if deg_of(&unit)?.is_some_and(|d| d != 0) {
            return Err(Error::Invalid("the unit must have degree 0".into()));
        }
        if unit.is_zero() {
            return Err(Error::Invalid("the unit must be nonzero".into()));
        }
        let product = product.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let differential = differential.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(UnitalAssocAlgebra { labels, degrees, product, differential, unit })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn product_table(&self) -> &BTreeMap<(usize, usize), Vector> {
        &self.product
    }

    pub fn differential_table(&self) -> &BTreeMap<usize, Vector> {
        &self.differential
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vector {
        self.product.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(p) = self.product.get(&(*i, *j)) {
                    out.add_scaled(p, &(a * b));
                }
            }
        }
        out
    }

    pub fn d_basis(&self, i: usize) -> Vector {
        self.differential.get(&i).cloned().unwrap_or_default()
    }

    pub fn d(&self, x: &Vector) -> Vector {
        x.map_linear(|i| self.d_basis(*i))
    }

    pub fn show(&self, x: &Vector) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.iter().map(|(i, c)| format!("{}*{}", crate::linhom::format_scalar(c), self.labels[*i])).collect::<Vec<_>>().join(" + ")
    }

    /// Associativity, unit, d² = 0, d(1) = 0 and Leibniz on basis elements.
    pub fn check(&self) -> Verdict {
        let mut v = Verdict::new();
        let n = self.dim();
        let e = |i: usize| Vector::single(i);
        for i in 0..n {
            v.tick();
            if self.mul(&self.unit, &e(i)) != e(i) || self.mul(&e(i), &self.unit) != e(i) {
                v.fail(format!("unit law at {}", self.labels[i]), "1·x ≠ x or x·1 ≠ x");
            }
            v.tick();
            if !self.d(&self.d_basis(i)).is_zero() {
                v.fail(format!("d² at {}", self.labels[i]), "nonzero");
            }
            for j in 0..n {
                let xy = self.mul_basis(i, j);
                v.tick();
                let mut l = self.d(&xy);
                l.sub(&self.mul(&self.d_basis(i), &e(j)));
                l.sub(&self.mul(&e(i), &self.d_basis(j)).scaled(&sign(self.degrees[i])));
                if !l.is_zero() {
                    v.fail(format!("Leibniz at {}·{}", self.labels[i], self.labels[j]), self.show(&l));
                }
                for k in 0..n {
                    v.tick();
                    let mut a = self.mul(&xy, &e(k));
                    a.sub(&self.mul(&e(i), &self.mul_basis(j, k)));
                    if !a.is_zero() {
                        v.fail(format!("associativity at ({},{},{})", self.labels[i], self.labels[j], self.labels[k]), self.show(&a));
                    }
                }
            }
        }
        v.tick();
        if !self.d(&self.unit).is_zero() {
            v.fail("d(1)", self.show(&self.d(&self.unit)));
        }
        v
    }

    /// Associator (xy)z − x(yz).
    pub fn associator(&self, i: usize, j: usize, k: usize) -> Vector {
        let mut a = self.mul(&self.mul_basis(i, j), &Vector::single(k));
        a.sub(&self.mul(&Vector::single(i), &self.mul_basis(j, k)));
        a
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i).scaled(&sign(self.degrees[i] * self.degrees[j])))
        })
    }

    /// The underlying chain complex.
    pub fn carrier(&self) -> Result<ChainComplex> {
        complex_of(&self.labels, &self.degrees, &|i| self.d_basis(i))
    }
}

/// Chain complex on a labelled graded basis with differential given on basis vectors.
pub fn complex_of(labels: &[String], degrees: &[i64], d: &dyn Fn(usize) -> Vector) -> Result<ChainComplex> {
    let (space, map) = complex_of_pre(labels, degrees, d)?;
    ChainComplex::new(space, map.blocks().clone())
}

/// Graded space and degree −1 endomorphism, without requiring d² = 0.
pub fn complex_of_pre(labels: &[String], degrees: &[i64], d: &dyn Fn(usize) -> Vector) -> Result<(GradedSpace, GradedMap)> {
    let ix = Indexed::new(labels, degrees)?;
    let map = ix.map_to(&ix, -1, d)?;
    Ok((ix.space.clone(), map))
}

/// A basis with degrees, split into per-degree components.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub space: GradedSpace,
    degrees: Vec<i64>,
    comps: BTreeMap<i64, Vec<usize>>,
    pos: Vec<usize>,
}

impl Indexed {
    pub fn new(labels: &[String], degrees: &[i64]) -> Result<Self> {
        let mut comps: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut pos = vec![0; degrees.len()];
        for (i, deg) in degrees.iter().enumerate() {
            let c = comps.entry(*deg).or_default();
            pos[i] = c.len();
            c.push(i);
        }
        let space = GradedSpace::from_components(comps.iter().map(|(d, v)| (*d, v.iter().map(|i| labels[*i].clone()).collect())).collect())?;
        Ok(Indexed { space, degrees: degrees.to_vec(), comps, pos })
    }

    pub fn component(&self, d: i64) -> &[usize] {
        self.comps.get(&d).map_or(&[], |v| v.as_slice())
    }

    /// Local coordinates of a homogeneous vector.
    pub fn local(&self, v: &Vector) -> SparseVec {
        v.iter().map(|(i, c)| (self.pos[*i], c.clone())).collect()
    }

    /// Global vector from local coordinates in degree `d`.
    pub fn global(&self, d: i64, v: &SparseVec) -> Vector {
        v.iter().map(|(p, c)| (self.component(d)[*p], c.clone())).collect()
    }

    pub fn subspace(&self, d: i64, vectors: impl IntoIterator<Item = Vector>) -> Subspace {
        Subspace::spanned_by(self.component(d).len(), vectors.into_iter().map(|v| self.local(&v)))
    }

    /// Graded map of the given shift, from images of basis vectors.
    pub fn map_to(&self, tgt: &Indexed, shift: i64, f: &dyn Fn(usize) -> Vector) -> Result<GradedMap> {
        let mut blocks = BTreeMap::new();
        for (deg, idx) in &self.comps {
            let rows = tgt.component(deg + shift).len();
            let mut cols = Vec::with_capacity(idx.len());
            for i in idx {
                let img = f(*i);
                if img.keys().any(|j| tgt.degrees[*j] != deg + shift) {
                    return Err(Error::Invalid(format!("map is not homogeneous of degree {shift}")));
                }
                cols.push(tgt.local(&img));
            }
            if rows > 0 {
                blocks.insert(*deg, SparseMatrix::from_columns(rows, cols));
            }
        }
        GradedMap::new(self.space.clone(), tgt.space.clone(), shift, blocks)
    }
}

/// The ground field 𝕂 = span{1}.
pub fn ground_field() -> UnitalAssocAlgebra {
    let product = BTreeMap::from([((0, 0), Vector::single(0))]);
    UnitalAssocAlgebra::new(vec!["1".into()], vec![0], product, BTreeMap::new(), Vector::single(0)).expect("𝕂 is an algebra")
}

/// 𝕂[x]/(x^n) in degree 0 with basis 1, x, …, x^{n−1}.
pub fn truncated_polynomial(n: usize) -> UnitalAssocAlgebra {
    assert!(n >= 1);
    let labels = (0..n).map(|i| match i {
        0 => "1".to_string(),
        1 => "x".to_string(),
        _ => format!("x{i}"),
    });
    let mut product = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                product.insert((i, j), Vector::single(i + j));
            }
        }
    }
    UnitalAssocAlgebra::new(labels.collect(), vec![0; n], product, BTreeMap::new(), Vector::single(0)).expect("truncated polynomial algebra")
}

/// 𝕂[x]/(x²).
pub fn dual_numbers() -> UnitalAssocAlgebra {
    truncated_polynomial(2)
}

/// A finite-dimensional algebra viewed as an operad concentrated in arity one.
#[derive(Clone, Debug)]
pub struct ArityOneOperad<'a> {
    pub algebra: &'a UnitalAssocAlgebra,
}

impl DgOperad for ArityOneOperad<'_> {
    type Key = usize;

    fn max_arity(&self) -> usize {
        1
    }

    fn basis(&self, arity: usize) -> Result<Vec<usize>> {
        Ok(if arity == 1 { (0..self.algebra.dim()).collect() } else { Vec::new() })
    }

    fn key_degree(&self, k: &usize) -> i64 {
        self.algebra.degree(*k)
    }

    fn key_arity(&self, _: &usize) -> usize {
        1
    }

    fn key_name(&self, k: &usize) -> String {
        self.algebra.label(*k).to_string()
    }

    fn compose_basis(&self, i: usize, a: &usize, b: &usize) -> Result<Vector> {
        if i != 1 {
            return Err(Error::IndexOutOfRange { index: i, max: 1 });
        }
        Ok(self.algebra.mul_basis(*a, *b))
    }

    fn differential_basis(&self, a: &usize) -> Result<Vector> {
        Ok(self.algebra.d_basis(*a))
    }

    fn unit(&self) -> Vector {
        self.algebra.unit().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_algebras() {
        assert!(ground_field().check().passed());
        assert!(dual_numbers().check().passed());
        assert!(truncated_polynomial(4).is_commutative());
        assert_eq!(dual_numbers().mul_basis(1, 1), Vector::zero());
    }

    #[test]
    fn zero_unit_is_rejected() {
        let r = UnitalAssocAlgebra::new(vec!["a".into()], vec![0], BTreeMap::new(), BTreeMap::new(), Vector::zero());
        assert!(r.is_err());
    }

    #[test]
    fn leibniz_failure_is_caught() {
        // d b = a with a·a = a but no compatible product on b
        let product = BTreeMap::from([((0, 0), Vector::single(0)), ((0, 1), Vector::single(1)), ((1, 0), Vector::single(1)), ((0, 2), Vector::single(2)), ((2, 0), Vector::single(2)), ((1, 1), Vector::single(1))]);
        let d = BTreeMap::from([(2, Vector::single(1))]);
        let r = UnitalAssocAlgebra::new(vec!["1".into(), "a".into(), "b".into()], vec![0, 0, 1], product, d, Vector::single(0));
        assert!(r.is_err());
    }
}
