use std::collections::BTreeMap;

use num::{One, Zero};

use super::matrix::{vec_add_scaled, SparseMatrix, SparseVec};
use super::scalar::Scalar;

/// Subspace of `Q^dim` in reduced echelon form. Each basis vector has a pivot
/// at its largest index, coefficient 1 there, and zeros at every other pivot.
/// Because of this normalization two subspaces are equal iff their bases are.
///
/// Optionally records, for each basis vector, its expression as a combination
/// of the vectors that were inserted (by insertion index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    dim: usize,
    basis: BTreeMap<usize, SparseVec>,
    track: bool,
    tags: BTreeMap<usize, SparseVec>,
    inserted: usize,
    relations: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: BTreeMap::new(), track: false, tags: BTreeMap::new(), inserted: 0, relations: Vec::new() }
    }

    /// Like [`Subspace::zero`] but remembers how basis vectors arise from inserted ones.
    pub fn tracking(dim: usize) -> Self {
        Self { track: true, ..Self::zero(dim) }
    }

    pub fn full(dim: usize) -> Self {
        let mut s = Self::zero(dim);
        for i in 0..dim {
            s.basis.insert(i, [(i, Scalar::one())].into_iter().collect());
        }
        s
    }

    pub fn spanned_by(dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut s = Self::zero(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn column_span(m: &SparseMatrix) -> Self {
        Self::spanned_by(m.rows(), m.columns().iter().cloned())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis.keys().copied()
    }

    pub fn basis(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.basis.iter().map(|(p, v)| (*p, v))
    }

    pub fn basis_vectors(&self) -> Vec<SparseVec> {
        self.basis.values().cloned().collect()
    }

    /// Expression of the basis vector with pivot `p` in terms of inserted vectors.
    pub fn tag(&self, p: usize) -> Option<&SparseVec> {
        self.tags.get(&p)
    }

    /// Linear relations among inserted vectors discovered so far (tracking mode).
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }

    /// Reduces `v` modulo the subspace; returns the remainder (zero at all pivots)
    /// and, in tracking mode, the combination of inserted vectors subtracted.
    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut r = v.clone();
        let mut t = SparseVec::new();
        let hits: Vec<usize> = r.keys().rev().copied().filter(|k| self.basis.contains_key(k)).collect();
        for p in hits {
            if let Some(c) = r.get(&p).cloned() {
                vec_add_scaled(&mut r, &self.basis[&p], &-c.clone());
                if self.track {
                    vec_add_scaled(&mut t, &self.tags[&p], &c);
                }
            }
        }
        (r, t)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        let mut ps: Vec<usize> = r.keys().copied().filter(|k| self.basis.contains_key(k)).collect();
        ps.reverse();
        for p in ps {
            if let Some(c) = r.get(&p).cloned() {
                vec_add_scaled(&mut r, &self.basis[&p], &-c);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of a member with respect to the basis (pivot -> coefficient).
    /// Only meaningful when `contains(v)`.
    pub fn coordinates(&self, v: &SparseVec) -> BTreeMap<usize, Scalar> {
        v.iter().filter(|(k, _)| self.basis.contains_key(k)).map(|(k, c)| (*k, c.clone())).collect()
    }

    /// Inserts a vector; returns true if the dimension grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        assert!(v.keys().all(|&k| k < self.dim), "vector outside ambient space");
        let idx = self.inserted;
        self.inserted += 1;
        let (mut r, sub) = self.reduce_tracked(&v);
        if r.is_empty() {
            if self.track {
                let mut rel = SparseVec::new();
                rel.insert(idx, Scalar::one());
                vec_add_scaled(&mut rel, &sub, &-Scalar::one());
                self.relations.push(rel);
            }
            return false;
        }
        let (&p, lead) = r.iter().next_back().unwrap();
        let inv = lead.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        let mut tag = SparseVec::new();
        if self.track {
            tag.insert(idx, Scalar::one());
            vec_add_scaled(&mut tag, &sub, &-Scalar::one());
            for x in tag.values_mut() {
                *x *= &inv;
            }
        }
        // clear the new pivot from older basis vectors
        let keys: Vec<usize> = self.basis.range(p + 1..).map(|(k, _)| *k).collect();
        for k in keys {
            let c = self.basis[&k].get(&p).cloned();
            if let Some(c) = c {
                let b = self.basis.get_mut(&k).unwrap();
                vec_add_scaled(b, &r, &-c.clone());
                if self.track {
                    let t = self.tags.get_mut(&k).unwrap();
                    vec_add_scaled(t, &tag, &-c);
                }
            }
        }
        self.basis.insert(p, r);
        if self.track {
            self.tags.insert(p, tag);
        }
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = Subspace::zero(self.dim);
        for v in self.basis.values().chain(other.basis.values()) {
            s.insert(v.clone());
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // kernel of [A | -B]
        let a = self.basis_vectors();
        let b = other.basis_vectors();
        let mut cols = a.clone();
        for v in &b {
            cols.push(v.iter().map(|(k, x)| (*k, -x.clone())).collect());
        }
        let m = SparseMatrix::from_columns(self.dim, cols);
        let mut s = Subspace::zero(self.dim);
        for k in m.kernel_basis() {
            let mut v = SparseVec::new();
            for (i, c) in k.iter().filter(|(i, _)| **i < a.len()) {
                vec_add_scaled(&mut v, &a[*i], c);
            }
            s.insert(v);
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.values().all(|v| other.contains(v))
    }

    /// Inclusion matrix with the basis vectors as columns, in pivot order.
    pub fn inclusion(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.dim, self.basis_vectors())
    }

    /// Image of a subspace under a matrix.
    pub fn image(&self, m: &SparseMatrix) -> Subspace {
        Subspace::spanned_by(m.rows(), self.basis.values().map(|v| m.apply(v)))
    }

    pub fn is_zero_space(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Complement of `sub` inside `sup`, normalized so that quotient coordinates
/// can be read off pivots: the basis vectors vanish at the pivots of `sub`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub sub: Subspace,
    pub complement: Subspace,
}

impl Quotient {
    pub fn new(sup: &Subspace, sub: &Subspace) -> Self {
        let mut complement = Subspace::zero(sup.ambient_dim());
        for v in sup.basis.values() {
            let r = sub.reduce(v);
            if !r.is_empty() {
                complement.insert(r);
            }
        }
        Quotient { sub: sub.clone(), complement }
    }

    pub fn dim(&self) -> usize {
        self.complement.dim()
    }

    /// Coordinates of `v` (assumed in `sup`) modulo `sub`, indexed by position
    /// of the complement basis vector.
    pub fn coords(&self, v: &SparseVec) -> SparseVec {
        let r = self.sub.reduce(v);
        let mut out = SparseVec::new();
        for (i, p) in self.complement.pivots().enumerate() {
            if let Some(c) = r.get(&p) {
                if !c.is_zero() {
                    out.insert(i, c.clone());
                }
            }
        }
        out
    }

    /// Whether `v` (reduced mod sub) lies in the span of the complement.
    pub fn represents(&self, v: &SparseVec) -> bool {
        let r = self.sub.reduce(v);
        self.complement.contains(&r)
    }

    pub fn lift(&self, i: usize) -> SparseVec {
        self.complement.basis_vectors()[i].clone()
    }

    pub fn lifts(&self) -> Vec<SparseVec> {
        self.complement.basis_vectors()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::scalar::int;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, x)| (*i, int(*x))).collect()
    }

    #[test]
    fn echelon_is_canonical() {
        let a = Subspace::spanned_by(3, [v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)])]);
        let b = Subspace::spanned_by(3, [v(&[(0, 1), (2, -1)]), v(&[(0, 2), (1, 2)])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&v(&[(0, 1), (2, -1)])));
        assert!(!a.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn tracking_records_relations() {
        let mut s = Subspace::tracking(2);
        s.insert(v(&[(0, 1)]));
        s.insert(v(&[(1, 2)]));
        s.insert(v(&[(0, 1), (1, 4)]));
        assert_eq!(s.relations().len(), 1);
        assert_eq!(s.relations()[0], v(&[(0, -1), (1, -2), (2, 1)]));
        assert_eq!(s.tag(1), Some(&[(1, crate::linhom::scalar::frac(1, 2))].into_iter().collect()));
    }

    #[test]
    fn intersection_and_quotient() {
        let a = Subspace::spanned_by(3, [v(&[(0, 1)]), v(&[(1, 1)])]);
        let b = Subspace::spanned_by(3, [v(&[(1, 1)]), v(&[(2, 1)])]);
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::spanned_by(3, [v(&[(1, 1)])]));
        let q = Quotient::new(&a, &i);
        assert_eq!(q.dim(), 1);
        assert_eq!(q.coords(&v(&[(0, 3), (1, 5)])), v(&[(0, 3)]));
    }
}
