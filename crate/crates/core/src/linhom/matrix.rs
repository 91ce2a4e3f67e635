use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Zero};

use super::scalar::Scalar;

/// Sparse vector: index to nonzero value.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn vec_add_scaled(v: &mut SparseVec, w: &SparseVec, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (i, x) in w {
        let e = v.entry(*i).or_insert_with(Scalar::zero);
        *e += x * c;
        if e.is_zero() {
            v.remove(i);
        }
    }
}

/// Sparse rational matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds from columns; entries beyond `rows` panic.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for c in &columns {
            assert!(c.keys().all(|&r| r < rows), "row index out of range");
        }
        let columns = columns
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect::<Vec<_>>();
        Self { rows, cols: columns.len(), columns }
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c].get(&r).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if x.is_zero() {
            self.columns[c].remove(&r);
        } else {
            self.columns[c].insert(r, x);
        }
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// Entries in (row, col) order.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out: Vec<_> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x.clone())))
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v {
            vec_add_scaled(&mut out, &self.columns[*j], x);
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { rows: self.rows, cols: other.cols, columns }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zero(self.cols, self.rows);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                t.columns[*r].insert(c, x.clone());
            }
        }
        t
    }

    fn row_lists(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                rows[*r].insert(c, x.clone());
            }
        }
        rows
    }

    /// Rank by fraction-free elimination on integer-scaled rows.
    pub fn rank(&self) -> usize {
        // clear denominators row by row
        let mut rows: Vec<BTreeMap<usize, BigInt>> = self
            .row_lists()
            .into_iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let l = r.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                r.into_iter().map(|(c, x)| (c, (x * Scalar::from_integer(l.clone())).to_integer())).collect()
            })
            .collect();
        let mut rank = 0;
        while !rows.is_empty() {
            // pivot: row with the smallest leading column, then fewest entries
            let (pi, _) = rows
                .iter()
                .enumerate()
                .min_by_key(|(_, r)| (*r.keys().next().unwrap(), r.len()))
                .unwrap();
            let pivot = rows.swap_remove(pi);
            let (&pc, pv) = pivot.iter().next().unwrap();
            rank += 1;
            let mut next = Vec::with_capacity(rows.len());
            for mut row in rows.drain(..) {
                if let Some(b) = row.get(&pc).cloned() {
                    // row <- pv*row - b*pivot, then strip content
                    for x in row.values_mut() {
                        *x *= pv;
                    }
                    for (c, y) in &pivot {
                        let e = row.entry(*c).or_insert_with(BigInt::zero);
                        *e -= &b * y;
                    }
                    row.retain(|_, x| !x.is_zero());
                    if row.is_empty() {
                        continue;
                    }
                    let g = row.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                    if !g.is_one() {
                        for x in row.values_mut() {
                            *x /= &g;
                        }
                    }
                }
                next.push(row);
            }
            rows = next;
        }
        rank
    }

    /// Reduced row echelon form: returns (rows, pivot columns).
    pub fn rref(&self) -> (Vec<SparseVec>, Vec<usize>) {
        let mut rows: Vec<SparseVec> = self.row_lists().into_iter().filter(|r| !r.is_empty()).collect();
        let mut done: Vec<SparseVec> = Vec::new();
        let mut pivots = Vec::new();
        loop {
            rows.retain(|r| !r.is_empty());
            if rows.is_empty() {
                break;
            }
            let (pi, _) = rows
                .iter()
                .enumerate()
                .min_by_key(|(_, r)| (*r.keys().next().unwrap(), r.len()))
                .unwrap();
            let mut pivot = rows.swap_remove(pi);
            let (pc, pv) = pivot.iter().next().map(|(c, v)| (*c, v.clone())).unwrap();
            let inv = pv.recip();
            for x in pivot.values_mut() {
                *x *= &inv;
            }
            for row in rows.iter_mut().chain(done.iter_mut()) {
                if let Some(b) = row.get(&pc).cloned() {
                    vec_add_scaled(row, &pivot, &-b);
                }
            }
            done.push(pivot);
            pivots.push(pc);
        }
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let rows = order.iter().map(|&i| done[i].clone()).collect();
        let pivots = order.iter().map(|&i| pivots[i]).collect();
        (rows, pivots)
    }

    /// Basis of the null space by Gauss-Jordan elimination.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let (rows, pivots) = self.rref();
        let is_pivot: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot.contains_key(&free) {
                continue;
            }
            let mut v = SparseVec::new();
            v.insert(free, Scalar::one());
            for (i, row) in rows.iter().enumerate() {
                if let Some(x) = row.get(&free) {
                    v.insert(pivots[i], -x.clone());
                }
            }
            out.push(v);
        }
        out
    }

    /// Solves `self * x = b` if solvable.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut aug = self.clone();
        aug.cols += 1;
        aug.columns.push(b.clone());
        let (rows, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = SparseVec::new();
        for (row, &p) in rows.iter().zip(&pivots) {
            if let Some(v) = row.get(&self.cols) {
                x.insert(p, v.clone());
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::scalar::int;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SparseMatrix::identity(2).rank(), 2);
        assert_eq!(SparseMatrix::zero(3, 5).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(SparseMatrix::identity(3).kernel_basis().is_empty());
        assert_eq!(SparseMatrix::zero(2, 3).kernel_basis().len(), 3);
        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].get(&0), Some(&int(-1)));
        assert_eq!(k[0].get(&1), Some(&int(1)));
    }

    #[test]
    fn solve_finds_preimage() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b: SparseVec = [(0, int(5)), (1, int(11))].into_iter().collect();
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
        assert!(m(&[&[1, 1], &[1, 1]]).solve(&[(0, int(1))].into_iter().collect()).is_none());
    }
}
