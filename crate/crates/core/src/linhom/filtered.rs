use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};

use super::graded::{induced_rank, ChainComplex, GradedMap, GradedSpace};
use super::matrix::{SparseMatrix, SparseVec};
use super::subspace::{Quotient, Subspace};

/// A (pre)complex with an increasing filtration F_0 ⊆ F_1 ⊆ … ⊆ F_m = whole space.
/// The differential need not square to zero.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub space: GradedSpace,
    pub differential: GradedMap,
    levels: Vec<BTreeMap<i64, Subspace>>,
}

impl FilteredComplex {
    pub fn new(space: GradedSpace, differential: GradedMap, levels: Vec<BTreeMap<i64, Subspace>>) -> Result<Self> {
        if differential.shift != -1 || differential.source != space || differential.target != space {
            return Err(Error::DimensionMismatch("differential must be an endomorphism of degree -1".into()));
        }
        let fc = FilteredComplex { space, differential, levels };
        for n in 0..fc.levels.len() {
            for d in fc.space.degrees() {
                let cur = fc.level(n, d);
                if cur.ambient_dim() != fc.space.dim(d) {
                    return Err(Error::DimensionMismatch(format!("F_{n} in degree {d} has wrong ambient dimension")));
                }
                if n > 0 && !fc.level(n - 1, d).is_subspace_of(&cur) {
                    return Err(Error::Invalid(format!("F_{} ⊄ F_{n} in degree {d}", n - 1)));
                }
            }
        }
        for d in fc.space.degrees() {
            if fc.levels.is_empty() || fc.level(fc.levels.len() - 1, d).dim() != fc.space.dim(d) {
                return Err(Error::Invalid(format!("filtration is not exhaustive in degree {d}")));
            }
        }
        Ok(fc)
    }

    /// Single-step filtration F_0 = everything.
    pub fn trivial(c: &ChainComplex) -> Self {
        let lvl = c.space.degrees().map(|d| (d, Subspace::full(c.space.dim(d)))).collect();
        FilteredComplex { space: c.space.clone(), differential: c.differential.clone(), levels: vec![lvl] }
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// F_n in degree `d`; levels past the top equal the whole space, negative ones are zero.
    pub fn level(&self, n: usize, d: i64) -> Subspace {
        let dim = self.space.dim(d);
        if n >= self.levels.len() {
            return Subspace::full(dim);
        }
        self.levels[n].get(&d).cloned().unwrap_or_else(|| Subspace::zero(dim))
    }

    fn below(&self, n: usize, d: i64) -> Subspace {
        if n == 0 {
            Subspace::zero(self.space.dim(d))
        } else {
            self.level(n - 1, d)
        }
    }

    /// Checks d(F_n) ⊆ F_n and d²(F_n) ⊆ F_{n−1}.
    pub fn check_admissible(&self) -> Result<()> {
        for n in 0..self.levels.len() {
            for d in self.space.degrees() {
                let dm = self.differential.block(d);
                let ddm = self.differential.block(d - 1).mul(&dm);
                let tgt = self.level(n, d - 1);
                let low = self.below(n, d - 2);
                for v in self.level(n, d).basis_vectors() {
                    if !tgt.contains(&dm.apply(&v)) {
                        return Err(Error::NotAdmissible(format!("d leaves F_{n} at degree {d}: {v:?}")));
                    }
                    if !low.contains(&ddm.apply(&v)) {
                        return Err(Error::NotAdmissible(format!("d² does not drop below F_{n} at degree {d}: {v:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn quotients(&self, n: usize) -> BTreeMap<i64, Quotient> {
        self.space.degrees().map(|d| (d, Quotient::new(&self.level(n, d), &self.below(n, d)))).collect()
    }

    /// Associated graded pieces G_n = F_n / F_{n−1} with the induced differential.
    pub fn graded_pieces(&self) -> Result<Vec<ChainComplex>> {
        self.check_admissible()?;
        (0..self.levels.len()).map(|n| self.piece(n)).collect()
    }

    fn piece(&self, n: usize) -> Result<ChainComplex> {
        let qs = self.quotients(n);
        let space = GradedSpace::with_dims(qs.iter().map(|(d, q)| (*d, q.dim())));
        let mut blocks = BTreeMap::new();
        for (d, q) in &qs {
            let Some(tq) = qs.get(&(d - 1)) else { continue };
            let dm = self.differential.block(*d);
            let cols: Vec<SparseVec> = q.lifts().iter().map(|v| tq.coords(&dm.apply(v))).collect();
            if !cols.is_empty() && tq.dim() > 0 {
                blocks.insert(*d, SparseMatrix::from_columns(tq.dim(), cols));
            }
        }
        ChainComplex::new(space, blocks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub piece: usize,
    pub degree: i64,
    pub betti_source: usize,
    pub betti_target: usize,
    pub induced_rank: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilteredQisoReport {
    pub verdict: bool,
    pub pieces: Vec<PieceReport>,
}

impl FilteredQisoReport {
    pub fn failing(&self) -> Vec<(usize, i64)> {
        self.pieces.iter().filter(|p| !p.iso).map(|p| (p.piece, p.degree)).collect()
    }
}

fn check_chain_map(f: &GradedMap, dsrc: &GradedMap, dtgt: &GradedMap) -> Result<()> {
    for d in f.source.degrees() {
        let lhs = dtgt.block(d).mul(&f.block(d));
        let rhs = f.block(d - 1).mul(&dsrc.block(d));
        if lhs != rhs {
            return Err(Error::NotAChainMap(format!("d f ≠ f d in degree {d}")));
        }
    }
    Ok(())
}

/// Per-degree homology comparison for a chain map between honest complexes.
pub fn quasi_iso_report(f: &GradedMap, src: &ChainComplex, tgt: &ChainComplex, degrees: RangeInclusive<i64>, piece: usize) -> Result<Vec<PieceReport>> {
    let hs = src.homology(degrees.clone())?;
    let ht = tgt.homology(degrees.clone())?;
    Ok(degrees
        .map(|d| {
            let (bs, bt) = (hs[&d].betti, ht[&d].betti);
            let r = induced_rank(f, src, tgt, d);
            PieceReport { piece, degree: d, betti_source: bs, betti_target: bt, induced_rank: r, iso: bs == bt && r == bs }
        })
        .collect())
}

/// Whether `f` is a quasi-isomorphism in the given degrees (direct homology comparison).
pub fn is_quasi_iso(f: &GradedMap, src: &ChainComplex, tgt: &ChainComplex, degrees: RangeInclusive<i64>) -> Result<bool> {
    check_chain_map(f, &src.differential, &tgt.differential)?;
    Ok(quasi_iso_report(f, src, tgt, degrees, 0)?.iter().all(|p| p.iso))
}

/// Checks that `f` induces quasi-isomorphisms on every graded piece in the degree range.
pub fn is_filtered_quasi_iso(f: &GradedMap, src: &FilteredComplex, tgt: &FilteredComplex, degrees: RangeInclusive<i64>) -> Result<FilteredQisoReport> {
    if f.shift != 0 || f.source != src.space || f.target != tgt.space {
        return Err(Error::DimensionMismatch("filtered map must be degree 0 between the given spaces".into()));
    }
    check_chain_map(f, &src.differential, &tgt.differential)?;
    let top = src.num_levels().max(tgt.num_levels());
    for n in 0..top {
        for d in src.space.degrees() {
            let t = tgt.level(n, d);
            for v in src.level(n, d).basis_vectors() {
                if !t.contains(&f.apply(d, &v)) {
                    return Err(Error::FiltrationNotRespected(format!("F_{n}, degree {d}: {v:?}")));
                }
            }
        }
    }
    src.check_admissible()?;
    tgt.check_admissible()?;
    let mut pieces = Vec::new();
    for n in 0..top {
        let (gs, gt) = (src.piece(n)?, tgt.piece(n)?);
        let (qs, qt) = (src.quotients(n), tgt.quotients(n));
        let mut blocks = BTreeMap::new();
        for (d, q) in &qs {
            let Some(tq) = qt.get(d) else { continue };
            let cols: Vec<SparseVec> = q.lifts().iter().map(|v| tq.coords(&f.apply(*d, v))).collect();
            if !cols.is_empty() && tq.dim() > 0 {
                blocks.insert(*d, SparseMatrix::from_columns(tq.dim(), cols));
            }
        }
        let gf = GradedMap::new(gs.space.clone(), gt.space.clone(), 0, blocks)?;
        pieces.extend(quasi_iso_report(&gf, &gs, &gt, degrees.clone(), n)?);
    }
    Ok(FilteredQisoReport { verdict: pieces.iter().all(|p| p.iso), pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::scalar::int;

    fn unit(i: usize) -> SparseVec {
        [(i, int(1))].into_iter().collect()
    }

    #[test]
    fn trivial_filtration_single_piece() {
        let space = GradedSpace::with_dims([(0, 1), (1, 1)]);
        let c = ChainComplex::new(space, [(1, SparseMatrix::identity(1))].into_iter().collect()).unwrap();
        let fc = FilteredComplex::trivial(&c);
        let p = fc.graded_pieces().unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].d(1), c.d(1));
    }

    #[test]
    fn two_step_filtration_kills_differential() {
        // d: degree-1 basis vector ↦ degree-0 basis vector; F_0 = degree-0 part
        let space = GradedSpace::with_dims([(0, 1), (1, 1)]);
        let c = ChainComplex::new(space.clone(), [(1, SparseMatrix::identity(1))].into_iter().collect()).unwrap();
        let f0: BTreeMap<i64, Subspace> = [(0, Subspace::full(1)), (1, Subspace::zero(1))].into_iter().collect();
        let f1: BTreeMap<i64, Subspace> = [(0, Subspace::full(1)), (1, Subspace::full(1))].into_iter().collect();
        let fc = FilteredComplex::new(space, c.differential.clone(), vec![f0, f1]).unwrap();
        let p = fc.graded_pieces().unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|g| g.differential.is_zero()));
        assert_eq!(p[0].space.total_dim() + p[1].space.total_dim(), 2);
    }

    #[test]
    fn non_admissible_is_reported() {
        let space = GradedSpace::with_dims([(0, 1), (1, 1)]);
        let c = ChainComplex::new(space.clone(), [(1, SparseMatrix::identity(1))].into_iter().collect()).unwrap();
        let f0: BTreeMap<i64, Subspace> = [(1, Subspace::spanned_by(1, [unit(0)]))].into_iter().collect();
        let f1: BTreeMap<i64, Subspace> = [(0, Subspace::full(1)), (1, Subspace::full(1))].into_iter().collect();
        let fc = FilteredComplex::new(space, c.differential, vec![f0, f1]).unwrap();
        assert!(matches!(fc.graded_pieces(), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn identity_and_acyclic_to_zero() {
        let space = GradedSpace::with_dims([(0, 1), (1, 1)]);
        let c = ChainComplex::new(space.clone(), [(1, SparseMatrix::identity(1))].into_iter().collect()).unwrap();
        let fc = FilteredComplex::trivial(&c);
        let id = GradedMap::identity(&space);
        assert!(is_filtered_quasi_iso(&id, &fc, &fc, -1..=2).unwrap().verdict);
        let zero_c = ChainComplex::new(GradedSpace::new(), BTreeMap::new()).unwrap();
        let fz = FilteredComplex::trivial(&zero_c);
        let f = GradedMap::zero(space, GradedSpace::new(), 0);
        assert!(is_filtered_quasi_iso(&f, &fc, &fz, -1..=2).unwrap().verdict);
    }
}
