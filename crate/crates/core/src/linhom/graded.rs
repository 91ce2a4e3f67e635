use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};

use super::matrix::{SparseMatrix, SparseVec};
use super::subspace::Subspace;

/// Graded vector space: degree to ordered basis labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSpace {
    components: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_components(components: BTreeMap<i64, Vec<String>>) -> Result<Self> {
        for (d, labels) in &components {
            let mut seen = std::collections::BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(Error::Invalid(format!("duplicate label {l:?} in degree {d}")));
                }
            }
        }
        let components = components.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(Self { components })
    }

    /// Anonymous basis with the given dimensions.
    pub fn with_dims(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let components = dims
            .into_iter()
            .filter(|(_, n)| *n > 0)
            .map(|(d, n)| (d, (0..n).map(|i| format!("e{d}_{i}")).collect()))
            .collect();
        Self { components }
    }

    pub fn dim(&self, d: i64) -> usize {
        self.components.get(&d).map_or(0, |v| v.len())
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(|v| v.len()).sum()
    }

    pub fn labels(&self, d: i64) -> &[String] {
        self.components.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    pub fn components(&self) -> &BTreeMap<i64, Vec<String>> {
        &self.components
    }

    pub fn degree_bounds(&self) -> Option<(i64, i64)> {
        Some((*self.components.keys().next()?, *self.components.keys().next_back()?))
    }
}

/// Homogeneous linear map between graded spaces; missing blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub shift: i64,
    blocks: BTreeMap<i64, SparseMatrix>,
}

impl GradedMap {
    pub fn new(source: GradedSpace, target: GradedSpace, shift: i64, blocks: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        for (d, m) in &blocks {
            if m.cols() != source.dim(*d) || m.rows() != target.dim(d + shift) {
                return Err(Error::DimensionMismatch(format!(
                    "block at degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(d + shift),
                    source.dim(*d)
                )));
            }
        }
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Ok(Self { source, target, shift, blocks })
    }

    pub fn zero(source: GradedSpace, target: GradedSpace, shift: i64) -> Self {
        Self { source, target, shift, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space.degrees().map(|d| (d, SparseMatrix::identity(space.dim(d)))).collect();
        Self { source: space.clone(), target: space.clone(), shift: 0, blocks }
    }

    /// Block at degree `d` (source degree), zero if absent.
    pub fn block(&self, d: i64) -> SparseMatrix {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.target.dim(d + self.shift), self.source.dim(d)))
    }

    pub fn blocks(&self) -> &BTreeMap<i64, SparseMatrix> {
        &self.blocks
    }

    pub fn apply(&self, d: i64, v: &SparseVec) -> SparseVec {
        match self.blocks.get(&d) {
            Some(m) => m.apply(v),
            None => SparseVec::new(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch("composable maps must share the middle space".into()));
        }
        let mut blocks = BTreeMap::new();
        for d in other.source.degrees() {
            let m = self.block(d + other.shift).mul(&other.block(d));
            blocks.insert(d, m);
        }
        GradedMap::new(other.source.clone(), self.target.clone(), self.shift + other.shift, blocks)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Chain complex with homological grading (differential of degree −1).
///
/// `window` bounds the degrees in which the complex is known; `None` means
/// every nonzero degree is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub space: GradedSpace,
    pub differential: GradedMap,
    pub window: Option<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub representatives: Vec<SparseVec>,
}

impl ChainComplex {
    pub fn new(space: GradedSpace, blocks: BTreeMap<i64, SparseMatrix>) -> Result<Self> {
        let differential = GradedMap::new(space.clone(), space.clone(), -1, blocks)?;
        let c = ChainComplex { space, differential, window: None };
        if let Some(d) = c.square_defect() {
            return Err(Error::Invalid(format!("d∘d ≠ 0 starting in degree {d}")));
        }
        Ok(c)
    }

    pub fn with_window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    /// First degree where d∘d fails, if any.
    pub fn square_defect(&self) -> Option<i64> {
        for d in self.space.degrees() {
            let dd = self.differential.block(d - 1).mul(&self.differential.block(d));
            if !dd.is_zero() {
                return Some(d);
            }
        }
        None
    }

    pub fn d(&self, deg: i64) -> SparseMatrix {
        self.differential.block(deg)
    }

    fn known(&self, d: i64) -> bool {
        match self.window {
            None => true,
            Some((lo, hi)) => lo <= d && d <= hi,
        }
    }

    pub fn cycles(&self, deg: i64) -> Subspace {
        let n = self.space.dim(deg);
        Subspace::spanned_by(n, self.d(deg).kernel_basis())
    }

    pub fn boundaries(&self, deg: i64) -> Subspace {
        Subspace::column_span(&self.d(deg + 1))
    }

    /// Homology in each requested degree.
    pub fn homology(&self, degrees: RangeInclusive<i64>) -> Result<BTreeMap<i64, HomologyGroup>> {
        let mut out = BTreeMap::new();
        for d in degrees {
            for adj in [d - 1, d, d + 1] {
                if !self.known(adj) {
                    return Err(Error::WindowTooSmall(format!("homology in degree {d} needs degree {adj}")));
                }
            }
            let z = self.cycles(d);
            let b = self.boundaries(d);
            let mut acc = b.clone();
            let mut reps = Vec::new();
            for v in z.basis_vectors() {
                if acc.insert(v.clone()) {
                    reps.push(v);
                }
            }
            out.insert(d, HomologyGroup { betti: z.dim() - b.dim(), representatives: reps });
        }
        Ok(out)
    }

    /// Betti numbers over the degrees where the space is nonzero (plus neighbours).
    pub fn betti_numbers(&self) -> Result<BTreeMap<i64, usize>> {
        let Some((lo, hi)) = self.space.degree_bounds() else { return Ok(BTreeMap::new()) };
        Ok(self.homology(lo..=hi)?.into_iter().map(|(d, h)| (d, h.betti)).collect())
    }

    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.betti_numbers()?.values().all(|&b| b == 0))
    }
}

/// Rank of the map induced on homology in degree `deg` by a chain map `f`.
pub fn induced_rank(f: &GradedMap, src: &ChainComplex, tgt: &ChainComplex, deg: i64) -> usize {
    let z = src.cycles(deg);
    let b = tgt.boundaries(deg + f.shift);
    let fz = z.image(&f.block(deg));
    fz.sum(&b).dim() - b.dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::scalar::int;

    #[test]
    fn acyclic_two_term() {
        let space = GradedSpace::with_dims([(0, 1), (1, 1)]);
        let c = ChainComplex::new(space, [(1, SparseMatrix::identity(1))].into_iter().collect()).unwrap();
        let h = c.homology(-1..=2).unwrap();
        assert!(h.values().all(|g| g.betti == 0));
    }

    #[test]
    fn zero_differential() {
        let c = ChainComplex::new(GradedSpace::with_dims([(0, 1)]), BTreeMap::new()).unwrap();
        assert_eq!(c.homology(0..=0).unwrap()[&0].betti, 1);
    }

    #[test]
    fn rejects_nonzero_square() {
        let space = GradedSpace::with_dims([(0, 1), (1, 1), (2, 1)]);
        let one = SparseMatrix::identity(1);
        assert!(ChainComplex::new(space, [(1, one.clone()), (2, one)].into_iter().collect()).is_err());
    }

    #[test]
    fn window_is_enforced() {
        let c = ChainComplex::new(GradedSpace::with_dims([(0, 1)]), BTreeMap::new()).unwrap().with_window(0, 0);
        assert!(matches!(c.homology(0..=0), Err(Error::WindowTooSmall(_))));
        let mut m = SparseMatrix::zero(1, 1);
        m.set(0, 0, int(2));
        assert_eq!(m.rank(), 1);
    }
}
