use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linhom::{sign, FilteredComplex, GradedSpace, LinComb, Scalar, SparseMatrix, SparseVec, Subspace};
use crate::verdict::Verdict;

use super::algebra::{complex_of_pre, Vector};

/// Element of D ⊗ D.
pub type Tensor2 = LinComb<(usize, usize)>;

/// Finite-dimensional non-counital curved coassociative coalgebra.
///
/// The differential satisfies d² = (θ ⊗ Id − Id ⊗ θ)Δ, θ d = 0 and is a coderivation.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvedCoalgebra {
    labels: Vec<String>,
    degrees: Vec<i64>,
    delta: Vec<Tensor2>,
    d: Vec<Vector>,
    theta: Vec<Scalar>,
}

impl CurvedCoalgebra {
    /// Builds and validates.
    pub fn new(labels: Vec<String>, degrees: Vec<i64>, delta: Vec<Tensor2>, d: Vec<Vector>, theta: Vec<Scalar>) -> Result<Self> {
        let c = Self::unchecked(labels, degrees, delta, d, theta)?;
        let v = c.check();
        if let Some(f) = v.witness() {
            return Err(if f.at.starts_with("curvature") {
                Error::CurvatureMismatch(format!("{}: {}", f.at, f.residual))
            } else if f.at.starts_with("conilpotency") {
                Error::NotConilpotent(f.residual.clone())
            } else {
                Error::Invalid(format!("{}: {}", f.at, f.residual))
            });
        }
        Ok(c)
    }

    /// Shape and degree checks only.
    pub fn unchecked(labels: Vec<String>, degrees: Vec<i64>, delta: Vec<Tensor2>, d: Vec<Vector>, theta: Vec<Scalar>) -> Result<Self> {
        let n = labels.len();
        if degrees.len() != n || delta.len() != n || d.len() != n || theta.len() != n {
            return Err(Error::DimensionMismatch("coalgebra tables must all have one entry per basis element".into()));
        }
        for i in 0..n {
            for (j, k) in delta[i].keys() {
                if *j >= n || *k >= n {
                    return Err(Error::IndexOutOfRange { index: (*j).max(*k), max: n });
                }
                if degrees[*j] + degrees[*k] != degrees[i] {
                    return Err(Error::Invalid(format!("Δ({}) is not homogeneous of degree 0", labels[i])));
                }
            }
            for j in d[i].keys() {
                if *j >= n {
                    return Err(Error::IndexOutOfRange { index: *j, max: n });
                }
                if degrees[*j] != degrees[i] - 1 {
                    return Err(Error::Invalid(format!("d({}) is not of degree -1", labels[i])));
                }
            }
            if !theta[i].is_zero() && degrees[i] != 2 {
                return Err(Error::Invalid(format!("θ({}) must vanish outside degree 2", labels[i])));
            }
        }
        Ok(CurvedCoalgebra { labels, degrees, delta, d, theta })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn delta_basis(&self, i: usize) -> &Tensor2 {
        &self.delta[i]
    }

    pub fn d_basis(&self, i: usize) -> &Vector {
        &self.d[i]
    }

    pub fn theta_basis(&self, i: usize) -> &Scalar {
        &self.theta[i]
    }

    pub fn delta(&self, x: &Vector) -> Tensor2 {
        x.map_linear(|i| self.delta[*i].clone())
    }

    pub fn d(&self, x: &Vector) -> Vector {
        x.map_linear(|i| self.d[*i].clone())
    }

    pub fn theta(&self, x: &Vector) -> Scalar {
        x.iter().map(|(i, c)| c * &self.theta[*i]).sum()
    }

    /// Iterated reduced coproduct D → D^{⊗(k+1)}.
    pub fn iterated_delta(&self, x: &Vector, k: usize) -> LinComb<Vec<usize>> {
        let mut cur: LinComb<Vec<usize>> = x.iter().map(|(i, c)| (vec![*i], c.clone())).collect();
        for _ in 0..k {
            cur = cur.map_linear(|w| {
                let (last, head) = w.split_last().expect("nonempty");
                self.delta[*last]
                    .iter()
                    .map(|((a, b), c)| {
                        let mut v = head.to_vec();
                        v.extend([*a, *b]);
                        (v, c.clone())
                    })
                    .collect()
            });
        }
        cur
    }

    /// (θ ⊗ Id − Id ⊗ θ)Δ.
    pub fn curvature_term(&self, x: &Vector) -> Vector {
        let mut out = Vector::zero();
        for ((a, b), c) in &self.delta(x) {
            out.add_term(*b, c * &self.theta[*a]);
            out.add_term(*a, -(c * &self.theta[*b]));
        }
        out
    }

    pub fn show(&self, x: &Vector) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.iter().map(|(i, c)| format!("{}*{}", crate::linhom::format_scalar(c), self.labels[*i])).collect::<Vec<_>>().join(" + ")
    }

    fn show2(&self, x: &Tensor2) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.iter()
            .map(|((a, b), c)| format!("{}*{}⊗{}", crate::linhom::format_scalar(c), self.labels[*a], self.labels[*b]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Coassociativity, coderivation rule, curvature identity, θd = 0 and conilpotency.
    pub fn check(&self) -> Verdict {
        let mut v = Verdict::new();
        for i in 0..self.dim() {
            let x = Vector::single(i);
            let name = &self.labels[i];
            v.tick();
            let mut l = LinComb::<(usize, usize, usize)>::zero();
            for ((a, b), c) in &self.delta[i] {
                for ((p, q), e) in &self.delta[*a] {
                    l.add_term((*p, *q, *b), c * e);
                }
                for ((p, q), e) in &self.delta[*b] {
                    l.add_term((*a, *p, *q), -(c * e));
                }
            }
            if !l.is_zero() {
                v.fail(format!("coassociativity at {name}"), format!("{} terms", l.len()));
            }
            v.tick();
            let mut r = self.delta(&self.d[i]);
            for ((a, b), c) in &self.delta[i] {
                for (p, e) in &self.d[*a] {
                    r.add_term((*p, *b), -(c * e));
                }
                let s = sign(self.degrees[*a]);
                for (q, e) in &self.d[*b] {
                    r.add_term((*a, *q), -(c * e * &s));
                }
            }
            if !r.is_zero() {
                v.fail(format!("coderivation at {name}"), self.show2(&r));
            }
            v.tick();
            let mut dd = self.d(&self.d[i]);
            dd.sub(&self.curvature_term(&x));
            if !dd.is_zero() {
                v.fail(format!("curvature at {name}"), self.show(&dd));
            }
            v.tick();
            let t = self.theta(&self.d[i]);
            if !t.is_zero() {
                v.fail(format!("curvature at {name}: θd"), crate::linhom::format_scalar(&t));
            }
        }
        v.tick();
        let k = self.dim() + 1;
        if let Some(i) = (0..self.dim()).find(|i| !self.iterated_delta(&Vector::single(*i), k).is_zero()) {
            v.fail("conilpotency", format!("Δ^({k}) of {} is nonzero", self.labels[i]));
        }
        v
    }

    fn by_degree(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            out.entry(*d).or_default().push(i);
        }
        out
    }

    /// F_n = ker Δ^{(n+1)} in global coordinates, per degree.
    fn level_vectors(&self, n: usize) -> BTreeMap<i64, Vec<Vector>> {
        let mut out = BTreeMap::new();
        for (deg, idx) in self.by_degree() {
            let mut rows: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let cols: Vec<LinComb<Vec<usize>>> = idx.iter().map(|i| self.iterated_delta(&Vector::single(*i), n + 1)).collect();
            for c in &cols {
                for k in c.keys() {
                    let r = rows.len();
                    rows.entry(k.clone()).or_insert(r);
                }
            }
            let m = SparseMatrix::from_columns(rows.len(), cols.iter().map(|c| c.iter().map(|(k, x)| (rows[k], x.clone())).collect()).collect());
            let ker = if rows.is_empty() { (0..idx.len()).map(|p| SparseVec::from([(p, Scalar::from_integer(1.into()))])).collect() } else { m.kernel_basis() };
            out.insert(deg, ker.into_iter().map(|v| v.into_iter().map(|(p, c)| (idx[p], c)).collect()).collect());
        }
        out
    }

    /// Coradical filtration F_0 = ker Δ, F_n = ker Δ^{(n+1)}, as a filtered precomplex.
    pub fn coradical_filtration(&self) -> Result<FilteredComplex> {
        let groups = self.by_degree();
        let pos: BTreeMap<usize, usize> = groups.values().flat_map(|v| v.iter().enumerate().map(|(p, i)| (*i, p))).collect();
        let (space, differential) = complex_of_pre(&self.labels, &self.degrees, &|i| self.d[i].clone())?;
        let mut levels = Vec::new();
        for n in 0..=self.dim() {
            let lv = self.level_vectors(n);
            let full = lv.iter().all(|(d, v)| v.len() == groups[d].len());
            levels.push(
                lv.into_iter()
                    .map(|(d, vs)| (d, Subspace::spanned_by(groups[&d].len(), vs.into_iter().map(|v| v.iter().map(|(i, c)| (pos[i], c.clone())).collect()))))
                    .collect(),
            );
            if full {
                return FilteredComplex::new(space, differential, levels);
            }
        }
        Err(Error::NotConilpotent("coradical filtration is not exhaustive".into()))
    }

    /// Checks Δ(F_n) ⊆ Σ_{p+q=n−1} F_p ⊗ F_q for every level.
    pub fn check_coradical_decomposition(&self) -> Result<Verdict> {
        let mut v = Verdict::new();
        let top = self.coradical_filtration()?.num_levels();
        let levels: Vec<Vec<Vector>> = (0..top).map(|n| self.level_vectors(n).into_values().flatten().collect()).collect();
        for n in 0..top {
            let mut keys: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut gens: Vec<Tensor2> = Vec::new();
            if n > 0 {
                for p in 0..n {
                    for a in &levels[p] {
                        for b in &levels[n - 1 - p] {
                            let mut t = Tensor2::zero();
                            for (i, x) in a {
                                for (j, y) in b {
                                    t.add_term((*i, *j), x * y);
                                }
                            }
                            gens.push(t);
                        }
                    }
                }
            }
            let images: Vec<Tensor2> = levels[n].iter().map(|x| self.delta(x)).collect();
            for t in gens.iter().chain(&images) {
                for k in t.keys() {
                    let l = keys.len();
                    keys.entry(*k).or_insert(l);
                }
            }
            let vec = |t: &Tensor2| -> SparseVec { t.iter().map(|(k, c)| (keys[k], c.clone())).collect() };
            let span = Subspace::spanned_by(keys.len(), gens.iter().map(vec));
            for (x, img) in levels[n].iter().zip(&images) {
                v.tick();
                if !span.contains(&vec(img)) {
                    v.fail(format!("Δ(F_{n}) at {}", self.show(x)), self.show2(img));
                }
            }
        }
        Ok(v)
    }

    pub fn is_conilpotent(&self) -> bool {
        let k = self.dim() + 1;
        (0..self.dim()).all(|i| self.iterated_delta(&Vector::single(i), k).is_zero())
    }

    /// Underlying graded space.
    pub fn space(&self) -> Result<GradedSpace> {
        Ok(complex_of_pre(&self.labels, &self.degrees, &|i| self.d[i].clone())?.0)
    }
}
