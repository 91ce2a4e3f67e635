use std::collections::BTreeMap;

use num::Zero;

use crate::algcog::{complex_of, Tensor2, UnitalAssocAlgebra, Vector};
use crate::error::{Error, Result};
use crate::linhom::{format_scalar, int, sign, ChainComplex, Scalar, SparseMatrix};
use crate::verdict::Verdict;

/// Finite-dimensional counital cocommutative dg coalgebra on a homogeneous basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FinCocomCoalgebra {
    labels: Vec<String>,
    degrees: Vec<i64>,
    delta: Vec<Tensor2>,
    counit: Vec<Scalar>,
    d: Vec<Vector>,
}

impl FinCocomCoalgebra {
    /// Validates counit laws, cocommutativity, coassociativity, d² = 0 and that Δ and ε are chain maps.
    pub fn new(labels: Vec<String>, degrees: Vec<i64>, delta: Vec<Tensor2>, counit: Vec<Scalar>, d: Vec<Vector>) -> Result<Self> {
        let n = labels.len();
        if degrees.len() != n || delta.len() != n || counit.len() != n || d.len() != n {
            return Err(Error::DimensionMismatch("one entry per basis element expected".into()));
        }
        for i in 0..n {
            for (a, b) in delta[i].keys() {
                if *a >= n || *b >= n {
                    return Err(Error::IndexOutOfRange { index: (*a).max(*b), max: n });
                }
                if degrees[*a] + degrees[*b] != degrees[i] {
                    return Err(Error::Invalid(format!("Δ({}) is not homogeneous", labels[i])));
                }
            }
            for j in d[i].keys() {
                if *j >= n {
                    return Err(Error::IndexOutOfRange { index: *j, max: n });
                }
                if degrees[*j] != degrees[i] - 1 {
                    return Err(Error::Invalid(format!("d({}) has the wrong degree", labels[i])));
                }
            }
            if !counit[i].is_zero() && degrees[i] != 0 {
                return Err(Error::Invalid(format!("ε({}) is nonzero in degree {}", labels[i], degrees[i])));
            }
        }
        let c = FinCocomCoalgebra { labels, degrees, delta, counit, d };
        if let Some(f) = c.check().witness() {
            return Err(Error::Invalid(format!("{}: {}", f.at, f.residual)));
        }
        Ok(c)
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

    /// The underlying chain complex.
    pub fn carrier(&self) -> Result<ChainComplex> {
        complex_of(&self.labels, &self.degrees, &|i| self.d[i].clone())
    }

    pub fn delta_basis(&self, i: usize) -> &Tensor2 {
        &self.delta[i]
    }

    pub fn d_basis(&self, i: usize) -> &Vector {
        &self.d[i]
    }

    pub fn counit_basis(&self, i: usize) -> &Scalar {
        &self.counit[i]
    }

    pub fn delta(&self, x: &Vector) -> Tensor2 {
        x.map_linear(|i| self.delta[*i].clone())
    }

    pub fn d(&self, x: &Vector) -> Vector {
        x.map_linear(|i| self.d[*i].clone())
    }

    pub fn counit(&self, x: &Vector) -> Scalar {
        x.iter().map(|(i, c)| c * &self.counit[*i]).sum()
    }

    pub fn show(&self, x: &Vector) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.iter().map(|(i, c)| format!("{}*{}", format_scalar(c), self.labels[*i])).collect::<Vec<_>>().join(" + ")
    }

    pub fn check(&self) -> Verdict {
        let mut v = Verdict::new();
        for i in 0..self.dim() {
            let name = &self.labels[i];
            let x = Vector::single(i);
            let (mut l, mut r) = (Vector::zero(), Vector::zero());
            for ((a, b), c) in &self.delta[i] {
                l.add_term(*b, c * &self.counit[*a]);
                r.add_term(*a, c * &self.counit[*b]);
            }
            v.tick();
            if l != x || r != x {
                v.fail(format!("counit at {name}"), format!("{} / {}", self.show(&l), self.show(&r)));
            }
            v.tick();
            let tau: Tensor2 = self.delta[i].iter().map(|((a, b), c)| ((*b, *a), c * sign(self.degrees[*a] * self.degrees[*b]))).collect();
            if tau != self.delta[i] {
                v.fail(format!("cocommutativity at {name}"), format!("{} terms differ", tau.len()));
            }
            v.tick();
            let mut co = crate::linhom::LinComb::<(usize, usize, usize)>::zero();
            for ((a, b), c) in &self.delta[i] {
                for ((p, q), e) in &self.delta[*a] {
                    co.add_term((*p, *q, *b), c * e);
                }
                for ((p, q), e) in &self.delta[*b] {
                    co.add_term((*a, *p, *q), -(c * e));
                }
            }
            if !co.is_zero() {
                v.fail(format!("coassociativity at {name}"), format!("{} terms", co.len()));
            }
            v.tick();
            if !self.d(&self.d[i]).is_zero() {
                v.fail(format!("d² at {name}"), self.show(&self.d(&self.d[i])));
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
                v.fail(format!("Δ is not a chain map at {name}"), format!("{} terms", r.len()));
            }
            v.tick();
            let e = self.counit(&self.d[i]);
            if !e.is_zero() {
                v.fail(format!("ε is not a chain map at {name}"), format_scalar(&e));
            }
        }
        v
    }
}

/// The dual algebra C* on the dual basis x_i^* (degree −|x_i|), with
/// (f·g)(x) = Σ (−1)^{|g||x₁|} f(x₁) g(x₂), unit ε and (df)(x) = −(−1)^{|f|} f(dx).
#[derive(Clone, Debug, PartialEq)]
pub struct DualCommAlgebra {
    algebra: UnitalAssocAlgebra,
}

impl DualCommAlgebra {
    pub fn algebra(&self) -> &UnitalAssocAlgebra {
        &self.algebra
    }
}

pub fn dualize(c: &FinCocomCoalgebra) -> Result<DualCommAlgebra> {
    let n = c.dim();
    let mut product: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for k in 0..n {
        for ((i, j), x) in &c.delta[k] {
            // sign (−1)^{|x_j^*||x_i|}
            let s = sign(c.degrees[*i] * c.degrees[*j]);
            product.entry((*i, *j)).or_default().add_term(k, x * s);
        }
    }
    let mut differential: BTreeMap<usize, Vector> = BTreeMap::new();
    for i in 0..n {
        for (j, x) in &c.d[i] {
            // (d x_j^*)(x_i) = −(−1)^{|x_j^*|} x_j^*(d x_i)
            differential.entry(*j).or_default().add_term(i, -(x * sign(c.degrees[*j])));
        }
    }
    let unit: Vector = (0..n).filter(|i| !c.counit[*i].is_zero()).map(|i| (i, c.counit[i].clone())).collect();
    let labels = c.labels.iter().map(|l| format!("{l}*")).collect();
    let algebra = UnitalAssocAlgebra::new(labels, c.degrees.iter().map(|d| -d).collect(), product, differential, unit)?;
    if !algebra.is_commutative() {
        return Err(Error::Invalid("dual algebra is not graded commutative".into()));
    }
    Ok(DualCommAlgebra { algebra })
}

/// The coalgebra dual to a finite-dimensional graded commutative algebra; inverse to [`dualize`].
pub fn predual(a: &UnitalAssocAlgebra) -> Result<FinCocomCoalgebra> {
    let n = a.dim();
    let mut delta = vec![Tensor2::zero(); n];
    for ((i, j), v) in a.product_table() {
        for (k, x) in v {
            let s = sign(a.degree(*i) * a.degree(*j));
            delta[*k].add_term((*i, *j), x * s);
        }
    }
    let mut d = vec![Vector::zero(); n];
    for (j, v) in a.differential_table() {
        for (i, x) in v {
            d[*i].add_term(*j, -(x * sign(a.degree(*j))));
        }
    }
    let mut counit = vec![Scalar::zero(); n];
    for (i, x) in a.unit() {
        counit[*i] = x.clone();
    }
    let labels = a.labels().iter().map(|l| l.strip_suffix('*').map(str::to_string).unwrap_or_else(|| format!("{l}*"))).collect();
    FinCocomCoalgebra::new(labels, a.degrees().iter().map(|d| -d).collect(), delta, counit, d)
}

/// A linear map between coalgebras, given on basis elements of the source.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalgebraMap {
    pub images: Vec<Vector>,
}

impl CoalgebraMap {
    pub fn apply(&self, x: &Vector) -> Vector {
        x.map_linear(|i| self.images[*i].clone())
    }

    pub fn compose(&self, then: &CoalgebraMap) -> CoalgebraMap {
        CoalgebraMap { images: self.images.iter().map(|v| then.apply(v)).collect() }
    }

    /// Matrix with columns the images (target dimension `rows`).
    pub fn matrix(&self, rows: usize) -> SparseMatrix {
        SparseMatrix::from_columns(rows, self.images.iter().map(|v| v.iter().map(|(i, c)| (*i, c.clone())).collect()).collect())
    }

    /// The transposed map between dual algebras (dual bases).
    pub fn dual(&self, rows: usize) -> CoalgebraMap {
        let t = self.matrix(rows).transpose();
        CoalgebraMap { images: t.columns().iter().map(|c| c.iter().map(|(i, x)| (*i, x.clone())).collect()).collect() }
    }
}

/// Δf = (f⊗f)Δ, εf = ε and df = fd on basis elements.
pub fn check_coalgebra_map(src: &FinCocomCoalgebra, tgt: &FinCocomCoalgebra, f: &CoalgebraMap) -> Verdict {
    let mut v = Verdict::new();
    for i in 0..src.dim() {
        let name = &src.labels[i];
        v.tick();
        let mut r = tgt.delta(&f.images[i]);
        for ((a, b), c) in &src.delta[i] {
            for (p, x) in &f.images[*a] {
                for (q, y) in &f.images[*b] {
                    r.add_term((*p, *q), -(c * x * y));
                }
            }
        }
        if !r.is_zero() {
            v.fail(format!("comultiplication at {name}"), format!("{} terms", r.len()));
        }
        v.tick();
        if tgt.counit(&f.images[i]) != src.counit[i] {
            v.fail(format!("counit at {name}"), format_scalar(&tgt.counit(&f.images[i])));
        }
        v.tick();
        let mut r = tgt.d(&f.images[i]);
        r.sub(&f.apply(&src.d[i]));
        if !r.is_zero() {
            v.fail(format!("differential at {name}"), tgt.show(&r));
        }
    }
    v
}

/// k grouplike elements g_i with Δg_i = g_i ⊗ g_i and ε(g_i) = 1.
pub fn grouplikes(k: usize) -> FinCocomCoalgebra {
    FinCocomCoalgebra::new(
        (0..k).map(|i| format!("g{i}")).collect(),
        vec![0; k],
        (0..k).map(|i| Tensor2::single((i, i))).collect(),
        vec![int(1); k],
        vec![Vector::zero(); k],
    )
    .expect("grouplike coalgebra")
}

fn skew(g: usize, x: usize) -> Tensor2 {
    Tensor2::from_terms([((g, x), int(1)), ((x, g), int(1))])
}

/// Two atoms a, b with three elements over each:
/// p, q primitive over a and r with Δr = a⊗r + r⊗a + p⊗q + q⊗p (degree 0);
/// s, t primitive over b in degrees 1, 2 with dt = s, and u in degree 3 with
/// Δu = b⊗u + u⊗b + s⊗t + t⊗s.
pub fn two_atom_example() -> FinCocomCoalgebra {
    let labels = ["a", "p", "q", "r", "b", "s", "t", "u"].map(String::from).to_vec();
    let degrees = vec![0, 0, 0, 0, 0, 1, 2, 3];
    let mut r = skew(0, 3);
    r.add(&Tensor2::from_terms([((1, 2), int(1)), ((2, 1), int(1))]));
    let mut u = skew(4, 7);
    u.add(&Tensor2::from_terms([((5, 6), int(1)), ((6, 5), int(1))]));
    let delta = vec![Tensor2::single((0, 0)), skew(0, 1), skew(0, 2), r, Tensor2::single((4, 4)), skew(4, 5), skew(4, 6), u];
    let mut counit = vec![Scalar::zero(); 8];
    counit[0] = int(1);
    counit[4] = int(1);
    let mut d = vec![Vector::zero(); 8];
    d[6] = Vector::single(5);
    FinCocomCoalgebra::new(labels, degrees, delta, counit, d).expect("two-atom coalgebra")
}

/// The coalgebra dual to ℚ[t]/(t² + 1).
pub fn gaussian_dual() -> FinCocomCoalgebra {
    let product = BTreeMap::from([
        ((0, 0), Vector::single(0)),
        ((0, 1), Vector::single(1)),
        ((1, 0), Vector::single(1)),
        ((1, 1), Vector::term(0, int(-1))),
    ]);
    let a = UnitalAssocAlgebra::new(vec!["1".into(), "t".into()], vec![0, 0], product, BTreeMap::new(), Vector::single(0)).expect("ℚ(i)");
    predual(&a).expect("dual of ℚ(i)")
}

/// The coalgebra dual to 𝕂[t]/(t^n).
pub fn truncated_polynomial_dual(n: usize) -> FinCocomCoalgebra {
    predual(&crate::algcog::truncated_polynomial(n)).expect("dual of a truncated polynomial algebra")
}

/// {1, x} with Δx = 1⊗x + x⊗1: its dual is 𝕂[t]/(t²).
pub fn divided_power_pair() -> FinCocomCoalgebra {
    FinCocomCoalgebra::new(
        vec!["1".into(), "x".into()],
        vec![0, 0],
        vec![Tensor2::single((0, 0)), skew(0, 1)],
        vec![int(1), int(0)],
        vec![Vector::zero(); 2],
    )
    .expect("divided power coalgebra")
}

/// A grouplike a in degree 0 with d(a) = p for a primitive p in degree −1.
pub fn non_dg_atom() -> FinCocomCoalgebra {
    FinCocomCoalgebra::new(
        vec!["a".into(), "p".into()],
        vec![0, -1],
        vec![Tensor2::single((0, 0)), skew(0, 1)],
        vec![int(1), int(0)],
        vec![Vector::single(1), Vector::zero()],
    )
    .expect("coalgebra with a non-closed atom")
}
