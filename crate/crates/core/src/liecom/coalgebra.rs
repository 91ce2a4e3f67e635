use num::Zero;

use crate::algcog::{Tensor2, Vector};
use crate::error::{Error, Result};
use crate::linhom::{format_scalar, sign, LinComb, Scalar};
use crate::verdict::Verdict;

type Tensor3 = LinComb<(usize, usize, usize)>;

/// Finite-dimensional graded module with a cobracket, a coderivation and a
/// curvature, given on a basis. Shared by both sides of the suspension.
#[derive(Clone, Debug, PartialEq)]
pub struct LieData {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub delta: Vec<Tensor2>,
    pub d: Vec<Vector>,
    pub theta: Vec<Scalar>,
}

impl LieData {
    fn validate(&self, delta_deg: i64, theta_deg: i64) -> Result<()> {
        let n = self.labels.len();
        if self.degrees.len() != n || self.delta.len() != n || self.d.len() != n || self.theta.len() != n {
            return Err(Error::DimensionMismatch("one entry per basis element expected".into()));
        }
        let ok = |i: &usize| -> Result<()> {
            if *i >= n {
                return Err(Error::IndexOutOfRange { index: *i, max: n });
            }
            Ok(())
        };
        for i in 0..n {
            for (a, b) in self.delta[i].keys() {
                ok(a)?;
                ok(b)?;
                if self.degrees[*a] + self.degrees[*b] != self.degrees[i] + delta_deg {
                    return Err(Error::Invalid(format!("δ({}) has the wrong degree", self.labels[i])));
                }
            }
            for j in self.d[i].keys() {
                ok(j)?;
                if self.degrees[*j] != self.degrees[i] - 1 {
                    return Err(Error::Invalid(format!("d({}) has the wrong degree", self.labels[i])));
                }
            }
            if !self.theta[i].is_zero() && self.degrees[i] + theta_deg != 0 {
                return Err(Error::Invalid(format!("θ({}) has the wrong degree", self.labels[i])));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
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

    pub fn show(&self, x: &Vector) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.iter().map(|(i, c)| format!("{}*{}", format_scalar(c), self.labels[*i])).collect::<Vec<_>>().join(" + ")
    }

    fn show2(&self, x: &Tensor2) -> String {
        x.iter().map(|((a, b), c)| format!("{}*{}⊗{}", format_scalar(c), self.labels[*a], self.labels[*b])).collect::<Vec<_>>().join(" + ")
    }

    fn show3(&self, x: &Tensor3) -> String {
        x.iter()
            .map(|((a, b, e), c)| format!("{}*{}⊗{}⊗{}", format_scalar(c), self.labels[*a], self.labels[*b], self.labels[*e]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// τ(a ⊗ b) = (−1)^{|a||b|} b ⊗ a.
    fn tau(&self, x: &Tensor2) -> Tensor2 {
        x.iter().map(|((a, b), c)| ((*b, *a), c * sign(self.degrees[*a] * self.degrees[*b]))).collect()
    }

    /// (δ ⊗ Id)δ(x_i).
    fn delta_left(&self, i: usize) -> Tensor3 {
        let mut out = Tensor3::zero();
        for ((a, b), c) in &self.delta[i] {
            for ((p, q), e) in &self.delta[*a] {
                out.add_term((*p, *q, *b), c * e);
            }
        }
        out
    }

    /// (Id ⊗ δ)δ(x_i), with the Koszul sign (−1)^{|δ||a|}.
    fn delta_right(&self, i: usize, delta_deg: i64) -> Tensor3 {
        let mut out = Tensor3::zero();
        for ((a, b), c) in &self.delta[i] {
            let s = sign(delta_deg * self.degrees[*a]);
            for ((p, q), e) in &self.delta[*b] {
                out.add_term((*a, *p, *q), c * e * &s);
            }
        }
        out
    }

    /// Permutes tensor factors with the Koszul sign; `perm[k]` is the source slot of slot k.
    fn permute(&self, x: &Tensor3, perm: [usize; 3]) -> Tensor3 {
        x.iter()
            .map(|((a, b, e), c)| {
                let v = [*a, *b, *e];
                let mut s = 0;
                for k in 0..3 {
                    for l in k + 1..3 {
                        if perm[k] > perm[l] {
                            s += self.degrees[v[perm[k]]] * self.degrees[v[perm[l]]];
                        }
                    }
                }
                ((v[perm[0]], v[perm[1]], v[perm[2]]), c * sign(s))
            })
            .collect()
    }

    /// (d ⊗ Id + Id ⊗ d)δ(x_i) with d of degree −1.
    fn d_tensor(&self, t: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zero();
        for ((a, b), c) in t {
            for (p, e) in &self.d[*a] {
                out.add_term((*p, *b), c * e);
            }
            let s = sign(self.degrees[*a]);
            for (q, e) in &self.d[*b] {
                out.add_term((*a, *q), c * e * &s);
            }
        }
        out
    }

    /// (θ ⊗ Id)t and (Id ⊗ θ)t, the latter with the Koszul sign of θ.
    fn theta_sides(&self, t: &Tensor2, theta_deg: i64) -> (Vector, Vector) {
        let mut l = Vector::zero();
        let mut r = Vector::zero();
        for ((a, b), c) in t {
            l.add_term(*b, c * &self.theta[*a]);
            r.add_term(*a, c * &self.theta[*b] * sign(theta_deg * self.degrees[*a]));
        }
        (l, r)
    }

    /// Whether applying δ at every tensor slot eventually vanishes.
    fn conilpotency(&self, v: &mut Verdict) {
        v.tick();
        let k = self.dim() + 1;
        for i in 0..self.dim() {
            let mut cur: LinComb<Vec<usize>> = LinComb::single(vec![i]);
            for _ in 0..k {
                if cur.is_zero() {
                    break;
                }
                cur = cur.map_linear(|w| {
                    let mut out = LinComb::zero();
                    for (pos, x) in w.iter().enumerate() {
                        for ((a, b), c) in &self.delta[*x] {
                            let mut t = w[..pos].to_vec();
                            t.extend([*a, *b]);
                            t.extend_from_slice(&w[pos + 1..]);
                            out.add_term(t, c.clone());
                        }
                    }
                    out
                });
            }
            if !cur.is_zero() {
                v.fail("conilpotency", format!("δ iterated {k} times is nonzero on {}", self.labels[i]));
                return;
            }
        }
    }
}

/// Curved conilpotent Lie coalgebra (δ of degree 0, θ of degree −2) with
///   τδ = −δ,
///   (δ⊗Id)δ = (Id⊗δ)δ + (Id⊗τ)(δ⊗Id)δ,
///   δd = (d⊗Id + Id⊗d)δ,
///   d² = (θ⊗Id − Id⊗θ)δ.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvedLieCoalgebra {
    data: LieData,
}

impl CurvedLieCoalgebra {
    pub fn new(labels: Vec<String>, degrees: Vec<i64>, delta: Vec<Tensor2>, d: Vec<Vector>, theta: Vec<Scalar>) -> Result<Self> {
        let c = Self::unchecked(labels, degrees, delta, d, theta)?;
        if let Some(f) = check_curved_lie(&c).witness() {
            let msg = format!("{}: {}", f.at, f.residual);
            return Err(if f.at.starts_with("curvature") {
                Error::CurvatureMismatch(msg)
            } else if f.at.starts_with("conilpotency") {
                Error::NotConilpotent(msg)
            } else {
                Error::Invalid(msg)
            });
        }
        Ok(c)
    }

    /// Shape and degree checks only.
    pub fn unchecked(labels: Vec<String>, degrees: Vec<i64>, delta: Vec<Tensor2>, d: Vec<Vector>, theta: Vec<Scalar>) -> Result<Self> {
        let data = LieData { labels, degrees, delta, d, theta };
        data.validate(0, -2)?;
        Ok(CurvedLieCoalgebra { data })
    }

    pub fn data(&self) -> &LieData {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    pub fn labels(&self) -> &[String] {
        &self.data.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.data.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.data.degrees[i]
    }

    pub fn delta_basis(&self, i: usize) -> &Tensor2 {
        &self.data.delta[i]
    }

    pub fn d_basis(&self, i: usize) -> &Vector {
        &self.data.d[i]
    }

    pub fn theta_basis(&self, i: usize) -> &Scalar {
        &self.data.theta[i]
    }

    pub fn delta(&self, x: &Vector) -> Tensor2 {
        self.data.delta(x)
    }

    pub fn d(&self, x: &Vector) -> Vector {
        self.data.d(x)
    }

    pub fn theta(&self, x: &Vector) -> Scalar {
        self.data.theta(x)
    }

    pub fn show(&self, x: &Vector) -> String {
        self.data.show(x)
    }
}

/// Antisymmetry, co-Jacobi, co-Leibniz, the curvature identity, θd = 0 and
/// conilpotency on every basis element.
pub fn check_curved_lie(c: &CurvedLieCoalgebra) -> Verdict {
    let c = &c.data;
    let mut v = Verdict::new();
    for i in 0..c.dim() {
        let name = &c.labels[i];
        v.tick();
        let mut r = c.tau(&c.delta[i]);
        r.add(&c.delta[i]);
        if !r.is_zero() {
            v.fail(format!("antisymmetry at {name}"), c.show2(&r));
        }
        v.tick();
        let l = c.delta_left(i);
        let mut r = l.clone();
        r.sub(&c.delta_right(i, 0));
        r.sub(&c.permute(&l, [0, 2, 1]));
        if !r.is_zero() {
            v.fail(format!("co-Jacobi at {name}"), c.show3(&r));
        }
        v.tick();
        let mut r = c.delta(&c.d[i]);
        r.sub(&c.d_tensor(&c.delta[i]));
        if !r.is_zero() {
            v.fail(format!("co-Leibniz at {name}"), c.show2(&r));
        }
        v.tick();
        let mut r = c.d(&c.d[i]);
        let (tl, tr) = c.theta_sides(&c.delta[i], -2);
        r.sub(&tl);
        r.add(&tr);
        if !r.is_zero() {
            v.fail(format!("curvature at {name}"), c.show(&r));
        }
        v.tick();
        let t = c.theta(&c.d[i]);
        if !t.is_zero() {
            v.fail(format!("θd at {name}"), format_scalar(&t));
        }
    }
    c.conilpotency(&mut v);
    v
}

/// A uCom¡-coalgebra in components: δ and θ of degree −1, δ symmetric,
///   (δ⊗Id)δ + ((δ⊗Id)δ)^{(2,3)} + ((δ⊗Id)δ)^{(1,3)} = 0,
///   δd = −(d⊗Id + Id⊗d)δ,  θd = 0,  d² = −(θ⊗Id + Id⊗θ)δ.
#[derive(Clone, Debug, PartialEq)]
pub struct ComDualCoalgebra {
    data: LieData,
}

impl ComDualCoalgebra {
    pub fn unchecked(labels: Vec<String>, degrees: Vec<i64>, delta: Vec<Tensor2>, d: Vec<Vector>, theta: Vec<Scalar>) -> Result<Self> {
        let data = LieData { labels, degrees, delta, d, theta };
        data.validate(-1, -1)?;
        Ok(ComDualCoalgebra { data })
    }

    pub fn data(&self) -> &LieData {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    /// The conditions above on every basis element.
    pub fn check(&self) -> Verdict {
        let c = &self.data;
        let mut v = Verdict::new();
        for i in 0..c.dim() {
            let name = &c.labels[i];
            v.tick();
            let mut r = c.tau(&c.delta[i]);
            r.sub(&c.delta[i]);
            if !r.is_zero() {
                v.fail(format!("symmetry at {name}"), c.show2(&r));
            }
            v.tick();
            let l = c.delta_left(i);
            let mut r = l.clone();
            r.add(&c.permute(&l, [0, 2, 1]));
            r.add(&c.permute(&l, [2, 1, 0]));
            if !r.is_zero() {
                v.fail(format!("cyclic relation at {name}"), c.show3(&r));
            }
            v.tick();
            let mut r = c.delta(&c.d[i]);
            r.add(&c.d_tensor(&c.delta[i]));
            if !r.is_zero() {
                v.fail(format!("co-Leibniz at {name}"), c.show2(&r));
            }
            v.tick();
            let mut r = c.d(&c.d[i]);
            let (tl, tr) = c.theta_sides(&c.delta[i], -1);
            r.add(&tl);
            r.add(&tr);
            if !r.is_zero() {
                v.fail(format!("curvature at {name}"), c.show(&r));
            }
            v.tick();
            let t = c.theta(&c.d[i]);
            if !t.is_zero() {
                v.fail(format!("θd at {name}"), format_scalar(&t));
            }
        }
        c.conilpotency(&mut v);
        v
    }
}

/// Sign ε in δ(s⁻¹x) = ε Σ (−1)^{|x₁|} s⁻¹x₁ ⊗ s⁻¹x₂ used by [`desuspend`].
pub const DESUSPENSION_SIGN: i64 = -1;

/// The uCom¡-coalgebra s⁻¹C of a curved Lie coalgebra:
/// δ(s⁻¹x) = ε Σ (−1)^{|x₁|} s⁻¹x₁ ⊗ s⁻¹x₂, θ(s⁻¹x) = θ(x), d(s⁻¹x) = −s⁻¹dx.
pub fn desuspend(c: &CurvedLieCoalgebra) -> ComDualCoalgebra {
    desuspend_with(c, DESUSPENSION_SIGN)
}

pub(crate) fn desuspend_with(c: &CurvedLieCoalgebra, eps: i64) -> ComDualCoalgebra {
    let c = &c.data;
    let delta = c
        .delta
        .iter()
        .map(|t| t.iter().map(|((a, b), x)| ((*a, *b), x * sign(c.degrees[*a]) * Scalar::from_integer(eps.into()))).collect())
        .collect();
    let data = LieData {
        labels: c.labels.iter().map(|l| format!("s⁻¹{l}")).collect(),
        degrees: c.degrees.iter().map(|d| d - 1).collect(),
        delta,
        d: c.d.iter().map(|x| x.neg()).collect(),
        theta: c.theta.clone(),
    };
    ComDualCoalgebra { data }
}

/// Inverse of [`desuspend`]: δ(sy) = ε Σ (−1)^{|y₁|+1} sy₁ ⊗ sy₂, θ(sy) = θ(y), d(sy) = −s dy.
pub fn suspend(dc: &ComDualCoalgebra) -> Result<CurvedLieCoalgebra> {
    let c = &dc.data;
    let eps = Scalar::from_integer(DESUSPENSION_SIGN.into());
    let delta = c.delta.iter().map(|t| t.iter().map(|((a, b), x)| ((*a, *b), -(x * sign(c.degrees[*a]) * &eps))).collect()).collect();
    let labels = c.labels.iter().map(|l| l.strip_prefix("s⁻¹").map(str::to_string).unwrap_or_else(|| format!("s{l}"))).collect();
    CurvedLieCoalgebra::unchecked(labels, c.degrees.iter().map(|d| d + 1).collect(), delta, c.d.iter().map(|x| x.neg()).collect(), c.theta.clone())
}
