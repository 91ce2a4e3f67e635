use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::algcog::{Tensor2, UnitalAssocAlgebra, Vector};
use crate::error::{Error, Result};
use crate::linhom::{format_scalar, int, LinComb, Scalar, SparseMatrix, SparseVec, Subspace};
use crate::verdict::Verdict;

use super::coalgebra::{dualize, CoalgebraMap, FinCocomCoalgebra};

/// One summand of the decomposition: the sub-coalgebra cut out by a
/// degree-0 idempotent of the dual algebra, together with its atom.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub atom: Vector,
    pub dg_atom: bool,
    pub basis: Vec<Vector>,
    /// Idempotent in the dual basis x_i^*.
    pub idempotent: Vector,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub components: Vec<Component>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Component::dim).collect()
    }
}

fn to_sparse(v: &Vector) -> SparseVec {
    v.iter().map(|(i, c)| (*i, c.clone())).collect()
}

fn from_sparse(v: &SparseVec) -> Vector {
    v.iter().map(|(i, c)| (*i, c.clone())).collect()
}

/// Trace of multiplication by `y` on the span of `basis` (a subalgebra).
fn trace_on(a: &UnitalAssocAlgebra, basis: &[usize], y: &Vector) -> Scalar {
    basis.iter().map(|b| a.mul(y, &Vector::single(*b)).coeff(b)).sum()
}

/// The action f·x = Σ f(x₁) x₂ of a degree-0 functional on C.
pub fn coaction(c: &FinCocomCoalgebra, f: &Vector, x: &Vector) -> Vector {
    let mut out = Vector::zero();
    for ((p, q), t) in &c.delta(x) {
        let v = f.coeff(p);
        if !v.is_zero() {
            out.add_term(*q, t * v);
        }
    }
    out
}

fn divisors(n: &BigInt) -> Result<Vec<u64>> {
    let n = n.abs().to_u64().ok_or_else(|| Error::Invalid("minimal polynomial coefficients too large".into()))?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            out.push(n / k);
        }
        k += 1;
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn eval(poly: &[Scalar], x: &Scalar) -> Scalar {
    poly.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

/// Distinct rational roots of a polynomial given by coefficients (constant first).
pub fn rational_roots(poly: &[Scalar]) -> Result<Vec<Scalar>> {
    let lcm = poly.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut ints: Vec<BigInt> = poly.iter().map(|c| (c * Scalar::from(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        if roots.is_empty() {
            roots.push(Scalar::zero());
        }
    }
    if ints.len() <= 1 {
        return Ok(roots);
    }
    let lead = ints.last().expect("nonempty").clone();
    let q = divisors(&lead)?;
    let p = divisors(&ints[0])?;
    let scaled: Vec<Scalar> = ints.iter().map(|i| Scalar::from(i.clone())).collect();
    let mut cands: Vec<Scalar> = Vec::new();
    for a in &p {
        for b in &q {
            for s in [1i64, -1] {
                let x = Scalar::new(BigInt::from(*a) * s, BigInt::from(*b));
                if !cands.contains(&x) && eval(&scaled, &x).is_zero() {
                    cands.push(x);
                }
            }
        }
    }
    roots.extend(cands);
    roots.sort();
    Ok(roots)
}

/// Splits C = ⊕ C_r along the primitive idempotents of the degree-0 dual algebra.
pub fn decompose(c: &FinCocomCoalgebra) -> Result<Decomposition> {
    let dual = dualize(c)?;
    let a = dual.algebra();
    let zero_deg: Vec<usize> = (0..c.dim()).filter(|i| c.degree(*i) == 0).collect();
    let m = zero_deg.len();
    if m == 0 {
        return Err(Error::Invalid("no degree-0 part, so no counit".into()));
    }
    let local = |v: &Vector| -> SparseVec { v.iter().map(|(i, x)| (zero_deg.iter().position(|j| j == i).expect("degree 0"), x.clone())).collect() };

    // nilradical = radical of the trace form on A₀
    let gram: Vec<Vec<Scalar>> = zero_deg
        .iter()
        .map(|i| zero_deg.iter().map(|j| trace_on(a, &zero_deg, &a.mul_basis(*i, *j))).collect())
        .collect();
    let nil = SparseMatrix::from_dense(&gram).kernel_basis();
    let k = m - nil.len();

    let mut found = None;
    for t in 1..=(64 + (m * k * k) as i64) {
        let z: Vector = zero_deg.iter().enumerate().map(|(i, j)| (*j, Scalar::from(BigInt::from(t).pow(i as u32)))).collect();
        let mut powers = vec![a.unit().clone()];
        loop {
            let p = powers.len();
            let next = a.mul(powers.last().expect("nonempty"), &z);
            let mut cols: Vec<SparseVec> = nil.clone();
            cols.extend(powers.iter().map(&local));
            let sol = SparseMatrix::from_columns(m, cols).solve(&local(&next));
            if let Some(sol) = sol {
                let mut poly: Vec<Scalar> = (0..p).map(|q| -sol.get(&(nil.len() + q)).cloned().unwrap_or_else(Scalar::zero)).collect();
                poly.push(int(1));
                if p == k {
                    found = Some((z, poly));
                }
                break;
            }
            powers.push(next);
        }
        if found.is_some() {
            break;
        }
    }
    let (z, poly) = found.ok_or_else(|| Error::Invalid("no primitive element found".into()))?;
    let roots = rational_roots(&poly)?;
    if roots.len() < k {
        let shown = poly.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(i, c)| format!("{}*t^{i}", format_scalar(c))).collect::<Vec<_>>();
        return Err(Error::NonSplitSemisimple(format!("minimal polynomial {} has irreducible factors of degree > 1", shown.join(" + "))));
    }

    let unit = a.unit().clone();
    let mut idempotents = Vec::new();
    for (r, lr) in roots.iter().enumerate() {
        let mut e = unit.clone();
        for (s, ls) in roots.iter().enumerate() {
            if s != r {
                let mut f = z.clone();
                f.add_scaled(&unit, &-ls.clone());
                e = a.mul(&e, &f).scaled(&(Scalar::one() / (lr - ls)));
            }
        }
        let mut stable = false;
        for _ in 0..=m {
            let e2 = a.mul(&e, &e);
            if e2 == e {
                stable = true;
                break;
            }
            let e3 = a.mul(&e2, &e);
            e = e2.scaled(&int(3));
            e.add_scaled(&e3, &int(-2));
        }
        if !stable {
            return Err(Error::Invalid("idempotent lifting did not converge".into()));
        }
        idempotents.push(e);
    }

    let mut components = Vec::new();
    for e in idempotents {
        let mut span = Subspace::zero(c.dim());
        for i in 0..c.dim() {
            span.insert(to_sparse(&coaction(c, &e, &Vector::single(i))));
        }
        let basis: Vec<Vector> = span.basis_vectors().iter().map(from_sparse).collect();
        // χ(y) = Tr(L_{ey}) / Tr(L_e): the nilpotent part is traceless
        let te = trace_on(a, &zero_deg, &e);
        let atom: Vector = zero_deg
            .iter()
            .filter_map(|j| {
                let x = trace_on(a, &zero_deg, &a.mul(&e, &Vector::single(*j))) / &te;
                (!x.is_zero()).then_some((*j, x))
            })
            .collect();
        let dg_atom = c.d(&atom).is_zero();
        components.push(Component { atom, dg_atom, basis, idempotent: e });
    }
    Ok(Decomposition { components })
}

/// The atoms of C, one per component, with a flag for d(a) = 0.
pub fn atoms(c: &FinCocomCoalgebra) -> Result<Vec<(Vector, bool)>> {
    Ok(decompose(c)?.components.into_iter().map(|p| (p.atom, p.dg_atom)).collect())
}

/// C is irreducible iff it has exactly one component.
pub fn is_irreducible(c: &FinCocomCoalgebra) -> Result<bool> {
    Ok(decompose(c)?.len() == 1)
}

fn reduced_delta(c: &FinCocomCoalgebra, atom: &Vector, i: usize) -> Tensor2 {
    let mut out = c.delta_basis(i).clone();
    for (j, t) in atom {
        out.add_term((i, *j), -t.clone());
        out.add_term((*j, i), -t.clone());
    }
    let e = c.counit_basis(i);
    if !e.is_zero() {
        for (p, s) in atom {
            for (q, t) in atom {
                out.add_term((*p, *q), e * s * t);
            }
        }
    }
    out
}

/// Number of reduced-comultiplication rounds after which every element of
/// the component vanishes, if at most dim(component) + 1.
pub fn conilpotency_order(c: &FinCocomCoalgebra, comp: &Component) -> Option<usize> {
    let mut cur: LinComb<Vec<usize>> = LinComb::zero();
    for (k, b) in comp.basis.iter().enumerate() {
        for (i, x) in b {
            cur.add_term(vec![k, *i], x.clone());
        }
    }
    for round in 1..=comp.dim() + 1 {
        cur = cur.map_linear(|w| {
            let (last, head) = w.split_last().expect("nonempty");
            reduced_delta(c, &comp.atom, *last).iter().map(|((p, q), t)| ([head, &[*p, *q]].concat(), t.clone())).collect()
        });
        if cur.is_zero() {
            return Some(round);
        }
    }
    None
}

/// Checks every structural claim about a decomposition of `c`.
pub fn check_decomposition(c: &FinCocomCoalgebra, dec: &Decomposition) -> Result<Verdict> {
    let dual = dualize(c)?;
    let a = dual.algebra();
    let mut v = Verdict::new();
    let mut total = Vector::zero();
    for (r, p) in dec.components.iter().enumerate() {
        v.tick();
        if p.idempotent.keys().any(|i| c.degree(*i) != 0) {
            v.fail(format!("idempotent {r} degree"), a.show(&p.idempotent));
        }
        for (s, q) in dec.components.iter().enumerate() {
            v.tick();
            let prod = a.mul(&p.idempotent, &q.idempotent);
            let expect = if r == s { p.idempotent.clone() } else { Vector::zero() };
            if prod != expect {
                v.fail(format!("e{r}·e{s}"), a.show(&prod));
            }
        }
        total.add(&p.idempotent);
    }
    v.tick();
    if &total != a.unit() {
        v.fail("Σ e = 1", a.show(&total));
    }
    v.tick();
    let all = Subspace::spanned_by(c.dim(), dec.components.iter().flat_map(|p| p.basis.iter().map(to_sparse)));
    let sum: usize = dec.dims().iter().sum();
    if all.dim() != c.dim() || sum != c.dim() {
        v.fail("components span C with trivial intersections", format!("span {} / sum {} / dim {}", all.dim(), sum, c.dim()));
    }
    for (r, p) in dec.components.iter().enumerate() {
        let span = Subspace::spanned_by(c.dim(), p.basis.iter().map(to_sparse));
        for b in &p.basis {
            v.tick();
            let d = c.delta(b);
            let mut proj = Tensor2::zero();
            for ((x, y), t) in &d {
                let px = coaction(c, &p.idempotent, &Vector::single(*x));
                let py = coaction(c, &p.idempotent, &Vector::single(*y));
                for (i, s) in &px {
                    for (j, u) in &py {
                        proj.add_term((*i, *j), t * s * u);
                    }
                }
            }
            if proj != d {
                v.fail(format!("component {r} is not a sub-coalgebra"), c.show(b));
            }
            v.tick();
            if !span.contains(&to_sparse(&c.d(b))) {
                v.fail(format!("component {r} is not closed under d"), c.show(b));
            }
        }
        v.tick();
        let aa = &p.atom;
        let mut sq = Tensor2::zero();
        for (i, s) in aa {
            for (j, t) in aa {
                sq.add_term((*i, *j), s * t);
            }
        }
        if c.delta(aa) != sq || c.counit(aa) != int(1) || !span.contains(&to_sparse(aa)) {
            v.fail(format!("atom of component {r}"), c.show(aa));
        }
        v.tick();
        // exactly one atom: e·A₀ modulo the nilradical is one-dimensional
        let zero_deg: Vec<usize> = (0..c.dim()).filter(|i| c.degree(*i) == 0).collect();
        let ideal: Vec<Vector> = zero_deg.iter().map(|j| a.mul(&p.idempotent, &Vector::single(*j))).collect();
        let gram: Vec<Vec<Scalar>> = ideal.iter().map(|y| ideal.iter().map(|w| trace_on(a, &zero_deg, &a.mul(y, w))).collect()).collect();
        let rank = SparseMatrix::from_dense(&gram).rank();
        if rank != 1 {
            v.fail(format!("component {r} has {rank} atoms"), a.show(&p.idempotent));
        }
        v.tick();
        if conilpotency_order(c, p).is_none() {
            v.fail(format!("component {r} is not conilpotent"), format!("dim {}", p.dim()));
        }
    }
    Ok(v)
}

/// The function on components induced by a coalgebra map: component r of the
/// source lands in component φ(r) of the target.
pub fn component_map(src: &Decomposition, tgt_coalgebra: &FinCocomCoalgebra, tgt: &Decomposition, f: &CoalgebraMap) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (r, p) in src.components.iter().enumerate() {
        let hits: Vec<usize> = tgt
            .components
            .iter()
            .enumerate()
            .filter(|(_, q)| p.basis.iter().any(|b| !coaction(tgt_coalgebra, &q.idempotent, &f.apply(b)).is_zero()))
            .map(|(s, _)| s)
            .collect();
        match hits.as_slice() {
            [s] => out.push(*s),
            _ => return Err(Error::Invalid(format!("source component {r} meets target components {hits:?}"))),
        }
    }
    Ok(out)
}
