//! The verification suite: a fixed list of deterministic checks.

use std::collections::BTreeMap;

use koszul_core::algcog::{check_uainf, counit_graded_qiso, dual_numbers, examples, ground_field, koszul_complex_check, truncated_polynomial, uainf_residual, Alphabet, UAInfStructure, Vector};
use koszul_core::cocom::{check_decomposition, decompose};
use koszul_core::fixtures::{uas_operad, uas_presentation};
use koszul_core::linhom::graded::induced_rank;
use koszul_core::linhom::{frac, int, is_filtered_quasi_iso, is_quasi_iso, ChainComplex, FilteredComplex, GradedMap, GradedSpace, Scalar, SparseMatrix, SparseVec, Subspace};
use koszul_core::liecom::{bar_lie, check_curved_lie, cobar_com, lie_cofree_basis, UnitalCommAlgebra};
use koszul_core::nscoop::koszul_dual;
use koszul_core::nsoperad::Window;
use koszul_core::opbarcobar::{
    bar_operad, canonical_iota, canonical_pi, check_op_twisting, cobar_operad, coop_morphism_to_twisting, operad_morphism_to_twisting, twisting_to_coop_morphism,
    twisting_to_operad_morphism, OpTwisting,
};
use koszul_core::{Error, LinComb, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::verdict_json;
use crate::schema::{load, InputFile};

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: Value,
}

impl CriterionResult {
    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "name": self.name, "passed": self.passed, "details": self.details})
    }
}

type Check = fn() -> Result<(bool, Value)>;

pub const CRITERIA: [(usize, &str, Check); 9] = [
    (1, "cobar of uAs¡ squares to zero (arity ≤ 4, weight ≤ 4)", cobar_square_zero),
    (2, "bar curvature identity on B_c(uAs) (arity ≤ 3, weight ≤ 3)", bar_curvature),
    (3, "Koszul dual of uAs in arity 3", koszul_dual_uas),
    (4, "twisting morphism bijections round-trip", twisting_round_trips),
    (5, "desk-scale Koszulness of uAs", koszulness),
    (6, "uA∞ relation checker", uainf),
    (7, "curved Lie suite", curved_lie),
    (8, "decomposition of cocommutative coalgebras", decomposition),
    (9, "filtered quasi-isomorphisms agree with direct homology", filtration_engine),
];

/// Runs every criterion, concurrently; the result order is fixed.
pub fn run_suite() -> Vec<CriterionResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|(id, name, f)| (*id, *name, s.spawn(f))).collect();
        handles
            .into_iter()
            .map(|(id, name, h)| {
                let (passed, details) = match h.join() {
                    Ok(Ok(r)) => r,
                    Ok(Err(e)) => (false, json!({"error": e.to_string()})),
                    Err(_) => (false, json!({"error": "panicked"})),
                };
                CriterionResult { id, name, passed, details }
            })
            .collect()
    })
}

pub fn cobar_square_zero() -> Result<(bool, Value)> {
    let w = Window::new(4, 4);
    let k = koszul_dual(&uas_presentation(), w)?;
    let om = cobar_operad(&k.dual, w)?;
    let v = om.operad.check_square_zero()?;
    Ok((v.passed(), json!({"generators": om.keys.len(), "square_zero": verdict_json(&v)})))
}

pub fn bar_curvature() -> Result<(bool, Value)> {
    let p = uas_operad(Window::new(5, 6))?;
    let b = bar_operad(&p, Window::new(3, 3))?;
    let v = b.coop.check_curved()?;
    Ok((v.passed(), json!({"curvature_identity": verdict_json(&v)})))
}

pub fn koszul_dual_uas() -> Result<(bool, Value)> {
    let k = koszul_dual(&uas_presentation(), Window::new(4, 4))?;
    let c = &k.dual;
    let g = c.cogens();
    let keys = c.basis(3, 2)?;
    let tree = |s: &str| g.parse(s);
    let (l, r) = (tree("(smu smu |)")?, tree("(smu | smu)")?);
    let spanned = keys.len() == 1 && {
        let x = c.element(&keys[0])?;
        x.len() == 2 && x.coeff(&l) != int(0) && x.coeff(&l) == -x.coeff(&r)
    };
    let tl = c.theta_tree(&tree("(smu sxi |)")?);
    let tr = c.theta_tree(&tree("(smu | sxi)")?);
    let ok = spanned && tl == int(-1) && tr == int(-1);
    let shown: Vec<String> = keys.iter().map(|k| c.element(k).map(|x| g.show_poly(&x))).collect::<Result<_>>()?;
    Ok((ok, json!({"arity3_weight2_dim": keys.len(), "arity3_weight2_basis": shown, "theta_left": tl.to_string(), "theta_right": tr.to_string()})))
}

fn kappa_family<'a>(k: &'a koszul_core::nscoop::KoszulDualResult, p: &'a koszul_core::nsoperad::TruncatedDgOperad, a: Scalar, b: Scalar) -> Result<OpTwisting<'a, koszul_core::nsoperad::TruncatedDgOperad>> {
    let g = k.dual.cogens();
    let pg = p.generators();
    let mut alpha = BTreeMap::new();
    alpha.insert(g.parse("smu")?, LinComb::term(pg.parse("mu")?, a));
    alpha.insert(g.parse("sxi")?, LinComb::term(pg.parse("xi")?, b));
    OpTwisting::new(&k.dual, p, alpha)
}

/// Nonzero rational with small numerator and denominator.
pub fn random_unit(rng: &mut ChaCha8Rng) -> Scalar {
    let n = loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            break n;
        }
    };
    frac(n, rng.gen_range(1..=9))
}

pub fn twisting_round_trips() -> Result<(bool, Value)> {
    let w = Window::new(3, 3);
    let k = koszul_dual(&uas_presentation(), w)?;
    let p = uas_operad(Window::new(5, 6))?;
    let om = cobar_operad(&k.dual, w)?;
    let bar = bar_operad(&p, w)?;
    let both = |t: &OpTwisting<koszul_core::nsoperad::TruncatedDgOperad>| -> Result<bool> {
        let f = twisting_to_operad_morphism(t, &om)?;
        let a = operad_morphism_to_twisting(&f, &k.dual, &om, &p)?;
        let g = twisting_to_coop_morphism(t, &bar)?;
        let b = coop_morphism_to_twisting(&g, &k.dual, &bar, &p)?;
        Ok(check_op_twisting(t)?.passed() && a.alpha == t.alpha && b.alpha == t.alpha)
    };
    let kappa = both(&kappa_family(&k, &p, int(1), int(1))?)?;

    let iota = canonical_iota(&k.dual, &om)?;
    let fi = twisting_to_operad_morphism(&iota, &om)?;
    let iota_ok = check_op_twisting(&iota)?.passed() && operad_morphism_to_twisting(&fi, &k.dual, &om, &om.operad)?.alpha == iota.alpha;

    let pi = canonical_pi(&p, &bar)?;
    let fp = twisting_to_coop_morphism(&pi, &bar)?;
    // f_π lives on the windowed part of B_c(uAs), so compare α there
    let windowed: BTreeMap<_, _> = pi.alpha.iter().filter(|(k, _)| fp.images.contains_key(*k)).map(|(k, v)| (k.clone(), v.clone())).collect();
    let pi_ok = check_op_twisting(&pi)?.passed() && coop_morphism_to_twisting(&fp, &bar.coop, &bar, &p)?.alpha == windowed;

    // perturb (μ, ξ) ↦ (a μ, b ξ) at random, then project onto the twisting locus ab = 1
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut random_ok = 0;
    let mut perturbed_fail = 0;
    let samples = 20;
    for _ in 0..samples {
        let a = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        if &a * &b != int(1) && !check_op_twisting(&kappa_family(&k, &p, a.clone(), b)?)?.passed() {
            perturbed_fail += 1;
        }
        let inv = int(1) / &a;
        if both(&kappa_family(&k, &p, a, inv)?)? {
            random_ok += 1;
        }
    }
    let ok = kappa && iota_ok && pi_ok && random_ok == samples;
    Ok((ok, json!({"kappa": kappa, "iota": iota_ok, "pi": pi_ok, "random_samples": samples, "random_round_trips": random_ok, "perturbations_rejected": perturbed_fail})))
}

pub fn koszulness() -> Result<(bool, Value)> {
    let r = koszul_complex_check(&uas_presentation(), Window::new(2, 3))?;
    let mut ok = r.acyclic;
    let mut counit = BTreeMap::new();
    for (name, a) in [("K", ground_field()), ("K[x]/(x^2)", dual_numbers())] {
        let q = counit_graded_qiso(&a, 3, 0..=3)?;
        ok &= q.verdict;
        counit.insert(name, json!({"verdict": q.verdict, "pieces": q.pieces.len(), "failing": q.failing()}));
    }
    Ok((ok, json!({"koszul_complex_acyclic": r.acyclic, "koszul_pieces": r.pieces.len(), "counit": counit})))
}

/// (xy)z − x(yz) from the binary part of a uA∞ structure.
pub fn associator(s: &UAInfStructure, x: u32, y: u32, z: u32) -> Vector {
    let g2 = |u: &Vector, v: &Vector| -> Vector {
        let mut out = Vector::zero();
        for (i, a) in u {
            for (j, b) in v {
                out.add_scaled(&s.gamma(&[*i as u32, *j as u32]), &(a * b));
            }
        }
        out
    };
    let e = |i: u32| Vector::single(i as usize);
    let mut r = g2(&g2(&e(x), &e(y)), &e(z));
    r.sub(&g2(&e(x), &g2(&e(y), &e(z))));
    r
}

pub fn uainf() -> Result<(bool, Value)> {
    let mut strict = true;
    for a in [ground_field(), dual_numbers(), truncated_polynomial(3)] {
        strict &= check_uainf(&UAInfStructure::from_algebra(&a), 4)?.passed();
    }
    let s = examples::nonassociative_ainf()?;
    let full = check_uainf(&s, 4)?;
    let broken = s.without_arity(3);
    let c = broken.to_coalgebra(3)?;
    let residual: Vector = uainf_residual(&broken, &c, &[1, 1, 1]).iter().map(|(i, x)| (*i as usize, x.clone())).collect();
    let assoc = associator(&s, 1, 1, 1);
    let broken_v = check_uainf(&broken, 3)?;
    let hu = check_uainf(&examples::homotopy_unital()?, 4)?;
    let ok = strict && full.passed() && residual == assoc && !assoc.is_zero() && !broken_v.passed() && hu.passed();
    Ok((
        ok,
        json!({
            "strict_algebras": strict,
            "nonassociative_with_gamma3": verdict_json(&full),
            "residual_equals_associator": residual == assoc,
            "without_gamma3": verdict_json(&broken_v),
            "homotopy_unital": verdict_json(&hu),
        }),
    ))
}

/// Dimensions of the free graded Lie algebra on letters of the given degrees,
/// by weight and degree, from T(W) = U(L) ≅ S(L) (Poincaré–Birkhoff–Witt).
pub fn pbw_lie_dims(degrees: &[i64], max_weight: usize) -> BTreeMap<(usize, i64), i128> {
    type Series = BTreeMap<(usize, i64), i128>;
    let mut tensor: Series = BTreeMap::from([((0, 0), 1)]);
    let mut words: Series = BTreeMap::from([((0, 0), 1)]);
    for _ in 0..max_weight {
        let mut next = Series::new();
        for ((n, d), c) in &words {
            for g in degrees {
                *next.entry((n + 1, d + g)).or_default() += c;
            }
        }
        for (k, c) in &next {
            *tensor.entry(*k).or_default() += c;
        }
        words = next;
    }
    let binom = |n: i128, k: i128| -> i128 { (0..k).fold(1i128, |acc, i| acc * (n - i) / (i + 1)) };
    let mut lie: Series = BTreeMap::new();
    for n in 1..=max_weight {
        let mut sym: Series = BTreeMap::from([((0, 0), 1)]);
        for ((m, d), l) in lie.iter().filter(|((_, _), l)| **l > 0) {
            let mut out = Series::new();
            for ((a, b), c) in &sym {
                let mut k = 0i128;
                while a + m * k as usize <= n {
                    let coeff = if d % 2 == 0 { binom(l + k - 1, k) } else { binom(*l, k) };
                    if coeff == 0 {
                        break;
                    }
                    *out.entry((a + m * k as usize, b + d * k as i64)).or_default() += c * coeff;
                    k += 1;
                }
            }
            sym = out;
        }
        for ((m, d), c) in &tensor {
            if *m == n {
                let l = c - sym.get(&(n, *d)).copied().unwrap_or(0);
                if l != 0 {
                    lie.insert((n, *d), l);
                }
            }
        }
    }
    lie
}

pub fn curved_lie() -> Result<(bool, Value)> {
    let mut ok = true;
    let mut bars = BTreeMap::new();
    for (name, a) in [("K", ground_field()), ("K[x]/(x^2)", dual_numbers())] {
        let b = bar_lie(&UnitalCommAlgebra::new(a)?, 4)?;
        let v = check_curved_lie(&b.coalgebra);
        let om = cobar_com(&b.coalgebra, b.weights(), 4)?;
        let sq = om.check_square_zero();
        ok &= v.passed() && sq.passed();
        bars.insert(name, json!({"dim": b.coalgebra.dim(), "curved_lie": verdict_json(&v), "cobar_square_zero": verdict_json(&sq)}));
    }
    let mut profiles = Vec::new();
    for degrees in [vec![0, 0], vec![1], vec![0, 1], vec![1, 2]] {
        let labels = (0..degrees.len()).map(|i| format!("w{i}")).collect();
        let alphabet = Alphabet::new(labels, degrees.clone())?;
        let oracle = pbw_lie_dims(&degrees, 4);
        let mut found: BTreeMap<(usize, i64), i128> = BTreeMap::new();
        for n in 1..=4 {
            for w in lie_cofree_basis(&alphabet, n)? {
                *found.entry((n, alphabet.word_degree(&w))).or_default() += 1;
            }
        }
        let agree = found == oracle;
        ok &= agree;
        let dims: Vec<usize> = (1..=4).map(|n| found.iter().filter(|((m, _), _)| *m == n).map(|(_, c)| *c as usize).sum()).collect();
        profiles.push(json!({"degrees": degrees, "dims_by_weight": dims, "matches_oracle": agree}));
    }
    Ok((ok, json!({"bar_constructions": bars, "cofree_profiles": profiles})))
}

fn cocom_fixture(name: &str) -> Result<koszul_core::cocom::FinCocomCoalgebra> {
    match load(name)? {
        InputFile::CocomCoalgebra(c) => c.build(),
        other => Err(Error::Schema(format!("{name}: expected a cocommutative coalgebra, found {}", other.kind()))),
    }
}

pub fn decomposition() -> Result<(bool, Value)> {
    let two = cocom_fixture("two_atoms.json")?;
    let d2 = decompose(&two)?;
    let v2 = check_decomposition(&two, &d2)?;
    let three = cocom_fixture("three_grouplikes.json")?;
    let d3 = decompose(&three)?;
    let v3 = check_decomposition(&three, &d3)?;
    let gauss = decompose(&cocom_fixture("gaussian_dual.json")?);
    let non_split = matches!(gauss, Err(Error::NonSplitSemisimple(_)));
    let ok = d2.len() == 2 && v2.passed() && d3.len() == 3 && v3.passed() && non_split;
    Ok((
        ok,
        json!({
            "two_atoms": {"components": d2.dims(), "checks": verdict_json(&v2)},
            "three_grouplikes": {"components": d3.dims(), "checks": verdict_json(&v3)},
            "gaussian_dual": match gauss { Ok(d) => json!({"components": d.dims()}), Err(e) => json!({"error": e.to_string()}) },
        }),
    ))
}

/// A complex given in a basis adapted to its filtration: `levels[d][i]` is the
/// filtration level of basis vector i in degree d (nondecreasing), and
/// `d[deg]` is the dense matrix of d: C_deg → C_{deg−1}.
#[derive(Clone, Debug)]
pub struct AdaptedComplex {
    pub levels: BTreeMap<i64, Vec<usize>>,
    pub d: BTreeMap<i64, Vec<Vec<Scalar>>>,
}

/// A filtered chain map between adapted complexes, `f[deg]` dense (target × source).
#[derive(Clone, Debug)]
pub struct FilteredSample {
    pub src: AdaptedComplex,
    pub tgt: AdaptedComplex,
    pub f: BTreeMap<i64, Vec<Vec<Scalar>>>,
    pub num_levels: usize,
}

fn dim(levels: &BTreeMap<i64, Vec<usize>>, d: i64) -> usize {
    levels.get(&d).map_or(0, Vec::len)
}

fn sparse_of(m: &[Vec<Scalar>], rows: usize, cols: usize) -> SparseMatrix {
    let mut out = SparseMatrix::zero(rows, cols);
    for (r, row) in m.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            if *x != int(0) {
                out.set(r, c, x.clone());
            }
        }
    }
    out
}

fn matmul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], inner: usize, cols: usize) -> Vec<Vec<Scalar>> {
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect()).collect()
}

impl AdaptedComplex {
    pub fn space(&self) -> GradedSpace {
        GradedSpace::with_dims(self.levels.iter().map(|(d, l)| (*d, l.len())))
    }

    pub fn filtered(&self, num_levels: usize) -> Result<FilteredComplex> {
        let space = self.space();
        let blocks = self.d.iter().map(|(deg, m)| (*deg, sparse_of(m, dim(&self.levels, deg - 1), dim(&self.levels, *deg)))).collect();
        let differential = GradedMap::new(space.clone(), space.clone(), -1, blocks)?;
        let levels = (0..num_levels)
            .map(|n| {
                self.levels
                    .iter()
                    .map(|(deg, ls)| {
                        let vs = ls.iter().enumerate().filter(|(_, l)| **l <= n).map(|(i, _)| SparseVec::from([(i, int(1))]));
                        (*deg, Subspace::spanned_by(ls.len(), vs))
                    })
                    .collect()
            })
            .collect();
        FilteredComplex::new(space, differential, levels)
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        let blocks = self.d.iter().map(|(deg, m)| (*deg, sparse_of(m, dim(&self.levels, deg - 1), dim(&self.levels, *deg)))).collect();
        ChainComplex::new(self.space(), blocks)
    }

    /// The graded piece of level n: the level-n coordinates with the diagonal block of d.
    pub fn piece(&self, n: usize) -> (BTreeMap<i64, Vec<usize>>, ChainComplex) {
        let idx: BTreeMap<i64, Vec<usize>> = self.levels.iter().map(|(d, ls)| (*d, (0..ls.len()).filter(|i| ls[*i] == n).collect())).collect();
        let space = GradedSpace::with_dims(idx.iter().map(|(d, v)| (*d, v.len())));
        let mut blocks = BTreeMap::new();
        for (deg, m) in &self.d {
            let (Some(cols), Some(rows)) = (idx.get(deg), idx.get(&(deg - 1))) else { continue };
            if cols.is_empty() || rows.is_empty() {
                continue;
            }
            let sub: Vec<Vec<Scalar>> = rows.iter().map(|r| cols.iter().map(|c| m[*r][*c].clone()).collect()).collect();
            blocks.insert(*deg, sparse_of(&sub, rows.len(), cols.len()));
        }
        (idx, ChainComplex::new(space, blocks).expect("diagonal block of a filtered differential"))
    }
}

impl FilteredSample {
    pub fn map(&self) -> Result<GradedMap> {
        let blocks = self.f.iter().map(|(deg, m)| (*deg, sparse_of(m, dim(&self.tgt.levels, *deg), dim(&self.src.levels, *deg)))).collect();
        GradedMap::new(self.src.space(), self.tgt.space(), 0, blocks)
    }

    pub fn total_dim(&self) -> usize {
        self.src.levels.values().map(Vec::len).sum::<usize>() + self.tgt.levels.values().map(Vec::len).sum::<usize>()
    }
}

/// Elementary summand: a single vector, or a pair x ↦ y with d x = y.
#[derive(Clone, Copy, Debug)]
enum Piece {
    Single { deg: i64, level: usize },
    Pair { deg: i64, top: usize, bottom: usize },
}

/// Upper unitriangular change of basis respecting levels, and its inverse.
fn random_filtered_automorphism(levels: &[usize], rng: &mut ChaCha8Rng) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
    let n = levels.len();
    let mut p = vec![vec![int(0); n]; n];
    for i in 0..n {
        p[i][i] = int(1);
        for j in i + 1..n {
            if levels[i] <= levels[j] && rng.gen_bool(0.4) {
                p[i][j] = int(rng.gen_range(-2..=2));
            }
        }
    }
    // back substitution for P⁻¹, column by column
    let mut inv = vec![vec![int(0); n]; n];
    for c in 0..n {
        for r in (0..n).rev() {
            let mut x = if r == c { int(1) } else { int(0) };
            for k in r + 1..n {
                x -= &p[r][k] * &inv[k][c];
            }
            inv[r][c] = x;
        }
    }
    (p, inv)
}

/// Builds an adapted complex from summands, conjugated by random filtered automorphisms.
/// Returns the complex together with the conjugating matrices per degree.
fn assemble(pieces: &[Piece], rng: &mut ChaCha8Rng) -> (AdaptedComplex, BTreeMap<i64, (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)>, Vec<Vec<(i64, usize)>>) {
    // coordinates of each piece, before sorting by level
    let mut raw: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new(); // degree → (level, piece id)
    for (k, p) in pieces.iter().enumerate() {
        match *p {
            Piece::Single { deg, level } => raw.entry(deg).or_default().push((level, k)),
            Piece::Pair { deg, top, bottom } => {
                raw.entry(deg).or_default().push((top, k));
                raw.entry(deg - 1).or_default().push((bottom, k));
            }
        }
    }
    for v in raw.values_mut() {
        v.sort();
    }
    let mut coords: Vec<Vec<(i64, usize)>> = vec![Vec::new(); pieces.len()];
    for (deg, v) in &raw {
        for (i, (_, k)) in v.iter().enumerate() {
            coords[*k].push((*deg, i));
        }
    }
    let levels: BTreeMap<i64, Vec<usize>> = raw.iter().map(|(d, v)| (*d, v.iter().map(|(l, _)| *l).collect())).collect();
    let mut d0: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
    for deg in levels.keys() {
        if levels.contains_key(&(deg - 1)) {
            d0.insert(*deg, vec![vec![int(0); dim(&levels, *deg)]; dim(&levels, deg - 1)]);
        }
    }
    for (k, p) in pieces.iter().enumerate() {
        if let Piece::Pair { deg, .. } = p {
            let top = coords[k].iter().find(|(d, _)| d == deg).expect("top").1;
            let bottom = coords[k].iter().find(|(d, _)| *d == deg - 1).expect("bottom").1;
            d0.get_mut(deg).expect("block")[bottom][top] = int(1);
        }
    }
    let conj: BTreeMap<i64, _> = levels.iter().map(|(d, l)| (*d, random_filtered_automorphism(l, rng))).collect();
    let d = d0
        .iter()
        .map(|(deg, m)| {
            let (p_low, _) = &conj[&(deg - 1)];
            let (_, p_inv) = &conj[deg];
            let (r, c) = (dim(&levels, deg - 1), dim(&levels, *deg));
            (*deg, matmul(&matmul(p_low, m, r, c), p_inv, c, c))
        })
        .collect();
    (AdaptedComplex { levels, d }, conj, coords)
}

/// A random filtered complex and the projection onto a random sub-collection
/// of its elementary summands, both written in random adapted bases.
pub fn random_filtered_sample(rng: &mut ChaCha8Rng) -> FilteredSample {
    let num_levels = 3;
    let count = rng.gen_range(4..=12);
    let pieces: Vec<Piece> = (0..count)
        .map(|_| {
            let deg = rng.gen_range(0..=3);
            if deg > 0 && rng.gen_bool(0.6) {
                let top = rng.gen_range(0..num_levels);
                Piece::Pair { deg, top, bottom: rng.gen_range(0..=top) }
            } else {
                Piece::Single { deg, level: rng.gen_range(0..num_levels) }
            }
        })
        .collect();
    let keep: Vec<bool> = pieces.iter().map(|_| rng.gen_bool(0.7)).collect();
    let kept: Vec<Piece> = pieces.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| *p).collect();
    let (src, sconj, scoords) = assemble(&pieces, rng);
    let (tgt, tconj, tcoords) = assemble(&kept, rng);
    // projection in the elementary bases, then conjugated
    let mut f = BTreeMap::new();
    for deg in src.levels.keys() {
        let (r, c) = (dim(&tgt.levels, *deg), dim(&src.levels, *deg));
        let mut m = vec![vec![int(0); c]; r];
        let mut t = 0;
        for (k, kept) in keep.iter().enumerate() {
            if *kept {
                for (d, i) in &scoords[k] {
                    if d == deg {
                        let j = tcoords[t].iter().find(|(e, _)| e == deg).expect("same shape").1;
                        m[j][*i] = int(1);
                    }
                }
                t += 1;
            }
        }
        if r > 0 {
            let (p, _) = &tconj[deg];
            let (_, q) = &sconj[deg];
            f.insert(*deg, matmul(&matmul(p, &m, r, c), q, c, c));
        }
    }
    FilteredSample { src, tgt, f, num_levels }
}

pub fn filtration_engine() -> Result<(bool, Value)> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut agree = 0;
    let mut verdicts = Vec::new();
    let samples = 12;
    for _ in 0..samples {
        let s = random_filtered_sample(&mut rng);
        let f = s.map()?;
        let report = is_filtered_quasi_iso(&f, &s.src.filtered(s.num_levels)?, &s.tgt.filtered(s.num_levels)?, 0..=3)?;
        // direct comparison on the diagonal blocks of the adapted bases
        let mut direct = true;
        for n in 0..s.num_levels {
            let (si, sc) = s.src.piece(n);
            let (ti, tc) = s.tgt.piece(n);
            let blocks = s
                .f
                .iter()
                .filter_map(|(deg, m)| {
                    let (cols, rows) = (si.get(deg)?, ti.get(deg)?);
                    (!cols.is_empty() && !rows.is_empty())
                        .then(|| (*deg, sparse_of(&rows.iter().map(|r| cols.iter().map(|c| m[*r][*c].clone()).collect()).collect::<Vec<_>>(), rows.len(), cols.len())))
                })
                .collect();
            let g = GradedMap::new(sc.space.clone(), tc.space.clone(), 0, blocks)?;
            let (hs, ht) = (sc.homology(0..=3)?, tc.homology(0..=3)?);
            for d in 0..=3 {
                let (bs, bt) = (hs[&d].betti, ht[&d].betti);
                direct &= bs == bt && induced_rank(&g, &sc, &tc, d) == bs;
            }
        }
        let total = is_quasi_iso(&f, &s.src.complex()?, &s.tgt.complex()?, 0..=3)?;
        let consistent = direct == report.verdict && (!report.verdict || total);
        if consistent {
            agree += 1;
        }
        verdicts.push(json!({"dim": s.total_dim(), "filtered": report.verdict, "direct": direct, "total": total}));
    }
    Ok((agree == samples, json!({"samples": samples, "agreements": agree, "cases": verdicts})))
}
