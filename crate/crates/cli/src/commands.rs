use std::collections::BTreeMap;

use koszul_core::algcog::{bar_algebra, check_uainf, cobar_bar, examples, koszul_complex_check, UAInfStructure, UnitalAssocAlgebra};
use koszul_core::cocom::{check_decomposition, conilpotency_order, decompose, dualize};
use koszul_core::linhom::json::complex_from_json;
use koszul_core::linhom::{format_scalar, ChainComplex};
use koszul_core::liecom::{bar_lie, check_curved_lie, cobar_com, UnitalCommAlgebra};
use koszul_core::nscoop::{check_curved_cooperad, koszul_dual};
use koszul_core::nsoperad::{Presentation, TruncatedDgOperad, Window};
use koszul_core::opbarcobar::{bar_operad, check_op_twisting, cobar_operad, operad_morphism_to_twisting, twisting_to_operad_morphism, OpTwisting};
use koszul_core::{Error, Result};
use serde_json::{json, Value};

use crate::report::verdict_json;
use crate::schema::{parse_poly, InputFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    KoszulDual,
    BarOperad,
    CobarOperad,
    CheckTwisting,
    BarAlg,
    CobarCoalg,
    CheckUainf,
    CheckCurvedLie,
    BarLie,
    CobarCom,
    Homology,
    VerifyKoszul,
    DecomposeCocom,
    VerifySuite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::KoszulDual => "koszul-dual",
            Command::BarOperad => "bar-operad",
            Command::CobarOperad => "cobar-operad",
            Command::CheckTwisting => "check-twisting",
            Command::BarAlg => "bar-alg",
            Command::CobarCoalg => "cobar-coalg",
            Command::CheckUainf => "check-uainf",
            Command::CheckCurvedLie => "check-curved-lie",
            Command::BarLie => "bar-lie",
            Command::CobarCom => "cobar-com",
            Command::Homology => "homology",
            Command::VerifyKoszul => "verify-koszul",
            Command::DecomposeCocom => "decompose-cocom",
            Command::VerifySuite => "verify-suite",
        }
    }

    pub fn needs_input(self) -> bool {
        self != Command::VerifySuite
    }
}

/// Truncation window shared by all commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowSpec {
    pub max_arity: usize,
    pub max_weight: usize,
    pub degree_min: i64,
    pub degree_max: i64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec { max_arity: 3, max_weight: 3, degree_min: -4, degree_max: 4 }
    }
}

impl WindowSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_arity == 0 || self.max_weight == 0 {
            return Err(Error::Schema("window bounds must be positive".into()));
        }
        if self.degree_min > self.degree_max {
            return Err(Error::Schema(format!("degree range {}..{} is empty", self.degree_min, self.degree_max)));
        }
        Ok(())
    }

    pub fn window(&self) -> Window {
        Window::new(self.max_arity, self.max_weight)
    }

    /// Window for the operad side of bar constructions and twisting morphisms.
    pub fn operad_window(&self) -> Window {
        Window::new(self.max_arity + 2, self.max_weight + 3)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_arity": self.max_arity,
            "max_weight": self.max_weight,
            "degree_min": self.degree_min,
            "degree_max": self.degree_max,
        })
    }
}

fn presentation(input: &InputFile) -> Result<Presentation> {
    match input {
        InputFile::Presentation(p) => p.build(),
        other => Err(Error::Schema(format!("expected a presentation, found {}", other.kind()))),
    }
}

fn algebra(input: &InputFile) -> Result<UnitalAssocAlgebra> {
    match input {
        InputFile::Algebra(a) => a.build(),
        other => Err(Error::Schema(format!("expected an algebra, found {}", other.kind()))),
    }
}

fn betti(c: &ChainComplex, w: &WindowSpec) -> Result<Value> {
    let (lo, hi) = c.window.unwrap_or((w.degree_min - 1, w.degree_max + 1));
    let range = w.degree_min.max(lo + 1)..=w.degree_max.min(hi - 1);
    let h = c.homology(range)?;
    Ok(h.iter().map(|(d, g)| (d.to_string(), json!(g.betti))).collect::<serde_json::Map<_, _>>().into())
}

/// Runs one command; the boolean is the overall verdict.
pub fn execute(cmd: Command, input: Option<&InputFile>, w: &WindowSpec) -> Result<(Value, bool)> {
    let need = || input.ok_or_else(|| Error::Schema(format!("{} needs --input", cmd.name())));
    match cmd {
        Command::KoszulDual => {
            let p = presentation(need()?)?;
            let k = koszul_dual(&p, w.window())?;
            let c = &k.dual;
            let g = c.cogens();
            let mut dims = Vec::new();
            for n in 0..=w.max_arity {
                for wt in 1..=w.max_weight {
                    let d = c.basis(n, wt)?.len();
                    if d > 0 {
                        dims.push(json!({"arity": n, "weight": wt, "dim": d}));
                    }
                }
            }
            let mut quadratic: BTreeMap<String, Vec<String>> = BTreeMap::new();
            for n in 0..=w.max_arity {
                if w.max_weight >= 2 {
                    for key in c.basis(n, 2)? {
                        quadratic.entry(n.to_string()).or_default().push(g.show_poly(&c.element(&key)?));
                    }
                }
            }
            let s2qr: BTreeMap<String, Vec<String>> =
                k.s2qr.iter().map(|(n, comp)| (n.to_string(), comp.space.basis_vectors().iter().map(|v| g.show_poly(&comp.element(v))).collect())).collect();
            let curvature: BTreeMap<String, String> = c.theta_table().iter().map(|(t, x)| (g.show(t), format_scalar(x))).collect();
            let phi: BTreeMap<String, String> = c.phi_table().iter().map(|(t, x)| (g.show(t), g.show_poly(x))).collect();
            let v = check_curved_cooperad(c)?;
            Ok((json!({"dims": dims, "quadratic_part": quadratic, "s2qr": s2qr, "curvature": curvature, "coderivation": phi, "curved_cooperad": verdict_json(&v)}), v.passed()))
        }
        Command::BarOperad => {
            let p = TruncatedDgOperad::quotient_by_ideal(&presentation(need()?)?, w.operad_window())?;
            let b = bar_operad(&p, w.window())?;
            let mut dims = Vec::new();
            for n in 0..=w.max_arity {
                for wt in 1..=w.max_weight {
                    let d = b.coop.basis(n, wt)?.len();
                    if d > 0 {
                        dims.push(json!({"arity": n, "weight": wt, "dim": d}));
                    }
                }
            }
            let theta = format_scalar(&b.coop.theta_tree(&koszul_core::Tree::corolla(b.v)));
            let v = b.coop.check_curved()?;
            Ok((json!({"dims": dims, "theta_v": theta, "curvature_identity": verdict_json(&v)}), v.passed()))
        }
        Command::CobarOperad => {
            let k = koszul_dual(&presentation(need()?)?, w.window())?;
            let om = cobar_operad(&k.dual, w.window())?;
            let dims: BTreeMap<String, usize> = (0..=w.max_arity).map(|n| (n.to_string(), om.operad.dim(n))).collect();
            let v = om.operad.check_square_zero()?;
            Ok((json!({"dims": dims, "generators": om.keys.len(), "square_zero": verdict_json(&v)}), v.passed()))
        }
        Command::CheckTwisting => {
            let InputFile::Twisting(tw) = need()? else {
                return Err(Error::Schema(format!("expected a twisting file, found {}", need()?.kind())));
            };
            let pres = tw.presentation.build()?;
            let k = koszul_dual(&pres, w.window())?;
            let p = TruncatedDgOperad::quotient_by_ideal(&pres, w.operad_window())?;
            let mut alpha = BTreeMap::new();
            for (i, (key, img)) in tw.alpha.iter().enumerate() {
                let x = k.dual.cogens().parse(key).map_err(|e| Error::Schema(format!("alpha[{i}]: {e}")))?;
                alpha.insert(x, p.reduce(&parse_poly(p.generators(), img, &format!("alpha[{i}]"))?)?);
            }
            let t = OpTwisting::new(&k.dual, &p, alpha)?;
            let v = check_op_twisting(&t)?;
            if !v.passed() {
                return Ok((json!({"twisting_equation": verdict_json(&v)}), false));
            }
            let om = cobar_operad(&k.dual, w.window())?;
            let f = twisting_to_operad_morphism(&t, &om)?;
            let back = operad_morphism_to_twisting(&f, &k.dual, &om, &p)?;
            let round_trip = back.alpha == t.alpha;
            let morphism = koszul_core::opbarcobar::check_operad_morphism(&f, &om, &p)?;
            let ok = v.passed() && round_trip && morphism.passed();
            Ok((json!({"twisting_equation": verdict_json(&v), "operad_morphism": verdict_json(&morphism), "round_trip": round_trip}), ok))
        }
        Command::BarAlg => {
            let a = algebra(need()?)?;
            let b = bar_algebra(&a, w.max_weight)?;
            let dims: BTreeMap<String, usize> = (0..=w.max_weight).map(|n| (n.to_string(), b.alphabet().words(n).len())).collect();
            let v = b.check();
            let c = b.to_coalgebra()?;
            let cv = c.check();
            Ok((json!({"word_dims": dims, "uainf_relation": verdict_json(&v), "curved_coalgebra": verdict_json(&cv)}), v.passed() && cv.passed()))
        }
        Command::CobarCoalg => {
            let a = algebra(need()?)?;
            let om = cobar_bar(&a, w.max_weight)?;
            let v = om.check_square_zero();
            let h = if v.passed() { betti(&om.complex()?, w)? } else { Value::Null };
            Ok((json!({"basis": om.basis().len(), "square_zero": verdict_json(&v), "betti": h}), v.passed()))
        }
        Command::CheckUainf => {
            let s: UAInfStructure = match need()? {
                InputFile::Algebra(a) => UAInfStructure::from_algebra(&a.build()?),
                InputFile::Builtin(b) => match b.name.as_str() {
                    "nonassociative_ainf" => examples::nonassociative_ainf()?,
                    "homotopy_unital" => examples::homotopy_unital()?,
                    other => return Err(Error::Schema(format!("unknown builtin {other:?}"))),
                },
                other => return Err(Error::Schema(format!("expected an algebra or builtin, found {}", other.kind()))),
            };
            let v = check_uainf(&s, w.max_weight)?;
            Ok((json!({"dim": s.dim(), "uainf_relation": verdict_json(&v)}), v.passed()))
        }
        Command::CheckCurvedLie => {
            let InputFile::CurvedLieCoalgebra(l) = need()? else {
                return Err(Error::Schema(format!("expected a curved Lie coalgebra, found {}", need()?.kind())));
            };
            let c = l.build()?;
            let v = check_curved_lie(&c);
            Ok((json!({"dim": c.dim(), "curved_lie": verdict_json(&v)}), v.passed()))
        }
        Command::BarLie => {
            let ua = UnitalCommAlgebra::new(algebra(need()?)?)?;
            let b = bar_lie(&ua, w.max_weight)?;
            let mut dims: BTreeMap<String, usize> = BTreeMap::new();
            for wt in b.weights() {
                *dims.entry(wt.to_string()).or_default() += 1;
            }
            let v = check_curved_lie(&b.coalgebra);
            let basis: Vec<String> = b.coalgebra.labels().to_vec();
            Ok((json!({"dims_by_weight": dims, "basis": basis, "curved_lie": verdict_json(&v)}), v.passed()))
        }
        Command::CobarCom => {
            let ua = UnitalCommAlgebra::new(algebra(need()?)?)?;
            let b = bar_lie(&ua, w.max_weight)?;
            let om = cobar_com(&b.coalgebra, b.weights(), w.max_weight)?;
            let v = om.check_square_zero();
            let h = if v.passed() { betti(&om.complex()?, w)? } else { Value::Null };
            Ok((json!({"monomials": om.basis().len(), "square_zero": verdict_json(&v), "betti": h}), v.passed()))
        }
        Command::Homology => {
            let InputFile::ChainComplex(body) = need()? else {
                return Err(Error::Schema(format!("expected a chain complex, found {}", need()?.kind())));
            };
            let c = complex_from_json(&body.to_json())?;
            let h = c.homology(w.degree_min..=w.degree_max)?;
            let betti: serde_json::Map<_, _> = h.iter().map(|(d, g)| (d.to_string(), json!(g.betti))).collect();
            Ok((json!({"betti": betti}), true))
        }
        Command::VerifyKoszul => {
            let r = koszul_complex_check(&presentation(need()?)?, w.window())?;
            let pieces = serde_json::to_value(&r.pieces).expect("serializable report");
            Ok((json!({"acyclic": r.acyclic, "pieces": pieces}), r.acyclic))
        }
        Command::DecomposeCocom => {
            let InputFile::CocomCoalgebra(j) = need()? else {
                return Err(Error::Schema(format!("expected a cocommutative coalgebra, found {}", need()?.kind())));
            };
            let c = j.build()?;
            let dual = dualize(&c)?;
            let dec = decompose(&c)?;
            let v = check_decomposition(&c, &dec)?;
            let comps: Vec<Value> = dec
                .components
                .iter()
                .map(|p| {
                    json!({
                        "dim": p.dim(),
                        "atom": c.show(&p.atom),
                        "dg_atom": p.dg_atom,
                        "idempotent": dual.algebra().show(&p.idempotent),
                        "basis": p.basis.iter().map(|b| c.show(b)).collect::<Vec<_>>(),
                        "conilpotency_order": conilpotency_order(&c, p),
                    })
                })
                .collect();
            Ok((json!({"dim": c.dim(), "components": comps, "irreducible": dec.len() == 1, "checks": verdict_json(&v)}), v.passed()))
        }
        Command::VerifySuite => {
            let r = crate::suite::run_suite();
            let ok = r.iter().all(|c| c.passed);
            Ok((json!({"criteria": r.iter().map(|c| c.to_json()).collect::<Vec<_>>()}), ok))
        }
    }
}

/// A full run: report text plus exit status. Errors are reported in the
/// document as well, so every run yields a report.
pub fn run(cmd: Command, input: Option<&str>, w: &WindowSpec) -> (Value, i32) {
    let outcome = w.validate().and_then(|_| {
        let file = match input {
            Some(path) => Some(crate::schema::load(path)?),
            None => None,
        };
        execute(cmd, file.as_ref(), w)
    });
    let code = crate::report::exit_code(&outcome.as_ref().map(|(_, ok)| *ok).map_err(Clone::clone));
    let mut doc = json!({
        "schema_version": crate::schema::SCHEMA_VERSION,
        "command": cmd.name(),
        "window": w.to_json(),
        "input": input,
    });
    match outcome {
        Ok((result, ok)) => {
            doc["status"] = json!(if ok { "pass" } else { "fail" });
            doc["result"] = result;
        }
        Err(e) => {
            doc["status"] = json!("error");
            doc["error"] = json!({"kind": crate::report::error_kind(&e), "message": e.to_string()});
        }
    }
    (doc, code)
}
