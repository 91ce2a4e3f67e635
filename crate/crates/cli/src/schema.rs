//! Versioned JSON input files. Every file carries `"schema_version": 1` and a
//! `"kind"` tag; scalars are `"p/q"` strings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use koszul_core::algcog::{Tensor2, UnitalAssocAlgebra, Vector};
use koszul_core::cocom::FinCocomCoalgebra;
use koszul_core::linhom::json::ChainComplexJson;
use koszul_core::linhom::{parse_scalar, LinComb};
use koszul_core::liecom::CurvedLieCoalgebra;
use koszul_core::nsoperad::{GeneratorSet, Presentation, Tree};
use koszul_core::{Error, Result, Scalar};
use serde::Deserialize;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub arity: u32,
    pub degree: i32,
}

/// Relations are lists of `[coefficient, tree]` pairs; trees use the grammar
/// `| | label | (label tree*)`.
#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub generators: Vec<GeneratorJson>,
    pub relations: Vec<Vec<(String, String)>>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    /// `[i, j, [[k, c], …]]`: x_i x_j = Σ c x_k
    pub product: Vec<(usize, usize, Vec<(usize, String)>)>,
    #[serde(default)]
    pub differential: Vec<(usize, Vec<(usize, String)>)>,
    pub unit: Vec<(usize, String)>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct CocomJson {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    /// per basis element, `[[a, b, c], …]`: Δx = Σ c x_a ⊗ x_b
    pub coproduct: Vec<Vec<(usize, usize, String)>>,
    pub counit: Vec<String>,
    #[serde(default)]
    pub differential: Vec<Vec<(usize, String)>>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct LieCoalgebraJson {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub cobracket: Vec<Vec<(usize, usize, String)>>,
    #[serde(default)]
    pub differential: Vec<Vec<(usize, String)>>,
    pub curvature: Vec<String>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum PresentationRef {
    File(String),
    Inline(PresentationJson),
}

/// A candidate twisting morphism from the Koszul dual cooperad of a
/// presentation to the presented operad, given on cogenerator trees.
#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct TwistingJson {
    pub presentation: PresentationRef,
    pub alpha: Vec<(String, Vec<(String, String)>)>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct BuiltinJson {
    pub name: String,
}

/// The `kind` tag selects the variant.
#[derive(Debug, Clone)]
pub enum InputFile {
    Presentation(PresentationJson),
    Algebra(AlgebraJson),
    CocomCoalgebra(CocomJson),
    CurvedLieCoalgebra(LieCoalgebraJson),
    ChainComplex(ChainComplexBody),
    Twisting(TwistingJson),
    Builtin(BuiltinJson),
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ChainComplexBody {
    pub space: koszul_core::linhom::json::GradedSpaceJson,
    pub differential: BTreeMap<String, koszul_core::linhom::json::MatrixJson>,
    #[serde(default)]
    pub window: Option<(i64, i64)>,
}

impl InputFile {
    pub fn kind(&self) -> &'static str {
        match self {
            InputFile::Presentation(_) => "presentation",
            InputFile::Algebra(_) => "algebra",
            InputFile::CocomCoalgebra(_) => "cocom_coalgebra",
            InputFile::CurvedLieCoalgebra(_) => "curved_lie_coalgebra",
            InputFile::ChainComplex(_) => "chain_complex",
            InputFile::Twisting(_) => "twisting",
            InputFile::Builtin(_) => "builtin",
        }
    }
}

/// Directory holding the bundled fixtures; `KOSZUL_FIXTURE_DIR` overrides it.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os("KOSZUL_FIXTURE_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

/// A path as given, or else the same name inside the fixture directory.
pub fn resolve(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.exists() {
        return p;
    }
    let f = fixture_dir().join(path);
    if f.exists() {
        f
    } else {
        p
    }
}

pub fn parse_input(text: &str, origin: &str) -> Result<InputFile> {
    let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Schema(format!("{origin}: {e}")))?;
    let obj = value.as_object_mut().ok_or_else(|| Error::Schema(format!("{origin}: top level must be an object")))?;
    match obj.remove("schema_version").and_then(|v| v.as_u64()) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::Schema(format!("{origin}: unsupported schema_version {v}"))),
        None => return Err(Error::Schema(format!("{origin}: missing schema_version"))),
    }
    let kind = match obj.remove("kind") {
        Some(serde_json::Value::String(k)) => k,
        _ => return Err(Error::Schema(format!("{origin}: missing or non-string kind"))),
    };
    fn body<T: serde::de::DeserializeOwned>(v: serde_json::Value, origin: &str) -> Result<T> {
        serde_path_to_error::deserialize(v).map_err(|e| {
            let at = e.path().to_string();
            Error::Schema(format!("{origin}: at {at}: {}", e.into_inner()))
        })
    }
    Ok(match kind.as_str() {
        "presentation" => InputFile::Presentation(body(value, origin)?),
        "algebra" => InputFile::Algebra(body(value, origin)?),
        "cocom_coalgebra" => InputFile::CocomCoalgebra(body(value, origin)?),
        "curved_lie_coalgebra" => InputFile::CurvedLieCoalgebra(body(value, origin)?),
        "chain_complex" => InputFile::ChainComplex(body(value, origin)?),
        "twisting" => InputFile::Twisting(body(value, origin)?),
        "builtin" => InputFile::Builtin(body(value, origin)?),
        other => return Err(Error::Schema(format!("{origin}: unknown kind {other:?}"))),
    })
}

pub fn load(path: &str) -> Result<InputFile> {
    let p = resolve(path);
    let text = std::fs::read_to_string(&p).map_err(|e| Error::Schema(format!("{}: {e}", p.display())))?;
    parse_input(&text, &p.display().to_string())
}

fn scalar(s: &str, at: &str) -> Result<Scalar> {
    parse_scalar(s).map_err(|_| Error::Schema(format!("{at}: bad rational {s:?}")))
}

fn vector(terms: &[(usize, String)], at: &str) -> Result<Vector> {
    let mut v = Vector::zero();
    for (i, c) in terms {
        v.add_term(*i, scalar(c, at)?);
    }
    Ok(v)
}

fn tensor(terms: &[(usize, usize, String)], at: &str) -> Result<Tensor2> {
    let mut t = Tensor2::zero();
    for (a, b, c) in terms {
        t.add_term((*a, *b), scalar(c, at)?);
    }
    Ok(t)
}

fn per_basis_vectors(n: usize, rows: &[Vec<(usize, String)>], field: &str) -> Result<Vec<Vector>> {
    if rows.is_empty() {
        return Ok(vec![Vector::zero(); n]);
    }
    if rows.len() != n {
        return Err(Error::Schema(format!("{field}: expected {n} entries, found {}", rows.len())));
    }
    rows.iter().enumerate().map(|(i, r)| vector(r, &format!("{field}[{i}]"))).collect()
}

pub fn parse_poly(g: &GeneratorSet, terms: &[(String, String)], at: &str) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for (k, (c, t)) in terms.iter().enumerate() {
        let tree = g.parse(t).map_err(|e| Error::Schema(format!("{at}[{k}]: {e}")))?;
        out.add_term(tree, scalar(c, &format!("{at}[{k}]"))?);
    }
    Ok(out)
}

impl PresentationJson {
    pub fn build(&self) -> Result<Presentation> {
        let mut g = GeneratorSet::new();
        for (i, gen) in self.generators.iter().enumerate() {
            g.add(&gen.name, gen.arity, gen.degree).map_err(|e| Error::Schema(format!("generators[{i}]: {e}")))?;
        }
        let rels = self.relations.iter().enumerate().map(|(i, r)| parse_poly(&g, r, &format!("relations[{i}]"))).collect::<Result<Vec<_>>>()?;
        Presentation::new(g, rels)
    }
}

impl PresentationRef {
    pub fn build(&self) -> Result<Presentation> {
        match self {
            PresentationRef::Inline(p) => p.build(),
            PresentationRef::File(path) => match load(path)? {
                InputFile::Presentation(p) => p.build(),
                other => Err(Error::Schema(format!("{path}: expected a presentation, found {}", other.kind()))),
            },
        }
    }
}

impl AlgebraJson {
    pub fn build(&self) -> Result<UnitalAssocAlgebra> {
        let mut product = BTreeMap::new();
        for (k, (i, j, v)) in self.product.iter().enumerate() {
            product.insert((*i, *j), vector(v, &format!("product[{k}]"))?);
        }
        let mut differential = BTreeMap::new();
        for (k, (i, v)) in self.differential.iter().enumerate() {
            differential.insert(*i, vector(v, &format!("differential[{k}]"))?);
        }
        UnitalAssocAlgebra::new(self.labels.clone(), self.degrees.clone(), product, differential, vector(&self.unit, "unit")?)
    }
}

impl CocomJson {
    pub fn build(&self) -> Result<FinCocomCoalgebra> {
        let n = self.labels.len();
        if self.coproduct.len() != n || self.counit.len() != n {
            return Err(Error::Schema(format!("coproduct and counit need {n} entries")));
        }
        let delta = self.coproduct.iter().enumerate().map(|(i, t)| tensor(t, &format!("coproduct[{i}]"))).collect::<Result<Vec<_>>>()?;
        let counit = self.counit.iter().enumerate().map(|(i, c)| scalar(c, &format!("counit[{i}]"))).collect::<Result<Vec<_>>>()?;
        let d = per_basis_vectors(n, &self.differential, "differential")?;
        FinCocomCoalgebra::new(self.labels.clone(), self.degrees.clone(), delta, counit, d)
    }
}

impl LieCoalgebraJson {
    pub fn build(&self) -> Result<CurvedLieCoalgebra> {
        let n = self.labels.len();
        if self.cobracket.len() != n || self.curvature.len() != n {
            return Err(Error::Schema(format!("cobracket and curvature need {n} entries")));
        }
        let delta = self.cobracket.iter().enumerate().map(|(i, t)| tensor(t, &format!("cobracket[{i}]"))).collect::<Result<Vec<_>>>()?;
        let theta = self.curvature.iter().enumerate().map(|(i, c)| scalar(c, &format!("curvature[{i}]"))).collect::<Result<Vec<_>>>()?;
        let d = per_basis_vectors(n, &self.differential, "differential")?;
        CurvedLieCoalgebra::unchecked(self.labels.clone(), self.degrees.clone(), delta, d, theta)
    }
}

impl ChainComplexBody {
    pub fn to_json(&self) -> ChainComplexJson {
        ChainComplexJson {
            schema_version: koszul_core::linhom::json::SCHEMA_VERSION,
            space: self.space.clone(),
            differential: self.differential.clone(),
            window: self.window,
        }
    }
}
