//! JSON forms: degrees as string keys, scalars as `"p/q"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::graded::{ChainComplex, GradedMap, GradedSpace};
use super::matrix::SparseMatrix;
use super::scalar::{format_scalar, parse_scalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GradedSpaceJson {
    pub components: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GradedMapJson {
    pub source: GradedSpaceJson,
    pub target: GradedSpaceJson,
    pub shift: i64,
    pub blocks: BTreeMap<String, MatrixJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexJson {
    pub schema_version: u32,
    pub space: GradedSpaceJson,
    pub differential: BTreeMap<String, MatrixJson>,
    #[serde(default)]
    pub window: Option<(i64, i64)>,
}

fn parse_degree(s: &str) -> Result<i64> {
    s.parse().map_err(|_| Error::Schema(format!("degree key {s:?} is not an integer")))
}

pub fn matrix_to_json(m: &SparseMatrix) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().into_iter().map(|(r, c, x)| (r, c, format_scalar(&x))).collect(),
    }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<SparseMatrix> {
    let mut m = SparseMatrix::zero(j.rows, j.cols);
    for (r, c, x) in &j.entries {
        if *r >= j.rows || *c >= j.cols {
            return Err(Error::Schema(format!("matrix entry ({r},{c}) out of range")));
        }
        m.set(*r, *c, parse_scalar(x)?);
    }
    Ok(m)
}

pub fn space_to_json(s: &GradedSpace) -> GradedSpaceJson {
    GradedSpaceJson { components: s.components().iter().map(|(d, v)| (d.to_string(), v.clone())).collect() }
}

pub fn space_from_json(j: &GradedSpaceJson) -> Result<GradedSpace> {
    let mut comps = BTreeMap::new();
    for (k, v) in &j.components {
        comps.insert(parse_degree(k)?, v.clone());
    }
    GradedSpace::from_components(comps)
}

fn blocks_to_json(blocks: &BTreeMap<i64, SparseMatrix>) -> BTreeMap<String, MatrixJson> {
    blocks.iter().map(|(d, m)| (d.to_string(), matrix_to_json(m))).collect()
}

fn blocks_from_json(j: &BTreeMap<String, MatrixJson>) -> Result<BTreeMap<i64, SparseMatrix>> {
    j.iter().map(|(k, m)| Ok((parse_degree(k)?, matrix_from_json(m)?))).collect()
}

pub fn map_to_json(f: &GradedMap) -> GradedMapJson {
    GradedMapJson {
        source: space_to_json(&f.source),
        target: space_to_json(&f.target),
        shift: f.shift,
        blocks: blocks_to_json(f.blocks()),
    }
}

pub fn map_from_json(j: &GradedMapJson) -> Result<GradedMap> {
    GradedMap::new(space_from_json(&j.source)?, space_from_json(&j.target)?, j.shift, blocks_from_json(&j.blocks)?)
}

pub fn complex_to_json(c: &ChainComplex) -> ChainComplexJson {
    ChainComplexJson {
        schema_version: SCHEMA_VERSION,
        space: space_to_json(&c.space),
        differential: blocks_to_json(c.differential.blocks()),
        window: c.window,
    }
}

pub fn complex_from_json(j: &ChainComplexJson) -> Result<ChainComplex> {
    if j.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!("unsupported schema_version {}", j.schema_version)));
    }
    let c = ChainComplex::new(space_from_json(&j.space)?, blocks_from_json(&j.differential)?)?;
    Ok(match j.window {
        Some((lo, hi)) => c.with_window(lo, hi),
        None => c,
    })
}

pub fn to_string<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::scalar::frac;

    #[test]
    fn complex_round_trip_is_bit_exact() {
        let space = GradedSpace::with_dims([(-1, 1), (0, 2)]);
        let mut d = SparseMatrix::zero(1, 2);
        d.set(0, 0, frac(-3, 7));
        d.set(0, 1, frac(5, 1));
        let c = ChainComplex::new(space, [(0, d)].into_iter().collect()).unwrap();
        let s = to_string(&complex_to_json(&c));
        let back = complex_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_string(&complex_to_json(&back)), s);
        assert!(s.contains("\"-3/7\""));
    }

    #[test]
    fn map_round_trip() {
        let s = GradedSpace::with_dims([(2, 2)]);
        let f = GradedMap::identity(&s);
        let j = to_string(&map_to_json(&f));
        let back = map_from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
