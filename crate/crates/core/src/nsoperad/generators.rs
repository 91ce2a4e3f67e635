use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::linhom::{format_scalar, LinComb};

use super::tree::{Symbol, Tree};

/// Label reserved for the degree-2 curvature element of bar constructions.
pub const RESERVED_V: &str = "v";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: u32,
    pub degree: i32,
    pub weight: u32,
}

/// Graded nonsymmetric collection given by a list of named generators.
/// Label `i` in a [`Symbol`] refers to `generators[i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    by_name: HashMap<String, u32>,
}

impl GeneratorSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a generator with weight 1; user-facing, so `v` and `|` are refused.
    pub fn add(&mut self, name: &str, arity: u32, degree: i32) -> Result<Symbol> {
        if name == RESERVED_V {
            return Err(Error::Schema(format!("label {name:?} is reserved")));
        }
        self.push(name, arity, degree, 1)
    }

    /// Adds a generator without the reserved-name check.
    pub fn push(&mut self, name: &str, arity: u32, degree: i32, weight: u32) -> Result<Symbol> {
        if name.is_empty() || name == "|" || name.contains(['(', ')', ' ']) {
            return Err(Error::Schema(format!("invalid label {name:?}")));
        }
        if weight == 0 {
            return Err(Error::Invalid("generator weight must be positive".into()));
        }
        if self.by_name.contains_key(name) {
            return Err(Error::Schema(format!("duplicate label {name:?}")));
        }
        let label = self.gens.len() as u32;
        self.gens.push(Generator { name: name.to_string(), arity, degree, weight });
        self.by_name.insert(name.to_string(), label);
        Ok(self.symbol(label))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, label: u32) -> &Generator {
        &self.gens[label as usize]
    }

    pub fn symbol(&self, label: u32) -> Symbol {
        let g = &self.gens[label as usize];
        Symbol::new(label, g.arity, g.degree, g.weight)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.gens.len() as u32).map(|l| self.symbol(l))
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.by_name.get(name).map(|&l| self.symbol(l))
    }

    pub fn name(&self, label: u32) -> &str {
        &self.gens[label as usize].name
    }

    /// S-expression rendering: `|`, `label`, or `(label t1 … tk)`.
    pub fn show(&self, t: &Tree) -> String {
        let mut s = String::new();
        self.show_at(t, 0, &mut s);
        s
    }

    fn show_at(&self, t: &Tree, p: usize, out: &mut String) {
        let s = t.nodes()[p];
        if s.is_leaf() {
            out.push('|');
            return;
        }
        let name = if (s.label as usize) < self.gens.len() { self.name(s.label).to_string() } else { format!("#{}", s.label) };
        let kids = t.children(p);
        if kids.iter().all(|&c| t.nodes()[c].is_leaf()) {
            out.push_str(&name);
            return;
        }
        out.push('(');
        out.push_str(&name);
        for c in kids {
            out.push(' ');
            self.show_at(t, c, out);
        }
        out.push(')');
    }

    pub fn show_poly(&self, p: &LinComb<Tree>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.iter().map(|(t, c)| format!("{}*{}", format_scalar(c), self.show(t))).collect::<Vec<_>>().join(" + ")
    }

    /// Parses the s-expression grammar `tree ::= | | label | (label tree*)`.
    pub fn parse(&self, src: &str) -> Result<Tree> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let mut nodes = Vec::new();
        self.parse_at(&tokens, &mut pos, &mut nodes)?;
        if pos != tokens.len() {
            return Err(Error::Schema(format!("trailing input in tree {src:?}")));
        }
        Tree::from_nodes(nodes)
    }

    fn parse_at(&self, tokens: &[String], pos: &mut usize, nodes: &mut Vec<Symbol>) -> Result<()> {
        let tok = tokens.get(*pos).ok_or_else(|| Error::Schema("unexpected end of tree".into()))?;
        *pos += 1;
        match tok.as_str() {
            "|" => {
                nodes.push(Symbol::leaf());
                Ok(())
            }
            "(" => {
                let name = tokens.get(*pos).ok_or_else(|| Error::Schema("missing label after '('".into()))?;
                *pos += 1;
                let s = self.lookup(name).ok_or_else(|| Error::Schema(format!("unknown label {name:?}")))?;
                nodes.push(s);
                for _ in 0..s.arity {
                    if tokens.get(*pos).map(String::as_str) == Some(")") {
                        return Err(Error::Schema(format!("label {name:?} expects {} inputs", s.arity)));
                    }
                    self.parse_at(tokens, pos, nodes)?;
                }
                if tokens.get(*pos).map(String::as_str) != Some(")") {
                    return Err(Error::Schema(format!("label {name:?} expects {} inputs", s.arity)));
                }
                *pos += 1;
                Ok(())
            }
            ")" => Err(Error::Schema("unexpected ')'".into())),
            name => {
                let s = self.lookup(name).ok_or_else(|| Error::Schema(format!("unknown label {name:?}")))?;
                nodes.push(s);
                nodes.extend(std::iter::repeat(Symbol::leaf()).take(s.arity as usize));
                Ok(())
            }
        }
    }

    /// Maximum generator arity.
    pub fn max_arity(&self) -> u32 {
        self.gens.iter().map(|g| g.arity).max().unwrap_or(0)
    }

    /// Generators grouped by arity.
    pub fn by_arity(&self) -> BTreeMap<u32, Vec<Symbol>> {
        let mut m: BTreeMap<u32, Vec<Symbol>> = BTreeMap::new();
        for s in self.symbols() {
            m.entry(s.arity).or_default().push(s);
        }
        m
    }
}

fn tokenize(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uas() -> GeneratorSet {
        let mut g = GeneratorSet::new();
        g.add("mu", 2, 0).unwrap();
        g.add("xi", 0, 0).unwrap();
        g
    }

    #[test]
    fn parse_and_show_round_trip() {
        let g = uas();
        for s in ["|", "mu", "xi", "(mu xi |)", "(mu mu (mu | xi))"] {
            let t = g.parse(s).unwrap();
            assert_eq!(g.show(&t), s);
        }
        assert_eq!(g.parse("(mu | |)").unwrap(), g.parse("mu").unwrap());
    }

    #[test]
    fn parse_errors() {
        let g = uas();
        assert!(g.parse("(mu |)").is_err());
        assert!(g.parse("(nu | |)").is_err());
        assert!(g.parse("mu mu").is_err());
        let mut h = GeneratorSet::new();
        assert!(h.add("v", 1, 2).is_err());
    }
}
