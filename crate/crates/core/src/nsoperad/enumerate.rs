use std::collections::{BTreeMap, HashMap};

use super::generators::GeneratorSet;
use super::tree::{Symbol, Tree};

/// Memoized enumeration of decorated planar trees by (arity, weight).
pub struct TreeEnumerator {
    symbols: Vec<Symbol>,
    memo: HashMap<(usize, usize), Vec<Tree>>,
}

impl TreeEnumerator {
    pub fn new(gens: &GeneratorSet) -> Self {
        Self::from_symbols(gens.symbols().collect())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        assert!(symbols.iter().all(|s| s.weight > 0), "generators need positive weight");
        TreeEnumerator { symbols, memo: HashMap::new() }
    }

    /// All trees with `arity` leaves and total weight `weight`, in canonical order.
    pub fn trees(&mut self, arity: usize, weight: usize) -> Vec<Tree> {
        if let Some(v) = self.memo.get(&(arity, weight)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if weight == 0 {
            if arity == 1 {
                out.push(Tree::trivial());
            }
        } else {
            for g in self.symbols.clone() {
                let gw = g.weight as usize;
                if gw > weight {
                    continue;
                }
                let mut seqs: Vec<Vec<Symbol>> = Vec::new();
                self.children(g.arity as usize, arity, weight - gw, vec![g], &mut seqs);
                out.extend(seqs.into_iter().map(Tree::from_nodes_unchecked));
            }
        }
        out.sort();
        self.memo.insert((arity, weight), out.clone());
        out
    }

    fn children(&mut self, k: usize, arity: usize, weight: usize, prefix: Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        if k == 0 {
            if arity == 0 && weight == 0 {
                out.push(prefix);
            }
            return;
        }
        if k == 1 {
            for t in self.trees(arity, weight) {
                let mut p = prefix.clone();
                p.extend_from_slice(t.nodes());
                out.push(p);
            }
            return;
        }
        for a in 0..=arity {
            for w in 0..=weight {
                let ts = self.trees(a, w);
                for t in ts {
                    let mut p = prefix.clone();
                    p.extend_from_slice(t.nodes());
                    self.children(k - 1, arity - a, weight - w, p, out);
                }
            }
        }
    }
}

/// Complete enumeration of trees with given arity and weight.
pub fn free_basis(gens: &GeneratorSet, arity: usize, weight: usize) -> Vec<Tree> {
    TreeEnumerator::new(gens).trees(arity, weight)
}

/// All trees with arity ≤ `max_arity` and weight ≤ `max_weight`, keyed by (arity, weight).
pub fn free_window(gens: &GeneratorSet, max_arity: usize, max_weight: usize) -> BTreeMap<(usize, usize), Vec<Tree>> {
    let mut e = TreeEnumerator::new(gens);
    let mut out = BTreeMap::new();
    for a in 0..=max_arity {
        for w in 0..=max_weight {
            let ts = e.trees(a, w);
            if !ts.is_empty() {
                out.insert((a, w), ts);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(n: usize) -> usize {
        // C_n = binom(2n, n)/(n+1)
        let mut c = 1usize;
        for i in 0..n {
            c = c * 2 * (2 * i + 1) / (i + 2);
        }
        c
    }

    #[test]
    fn binary_trees_are_catalan() {
        let mut g = GeneratorSet::new();
        g.add("mu", 2, 0).unwrap();
        let mut e = TreeEnumerator::new(&g);
        for n in 1..8 {
            assert_eq!(e.trees(n, n - 1).len(), catalan(n - 1), "arity {n}");
        }
        assert_eq!(e.trees(3, 2).len(), 2);
        assert_eq!(e.trees(1, 0), vec![Tree::trivial()]);
    }

    #[test]
    fn uas_arity_zero_small_weights() {
        let mut g = GeneratorSet::new();
        g.add("mu", 2, 0).unwrap();
        g.add("xi", 0, 0).unwrap();
        let ts = free_basis(&g, 0, 3);
        assert_eq!(ts.len(), 1);
        assert_eq!(g.show(&ts[0]), "(mu xi xi)");
        let ts = free_basis(&g, 0, 5);
        let shown: Vec<String> = ts.iter().map(|t| g.show(t)).collect();
        assert_eq!(ts.len(), 2);
        assert!(shown.contains(&"(mu xi (mu xi xi))".to_string()));
        assert!(shown.contains(&"(mu (mu xi xi) xi)".to_string()));
    }
}
