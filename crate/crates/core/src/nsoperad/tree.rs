use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Label used for leaves in the preorder encoding.
pub const LEAF: u32 = u32::MAX;
/// Label used for the placeholder vertex left behind when a block is cut out.
pub const HOLE: u32 = u32::MAX - 1;

/// A generator occurrence: label plus the data needed for signs and windows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    pub label: u32,
    pub arity: u32,
    pub degree: i32,
    pub weight: u32,
}

impl Symbol {
    pub const fn new(label: u32, arity: u32, degree: i32, weight: u32) -> Self {
        Symbol { label, arity, degree, weight }
    }

    pub const fn leaf() -> Self {
        Symbol { label: LEAF, arity: 0, degree: 0, weight: 0 }
    }

    pub fn is_leaf(&self) -> bool {
        self.label == LEAF
    }

    pub fn odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// Planar rooted tree stored as its preorder (root first, children left to
/// right); leaves are explicit `LEAF` nodes. The trivial tree is a single leaf.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    nodes: Vec<Symbol>,
}

/// Koszul parity of reordering a sequence so that the items flagged `true`
/// come first (both groups keep their internal order).
pub fn partition_parity(items: impl IntoIterator<Item = (bool, bool)>) -> bool {
    // (first_group, odd)
    let mut odd_seen_second = 0u64;
    let mut parity = 0u64;
    for (first, odd) in items {
        if !odd {
            continue;
        }
        if first {
            parity += odd_seen_second;
        } else {
            odd_seen_second += 1;
        }
    }
    parity % 2 == 1
}

/// Koszul parity of sorting items by key (stable), given (key, odd) in the current order.
pub fn sort_parity(items: &[(usize, bool)]) -> bool {
    let mut parity = false;
    for i in 0..items.len() {
        if !items[i].1 {
            continue;
        }
        for j in i + 1..items.len() {
            if items[j].1 && items[j].0 < items[i].0 {
                parity = !parity;
            }
        }
    }
    parity
}

impl Tree {
    pub fn trivial() -> Self {
        Tree { nodes: vec![Symbol::leaf()] }
    }

    pub fn corolla(s: Symbol) -> Self {
        let mut nodes = vec![s];
        nodes.extend(std::iter::repeat(Symbol::leaf()).take(s.arity as usize));
        Tree { nodes }
    }

    /// Validates a preorder node list.
    pub fn from_nodes(nodes: Vec<Symbol>) -> Result<Self> {
        let mut need = 1i64;
        for (i, s) in nodes.iter().enumerate() {
            if need == 0 {
                return Err(Error::Invalid(format!("trailing nodes after position {i}")));
            }
            need += s.arity as i64 - 1;
            if s.is_leaf() && s.arity != 0 {
                return Err(Error::Invalid("leaf with nonzero arity".into()));
            }
        }
        if need != 0 || nodes.is_empty() {
            return Err(Error::Invalid("incomplete preorder".into()));
        }
        Ok(Tree { nodes })
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<Symbol>) -> Self {
        Tree { nodes }
    }

    pub fn nodes(&self) -> &[Symbol] {
        &self.nodes
    }

    pub fn is_trivial(&self) -> bool {
        self.nodes.len() == 1 && self.nodes[0].is_leaf()
    }

    pub fn root(&self) -> Option<Symbol> {
        let r = self.nodes[0];
        (!r.is_leaf()).then_some(r)
    }

    pub fn arity(&self) -> usize {
        self.nodes.iter().filter(|s| s.is_leaf()).count()
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.nodes.iter().filter(|s| !s.is_leaf()).count()
    }

    /// Sum of generator weights (equals the vertex count for unweighted generators).
    pub fn weight(&self) -> usize {
        self.nodes.iter().map(|s| s.weight as usize).sum()
    }

    pub fn degree(&self) -> i64 {
        self.nodes.iter().map(|s| s.degree as i64).sum()
    }

    pub fn odd(&self) -> bool {
        self.degree().rem_euclid(2) == 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = (usize, Symbol)> + '_ {
        self.nodes.iter().enumerate().filter(|(_, s)| !s.is_leaf()).map(|(i, s)| (i, *s))
    }

    /// Index one past the end of the subtree rooted at `pos`.
    pub fn subtree_end(&self, pos: usize) -> usize {
        let mut need = 1i64;
        let mut i = pos;
        while need > 0 {
            need += self.nodes[i].arity as i64 - 1;
            i += 1;
        }
        i
    }

    pub fn subtree(&self, pos: usize) -> Tree {
        Tree { nodes: self.nodes[pos..self.subtree_end(pos)].to_vec() }
    }

    /// Positions of the child slots of the vertex at `pos`.
    pub fn children(&self, pos: usize) -> Vec<usize> {
        let k = self.nodes[pos].arity as usize;
        let mut out = Vec::with_capacity(k);
        let mut p = pos + 1;
        for _ in 0..k {
            out.push(p);
            p = self.subtree_end(p);
        }
        out
    }

    /// Parent vertex position of each node (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.nodes.len()];
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for (i, s) in self.nodes.iter().enumerate() {
            if let Some(top) = stack.last_mut() {
                out[i] = Some(top.0);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if s.arity > 0 {
                stack.push((i, s.arity));
            }
        }
        out
    }

    pub fn leaf_positions(&self) -> Vec<usize> {
        self.nodes.iter().enumerate().filter(|(_, s)| s.is_leaf()).map(|(i, _)| i).collect()
    }

    /// Number of leaves strictly before position `pos`.
    pub fn leaves_before(&self, pos: usize) -> usize {
        self.nodes[..pos].iter().filter(|s| s.is_leaf()).count()
    }

    fn odd_range(&self, r: std::ops::Range<usize>) -> bool {
        self.nodes[r].iter().map(|s| s.degree as i64).sum::<i64>().rem_euclid(2) == 1
    }

    /// Whether the total degree of the vertices before `pos` is odd.
    pub fn odd_before(&self, pos: usize) -> bool {
        self.odd_range(0..pos)
    }

    /// Partial composition t ∘_i other (leaves numbered from 1). Returns the
    /// Koszul parity of moving `other` past the vertices after leaf `i`.
    pub fn graft(&self, i: usize, other: &Tree) -> Result<(bool, Tree)> {
        let leaves = self.leaf_positions();
        if i == 0 || i > leaves.len() {
            return Err(Error::IndexOutOfRange { index: i, max: leaves.len() });
        }
        let p = leaves[i - 1];
        let mut nodes = Vec::with_capacity(self.nodes.len() + other.nodes.len() - 1);
        nodes.extend_from_slice(&self.nodes[..p]);
        nodes.extend_from_slice(&other.nodes);
        nodes.extend_from_slice(&self.nodes[p + 1..]);
        let neg = other.odd() && self.odd_range(p + 1..self.nodes.len());
        Ok((neg, Tree { nodes }))
    }

    /// Replaces the vertex at `pos` by `inner` (same arity), plugging the
    /// vertex's children into the leaves of `inner`. The parity accounts for
    /// interleaving inner's vertices with the children's vertices.
    pub fn substitute(&self, pos: usize, inner: &Tree) -> (bool, Tree) {
        assert!(!self.nodes[pos].is_leaf());
        assert_eq!(inner.arity(), self.nodes[pos].arity as usize, "arity mismatch in substitution");
        let end = self.subtree_end(pos);
        let kids = self.children(pos);
        let mut nodes = Vec::with_capacity(self.nodes.len() + inner.nodes.len());
        nodes.extend_from_slice(&self.nodes[..pos]);
        let mut tags = Vec::new();
        let mut j = 0;
        for s in &inner.nodes {
            if s.is_leaf() {
                let c = kids[j];
                let ce = self.subtree_end(c);
                for t in &self.nodes[c..ce] {
                    nodes.push(*t);
                    tags.push((false, t.odd()));
                }
                j += 1;
            } else {
                nodes.push(*s);
                tags.push((true, s.odd()));
            }
        }
        nodes.extend_from_slice(&self.nodes[end..]);
        (partition_parity(tags), Tree { nodes })
    }

    /// Replaces the vertex at `pos` by another symbol of the same arity.
    pub fn relabel(&self, pos: usize, s: Symbol) -> Tree {
        assert_eq!(self.nodes[pos].arity, s.arity);
        let mut nodes = self.nodes.clone();
        nodes[pos] = s;
        Tree { nodes }
    }

    /// All connected vertex sets rooted at `r` with total size at most `max`.
    pub fn connected_sets(&self, r: usize, max: usize) -> Vec<Vec<usize>> {
        if self.nodes[r].is_leaf() || max == 0 {
            return Vec::new();
        }
        let mut partial: Vec<Vec<usize>> = vec![vec![r]];
        for c in self.children(r) {
            if self.nodes[c].is_leaf() {
                continue;
            }
            let subs = self.connected_sets(c, max);
            let mut next = Vec::new();
            for base in &partial {
                next.push(base.clone());
                for s in &subs {
                    if base.len() + s.len() <= max {
                        let mut v = base.clone();
                        v.extend_from_slice(s);
                        next.push(v);
                    }
                }
            }
            partial = next;
        }
        for p in &mut partial {
            p.sort_unstable();
        }
        partial
    }

    /// Cuts the connected set `set` (rooted at `set[0]`'s root `r`) out of the tree.
    /// Returns (parity, outer tree with a HOLE vertex, block tree) such that
    /// substituting the block back into the hole gives the original tree with
    /// the returned sign.
    pub fn extract_block(&self, r: usize, set: &[usize]) -> (bool, Tree, Tree) {
        let end = self.subtree_end(r);
        let mut block = Vec::new();
        let mut hanging: Vec<(usize, usize)> = Vec::new();
        let mut stack = vec![r];
        // iterative preorder over the block
        let in_set = |p: usize| set.binary_search(&p).is_ok();
        while let Some(p) = stack.pop() {
            if in_set(p) {
                block.push(self.nodes[p]);
                let kids = self.children(p);
                for &c in kids.iter().rev() {
                    stack.push(c);
                }
            } else {
                block.push(Symbol::leaf());
                hanging.push((p, self.subtree_end(p)));
            }
        }
        let bt = Tree { nodes: block };
        let deg: i64 = set.iter().map(|&p| self.nodes[p].degree as i64).sum();
        let wt: u32 = set.iter().map(|&p| self.nodes[p].weight).sum();
        let hole = Symbol::new(HOLE, hanging.len() as u32, deg as i32, wt);
        let mut outer = Vec::with_capacity(self.nodes.len());
        outer.extend_from_slice(&self.nodes[..r]);
        outer.push(hole);
        for (a, b) in &hanging {
            outer.extend_from_slice(&self.nodes[*a..*b]);
        }
        outer.extend_from_slice(&self.nodes[end..]);
        let parity = partition_parity((r..end).map(|p| (in_set(p), self.nodes[p].odd())));
        (parity, Tree { nodes: outer }, bt)
    }

    /// Position of the (unique) HOLE vertex, if any.
    pub fn hole(&self) -> Option<usize> {
        self.nodes.iter().position(|s| s.label == HOLE)
    }

    /// Two-level decompositions: for each non-root vertex w, returns
    /// (parity, lower tree, leaf index, upper = subtree at w) with
    /// tree = ± lower ∘_i upper.
    pub fn two_level_splits(&self) -> Vec<(bool, Tree, usize, Tree)> {
        let mut out = Vec::new();
        for (w, _) in self.vertices().skip(1) {
            let end = self.subtree_end(w);
            let upper = Tree { nodes: self.nodes[w..end].to_vec() };
            let mut lower = Vec::with_capacity(self.nodes.len());
            lower.extend_from_slice(&self.nodes[..w]);
            lower.push(Symbol::leaf());
            lower.extend_from_slice(&self.nodes[end..]);
            let i = self.leaves_before(w) + 1;
            let neg = upper.odd() && self.odd_range(end..self.nodes.len());
            out.push((neg, Tree { nodes: lower }, i, upper));
        }
        out
    }

    /// Full decompositions tree = ± lower(upper_1, …, upper_k) where lower is
    /// a root block (possibly trivial) and the uppers are the hanging subtrees
    /// (possibly trivial).
    pub fn root_splits(&self) -> Vec<(bool, Tree, Vec<Tree>)> {
        let mut out = vec![(false, Tree::trivial(), vec![self.clone()])];
        if self.is_trivial() {
            return out;
        }
        for set in self.connected_sets(0, usize::MAX) {
            let (neg, outer, block) = self.extract_block(0, &set);
            let uppers = outer.children(0).into_iter().map(|c| outer.subtree(c)).collect();
            out.push((neg, block, uppers));
        }
        out
    }

    /// Partitions of the vertex set into connected blocks. Each result is
    /// (parity, quotient tree whose vertices are HOLE symbols with the block
    /// index stored in `weight`, blocks in quotient preorder).
    pub fn block_partitions(&self) -> Vec<(bool, Tree, Vec<Tree>)> {
        let verts: Vec<usize> = self.vertices().map(|(p, _)| p).collect();
        if verts.is_empty() {
            return vec![(false, self.clone(), Vec::new())];
        }
        let m = verts.len();
        let mut out = Vec::with_capacity(1 << (m - 1));
        for mask in 0u64..(1u64 << (m - 1)) {
            let cut = |p: usize| -> bool {
                let idx = verts.binary_search(&p).unwrap();
                idx == 0 || mask & (1 << (idx - 1)) != 0
            };
            let mut quotient = Vec::new();
            let mut blocks: Vec<Tree> = Vec::new();
            let mut owner = vec![usize::MAX; self.nodes.len()];
            self.build_quotient(0, &cut, &mut quotient, &mut blocks, &mut owner);
            let items: Vec<(usize, bool)> = verts.iter().map(|&p| (owner[p], self.nodes[p].odd())).collect();
            out.push((sort_parity(&items), Tree { nodes: quotient }, blocks));
        }
        out
    }

    fn build_quotient(&self, r: usize, cut: &dyn Fn(usize) -> bool, quotient: &mut Vec<Symbol>, blocks: &mut Vec<Tree>, owner: &mut [usize]) {
        let id = blocks.len();
        blocks.push(Tree::trivial());
        let mut block = Vec::new();
        let mut hanging = Vec::new();
        let mut stack = vec![r];
        let mut deg = 0i64;
        while let Some(p) = stack.pop() {
            let s = self.nodes[p];
            if !s.is_leaf() && (p == r || !cut(p)) {
                owner[p] = id;
                deg += s.degree as i64;
                block.push(s);
                for &c in self.children(p).iter().rev() {
                    stack.push(c);
                }
            } else {
                block.push(Symbol::leaf());
                hanging.push(p);
            }
        }
        quotient.push(Symbol::new(HOLE, hanging.len() as u32, deg as i32, id as u32));
        blocks[id] = Tree { nodes: block };
        for h in hanging {
            if self.nodes[h].is_leaf() {
                quotient.push(Symbol::leaf());
            } else {
                self.build_quotient(h, cut, quotient, blocks, owner);
            }
        }
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.arity().cmp(&other.arity()))
            .then_with(|| self.vertex_count().cmp(&other.vertex_count()))
            .then_with(|| self.nodes.cmp(&other.nodes))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Tree, p: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let s = t.nodes[p];
            if s.is_leaf() {
                return write!(f, "|");
            }
            if s.arity == 0 {
                return write!(f, "g{}", s.label);
            }
            write!(f, "(g{}", s.label)?;
            for c in t.children(p) {
                write!(f, " ")?;
                go(t, c, f)?;
            }
            write!(f, ")")
        }
        go(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MU: Symbol = Symbol::new(0, 2, 0, 1);
    pub(crate) const XI: Symbol = Symbol::new(1, 0, 0, 1);

    #[test]
    fn graft_basics() {
        let mu = Tree::corolla(MU);
        let (neg, t) = Tree::trivial().graft(1, &mu).unwrap();
        assert!(!neg);
        assert_eq!(t, mu);
        let (_, left) = mu.graft(1, &mu).unwrap();
        assert_eq!(left.arity(), 3);
        assert_eq!(left.nodes()[1], MU);
        let (_, t) = mu.graft(2, &Tree::corolla(XI)).unwrap();
        assert_eq!((t.arity(), t.weight()), (1, 2));
        assert!(matches!(mu.graft(3, &mu), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn odd_graft_sign() {
        let a = Symbol::new(0, 2, 1, 1);
        let t = Tree::corolla(a);
        let (neg, _) = t.graft(1, &t).unwrap();
        assert!(!neg); // nothing after leaf 1 besides a leaf
        // a(|, a): grafting at leaf 1 passes the odd vertex to its right
        let (_, g) = t.graft(2, &t).unwrap();
        let (neg, _) = g.graft(1, &t).unwrap();
        assert!(neg);
        let (neg, _) = g.graft(3, &t).unwrap();
        assert!(!neg);
    }

    #[test]
    fn block_partitions_count() {
        let mu = Tree::corolla(MU);
        let (_, t) = mu.graft(1, &mu).unwrap();
        let (_, t) = t.graft(1, &mu).unwrap();
        assert_eq!(t.block_partitions().len(), 4);
        assert_eq!(t.root_splits().len(), 4); // |, {r}, {r,a}, {r,a,b}
        assert_eq!(t.two_level_splits().len(), 2);
    }

    #[test]
    fn extract_then_substitute() {
        let mu = Tree::corolla(MU);
        let (_, t) = mu.graft(2, &mu).unwrap();
        let (_, t) = t.graft(1, &Tree::corolla(XI)).unwrap();
        for set in t.connected_sets(0, 10) {
            let (p1, outer, block) = t.extract_block(0, &set);
            let (p2, back) = outer.substitute(outer.hole().unwrap(), &block);
            assert_eq!(back, t);
            assert_eq!(p1, p2);
        }
    }
}
