//! Detection and counting of `(v, P)`-patterns.
//!
//! An occurrence is a root `j` plus `p` further vertices whose induced
//! subgraph is rooted-isomorphic to the pattern, where the root has exactly
//! one neighbour outside the set and no other vertex of the set has any.
//! Equivalently, some edge `{j, x}` of the host cuts off a component
//! containing `j` that, rooted at `j`, is isomorphic to the pattern.

use std::collections::HashMap;

use crate::error::PatternError;
use crate::iso::{canonical_form_rooted, component_code, RootedPattern};
use crate::tree::{RootedTree, Tree};

/// A root vertex and the sorted set of the pattern's other vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternOccurrence {
    root: usize,
    others: Vec<usize>,
}

impl PatternOccurrence {
    pub fn new(root: usize, mut others: Vec<usize>) -> Self {
        others.sort_unstable();
        PatternOccurrence { root, others }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Non-root vertices in increasing order.
    pub fn others(&self) -> &[usize] {
        &self.others
    }

    /// All vertices, root first.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.root).chain(self.others.iter().copied())
    }
}

/// Checks the three pattern conditions directly on the induced subgraph.
pub fn is_pattern(
    tree: &Tree,
    occ: &PatternOccurrence,
    pat: &RootedPattern,
) -> Result<bool, PatternError> {
    let n = tree.n();
    if occ.others.len() != pat.p() {
        return Err(PatternError::WrongSize {
            expected: pat.p(),
            got: occ.others.len(),
        });
    }
    let mut local = HashMap::with_capacity(pat.p() + 1);
    for (i, v) in occ.vertices().enumerate() {
        if !tree.contains_vertex(v) {
            return Err(PatternError::IndexOutOfRange { vertex: v, n });
        }
        if local.insert(v, i + 1).is_some() {
            return Err(PatternError::DuplicateVertices(v));
        }
    }

    let induced_degree = |v: usize| tree.neighbors(v).iter().filter(|w| local.contains_key(w)).count();
    if tree.degree(occ.root) != induced_degree(occ.root) + 1 {
        return Ok(false);
    }
    if occ.others.iter().any(|&w| tree.degree(w) != induced_degree(w)) {
        return Ok(false);
    }

    let mut edges = Vec::with_capacity(pat.p());
    for v in occ.vertices() {
        for &w in tree.neighbors(v) {
            if v < w {
                if let Some(&lw) = local.get(&w) {
                    edges.push((local[&v], lw));
                }
            }
        }
    }
    // an edge-count or connectivity failure means the induced subgraph is no tree
    let Ok(induced) = Tree::new(pat.p() + 1, &edges) else {
        return Ok(false);
    };
    let rooted = RootedTree::new(induced, 1).expect("root is vertex 1");
    Ok(&canonical_form_rooted(&rooted) == pat.canonical())
}

/// Calls `hit(root, outside)` for every edge side that cuts off a copy of the
/// pattern: `root` is the pattern root and `outside` its single external neighbour.
fn for_each_hit(tree: &Tree, pat: &RootedPattern, mut hit: impl FnMut(usize, usize)) {
    let n = tree.n();
    let want = pat.p() + 1;
    if n <= want {
        return;
    }
    let order = tree.bfs_parents(1);
    let mut size = vec![1usize; n + 1];
    for &(v, parent) in order.iter().skip(1).rev() {
        size[parent] += size[v];
    }
    for &(child, parent) in order.iter().skip(1) {
        if size[child] == want && &component_code(tree, child, Some(parent)) == pat.canonical() {
            hit(child, parent);
        }
        if n - size[child] == want && &component_code(tree, parent, Some(child)) == pat.canonical() {
            hit(parent, child);
        }
    }
}

/// Number of pattern occurrences `P_n(T)`, each counted once.
pub fn count_patterns(tree: &Tree, pat: &RootedPattern) -> usize {
    let mut count = 0;
    for_each_hit(tree, pat, |_, _| count += 1);
    count
}

/// The occurrences counted by [`count_patterns`], sorted by root then by vertex set.
pub fn find_patterns(tree: &Tree, pat: &RootedPattern) -> Vec<PatternOccurrence> {
    let mut found = Vec::new();
    for_each_hit(tree, pat, |root, outside| {
        let others = component_vertices(tree, root, outside);
        found.push(PatternOccurrence::new(root, others));
    });
    found.sort_unstable();
    found
}

/// Vertices other than `root` in its component once `root - outside` is cut.
fn component_vertices(tree: &Tree, root: usize, outside: usize) -> Vec<usize> {
    let mut stack = vec![(root, outside)];
    let mut out = Vec::new();
    while let Some((v, from)) = stack.pop() {
        if v != root {
            out.push(v);
        }
        stack.extend(tree.neighbors(v).iter().filter(|&&w| w != from).map(|&w| (w, v)));
    }
    out
}
