//! Rooted-tree canonical forms and automorphism group orders.
//!
//! Canonical codes are AHU strings over `(` and `)`: a vertex is encoded as
//! its children's codes, sorted lexicographically and concatenated, wrapped
//! in one bracket pair. Two rooted trees are isomorphic iff their codes agree.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{PatternError, TreeError};
use crate::tree::{data_lines, parse_tree_lines, tree_center, CenterResult, RootedTree, Tree};

/// AHU code of a rooted tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// BFS of the component of `root` once the edge `root - blocked` is cut.
/// Entries are `(vertex, index of parent entry)`; the root's parent index is itself.
fn component_order(tree: &Tree, root: usize, blocked: Option<usize>) -> Vec<(usize, usize)> {
    let mut order = vec![(root, 0)];
    let mut head = 0;
    while head < order.len() {
        let (v, parent_idx) = order[head];
        let from = if head == 0 { blocked } else { Some(order[parent_idx].0) };
        for &w in tree.neighbors(v) {
            if Some(w) != from {
                order.push((w, head));
            }
        }
        head += 1;
    }
    order
}

/// Folds children into parents in reverse BFS order; `combine` turns the
/// (unsorted) child values of a vertex into its own value.
fn fold_bottom_up<T>(order: &[(usize, usize)], combine: impl Fn(Vec<T>) -> T) -> T {
    let mut pending: Vec<Vec<T>> = (0..order.len()).map(|_| Vec::new()).collect();
    for idx in (1..order.len()).rev() {
        let children = std::mem::take(&mut pending[idx]);
        let value = combine(children);
        pending[order[idx].1].push(value);
    }
    combine(std::mem::take(&mut pending[0]))
}

fn ahu_combine(mut children: Vec<String>) -> String {
    children.sort_unstable();
    let mut code = String::with_capacity(2 + children.iter().map(String::len).sum::<usize>());
    code.push('(');
    for c in &children {
        code.push_str(c);
    }
    code.push(')');
    code
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Children grouped by code: each group of `m` mutually isomorphic subtrees
/// contributes `m!` on top of the product of the children's own orders.
fn aut_combine(mut children: Vec<(String, BigUint)>) -> (String, BigUint) {
    children.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut order = BigUint::one();
    let mut run = 0;
    for (i, (code, child_order)) in children.iter().enumerate() {
        order *= child_order;
        run += 1;
        if children.get(i + 1).map(|next| &next.0) != Some(code) {
            order *= factorial(run);
            run = 0;
        }
    }
    let code = ahu_combine(children.into_iter().map(|(c, _)| c).collect());
    (code, order)
}

/// Code of the component of `root` after cutting the edge to `blocked`.
pub(crate) fn component_code(tree: &Tree, root: usize, blocked: Option<usize>) -> CanonicalForm {
    CanonicalForm(fold_bottom_up(&component_order(tree, root, blocked), ahu_combine))
}

fn component_code_and_aut(tree: &Tree, root: usize, blocked: Option<usize>) -> (CanonicalForm, BigUint) {
    let order = component_order(tree, root, blocked);
    let (code, aut) = fold_bottom_up(&order, aut_combine);
    (CanonicalForm(code), aut)
}

pub fn canonical_form_rooted(rt: &RootedTree) -> CanonicalForm {
    component_code(rt.tree(), rt.root(), None)
}

pub fn rooted_isomorphic(a: &RootedTree, b: &RootedTree) -> bool {
    a.n() == b.n() && canonical_form_rooted(a) == canonical_form_rooted(b)
}

/// Order of the group of automorphisms fixing the root.
pub fn aut_rooted(rt: &RootedTree) -> BigUint {
    component_code_and_aut(rt.tree(), rt.root(), None).1
}

/// Order of the full automorphism group. Every automorphism fixes the centre,
/// so an edge centre splits the tree into two rooted halves that may swap.
pub fn aut_unrooted(tree: &Tree) -> BigUint {
    match tree_center(tree) {
        CenterResult::Vertex(v) => component_code_and_aut(tree, v, None).1,
        CenterResult::Edge(u, w) => {
            let (code_u, aut_u) = component_code_and_aut(tree, u, Some(w));
            let (code_w, aut_w) = component_code_and_aut(tree, w, Some(u));
            let swap = if code_u == code_w { 2u32 } else { 1 };
            aut_u * aut_w * BigUint::from(swap)
        }
    }
}

/// A rooted tree `(v, P)` with `p + 1 >= 2` vertices, used as a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedPattern {
    shape: RootedTree,
    p: usize,
    aut_root_order: BigUint,
    canonical: CanonicalForm,
}

impl RootedPattern {
    pub fn new(shape: RootedTree) -> Result<Self, PatternError> {
        if shape.n() < 2 {
            return Err(PatternError::PatternTooSmall);
        }
        let (canonical, aut_root_order) = component_code_and_aut(shape.tree(), shape.root(), None);
        Ok(RootedPattern {
            p: shape.n() - 1,
            shape,
            aut_root_order,
            canonical,
        })
    }

    /// Built-in patterns: `edge`, `cherry`, `star<k>` (root with `k` leaves),
    /// `path<k>@end` and `path<k>@mid` (path on `k` vertices rooted at an end
    /// or at vertex `ceil(k/2)`).
    pub fn named(name: &str) -> Result<Self, PatternError> {
        let unknown = || PatternError::UnknownName(name.to_string());
        let (tree, root) = match name {
            "edge" => (Tree::path(2), 1),
            "cherry" => (Tree::path(3), 2),
            _ => {
                if let Some(k) = name.strip_prefix("star") {
                    let k: usize = k.parse().map_err(|_| unknown())?;
                    (Tree::star(k + 1), 1)
                } else if let Some(rest) = name.strip_prefix("path") {
                    let (k, at) = rest.split_once('@').ok_or_else(unknown)?;
                    let k: usize = k.parse().map_err(|_| unknown())?;
                    if k == 0 {
                        return Err(unknown());
                    }
                    let root = match at {
                        "end" => 1,
                        "mid" => k.div_ceil(2),
                        _ => return Err(unknown()),
                    };
                    (Tree::path(k), root)
                } else {
                    return Err(unknown());
                }
            }
        };
        Self::new(RootedTree::new(tree, root)?)
    }

    pub fn shape(&self) -> &RootedTree {
        &self.shape
    }

    /// Number of non-root vertices.
    pub fn p(&self) -> usize {
        self.p
    }

    /// `#Aut(v, P)`.
    pub fn aut_root_order(&self) -> &BigUint {
        &self.aut_root_order
    }

    pub fn canonical(&self) -> &CanonicalForm {
        &self.canonical
    }

    /// Pattern file text: the tree format followed by `root <r>`.
    pub fn to_text(&self) -> String {
        format!("{}root {}\n", self.shape.tree().to_text(), self.shape.root())
    }
}

impl FromStr for RootedPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = data_lines(s);
        let tree = parse_tree_lines(&mut lines)?;
        let (no, text) = lines.next().ok_or(TreeError::Parse {
            line: 0,
            msg: "missing `root <r>` line".into(),
        })?;
        let bad = |msg: &str| TreeError::Parse {
            line: no,
            msg: msg.into(),
        };
        let root = match text.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["root", r] => r.parse().map_err(|_| bad("bad root vertex"))?,
            _ => return Err(bad("expected `root <r>`").into()),
        };
        if let Some((no, _)) = lines.next() {
            return Err(TreeError::Parse {
                line: no,
                msg: "trailing data after root line".into(),
            }
            .into());
        }
        Self::new(RootedTree::new(tree, root)?)
    }
}

/// Number of labelled rooted trees on `p + 1` fixed labels with fixed root
/// that are isomorphic to the pattern: `p! / #Aut(v, P)`.
pub fn labelled_rooted_count(pat: &RootedPattern) -> BigUint {
    let (q, r) = factorial(pat.p()).div_rem(pat.aut_root_order());
    assert!(
        r.is_zero(),
        "#Aut(v,P) = {} does not divide {}!",
        pat.aut_root_order(),
        pat.p()
    );
    q
}
