//! Labelled trees on vertices `1..=n`.
//!
//! All public interfaces use 1-based vertex ids. Trees are validated once at
//! construction and immutable afterwards.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::TreeError;

/// A labelled undirected tree on the vertex set `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    /// Normalized `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    /// `adj[v - 1]` holds the sorted neighbours of `v`.
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Validates an edge list and builds the tree.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(TreeError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateEdge(w[0].0, w[0].1));
        }
        if norm.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                expected: n - 1,
                got: norm.len(),
            });
        }
        let tree = Self::from_sorted_edges(n, norm);
        if tree.bfs_order(1).len() != n {
            return Err(TreeError::Disconnected);
        }
        Ok(tree)
    }

    /// Builds without validation; `edges` must already be normalized and sorted.
    pub(crate) fn from_sorted_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Tree { n, edges, adj }
    }

    /// Builds from arbitrary unsorted edges known to form a tree.
    pub(crate) fn from_edges_unchecked(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut norm: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        norm.sort_unstable();
        Self::from_sorted_edges(n, norm)
    }

    /// Single-vertex tree.
    pub fn singleton() -> Self {
        Self::from_sorted_edges(1, Vec::new())
    }

    /// The path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Self {
        assert!(n >= 1, "path needs at least one vertex");
        Self::from_sorted_edges(n, (1..n).map(|v| (v, v + 1)).collect())
    }

    /// The star with centre `1` and leaves `2..=n`.
    pub fn star(n: usize) -> Self {
        assert!(n >= 1, "star needs at least one vertex");
        Self::from_sorted_edges(n, (2..=n).map(|v| (1, v)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        (1..=self.n).contains(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.contains_vertex(u) && self.adj[u - 1].binary_search(&v).is_ok()
    }

    /// Applies a relabelling. `perm[v - 1]` is the new label of vertex `v`.
    ///
    /// Panics if `perm` is not a permutation of `1..=n`.
    pub fn relabel(&self, perm: &[usize]) -> Tree {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(p >= 1 && p <= self.n && !seen[p - 1], "not a permutation");
            seen[p - 1] = true;
        }
        Self::from_edges_unchecked(
            self.n,
            self.edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1])),
        )
    }

    /// Vertices in BFS order from `start`, paired with their BFS parent (0 for the start).
    pub(crate) fn bfs_parents(&self, start: usize) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([(start, 0)]);
        seen[start - 1] = true;
        while let Some((v, parent)) = queue.pop_front() {
            order.push((v, parent));
            for &w in &self.adj[v - 1] {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    queue.push_back((w, v));
                }
            }
        }
        order
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        self.bfs_parents(start).into_iter().map(|(v, _)| v).collect()
    }

    /// Encodes into the text format: a `n <count>` header then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree(n={}, {:?})", self.n, self.edges)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Data lines of a text document: comments (`#`) and blank lines are skipped.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> TreeError {
    TreeError::Parse {
        line,
        msg: msg.into(),
    }
}

pub(crate) fn parse_header(line: Option<(usize, &str)>) -> Result<usize, TreeError> {
    let (no, text) = line.ok_or_else(|| parse_err(0, "missing `n <integer>` header"))?;
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("n"), Some(count), None) => count
            .parse()
            .map_err(|_| parse_err(no, format!("bad vertex count `{count}`"))),
        _ => Err(parse_err(no, "expected `n <integer>`")),
    }
}

fn parse_pair(no: usize, text: &str) -> Result<(usize, usize), TreeError> {
    let nums: Vec<&str> = text.split_whitespace().collect();
    if nums.len() != 2 {
        return Err(parse_err(no, "expected `<u> <v>`"));
    }
    let u = nums[0]
        .parse()
        .map_err(|_| parse_err(no, format!("bad vertex `{}`", nums[0])))?;
    let v = nums[1]
        .parse()
        .map_err(|_| parse_err(no, format!("bad vertex `{}`", nums[1])))?;
    Ok((u, v))
}

/// Reads the header and exactly `n - 1` edge lines from `lines`.
pub(crate) fn parse_tree_lines<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<Tree, TreeError> {
    let n = parse_header(lines.next())?;
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let (no, text) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {} edge lines", n.saturating_sub(1))))?;
        edges.push(parse_pair(no, text)?);
    }
    Tree::new(n, &edges)
}

impl FromStr for Tree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = data_lines(s);
        let tree = parse_tree_lines(&mut lines)?;
        if let Some((no, _)) = lines.next() {
            return Err(parse_err(no, "trailing data after edge list"));
        }
        Ok(tree)
    }
}

/// A tree with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    tree: Tree,
    root: usize,
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<Self, TreeError> {
        if !tree.contains_vertex(root) {
            return Err(TreeError::VertexOutOfRange {
                vertex: root,
                n: tree.n(),
            });
        }
        Ok(RootedTree { tree, root })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn into_parts(self) -> (Tree, usize) {
        (self.tree, self.root)
    }
}

/// A Prüfer word of length `n - 2` over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferSequence {
    n: usize,
    seq: Vec<usize>,
}

impl PruferSequence {
    pub fn new(n: usize, seq: Vec<usize>) -> Result<Self, TreeError> {
        if n < 2 {
            return Err(TreeError::TooSmall(n));
        }
        if seq.len() != n - 2 {
            return Err(TreeError::SequenceLength {
                n,
                expected: n - 2,
                got: seq.len(),
            });
        }
        if let Some(&v) = seq.iter().find(|&&v| v == 0 || v > n) {
            return Err(TreeError::VertexOutOfRange { vertex: v, n });
        }
        Ok(PruferSequence { n, seq })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    /// Two-line text form: `n <count>` then the space separated entries.
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.seq.iter().map(ToString::to_string).collect();
        format!("n {}\n{}\n", self.n, body.join(" "))
    }
}

impl FromStr for PruferSequence {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = data_lines(s);
        let n = parse_header(lines.next())?;
        let mut seq = Vec::new();
        for (no, text) in lines {
            for tok in text.split_whitespace() {
                seq.push(
                    tok.parse()
                        .map_err(|_| parse_err(no, format!("bad entry `{tok}`")))?,
                );
            }
        }
        PruferSequence::new(n, seq)
    }
}

/// Decodes a Prüfer sequence, always attaching the smallest remaining leaf.
pub fn prufer_decode(code: &PruferSequence) -> Tree {
    let n = code.n;
    let mut edges = Vec::with_capacity(n - 1);
    decode_into(n, &code.seq, &mut vec![0; n + 1], &mut edges);
    Tree::from_edges_unchecked(n, edges)
}

/// Linear-time decoder writing unnormalized edges into `edges`.
/// `degree` is scratch space of length `n + 1`.
pub(crate) fn decode_into(n: usize, seq: &[usize], degree: &mut [usize], edges: &mut Vec<(usize, usize)>) {
    debug_assert!(n >= 2 && seq.len() == n - 2);
    edges.clear();
    degree[1..=n].fill(1);
    for &v in seq {
        degree[v] += 1;
    }
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n));
}

/// Encodes a tree with `n >= 2` as its Prüfer sequence.
pub fn prufer_encode(tree: &Tree) -> Result<PruferSequence, TreeError> {
    let n = tree.n();
    if n < 2 {
        return Err(TreeError::TooSmall(n));
    }
    let mut parent = vec![0; n + 1];
    for (v, p) in tree.bfs_parents(n) {
        parent[v] = p;
    }
    let mut degree: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { tree.degree(v) }).collect();
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    let mut seq = Vec::with_capacity(n - 2);
    for _ in 0..n - 2 {
        let next = parent[leaf];
        seq.push(next);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    Ok(PruferSequence { n, seq })
}

/// The centre of a tree: one vertex or one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CenterResult {
    Vertex(usize),
    /// Adjacent pair, smaller label first.
    Edge(usize, usize),
}

/// Finds the centre by repeatedly stripping all current leaves.
pub fn tree_center(tree: &Tree) -> CenterResult {
    let n = tree.n();
    if n == 1 {
        return CenterResult::Vertex(1);
    }
    let mut degree: Vec<usize> = (1..=n).map(|v| tree.degree(v)).collect();
    let mut layer: Vec<usize> = (1..=n).filter(|&v| degree[v - 1] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf - 1] = 0;
            for &w in tree.neighbors(leaf) {
                if degree[w - 1] > 0 {
                    degree[w - 1] -= 1;
                    if degree[w - 1] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    // every survivor passed through degree 1 in the final round
    layer.sort_unstable();
    match layer.as_slice() {
        [v] => CenterResult::Vertex(*v),
        [u, v] => CenterResult::Edge(*u, *v),
        other => unreachable!("leaf peeling left {} vertices", other.len()),
    }
}

/// Roots a tree canonically at its centre, subdividing a central edge with
/// the new vertex `n + 1` when the centre is an edge.
pub fn rootify(tree: &Tree) -> RootedTree {
    match tree_center(tree) {
        CenterResult::Vertex(v) => RootedTree {
            tree: tree.clone(),
            root: v,
        },
        CenterResult::Edge(u, w) => {
            let mid = tree.n() + 1;
            let edges = tree
                .edges()
                .iter()
                .copied()
                .filter(|&e| e != (u, w))
                .chain([(u, mid), (w, mid)]);
            RootedTree {
                tree: Tree::from_edges_unchecked(mid, edges),
                root: mid,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(n: usize, s: &[usize]) -> PruferSequence {
        PruferSequence::new(n, s.to_vec()).unwrap()
    }

    #[test]
    fn build_rejects_malformed_edge_sets() {
        assert!(Tree::new(3, &[(1, 2), (2, 3)]).is_ok());
        assert_eq!(
            Tree::new(3, &[(1, 2), (1, 3), (2, 3)]),
            Err(TreeError::WrongEdgeCount { expected: 2, got: 3 })
        );
        assert_eq!(Tree::new(1, &[]).unwrap().n(), 1);
        assert_eq!(Tree::new(3, &[(1, 1), (2, 3)]), Err(TreeError::SelfLoop(1)));
        assert_eq!(
            Tree::new(3, &[(1, 2), (2, 1)]),
            Err(TreeError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Tree::new(3, &[(1, 2), (2, 4)]),
            Err(TreeError::VertexOutOfRange { vertex: 4, n: 3 })
        );
        assert_eq!(
            Tree::new(4, &[(1, 2), (1, 2), (3, 4)]),
            Err(TreeError::DuplicateEdge(1, 2))
        );
        // 4 vertices, 3 edges, but a triangle plus an isolated vertex
        assert_eq!(
            Tree::new(4, &[(1, 2), (2, 3), (1, 3)]),
            Err(TreeError::Disconnected)
        );
        assert_eq!(Tree::new(0, &[]), Err(TreeError::Empty));
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        let t = Tree::new(6, &[(1, 2), (1, 3), (3, 4), (3, 5), (5, 6)]).unwrap();
        let total: usize = (1..=6).map(|v| t.degree(v)).sum();
        assert_eq!(total, 2 * 5);
    }

    #[test]
    fn decode_small_examples() {
        assert_eq!(prufer_decode(&seq(2, &[])), Tree::path(2));
        assert_eq!(prufer_decode(&seq(3, &[2])), Tree::path(3));
        assert_eq!(prufer_decode(&seq(4, &[1, 1])), Tree::star(4));
    }

    #[test]
    fn encode_small_examples() {
        assert_eq!(prufer_encode(&Tree::path(2)).unwrap().as_slice(), &[] as &[usize]);
        assert_eq!(prufer_encode(&Tree::path(3)).unwrap().as_slice(), &[2]);
        assert_eq!(prufer_encode(&Tree::star(4)).unwrap().as_slice(), &[1, 1]);
        assert_eq!(prufer_encode(&Tree::singleton()), Err(TreeError::TooSmall(1)));
    }

    #[test]
    fn all_sequences_at_four_give_distinct_trees_and_round_trip() {
        let mut trees = std::collections::HashSet::new();
        for a in 1..=4 {
            for b in 1..=4 {
                let s = seq(4, &[a, b]);
                let t = prufer_decode(&s);
                assert_eq!(prufer_encode(&t).unwrap(), s);
                trees.insert(t);
            }
        }
        assert_eq!(trees.len(), 16);
    }

    #[test]
    fn decoding_all_words_hits_every_tree_once() {
        for n in 3..=5usize {
            let total = n.pow(n as u32 - 2);
            let mut trees = std::collections::HashSet::new();
            for idx in 0..total {
                let mut word = Vec::new();
                let mut rest = idx;
                for _ in 0..n - 2 {
                    word.push(rest % n + 1);
                    rest /= n;
                }
                trees.insert(prufer_decode(&seq(n, &word)));
            }
            assert_eq!(trees.len(), total, "n = {n}");
        }
    }

    #[test]
    fn prufer_sequence_validation() {
        assert_eq!(PruferSequence::new(1, vec![]), Err(TreeError::TooSmall(1)));
        assert!(matches!(
            PruferSequence::new(4, vec![1]),
            Err(TreeError::SequenceLength { .. })
        ));
        assert!(matches!(
            PruferSequence::new(4, vec![1, 5]),
            Err(TreeError::VertexOutOfRange { vertex: 5, n: 4 })
        ));
    }

    #[test]
    fn centers() {
        assert_eq!(tree_center(&Tree::path(3)), CenterResult::Vertex(2));
        assert_eq!(tree_center(&Tree::path(4)), CenterResult::Edge(2, 3));
        assert_eq!(tree_center(&Tree::star(5)), CenterResult::Vertex(1));
        assert_eq!(tree_center(&Tree::singleton()), CenterResult::Vertex(1));
        assert_eq!(tree_center(&Tree::path(2)), CenterResult::Edge(1, 2));
        // spider: centre 1 with legs of length 2, 2, 1
        let t = Tree::new(6, &[(1, 2), (2, 3), (1, 4), (4, 5), (1, 6)]).unwrap();
        assert_eq!(tree_center(&t), CenterResult::Vertex(1));
    }

    #[test]
    fn rootify_examples() {
        let r = rootify(&Tree::path(5));
        assert_eq!((r.root(), r.tree()), (3, &Tree::path(5)));

        let r = rootify(&Tree::path(4));
        assert_eq!(r.root(), 5);
        assert_eq!(r.tree().edges(), &[(1, 2), (2, 5), (3, 4), (3, 5)]);

        let r = rootify(&Tree::path(2));
        assert_eq!(r.root(), 3);
        assert_eq!(r.tree().edges(), &[(1, 3), (2, 3)]);
        assert_eq!(tree_center(r.tree()), CenterResult::Vertex(3));
    }

    #[test]
    fn text_formats() {
        let t: Tree = "# a path\nn 3\n1 2\n\n2 3\n".parse().unwrap();
        assert_eq!(t, Tree::path(3));
        assert_eq!(t.to_text().parse::<Tree>().unwrap(), t);
        assert_eq!("n 1\n".parse::<Tree>().unwrap(), Tree::singleton());
        assert!(matches!("n 3\n1 2\n".parse::<Tree>(), Err(TreeError::Parse { .. })));
        assert!(matches!("3\n".parse::<Tree>(), Err(TreeError::Parse { .. })));
        assert!(matches!("n 2\n1 2\n1 2\n".parse::<Tree>(), Err(TreeError::Parse { .. })));

        let s: PruferSequence = "n 2\n".parse().unwrap();
        assert_eq!(s, seq(2, &[]));
        let s: PruferSequence = "n 5\n1 1 4\n".parse().unwrap();
        assert_eq!(s.to_text(), "n 5\n1 1 4\n");
    }

    fn arb_tree() -> impl Strategy<Value = Tree> {
        (2usize..=9).prop_flat_map(|n| {
            prop::collection::vec(1..=n, n - 2)
                .prop_map(move |s| prufer_decode(&PruferSequence::new(n, s).unwrap()))
        })
    }

    fn arb_tree_and_perm() -> impl Strategy<Value = (Tree, Vec<usize>)> {
        arb_tree().prop_flat_map(|t| {
            let n = t.n();
            (Just(t), Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        })
    }

    proptest! {
        #[test]
        fn encode_then_decode_is_identity(t in arb_tree()) {
            let code = prufer_encode(&t).unwrap();
            prop_assert_eq!(prufer_decode(&code), t);
        }

        #[test]
        fn center_follows_relabelling((t, perm) in arb_tree_and_perm()) {
            let mapped = match tree_center(&t) {
                CenterResult::Vertex(v) => CenterResult::Vertex(perm[v - 1]),
                CenterResult::Edge(u, v) => {
                    let (a, b) = (perm[u - 1], perm[v - 1]);
                    CenterResult::Edge(a.min(b), a.max(b))
                }
            };
            prop_assert_eq!(tree_center(&t.relabel(&perm)), mapped);
            if let CenterResult::Edge(u, v) = tree_center(&t) {
                prop_assert!(t.has_edge(u, v));
            }
        }

        #[test]
        fn rootify_is_idempotent(t in arb_tree()) {
            let once = rootify(&t);
            let twice = rootify(once.tree());
            prop_assert_eq!(&twice, &once);
            prop_assert_eq!(tree_center(once.tree()), CenterResult::Vertex(once.root()));
        }
    }
}
