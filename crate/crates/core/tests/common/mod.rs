//! Brute-force oracles shared by the integration suites. Nothing here uses
//! canonical codes: isomorphisms are found by plain backtracking over vertex
//! assignments that preserve adjacency.

#![allow(dead_code)]

use treepattern::Tree;

/// Counts adjacency-preserving bijections `a -> b`, optionally forcing
/// `a_root -> b_root`. Stops after `limit` maps.
fn count_isomorphisms(a: &Tree, b: &Tree, roots: Option<(usize, usize)>, limit: u64) -> u64 {
    let n = a.n();
    if n != b.n() || a.edges().len() != b.edges().len() {
        return 0;
    }
    let mut image = vec![0usize; n + 1];
    let mut used = vec![false; n + 1];
    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        a: &Tree,
        b: &Tree,
        roots: Option<(usize, usize)>,
        image: &mut [usize],
        used: &mut [bool],
        found: &mut u64,
        limit: u64,
    ) {
        let n = a.n();
        if *found >= limit {
            return;
        }
        if v > n {
            *found += 1;
            return;
        }
        for target in 1..=n {
            if used[target] || a.degree(v) != b.degree(target) {
                continue;
            }
            if let Some((ra, rb)) = roots {
                if (v == ra) != (target == rb) {
                    continue;
                }
            }
            let consistent = (1..v).all(|w| a.has_edge(v, w) == b.has_edge(target, image[w]));
            if !consistent {
                continue;
            }
            image[v] = target;
            used[target] = true;
            go(v + 1, a, b, roots, image, used, found, limit);
            used[target] = false;
        }
    }
    let mut found = 0;
    go(1, a, b, roots, &mut image, &mut used, &mut found, limit);
    found
}

/// `#Aut(T)` by exhaustive search.
pub fn brute_aut(t: &Tree) -> u64 {
    count_isomorphisms(t, t, None, u64::MAX)
}

/// `#Aut(root, T)` by exhaustive search.
pub fn brute_aut_rooted(t: &Tree, root: usize) -> u64 {
    count_isomorphisms(t, t, Some((root, root)), u64::MAX)
}

/// Whether a root-preserving isomorphism exists.
pub fn brute_rooted_isomorphic(a: &Tree, ra: usize, b: &Tree, rb: usize) -> bool {
    count_isomorphisms(a, b, Some((ra, rb)), 1) > 0
}

/// All labelled trees on `n` vertices, by decoding every Prüfer word.
pub fn all_trees(n: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    treepattern::oracle::enumerate_trees_with_cap(n, 9, |t| out.push(t.clone())).unwrap();
    out
}
