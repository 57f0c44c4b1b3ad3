//! Maximum matching on general graphs (blossom contraction) and the
//! polynomial-time solver for exact packing by length-2 paths.
//!
//! Packing length-2 paths so that every edge is covered exactly once is a
//! perfect matching question on the line graph: two host edges sharing a
//! vertex pair up into one path. Line graphs are not bipartite, so the
//! matching search contracts odd cycles.

use crate::graph::{line_graph, Embedding, Graph, Instance};
use crate::solver::Decision;

/// Maximum-cardinality matching as `matched[v] = Some(partner)`.
///
/// Edmonds-style search: grow alternating trees from free vertices,
/// contracting blossoms (odd cycles) to their base as they appear, and
/// augment along any alternating path reaching another free vertex.
pub fn max_matching(graph: &Graph) -> Vec<Option<usize>> {
    let n = graph.vertex_count();
    let none = usize::MAX;
    let mut matched = vec![none; n];
    let mut parent = vec![none; n];
    let mut base: Vec<usize> = (0..n).collect();

    fn lca(
        mut v: usize,
        mut w: usize,
        parent: &[usize],
        base: &[usize],
        matched: &[usize],
        none: usize,
    ) -> usize {
        let mut on_path = vec![false; parent.len()];
        loop {
            v = base[v];
            on_path[v] = true;
            if matched[v] == none {
                break;
            }
            v = parent[matched[v]];
        }
        loop {
            w = base[w];
            if on_path[w] {
                return w;
            }
            w = parent[matched[w]];
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn mark_blossom(
        mut v: usize,
        b: usize,
        mut child: usize,
        parent: &mut [usize],
        base: &[usize],
        matched: &[usize],
        in_blossom: &mut [bool],
    ) {
        while base[v] != b {
            in_blossom[base[v]] = true;
            in_blossom[base[matched[v]]] = true;
            parent[v] = child;
            child = matched[v];
            v = parent[matched[v]];
        }
    }

    for start in 0..n {
        if matched[start] != none {
            continue;
        }
        // BFS for an augmenting path from `start`.
        parent.iter_mut().for_each(|p| *p = none);
        for (i, b) in base.iter_mut().enumerate() {
            *b = i;
        }
        let mut in_tree = vec![false; n];
        in_tree[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut finish = none;
        'bfs: while let Some(v) = queue.pop_front() {
            let deg = graph.neighbors(v).len();
            for i in 0..deg {
                let (to, _) = graph.neighbors(v)[i];
                if base[v] == base[to] || matched[v] == to {
                    continue;
                }
                if to == start || (matched[to] != none && parent[matched[to]] != none) {
                    // Odd cycle: contract the blossom to its base.
                    let b = lca(v, to, &parent, &base, &matched, none);
                    let mut in_blossom = vec![false; n];
                    mark_blossom(v, b, to, &mut parent, &base, &matched, &mut in_blossom);
                    mark_blossom(to, b, v, &mut parent, &base, &matched, &mut in_blossom);
                    for u in 0..n {
                        if in_blossom[base[u]] {
                            base[u] = b;
                            if !in_tree[u] {
                                in_tree[u] = true;
                                queue.push_back(u);
                            }
                        }
                    }
                } else if parent[to] == none {
                    parent[to] = v;
                    if matched[to] == none {
                        finish = to;
                        break 'bfs;
                    }
                    in_tree[matched[to]] = true;
                    queue.push_back(matched[to]);
                }
            }
        }
        // Flip matched/unmatched along the augmenting path.
        let mut v = finish;
        while v != none {
            let pv = parent[v];
            let next = matched[pv];
            matched[v] = pv;
            matched[pv] = v;
            v = next;
        }
    }

    matched
        .into_iter()
        .map(|m| (m != none).then_some(m))
        .collect()
}

pub fn matching_size(matched: &[Option<usize>]) -> usize {
    matched.iter().flatten().count() / 2
}

/// Exact packing by length-2 paths: yes iff the line graph has a perfect
/// matching; each matched pair of host edges shares a vertex and becomes one
/// embedded path u-v-w.
pub fn solve_length2_exact(graph: &Graph) -> Decision {
    let m = graph.edge_count();
    if m % 2 != 0 {
        return Decision::No;
    }
    if m == 0 {
        return Decision::Yes(Embedding::new(Vec::new()));
    }
    let (lg, edge_of) = line_graph(graph);
    let matched = max_matching(&lg);
    if matching_size(&matched) * 2 != m {
        return Decision::No;
    }
    let mut paths = Vec::with_capacity(m / 2);
    for (lv, partner) in matched.iter().enumerate() {
        let lw = partner.expect("perfect matching");
        if lv > lw {
            continue;
        }
        let (a, b) = graph.edges()[edge_of[lv]];
        let (c, d) = graph.edges()[edge_of[lw]];
        // The shared endpoint is the path's middle vertex.
        let (u, v, w) = if a == c {
            (b, a, d)
        } else if a == d {
            (b, a, c)
        } else if b == c {
            (a, b, d)
        } else {
            debug_assert_eq!(b, d, "matched line vertices must share an endpoint");
            (a, b, c)
        };
        paths.push(vec![u, v, w]);
    }
    Decision::Yes(Embedding::new(paths))
}

/// True when no augmenting path exists for `matched`: an independent
/// maximality check via alternating BFS from every free vertex, used by
/// tests. Blossoms are handled by brute force on small graphs only: we try
/// every free-vertex pair and search alternating paths with a DFS over
/// matched-edge states.
pub fn has_augmenting_path(graph: &Graph, matched: &[Option<usize>]) -> bool {
    fn dfs(
        graph: &Graph,
        matched: &[Option<usize>],
        v: usize,
        need_matched: bool,
        visited_edges: &mut Vec<bool>,
        on_path: &mut Vec<bool>,
    ) -> bool {
        // Arrived at a free vertex over an unmatched edge: augmenting.
        if need_matched && matched[v].is_none() {
            return true;
        }
        let deg = graph.neighbors(v).len();
        for i in 0..deg {
            let (w, eid) = graph.neighbors(v)[i];
            if visited_edges[eid] || on_path[w] {
                continue;
            }
            let is_matched_edge = matched[v] == Some(w);
            if is_matched_edge != need_matched {
                continue;
            }
            visited_edges[eid] = true;
            on_path[w] = true;
            if dfs(graph, matched, w, !need_matched, visited_edges, on_path) {
                return true;
            }
            on_path[w] = false;
            visited_edges[eid] = false;
        }
        false
    }

    for v in 0..graph.vertex_count() {
        if matched[v].is_some() {
            continue;
        }
        let mut visited = vec![false; graph.edge_count()];
        let mut on_path = vec![false; graph.vertex_count()];
        on_path[v] = true;
        if dfs(graph, matched, v, false, &mut visited, &mut on_path) {
            return true;
        }
    }
    false
}
