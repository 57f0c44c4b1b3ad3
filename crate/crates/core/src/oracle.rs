//! Exhaustive backtracking solver for small instances. Every specialized
//! solver is cross-checked against this one.

use crate::graph::{Embedding, Graph, Instance};

/// Outcome of a budgeted exhaustive search. `Budget` means the search was cut
/// off before completing; it is never conflated with `No`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Yes(Embedding),
    No,
    Budget,
}

impl OracleOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleOutcome::Yes(_))
    }
}

pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Decide whether the requested paths pack edge-disjointly, within a
/// node-expansion budget.
///
/// Paths are placed in order of decreasing length. Equal-length paths are
/// deduplicated by requiring their anchor edges (the smallest edge id a path
/// occupies) to increase in placement order; anchors of edge-disjoint paths
/// are always distinct, so this loses no solutions.
pub fn solve_bruteforce(instance: &Instance, budget: u64) -> OracleOutcome {
    let g = &instance.graph;
    let k = instance.lengths.len();
    if instance.exact && instance.total_length() != g.edge_count() {
        return OracleOutcome::No;
    }
    if k == 0 {
        return OracleOutcome::Yes(Embedding::new(Vec::new()));
    }
    if instance.total_length() > g.edge_count() {
        return OracleOutcome::No;
    }

    let mut order: Vec<(usize, usize)> = instance.lengths.iter().copied().enumerate().collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut s = Searcher {
        graph: g,
        order,
        used: vec![false; g.edge_count()],
        free_edges: g.edge_count(),
        on_path: vec![false; g.vertex_count()],
        cur_path: Vec::new(),
        cur_edges: Vec::new(),
        placed: Vec::new(),
        anchors: Vec::new(),
        budget,
        expansions: 0,
        exhausted: false,
        result: None,
    };
    s.place_next(0);
    match s.result {
        Some(paths) => {
            let mut out = vec![Vec::new(); k];
            for (slot, path) in paths {
                out[slot] = path;
            }
            OracleOutcome::Yes(Embedding::new(out))
        }
        None if s.exhausted => OracleOutcome::Budget,
        None => OracleOutcome::No,
    }
}

/// Number of distinct labeled assignments of requested paths to edge sets.
/// Reversals of the same vertex sequence are not double counted; two
/// requested paths of equal length taking swapped edge sets are.
///
/// The caller keeps instances small enough to enumerate.
pub fn count_embeddings(instance: &Instance) -> u64 {
    let g = &instance.graph;
    if instance.exact && instance.total_length() != g.edge_count() {
        return 0;
    }
    if instance.lengths.is_empty() {
        return 1;
    }
    if instance.total_length() > g.edge_count() {
        return 0;
    }
    let order: Vec<(usize, usize)> = instance.lengths.iter().copied().enumerate().collect();
    let mut s = Searcher {
        graph: g,
        order,
        used: vec![false; g.edge_count()],
        free_edges: g.edge_count(),
        on_path: vec![false; g.vertex_count()],
        cur_path: Vec::new(),
        cur_edges: Vec::new(),
        placed: Vec::new(),
        anchors: Vec::new(),
        budget: u64::MAX,
        expansions: 0,
        exhausted: false,
        result: None,
    };
    s.count(0)
}

struct Searcher<'a> {
    graph: &'a Graph,
    /// `(original index, length)` in placement order.
    order: Vec<(usize, usize)>,
    used: Vec<bool>,
    free_edges: usize,
    on_path: Vec<bool>,
    cur_path: Vec<usize>,
    cur_edges: Vec<usize>,
    placed: Vec<(usize, Vec<usize>)>,
    anchors: Vec<usize>,
    budget: u64,
    expansions: u64,
    exhausted: bool,
    result: Option<Vec<(usize, Vec<usize>)>>,
}

impl<'a> Searcher<'a> {
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            self.exhausted = true;
            return false;
        }
        true
    }

    fn remaining_total(&self, idx: usize) -> usize {
        self.order[idx..].iter().map(|&(_, l)| l).sum()
    }

    /// Decision search: place path `idx`, reporting success through
    /// `self.result`.
    fn place_next(&mut self, idx: usize) -> bool {
        if idx == self.order.len() {
            self.result = Some(self.placed.clone());
            return true;
        }
        if self.remaining_total(idx) > self.free_edges {
            return false;
        }
        let len = self.order[idx].1;
        let min_anchor = if idx > 0 && self.order[idx - 1].1 == len {
            self.anchors[idx - 1] + 1
        } else {
            0
        };
        for start in 0..self.graph.vertex_count() {
            self.cur_path.push(start);
            self.on_path[start] = true;
            let found = self.grow(idx, len, min_anchor);
            self.on_path[start] = false;
            self.cur_path.pop();
            if found || self.exhausted {
                return found;
            }
        }
        false
    }

    fn grow(&mut self, idx: usize, remaining: usize, min_anchor: usize) -> bool {
        if !self.tick() {
            return false;
        }
        if remaining == 0 {
            let first = self.cur_path[0];
            let last = *self.cur_path.last().unwrap();
            if first > last {
                return false;
            }
            let anchor = *self.cur_edges.iter().min().unwrap();
            if anchor < min_anchor {
                return false;
            }
            // Commit this placement. The scratch path state is handed over to
            // the recursion (vertices may be shared across paths, only edges
            // are exclusive) and restored afterwards.
            let path = std::mem::take(&mut self.cur_path);
            let edges = std::mem::take(&mut self.cur_edges);
            for &v in &path {
                self.on_path[v] = false;
            }
            for &e in &edges {
                self.used[e] = true;
            }
            self.free_edges -= edges.len();
            let slot = self.order[idx].0;
            self.placed.push((slot, path.clone()));
            self.anchors.push(anchor);
            let found = self.place_next(idx + 1);
            self.anchors.pop();
            self.placed.pop();
            for &e in &edges {
                self.used[e] = false;
            }
            self.free_edges += edges.len();
            for &v in &path {
                self.on_path[v] = true;
            }
            self.cur_path = path;
            self.cur_edges = edges;
            return found;
        }
        let v = *self.cur_path.last().unwrap();
        let deg = self.graph.neighbors(v).len();
        for i in 0..deg {
            let (w, eid) = self.graph.neighbors(v)[i];
            if self.used[eid] || self.on_path[w] {
                continue;
            }
            self.cur_path.push(w);
            self.on_path[w] = true;
            self.cur_edges.push(eid);
            let found = self.grow(idx, remaining - 1, min_anchor);
            self.cur_edges.pop();
            self.on_path[w] = false;
            self.cur_path.pop();
            if found || self.exhausted {
                return found;
            }
        }
        false
    }

    /// Counting search: paths in input order, no anchor symmetry breaking.
    fn count(&mut self, idx: usize) -> u64 {
        if idx == self.order.len() {
            return 1;
        }
        if self.remaining_total(idx) > self.free_edges {
            return 0;
        }
        let len = self.order[idx].1;
        let mut total = 0u64;
        // Enumerate placements of path `idx`; for each, recurse.
        let placements = self.collect_placements(len);
        for (path, edges) in placements {
            for &e in &edges {
                self.used[e] = true;
            }
            self.free_edges -= edges.len();
            self.placed.push((self.order[idx].0, path));
            total += self.count(idx + 1);
            self.placed.pop();
            for &e in &edges {
                self.used[e] = false;
            }
            self.free_edges += edges.len();
        }
        total
    }

    fn collect_placements(&mut self, len: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for start in 0..self.graph.vertex_count() {
            self.cur_path.push(start);
            self.on_path[start] = true;
            self.collect_grow(len, &mut out);
            self.on_path[start] = false;
            self.cur_path.pop();
        }
        out
    }

    fn collect_grow(&mut self, remaining: usize, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if remaining == 0 {
            let first = self.cur_path[0];
            let last = *self.cur_path.last().unwrap();
            if first <= last {
                out.push((self.cur_path.clone(), self.cur_edges.clone()));
            }
            return;
        }
        let v = *self.cur_path.last().unwrap();
        let deg = self.graph.neighbors(v).len();
        for i in 0..deg {
            let (w, eid) = self.graph.neighbors(v)[i];
            if self.used[eid] || self.on_path[w] {
                continue;
            }
            self.cur_path.push(w);
            self.on_path[w] = true;
            self.cur_edges.push(eid);
            self.collect_grow(remaining - 1, out);
            self.cur_edges.pop();
            self.on_path[w] = false;
            self.cur_path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{embedding_ok, Graph};

    fn inst(n: usize, edges: &[(usize, usize)], lengths: &[usize], exact: bool) -> Instance {
        Instance::new(
            Graph::from_edges(n, edges.iter().copied()).unwrap(),
            lengths.to_vec(),
            exact,
        )
    }

    #[test]
    fn path_on_three_vertices_hosts_one_length_two_path() {
        let i = inst(3, &[(0, 1), (1, 2)], &[2], false);
        match solve_bruteforce(&i, DEFAULT_BUDGET) {
            OracleOutcome::Yes(emb) => {
                assert!(embedding_ok(&i, &emb));
                assert_eq!(emb.paths[0], vec![0, 1, 2]);
            }
            other => panic!("expected yes, got {other:?}"),
        }
    }

    #[test]
    fn triangle_rejects_length_three_path() {
        // A length-3 path needs 4 distinct vertices.
        let i = inst(3, &[(0, 1), (1, 2), (0, 2)], &[3], false);
        assert_eq!(solve_bruteforce(&i, DEFAULT_BUDGET), OracleOutcome::No);
    }

    #[test]
    fn star_k16_exact_three_length_two_paths() {
        let edges: Vec<(usize, usize)> = (1..=6).map(|i| (0, i)).collect();
        let i = inst(7, &edges, &[2, 2, 2], true);
        match solve_bruteforce(&i, DEFAULT_BUDGET) {
            OracleOutcome::Yes(emb) => assert!(embedding_ok(&i, &emb)),
            other => panic!("expected yes, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_distinct_from_no() {
        // No simple path of length 3 exists in a star, but deciding that
        // takes more than two node expansions.
        let edges: Vec<(usize, usize)> = (1..=6).map(|i| (0, i)).collect();
        let i = inst(7, &edges, &[3], false);
        assert_eq!(solve_bruteforce(&i, 2), OracleOutcome::Budget);
        assert_eq!(solve_bruteforce(&i, DEFAULT_BUDGET), OracleOutcome::No);
    }

    #[test]
    fn exact_requires_total_length_to_match_edge_count() {
        let i = inst(3, &[(0, 1), (1, 2)], &[1], true);
        assert_eq!(solve_bruteforce(&i, DEFAULT_BUDGET), OracleOutcome::No);
    }

    #[test]
    fn count_single_edge() {
        assert_eq!(count_embeddings(&inst(2, &[(0, 1)], &[1], false)), 1);
    }

    #[test]
    fn count_two_unit_paths_on_path_graph() {
        // Which requested path takes which edge: two labeled assignments.
        assert_eq!(
            count_embeddings(&inst(3, &[(0, 1), (1, 2)], &[1, 1], false)),
            2
        );
    }

    #[test]
    fn count_length_two_in_triangle() {
        // All 2-edge adjacent subsets of a triangle: 3.
        assert_eq!(
            count_embeddings(&inst(3, &[(0, 1), (1, 2), (0, 2)], &[2], false)),
            3
        );
    }
}
