//! Graph representation, the instance file format, structural classification
//! and the certificate verifier.
//!
//! Vertices are dense 0-indexed ids. Edges are stored both as an indexed edge
//! list (so solvers can address edges by index, e.g. for bitset-style edge
//! occupancy) and as an adjacency structure carrying the edge index.

use std::collections::HashSet;
use std::fmt;

/// A simple undirected graph: no self-loops, no duplicate edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    /// Edge list, endpoints normalized to `(min, max)`.
    edges: Vec<(usize, usize)>,
    /// `adj[v]` lists `(neighbor, edge_id)` pairs in insertion order.
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {0} out of range (vertex count {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
}

impl Graph {
    pub fn new(vertex_count: usize) -> Self {
        Graph {
            vertex_count,
            edges: Vec::new(),
            adj: vec![Vec::new(); vertex_count],
        }
    }

    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::new(vertex_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize, GraphError> {
        if u >= self.vertex_count {
            return Err(GraphError::VertexOutOfRange(u, self.vertex_count));
        }
        if v >= self.vertex_count {
            return Err(GraphError::VertexOutOfRange(v, self.vertex_count));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let (a, b) = (u.min(v), u.max(v));
        if self.edge_id(a, b).is_some() {
            return Err(GraphError::DuplicateEdge(a, b));
        }
        let id = self.edges.len();
        self.edges.push((a, b));
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` as `(neighbor, edge_id)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = (u.min(v), u.max(v));
        self.adj[a]
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, id)| id)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        // A graph is a forest iff m = n - (number of components).
        let c = self.components().len();
        self.edges.len() + c == self.vertex_count
    }
}

/// Structural summary of a graph; `bcd` is the maximum of component count,
/// maximum degree and the number of vertices of degree at least three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphStats {
    pub component_count: usize,
    pub max_degree: usize,
    pub branching_count: usize,
    pub is_forest: bool,
    pub is_subcubic: bool,
    pub bcd: usize,
}

pub fn compute_stats(graph: &Graph) -> GraphStats {
    let component_count = graph.components().len();
    let mut max_degree = 0;
    let mut branching_count = 0;
    for v in 0..graph.vertex_count() {
        let d = graph.degree(v);
        max_degree = max_degree.max(d);
        if d >= 3 {
            branching_count += 1;
        }
    }
    GraphStats {
        component_count,
        max_degree,
        branching_count,
        is_forest: graph.is_forest(),
        is_subcubic: max_degree <= 3,
        bcd: component_count.max(max_degree).max(branching_count),
    }
}

/// Line graph of `graph` plus the mapping from line-graph vertex to the
/// original edge id (identity by construction: line vertex `i` is edge `i`).
pub fn line_graph(graph: &Graph) -> (Graph, Vec<usize>) {
    let m = graph.edge_count();
    let mut lg = Graph::new(m);
    for v in 0..graph.vertex_count() {
        let inc = graph.neighbors(v);
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                // Two original edges sharing v become adjacent line vertices.
                // Edges sharing both endpoints cannot occur (simple graph).
                lg.add_edge(inc[i].1, inc[j].1).expect("line graph edge");
            }
        }
    }
    (lg, (0..m).collect())
}

/// A path packing instance: host graph, requested path lengths, and whether
/// every edge must be covered exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub lengths: Vec<usize>,
    pub exact: bool,
}

impl Instance {
    pub fn new(graph: Graph, lengths: Vec<usize>, exact: bool) -> Self {
        Instance {
            graph,
            lengths,
            exact,
        }
    }

    pub fn path_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn total_length(&self) -> usize {
        self.lengths.iter().sum()
    }
}

/// One vertex sequence per requested path, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub paths: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn new(paths: Vec<Vec<usize>>) -> Self {
        Embedding { paths }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: vertex id {id} out of range (vertex count {n})")]
    VertexOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: path length must be at least 1")]
    ZeroLength { line: usize },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
}

/// Parse the line-oriented instance format.
///
/// ```text
/// p pack <n> <m> <k> [exact]
/// e <u> <v>            (m lines)
/// l <l_1> ... <l_k>
/// ```
///
/// `#` starts a comment line; blank lines are ignored.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::Truncated("missing header".into()))?;
    let tok: Vec<&str> = header.split_whitespace().collect();
    if tok.len() < 5 || tok.len() > 6 || tok[0] != "p" || tok[1] != "pack" {
        return Err(ParseError::Header {
            line: hline,
            msg: format!("expected `p pack <n> <m> <k> [exact]`, got `{header}`"),
        });
    }
    let parse_nat = |s: &str, line: usize| -> Result<usize, ParseError> {
        s.parse::<usize>().map_err(|_| ParseError::Malformed {
            line,
            msg: format!("expected a natural number, got `{s}`"),
        })
    };
    let n = parse_nat(tok[2], hline)?;
    let m = parse_nat(tok[3], hline)?;
    let k = parse_nat(tok[4], hline)?;
    let exact = match tok.get(5) {
        None => false,
        Some(&"exact") => true,
        Some(other) => {
            return Err(ParseError::Header {
                line: hline,
                msg: format!("unexpected trailing token `{other}`"),
            })
        }
    };

    let mut graph = Graph::new(n);
    for _ in 0..m {
        let (eline, l) = lines
            .next()
            .ok_or_else(|| ParseError::Truncated(format!("expected {m} edge lines")))?;
        let tok: Vec<&str> = l.split_whitespace().collect();
        if tok.len() != 3 || tok[0] != "e" {
            return Err(ParseError::Malformed {
                line: eline,
                msg: format!("expected `e <u> <v>`, got `{l}`"),
            });
        }
        let u = parse_nat(tok[1], eline)?;
        let v = parse_nat(tok[2], eline)?;
        graph.add_edge(u, v).map_err(|e| match e {
            GraphError::VertexOutOfRange(id, n) => {
                ParseError::VertexOutOfRange { line: eline, id, n }
            }
            GraphError::SelfLoop(v) => ParseError::SelfLoop { line: eline, v },
            GraphError::DuplicateEdge(u, v) => ParseError::DuplicateEdge { line: eline, u, v },
        })?;
    }

    let (lline, l) = lines
        .next()
        .ok_or_else(|| ParseError::Truncated("missing length line".into()))?;
    let tok: Vec<&str> = l.split_whitespace().collect();
    if tok.is_empty() || tok[0] != "l" {
        return Err(ParseError::Malformed {
            line: lline,
            msg: format!("expected `l <l_1> ... <l_k>`, got `{l}`"),
        });
    }
    if tok.len() != k + 1 {
        return Err(ParseError::Malformed {
            line: lline,
            msg: format!("expected {k} lengths, got {}", tok.len() - 1),
        });
    }
    let mut lengths = Vec::with_capacity(k);
    for t in &tok[1..] {
        let v = parse_nat(t, lline)?;
        if v == 0 {
            return Err(ParseError::ZeroLength { line: lline });
        }
        lengths.push(v);
    }

    if let Some((line, l)) = lines.next() {
        return Err(ParseError::Malformed {
            line,
            msg: format!("unexpected trailing line `{l}`"),
        });
    }

    Ok(Instance {
        graph,
        lengths,
        exact,
    })
}

/// Canonical serialization; `parse_instance(serialize_instance(i)) == i`
/// whenever `i` itself came from `parse_instance` or a generator.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let g = &instance.graph;
    out.push_str(&format!(
        "p pack {} {} {}{}\n",
        g.vertex_count(),
        g.edge_count(),
        instance.lengths.len(),
        if instance.exact { " exact" } else { "" }
    ));
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out.push('l');
    for l in &instance.lengths {
        out.push_str(&format!(" {l}"));
    }
    out.push('\n');
    out
}

/// Certificate format: k lines, line i holding the `l_i + 1` vertex ids of
/// path i's image.
pub fn serialize_certificate(embedding: &Embedding) -> String {
    let mut out = String::new();
    for path in &embedding.paths {
        let words: Vec<String> = path.iter().map(|v| v.to_string()).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<Embedding, ParseError> {
    let mut paths = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut path = Vec::new();
        for tok in line.split_whitespace() {
            let v = tok.parse::<usize>().map_err(|_| ParseError::Malformed {
                line: i + 1,
                msg: format!("expected a vertex id, got `{tok}`"),
            })?;
            path.push(v);
        }
        paths.push(path);
    }
    Ok(Embedding::new(paths))
}

/// A single broken embedding condition, reported as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PathCountMismatch { expected: usize, got: usize },
    WrongLength { path: usize, expected: usize, got: usize },
    RepeatedVertex { path: usize, vertex: usize },
    NotAnEdge { path: usize, u: usize, v: usize },
    VertexOutOfRange { path: usize, vertex: usize },
    EdgeReused { u: usize, v: usize },
    EdgeUncovered { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PathCountMismatch { expected, got } => {
                write!(f, "expected {expected} paths, certificate has {got}")
            }
            Violation::WrongLength {
                path,
                expected,
                got,
            } => write!(
                f,
                "path {path}: expected {expected} vertices, got {got}"
            ),
            Violation::RepeatedVertex { path, vertex } => {
                write!(f, "path {path}: vertex {vertex} repeated")
            }
            Violation::NotAnEdge { path, u, v } => {
                write!(f, "path {path}: {{{u}, {v}}} is not an edge")
            }
            Violation::VertexOutOfRange { path, vertex } => {
                write!(f, "path {path}: vertex {vertex} out of range")
            }
            Violation::EdgeReused { u, v } => write!(f, "edge {{{u}, {v}}} used more than once"),
            Violation::EdgeUncovered { u, v } => write!(f, "edge {{{u}, {v}}} not covered"),
        }
    }
}

/// Check every embedding invariant; violations are data, not errors.
pub fn verify_embedding(instance: &Instance, embedding: &Embedding) -> Vec<Violation> {
    let mut violations = Vec::new();
    let g = &instance.graph;
    if embedding.paths.len() != instance.lengths.len() {
        violations.push(Violation::PathCountMismatch {
            expected: instance.lengths.len(),
            got: embedding.paths.len(),
        });
        return violations;
    }
    let mut used = vec![false; g.edge_count()];
    for (i, path) in embedding.paths.iter().enumerate() {
        let want = instance.lengths[i] + 1;
        if path.len() != want {
            violations.push(Violation::WrongLength {
                path: i,
                expected: want,
                got: path.len(),
            });
        }
        let mut seen = HashSet::new();
        for &v in path {
            if v >= g.vertex_count() {
                violations.push(Violation::VertexOutOfRange { path: i, vertex: v });
            } else if !seen.insert(v) {
                violations.push(Violation::RepeatedVertex { path: i, vertex: v });
            }
        }
        for w in path.windows(2) {
            let (u, v) = (w[0], w[1]);
            if u >= g.vertex_count() || v >= g.vertex_count() {
                continue;
            }
            match g.edge_id(u, v) {
                None => violations.push(Violation::NotAnEdge { path: i, u, v }),
                Some(id) => {
                    if used[id] {
                        let (a, b) = g.edges()[id];
                        violations.push(Violation::EdgeReused { u: a, v: b });
                    }
                    used[id] = true;
                }
            }
        }
    }
    if instance.exact {
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            if !used[id] {
                violations.push(Violation::EdgeUncovered { u, v });
            }
        }
    }
    violations
}

/// Convenience wrapper: true iff `verify_embedding` reports no violations.
pub fn embedding_ok(instance: &Instance, embedding: &Embedding) -> bool {
    verify_embedding(instance, embedding).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn star(legs: usize) -> Graph {
        Graph::from_edges(legs + 1, (1..=legs).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn parse_smallest_instance() {
        let inst = parse_instance("p pack 2 1 1\ne 0 1\nl 1").unwrap();
        assert_eq!(inst.graph.vertex_count(), 2);
        assert_eq!(inst.graph.edges(), &[(0, 1)]);
        assert_eq!(inst.lengths, vec![1]);
        assert!(!inst.exact);
    }

    #[test]
    fn parse_exact_instance() {
        let inst = parse_instance("p pack 3 2 1 exact\ne 0 1\ne 1 2\nl 2").unwrap();
        assert_eq!(inst.graph.vertex_count(), 3);
        assert_eq!(inst.lengths, vec![2]);
        assert!(inst.exact);
    }

    #[test]
    fn parse_rejects_self_loop_with_line_number() {
        let err = parse_instance("p pack 2 1 1\ne 0 0\nl 1").unwrap_err();
        assert_eq!(err, ParseError::SelfLoop { line: 2, v: 0 });
    }

    #[test]
    fn parse_rejects_duplicate_edge_and_zero_length() {
        let err = parse_instance("p pack 2 2 1\ne 0 1\ne 1 0\nl 1").unwrap_err();
        assert_eq!(err, ParseError::DuplicateEdge { line: 3, u: 0, v: 1 });
        let err = parse_instance("p pack 2 1 1\ne 0 1\nl 0").unwrap_err();
        assert_eq!(err, ParseError::ZeroLength { line: 3 });
    }

    #[test]
    fn parse_reports_out_of_range_vertex() {
        let err = parse_instance("p pack 2 1 1\ne 0 5\nl 1").unwrap_err();
        assert_eq!(
            err,
            ParseError::VertexOutOfRange {
                line: 2,
                id: 5,
                n: 2
            }
        );
    }

    #[test]
    fn serialize_round_trip() {
        let text = "p pack 4 3 2 exact\ne 0 1\ne 1 2\ne 2 3\nl 2 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(serialize_instance(&inst), text);
        assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn stats_on_path_star_and_disjoint_edges() {
        let s = compute_stats(&path_graph(5));
        assert_eq!(
            (s.component_count, s.max_degree, s.branching_count, s.bcd),
            (1, 2, 0, 2)
        );
        assert!(s.is_forest && s.is_subcubic);

        let s = compute_stats(&star(6));
        assert_eq!(
            (s.component_count, s.max_degree, s.branching_count, s.bcd),
            (1, 6, 1, 6)
        );

        let g = Graph::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let s = compute_stats(&g);
        assert_eq!(
            (s.component_count, s.max_degree, s.branching_count, s.bcd),
            (3, 1, 0, 3)
        );
    }

    #[test]
    fn line_graph_small_cases() {
        // Two adjacent edges -> K_2.
        let (lg, map) = line_graph(&path_graph(3));
        assert_eq!(lg.vertex_count(), 2);
        assert_eq!(lg.edges(), &[(0, 1)]);
        assert_eq!(map, vec![0, 1]);

        // Triangle is self-dual.
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (lg, _) = line_graph(&tri);
        assert_eq!(lg.vertex_count(), 3);
        assert_eq!(lg.edge_count(), 3);

        // Star K_{1,3} -> K_3 (all three edges pairwise adjacent).
        let (lg, _) = line_graph(&star(3));
        assert_eq!(lg.vertex_count(), 3);
        assert_eq!(lg.edge_count(), 3);
        for u in 0..3 {
            for v in u + 1..3 {
                assert!(lg.has_edge(u, v));
            }
        }
    }

    #[test]
    fn line_graph_edge_count_formula() {
        for g in [path_graph(6), star(5), Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()] {
            let (lg, _) = line_graph(&g);
            assert_eq!(lg.vertex_count(), g.edge_count());
            let expect: usize = (0..g.vertex_count())
                .map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2)
                .sum();
            assert_eq!(lg.edge_count(), expect);
        }
    }

    #[test]
    fn verify_accepts_valid_embedding() {
        let inst = Instance::new(path_graph(3), vec![2], false);
        let emb = Embedding::new(vec![vec![0, 1, 2]]);
        assert!(verify_embedding(&inst, &emb).is_empty());
    }

    #[test]
    fn verify_rejects_repeated_vertex() {
        let inst = Instance::new(path_graph(3), vec![2], false);
        let emb = Embedding::new(vec![vec![0, 1, 0]]);
        let violations = verify_embedding(&inst, &emb);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::RepeatedVertex { path: 0, vertex: 0 })));
    }

    #[test]
    fn verify_reports_uncovered_edge_in_exact_mode() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(tri, vec![1, 1], true);
        let emb = Embedding::new(vec![vec![0, 1], vec![1, 2]]);
        let violations = verify_embedding(&inst, &emb);
        assert_eq!(violations, vec![Violation::EdgeUncovered { u: 0, v: 2 }]);
    }

    #[test]
    fn verify_rejects_edge_reuse() {
        let inst = Instance::new(path_graph(3), vec![1, 1], false);
        let emb = Embedding::new(vec![vec![0, 1], vec![1, 0]]);
        let violations = verify_embedding(&inst, &emb);
        assert_eq!(violations, vec![Violation::EdgeReused { u: 0, v: 1 }]);
    }
}
