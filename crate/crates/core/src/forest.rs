//! Decision procedure for packing k paths into arbitrary forests.
//!
//! The subcubic table generalizes: instead of one longest leftover stub, a
//! vertex of high degree can offer several stubs at once, one per child
//! subtree. The table therefore maps every subset P of requested paths to an
//! antichain (under dominance) of multisets of stub lengths that remain
//! available at the subtree root after packing the P-paths. Children are
//! absorbed one at a time; a pruning pass first caps the number of children
//! per node at 3k without changing the answer.
//!
//! This solver decides only; certificates for small instances come from the
//! oracle.

use crate::convolution::{subset_convolve, SetFunction};
use crate::graph::{Graph, Instance};
use crate::multiset::{antichain_reduce, dominates, NatMultiset};
use crate::solver::{exact_total_mismatch, SolveError};

/// Hard cap on the antichain stored per (vertex, subset). The theoretical
/// bound is astronomically loose; failing loudly beats thrashing.
pub const ANTICHAIN_CAP: usize = 1_000_000;

const MAX_PATHS: usize = 22;

/// Per-vertex table: for every subset of requested paths, the
/// dominance-maximal multisets of extra-path lengths packable alongside it,
/// all starting at this vertex. An empty antichain means the subset does not
/// fit; the singleton empty multiset means it fits with no room to spare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetTable {
    entries: Vec<Vec<NatMultiset>>,
}

impl MultisetTable {
    pub fn from_entries(entries: Vec<Vec<NatMultiset>>) -> Self {
        assert!(entries.len().is_power_of_two());
        MultisetTable { entries }
    }

    /// Table for a bare vertex: only the empty path set fits, with a single
    /// zero-length stub.
    pub fn leaf(path_count: usize) -> Self {
        let mut entries = vec![Vec::new(); 1 << path_count];
        entries[0] = vec![NatMultiset::singleton(0)];
        MultisetTable { entries }
    }

    pub fn entry(&self, mask: usize) -> &[NatMultiset] {
        &self.entries[mask]
    }

    pub fn subset_count(&self) -> usize {
        self.entries.len()
    }

    pub fn feasible(&self, mask: usize) -> bool {
        !self.entries[mask].is_empty()
    }

    fn stub_max(&self, mask: usize) -> Option<u32> {
        if self.entries[mask].is_empty() {
            return None;
        }
        // max over all numbers in all multisets; an all-empty antichain
        // member contributes 0.
        Some(
            self.entries[mask]
                .iter()
                .filter_map(|m| m.max())
                .max()
                .unwrap_or(0),
        )
    }

    fn total_multisets(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }
}

/// Extend a child table over the edge to its (virtual) parent. Either the
/// P-paths fit below the child and a single stub grows through the new edge,
/// or one path i occupies the edge, which needs a leftover stub of exactly
/// `l_i - 1` below the child alongside the remaining paths.
pub fn extend_child_table(child: &MultisetTable, lengths: &[usize]) -> MultisetTable {
    let full = child.entries.len();
    let mut entries = vec![Vec::new(); full];
    for p in 0..full {
        if child.feasible(p) {
            let lmax = child.stub_max(p).unwrap();
            entries[p] = vec![NatMultiset::singleton(lmax + 1)];
            continue;
        }
        let mut rest = p;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if let Some(lmax) = child.stub_max(p ^ (1 << i)) {
                debug_assert!(
                    (lmax as usize) < lengths[i],
                    "child could host the missing path, so this entry cannot be empty"
                );
                if lmax as usize == lengths[i] - 1 {
                    entries[p] = vec![NatMultiset::empty()];
                    break;
                }
            }
        }
    }
    MultisetTable { entries }
}

/// Incrementally maintained antichain.
struct AntichainBuilder {
    items: Vec<NatMultiset>,
}

impl AntichainBuilder {
    fn new() -> Self {
        AntichainBuilder { items: Vec::new() }
    }

    fn insert(&mut self, m: NatMultiset) {
        if self.items.iter().any(|x| dominates(x, &m)) {
            return;
        }
        self.items.retain(|x| !dominates(&m, x));
        self.items.push(m);
    }

    fn finish(mut self) -> Vec<NatMultiset> {
        self.items.sort_unstable();
        self.items
    }
}

/// Merge an accumulated table `t1` with an extended child table `t2`, both
/// rooted at the same vertex. For each subset P, the result collects
///
/// * unions of stub multisets from every bipartition of P, and
/// * outcomes where one path i crosses the root, consuming a stub from each
///   side with lengths summing to at least `l_i`,
///
/// reduced to the dominance-maximal members.
pub fn join_tables(
    t1: &MultisetTable,
    t2: &MultisetTable,
    lengths: &[usize],
) -> Result<MultisetTable, SolveError> {
    let full = t1.entries.len();
    assert_eq!(t2.entries.len(), full, "table size mismatch");
    let mut entries = vec![Vec::new(); full];
    for p in 0..full {
        let mut builder = AntichainBuilder::new();
        // Split P across the two sides.
        let mut p1 = p;
        loop {
            let p2 = p ^ p1;
            for m1 in &t1.entries[p1] {
                for m2 in &t2.entries[p2] {
                    builder.insert(m1.union(m2));
                }
            }
            if p1 == 0 {
                break;
            }
            p1 = (p1 - 1) & p;
        }
        // One path crosses the root: i belongs to neither side.
        let mut rest = p;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let li = lengths[i] as u64;
            let sub = p ^ (1 << i);
            let mut q1 = sub;
            loop {
                let q2 = sub ^ q1;
                for m1 in &t1.entries[q1] {
                    for m2 in &t2.entries[q2] {
                        let mut r1s: Vec<u32> = m1.elements().to_vec();
                        r1s.dedup();
                        let mut r2s: Vec<u32> = m2.elements().to_vec();
                        r2s.dedup();
                        for &r1 in &r1s {
                            for &r2 in &r2s {
                                if r1 as u64 + r2 as u64 >= li {
                                    builder.insert(m1.without(r1).union(&m2.without(r2)));
                                }
                            }
                        }
                    }
                }
                if q1 == 0 {
                    break;
                }
                q1 = (q1 - 1) & sub;
            }
        }
        let reduced = builder.finish();
        if reduced.len() > ANTICHAIN_CAP {
            return Err(SolveError::ResourceLimit(format!(
                "antichain for subset {p:#b} exceeds {ANTICHAIN_CAP} multisets"
            )));
        }
        entries[p] = reduced;
    }
    Ok(MultisetTable { entries })
}

/// A rooted tree over a subset of a graph's vertices; indices are graph ids.
#[derive(Debug, Clone)]
pub struct RootedTree {
    root: usize,
    /// Children per graph vertex id (empty for vertices outside the tree).
    children: Vec<Vec<usize>>,
    /// Vertices of this tree in preorder.
    vertices: Vec<usize>,
}

impl RootedTree {
    /// Build from one connected component of a forest, rooted at its
    /// smallest vertex id.
    pub fn from_component(g: &Graph, comp: &[usize]) -> RootedTree {
        let root = comp[0];
        let mut children = vec![Vec::new(); g.vertex_count()];
        let mut vertices = Vec::with_capacity(comp.len());
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            vertices.push(v);
            for &(w, _) in g.neighbors(v) {
                if w != parent {
                    children[v].push(w);
                    stack.push((w, v));
                }
            }
        }
        RootedTree {
            root,
            children,
            vertices,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Postorder over the tree (children before parents).
    fn postorder(&self) -> Vec<usize> {
        let mut order = self.vertices.clone();
        order.reverse();
        order
    }

    /// `(start_max, inner_max)` per vertex: the longest path starting at the
    /// vertex within its subtree, and the longest path anywhere within it.
    fn longest_paths(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.children.len();
        let mut start_max = vec![0usize; n];
        let mut inner_max = vec![0usize; n];
        for &v in &self.postorder() {
            let mut best = 0;
            let mut second = 0;
            let mut inner = 0;
            for &c in &self.children[v] {
                let down = start_max[c] + 1;
                if down > best {
                    second = best;
                    best = down;
                } else if down > second {
                    second = down;
                }
                inner = inner.max(inner_max[c]);
            }
            start_max[v] = best;
            inner_max[v] = inner.max(best + second);
        }
        (start_max, inner_max)
    }
}

/// Restrict every node to at most `3 * path_count` children without changing
/// packability: keep the `path_count` children whose subtrees offer the
/// longest start-anchored paths, then from the rest the `2 * path_count`
/// with the longest internal paths. Ties keep the earlier child.
pub fn prune_children(tree: &RootedTree, path_count: usize) -> RootedTree {
    let (start_max, inner_max) = tree.longest_paths();
    let mut children = vec![Vec::new(); tree.children.len()];
    let mut vertices = Vec::with_capacity(tree.vertices.len());
    let mut stack = vec![tree.root];
    while let Some(v) = stack.pop() {
        vertices.push(v);
        let kids = &tree.children[v];
        let kept: Vec<usize> = if kids.len() <= 3 * path_count {
            kids.clone()
        } else {
            let mut by_start: Vec<usize> = (0..kids.len()).collect();
            by_start.sort_by(|&a, &b| start_max[kids[b]].cmp(&start_max[kids[a]]));
            let first: Vec<usize> = by_start.into_iter().take(path_count).collect();
            let mut by_inner: Vec<usize> = (0..kids.len())
                .filter(|i| !first.contains(i))
                .collect();
            by_inner.sort_by(|&a, &b| inner_max[kids[b]].cmp(&inner_max[kids[a]]));
            let mut chosen: Vec<usize> = first;
            chosen.extend(by_inner.into_iter().take(2 * path_count));
            chosen.sort_unstable();
            chosen.into_iter().map(|i| kids[i]).collect()
        };
        for &c in &kept {
            stack.push(c);
        }
        children[v] = kept;
    }
    RootedTree {
        root: tree.root,
        children,
        vertices,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ForestOptions {
    pub prune: bool,
}

impl Default for ForestOptions {
    fn default() -> Self {
        ForestOptions { prune: true }
    }
}

pub struct ForestReport {
    /// True iff the requested paths pack. Decision only: this solver does
    /// not reconstruct certificates.
    pub packable: bool,
    /// Largest number of multisets held by any single vertex table.
    pub peak_entries: u64,
}

pub fn solve_forest(instance: &Instance) -> Result<ForestReport, SolveError> {
    solve_forest_with(instance, ForestOptions::default())
}

pub fn solve_forest_with(
    instance: &Instance,
    options: ForestOptions,
) -> Result<ForestReport, SolveError> {
    let g = &instance.graph;
    if !g.is_forest() {
        return Err(SolveError::Precondition("graph is not a forest".into()));
    }
    if exact_total_mismatch(instance) {
        return Ok(ForestReport {
            packable: false,
            peak_entries: 0,
        });
    }
    let k = instance.lengths.len();
    if k > MAX_PATHS {
        return Err(SolveError::ResourceLimit(format!(
            "{k} paths exceed the supported maximum of {MAX_PATHS}"
        )));
    }
    let full = 1usize << k;
    if instance.total_length() > g.edge_count() {
        return Ok(ForestReport {
            packable: false,
            peak_entries: 0,
        });
    }

    // Per-component feasibility indicators, combined by iterated boolean
    // subset convolution: a subset is packable iff it splits across
    // components into per-component feasible subsets.
    let mut peak_entries = 0u64;
    let mut acc = SetFunction::empty_set_indicator(k);
    for comp in g.components() {
        let mut tree = RootedTree::from_component(g, &comp);
        if options.prune {
            tree = prune_children(&tree, k);
        }
        let table = component_table(&tree, &instance.lengths, &mut peak_entries)?;
        let mut f = SetFunction::zero(k);
        for p in 0..full {
            if table.feasible(p) {
                f.set(p, 1);
            }
        }
        let combined = subset_convolve(&acc, &f).expect("indicator convolution");
        acc = SetFunction::zero(k);
        for p in 0..full {
            if combined.get(p) >= 1 {
                acc.set(p, 1);
            }
        }
    }

    Ok(ForestReport {
        packable: acc.get(full - 1) >= 1,
        peak_entries,
    })
}

fn component_table(
    tree: &RootedTree,
    lengths: &[usize],
    peak_entries: &mut u64,
) -> Result<MultisetTable, SolveError> {
    let k = lengths.len();
    let (_, inner_max) = tree.longest_paths();
    let mut tables: Vec<Option<MultisetTable>> = vec![None; tree.children.len()];
    for &v in &tree.postorder() {
        // Absorb heavier subtrees first; any order is correct.
        let mut kids: Vec<usize> = tree.children(v).to_vec();
        kids.sort_by(|&a, &b| inner_max[b].cmp(&inner_max[a]));
        let mut acc = MultisetTable::leaf(k);
        for c in kids {
            let child_table = tables[c].take().expect("postorder");
            let ext = extend_child_table(&child_table, lengths);
            acc = join_tables(&acc, &ext, lengths)?;
        }
        *peak_entries = (*peak_entries).max(acc.total_multisets() as u64);
        let d = tree.children(v).len() as u64;
        debug_assert!(acc
            .entries
            .iter()
            .all(|e| (e.len() as u64) <= d.max(1).saturating_mul(1u64 << (k as u64 * d).min(62))));
        tables[v] = Some(acc);
    }
    Ok(tables[tree.root].take().expect("root table"))
}
