//! Decision procedure with certificates for packing k paths into subcubic
//! forests, exponential only in k.
//!
//! Each tree is rooted at a leaf and processed bottom-up. The table at a
//! vertex v maps every subset P of requested paths to the longest extra path
//! ending at v that can be packed alongside all P-paths inside v's subtree
//! (`None` when the P-paths do not fit at all). Joining two subtrees checks
//! bipartitions of P through boolean subset convolutions on indicator
//! functions instead of enumerating them directly.

use crate::convolution::{direct_convolve, subset_convolve, SetFunction};
use crate::graph::{Embedding, Graph, Instance};
use crate::solver::{exact_total_mismatch, Decision, SolveError};

/// Per-vertex DP table over path subsets. `values[P] = Some(r)` means all
/// P-paths plus one extra path of length `r` ending at this vertex fit into
/// the subtree; `None` means the P-paths alone do not fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTable {
    values: Vec<Option<u32>>,
}

impl SubsetTable {
    pub fn from_values(values: Vec<Option<u32>>) -> Self {
        assert!(values.len().is_power_of_two());
        SubsetTable { values }
    }

    pub fn get(&self, mask: usize) -> Option<u32> {
        self.values[mask]
    }

    pub fn values(&self) -> &[Option<u32>] {
        &self.values
    }
}

/// Which convolution backs the join's bipartition checks. `Direct` exists to
/// demonstrate that swapping the fast transform for plain enumeration changes
/// no table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvMode {
    #[default]
    Fast,
    Direct,
}

impl ConvMode {
    fn convolve(self, f: &SetFunction, g: &SetFunction) -> SetFunction {
        match self {
            ConvMode::Fast => subset_convolve(f, g).expect("indicator convolution"),
            ConvMode::Direct => direct_convolve(f, g).expect("indicator convolution"),
        }
    }
}

/// Table for a vertex with no edges below it: only the empty path set fits,
/// leaving room for an extra path of length zero.
pub fn leaf_table(path_count: usize) -> SubsetTable {
    let mut values = vec![None; 1 << path_count];
    values[0] = Some(0);
    SubsetTable { values }
}

/// Table for a vertex v whose single child u has table `child`, one edge
/// apart. Either the P-paths fit below u and the extra path grows by the
/// edge uv, or one path i occupies uv, which requires packing the remaining
/// paths below u with an extra path of exactly `l_i - 1` ending there.
pub fn extend_table(child: &SubsetTable, lengths: &[usize]) -> SubsetTable {
    let k = lengths.len();
    let full = 1usize << k;
    assert_eq!(child.values.len(), full, "table size mismatch");
    let mut values = vec![None; full];
    for p in 0..full {
        values[p] = match child.values[p] {
            Some(r) => Some(r + 1),
            None => {
                let mut hit = None;
                let mut rest = p;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if let Some(x) = child.values[p ^ (1 << i)] {
                        debug_assert!(
                            (x as usize) < lengths[i],
                            "child could host the missing path, so the parent entry cannot be None"
                        );
                        if x as usize == lengths[i] - 1 {
                            hit = Some(0);
                            break;
                        }
                    }
                }
                hit
            }
        };
    }
    SubsetTable { values }
}

fn indicator(t: &SubsetTable, pred: impl Fn(u32) -> bool) -> SetFunction {
    let k = t.values.len().trailing_zeros() as usize;
    let mut f = SetFunction::zero(k);
    for (mask, v) in t.values.iter().enumerate() {
        if matches!(v, Some(x) if pred(*x)) {
            f.set(mask, 1);
        }
    }
    f
}

/// Join two subtrees hanging below the same vertex v. `t1` and `t2` are the
/// tables of the two virtual roots (each already extended over its root
/// edge). For every P the result is the best of two mechanisms:
///
/// * split P across the subtrees and keep the longer leftover stub as the
///   extra path, or
/// * spend both root edges on one crossing path i whose two halves use
///   leftover stubs with lengths summing to at least `l_i`, leaving an extra
///   path of length zero.
pub fn join_tables(
    t1: &SubsetTable,
    t2: &SubsetTable,
    lengths: &[usize],
    conv: ConvMode,
) -> SubsetTable {
    let k = lengths.len();
    let full = 1usize << k;
    assert_eq!(t1.values.len(), full, "table size mismatch");
    assert_eq!(t2.values.len(), full, "table size mismatch");

    let f1 = indicator(t1, |_| true);
    let f2 = indicator(t2, |_| true);
    let support = conv.convolve(&f1, &f2);

    let mut values: Vec<Option<u32>> = vec![None; full];
    let mut unresolved: Vec<usize> = (0..full).filter(|&p| support.get(p) >= 1).collect();

    // Highest achievable stub per subset, scanning candidate values downward;
    // each subset locks in at the first threshold it satisfies.
    let mut candidates: Vec<u32> = t1
        .values
        .iter()
        .chain(t2.values.iter())
        .filter_map(|&v| v)
        .collect();
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    candidates.dedup();
    for &r in &candidates {
        if unresolved.is_empty() {
            break;
        }
        let g1 = indicator(t1, |v| v >= r);
        let g2 = indicator(t2, |v| v >= r);
        let a = conv.convolve(&f1, &g2);
        let b = conv.convolve(&g1, &f2);
        unresolved.retain(|&p| {
            if a.get(p) + b.get(p) >= 1 {
                values[p] = Some(r);
                false
            } else {
                true
            }
        });
    }
    debug_assert!(
        unresolved.is_empty(),
        "supported subsets resolve at a present value"
    );

    // Crossing-path mechanism for subsets that cannot be split.
    let mut pending: Vec<usize> = (0..full).filter(|&p| values[p].is_none() && p != 0).collect();
    if !pending.is_empty() {
        let max1 = t1.values.iter().filter_map(|&v| v).max().unwrap_or(0) as usize;
        let max2 = t2.values.iter().filter_map(|&v| v).max().unwrap_or(0) as usize;
        let mut stubs1: Vec<u32> = t1.values.iter().filter_map(|&v| v).collect();
        stubs1.sort_unstable_by(|a, b| b.cmp(a));
        stubs1.dedup();

        let mut distinct_lengths: Vec<usize> = lengths.to_vec();
        distinct_lengths.sort_unstable();
        distinct_lengths.dedup();

        'lengths: for &li in &distinct_lengths {
            if li > max1 + max2 {
                continue;
            }
            let imask: usize = lengths
                .iter()
                .enumerate()
                .filter(|&(_, &l)| l == li)
                .fold(0, |m, (i, _)| m | (1 << i));
            for &r1 in &stubs1 {
                if (r1 as usize) + max2 < li {
                    break; // stubs descend; no partner stub can reach l_i
                }
                let e1 = indicator(t1, |v| v == r1);
                let threshold = li.saturating_sub(r1 as usize);
                let w2 = indicator(t2, |v| v as usize >= threshold);
                let c = conv.convolve(&e1, &w2);
                pending.retain(|&p| {
                    let mut rest = p & imask;
                    while rest != 0 {
                        let i = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        if c.get(p ^ (1 << i)) >= 1 {
                            values[p] = Some(0);
                            return false;
                        }
                    }
                    true
                });
                if pending.is_empty() {
                    break 'lengths;
                }
            }
        }
    }

    SubsetTable { values }
}

/// Guard on table allocation across all vertices.
const MAX_TABLE_ENTRIES: usize = 1 << 28;

pub struct SubcubicReport {
    pub decision: Decision,
    /// Total table entries held across all vertices.
    pub peak_entries: u64,
}

pub fn solve_subcubic(instance: &Instance) -> Result<SubcubicReport, SolveError> {
    solve_subcubic_with(instance, ConvMode::Fast)
}

pub fn solve_subcubic_with(
    instance: &Instance,
    conv: ConvMode,
) -> Result<SubcubicReport, SolveError> {
    let g = &instance.graph;
    if !g.is_forest() {
        return Err(SolveError::Precondition("graph is not a forest".into()));
    }
    if (0..g.vertex_count()).any(|v| g.degree(v) > 3) {
        return Err(SolveError::Precondition(
            "graph has a vertex of degree greater than three".into(),
        ));
    }
    if exact_total_mismatch(instance) {
        return Ok(SubcubicReport {
            decision: Decision::No,
            peak_entries: 0,
        });
    }
    let k = instance.lengths.len();
    let full = 1usize << k;
    if k >= 25 || g.vertex_count().saturating_mul(full) > MAX_TABLE_ENTRIES {
        return Err(SolveError::ResourceLimit(format!(
            "{} paths on {} vertices exceeds the table budget",
            k,
            g.vertex_count()
        )));
    }
    if instance.total_length() > g.edge_count() {
        return Ok(SubcubicReport {
            decision: Decision::No,
            peak_entries: 0,
        });
    }

    let forest = ForestDp::build(g, &instance.lengths, conv);
    let peak_entries = (forest.tables.len() * full) as u64;

    // Combine per-component answers: a subset is feasible iff it splits into
    // per-component feasible subsets (paths never span components).
    let comp_indicators: Vec<SetFunction> = forest
        .roots
        .iter()
        .map(|&r| indicator(&forest.tables[r], |_| true))
        .collect();
    let mut suffix: Vec<SetFunction> = vec![SetFunction::empty_set_indicator(k)];
    for f in comp_indicators.iter().rev() {
        let combined = conv.convolve(f, suffix.last().unwrap());
        let mut clamped = SetFunction::zero(k);
        for mask in 0..full {
            if combined.get(mask) >= 1 {
                clamped.set(mask, 1);
            }
        }
        suffix.push(clamped);
    }
    suffix.reverse();
    if suffix[0].get(full - 1) == 0 {
        return Ok(SubcubicReport {
            decision: Decision::No,
            peak_entries,
        });
    }

    // Split the full path set across components, then reconstruct inside each.
    let mut paths: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut remaining = full - 1;
    for (c, f) in comp_indicators.iter().enumerate() {
        let mut chosen = None;
        let mut s = remaining;
        loop {
            if f.get(s) >= 1 && suffix[c + 1].get(remaining ^ s) >= 1 {
                chosen = Some(s);
                break;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & remaining;
        }
        let s = chosen.expect("combined indicator admits a component split");
        forest.realize(forest.roots[c], s, 0, &mut paths);
        remaining ^= s;
    }
    debug_assert_eq!(remaining, 0);

    let mut out = vec![Vec::new(); k];
    for (i, p) in paths {
        out[i] = p;
    }
    Ok(SubcubicReport {
        decision: Decision::Yes(Embedding::new(out)),
        peak_entries,
    })
}

/// Rooted-forest DP state: children lists, per-vertex tables, component roots.
struct ForestDp<'a> {
    lengths: &'a [usize],
    children: Vec<Vec<usize>>,
    tables: Vec<SubsetTable>,
    roots: Vec<usize>,
}

impl<'a> ForestDp<'a> {
    fn build(g: &Graph, lengths: &'a [usize], conv: ConvMode) -> Self {
        let n = g.vertex_count();
        let k = lengths.len();
        let mut children = vec![Vec::new(); n];
        let mut tables = vec![SubsetTable { values: Vec::new() }; n];
        let mut roots = Vec::new();

        for comp in g.components() {
            // Root at the smallest-id leaf so every vertex has at most two
            // children; single vertices root at themselves.
            let root = comp
                .iter()
                .copied()
                .find(|&v| g.degree(v) == 1)
                .unwrap_or(comp[0]);
            roots.push(root);

            let mut post = Vec::with_capacity(comp.len());
            let mut stack = vec![(root, usize::MAX)];
            while let Some((v, parent)) = stack.pop() {
                post.push(v);
                for &(w, _) in g.neighbors(v) {
                    if w != parent {
                        children[v].push(w);
                        stack.push((w, v));
                    }
                }
            }
            for &v in post.iter().rev() {
                tables[v] = match children[v].as_slice() {
                    [] => leaf_table(k),
                    [u] => extend_table(&tables[*u], lengths),
                    [u1, u2] => {
                        let e1 = extend_table(&tables[*u1], lengths);
                        let e2 = extend_table(&tables[*u2], lengths);
                        join_tables(&e1, &e2, lengths, conv)
                    }
                    more => unreachable!(
                        "vertex with {} children in a leaf-rooted subcubic tree",
                        more.len()
                    ),
                };
            }
        }
        ForestDp {
            lengths,
            children,
            tables,
            roots,
        }
    }

    /// Emit placements for all paths in `pset` inside v's subtree plus an
    /// extra path of length `need` ending at v; returns the extra path's
    /// vertex sequence (just `[v]` when `need` is zero).
    fn realize(
        &self,
        v: usize,
        pset: usize,
        need: u32,
        out: &mut Vec<(usize, Vec<usize>)>,
    ) -> Vec<usize> {
        match self.children[v].as_slice() {
            [] => {
                debug_assert_eq!(pset, 0);
                debug_assert_eq!(need, 0);
                vec![v]
            }
            [u] => self.realize_via_edge(*u, v, pset, need, out),
            [u1, u2] => {
                let (u1, u2) = (*u1, *u2);
                let e1 = extend_table(&self.tables[u1], self.lengths);
                let e2 = extend_table(&self.tables[u2], self.lengths);
                if need >= 1 {
                    // The extra path descends into one subtree; the other
                    // side just has to host its share.
                    let mut s = pset;
                    loop {
                        let o = pset ^ s;
                        if matches!(e1.get(s), Some(r) if r >= need) && e2.get(o).is_some() {
                            let extra = self.realize_via_edge(u1, v, s, need, out);
                            self.realize_via_edge(u2, v, o, 0, out);
                            return extra;
                        }
                        if e1.get(s).is_some() && matches!(e2.get(o), Some(r) if r >= need) {
                            let extra = self.realize_via_edge(u2, v, o, need, out);
                            self.realize_via_edge(u1, v, s, 0, out);
                            return extra;
                        }
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & pset;
                    }
                    unreachable!("join table promised a stub of length {need}");
                }
                // need == 0: either the paths split across the subtrees...
                let mut s = pset;
                loop {
                    if e1.get(s).is_some() && e2.get(pset ^ s).is_some() {
                        self.realize_via_edge(u1, v, s, 0, out);
                        self.realize_via_edge(u2, v, pset ^ s, 0, out);
                        return vec![v];
                    }
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & pset;
                }
                // ...or one path crosses v, assembled from stubs on both sides.
                let mut rest = pset;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let li = self.lengths[i] as u32;
                    let sub = pset ^ (1 << i);
                    let mut s = sub;
                    loop {
                        if let (Some(a), Some(b)) = (e1.get(s), e2.get(sub ^ s)) {
                            if a + b >= li {
                                let r1 = a.min(li);
                                let r2 = li - r1;
                                let left = self.realize_via_edge(u1, v, s, r1, out);
                                let right = self.realize_via_edge(u2, v, sub ^ s, r2, out);
                                // Both stubs end at v: walk down the left one,
                                // through v, back up the right one.
                                let mut path = left;
                                path.extend(right.into_iter().rev().skip(1));
                                out.push((i, path));
                                return vec![v];
                            }
                        }
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & sub;
                    }
                }
                unreachable!("join table promised a crossing witness");
            }
            _ => unreachable!(),
        }
    }

    /// Realize through the edge (child, parent): the extend recurrence's two
    /// cases, emitting into `out` and returning the extra path ending at
    /// `parent`.
    fn realize_via_edge(
        &self,
        child: usize,
        parent: usize,
        pset: usize,
        need: u32,
        out: &mut Vec<(usize, Vec<usize>)>,
    ) -> Vec<usize> {
        let table = &self.tables[child];
        if need >= 1 {
            debug_assert!(matches!(table.get(pset), Some(r) if r >= need - 1));
            let mut extra = self.realize(child, pset, need - 1, out);
            extra.push(parent);
            return extra;
        }
        if table.get(pset).is_some() {
            self.realize(child, pset, 0, out);
            return vec![parent];
        }
        let mut rest = pset;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let li = self.lengths[i] as u32;
            if table.get(pset ^ (1 << i)) == Some(li - 1) {
                let mut path = self.realize(child, pset ^ (1 << i), li - 1, out);
                path.push(parent);
                out.push((i, path));
                return vec![parent];
            }
        }
        unreachable!("extend table promised a witness for the occupied edge");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{embedding_ok, Graph};
    use crate::oracle::{solve_bruteforce, DEFAULT_BUDGET};

    fn table(vals: &[Option<u32>]) -> SubsetTable {
        SubsetTable::from_values(vals.to_vec())
    }

    fn inst(n: usize, edges: &[(usize, usize)], lengths: &[usize], exact: bool) -> Instance {
        Instance::new(
            Graph::from_edges(n, edges.iter().copied()).unwrap(),
            lengths.to_vec(),
            exact,
        )
    }

    #[test]
    fn leaf_table_is_zero_on_empty_and_none_elsewhere() {
        let t = leaf_table(0);
        assert_eq!(t.values(), &[Some(0)]);
        let t = leaf_table(2);
        assert_eq!(t.values(), &[Some(0), None, None, None]);
    }

    #[test]
    fn extend_single_edge_hosts_unit_path() {
        let t = extend_table(&leaf_table(1), &[1]);
        assert_eq!(t.values(), &[Some(1), Some(0)]);
    }

    #[test]
    fn extend_occupies_edge_when_child_stub_is_one_short() {
        let t = extend_table(&table(&[Some(3), None]), &[4]);
        assert_eq!(t.values(), &[Some(4), Some(0)]);
    }

    #[test]
    fn extend_grows_existing_entries() {
        let t = extend_table(&table(&[Some(2), Some(1)]), &[5]);
        assert_eq!(t.values(), &[Some(3), Some(2)]);
    }

    #[test]
    fn join_of_two_leaves_packs_nothing() {
        let t = join_tables(&leaf_table(1), &leaf_table(1), &[1], ConvMode::Fast);
        assert_eq!(t.values(), &[Some(0), None]);
    }

    #[test]
    fn join_keeps_longer_stub_across_bipartition() {
        // lengths 5, 4, 3; left subtree hosts path 2 with a stub of 1, right
        // subtree hosts paths 1 and 3 with no stub.
        let mut t1 = vec![None; 8];
        t1[0b000] = Some(0);
        t1[0b010] = Some(1);
        let mut t2 = vec![None; 8];
        t2[0b000] = Some(0);
        t2[0b101] = Some(0);
        let j = join_tables(&table(&t1), &table(&t2), &[5, 4, 3], ConvMode::Fast);
        assert_eq!(j.get(0b111), Some(1));
    }

    #[test]
    fn join_crossing_path_spends_both_root_edges() {
        // lengths 6, 4, 3; stubs of 1 and 5 meet at the join vertex to host
        // path 1 of length 6, leaving no room for anything else.
        let mut t1 = vec![None; 8];
        t1[0b000] = Some(0);
        t1[0b010] = Some(1);
        let mut t2 = vec![None; 8];
        t2[0b000] = Some(0);
        t2[0b100] = Some(5);
        let j = join_tables(&table(&t1), &table(&t2), &[6, 4, 3], ConvMode::Fast);
        assert_eq!(j.get(0b111), Some(0));
    }

    #[test]
    fn join_direct_mode_matches_fast_mode() {
        let mut t1 = vec![None; 8];
        t1[0b000] = Some(0);
        t1[0b010] = Some(1);
        t1[0b001] = Some(3);
        let mut t2 = vec![None; 8];
        t2[0b000] = Some(2);
        t2[0b100] = Some(5);
        for lengths in [[6, 4, 3], [2, 2, 2], [7, 1, 5]] {
            let a = join_tables(&table(&t1), &table(&t2), &lengths, ConvMode::Fast);
            let b = join_tables(&table(&t1), &table(&t2), &lengths, ConvMode::Direct);
            assert_eq!(a, b);
        }
    }

    fn check_yes(i: &Instance) {
        let rep = solve_subcubic(i).unwrap();
        match rep.decision {
            Decision::Yes(emb) => assert!(embedding_ok(i, &emb), "bad certificate {emb:?}"),
            Decision::No => panic!("expected yes"),
        }
    }

    #[test]
    fn star_with_three_legs() {
        let i = inst(4, &[(0, 1), (0, 2), (0, 3)], &[2, 1], false);
        check_yes(&i);
        assert!(solve_bruteforce(&i, DEFAULT_BUDGET).is_yes());
    }

    #[test]
    fn path_four_cannot_host_two_length_two_paths() {
        let i = inst(4, &[(0, 1), (1, 2), (2, 3)], &[2, 2], false);
        assert_eq!(solve_subcubic(&i).unwrap().decision, Decision::No);
    }

    #[test]
    fn path_five_splits_at_middle() {
        let i = inst(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], &[2, 2], false);
        check_yes(&i);
    }

    #[test]
    fn exact_mode_reduces_to_total_length_check() {
        let yes = inst(3, &[(0, 1), (1, 2)], &[2], true);
        check_yes(&yes);
        let no = inst(3, &[(0, 1), (1, 2)], &[1], true);
        assert_eq!(solve_subcubic(&no).unwrap().decision, Decision::No);
    }

    #[test]
    fn multi_component_packing_distributes_paths() {
        let i = inst(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)], &[3, 2], false);
        check_yes(&i);
        let no = inst(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)], &[3, 3], false);
        assert_eq!(solve_subcubic(&no).unwrap().decision, Decision::No);
    }

    #[test]
    fn rejects_non_forest_and_high_degree() {
        let tri = inst(3, &[(0, 1), (1, 2), (0, 2)], &[1], false);
        assert!(matches!(
            solve_subcubic(&tri),
            Err(SolveError::Precondition(_))
        ));
        let star4 = inst(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], &[1], false);
        assert!(matches!(
            solve_subcubic(&star4),
            Err(SolveError::Precondition(_))
        ));
    }

    #[test]
    fn empty_request_list_is_trivially_yes() {
        let i = inst(3, &[(0, 1), (1, 2)], &[], false);
        check_yes(&i);
    }
}
