//! Entropy, the Hilbert function read off the graph, quasi-linearity and
//! the inequality audits.

mod audit;
mod profile;

use num_rational::Ratio;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, RecurrenceGraph};
use crate::sequence::Rat;

pub use audit::{audit_bounds, audit_table, entropy_theorems_check, entropy_theorems_for, AuditCheck, AuditReport, TheoremReport};
pub use profile::{default_s_max, detect_period, profile_both, profile_oracle, quasilinearity, HilbertProfile, Method};

fn weight(kind: EdgeKind) -> i64 {
    match kind {
        EdgeKind::Augmenting => 1,
        EdgeKind::Rigid => 0,
    }
}

/// Maximum over cycles of total weight divided by length, `None` when the
/// graph is acyclic. Karp's recurrence on every strongly connected
/// component, run twice so that only two rows are kept in memory.
pub fn max_mean_cycle(vertex_count: usize, edges: &[(usize, usize, i64)]) -> Option<Rat> {
    let mut dg: DiGraph<(), ()> = DiGraph::with_capacity(vertex_count, edges.len());
    for _ in 0..vertex_count {
        dg.add_node(());
    }
    for &(u, v, _) in edges {
        dg.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    let mut comp = vec![usize::MAX; vertex_count];
    let sccs = tarjan_scc(&dg);
    for (c, nodes) in sccs.iter().enumerate() {
        for n in nodes {
            comp[n.index()] = c;
        }
    }
    let mut best: Option<Rat> = None;
    for (c, nodes) in sccs.iter().enumerate() {
        let idx: std::collections::HashMap<usize, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.index(), i)).collect();
        let inner: Vec<(usize, usize, i64)> = edges
            .iter()
            .filter(|&&(u, v, _)| comp[u] == c && comp[v] == c)
            .map(|&(u, v, w)| (idx[&u], idx[&v], w))
            .collect();
        if inner.is_empty() {
            continue;
        }
        let lambda = karp(nodes.len(), &inner);
        best = Some(best.map_or(lambda, |b| b.max(lambda)));
    }
    best
}

/// Karp on a strongly connected graph with `n` vertices.
fn karp(n: usize, edges: &[(usize, usize, i64)]) -> Rat {
    let advance = |row: &[Option<i64>]| {
        let mut next = vec![None; n];
        for &(u, v, w) in edges {
            if let Some(d) = row[u] {
                let cand = d + w;
                if next[v].is_none_or(|x| cand > x) {
                    next[v] = Some(cand);
                }
            }
        }
        next
    };
    let mut start = vec![None; n];
    start[0] = Some(0);
    let mut row = start.clone();
    for _ in 0..n {
        row = advance(&row);
    }
    let last = row;
    let mut worst: Vec<Option<Rat>> = vec![None; n];
    let mut row = start;
    for k in 0..n {
        for v in 0..n {
            if let (Some(dn), Some(dk)) = (last[v], row[v]) {
                let r = Ratio::new(dn - dk, (n - k) as i64);
                if worst[v].is_none_or(|x| r < x) {
                    worst[v] = Some(r);
                }
            }
        }
        row = advance(&row);
    }
    worst.into_iter().flatten().max().expect("strongly connected component has a cycle")
}

/// `H`: the best ratio of augmenting edges to length over all cycles, 0 if
/// there is no cycle.
pub fn entropy_graph(g: &RecurrenceGraph) -> Rat {
    let edges: Vec<(usize, usize, i64)> = g
        .edges()
        .iter()
        .map(|e| (e.from, e.to, weight(e.label.kind)))
        .collect();
    max_mean_cycle(g.vertex_count(), &edges).unwrap_or_else(|| Rat::from_integer(0))
}

/// Independent check of [`entropy_graph`] by listing every simple cycle.
/// Only for graphs with at most 12 vertices.
pub fn simple_cycle_entropy(g: &RecurrenceGraph) -> Result<Rat> {
    let v = g.vertex_count();
    if v > 12 {
        return Err(Error::Unsupported(format!("{v} vertices is too many to list cycles")));
    }
    let mut adj = vec![Vec::new(); v];
    for e in g.edges() {
        adj[e.from].push((e.to, weight(e.label.kind)));
    }
    fn dfs(
        adj: &[Vec<(usize, i64)>],
        root: usize,
        at: usize,
        len: i64,
        aug: i64,
        on_path: &mut Vec<bool>,
        best: &mut Rat,
    ) {
        for &(to, w) in &adj[at] {
            if to == root {
                *best = (*best).max(Ratio::new(aug + w, len + 1));
            } else if to > root && !on_path[to] {
                on_path[to] = true;
                dfs(adj, root, to, len + 1, aug + w, on_path, best);
                on_path[to] = false;
            }
        }
    }
    let mut best = Rat::from_integer(0);
    for root in 0..v {
        let mut on_path = vec![false; v];
        on_path[root] = true;
        dfs(&adj, root, root, 0, 0, &mut on_path, &mut best);
    }
    Ok(best)
}

/// `d(s)` for `s = 1..=s_max` (index `s - 1`). For `s >= n` this is the
/// best `n(v_0) + #augmenting` over paths of length `s - n`; below `n` the
/// convention `d(s) = s` applies.
pub fn hilbert_graph_table(g: &RecurrenceGraph, s_max: usize) -> Vec<usize> {
    let n = g.degree();
    let mut table: Vec<usize> = (1..=s_max.min(n.saturating_sub(1))).collect();
    if s_max < n {
        return table;
    }
    let v = g.vertex_count();
    let mut incoming: Vec<Vec<(usize, u32)>> = vec![Vec::new(); v];
    for e in g.edges() {
        incoming[e.to].push((e.from, weight(e.label.kind) as u32));
    }
    let mut f: Vec<Option<u32>> = (0..v).map(|i| Some(g.classes(i) as u32)).collect();
    let best = |f: &[Option<u32>]| f.iter().flatten().copied().max().unwrap_or(0) as usize;
    table.push(best(&f));
    let relax = |w: usize, f: &[Option<u32>]| {
        incoming[w]
            .iter()
            .filter_map(|&(u, wt)| f[u].map(|x| x + wt))
            .max()
    };
    for _ in n + 1..=s_max {
        f = if v >= 2048 {
            (0..v).into_par_iter().map(|w| relax(w, &f)).collect()
        } else {
            (0..v).map(|w| relax(w, &f)).collect()
        };
        table.push(best(&f));
    }
    table
}

pub fn hilbert_graph(g: &RecurrenceGraph, s: usize) -> usize {
    hilbert_graph_table(g, s)[s - 1]
}

/// Dimension after quotienting by the line of constant shifts, which every
/// non-empty `D(s)` contains.
pub fn projective(table: &[usize]) -> Vec<usize> {
    table.iter().map(|d| d.saturating_sub(1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_graph_two_cycles() {
        // 0 <-> 1 with one augmenting edge; 2 -> 3 -> 4 -> 2 with two
        let edges = [(0, 1, 1), (1, 0, 0), (2, 3, 1), (3, 4, 1), (4, 2, 0)];
        assert_eq!(max_mean_cycle(5, &edges), Some(Ratio::new(2, 3)));
    }

    #[test]
    fn acyclic_has_no_cycle() {
        assert_eq!(max_mean_cycle(3, &[(0, 1, 1), (1, 2, 1)]), None);
        assert_eq!(max_mean_cycle(1, &[(0, 0, 0)]), Some(Rat::from_integer(0)));
    }

    #[test]
    fn cycle_not_through_scc_root() {
        // best cycle 2 <-> 3 is reachable only from inside the component
        let edges = [(0, 1, 0), (1, 0, 0), (1, 2, 0), (2, 3, 1), (3, 2, 1), (3, 0, 0)];
        assert_eq!(max_mean_cycle(4, &edges), Some(Rat::from_integer(1)));
    }
}
