//! Independent reference implementations built on nalgebra: dense solves,
//! truncated Katz series, union-find components and brute-force stability.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use netgame_core::Graph;

pub fn adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.order();
    DMatrix::from_fn(n, n, |r, c| if g.has_edge(r + 1, c + 1) { 1.0 } else { 0.0 })
}

pub fn spectral_radius(g: &Graph) -> f64 {
    adjacency(g)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `Σ_{k≥1} αᵏ Aᵏ 1`, summed until the terms vanish.
pub fn katz_series(g: &Graph, alpha: f64) -> Vec<f64> {
    let a = adjacency(g);
    let mut term = DVector::from_element(g.order(), 1.0);
    let mut total = DVector::zeros(g.order());
    for _ in 0..10_000 {
        term = &a * term * alpha;
        total += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    total.iter().copied().collect()
}

/// `((I − αA)⁻¹ − I)·1` from one dense LU solve of the whole graph.
pub fn katz_dense(g: &Graph, alpha: f64) -> Vec<f64> {
    let n = g.order();
    let m = DMatrix::identity(n, n) - adjacency(g) * alpha;
    let y = m.lu().solve(&DVector::from_element(n, 1.0)).expect("nonsingular");
    y.iter().map(|v| v - 1.0).collect()
}

/// Union-find component ids, independent of the crate's traversal.
pub fn component_ids(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (i, j) in g.edges() {
        let (a, b) = (root(&mut parent, i - 1), root(&mut parent, j - 1));
        parent[a] = b;
    }
    (0..n).map(|v| root(&mut parent, v)).collect()
}

pub fn scaled(g: &Graph, alpha: f64) -> Vec<f64> {
    let raw = katz_dense(g, alpha);
    let ids = component_ids(g);
    (0..g.order())
        .map(|v| {
            let total: f64 = (0..g.order()).filter(|&u| ids[u] == ids[v]).map(|u| raw[u]).sum();
            if total == 0.0 {
                1.0
            } else {
                raw[v] / total
            }
        })
        .collect()
}

pub fn payoffs(g: &Graph, alpha: f64, rewards: &[f64], costs: &[f64]) -> Vec<f64> {
    let k = scaled(g, alpha);
    let ids = component_ids(g);
    (0..g.order())
        .map(|v| {
            let others = ids.iter().filter(|&&c| c == ids[v]).count() - 1;
            rewards[v] * others as f64 * k[v] - costs[v] * g.degrees()[v] as f64
        })
        .collect()
}

/// Brute-force pairwise stability by comparing whole payoff vectors.
pub fn is_stable(g: &Graph, alpha: f64, rewards: &[f64], costs: &[f64]) -> bool {
    let before = payoffs(g, alpha, rewards, costs);
    for i in 1..=g.order() {
        for j in (i + 1)..=g.order() {
            let present = g.has_edge(i, j);
            let h = if present { g.without_edge(i, j) } else { g.with_edge(i, j) }.unwrap();
            let after = payoffs(&h, alpha, rewards, costs);
            let (di, dj) = (after[i - 1] - before[i - 1], after[j - 1] - before[j - 1]);
            let moves = if present { di > 0.0 || dj > 0.0 } else { di > 0.0 && dj > 0.0 };
            if moves {
                return false;
            }
        }
    }
    true
}

/// Every graph on `n` labelled vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p);
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}
