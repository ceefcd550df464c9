//! Undirected simple graphs over players `1..=n`.
//!
//! Vertex ids are 1-based everywhere in the public API. Per-vertex vectors
//! returned by this crate (degrees, centralities, payoffs) are indexed by
//! `id - 1`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Residual tolerance for the power iteration behind [`Graph::spectral_radius`].
pub const SPECTRAL_TOLERANCE: f64 = 1e-10;
/// Iteration cap for [`Graph::spectral_radius`].
pub const SPECTRAL_MAX_ITERATIONS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    degrees: Vec<usize>,
    edges: usize,
}

impl Graph {
    /// The null network: `n` isolates.
    pub fn new_empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooFewVertices { min: 1, got: 0 });
        }
        Ok(Graph {
            n,
            adjacency: vec![false; n * n],
            degrees: vec![0; n],
            edges: 0,
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices { min: 2, got: n });
        }
        let mut g = Graph::new_empty(n)?;
        for i in 1..=n {
            for j in (i + 1)..=n {
                g.insert(i, j);
            }
        }
        Ok(g)
    }

    /// Star with hub 1 and leaves `2..=n`.
    pub fn star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices { min: 2, got: n });
        }
        let mut g = Graph::new_empty(n)?;
        for leaf in 2..=n {
            g.insert(1, leaf);
        }
        Ok(g)
    }

    /// Complete graph minus the edge (1, 2).
    pub fn nearly_complete(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices { min: 3, got: n });
        }
        let mut g = Graph::complete(n)?;
        g.delete(1, 2);
        Ok(g)
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new_empty(n)?;
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// `false` for self-pairs and out-of-range ids.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.in_range(i) && self.in_range(j) && self.adjacency[self.slot(i, j)]
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_pair(i, j)?;
        if self.adjacency[self.slot(i, j)] {
            return Err(Error::EdgePresent(i, j));
        }
        self.insert(i, j);
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_pair(i, j)?;
        if !self.adjacency[self.slot(i, j)] {
            return Err(Error::EdgeAbsent(i, j));
        }
        self.delete(i, j);
        Ok(())
    }

    pub fn with_edge(&self, i: usize, j: usize) -> Result<Self> {
        let mut g = self.clone();
        g.add_edge(i, j)?;
        Ok(g)
    }

    pub fn without_edge(&self, i: usize, j: usize) -> Result<Self> {
        let mut g = self.clone();
        g.remove_edge(i, j)?;
        Ok(g)
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.degrees[v - 1])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges as f64 / self.n as f64
    }

    /// Neighbors of `v` in increasing order. Panics if `v` is out of range.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        assert!(self.in_range(v), "vertex {v} out of range 1..={}", self.n);
        let row = &self.adjacency[(v - 1) * self.n..v * self.n];
        row.iter()
            .enumerate()
            .filter_map(|(k, &linked)| linked.then_some(k + 1))
    }

    /// All edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn components(&self) -> ComponentLabeling {
        const UNSET: usize = usize::MAX;
        let mut labels = vec![UNSET; self.n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if labels[start] != UNSET {
                continue;
            }
            let label = sizes.len();
            let mut size = 0;
            labels[start] = label;
            queue.push_back(start + 1);
            while let Some(v) = queue.pop_front() {
                size += 1;
                for w in self.neighbors(v) {
                    if labels[w - 1] == UNSET {
                        labels[w - 1] = label;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        ComponentLabeling { labels, sizes }
    }

    /// Vertices of the component containing `v`, sorted ascending.
    pub fn component_of(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let mut seen = vec![false; self.n];
        let mut members = vec![v];
        seen[v - 1] = true;
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for w in self.neighbors(u) {
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        Ok(members)
    }

    /// Largest adjacency eigenvalue, by power iteration on `A + I`.
    ///
    /// The shift makes the Perron root dominant in magnitude even for
    /// bipartite graphs, where `A` alone has `-λ₀` in its spectrum.
    pub fn spectral_radius(&self) -> SpectralRadius {
        if self.edges == 0 {
            return SpectralRadius {
                value: 0.0,
                converged: true,
                iterations: 0,
            };
        }
        let n = self.n;
        let mut x = vec![1.0 / libm::sqrt(n as f64); n];
        let mut y = vec![0.0; n];
        let mut estimate = 0.0;
        for iteration in 1..=SPECTRAL_MAX_ITERATIONS {
            // y = (A + I) x
            for (v, yv) in y.iter_mut().enumerate() {
                *yv = x[v] + self.neighbors(v + 1).map(|w| x[w - 1]).sum::<f64>();
            }
            let shifted: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let residual = libm::sqrt(
                x.iter()
                    .zip(&y)
                    .map(|(a, b)| (b - shifted * a) * (b - shifted * a))
                    .sum(),
            );
            estimate = shifted - 1.0;
            if residual <= SPECTRAL_TOLERANCE * shifted.max(1.0) {
                return SpectralRadius {
                    value: estimate,
                    converged: true,
                    iterations: iteration,
                };
            }
            let norm = libm::sqrt(y.iter().map(|b| b * b).sum());
            for (a, b) in x.iter_mut().zip(&y) {
                *a = b / norm;
            }
        }
        SpectralRadius {
            value: estimate,
            converged: false,
            iterations: SPECTRAL_MAX_ITERATIONS,
        }
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if self.in_range(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub(crate) fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(())
    }

    /// Flip the pair (i, j). Caller guarantees a valid, distinct pair.
    pub(crate) fn toggle(&mut self, i: usize, j: usize) {
        if self.adjacency[self.slot(i, j)] {
            self.delete(i, j);
        } else {
            self.insert(i, j);
        }
    }

    fn in_range(&self, v: usize) -> bool {
        (1..=self.n).contains(&v)
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    fn insert(&mut self, i: usize, j: usize) {
        let (a, b) = (self.slot(i, j), self.slot(j, i));
        self.adjacency[a] = true;
        self.adjacency[b] = true;
        self.degrees[i - 1] += 1;
        self.degrees[j - 1] += 1;
        self.edges += 1;
    }

    fn delete(&mut self, i: usize, j: usize) {
        let (a, b) = (self.slot(i, j), self.slot(j, i));
        self.adjacency[a] = false;
        self.adjacency[b] = false;
        self.degrees[i - 1] -= 1;
        self.degrees[j - 1] -= 1;
        self.edges -= 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    /// `false` when the iteration cap was hit; `value` is then the last estimate.
    pub converged: bool,
    pub iterations: usize,
}

/// Connected components. Labels are numbered in order of each component's
/// smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl ComponentLabeling {
    pub fn label(&self, v: usize) -> usize {
        self.labels[v - 1]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn size_of(&self, v: usize) -> usize {
        self.sizes[self.label(v)]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Members of each component, each sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (k, &label) in self.labels.iter().enumerate() {
            out[label].push(k + 1);
        }
        out
    }
}
