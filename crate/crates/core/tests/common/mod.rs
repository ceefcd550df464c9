//! Shared helpers for the integration tests.

#![allow(dead_code)]

mod oracle;

pub use oracle::*;

use netgame_core::Graph;
use proptest::prelude::*;

/// Random simple graph with `min_n..=max_n` vertices and a random density.
pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0.0..1.0f64).prop_flat_map(|(n, p)| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(proptest::bool::weighted(p.clamp(0.01, 0.99)), pairs).prop_map(move |bits| {
            let mut g = Graph::new_empty(n).unwrap();
            let mut k = 0;
            for i in 1..=n {
                for j in (i + 1)..=n {
                    if bits[k] {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}
