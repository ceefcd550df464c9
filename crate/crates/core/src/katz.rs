//! Katz centrality and the component-scaled centrality used in payoffs.
//!
//! Raw Katz centrality is `C = ((I - αAᵀ)⁻¹ - I)·1`, obtained from one dense
//! solve `(I - αAᵀ) y = 1` followed by `C = y - 1`. Since `I - αAᵀ` is block
//! diagonal over connected components, each component is solved on its own
//! induced submatrix.
//!
//! The scaled centrality divides each raw score by the sum over the vertex's
//! component, so it sums to one per component. Isolates are assigned 1.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{ComponentLabeling, Graph};
use crate::linalg;

/// Safety margin on `α·λ₀ < 1`.
pub const GUARD_EPSILON: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CentralityReport {
    pub alpha: f64,
    /// Raw Katz centrality, indexed by `vertex - 1`.
    pub raw: Vec<f64>,
    /// Component-scaled centrality, indexed by `vertex - 1`.
    pub scaled: Vec<f64>,
    pub components: ComponentLabeling,
}

impl CentralityReport {
    pub fn raw_of(&self, v: usize) -> f64 {
        self.raw[v - 1]
    }

    pub fn scaled_of(&self, v: usize) -> f64 {
        self.scaled[v - 1]
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// Whether the Katz series converges on `g` with margin [`GUARD_EPSILON`].
pub fn alpha_guard(g: &Graph, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    // λ₀ never exceeds the maximum degree.
    if alpha * (g.max_degree() as f64) < 1.0 - GUARD_EPSILON {
        return Ok(true);
    }
    Ok(alpha * g.spectral_radius().value < 1.0 - GUARD_EPSILON)
}

fn require_guard(g: &Graph, alpha: f64) -> Result<()> {
    if alpha_guard(g, alpha)? {
        Ok(())
    } else {
        Err(Error::AlphaGuard {
            alpha,
            radius: g.spectral_radius().value,
        })
    }
}

/// Raw Katz centrality for every vertex.
pub fn raw_katz(g: &Graph, alpha: f64) -> Result<Vec<f64>> {
    require_guard(g, alpha)?;
    let mut raw = vec![0.0; g.order()];
    for members in g.components().members() {
        if members.len() == 1 {
            continue;
        }
        for (&v, c) in members.iter().zip(component_raw(g, &members, alpha)?) {
            raw[v - 1] = c;
        }
    }
    Ok(raw)
}

pub fn scaled_component_katz(g: &Graph, alpha: f64) -> Result<CentralityReport> {
    require_guard(g, alpha)?;
    scaled_unchecked(g, alpha)
}

/// Scaled centrality without the spectral guard; callers vouch for `alpha`.
pub(crate) fn scaled_unchecked(g: &Graph, alpha: f64) -> Result<CentralityReport> {
    let components = g.components();
    let mut raw = vec![0.0; g.order()];
    let mut scaled = vec![1.0; g.order()];
    for members in components.members() {
        if members.len() == 1 {
            continue;
        }
        let (component_raw, component_scaled) = component_scaled(g, &members, alpha)?;
        for (k, &v) in members.iter().enumerate() {
            raw[v - 1] = component_raw[k];
            scaled[v - 1] = component_scaled[k];
        }
    }
    Ok(CentralityReport {
        alpha,
        raw,
        scaled,
        components,
    })
}

/// Raw Katz scores of one connected component, in the order of `members`.
pub(crate) fn component_raw(g: &Graph, members: &[usize], alpha: f64) -> Result<Vec<f64>> {
    let s = members.len();
    // (I - αAᵀ) restricted to the component.
    let mut system = vec![0.0; s * s];
    for (r, &u) in members.iter().enumerate() {
        system[r * s + r] = 1.0;
        for (c, &w) in members.iter().enumerate() {
            if g.has_edge(w, u) {
                system[r * s + c] = -alpha;
            }
        }
    }
    let mut y = linalg::solve(system, vec![1.0; s])?;
    for value in &mut y {
        *value -= 1.0;
    }
    Ok(y)
}

/// Raw and scaled scores of one component with at least two vertices.
pub(crate) fn component_scaled(
    g: &Graph,
    members: &[usize],
    alpha: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let raw = component_raw(g, members, alpha)?;
    let total: f64 = raw.iter().sum();
    assert!(
        total > 0.0 && total.is_finite(),
        "connected component with non-positive Katz mass {total}"
    );
    let scaled = raw.iter().map(|c| c / total).collect();
    Ok((raw, scaled))
}
