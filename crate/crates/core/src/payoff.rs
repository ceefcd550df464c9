//! Player utility: `π_i = R_i · p_i · K_i − γ_i · deg(i)`, where `p_i` is the
//! number of other players in `i`'s component and `K_i` its scaled Katz
//! centrality.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::katz::{self, CentralityReport, GUARD_EPSILON};

/// Game parameters. `α·(n−1) < 1` keeps every graph on `n` players inside
/// the Katz convergence region, since `K_n` has the largest spectral radius.
#[derive(Clone, Debug, PartialEq)]
pub struct GameConfig {
    alpha: f64,
    rewards: Vec<f64>,
    costs: Vec<f64>,
}

impl GameConfig {
    pub fn new(alpha: f64, rewards: Vec<f64>, costs: Vec<f64>) -> Result<Self> {
        let n = rewards.len();
        if n == 0 {
            return Err(Error::TooFewVertices { min: 1, got: 0 });
        }
        if costs.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: costs.len(),
            });
        }
        katz::check_alpha(alpha)?;
        if alpha * (n - 1) as f64 >= 1.0 - GUARD_EPSILON {
            return Err(Error::invalid(
                "alpha",
                format!("alpha * (n - 1) must be below 1, got {alpha} * {}", n - 1),
            ));
        }
        if let Some(v) = rewards.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::invalid(
                "reward",
                format!("player {} has non-positive reward {}", v + 1, rewards[v]),
            ));
        }
        if let Some(v) = costs.iter().position(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::invalid(
                "cost",
                format!("player {} has non-positive cost {}", v + 1, costs[v]),
            ));
        }
        Ok(GameConfig {
            alpha,
            rewards,
            costs,
        })
    }

    /// Every player shares `reward` and `cost`.
    pub fn homogeneous(n: usize, alpha: f64, reward: f64, cost: f64) -> Result<Self> {
        GameConfig::new(alpha, vec![reward; n], vec![cost; n])
    }

    /// Players `1..=count` pay `discounted`, everyone else `regular`.
    pub fn incentivized(
        n: usize,
        alpha: f64,
        reward: f64,
        regular: f64,
        discounted: f64,
        count: usize,
    ) -> Result<Self> {
        if count > n {
            return Err(Error::invalid(
                "incentivized count",
                format!("{count} exceeds player count {n}"),
            ));
        }
        let mut costs = vec![regular; n];
        costs[..count].fill(discounted);
        GameConfig::new(alpha, vec![reward; n], costs)
    }

    pub fn players(&self) -> usize {
        self.rewards.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn reward(&self, v: usize) -> f64 {
        self.rewards[v - 1]
    }

    pub fn cost(&self, v: usize) -> f64 {
        self.costs[v - 1]
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.order() == self.players() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: self.players(),
                got: g.order(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PayoffReport {
    pub benefit: Vec<f64>,
    pub cost: Vec<f64>,
    pub payoff: Vec<f64>,
    pub total: f64,
}

/// `R_i · p_i · K_i`.
pub fn benefit(g: &Graph, cfg: &GameConfig, report: &CentralityReport, v: usize) -> Result<f64> {
    cfg.check_graph(g)?;
    if report.scaled.len() != g.order() {
        return Err(Error::SizeMismatch {
            expected: g.order(),
            got: report.scaled.len(),
        });
    }
    g.check_vertex(v)?;
    let others = report.components.size_of(v) - 1;
    Ok(benefit_term(cfg.reward(v), others, report.scaled_of(v)))
}

/// `γ_i · deg(i)`.
pub fn cost(g: &Graph, cfg: &GameConfig, v: usize) -> Result<f64> {
    cfg.check_graph(g)?;
    Ok(cfg.cost(v) * g.degree(v)? as f64)
}

pub fn payoff_vector(g: &Graph, cfg: &GameConfig) -> Result<PayoffReport> {
    cfg.check_graph(g)?;
    let report = katz::scaled_unchecked(g, cfg.alpha)?;
    let n = g.order();
    let mut out = PayoffReport {
        benefit: Vec::with_capacity(n),
        cost: Vec::with_capacity(n),
        payoff: Vec::with_capacity(n),
        total: 0.0,
    };
    for v in 1..=n {
        let b = benefit_term(cfg.reward(v), report.components.size_of(v) - 1, report.scaled_of(v));
        let c = cfg.cost(v) * g.degrees()[v - 1] as f64;
        out.benefit.push(b);
        out.cost.push(c);
        out.payoff.push(b - c);
    }
    out.total = out.payoff.iter().sum();
    Ok(out)
}

/// Payoff changes `(Δπ_i, Δπ_j)` if the absent link (i, j) were added.
pub fn marginal_add(g: &Graph, cfg: &GameConfig, i: usize, j: usize) -> Result<(f64, f64)> {
    cfg.check_graph(g)?;
    g.check_pair(i, j)?;
    if g.has_edge(i, j) {
        return Err(Error::EdgePresent(i, j));
    }
    marginal(g, cfg, i, j)
}

/// Payoff changes `(Δπ_i, Δπ_j)` if the present link (i, j) were removed.
pub fn marginal_delete(g: &Graph, cfg: &GameConfig, i: usize, j: usize) -> Result<(f64, f64)> {
    cfg.check_graph(g)?;
    g.check_pair(i, j)?;
    if !g.has_edge(i, j) {
        return Err(Error::EdgeAbsent(i, j));
    }
    marginal(g, cfg, i, j)
}

fn marginal(g: &Graph, cfg: &GameConfig, i: usize, j: usize) -> Result<(f64, f64)> {
    let before = pair_payoffs(g, cfg, i, j)?;
    let mut moved = g.clone();
    moved.toggle(i, j);
    let after = pair_payoffs(&moved, cfg, i, j)?;
    Ok((after.0 - before.0, after.1 - before.1))
}

#[inline]
pub(crate) fn benefit_term(reward: f64, others: usize, scaled: f64) -> f64 {
    reward * others as f64 * scaled
}

/// Payoffs of `i` and `j` alone, solving only their components.
///
/// Produces bit-identical values to [`payoff_vector`] for the same vertices:
/// both paths solve the same sorted component system.
pub(crate) fn pair_payoffs(g: &Graph, cfg: &GameConfig, i: usize, j: usize) -> Result<(f64, f64)> {
    let members_i = g.component_of(i)?;
    let scaled_i = scaled_in(g, cfg, &members_i)?;
    let at = |members: &[usize], scaled: &[f64], v: usize| {
        let k = members.binary_search(&v).expect("vertex in its own component");
        let b = benefit_term(cfg.reward(v), members.len() - 1, scaled[k]);
        b - cfg.cost(v) * g.degrees()[v - 1] as f64
    };
    let pi = at(&members_i, &scaled_i, i);
    let pj = if members_i.binary_search(&j).is_ok() {
        at(&members_i, &scaled_i, j)
    } else {
        let members_j = g.component_of(j)?;
        let scaled_j = scaled_in(g, cfg, &members_j)?;
        at(&members_j, &scaled_j, j)
    };
    Ok((pi, pj))
}

fn scaled_in(g: &Graph, cfg: &GameConfig, members: &[usize]) -> Result<Vec<f64>> {
    if members.len() == 1 {
        return Ok(vec![1.0]);
    }
    Ok(katz::component_scaled(g, members, cfg.alpha)?.1)
}
