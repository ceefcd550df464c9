//! Randomized link formation.
//!
//! Starting from `n` isolates, a uniformly random unordered pair is drawn at
//! each step. An absent link is added only if both endpoints strictly gain;
//! a present link is removed if either endpoint strictly gains. The process
//! has no intrinsic stopping signal, so after a run of rejected proposals
//! (and periodically) an exhaustive scan decides whether the graph is
//! pairwise stable. A run reports `converged` only with a stable certificate
//! in hand.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incremental::Incremental;
use crate::payoff::{self, GameConfig};

/// Recorded in every trace so runs can be reproduced bit for bit.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64 (rand_chacha 0.9)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DynamicsConfig {
    pub seed: u64,
    pub max_proposals: u64,
    /// Consecutive rejections that trigger an exhaustive stability check.
    pub stall_window: u64,
    /// A check is also forced every this many proposals.
    pub check_cadence: u64,
}

impl DynamicsConfig {
    pub fn new(seed: u64, max_proposals: u64, stall_window: u64, check_cadence: u64) -> Result<Self> {
        for (name, value) in [
            ("max_proposals", max_proposals),
            ("stall_window", stall_window),
            ("check_cadence", check_cadence),
        ] {
            if value == 0 {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        if stall_window > max_proposals {
            return Err(Error::invalid("stall_window", "must not exceed max_proposals"));
        }
        Ok(DynamicsConfig {
            seed,
            max_proposals,
            stall_window,
            check_cadence,
        })
    }

    /// Stall window `5·P`, cadence `10·P` with `P = n(n−1)/2` pairs, and a
    /// cap of `500·n²` proposals.
    pub fn defaults_for(n: usize, seed: u64) -> Self {
        let n = n.max(2) as u64;
        let pairs = n * (n - 1) / 2;
        DynamicsConfig {
            seed,
            max_proposals: 500 * n * n,
            stall_window: 5 * pairs,
            check_cadence: 10 * pairs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Add,
    Delete,
}

impl Move {
    pub fn as_str(self) -> &'static str {
        match self {
            Move::Add => "add",
            Move::Delete => "delete",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProposalAction {
    AddAccepted,
    AddRejected,
    DeleteAccepted,
    DeleteRejected,
}

impl ProposalAction {
    /// Bilateral consent to add, unilateral veto to delete; ties never move.
    pub fn decide(mv: Move, deltas: (f64, f64)) -> Self {
        match mv {
            Move::Add if deltas.0 > 0.0 && deltas.1 > 0.0 => ProposalAction::AddAccepted,
            Move::Add => ProposalAction::AddRejected,
            Move::Delete if deltas.0 > 0.0 || deltas.1 > 0.0 => ProposalAction::DeleteAccepted,
            Move::Delete => ProposalAction::DeleteRejected,
        }
    }

    pub fn is_accepted(self) -> bool {
        matches!(self, ProposalAction::AddAccepted | ProposalAction::DeleteAccepted)
    }

    pub fn move_kind(self) -> Move {
        match self {
            ProposalAction::AddAccepted | ProposalAction::AddRejected => Move::Add,
            ProposalAction::DeleteAccepted | ProposalAction::DeleteRejected => Move::Delete,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProposalAction::AddAccepted => "add-accepted",
            ProposalAction::AddRejected => "add-rejected",
            ProposalAction::DeleteAccepted => "delete-accepted",
            ProposalAction::DeleteRejected => "delete-rejected",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProposalEvent {
    pub index: u64,
    /// `(i, j)` with `i < j`.
    pub pair: (usize, usize),
    pub action: ProposalAction,
    pub deltas: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub pair: (usize, usize),
    pub mv: Move,
    pub deltas: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityCertificate {
    pub stable: bool,
    /// First profitable deviation in lexicographic pair order, if any.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationTrace {
    pub game: GameConfig,
    pub dynamics: DynamicsConfig,
    pub rng_algorithm: &'static str,
    pub events: Vec<ProposalEvent>,
    pub final_graph: Graph,
    pub certificate: StabilityCertificate,
    pub converged: bool,
    /// Exhaustive checks performed while running.
    pub checks: u64,
}

impl SimulationTrace {
    pub fn accepted(&self) -> usize {
        self.events.iter().filter(|e| e.action.is_accepted()).count()
    }

    pub fn summary(&self) -> Result<RunSummary> {
        RunSummary::new(self)
    }
}

/// Flat per-run statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub seed: u64,
    pub converged: bool,
    pub proposals: u64,
    pub accepted: usize,
    pub edges: usize,
    pub average_degree: f64,
    pub total_payoff: f64,
    /// Component sizes, largest first.
    pub component_sizes: Vec<usize>,
    pub giant_fraction: f64,
    pub max_degree: usize,
    pub degrees: Vec<usize>,
    pub payoffs: Vec<f64>,
}

impl RunSummary {
    fn new(trace: &SimulationTrace) -> Result<Self> {
        let g = &trace.final_graph;
        let payoffs = payoff::payoff_vector(g, &trace.game)?;
        let mut component_sizes = g.components().sizes().to_vec();
        component_sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(RunSummary {
            seed: trace.dynamics.seed,
            converged: trace.converged,
            proposals: trace.events.len() as u64,
            accepted: trace.accepted(),
            edges: g.edge_count(),
            average_degree: g.average_degree(),
            total_payoff: payoffs.total,
            giant_fraction: component_sizes[0] as f64 / g.order() as f64,
            component_sizes,
            max_degree: g.max_degree(),
            degrees: g.degrees().to_vec(),
            payoffs: payoffs.payoff,
        })
    }

    /// Mean degree over the given 1-based players.
    pub fn mean_degree_of(&self, players: &[usize]) -> f64 {
        if players.is_empty() {
            return 0.0;
        }
        players.iter().map(|&v| self.degrees[v - 1] as f64).sum::<f64>() / players.len() as f64
    }

    pub fn mean_payoff_of(&self, players: &[usize]) -> f64 {
        if players.is_empty() {
            return 0.0;
        }
        players.iter().map(|&v| self.payoffs[v - 1]).sum::<f64>() / players.len() as f64
    }
}

/// Draws an unordered pair `(i, j)`, `i < j`, uniformly among all `n(n−1)/2`.
pub fn sample_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    debug_assert!(n >= 2);
    let mut k = rng.random_range(0..n * (n - 1) / 2);
    for i in 1..n {
        let row = n - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    unreachable!("pair index within range")
}

/// One proposal on `g`: sample a pair, evaluate the single candidate move
/// and apply it if accepted.
pub fn propose_step<R: Rng + ?Sized>(
    g: &mut Graph,
    cfg: &GameConfig,
    rng: &mut R,
    index: u64,
) -> Result<ProposalEvent> {
    cfg.check_graph(g)?;
    if g.order() < 2 {
        return Err(Error::TooFewVertices { min: 2, got: g.order() });
    }
    let (i, j) = sample_pair(g.order(), rng);
    let mv = if g.has_edge(i, j) { Move::Delete } else { Move::Add };
    let deltas = match mv {
        Move::Add => payoff::marginal_add(g, cfg, i, j)?,
        Move::Delete => payoff::marginal_delete(g, cfg, i, j)?,
    };
    let action = ProposalAction::decide(mv, deltas);
    if action.is_accepted() {
        g.toggle(i, j);
    }
    Ok(ProposalEvent {
        index,
        pair: (i, j),
        action,
        deltas,
    })
}

/// Exhaustive scan over all pairs with the same rules as [`propose_step`].
pub fn is_pairwise_stable(g: &Graph, cfg: &GameConfig) -> Result<StabilityCertificate> {
    cfg.check_graph(g)?;
    Evaluator::new(g.clone(), cfg)?.certificate()
}

/// Full re-evaluation: each candidate move re-solves the touched components.
struct Evaluator<'a> {
    graph: Graph,
    cfg: &'a GameConfig,
    payoffs: Vec<f64>,
}

impl<'a> Evaluator<'a> {
    fn new(graph: Graph, cfg: &'a GameConfig) -> Result<Self> {
        let payoffs = payoff::payoff_vector(&graph, cfg)?.payoff;
        Ok(Evaluator { graph, cfg, payoffs })
    }

    fn deltas(&mut self, i: usize, j: usize) -> Result<(f64, f64)> {
        self.graph.toggle(i, j);
        let after = payoff::pair_payoffs(&self.graph, self.cfg, i, j);
        self.graph.toggle(i, j);
        let (pi, pj) = after?;
        Ok((pi - self.payoffs[i - 1], pj - self.payoffs[j - 1]))
    }

    fn certificate(&mut self) -> Result<StabilityCertificate> {
        let n = self.graph.order();
        for i in 1..=n {
            for j in (i + 1)..=n {
                let mv = if self.graph.has_edge(i, j) { Move::Delete } else { Move::Add };
                let deltas = self.deltas(i, j)?;
                if ProposalAction::decide(mv, deltas).is_accepted() {
                    return Ok(StabilityCertificate {
                        stable: false,
                        witness: Some(Witness {
                            pair: (i, j),
                            mv,
                            deltas,
                        }),
                    });
                }
            }
        }
        Ok(StabilityCertificate {
            stable: true,
            witness: None,
        })
    }
}

/// Runs the dynamics from the null network on `cfg.players()` players.
pub fn run_to_stability(cfg: &GameConfig, dynamics: &DynamicsConfig) -> Result<SimulationTrace> {
    let n = cfg.players();
    let mut state = Incremental::new(Graph::new_empty(n)?, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(dynamics.seed);
    let mut events = Vec::new();
    let mut checks = 0;
    let mut certificate = None;

    if n >= 2 {
        let mut stalled = 0;
        for index in 1..=dynamics.max_proposals {
            let (i, j) = sample_pair(n, &mut rng);
            let mv = if state.graph().has_edge(i, j) { Move::Delete } else { Move::Add };
            let deltas = state.deltas(i, j);
            let action = ProposalAction::decide(mv, deltas);
            if action.is_accepted() {
                state.apply(i, j)?;
                stalled = 0;
            } else {
                stalled += 1;
            }
            events.push(ProposalEvent {
                index,
                pair: (i, j),
                action,
                deltas,
            });
            if stalled >= dynamics.stall_window || index % dynamics.check_cadence == 0 {
                checks += 1;
                if state.find_violation().is_none() {
                    // Confirm with full re-evaluation before trusting the fast scan.
                    let cert = is_pairwise_stable(state.graph(), cfg)?;
                    if cert.stable {
                        certificate = Some(cert);
                        break;
                    }
                }
                stalled = 0;
            }
        }
    }

    let final_graph = state.into_graph();
    let (certificate, converged) = match certificate {
        Some(cert) => (cert, true),
        None => {
            checks += 1;
            let cert = is_pairwise_stable(&final_graph, cfg)?;
            // Hitting the cap never counts as convergence, even on a stable graph.
            (cert, n < 2)
        }
    };
    Ok(SimulationTrace {
        game: cfg.clone(),
        dynamics: *dynamics,
        rng_algorithm: RNG_ALGORITHM,
        events,
        final_graph,
        certificate,
        converged,
        checks,
    })
}

/// Independent runs with seeds `seed, seed + 1, …`.
pub fn run_batch(cfg: &GameConfig, dynamics: &DynamicsConfig, num_seeds: usize) -> Result<Vec<RunSummary>> {
    (0..num_seeds as u64)
        .map(|k| {
            let dyn_k = DynamicsConfig {
                seed: dynamics.seed.wrapping_add(k),
                ..*dynamics
            };
            run_to_stability(cfg, &dyn_k)?.summary()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn dynamics_config_validation() {
        assert!(DynamicsConfig::new(1, 10, 11, 5).is_err());
        assert!(DynamicsConfig::new(1, 10, 0, 5).is_err());
        assert!(DynamicsConfig::new(1, 10, 10, 5).is_ok());
        let d = DynamicsConfig::defaults_for(100, 9);
        assert_eq!((d.stall_window, d.check_cadence, d.max_proposals), (24_750, 49_500, 5_000_000));
    }

    #[test]
    fn pair_sampling_covers_all_pairs_uniformly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [[0usize; 5]; 5];
        for _ in 0..50_000 {
            let (i, j) = sample_pair(5, &mut rng);
            assert!(i < j && j <= 5);
            counts[i - 1][j - 1] += 1;
        }
        for (i, row) in counts.iter().enumerate() {
            for (j, &count) in row.iter().enumerate().skip(i + 1) {
                let share = count as f64 / 50_000.0;
                assert!((share - 0.1).abs() < 0.01, "pair ({i},{j}) share {share}");
            }
        }
    }

    #[test]
    fn propose_step_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut g = Graph::new_empty(2).unwrap();
        let cheap = GameConfig::homogeneous(2, 0.1, 1.0, 0.3).unwrap();
        let event = propose_step(&mut g, &cheap, &mut rng, 1).unwrap();
        assert_eq!(event.action, ProposalAction::AddAccepted);
        assert!(close(event.deltas.0, 0.2) && close(event.deltas.1, 0.2));
        assert!(g.has_edge(1, 2));

        let dear = GameConfig::homogeneous(2, 0.1, 1.0, 0.6).unwrap();
        let mut g = Graph::new_empty(2).unwrap();
        let event = propose_step(&mut g, &dear, &mut rng, 1).unwrap();
        assert_eq!(event.action, ProposalAction::AddRejected);
        assert_eq!(g.edge_count(), 0);

        let mut g = Graph::complete(2).unwrap();
        let event = propose_step(&mut g, &dear, &mut rng, 2).unwrap();
        assert_eq!(event.action, ProposalAction::DeleteAccepted);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn decision_rules() {
        use ProposalAction::*;
        assert_eq!(ProposalAction::decide(Move::Add, (0.1, 0.0)), AddRejected);
        assert_eq!(ProposalAction::decide(Move::Add, (0.1, 1e-300)), AddAccepted);
        assert_eq!(ProposalAction::decide(Move::Delete, (-1.0, 0.0)), DeleteRejected);
        assert_eq!(ProposalAction::decide(Move::Delete, (-1.0, 1e-9)), DeleteAccepted);
    }

    #[test]
    fn certificate_examples() {
        let k5 = Graph::complete(5).unwrap();
        let cfg = GameConfig::homogeneous(5, 0.1, 1.0, 0.1).unwrap();
        assert!(is_pairwise_stable(&k5, &cfg).unwrap().stable);

        let cfg = GameConfig::homogeneous(5, 0.1, 1.0, 0.12).unwrap();
        let cert = is_pairwise_stable(&k5, &cfg).unwrap();
        assert!(!cert.stable);
        let witness = cert.witness.unwrap();
        assert_eq!((witness.pair, witness.mv), ((1, 2), Move::Delete));

        let star_costs = [0.2, 0.3, 0.3, 0.3, 0.3].to_vec();
        let cfg = GameConfig::new(0.1, [1.0; 5].to_vec(), star_costs).unwrap();
        assert!(is_pairwise_stable(&Graph::star(5).unwrap(), &cfg).unwrap().stable);
    }

    #[test]
    fn small_runs() {
        let cfg = GameConfig::homogeneous(3, 0.1, 1.0, 0.1).unwrap();
        for seed in 0..10 {
            let trace = run_to_stability(&cfg, &DynamicsConfig::defaults_for(3, seed)).unwrap();
            assert!(trace.converged);
            assert_eq!(trace.final_graph, Graph::complete(3).unwrap());
        }
        let cfg = GameConfig::homogeneous(2, 0.1, 1.0, 0.6).unwrap();
        let trace = run_to_stability(&cfg, &DynamicsConfig::defaults_for(2, 4)).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.final_graph.edge_count(), 0);
        assert_eq!(trace.summary().unwrap().total_payoff, 0.0);

        let cfg = GameConfig::homogeneous(1, 0.1, 1.0, 0.6).unwrap();
        let trace = run_to_stability(&cfg, &DynamicsConfig::defaults_for(1, 4)).unwrap();
        assert!(trace.converged && trace.events.is_empty());
    }

    #[test]
    fn run_matches_manual_propose_steps() {
        let cfg = GameConfig::homogeneous(6, 0.1, 1.0, 0.15).unwrap();
        let dyn_cfg = DynamicsConfig::defaults_for(6, 11);
        let trace = run_to_stability(&cfg, &dyn_cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut g = Graph::new_empty(6).unwrap();
        for recorded in &trace.events {
            let event = propose_step(&mut g, &cfg, &mut rng, recorded.index).unwrap();
            assert_eq!((event.pair, event.action), (recorded.pair, recorded.action));
            assert!(close(event.deltas.0, recorded.deltas.0) && close(event.deltas.1, recorded.deltas.1));
        }
        assert_eq!(g, trace.final_graph);
    }

    #[test]
    fn batch_of_one_matches_single_run() {
        let cfg = GameConfig::homogeneous(5, 0.1, 1.0, 0.12).unwrap();
        let dyn_cfg = DynamicsConfig::defaults_for(5, 21);
        let batch = run_batch(&cfg, &dyn_cfg, 1).unwrap();
        let single = run_to_stability(&cfg, &dyn_cfg).unwrap().summary().unwrap();
        assert_eq!(batch, alloc::vec![single]);
    }
}
