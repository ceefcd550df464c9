//! Strategic network formation where players trade Katz centrality against
//! per-link costs.
//!
//! The crate is `no_std` (it needs `alloc`). It covers the undirected graph
//! type, exact Katz centrality and its component-scaled variant, the player
//! payoff model, closed-form centrality values and stability thresholds for
//! complete and star graphs, and the randomized bilateral-add /
//! unilateral-delete dynamics together with an exhaustive pairwise-stability
//! checker. File formats and the command line live in the `netgame` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closed_form;
pub mod dynamics;
mod error;
pub mod graph;
mod incremental;
pub mod katz;
mod linalg;
pub mod payoff;

pub use closed_form::{StarWindow, VerificationReport};
pub use dynamics::{
    DynamicsConfig, Move, ProposalAction, ProposalEvent, RunSummary, SimulationTrace,
    StabilityCertificate, Witness,
};
pub use error::{Error, Result};
pub use graph::{ComponentLabeling, Graph, SpectralRadius};
pub use katz::CentralityReport;
pub use payoff::{GameConfig, PayoffReport};
