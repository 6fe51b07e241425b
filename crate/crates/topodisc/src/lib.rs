//! Deterministic, seed-reproducible simulator and analysis toolkit for the
//! multichannel topology discovery problem in cognitive radio networks.
//!
//! A set of secondary users, each restricted to the channels left free by
//! nearby primary users, hops across channels in synchronized slots. Users
//! that land on the same channel and form a connected subgraph of the
//! communication graph exchange everything they know; discovery is complete
//! when every user has reconstructed the whole topology and every channel
//! set. This crate samples such worlds, runs six channel-hopping rules under
//! those knowledge-merge semantics, and reproduces the expected and maximum
//! time-to-discovery comparisons along with the supporting analysis.
//!
//! Modules:
//!
//! * [`model`] — channels, topologies, scenarios, knowledge states.
//! * [`scenario`] — random scenario sampling and validation.
//! * [`hop`] — the channel-selection rules.
//! * [`engine`] — slot-synchronous execution, discovery and rendezvous
//!   times, pair simulations.
//! * [`analytics`] — closed-form oracles: first-success times of a two-state
//!   chain, lag-1 correlation, ring decomposition, expected
//!   time-to-rendezvous.
//! * [`harness`] — experiment configs, batch execution, CSV/SVG emission,
//!   verification suites.
//! * [`seeding`] — deterministic seed derivation.
//!
//! The `examples/` directory has one runnable walkthrough per capability;
//! start with `single_discovery_run`. A thin `topodisc` binary wraps the
//! harness (`gen`, `run`, `verify`, `plot`).

pub mod analytics;
pub mod engine;
pub mod harness;
pub mod hop;
pub mod model;
pub mod scenario;
pub mod seeding;

pub use engine::{
    connected_components, pair_time_to_rendezvous, run_discovery, run_pair_indicators, step,
    EngineConfig, RunResult, TimeToEvent,
};
pub use hop::{AlgorithmSpec, Permutation};
pub use model::{
    Channel, ChannelSet, Edge, HopDecision, KnowledgeState, Scenario, Topology, UserId,
};
pub use scenario::{
    assign_channels, generate_scenario, generate_topology, validate_scenario, ScenarioParams,
};
