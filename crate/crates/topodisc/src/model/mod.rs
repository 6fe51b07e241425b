//! Domain vocabulary shared by every other module: channels and channel
//! sets, topologies, scenarios, per-user knowledge, and hop decisions.
//!
//! All types here are immutable values after construction; they are safe to
//! share and send between threads, and knowledge merging produces new states
//! rather than mutating inputs.

mod channel_set;
mod knowledge;
mod scenario;
mod topology;

pub use channel_set::{intersect_all, Channel, ChannelSet};
pub use knowledge::KnowledgeState;
pub use scenario::Scenario;
pub use topology::{normalized_edge, Edge, Topology, UserId};

use thiserror::Error;

/// What a user does with its radio in one slot: tune a channel from its own
/// availability set, or stay idle. Only the basic sweep ever goes idle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HopDecision {
    Tune(Channel),
    Idle,
}

impl HopDecision {
    pub fn channel(&self) -> Option<Channel> {
        match self {
            HopDecision::Tune(c) => Some(*c),
            HopDecision::Idle => None,
        }
    }

    pub fn is_idle(&self) -> bool {
        matches!(self, HopDecision::Idle)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("channel set is empty")]
    EmptyChannelSet,
    #[error("channel label 0 is invalid; labels start at 1")]
    ZeroChannelLabel,
    #[error("empty collection of channel sets")]
    EmptySetList,
    #[error("empty collection of knowledge states")]
    EmptyStateList,
    #[error("conflicting channel sets recorded for user {user}")]
    ConflictingChannelSets { user: UserId },
    #[error("edge endpoint {user} is not a known user after merging")]
    UnknownEdgeEndpoint { user: UserId },
    #[error("a topology needs at least one user")]
    EmptyTopology,
    #[error("self-loop on user {user}")]
    SelfLoop { user: UserId },
    #[error("user {user} out of range for a {n_users}-user topology")]
    UserOutOfRange { user: UserId, n_users: usize },
    #[error("{sets} channel sets for {users} users")]
    ChannelSetCountMismatch { sets: usize, users: usize },
    #[error("user {user} has an empty channel set")]
    EmptyUserSet { user: UserId },
    #[error("channel {channel} exceeds the global count {n_channels}")]
    ChannelOutOfRange { channel: Channel, n_channels: Channel },
    #[error("common set is not contained in user {user}'s channel set")]
    CommonSetNotShared { user: UserId },
}
