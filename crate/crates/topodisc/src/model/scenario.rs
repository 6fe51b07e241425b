use super::{Channel, ChannelSet, ModelError, Topology, UserId};

/// One sampled world: a topology, every user's availability set, and the
/// designated set of channels available to everyone.
///
/// Structural invariants are checked at construction: set counts match the
/// topology, every user has at least one channel, all labels fit in
/// `1..=n_channels`, and the common set is contained in every user's set.
/// Connectivity is *not* checked here; see
/// [`crate::scenario::validate_scenario`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    n_channels: Channel,
    topology: Topology,
    channel_sets: Vec<ChannelSet>,
    common_set: ChannelSet,
}

impl Scenario {
    pub fn new(
        n_channels: Channel,
        topology: Topology,
        channel_sets: Vec<ChannelSet>,
        common_set: ChannelSet,
    ) -> Result<Self, ModelError> {
        if channel_sets.len() != topology.n_users() {
            return Err(ModelError::ChannelSetCountMismatch {
                sets: channel_sets.len(),
                users: topology.n_users(),
            });
        }
        if common_set.is_empty() {
            return Err(ModelError::EmptyChannelSet);
        }
        for (user, set) in channel_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(ModelError::EmptyUserSet { user });
            }
            if let Some(max) = set.max_label() {
                if max > n_channels {
                    return Err(ModelError::ChannelOutOfRange {
                        channel: max,
                        n_channels,
                    });
                }
            }
            if !common_set.is_subset_of(set) {
                return Err(ModelError::CommonSetNotShared { user });
            }
        }
        if common_set.max_label().unwrap_or(0) > n_channels {
            return Err(ModelError::ChannelOutOfRange {
                channel: common_set.max_label().unwrap(),
                n_channels,
            });
        }
        Ok(Self {
            n_channels,
            topology,
            channel_sets,
            common_set,
        })
    }

    pub fn n_channels(&self) -> Channel {
        self.n_channels
    }

    pub fn n_users(&self) -> usize {
        self.topology.n_users()
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn channel_sets(&self) -> impl Iterator<Item = &ChannelSet> {
        self.channel_sets.iter()
    }

    pub fn channel_set(&self, user: UserId) -> &ChannelSet {
        &self.channel_sets[user]
    }

    pub fn common_set(&self) -> &ChannelSet {
        &self.common_set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(xs: &[u16]) -> ChannelSet {
        ChannelSet::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn construction_checks_set_count() {
        let t = Topology::new(2, [(0, 1)]).unwrap();
        assert_eq!(
            Scenario::new(4, t, vec![cs(&[1])], cs(&[1])),
            Err(ModelError::ChannelSetCountMismatch { sets: 1, users: 2 })
        );
    }

    #[test]
    fn construction_rejects_labels_beyond_n() {
        let t = Topology::new(1, []).unwrap();
        assert_eq!(
            Scenario::new(4, t, vec![cs(&[1, 9])], cs(&[1])),
            Err(ModelError::ChannelOutOfRange {
                channel: 9,
                n_channels: 4
            })
        );
    }

    #[test]
    fn construction_requires_common_subset() {
        let t = Topology::new(2, [(0, 1)]).unwrap();
        assert_eq!(
            Scenario::new(4, t, vec![cs(&[1, 2]), cs(&[2, 3])], cs(&[1])),
            Err(ModelError::CommonSetNotShared { user: 1 })
        );
    }

    #[test]
    fn valid_scenario_constructs() {
        let t = Topology::new(2, [(0, 1)]).unwrap();
        let s = Scenario::new(4, t, vec![cs(&[1, 2]), cs(&[2, 3])], cs(&[2])).unwrap();
        assert_eq!(s.n_users(), 2);
        assert_eq!(s.channel_set(1), &cs(&[2, 3]));
    }
}
