use std::collections::{btree_map::Entry, BTreeMap, BTreeSet};

use super::{ChannelSet, Edge, ModelError, Scenario, UserId};

/// What a single user currently knows about the network: the users it has
/// heard of (with their availability sets) and the edges it has confirmed
/// between them.
///
/// States are immutable values. A user's knowledge only ever grows, and it
/// grows exclusively through [`KnowledgeState::merge`], which unions the
/// inputs rather than mutating them — so states can be shared freely (e.g.
/// behind an `Arc`) between all members of a co-channel group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeState {
    known_users: BTreeMap<UserId, ChannelSet>,
    known_edges: BTreeSet<Edge>,
}

impl KnowledgeState {
    /// The state a user starts from: it knows itself, its own channel set,
    /// and no edges.
    pub fn initial(owner: UserId, own_set: ChannelSet) -> Self {
        let mut known_users = BTreeMap::new();
        known_users.insert(owner, own_set);
        Self {
            known_users,
            known_edges: BTreeSet::new(),
        }
    }

    pub fn known_users(&self) -> &BTreeMap<UserId, ChannelSet> {
        &self.known_users
    }

    pub fn known_edges(&self) -> &BTreeSet<Edge> {
        &self.known_edges
    }

    pub fn n_known_users(&self) -> usize {
        self.known_users.len()
    }

    pub fn n_known_edges(&self) -> usize {
        self.known_edges.len()
    }

    pub fn knows_user(&self, user: UserId) -> bool {
        self.known_users.contains_key(&user)
    }

    pub fn channel_sets(&self) -> impl Iterator<Item = &ChannelSet> {
        self.known_users.values()
    }

    /// Unions a group of states into one, adding the edges the group just
    /// observed.
    ///
    /// `known_users` of the result is the union of the input maps;
    /// `known_edges` is the union of the input edge sets plus `new_edges`.
    /// Merging is idempotent, commutative and associative.
    ///
    /// Two inputs recording *different* channel sets for the same user can
    /// only happen through a bug (channel sets are static), and yield an
    /// integrity error. Endpoints of `new_edges` must be known after the
    /// union — each member of a communicating group contributes at least its
    /// own record.
    pub fn merge(states: &[&KnowledgeState], new_edges: &BTreeSet<Edge>) -> Result<Self, ModelError> {
        // Seed the result from the widest input to minimize re-insertion.
        let base = states
            .iter()
            .enumerate()
            .max_by_key(|(_, s)| s.known_users.len())
            .map(|(i, _)| i)
            .ok_or(ModelError::EmptyStateList)?;

        let mut known_users = states[base].known_users.clone();
        let mut known_edges = states[base].known_edges.clone();
        for (i, state) in states.iter().enumerate() {
            if i == base {
                continue;
            }
            for (&user, set) in &state.known_users {
                match known_users.entry(user) {
                    Entry::Vacant(e) => {
                        e.insert(set.clone());
                    }
                    Entry::Occupied(e) => {
                        // Backing-pointer check first: in a run all copies of a
                        // user's set alias the scenario's allocation.
                        if !e.get().shares_backing(set) && e.get() != set {
                            return Err(ModelError::ConflictingChannelSets { user });
                        }
                    }
                }
            }
            known_edges.extend(state.known_edges.iter().copied());
        }

        for &(a, b) in new_edges {
            for endpoint in [a, b] {
                if !known_users.contains_key(&endpoint) {
                    return Err(ModelError::UnknownEdgeEndpoint { user: endpoint });
                }
            }
            known_edges.insert((a, b));
        }

        Ok(Self {
            known_users,
            known_edges,
        })
    }

    /// True when this state captures the whole scenario: every user is known
    /// with exactly its scenario channel set, and the known edges equal the
    /// scenario edge set.
    ///
    /// A one-user scenario is complete from the initial state onwards: the
    /// user knows itself and there are no edges to learn.
    pub fn is_complete(&self, scenario: &Scenario) -> bool {
        self.known_users.len() == scenario.n_users()
            && self
                .known_users
                .iter()
                .all(|(&user, set)| set == scenario.channel_set(user))
            && self.known_edges == *scenario.topology().edges()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Topology;

    fn cs(xs: &[u16]) -> ChannelSet {
        ChannelSet::new(xs.to_vec()).unwrap()
    }

    fn edges(pairs: &[(usize, usize)]) -> BTreeSet<Edge> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn merge_singleton_is_identity() {
        let k = KnowledgeState::initial(0, cs(&[1, 2]));
        let merged = KnowledgeState::merge(&[&k], &BTreeSet::new()).unwrap();
        assert_eq!(merged, k);
    }

    #[test]
    fn merge_two_adjacent_users() {
        // Two users on the same channel, adjacent: both end up knowing both
        // channel sets and the edge between them.
        let a = KnowledgeState::initial(0, cs(&[1, 2]));
        let b = KnowledgeState::initial(1, cs(&[2, 3]));
        let merged = KnowledgeState::merge(&[&a, &b], &edges(&[(0, 1)])).unwrap();
        assert_eq!(merged.n_known_users(), 2);
        assert_eq!(merged.known_users()[&0], cs(&[1, 2]));
        assert_eq!(merged.known_users()[&1], cs(&[2, 3]));
        assert_eq!(merged.known_edges(), &edges(&[(0, 1)]));
    }

    #[test]
    fn merge_carries_transitive_knowledge() {
        // User 1 already knows user 2 (and edge (1,2)); when user 0 merges
        // with user 1, it learns user 2 and the edge without meeting user 2.
        let k0 = KnowledgeState::initial(0, cs(&[1]));
        let k1 = {
            let a = KnowledgeState::initial(1, cs(&[1, 2]));
            let b = KnowledgeState::initial(2, cs(&[2]));
            KnowledgeState::merge(&[&a, &b], &edges(&[(1, 2)])).unwrap()
        };
        let merged = KnowledgeState::merge(&[&k0, &k1], &edges(&[(0, 1)])).unwrap();
        assert!(merged.knows_user(2));
        assert!(merged.known_edges().contains(&(1, 2)));
        assert!(merged.known_edges().contains(&(0, 1)));
    }

    #[test]
    fn merge_is_commutative_and_idempotent() {
        let a = KnowledgeState::initial(0, cs(&[1]));
        let b = KnowledgeState::initial(1, cs(&[1, 4]));
        let e = edges(&[(0, 1)]);
        let ab = KnowledgeState::merge(&[&a, &b], &e).unwrap();
        let ba = KnowledgeState::merge(&[&b, &a], &e).unwrap();
        assert_eq!(ab, ba);
        let again = KnowledgeState::merge(&[&ab, &ab], &e).unwrap();
        assert_eq!(again, ab);
    }

    #[test]
    fn conflicting_records_are_an_integrity_error() {
        let a = KnowledgeState::initial(0, cs(&[1]));
        let imposter = KnowledgeState::initial(0, cs(&[2]));
        assert_eq!(
            KnowledgeState::merge(&[&a, &imposter], &BTreeSet::new()),
            Err(ModelError::ConflictingChannelSets { user: 0 })
        );
    }

    #[test]
    fn unknown_edge_endpoint_is_rejected() {
        let a = KnowledgeState::initial(0, cs(&[1]));
        assert_eq!(
            KnowledgeState::merge(&[&a], &edges(&[(0, 5)])),
            Err(ModelError::UnknownEdgeEndpoint { user: 5 })
        );
    }

    #[test]
    fn empty_state_list_is_rejected() {
        assert_eq!(
            KnowledgeState::merge(&[], &BTreeSet::new()),
            Err(ModelError::EmptyStateList)
        );
    }

    #[test]
    fn completeness_for_single_user_scenario() {
        let scenario = Scenario::new(
            4,
            Topology::new(1, []).unwrap(),
            vec![cs(&[1, 2])],
            cs(&[1]),
        )
        .unwrap();
        let state = KnowledgeState::initial(0, cs(&[1, 2]));
        assert!(state.is_complete(&scenario));
    }

    #[test]
    fn completeness_requires_every_edge() {
        let scenario = Scenario::new(
            4,
            Topology::new(3, [(0, 1), (1, 2)]).unwrap(),
            vec![cs(&[1]), cs(&[1]), cs(&[1])],
            cs(&[1]),
        )
        .unwrap();
        let all = [
            KnowledgeState::initial(0, cs(&[1])),
            KnowledgeState::initial(1, cs(&[1])),
            KnowledgeState::initial(2, cs(&[1])),
        ];
        let refs: Vec<&KnowledgeState> = all.iter().collect();

        // All users known, one edge missing: not complete.
        let partial = KnowledgeState::merge(&refs, &edges(&[(0, 1)])).unwrap();
        assert!(!partial.is_complete(&scenario));

        let full = KnowledgeState::merge(&refs, &edges(&[(0, 1), (1, 2)])).unwrap();
        assert!(full.is_complete(&scenario));
    }
}
