use std::collections::BTreeSet;

use super::ModelError;

/// User identifier, `0..K`.
pub type UserId = usize;

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (UserId, UserId);

/// Normalizes an unordered user pair into the canonical edge form.
pub fn normalized_edge(a: UserId, b: UserId) -> Edge {
    debug_assert_ne!(a, b, "self-loops are not edges");
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected communication graph over the secondary users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n_users: usize,
    edges: BTreeSet<Edge>,
}

impl Topology {
    /// Builds a topology over `n_users` vertices. Edges are normalized;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn new(
        n_users: usize,
        edges: impl IntoIterator<Item = (UserId, UserId)>,
    ) -> Result<Self, ModelError> {
        if n_users == 0 {
            return Err(ModelError::EmptyTopology);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(ModelError::SelfLoop { user: a });
            }
            let max = a.max(b);
            if max >= n_users {
                return Err(ModelError::UserOutOfRange { user: max, n_users });
            }
            set.insert(normalized_edge(a, b));
        }
        Ok(Self {
            n_users,
            edges: set,
        })
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: UserId, b: UserId) -> bool {
        a != b && self.edges.contains(&normalized_edge(a, b))
    }

    /// Neighbor lists, ascending per user.
    pub fn adjacency(&self) -> Vec<Vec<UserId>> {
        let mut adj = vec![Vec::new(); self.n_users];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Row-major boolean adjacency matrix; constant-time edge lookups for
    /// the slot loop.
    pub fn adjacency_matrix(&self) -> Vec<bool> {
        let n = self.n_users;
        let mut m = vec![false; n * n];
        for &(a, b) in &self.edges {
            m[a * n + b] = true;
            m[b * n + a] = true;
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_users];
        let mut queue = std::collections::VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n_users
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_normalized() {
        let t = Topology::new(3, [(2, 0), (1, 2)]).unwrap();
        assert!(t.has_edge(0, 2));
        assert!(t.has_edge(2, 1));
        assert!(!t.has_edge(0, 1));
        assert_eq!(t.edge_count(), 2);
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(
            Topology::new(2, [(1, 1)]),
            Err(ModelError::SelfLoop { user: 1 })
        );
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(
            Topology::new(2, [(0, 2)]),
            Err(ModelError::UserOutOfRange { user: 2, n_users: 2 })
        );
    }

    #[test]
    fn single_user_is_connected() {
        assert!(Topology::new(1, []).unwrap().is_connected());
    }

    #[test]
    fn path_is_connected_but_split_is_not() {
        assert!(Topology::new(3, [(0, 1), (1, 2)]).unwrap().is_connected());
        assert!(!Topology::new(3, [(0, 1)]).unwrap().is_connected());
        assert!(!Topology::new(4, [(0, 1), (2, 3)]).unwrap().is_connected());
    }
}
